//! Finite local hidden variable models for the CHSH scenario.
//!
//! A model is a finite sample space with normalized weights (the sigma-algebra
//! is the full power set) and a response table assigning every setting label
//! a value in `{-1, +1}` at every point. Joint responses factorize pointwise:
//! `f_{a b}(w) = f_a(w) f_b(w)`.
//!
//! Setting labels: `a1`, `a2` for party 1 (`sigma^1_x`, `sigma^1_y`) and
//! `b1`, `b2` for party 2 (`sigma^2_x`, `sigma^2_y`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::quantum;

pub const LABELS: [&str; 4] = ["a1", "a2", "b1", "b2"];

/// Normalization tolerance for sample-space weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Finite sample space `Omega` with weights `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpace {
    points: Vec<String>,
    weights: Vec<f64>,
}

impl SampleSpace {
    pub fn new(points: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Model("sample space has no points".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::Model(format!("{} points but {} weights", points.len(), weights.len())));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::Model(format!("duplicate point '{p}'")));
            }
        }
        if let Some((p, w)) = points.iter().zip(&weights).find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Model(format!("weight {w} of point '{p}' is not a non-negative number")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Model(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { points, weights })
    }

    /// Single point carrying all the mass.
    pub fn point(id: impl Into<String>) -> Self {
        Self { points: vec![id.into()], weights: vec![1.0] }
    }

    pub fn uniform(points: Vec<String>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let n = points.len();
        Self::new(points, vec![w; n])
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.points.iter().map(String::as_str).zip(self.weights.iter().copied())
    }
}

/// Response functions `f_A(w)`, keyed by label then point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AssignmentTable(BTreeMap<String, BTreeMap<String, Outcome>>);

impl AssignmentTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: &str, point: &str, value: Outcome) {
        self.0.entry(label.to_string()).or_default().insert(point.to_string(), value);
    }

    pub fn with(mut self, label: &str, point: &str, value: Outcome) -> Self {
        self.set(label, point, value);
        self
    }

    pub fn get(&self, label: &str, point: &str) -> Result<Outcome> {
        self.0
            .get(label)
            .and_then(|row| row.get(point))
            .copied()
            .ok_or_else(|| Error::UnknownObservable { label: label.into(), point: point.into() })
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// Checks the table is defined on every `label x point` pair.
    pub fn check_total<'a>(
        &self,
        labels: impl IntoIterator<Item = &'a str>,
        points: impl IntoIterator<Item = &'a str> + Clone,
    ) -> Result<()> {
        for label in labels {
            for point in points.clone() {
                self.get(label, point)?;
            }
        }
        Ok(())
    }
}

/// Deterministic response of the four settings at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    pub a1: Outcome,
    pub a2: Outcome,
    pub b1: Outcome,
    pub b2: Outcome,
}

impl Strategy {
    /// `V = a1 b1 - a1 b2 + a2 b1 + a2 b2` as an integer.
    pub fn chsh(&self) -> i32 {
        let (a1, a2, b1, b2) = (self.a1.value(), self.a2.value(), self.b1.value(), self.b2.value());
        a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2
    }

    pub fn lookup(table: &AssignmentTable, point: &str) -> Result<Self> {
        Ok(Self {
            a1: table.get("a1", point)?,
            a2: table.get("a2", point)?,
            b1: table.get("b1", point)?,
            b2: table.get("b2", point)?,
        })
    }

    pub fn write_to(&self, table: &mut AssignmentTable, point: &str) {
        table.set("a1", point, self.a1);
        table.set("a2", point, self.a2);
        table.set("b1", point, self.b1);
        table.set("b2", point, self.b2);
    }
}

/// All 16 deterministic strategies; `a1` is the most significant position and
/// `Plus` precedes `Minus`.
pub fn deterministic_strategies() -> Vec<Strategy> {
    (0u8..16)
        .map(|bits| {
            let o = |shift: u8| if bits >> shift & 1 == 0 { Outcome::Plus } else { Outcome::Minus };
            Strategy { a1: o(3), a2: o(2), b1: o(1), b2: o(0) }
        })
        .collect()
}

/// Either a single setting or a product of one setting per party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correlator<'a> {
    Single(&'a str),
    Product(&'a str, &'a str),
}

/// Finite realization of `(Omega, Sigma, mu)` with responses for `a1..b2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenVariableModel {
    space: SampleSpace,
    table: AssignmentTable,
}

impl HiddenVariableModel {
    pub fn new(space: SampleSpace, table: AssignmentTable) -> Result<Self> {
        table.check_total(LABELS, space.points().iter().map(String::as_str))?;
        Ok(Self { space, table })
    }

    /// Model concentrated on one deterministic strategy.
    pub fn deterministic(strategy: Strategy) -> Self {
        let mut table = AssignmentTable::new();
        strategy.write_to(&mut table, "w0");
        Self { space: SampleSpace::point("w0"), table }
    }

    /// Weighted mixture of the given strategies, one point per strategy.
    pub fn mixture(strategies: &[Strategy], weights: Vec<f64>) -> Result<Self> {
        let points: Vec<String> = (0..strategies.len()).map(|k| format!("w{k}")).collect();
        let mut table = AssignmentTable::new();
        for (s, p) in strategies.iter().zip(&points) {
            s.write_to(&mut table, p);
        }
        Self::new(SampleSpace::new(points, weights)?, table)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn table(&self) -> &AssignmentTable {
        &self.table
    }

    /// Parses the JSON model document
    /// `{"points": [...], "weights": [...], "table": {label: {point: +-1}}}`.
    pub fn from_document(doc: ModelDocument) -> Result<Self> {
        let space = SampleSpace::new(doc.points, doc.weights)?;
        if let Some(extra) = doc.table.labels().find(|l| !LABELS.contains(l)) {
            return Err(Error::Model(format!("unexpected label '{extra}', expected a1, a2, b1, b2")));
        }
        Self::new(space, doc.table)
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            points: self.space.points.clone(),
            weights: self.space.weights.clone(),
            table: self.table.clone(),
        }
    }

    /// `E(A) = sum_w mu(w) f_A(w)`, or the pointwise product for a correlator.
    pub fn expectation(&self, corr: Correlator<'_>) -> Result<f64> {
        self.space.iter().try_fold(0.0, |acc, (point, weight)| {
            let value = match corr {
                Correlator::Single(a) => self.table.get(a, point)?,
                Correlator::Product(a, b) => self.table.get(a, point)? * self.table.get(b, point)?,
            };
            Ok(acc + weight * value.as_f64())
        })
    }

    /// The four correlations `<a1b1>, <a1b2>, <a2b1>, <a2b2>`.
    pub fn correlations(&self) -> Result<[f64; 4]> {
        let e = |a, b| self.expectation(Correlator::Product(a, b));
        Ok([e("a1", "b1")?, e("a1", "b2")?, e("a2", "b1")?, e("a2", "b2")?])
    }

    /// `<a1b1> - <a1b2> + <a2b1> + <a2b2>`, equal to `sum_w mu(w) V(w)`.
    pub fn chsh(&self) -> Result<f64> {
        let [e11, e12, e21, e22] = self.correlations()?;
        Ok(e11 - e12 + e21 + e22)
    }

    /// `sum_w mu(w) V(w)` computed pointwise through [`chsh_v`].
    pub fn average_v(&self) -> Result<f64> {
        self.space.iter().try_fold(0.0, |acc, (point, weight)| Ok(acc + weight * chsh_v(point, &self.table)?))
    }
}

/// On-disk form of a [`HiddenVariableModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub points: Vec<String>,
    pub weights: Vec<f64>,
    pub table: AssignmentTable,
}

/// Shorthand for [`HiddenVariableModel::expectation`].
pub fn lhv_expectation(model: &HiddenVariableModel, corr: Correlator<'_>) -> Result<f64> {
    model.expectation(corr)
}

/// Responses at two (possibly equal) sample points: the x settings `a1`, `b1`
/// are read at `omega_t1`, the y settings `a2`, `b2` at `omega_t2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTimeStrategy {
    pub omega_t1: String,
    pub omega_t2: String,
    pub table: AssignmentTable,
}

impl TwoTimeStrategy {
    pub fn new(omega_t1: impl Into<String>, omega_t2: impl Into<String>, table: AssignmentTable) -> Result<Self> {
        let s = Self { omega_t1: omega_t1.into(), omega_t2: omega_t2.into(), table };
        s.table.check_total(LABELS, [s.omega_t1.as_str(), s.omega_t2.as_str()])?;
        Ok(s)
    }

    /// Bell locality: both times share one sample point.
    pub fn is_local(&self) -> bool {
        self.omega_t1 == self.omega_t2
    }
}

/// `U(w1, w2) = f_a1(w1) f_b1(w1) - f_a1(w1) f_b2(w2) + f_a2(w2) f_b1(w1) + f_a2(w2) f_b2(w2)`.
pub fn chsh_u(strategy: &TwoTimeStrategy) -> Result<f64> {
    chsh_u_at(&strategy.table, &strategy.omega_t1, &strategy.omega_t2)
}

/// [`chsh_u`] on a borrowed table.
pub fn chsh_u_at(table: &AssignmentTable, t1: &str, t2: &str) -> Result<f64> {
    let f = |label, point| table.get(label, point).map(Outcome::value);
    let (a1, b1) = (f("a1", t1)?, f("b1", t1)?);
    let (a2, b2) = (f("a2", t2)?, f("b2", t2)?);
    Ok(f64::from(a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2))
}

/// `V(w) = U(w, w)`.
pub fn chsh_v(point: &str, table: &AssignmentTable) -> Result<f64> {
    Ok(f64::from(Strategy::lookup(table, point)?.chsh()))
}

/// Result of enumerating the 16 deterministic strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSummary {
    pub strategies: usize,
    pub max: f64,
    pub min: f64,
    pub attaining_max: usize,
    /// Every `V` lies in `{-2, +2}`.
    pub all_pm2: bool,
}

/// Enumerates every deterministic strategy. The CHSH functional is linear in
/// the weights, so its maximum over all finite models is attained at one of
/// these vertices.
pub fn enumerate_vertices() -> VertexSummary {
    let values: Vec<i32> = deterministic_strategies().iter().map(Strategy::chsh).collect();
    let max = *values.iter().max().expect("16 strategies");
    let min = *values.iter().min().expect("16 strategies");
    VertexSummary {
        strategies: values.len(),
        max: f64::from(max),
        min: f64::from(min),
        attaining_max: values.iter().filter(|&&v| v == max).count(),
        all_pm2: values.iter().all(|v| v.abs() == 2),
    }
}

/// Maximum of the CHSH expression over all local hidden variable models: 2.
pub fn max_chsh_lhv() -> f64 {
    enumerate_vertices().max
}

/// Result of enumerating every two-point response table.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTimeSummary {
    pub tables: usize,
    pub all_pm2: bool,
    /// `U(w, w)` agreed with `V(w)` at every point of every table.
    pub local_matches_v: bool,
}

/// Enumerates all `2^8` tables over the four labels at two distinct points and
/// evaluates `U(w1, w2)`, plus `U(w, w) == V(w)` at both points.
pub fn enumerate_two_time_tables() -> Result<TwoTimeSummary> {
    let strategies = deterministic_strategies();
    let mut tables = 0;
    let mut all_pm2 = true;
    let mut local_matches_v = true;
    let mut table = AssignmentTable::new();
    for s1 in &strategies {
        s1.write_to(&mut table, "w1");
        for s2 in &strategies {
            s2.write_to(&mut table, "w2");
            let u = chsh_u_at(&table, "w1", "w2")?;
            all_pm2 &= u.abs() == 2.0;
            for p in ["w1", "w2"] {
                let local = chsh_u_at(&table, p, p)?;
                local_matches_v &= local == chsh_v(p, &table)?;
            }
            tables += 1;
        }
    }
    Ok(TwoTimeSummary { tables, all_pm2, local_matches_v })
}

/// Quantum CHSH value of `state` under `settings` minus the local bound.
pub fn quantum_gap_for(state: &quantum::QuantumState, settings: &quantum::ChshSettings) -> Result<f64> {
    Ok(quantum::chsh_value(state, settings)? - max_chsh_lhv())
}

/// `2 sqrt 2 - 2`: the reference state with x/y settings against the local bound.
pub fn quantum_gap() -> f64 {
    quantum_gap_for(&quantum::reference_state(), &quantum::ChshSettings::pauli_xy())
        .expect("fixed two-qubit inputs have matching dimensions")
}
