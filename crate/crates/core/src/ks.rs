//! Kochen-Specker style value assignments.
//!
//! An instance is a list of dichotomic observables plus contexts: sets of
//! pairwise commuting observables whose product is `sign * I`. A
//! noncontextual assignment gives each observable one value in `{-1, +1}`
//! such that, in every context, the product of the values equals the sign.
//! Observables are indexed from 0; search order treats index 0 as the most
//! significant position and `+1` as smaller than `-1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, EPS_MAT, EPS_SPECTRAL};
use crate::outcome::Outcome;
use crate::quantum::{two_qubit, Axis, Observable};

/// Exhaustive search refuses instances with more observables than this.
pub const MAX_SEARCH_OBSERVABLES: usize = 24;

/// Highest polynomial degree accepted by [`functional_rule_check`].
pub const MAX_POLY_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub members: Vec<usize>,
    pub sign: Outcome,
}

#[derive(Debug, Clone)]
pub struct KSInstance {
    observables: Vec<Observable>,
    contexts: Vec<Context>,
}

impl KSInstance {
    /// Rejects contexts that reference missing observables. The quantum
    /// constraints themselves are checked by [`verify_instance`].
    pub fn new(observables: Vec<Observable>, contexts: Vec<Context>) -> Result<Self> {
        for (k, ctx) in contexts.iter().enumerate() {
            if let Some(&bad) = ctx.members.iter().find(|&&m| m >= observables.len()) {
                return Err(Error::Instance(format!(
                    "context {k} references observable {bad}, but only {} exist",
                    observables.len()
                )));
            }
        }
        Ok(Self { observables, contexts })
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    /// Product of all context signs.
    pub fn sign_product(&self) -> Outcome {
        self.contexts.iter().fold(Outcome::Plus, |acc, ctx| acc * ctx.sign)
    }

    /// Number of context slots each observable occupies.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut counts = vec![0; self.observables.len()];
        for ctx in &self.contexts {
            for &m in &ctx.members {
                counts[m] += 1;
            }
        }
        counts
    }

    /// Parity certificate: if every observable occurs an even number of times,
    /// any assignment makes the product of all context values `+1`, so a sign
    /// product of `-1` rules out every assignment.
    pub fn parity_obstruction(&self) -> bool {
        self.occurrences().iter().all(|n| n % 2 == 0) && self.sign_product() == Outcome::Minus
    }

    /// Number of violated contexts under `assignment`.
    pub fn violations(&self, assignment: &KSAssignment) -> usize {
        self.contexts
            .iter()
            .filter(|ctx| ctx.members.iter().fold(Outcome::Plus, |acc, &m| acc * assignment.values[m]) != ctx.sign)
            .count()
    }

    pub fn from_document(doc: InstanceDocument) -> Result<Self> {
        let observables = doc
            .observables
            .into_iter()
            .map(|o| Observable::new(o.label, o.matrix.into_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        let contexts = doc.contexts.into_iter().map(|c| Context { members: c.members, sign: c.sign }).collect();
        Self::new(observables, contexts)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            observables: self
                .observables
                .iter()
                .map(|o| ObservableDocument {
                    label: o.label().to_string(),
                    matrix: MatrixDocument::Flat(o.matrix().entries().iter().map(|z| [z.re, z.im]).collect()),
                })
                .collect(),
            contexts: self
                .contexts
                .iter()
                .map(|c| ContextDocument { members: c.members.clone(), sign: c.sign })
                .collect(),
        }
    }
}

/// JSON form: `{"observables": [{"label", "matrix"}], "contexts": [{"members", "sign"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub observables: Vec<ObservableDocument>,
    pub contexts: Vec<ContextDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDocument {
    pub label: String,
    pub matrix: MatrixDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDocument {
    pub members: Vec<usize>,
    pub sign: Outcome,
}

/// Matrix entries as `[re, im]` pairs, either flat row-major or nested by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDocument {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

impl MatrixDocument {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        match self {
            MatrixDocument::Flat(entries) => {
                let dim = (entries.len() as f64).sqrt().round() as usize;
                ComplexMatrix::from_vec(dim, entries.iter().map(|[re, im]| c(*re, *im)).collect())
            }
            MatrixDocument::Rows(rows) => ComplexMatrix::from_rows(
                &rows.iter().map(|r| r.iter().map(|[re, im]| c(*re, *im)).collect()).collect::<Vec<_>>(),
            ),
        }
    }
}

/// The 3x3 Mermin-Peres square:
///
/// ```text
///   x.i   i.x   x.x      rows multiply to +I
///   i.y   y.i   y.y
///   x.y   y.x   z.z
///   (+I)  (+I)  (-I)     columns
/// ```
///
/// The third column is the relation `s1_z s2_z = -(s1_y s2_y)(s1_x s2_x)`.
pub fn mermin_peres_square() -> KSInstance {
    use Axis::{I, X, Y, Z};
    let grid = [(X, I), (I, X), (X, X), (I, Y), (Y, I), (Y, Y), (X, Y), (Y, X), (Z, Z)];
    let observables = grid.iter().map(|&(a, b)| two_qubit(a, b)).collect();
    let plus = Outcome::Plus;
    let contexts = vec![
        Context { members: vec![0, 1, 2], sign: plus },
        Context { members: vec![3, 4, 5], sign: plus },
        Context { members: vec![6, 7, 8], sign: plus },
        Context { members: vec![0, 3, 6], sign: plus },
        Context { members: vec![1, 4, 7], sign: plus },
        Context { members: vec![2, 5, 8], sign: Outcome::Minus },
    ];
    KSInstance::new(observables, contexts).expect("indices are in range")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextCheck {
    pub members: Vec<usize>,
    pub sign: Outcome,
    /// Every pair of members commutes within `EPS_MAT`.
    pub commuting: bool,
    /// Ordered product equals `sign * I` within `EPS_MAT`.
    pub product_matches: bool,
    /// Largest entrywise deviation of the product from `sign * I`.
    pub product_deviation: f64,
}

impl ContextCheck {
    pub fn passed(&self) -> bool {
        self.commuting && self.product_matches
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub contexts: Vec<ContextCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.contexts.iter().all(ContextCheck::passed)
    }

    pub fn failures(&self) -> usize {
        self.contexts.iter().filter(|c| !c.passed()).count()
    }
}

/// Checks every context's commutation and signed product on the quantum side.
pub fn verify_instance(instance: &KSInstance) -> Result<VerificationReport> {
    let mut checks = Vec::with_capacity(instance.contexts.len());
    for ctx in &instance.contexts {
        let mats: Vec<&ComplexMatrix> = ctx.members.iter().map(|&m| instance.observables[m].matrix()).collect();
        let Some(first) = mats.first() else {
            // Empty product is the identity; only a +1 sign is consistent,
            // but there is no dimension to compare against.
            checks.push(ContextCheck {
                members: vec![],
                sign: ctx.sign,
                commuting: true,
                product_matches: ctx.sign == Outcome::Plus,
                product_deviation: 0.0,
            });
            continue;
        };
        let dim = first.dim();
        let mut commuting = true;
        for (i, a) in mats.iter().enumerate() {
            for b in &mats[i + 1..] {
                commuting &= linalg::commutator(a, b)?.is_zero(EPS_MAT);
            }
        }
        let mut product = ComplexMatrix::identity(dim);
        for m in &mats {
            product = linalg::mat_mul(&product, m)?;
        }
        let target = ComplexMatrix::identity(dim).scale_real(ctx.sign.as_f64());
        let deviation = product.max_abs_diff(&target).expect("same dimension");
        checks.push(ContextCheck {
            members: ctx.members.clone(),
            sign: ctx.sign,
            commuting,
            product_matches: deviation <= EPS_MAT,
            product_deviation: deviation,
        });
    }
    Ok(VerificationReport { contexts: checks })
}

/// One value per observable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSAssignment {
    pub values: Vec<Outcome>,
}

impl KSAssignment {
    /// Decodes a search index: bit `n - 1 - i` set means observable `i` is `-1`.
    fn from_index(n: usize, index: u32) -> Self {
        let values =
            (0..n).map(|i| if index >> (n - 1 - i) & 1 == 1 { Outcome::Minus } else { Outcome::Plus }).collect();
        Self { values }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coloring {
    Found(KSAssignment),
    NoColoring { min_violations: usize, witness: KSAssignment },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub coloring: Coloring,
    pub searched: u64,
}

impl SearchOutcome {
    pub fn is_colorable(&self) -> bool {
        matches!(self.coloring, Coloring::Found(_))
    }
}

/// Exhaustive search over all `2^n` assignments.
///
/// Returns the first valid coloring in search order, or the minimum number of
/// violated contexts together with the first assignment attaining it.
pub fn find_coloring(instance: &KSInstance) -> Result<SearchOutcome> {
    let n = instance.observables.len();
    if n > MAX_SEARCH_OBSERVABLES {
        return Err(Error::InstanceTooLarge(n));
    }
    // A context is violated when the parity of its -1 members disagrees with
    // its sign. Repeated members cancel, hence XOR.
    let masks: Vec<(u32, u32)> = instance
        .contexts
        .iter()
        .map(|ctx| {
            let mask = ctx.members.iter().fold(0u32, |m, &i| m ^ (1 << (n - 1 - i)));
            (mask, u32::from(ctx.sign == Outcome::Minus))
        })
        .collect();

    let total = 1u64 << n;
    let mut best: Option<(usize, u32)> = None;
    for index in 0..total as u32 {
        let violated = masks.iter().filter(|&&(mask, odd)| (index & mask).count_ones() & 1 != odd).count();
        if violated == 0 {
            return Ok(SearchOutcome {
                coloring: Coloring::Found(KSAssignment::from_index(n, index)),
                searched: u64::from(index) + 1,
            });
        }
        if best.is_none_or(|(v, _)| violated < v) {
            best = Some((violated, index));
        }
    }
    let (min_violations, index) = best.expect("at least one assignment exists");
    Ok(SearchOutcome {
        coloring: Coloring::NoColoring { min_violations, witness: KSAssignment::from_index(n, index) },
        searched: total,
    })
}

/// Real polynomial `sum_k coeffs[k] x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Coefficients from the constant term upward.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        let degree = coeffs.len() - 1;
        if degree > MAX_POLY_DEGREE {
            return Err(Error::PolynomialDegree(degree));
        }
        Ok(Self { coeffs })
    }

    pub fn monomial(k: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    /// Horner evaluation on a matrix.
    pub fn eval_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(m.dim());
        self.coeffs.iter().rev().fold(ComplexMatrix::zeros(m.dim()), |acc, &a| &(&acc * m) + &id.scale_real(a))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalRuleReport {
    /// `g(value)`.
    pub required: f64,
    /// Spectrum of `g(A)`.
    pub spectrum: Vec<f64>,
    /// `value` is an eigenvalue of `A` and `g(value)` is an eigenvalue of
    /// `g(A)`, i.e. `g(f_A) = f_{g(A)}` can hold.
    pub holds: bool,
    /// `g(value)` lies outside `{-1, +1}`, so `f_{g(A)}` cannot be a
    /// dichotomic outcome.
    pub forces_nondichotomic: bool,
}

/// Tests the functional rule `g(f_A(w)) = f_{g(A)}(w)` for a candidate value.
///
/// `g(A)` is formed as a matrix polynomial; since `A` is dichotomic its
/// spectrum is `{g(+1), g(-1)}`, which is what the rule must match.
pub fn functional_rule_check(obs: &Observable, value: Outcome, g: &Polynomial) -> Result<FunctionalRuleReport> {
    if !obs.is_dichotomic() {
        return Err(Error::NotDichotomic(obs.label().to_string()));
    }
    let spectrum_a = obs.eigenvalues()?;
    let gm = g.eval_matrix(obs.matrix());
    let spectrum = linalg::hermitian_eigenvalues(&gm)?;
    let required = g.eval(value.as_f64());
    let close = |x: f64, y: f64| (x - y).abs() <= EPS_SPECTRAL * (1.0 + y.abs());
    let value_is_eigen = spectrum_a.iter().any(|&l| close(value.as_f64(), l));
    let holds = value_is_eigen && spectrum.iter().any(|&l| close(required, l));
    let forces_nondichotomic = !(close(required, 1.0) || close(required, -1.0));
    Ok(FunctionalRuleReport { required, spectrum, holds, forces_nondichotomic })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueEntanglementReport {
    pub zeta: Outcome,
    /// `f_xx * f_yy`, forced to `-zeta`.
    pub forced_product: Outcome,
    /// Admissible `(f_xx, f_yy)` pairs.
    pub admissible: Vec<(Outcome, Outcome)>,
    /// `(s1_y s2_y)(s1_x s2_x) == -(s1_z s2_z)` on the matrices.
    pub quantum_relation_holds: bool,
}

/// Fixes `f_zz = zeta` and enumerates the values of `f_xx`, `f_yy` allowed by
/// the context `{xx, yy, zz}` with product `-I`.
pub fn value_entanglement_demo(zeta: Outcome) -> ValueEntanglementReport {
    let xx = two_qubit(Axis::X, Axis::X);
    let yy = two_qubit(Axis::Y, Axis::Y);
    let zz = two_qubit(Axis::Z, Axis::Z);
    let quantum_relation_holds = (yy.matrix() * xx.matrix()).approx_eq(&-zz.matrix(), EPS_MAT);

    let instance = KSInstance::new(vec![xx, yy, zz], vec![Context { members: vec![0, 1, 2], sign: Outcome::Minus }])
        .expect("indices are in range");
    let mut admissible = Vec::new();
    for fxx in Outcome::BOTH {
        for fyy in Outcome::BOTH {
            let a = KSAssignment { values: vec![fxx, fyy, zeta] };
            if instance.violations(&a) == 0 {
                admissible.push((fxx, fyy));
            }
        }
    }
    ValueEntanglementReport { zeta, forced_product: -zeta, admissible, quantum_relation_holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Outcome::{Minus, Plus};

    #[test]
    fn square_constraints_hold() {
        let sq = mermin_peres_square();
        assert_eq!(sq.observables().len(), 9);
        assert_eq!(sq.contexts().len(), 6);
        let report = verify_instance(&sq).unwrap();
        assert!(report.passed());
        assert_eq!(report.failures(), 0);
        assert!(report.contexts.iter().all(|c| c.commuting && c.product_deviation <= EPS_MAT));
        assert_eq!(sq.sign_product(), Minus);
        assert!(sq.parity_obstruction());
    }

    #[test]
    fn flipped_row_sign_fails_that_context() {
        let sq = mermin_peres_square();
        let mut contexts = sq.contexts().to_vec();
        contexts[0].sign = Minus;
        let bad = KSInstance::new(sq.observables().to_vec(), contexts).unwrap();
        let report = verify_instance(&bad).unwrap();
        assert!(!report.contexts[0].product_matches);
        assert!(report.contexts[1..].iter().all(ContextCheck::passed));
    }

    #[test]
    fn empty_instance_passes_vacuously() {
        let inst = KSInstance::new(vec![], vec![]).unwrap();
        assert!(verify_instance(&inst).unwrap().passed());
        assert!(find_coloring(&inst).unwrap().is_colorable());
    }

    #[test]
    fn out_of_range_member() {
        let err = KSInstance::new(vec![two_qubit(Axis::Z, Axis::Z)], vec![Context { members: vec![1], sign: Plus }]);
        assert!(matches!(err, Err(Error::Instance(_))));
    }

    #[test]
    fn mixed_dimensions_in_context() {
        let inst = KSInstance::new(
            vec![two_qubit(Axis::Z, Axis::Z), crate::quantum::pauli(Axis::Z)],
            vec![Context { members: vec![0, 1], sign: Plus }],
        )
        .unwrap();
        assert_eq!(verify_instance(&inst).unwrap_err(), Error::Dimension(4, 2));
    }

    #[test]
    fn square_is_not_colorable() {
        let out = find_coloring(&mermin_peres_square()).unwrap();
        assert_eq!(out.searched, 512);
        match out.coloring {
            Coloring::NoColoring { min_violations, witness } => {
                assert_eq!(min_violations, 1);
                // all +1 violates only the negative column
                assert_eq!(witness.values, vec![Plus; 9]);
            }
            Coloring::Found(_) => panic!("square must not be colorable"),
        }
    }

    #[test]
    fn identity_context_is_colorable() {
        let id = Observable::new("I", ComplexMatrix::identity(4)).unwrap();
        let inst = KSInstance::new(vec![id], vec![Context { members: vec![0], sign: Plus }]).unwrap();
        assert!(verify_instance(&inst).unwrap().passed());
        let out = find_coloring(&inst).unwrap();
        assert_eq!(out.coloring, Coloring::Found(KSAssignment { values: vec![Plus] }));
    }

    #[test]
    fn single_relation_is_colorable() {
        let inst = KSInstance::new(
            vec![two_qubit(Axis::X, Axis::X), two_qubit(Axis::Y, Axis::Y), two_qubit(Axis::Z, Axis::Z)],
            vec![Context { members: vec![0, 1, 2], sign: Minus }],
        )
        .unwrap();
        assert!(verify_instance(&inst).unwrap().passed());
        let out = find_coloring(&inst).unwrap();
        assert_eq!(out.coloring, Coloring::Found(KSAssignment { values: vec![Plus, Plus, Minus] }));
    }

    #[test]
    fn too_large() {
        let obs = vec![two_qubit(Axis::Z, Axis::I); 25];
        let inst = KSInstance::new(obs, vec![]).unwrap();
        assert_eq!(find_coloring(&inst).unwrap_err(), Error::InstanceTooLarge(25));
    }

    #[test]
    fn functional_rule() {
        let z = crate::quantum::pauli(Axis::Z);
        let sq = functional_rule_check(&z, Minus, &Polynomial::monomial(2).unwrap()).unwrap();
        assert!(sq.holds && !sq.forces_nondichotomic);
        assert_eq!(sq.required, 1.0);
        let cube = functional_rule_check(&z, Minus, &Polynomial::monomial(3).unwrap()).unwrap();
        assert!(cube.holds && cube.required == -1.0);
        let proj = functional_rule_check(&z, Minus, &Polynomial::new(vec![0.5, 0.5]).unwrap()).unwrap();
        assert_eq!(proj.required, 0.0);
        assert!(proj.forces_nondichotomic);
        assert!(proj.spectrum.iter().zip([0.0, 1.0]).all(|(a, b)| (a - b).abs() < EPS_SPECTRAL));
    }

    #[test]
    fn functional_rule_detects_impossible_value() {
        let id = Observable::new("I", ComplexMatrix::identity(2)).unwrap();
        let r = functional_rule_check(&id, Minus, &Polynomial::monomial(1).unwrap()).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn functional_rule_requires_dichotomic() {
        let h = Observable::new("2z", Axis::Z.matrix().scale_real(2.0)).unwrap();
        let err = functional_rule_check(&h, Plus, &Polynomial::monomial(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotDichotomic(_)));
        assert!(matches!(Polynomial::monomial(9), Err(Error::PolynomialDegree(9))));
    }

    #[test]
    fn value_entanglement() {
        let r = value_entanglement_demo(Plus);
        assert_eq!(r.forced_product, Minus);
        assert_eq!(r.admissible, vec![(Plus, Minus), (Minus, Plus)]);
        assert!(r.quantum_relation_holds);
        let r = value_entanglement_demo(Minus);
        assert_eq!(r.forced_product, Plus);
        assert_eq!(r.admissible, vec![(Plus, Plus), (Minus, Minus)]);
    }

    #[test]
    fn document_round_trip() {
        let sq = mermin_peres_square();
        let back = KSInstance::from_document(sq.to_document()).unwrap();
        assert_eq!(back.contexts(), sq.contexts());
        for (a, b) in back.observables().iter().zip(sq.observables()) {
            assert_eq!(a.label(), b.label());
            assert!(a.matrix().approx_eq(b.matrix(), 0.0));
        }
    }
}
