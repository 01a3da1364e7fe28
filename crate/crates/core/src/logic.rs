//! Two-valued propositional logic for the consistency arguments around the
//! Bell theorem and the commutativity proposition.
//!
//! Quantified sentences ("for every t, psi, A, B ...") are treated as single
//! atoms: the case analysis assigns truth values to them as wholes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

pub fn atom(name: &str) -> Formula {
    assert!(!name.is_empty(), "atom names must be non-empty");
    Formula::Atom(name.to_string())
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    /// Conjunction of all formulas; the empty conjunction is not representable
    /// without constants, so `None` is returned for an empty input.
    pub fn all(formulas: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        formulas.into_iter().reduce(Formula::and)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn contains_implication(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Not(f) => f.contains_implication(),
            Formula::And(a, b) | Formula::Or(a, b) => a.contains_implication() || b.contains_implication(),
            Formula::Implies(..) => true,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(x) => write!(f, "~{x}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

pub type TruthAssignment = BTreeMap<String, bool>;

/// Classical evaluation. Disjunction follows the truth table
/// `11 -> 1, 10 -> 1, 01 -> 1, 00 -> 0`.
pub fn evaluate(formula: &Formula, assignment: &TruthAssignment) -> Result<bool> {
    Ok(match formula {
        Formula::Atom(a) => *assignment.get(a).ok_or_else(|| Error::UnboundAtom(a.clone()))?,
        Formula::Not(f) => !evaluate(f, assignment)?,
        Formula::And(a, b) => {
            let (x, y) = (evaluate(a, assignment)?, evaluate(b, assignment)?);
            x && y
        }
        Formula::Or(a, b) => {
            let (x, y) = (evaluate(a, assignment)?, evaluate(b, assignment)?);
            x || y
        }
        Formula::Implies(a, b) => {
            let (x, y) = (evaluate(a, assignment)?, evaluate(b, assignment)?);
            !x || y
        }
    })
}

/// Every assignment over `atoms`, in binary counting order with the first
/// atom most significant and `false` before `true`.
pub fn assignments(atoms: &BTreeSet<String>) -> impl Iterator<Item = TruthAssignment> + '_ {
    let n = atoms.len();
    assert!(n < 32, "too many atoms for exhaustive enumeration");
    (0u32..1 << n)
        .map(move |bits| atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> (n - 1 - i) & 1 == 1)).collect())
}

/// `(assignment, value)` for every assignment of the formula's atoms.
pub fn truth_table(formula: &Formula) -> Vec<(TruthAssignment, bool)> {
    let atoms = formula.atoms();
    assignments(&atoms)
        .map(|a| {
            let v = evaluate(formula, &a).expect("assignment covers every atom");
            (a, v)
        })
        .collect()
}

/// Same value under every assignment of the union of both atom sets.
pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    let mut atoms = f.atoms();
    atoms.extend(g.atoms());
    let same = assignments(&atoms).all(|a| evaluate(f, &a).ok() == evaluate(g, &a).ok());
    same
}

pub fn is_tautology(f: &Formula) -> bool {
    truth_table(f).iter().all(|(_, v)| *v)
}

/// Rewrites every `P -> Q` as `~P | Q`.
pub fn implication_as_disjunction(formula: &Formula) -> Formula {
    match formula {
        Formula::Atom(_) => formula.clone(),
        Formula::Not(f) => implication_as_disjunction(f).not(),
        Formula::And(a, b) => implication_as_disjunction(a).and(implication_as_disjunction(b)),
        Formula::Or(a, b) => implication_as_disjunction(a).or(implication_as_disjunction(b)),
        Formula::Implies(a, b) => implication_as_disjunction(a).not().or(implication_as_disjunction(b)),
    }
}

/// Atom names used by the case analysis.
pub mod atoms {
    /// The Bell theorem.
    pub const BELL_THEOREM: &str = "BT";
    /// Proposition C: `forall: ~B(psi) | K`.
    pub const PROPOSITION_C: &str = "C";
    /// `forall t, psi: ~B(psi)`.
    pub const NO_LOCAL_REALISM: &str = "NB";
    /// `forall t, psi, A, B: <F(A, B)> = 0`.
    pub const COMMUTATIVITY: &str = "K";
}

/// Value of an atom across every model of the constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    Forced(bool),
    Free,
}

impl Derived {
    pub fn forced(self) -> Option<bool> {
        match self {
            Derived::Forced(v) => Some(v),
            Derived::Free => None,
        }
    }
}

impl fmt::Display for Derived {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derived::Forced(true) => f.write_str("1"),
            Derived::Forced(false) => f.write_str("0"),
            Derived::Free => f.write_str("free"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub bell_theorem: bool,
    pub proposition_c: bool,
    /// `None` when the inputs are inconsistent.
    pub no_local_realism: Option<Derived>,
    pub commutativity: Option<Derived>,
    pub nb_or_k: Option<Derived>,
    pub consistent: bool,
    /// 1, 2 or 3 for the three analyzed cases.
    pub proposition: Option<u8>,
    pub analyzed: bool,
}

impl CaseReport {
    /// Human-readable conclusion, e.g. `[Bell theorem] & ~[Proposition C]`.
    pub fn conclusion(&self) -> String {
        let bt = if self.bell_theorem { "[Bell theorem]" } else { "~[Bell theorem]" };
        let c = if self.proposition_c { "[Proposition C]" } else { "~[Proposition C]" };
        format!("{bt} & {c}")
    }
}

/// The rules behind the three cases:
/// `NB <-> ~BT` (the Bell theorem holds exactly when local realism fails
/// for some state) and `C <-> (NB | K)` (the disjunctive form of
/// Proposition C).
pub fn case_rules() -> Formula {
    use atoms::*;
    let nb_iff_not_bt = atom(NO_LOCAL_REALISM)
        .implies(atom(BELL_THEOREM).not())
        .and(atom(BELL_THEOREM).not().implies(atom(NO_LOCAL_REALISM)));
    let disj = atom(NO_LOCAL_REALISM).or(atom(COMMUTATIVITY));
    let c_iff = atom(PROPOSITION_C).implies(disj.clone()).and(disj.implies(atom(PROPOSITION_C)));
    nb_iff_not_bt.and(c_iff)
}

/// Derives the values of `NB`, `K` and `NB | K` once `BT` and `C` are fixed,
/// by enumerating the models of [`case_rules`].
pub fn case_analysis(bell_theorem: bool, proposition_c: bool) -> CaseReport {
    use atoms::*;
    let rules = case_rules();
    let disj = atom(NO_LOCAL_REALISM).or(atom(COMMUTATIVITY));
    let models: Vec<TruthAssignment> = assignments(&rules.atoms())
        .filter(|a| a[BELL_THEOREM] == bell_theorem && a[PROPOSITION_C] == proposition_c)
        .filter(|a| evaluate(&rules, a).expect("total assignment"))
        .collect();

    let derive = |f: &Formula| -> Option<Derived> {
        let values: BTreeSet<bool> = models.iter().map(|a| evaluate(f, a).expect("total assignment")).collect();
        match values.len() {
            0 => None,
            1 => values.first().copied().map(Derived::Forced),
            _ => Some(Derived::Free),
        }
    };

    let proposition = match (bell_theorem, proposition_c) {
        (true, false) => Some(1),
        (false, true) => Some(2),
        (true, true) => Some(3),
        (false, false) => None,
    };
    CaseReport {
        bell_theorem,
        proposition_c,
        no_local_realism: derive(&atom(NO_LOCAL_REALISM)),
        commutativity: derive(&atom(COMMUTATIVITY)),
        nb_or_k: derive(&disj),
        consistent: !models.is_empty(),
        proposition,
        analyzed: proposition.is_some(),
    }
}

/// The five premises whose conjunction is refuted by the norm-product
/// argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Premise {
    /// Realism: response functions exist for every observable.
    R,
    /// The probability distribution rule.
    D,
    /// Bell locality: one sample point for both times.
    L,
    /// Outcomes lie in `{-1, +1}`.
    M,
    /// `<F(A, B)> = 0` for every time, state and pair.
    Commutativity,
}

impl Premise {
    pub const ALL: [Premise; 5] = [Premise::R, Premise::D, Premise::L, Premise::M, Premise::Commutativity];

    pub fn name(self) -> &'static str {
        match self {
            Premise::R => "R",
            Premise::D => "D",
            Premise::L => "L",
            Premise::M => "M",
            Premise::Commutativity => "forall-commutativity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionReport {
    pub members: Vec<Premise>,
    /// The quantity receiving two values.
    pub quantity: &'static str,
    /// Values the quantity is forced to, in derivation order.
    pub conflicting_values: Vec<f64>,
    pub satisfiable: bool,
}

const PRODUCT_ZERO: &str = "product=0";
const PRODUCT_ONE: &str = "product=1";

/// Derivation rules of the contradiction:
/// `R & D & M & K -> product = 0`, `R & D & L & M -> product = 1`, and the
/// product cannot take both values.
pub fn contradiction_rules() -> Formula {
    let p = |x: Premise| atom(x.name());
    let zero = Formula::all([p(Premise::R), p(Premise::D), p(Premise::M), p(Premise::Commutativity)])
        .expect("non-empty")
        .implies(atom(PRODUCT_ZERO));
    let one = Formula::all([p(Premise::R), p(Premise::D), p(Premise::L), p(Premise::M)])
        .expect("non-empty")
        .implies(atom(PRODUCT_ONE));
    let exclusive = atom(PRODUCT_ZERO).and(atom(PRODUCT_ONE)).not();
    zero.and(one).and(exclusive)
}

/// Checks whether the rules stay satisfiable when exactly `members` are
/// asserted; the remaining premises are left open.
pub fn contradiction_schema_with(members: &[Premise]) -> ContradictionReport {
    let rules = contradiction_rules();
    let satisfiable = assignments(&rules.atoms())
        .filter(|a| members.iter().all(|m| a[m.name()]))
        .any(|a| evaluate(&rules, &a).expect("total assignment"));
    let has = |p: Premise| members.contains(&p);
    let base = has(Premise::R) && has(Premise::D) && has(Premise::M);
    let mut conflicting_values = Vec::new();
    if base && has(Premise::Commutativity) {
        conflicting_values.push(0.0);
    }
    if base && has(Premise::L) {
        conflicting_values.push(1.0);
    }
    ContradictionReport {
        members: members.to_vec(),
        quantity: "<F(A,B)>_{psi(t1)} * <F(A,B)>_{psi(t2)}",
        conflicting_values,
        satisfiable,
    }
}

/// All five premises together: unsatisfiable.
pub fn norm_product_contradiction() -> ContradictionReport {
    contradiction_schema_with(&Premise::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(&str, bool)]) -> TruthAssignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn disjunction_table() {
        let f = atom("A").or(atom("B"));
        let rows = [(true, true, true), (true, false, true), (false, true, true), (false, false, false)];
        for (a, b, expected) in rows {
            assert_eq!(evaluate(&f, &assign(&[("A", a), ("B", b)])).unwrap(), expected);
        }
        assert!(!evaluate(&atom("A").not(), &assign(&[("A", true)])).unwrap());
    }

    #[test]
    fn unbound_atom() {
        let f = atom("A").and(atom("Q"));
        assert_eq!(evaluate(&f, &assign(&[("A", true)])).unwrap_err(), Error::UnboundAtom("Q".into()));
    }

    #[test]
    fn implication_rewrite() {
        let f = atom("B").implies(atom("K"));
        let g = implication_as_disjunction(&f);
        assert_eq!(g, atom("B").not().or(atom("K")));
        assert!(equivalent(&f, &g));
        assert_eq!(g.atoms(), f.atoms());
        assert!(!g.contains_implication());
        assert!(is_tautology(&implication_as_disjunction(&atom("B").implies(atom("B")))));
    }

    #[test]
    fn case_one() {
        let r = case_analysis(true, false);
        assert!(r.consistent);
        assert_eq!(r.no_local_realism, Some(Derived::Forced(false)));
        assert_eq!(r.commutativity, Some(Derived::Forced(false)));
        assert_eq!(r.nb_or_k, Some(Derived::Forced(false)));
        assert_eq!(r.proposition, Some(1));
    }

    #[test]
    fn case_two() {
        let r = case_analysis(false, true);
        assert!(r.consistent);
        assert_eq!(r.no_local_realism, Some(Derived::Forced(true)));
        assert_eq!(r.commutativity, Some(Derived::Free));
        assert_eq!(r.nb_or_k, Some(Derived::Forced(true)));
        assert_eq!(r.proposition, Some(2));
    }

    #[test]
    fn case_three() {
        let r = case_analysis(true, true);
        assert!(r.consistent);
        assert_eq!(r.no_local_realism, Some(Derived::Forced(false)));
        assert_eq!(r.commutativity, Some(Derived::Forced(true)));
        assert_eq!(r.nb_or_k, Some(Derived::Forced(true)));
        assert_eq!(r.proposition, Some(3));
        assert_eq!(r.conclusion(), "[Bell theorem] & [Proposition C]");
    }

    #[test]
    fn uncovered_case() {
        let r = case_analysis(false, false);
        assert!(!r.analyzed);
        // NB is forced true, so NB | K cannot be 0.
        assert!(!r.consistent);
        assert_eq!(r.no_local_realism, None);
    }

    #[test]
    fn contradiction_schema() {
        let r = norm_product_contradiction();
        assert_eq!(r.members, Premise::ALL.to_vec());
        assert_eq!(r.conflicting_values, vec![0.0, 1.0]);
        assert!(!r.satisfiable);
        for skip in Premise::ALL {
            let rest: Vec<Premise> = Premise::ALL.into_iter().filter(|&p| p != skip).collect();
            let r = contradiction_schema_with(&rest);
            assert!(r.satisfiable, "dropping {skip:?}");
            assert!(r.conflicting_values.len() < 2);
        }
    }
}
