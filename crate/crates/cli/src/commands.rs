//! One function per subcommand. Each builds a [`Report`]; failures of the
//! checks themselves show up as `Status::Fail`, while bad input is a
//! [`CliError`].

use std::f64::consts::SQRT_2;
use std::fmt;
use std::path::Path;

use bellks_core::ks::{self, Coloring};
use bellks_core::lhv::{self, HiddenVariableModel, ModelDocument};
use bellks_core::linalg::{self, EPS_MAT, EPS_SPECTRAL, JACOBI_TOL};
use bellks_core::logic::{self, Derived};
use bellks_core::quantum::{self, Axis, ChshSettings, KetConvention, Observable};
use bellks_core::Outcome;

use crate::report::{Report, Status};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed arguments.
    Usage(String),
    /// Input file missing, unparsable or semantically invalid.
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Appends the tolerances used by the checks.
pub fn add_tolerances(report: &mut Report) {
    report
        .real("tolerance_matrix", EPS_MAT)
        .real("tolerance_spectral", EPS_SPECTRAL)
        .real("tolerance_jacobi", JACOBI_TOL)
        .real("tolerance_weights", lhv::WEIGHT_TOL);
}

fn internal_failure(command: &str, err: impl fmt::Display) -> Report {
    let mut r = Report::new(command);
    r.status = Status::Fail;
    r.detail(format!("internal error: {err}"));
    r
}

pub fn chsh_quantum() -> Report {
    let run = || -> bellks_core::Result<Report> {
        let settings = ChshSettings::pauli_xy();
        let state = quantum::reference_state();
        let s = quantum::chsh_value(&state, &settings)?;
        let (p1, p2) = quantum::chsh_partial_sums(&state)?;
        let zz = quantum::expectation(&state, &quantum::two_qubit(Axis::Z, Axis::Z))?;
        let aligned = quantum::chsh_value(&quantum::reference_state_with(KetConvention::Aligned), &settings)?;

        let target = 2.0 * SQRT_2;
        let ok = (s - target).abs() <= EPS_SPECTRAL
            && (p1 - SQRT_2).abs() <= EPS_SPECTRAL
            && (p2 - SQRT_2).abs() <= EPS_SPECTRAL;
        let mut r = Report::new("chsh-quantum");
        r.status = Status::from_check(ok);
        r.real("s_quantum", s)
            .real("partial_xx_yy", p1)
            .real("partial_xy_yx", p2)
            .real("zz_correlation", zz)
            .real("s_aligned_frame", aligned)
            .detail("state (|+1>|+2> + e^{i pi/4}|-1>|-2>)/sqrt2 with |+1> = z-up, |+2> = z-down")
            .detail("settings a1 = b1 = sigma_x, a2 = b2 = sigma_y")
            .detail("with |+2> = z-up instead, the same settings give s_aligned_frame");
        Ok(r)
    };
    run().unwrap_or_else(|e| internal_failure("chsh-quantum", e))
}

pub fn chsh_lhv() -> Report {
    let run = || -> bellks_core::Result<Report> {
        let vertices = lhv::enumerate_vertices();
        let two_time = lhv::enumerate_two_time_tables()?;
        let gap = lhv::quantum_gap();
        let ok = vertices.max == 2.0 && vertices.all_pm2 && two_time.all_pm2 && two_time.local_matches_v;
        let mut r = Report::new("chsh-lhv");
        r.status = Status::from_check(ok);
        r.real("max_lhv", vertices.max)
            .real("min_lhv", vertices.min)
            .int("strategies", vertices.strategies as i64)
            .int("attaining_strategies", vertices.attaining_max as i64)
            .flag("v_all_pm2", vertices.all_pm2)
            .int("two_time_tables", two_time.tables as i64)
            .flag("u_all_pm2", two_time.all_pm2)
            .flag("u_local_equals_v", two_time.local_matches_v)
            .real("gap", gap)
            .detail("V(w) = a1 b1 - a1 b2 + a2 b1 + a2 b2 over all 16 deterministic strategies")
            .detail("U(w1, w2) over all 256 response tables at two sample points");
        Ok(r)
    };
    run().unwrap_or_else(|e| internal_failure("chsh-lhv", e))
}

pub fn tsirelson() -> Report {
    let run = || -> bellks_core::Result<Report> {
        let settings = ChshSettings::pauli_xy();
        let max = quantum::tsirelson_max(&settings)?;
        let s = quantum::chsh_value(&quantum::reference_state(), &settings)?;
        let mut r = Report::new("tsirelson");
        r.status = Status::from_check((max - s).abs() <= EPS_SPECTRAL);
        r.real("tsirelson_max", max)
            .real("s_quantum", s)
            .real("lhv_max", lhv::max_chsh_lhv())
            .detail("largest eigenvalue of a1 b1 - a1 b2 + a2 b1 + a2 b2 by Jacobi rotations");
        Ok(r)
    };
    run().unwrap_or_else(|e| internal_failure("tsirelson", e))
}

fn pair_text(pairs: &[(Outcome, Outcome)]) -> String {
    pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(" ")
}

pub fn ks_square() -> Report {
    let run = || -> bellks_core::Result<Report> {
        let square = ks::mermin_peres_square();
        let verification = ks::verify_instance(&square)?;
        let search = ks::find_coloring(&square)?;
        let plus = ks::value_entanglement_demo(Outcome::Plus);
        let minus = ks::value_entanglement_demo(Outcome::Minus);

        let mut r = Report::new("ks-square");
        r.int("observables", square.observables().len() as i64)
            .int("contexts", square.contexts().len() as i64)
            .int("contexts_verified", (verification.contexts.len() - verification.failures()) as i64)
            .int("sign_product", i64::from(square.sign_product().value()))
            .flag("parity_obstruction", square.parity_obstruction())
            .flag("colorable", search.is_colorable())
            .int("assignments_searched", search.searched as i64)
            .flag("relation_zz_eq_minus_yy_xx", plus.quantum_relation_holds)
            .int("admissible_pairs_zeta_plus", plus.admissible.len() as i64)
            .int("admissible_pairs_zeta_minus", minus.admissible.len() as i64);

        let labels: Vec<&str> = square.observables().iter().map(Observable::label).collect();
        for (k, check) in verification.contexts.iter().enumerate() {
            let members: Vec<&str> = check.members.iter().map(|&m| labels[m]).collect();
            r.detail(format!(
                "context {k}: [{}] product {} I, commuting {}, deviation {:.1e}",
                members.join(", "),
                check.sign,
                check.commuting,
                check.product_deviation
            ));
        }
        let mut ok = verification.passed() && square.parity_obstruction() && plus.quantum_relation_holds;
        match &search.coloring {
            Coloring::Found(a) => {
                ok = false;
                r.detail(format!("unexpected coloring {:?}", a.values));
            }
            Coloring::NoColoring { min_violations, witness } => {
                r.int("min_violations", *min_violations as i64);
                let w: Vec<String> = witness.values.iter().map(Outcome::to_string).collect();
                r.detail(format!("witness assignment [{}]", w.join(", ")));
                ok &= *min_violations == 1;
            }
        }
        for rep in [&plus, &minus] {
            ok &= rep.admissible.len() == 2;
            r.detail(format!(
                "f(s1_z s2_z) = {}: f(xx) f(yy) = {}, admissible (f(xx), f(yy)) {}",
                rep.zeta,
                rep.forced_product,
                pair_text(&rep.admissible)
            ));
        }
        r.status = Status::from_check(ok);
        Ok(r)
    };
    run().unwrap_or_else(|e| internal_failure("ks-square", e))
}

/// Parses `x`, `y`, `z`, `i` (one qubit) or `<axis>.<axis>` (two qubits).
pub fn parse_pauli(text: &str) -> Result<Observable, CliError> {
    let parts: Vec<&str> = text.split('.').collect();
    let axis = |s: &str| s.parse::<Axis>().map_err(|e| CliError::Usage(format!("in '{text}': {e}")));
    match parts.as_slice() {
        [a] => Ok(quantum::pauli(axis(a)?)),
        [a, b] => Ok(quantum::two_qubit(axis(a)?, axis(b)?)),
        _ => Err(CliError::Usage(format!("'{text}' is not '<axis>' or '<axis>.<axis>'"))),
    }
}

pub fn commutator(a_arg: &str, b_arg: &str) -> Result<Report, CliError> {
    let a = parse_pauli(a_arg)?;
    let b = parse_pauli(b_arg)?;
    if a.dim() != b.dim() {
        return Err(CliError::Usage(format!(
            "'{a_arg}' acts on {} qubit(s) but '{b_arg}' on {}",
            a.dim() / 2,
            b.dim() / 2
        )));
    }
    let run = || -> bellks_core::Result<Report> {
        let reference = quantum::reference_state();
        let state = if a.dim() == 2 { reference.reduce_to_first(2)? } else { reference };
        let f = quantum::commutator_observable(&a, &b)?;
        let expectation = quantum::expectation(&state, &f)?;
        let spectrum = f.eigenvalues()?;
        let commuting = linalg::commutator(a.matrix(), b.matrix())?.is_zero(EPS_MAT);
        let mut r = Report::new("commutator");
        r.real("f_norm_expectation", expectation)
            .real("f_max_eigenvalue", *spectrum.last().expect("non-empty"))
            .real("f_min_eigenvalue", spectrum[0])
            .flag("commuting", commuting)
            .detail(format!("F = [A, B]^dagger [A, B] with A = {}, B = {}", a.label(), b.label()))
            .detail(format!("expectation taken in {}", state.label()));
        Ok(r)
    };
    Ok(run().unwrap_or_else(|e| internal_failure("commutator", e)))
}

fn derived_into(r: &mut Report, key: &str, d: Option<Derived>) {
    match d {
        Some(Derived::Forced(v)) => {
            r.flag(key, v);
        }
        Some(Derived::Free) => {
            r.flag(&format!("{key}_free"), true);
        }
        None => {}
    }
}

pub fn logic_cases(bt: u8, c: u8) -> Result<Report, CliError> {
    let flag = |name: &str, v: u8| match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(CliError::Usage(format!("--{name} must be 0 or 1, got {v}"))),
    };
    let case = logic::case_analysis(flag("bt", bt)?, flag("c", c)?);

    let mut r = Report::new("logic-cases");
    r.int("bt", i64::from(bt)).int("c", i64::from(c)).flag("consistent", case.consistent);
    derived_into(&mut r, "nb", case.no_local_realism);
    derived_into(&mut r, "k", case.commutativity);
    derived_into(&mut r, "nb_or_k", case.nb_or_k);
    r.flag("analyzed_case", case.analyzed);
    if let Some(p) = case.proposition {
        r.int("proposition", i64::from(p));
    }
    r.detail("NB: forall t, psi: not B(psi); K: forall t, psi, A, B: <F(A,B)> = 0")
        .detail("rules: NB <-> not BT; C <-> (NB or K)");
    if case.analyzed {
        r.status = Status::from_check(case.consistent);
        r.detail(format!("Proposition {}: {} is consistent", case.proposition.unwrap_or(0), case.conclusion()));
    } else {
        r.status = Status::Info;
        r.detail(format!("not covered by the three analyzed cases: {} is inconsistent", case.conclusion()));
    }
    Ok(r)
}

pub fn norm_contradiction() -> Report {
    let full = logic::norm_product_contradiction();
    let mut r = Report::new("norm-contradiction");
    r.flag("satisfiable", full.satisfiable)
        .int("members", full.members.len() as i64)
        .int("conflicting_values", full.conflicting_values.len() as i64);
    let names: Vec<&str> = full.members.iter().map(|m| m.name()).collect();
    r.detail(format!("premises [{}] jointly force {} to both 0 and 1", names.join(", "), full.quantity));
    let mut all_drop_satisfiable = true;
    for skip in logic::Premise::ALL {
        let rest: Vec<logic::Premise> = logic::Premise::ALL.into_iter().filter(|&p| p != skip).collect();
        let sat = logic::contradiction_schema_with(&rest).satisfiable;
        all_drop_satisfiable &= sat;
        r.detail(format!("without {}: satisfiable = {sat}", skip.name()));
    }
    r.status = Status::from_check(!full.satisfiable && all_drop_satisfiable && full.conflicting_values == [0.0, 1.0]);
    r
}

/// Parses a model document, reporting the failing field path and position.
pub fn parse_model(text: &str) -> Result<HiddenVariableModel, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ModelDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Input(format!("field '{path}': {inner} (line {}, column {})", inner.line(), inner.column()))
    })?;
    HiddenVariableModel::from_document(doc).map_err(|e| CliError::Input(e.to_string()))
}

pub fn lhv_eval(path: &Path) -> Result<Report, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let model = parse_model(&text)?;
    let [e11, e12, e21, e22] = model.correlations().map_err(|e| CliError::Input(e.to_string()))?;
    let chsh = e11 - e12 + e21 + e22;
    let mut r = Report::new("lhv-eval");
    r.status = Status::from_check(chsh.abs() <= 2.0 + 1e-12);
    r.int("points", model.space().points().len() as i64)
        .real("e_a1b1", e11)
        .real("e_a1b2", e12)
        .real("e_a2b1", e21)
        .real("e_a2b2", e22)
        .real("chsh", chsh)
        .detail(format!("model {}", path.display()));
    for label in lhv::LABELS {
        let e = model.expectation(lhv::Correlator::Single(label)).map_err(|e| CliError::Input(e.to_string()))?;
        r.real(&format!("e_{label}"), e);
    }
    Ok(r)
}
