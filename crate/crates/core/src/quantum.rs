//! Two-qubit quantum side of the CHSH scenario: Pauli observables, density
//! matrices, expectation values `tr[rho A]`, the CHSH combination, and the
//! commutator observable `F(A, B) = [A, B]^dagger [A, B]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexScalar, EPS_MAT, EPS_SPECTRAL};

/// Single-qubit Pauli axis, with `I` for the identity factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub fn symbol(self) -> &'static str {
        match self {
            Axis::I => "i",
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
        let data = match self {
            Axis::I => vec![l, o, o, l],
            Axis::X => vec![o, l, l, o],
            Axis::Y => vec![o, -i, i, o],
            Axis::Z => vec![l, o, o, -l],
        };
        ComplexMatrix::from_vec(2, data).expect("Pauli matrices are well formed")
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "i" => Ok(Axis::I),
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}', expected one of x, y, z, i")),
        }
    }
}

/// Labeled Hermitian operator.
#[derive(Debug, Clone)]
pub struct Observable {
    label: String,
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > EPS_MAT {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { label: label.into(), matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `A^2 = I` within `EPS_MAT`, i.e. spectrum in `{-1, +1}`.
    pub fn is_dichotomic(&self) -> bool {
        (&self.matrix * &self.matrix).approx_eq(&ComplexMatrix::identity(self.dim()), EPS_MAT)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Joint observable `self (x) other` on the composite system.
    pub fn tensor(&self, other: &Observable) -> Observable {
        Observable {
            label: format!("{} {}", self.label, other.label),
            matrix: linalg::tensor(&self.matrix, &other.matrix),
        }
    }
}

/// Density matrix with a descriptive label.
#[derive(Debug, Clone)]
pub struct QuantumState {
    label: String,
    rho: ComplexMatrix,
}

impl QuantumState {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(label: impl Into<String>, rho: ComplexMatrix) -> Result<Self> {
        let defect = rho.hermiticity_defect();
        if defect > EPS_MAT {
            return Err(Error::NotHermitian(defect));
        }
        let tr = linalg::trace(&rho);
        if (tr.re - 1.0).abs() > EPS_MAT || tr.im.abs() > EPS_MAT {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", tr.re, tr.im)));
        }
        let min = linalg::hermitian_eigen(&rho)?.min();
        if min < -EPS_MAT {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { label: label.into(), rho })
    }

    /// Pure state `|psi><psi|`; the amplitudes are normalized first.
    pub fn pure(label: impl Into<String>, amplitudes: &[ComplexScalar]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let psi: Vec<ComplexScalar> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(label, ComplexMatrix::outer(&psi, &psi)?)
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { label: format!("I/{dim}"), rho: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&(&self.rho * &self.rho)).re
    }

    /// Reduced state of subsystem 1 when the second factor has dimension
    /// `second_dim`.
    pub fn reduce_to_first(&self, second_dim: usize) -> Result<QuantumState> {
        let n = self.dim();
        if second_dim == 0 || !n.is_multiple_of(second_dim) {
            return Err(Error::Dimension(n, second_dim));
        }
        let first = n / second_dim;
        let mut out = ComplexMatrix::zeros(first);
        for i in 0..first {
            for j in 0..first {
                out[(i, j)] = (0..second_dim).map(|k| self.rho[(i * second_dim + k, j * second_dim + k)]).sum();
            }
        }
        QuantumState::new(format!("tr_2[{}]", self.label), out)
    }
}

/// The four dichotomic settings of a CHSH experiment.
#[derive(Debug, Clone)]
pub struct ChshSettings {
    pub a1: Observable,
    pub a2: Observable,
    pub b1: Observable,
    pub b2: Observable,
}

impl ChshSettings {
    pub fn new(a1: Observable, a2: Observable, b1: Observable, b2: Observable) -> Result<Self> {
        for o in [&a1, &a2, &b1, &b2] {
            if !o.is_dichotomic() {
                return Err(Error::NotDichotomic(o.label().to_string()));
            }
        }
        if a1.dim() != a2.dim() {
            return Err(Error::Dimension(a1.dim(), a2.dim()));
        }
        if b1.dim() != b2.dim() {
            return Err(Error::Dimension(b1.dim(), b2.dim()));
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// `a1 = b1 = sigma_x`, `a2 = b2 = sigma_y`.
    pub fn pauli_xy() -> Self {
        Self::new(pauli(Axis::X), pauli(Axis::Y), pauli(Axis::X), pauli(Axis::Y))
            .expect("Pauli settings are dichotomic")
    }

    /// The four joint observables in CHSH order, paired with their signs:
    /// `+a1b1, -a1b2, +a2b1, +a2b2`.
    pub fn terms(&self) -> [(f64, Observable); 4] {
        [
            (1.0, self.a1.tensor(&self.b1)),
            (-1.0, self.a1.tensor(&self.b2)),
            (1.0, self.a2.tensor(&self.b1)),
            (1.0, self.a2.tensor(&self.b2)),
        ]
    }

    /// `a1 b1 - a1 b2 + a2 b1 + a2 b2`.
    pub fn bell_operator(&self) -> ComplexMatrix {
        let terms = self.terms();
        let mut acc = ComplexMatrix::zeros(terms[0].1.dim());
        for (sign, obs) in &terms {
            acc = &acc + &obs.matrix().scale_real(*sign);
        }
        acc
    }
}

pub fn pauli(axis: Axis) -> Observable {
    Observable { label: format!("s_{axis}"), matrix: axis.matrix() }
}

/// `sigma^1_{axis1} (x) sigma^2_{axis2}`, labeled `s1_<axis1> s2_<axis2>`.
pub fn two_qubit(axis1: Axis, axis2: Axis) -> Observable {
    Observable { label: format!("s1_{axis1} s2_{axis2}"), matrix: linalg::tensor(&axis1.matrix(), &axis2.matrix()) }
}

/// Which computational basis vector each party's `|+>` denotes.
///
/// The two-party ket `|+_1>|+_2>` has no fixed basis attached to it, so the
/// choice is explicit. Party 1 always takes `|+_1> = |0>` (the `+1`
/// eigenvector of `sigma_z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KetConvention {
    /// `|+_2> = |0>`: both parties read `+` as z-up.
    Aligned,
    /// `|+_2> = |1>`: party 2 reads `+` as z-down. This is the frame in which
    /// the state reaches the x/y CHSH value `2 sqrt 2`.
    AntiAligned,
}

/// `(|+_1>|+_2> + e^{i pi/4} |-_1>|-_2>) / sqrt 2` in the anti-aligned frame,
/// i.e. `(|01> + e^{i pi/4}|10>) / sqrt 2`.
pub fn reference_state() -> QuantumState {
    reference_state_with(KetConvention::AntiAligned)
}

pub fn reference_state_with(convention: KetConvention) -> QuantumState {
    let (plus_plus, minus_minus) = match convention {
        KetConvention::Aligned => (0, 3),
        KetConvention::AntiAligned => (1, 2),
    };
    let mut amps = vec![c(0.0, 0.0); 4];
    amps[plus_plus] = c(FRAC_1_SQRT_2, 0.0);
    amps[minus_minus] = ComplexScalar::from_polar(FRAC_1_SQRT_2, FRAC_PI_4);
    let label = match convention {
        KetConvention::Aligned => "psi(t) [aligned]",
        KetConvention::AntiAligned => "psi(t)",
    };
    QuantumState::pure(label, &amps).expect("normalized by construction")
}

/// `tr[rho A]`. The imaginary part of the trace must vanish to `EPS_MAT`.
pub fn expectation(state: &QuantumState, obs: &Observable) -> Result<f64> {
    let product = linalg::mat_mul(state.rho(), obs.matrix())?;
    let tr = linalg::trace(&product);
    assert!(tr.im.abs() <= EPS_MAT, "imaginary part {} in tr[rho A] for Hermitian inputs", tr.im);
    Ok(tr.re)
}

/// `<a1 b1> - <a1 b2> + <a2 b1> + <a2 b2>`.
pub fn chsh_value(state: &QuantumState, settings: &ChshSettings) -> Result<f64> {
    settings.terms().iter().try_fold(0.0, |acc, (sign, obs)| Ok(acc + sign * expectation(state, obs)?))
}

/// The two partial sums `<xx> + <yy>` and `-<xy> + <yx>` of the CHSH value
/// for the Pauli x/y settings.
pub fn chsh_partial_sums(state: &QuantumState) -> Result<(f64, f64)> {
    let e = |a, b| expectation(state, &two_qubit(a, b));
    let first = e(Axis::X, Axis::X)? + e(Axis::Y, Axis::Y)?;
    let second = -e(Axis::X, Axis::Y)? + e(Axis::Y, Axis::X)?;
    Ok((first, second))
}

/// `F(A, B) = C^dagger C` with `C = [A, B]`; positive semidefinite, zero iff
/// the pair commutes.
pub fn commutator_observable(a: &Observable, b: &Observable) -> Result<Observable> {
    let comm = linalg::commutator(a.matrix(), b.matrix())?;
    let f = &linalg::adjoint(&comm) * &comm;
    Observable::new(format!("F({}, {})", a.label(), b.label()), f)
}

/// `<F(A, B)>` in `state`.
pub fn commutator_norm_expectation(state: &QuantumState, a: &Observable, b: &Observable) -> Result<f64> {
    expectation(state, &commutator_observable(a, b)?)
}

/// Largest eigenvalue of the Bell operator of `settings`.
pub fn tsirelson_max(settings: &ChshSettings) -> Result<f64> {
    Ok(linalg::hermitian_eigen(&settings.bell_operator())?.max())
}

/// Eigenvector of the Bell operator attaining [`tsirelson_max`].
pub fn tsirelson_state(settings: &ChshSettings) -> Result<QuantumState> {
    let eig = linalg::hermitian_eigen(&settings.bell_operator())?;
    let top = eig.vectors.last().expect("non-empty spectrum");
    QuantumState::pure("argmax Bell operator", top)
}

/// True when `|chsh_value - tsirelson_max|` is within the spectral tolerance.
pub fn attains_tsirelson(state: &QuantumState, settings: &ChshSettings) -> Result<bool> {
    Ok((chsh_value(state, settings)? - tsirelson_max(settings)?).abs() <= EPS_SPECTRAL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn pauli_definitions() {
        assert!(pauli(Axis::X).matrix().approx_eq(&ComplexMatrix::from_real(2, &[0., 1., 1., 0.]).unwrap(), 0.0));
        assert!(pauli(Axis::Z).matrix().approx_eq(&ComplexMatrix::from_real(2, &[1., 0., 0., -1.]).unwrap(), 0.0));
        let y = pauli(Axis::Y);
        assert!((y.matrix() * y.matrix()).approx_eq(&ComplexMatrix::identity(2), 0.0));
        assert!([Axis::X, Axis::Y, Axis::Z].iter().all(|&a| pauli(a).is_dichotomic()));
    }

    #[test]
    fn two_qubit_observables() {
        let zz = two_qubit(Axis::Z, Axis::Z);
        assert_eq!(zz.label(), "s1_z s2_z");
        assert_eq!(zz.eigenvalues().unwrap(), vec![-1.0, -1.0, 1.0, 1.0]);
        let xi = two_qubit(Axis::X, Axis::I);
        assert!(xi.matrix().approx_eq(&linalg::tensor(&Axis::X.matrix(), &ComplexMatrix::identity(2)), 0.0));
        let xx_yy = two_qubit(Axis::X, Axis::X).matrix() * two_qubit(Axis::Y, Axis::Y).matrix();
        assert!(xx_yy.approx_eq(&-zz.matrix(), EPS_MAT));
    }

    #[test]
    fn observable_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(Observable::new("bad", m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn state_validation() {
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(QuantumState::new("2I", not_unit), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(QuantumState::new("neg", negative), Err(Error::InvalidState(_))));
        assert!(QuantumState::pure("zero", &[c(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn reference_state_basics() {
        let psi = reference_state();
        assert!((linalg::trace(psi.rho()).re - 1.0).abs() < EPS_MAT);
        assert!((psi.purity() - 1.0).abs() < EPS_MAT);
        // anti-aligned frame puts both amplitudes in the odd-parity z sector
        assert!((expectation(&psi, &two_qubit(Axis::Z, Axis::Z)).unwrap() + 1.0).abs() < EPS_MAT);
        let aligned = reference_state_with(KetConvention::Aligned);
        assert!((expectation(&aligned, &two_qubit(Axis::Z, Axis::Z)).unwrap() - 1.0).abs() < EPS_MAT);
    }

    #[test]
    fn reference_partial_sums() {
        let (s1, s2) = chsh_partial_sums(&reference_state()).unwrap();
        assert!((s1 - SQRT_2).abs() < EPS_SPECTRAL, "{s1}");
        assert!((s2 - SQRT_2).abs() < EPS_SPECTRAL, "{s2}");
    }

    #[test]
    fn aligned_frame_gives_no_violation() {
        // (|00> + e^{i phi}|11>)/sqrt2 has <xx> = -<yy> and <xy> = <yx>, so
        // both partial sums cancel for every phase.
        let aligned = reference_state_with(KetConvention::Aligned);
        let (s1, s2) = chsh_partial_sums(&aligned).unwrap();
        assert!(s1.abs() < EPS_SPECTRAL && s2.abs() < EPS_SPECTRAL);
        assert!(chsh_value(&aligned, &ChshSettings::pauli_xy()).unwrap().abs() < EPS_SPECTRAL);
    }

    #[test]
    fn chsh_values() {
        let s = ChshSettings::pauli_xy();
        assert!((chsh_value(&reference_state(), &s).unwrap() - 2.0 * SQRT_2).abs() < EPS_SPECTRAL);
        assert!(chsh_value(&QuantumState::maximally_mixed(4), &s).unwrap().abs() < EPS_MAT);
        let mut zero = vec![c(0.0, 0.0); 4];
        zero[0] = c(1.0, 0.0);
        let product = QuantumState::pure("|00>", &zero).unwrap();
        assert!(chsh_value(&product, &s).unwrap().abs() < EPS_MAT);
    }

    #[test]
    fn identity_expectation_is_one() {
        let id = Observable::new("I", ComplexMatrix::identity(4)).unwrap();
        assert!((expectation(&reference_state(), &id).unwrap() - 1.0).abs() < EPS_MAT);
        let qubit = pauli(Axis::X);
        assert_eq!(expectation(&reference_state(), &qubit).unwrap_err(), Error::Dimension(4, 2));
    }

    #[test]
    fn commutator_observable_cases() {
        let f = commutator_observable(&pauli(Axis::X), &pauli(Axis::Y)).unwrap();
        assert!(f.matrix().approx_eq(&ComplexMatrix::identity(2).scale_real(4.0), EPS_MAT));
        let f = commutator_observable(&pauli(Axis::X), &pauli(Axis::X)).unwrap();
        assert!(f.matrix().is_zero(0.0));
        let f = commutator_observable(&two_qubit(Axis::X, Axis::I), &two_qubit(Axis::I, Axis::Y)).unwrap();
        assert!(f.matrix().is_zero(0.0));
    }

    #[test]
    fn commutator_expectations() {
        let psi = reference_state();
        let v = commutator_norm_expectation(&psi, &two_qubit(Axis::X, Axis::I), &two_qubit(Axis::I, Axis::Y)).unwrap();
        assert_eq!(v, 0.0);
        let reduced = psi.reduce_to_first(2).unwrap();
        let v = commutator_norm_expectation(&reduced, &pauli(Axis::X), &pauli(Axis::Y)).unwrap();
        assert!((v - 4.0).abs() < EPS_SPECTRAL);
        // xx and xy anticommute on the second factor: F = 4 I
        let v = commutator_norm_expectation(&psi, &two_qubit(Axis::X, Axis::X), &two_qubit(Axis::X, Axis::Y)).unwrap();
        assert!((v - 4.0).abs() < EPS_SPECTRAL);
    }

    #[test]
    fn tsirelson_cases() {
        let s = ChshSettings::pauli_xy();
        assert!((tsirelson_max(&s).unwrap() - 2.0 * SQRT_2).abs() < EPS_SPECTRAL);
        assert!(attains_tsirelson(&reference_state(), &s).unwrap());
        let x = pauli(Axis::X);
        let degenerate = ChshSettings::new(x.clone(), x.clone(), x.clone(), x).unwrap();
        assert!((tsirelson_max(&degenerate).unwrap() - 2.0).abs() < EPS_SPECTRAL);
        assert!(degenerate.bell_operator().approx_eq(&two_qubit(Axis::X, Axis::X).matrix().scale_real(2.0), EPS_MAT));
    }

    #[test]
    fn settings_must_be_dichotomic() {
        let h = Observable::new("2z", Axis::Z.matrix().scale_real(2.0)).unwrap();
        let x = pauli(Axis::X);
        assert!(matches!(ChshSettings::new(h, x.clone(), x.clone(), x), Err(Error::NotDichotomic(_))));
    }

    #[test]
    fn top_eigenvector_is_the_anti_aligned_state() {
        let top = tsirelson_state(&ChshSettings::pauli_xy()).unwrap();
        let overlap = linalg::trace(&(top.rho() * reference_state().rho())).re;
        assert!((overlap - 1.0).abs() < EPS_SPECTRAL);
    }
}
