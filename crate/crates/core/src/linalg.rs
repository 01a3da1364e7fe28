//! Dense complex linear algebra for the small operators used by the toolkit.
//!
//! Matrices are square and stored row-major. Dimensions stay at or below 16
//! (four qubits), so every routine is written for clarity over speed.
//!
//! Tensor ordering: in `tensor(a, b)` the left factor `a` is subsystem 1 and
//! indexes the slow (outer) block, so `|i j>` sits at row `i * b.dim() + j`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type for every matrix entry.
pub type ComplexScalar = Complex64;

/// Entrywise tolerance for structural checks (equality, hermiticity,
/// commutation, context products).
pub const EPS_MAT: f64 = 1e-12;

/// Tolerance for spectral checks (eigenvalue sums, reconstruction residuals).
pub const EPS_SPECTRAL: f64 = 1e-10;

/// Off-diagonal Frobenius mass, relative to the input norm, at which Jacobi
/// iteration stops.
pub const JACOBI_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-square input and
    /// non-finite entries.
    pub fn from_vec(dim: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(k / dim, k % dim));
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Shape(format!("row of length {} in a matrix with {dim} rows", bad.len())));
        }
        Self::from_vec(dim, rows.iter().flatten().copied().collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { dim, data: vec![c(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(entries: &[ComplexScalar]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[ComplexScalar], v: &[ComplexScalar]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Dimension(u.len(), v.len()));
        }
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_vec(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ComplexScalar]> {
        self.data.chunks(self.dim)
    }

    pub fn scale(&self, k: ComplexScalar) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to `other`; `None` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        (self.dim == other.dim)
            .then(|| self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Entrywise comparison at `tol`; matrices of different size are never close.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Largest entrywise deviation from hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if v.len() != self.dim {
            return Err(Error::Dimension(self.dim, v.len()));
        }
        Ok(self.rows().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = mat_mul_unchecked(&acc, self);
        }
        acc
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::Dimension(self.dim, other.dim))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar) -> Self {
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

// Operator sugar panics on dimension mismatch; the fallible free functions
// below are the checked entry points.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        mat_mul(self, rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

fn mat_mul_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            for j in 0..n {
                out.data[i * n + j] += aik * b[(k, j)];
            }
        }
    }
    out
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(mat_mul_unchecked(a, b))
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// Kronecker product; `a` is subsystem 1 (slow index).
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn trace(a: &ComplexMatrix) -> ComplexScalar {
    (0..a.dim).map(|i| a[(i, i)]).sum()
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(&mat_mul_unchecked(a, b) - &mat_mul_unchecked(b, a))
}

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<ComplexScalar>>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn max(&self) -> f64 {
        *self.values.last().expect("eigendecomposition of a non-empty matrix")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Each rotation is a phase correction followed by a real Givens rotation,
/// annihilating one off-diagonal pair. Sweeps continue until the off-diagonal
/// Frobenius mass drops below `JACOBI_TOL` times the Frobenius norm of the
/// input.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let defect = a.hermiticity_defect();
    if defect > EPS_MAT {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim;
    // Symmetrize so rounding noise below EPS_MAT cannot bias the result.
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = c(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        if off_diagonal_mass(&m) <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|r| v[(r, k)]).collect()).collect();
    Ok(EigenDecomposition { values, vectors, sweeps })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.values)
}

fn off_diagonal_mass(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 || g < f64::MIN_POSITIVE.sqrt() {
        m[(p, q)] = c(0.0, 0.0);
        m[(q, p)] = c(0.0, 0.0);
        return;
    }
    let phase = apq / g;
    let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * g);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // 2x2 block of the unitary U = D * G with D = diag(1, conj(phase)).
    let upp = c(cs, 0.0);
    let upq = c(sn, 0.0);
    let uqp = -phase.conj() * sn;
    let uqq = phase.conj() * cs;

    let n = m.dim;
    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * upp + akq * uqp;
        m[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        m[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    m[(p, q)] = c(0.0, 0.0);
    m[(q, p)] = c(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}
