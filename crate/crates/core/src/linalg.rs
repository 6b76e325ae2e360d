//! Dense complex linear algebra for single- and two-qubit operators, and the
//! entropy primitives built on top of it.
//!
//! Matrices are fixed-size (`Mat2`, `Mat4`) so that dimension mismatches are
//! caught at compile time. Two-qubit matrices use the computational basis
//! `|00>, |01>, |10>, |11>` with qubit A as the most significant index.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Entry-wise tolerance for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues of a density operator above `-POSITIVITY_TOL` are clamped to zero.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Allowed deviation of a density operator's trace from one.
pub const TRACE_TOL: f64 = 1e-9;

const PROBABILITY_CLAMP: f64 = 1e-12;
const PROBABILITY_SUM_TOL: f64 = 1e-9;
const JACOBI_OFF_DIAG_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Matrix([[C64::new(0.0, 0.0); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn diag(values: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in values.iter().enumerate() {
            m.0[i][i] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|` for a (not necessarily normalised) vector `v`.
    pub fn outer(v: &[C64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub const fn dim(&self) -> usize {
        N
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    /// Entry-wise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= k);
        m
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, |acc, d| {
                if d.is_nan() || acc.is_nan() {
                    f64::NAN
                } else {
                    acc.max(d)
                }
            })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `self * m * self^dagger`
    pub fn sandwich(&self, m: &Self) -> Self {
        *self * *m * self.adjoint()
    }

    fn frobenius_off_diagonal(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    acc += self.0[i][j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    fn frobenius(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<C64> for Matrix<N> {
    type Output = Self;
    fn mul(mut self, k: C64) -> Self {
        self.0.iter_mut().flatten().for_each(|z| *z *= k);
        self
    }
}

/// The three Pauli matrices, `index` 1, 2, 3 for x, y, z.
pub fn pauli(index: usize) -> Mat2 {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match index {
        1 => Matrix([[o, one], [one, o]]),
        2 => Matrix([[o, -i], [i, o]]),
        3 => Matrix([[one, o], [o, -one]]),
        _ => panic!("Pauli index must be 1, 2 or 3, got {index}"),
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on the most significant qubit.
pub fn tensor_product(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Which qubit survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn partial_trace(rho: &Mat4, keep: Subsystem) -> Mat2 {
    let mut m = Mat2::zeros();
    for x in 0..2 {
        for y in 0..2 {
            m.0[x][y] = match keep {
                Subsystem::A => rho.0[2 * x][2 * y] + rho.0[2 * x + 1][2 * y + 1],
                Subsystem::B => rho.0[x][y] + rho.0[2 + x][2 + y],
            };
        }
    }
    m
}

/// A discrete probability distribution.
///
/// Entries within `1e-12` below zero are clamped to zero on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_clamp(values, PROBABILITY_CLAMP)
    }

    /// Like [`ProbabilityVector::new`] but with a caller-chosen clamping window.
    pub fn with_clamp(mut values: Vec<f64>, clamp: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("probability vector is empty"));
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::domain(format!("non-finite probability {v}")));
            }
            if *v < -clamp {
                return Err(Error::domain(format!("negative probability {v}")));
            }
            *v = v.max(0.0);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::domain(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub(crate) fn entropy_term(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Binary entropy `H(p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-PROBABILITY_CLAMP..=1.0 + PROBABILITY_CLAMP).contains(&p) {
        return Err(Error::domain(format!(
            "binary entropy argument {p} outside [0, 1]"
        )));
    }
    Ok(binary_entropy_clamped(p))
}

/// Binary entropy for arguments already known to be in `[0, 1]` up to rounding.
///
/// Both `p` and `1 - p` are mapped to the same representative `max(p, 1 - p)`,
/// whose complement is exact in floating point, so `H(p) == H(1 - p)` bit for bit.
pub(crate) fn binary_entropy_clamped(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let hi = p.max(1.0 - p);
    let lo = 1.0 - hi;
    entropy_term(hi) + entropy_term(lo)
}

pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    p.values().iter().map(|&x| entropy_term(x)).sum()
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen<const N: usize> {
    pub values: [f64; N],
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: Matrix<N>,
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// 2×2 inputs use the closed-form quadratic; larger ones use cyclic complex
/// Jacobi rotations.
pub fn hermitian_eigen<const N: usize>(m: &Matrix<N>) -> Result<Eigen<N>> {
    if !m.is_finite() {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (max |M - M†| = {defect:e})"
        )));
    }
    let (mut values, mut vectors) = if N == 2 { eigen_2x2(m) } else { jacobi(m)? };
    sort_descending(&mut values, &mut vectors);
    Ok(Eigen { values, vectors })
}

pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>) -> Result<[f64; N]> {
    hermitian_eigen(m).map(|e| e.values)
}

fn sort_descending<const N: usize>(values: &mut [f64; N], vectors: &mut Matrix<N>) {
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let old_values = *values;
    let old_vectors = *vectors;
    for (k, &src) in order.iter().enumerate() {
        values[k] = old_values[src];
        for row in 0..N {
            vectors.0[row][k] = old_vectors.0[row][src];
        }
    }
}

fn eigen_2x2<const N: usize>(m: &Matrix<N>) -> ([f64; N], Matrix<N>) {
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    let b = m.0[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let mut values = [0.0; N];
    values[0] = mean + half_gap;
    values[1] = mean - half_gap;

    let mut vectors = Matrix::<N>::identity();
    if b.norm() > 0.0 {
        // (b, λ - a) solves (M - λ) v = 0 in its first row.
        for (k, &lambda) in values.iter().take(2).enumerate() {
            let (v0, v1) = if (lambda - a).abs() >= (lambda - d).abs() {
                (b, C64::new(lambda - a, 0.0))
            } else {
                (C64::new(lambda - d, 0.0), b.conj())
            };
            let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
            vectors.0[0][k] = v0 / norm;
            vectors.0[1][k] = v1 / norm;
        }
    }
    (values, vectors)
}

fn jacobi<const N: usize>(m: &Matrix<N>) -> Result<([f64; N], Matrix<N>)> {
    let mut a = *m;
    for i in 0..N {
        a.0[i][i] = C64::new(a.0[i][i].re, 0.0);
    }
    let mut v = Matrix::<N>::identity();
    let threshold = JACOBI_OFF_DIAG_TOL * a.frobenius().max(1.0);

    let mut sweeps = 0;
    while a.frobenius_off_diagonal() >= threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: a.frobenius_off_diagonal(),
            });
        }
        for p in 0..N - 1 {
            for q in p + 1..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }
    Ok((std::array::from_fn(|i| a.0[i][i].re), v))
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a[p][q] = |b| e^{iφ}`, the unitary `W = diag(1, e^{-iφ}) R(θ)` on the
/// (p, q) plane makes the pivot block real symmetric and then diagonalises it.
fn rotate<const N: usize>(a: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let b = a.0[p][q];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let phase = b / abs_b;
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    let tau = (aqq - app) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W restricted to the pivot plane.
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    // A <- A W
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * w_pp + akq * w_qp;
        a.0[k][q] = akp * w_pq + akq * w_qq;
    }
    // A <- W† A
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a.0[q][k] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a.0[p][q] = C64::new(0.0, 0.0);
    a.0[q][p] = C64::new(0.0, 0.0);
    a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
    a.0[q][q] = C64::new(a.0[q][q].re, 0.0);

    // V <- V W
    for k in 0..N {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * w_pp + vkq * w_qp;
        v.0[k][q] = vkp * w_pq + vkq * w_qq;
    }
}

/// Spectrum of a density operator as a probability vector.
///
/// Checks Hermiticity, unit trace and positivity (eigenvalues below
/// `-1e-9` are rejected, those above are clamped to zero).
pub fn density_spectrum<const N: usize>(rho: &Matrix<N>) -> Result<ProbabilityVector> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::domain(format!("density trace is {tr}, expected 1")));
    }
    let values = hermitian_eigenvalues(rho)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -POSITIVITY_TOL {
        return Err(Error::Positivity {
            min_eigenvalue: min,
        });
    }
    ProbabilityVector::with_clamp(values.to_vec(), POSITIVITY_TOL)
}

/// Von Neumann entropy `S(ρ) = -tr ρ log2 ρ` in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &Matrix<N>) -> Result<f64> {
    density_spectrum(rho).map(|p| shannon_entropy(&p))
}

/// Entropy of an unnormalised 2×2 positive block `m` with trace `q`, scaled by `q`:
/// returns `q · S(m / q)`.
///
/// Hot path of the discord minimiser; skips validation.
#[inline]
pub(crate) fn weighted_qubit_entropy(m: &Mat2) -> f64 {
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    let q = a + d;
    if q < 1e-14 {
        return 0.0;
    }
    let half_gap = (0.25 * (a - d) * (a - d) + m.0[0][1].norm_sqr()).sqrt();
    let p = (0.5 * q + half_gap) / q;
    q * binary_entropy_clamped(p)
}
