//! Information-theoretic quantities: the entropic uncertainty `U` of two
//! Pauli observables measured on A with B as quantum memory, its lower bound
//! `U_b = log2(1/c) + S(A|B)`, concurrence, discord and the minimal missing
//! information `M`.
//!
//! Most quantities have two routes: a general one working on any
//! [`TwoQubitDensity`], and a closed form for Bell-diagonal states (or for
//! amplitude-damped Bell-diagonal states). The test suites cross the two.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::FlipAxis;
use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy_clamped, hermitian_eigen, hermitian_eigenvalues, partial_trace, pauli,
    tensor_product, von_neumann_entropy, weighted_qubit_entropy, Mat2, Mat4, Subsystem,
};
use crate::states::{BellDiagonalState, TwoQubitDensity};

/// Entries outside the X pattern below this count as zero.
const X_PATTERN_TOL: f64 = 1e-12;
/// Agreement required between the Wootters and X-state concurrence routes.
const CONCURRENCE_ROUTE_TOL: f64 = 1e-6;
const WITNESS_SPMC_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliObservable {
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliObservable {
    pub const ALL: [PauliObservable; 3] =
        [PauliObservable::X, PauliObservable::Y, PauliObservable::Z];

    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(PauliObservable::X),
            2 => Ok(PauliObservable::Y),
            3 => Ok(PauliObservable::Z),
            _ => Err(Error::domain(format!(
                "Pauli index must be 1, 2 or 3, got {j}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn matrix(self) -> Mat2 {
        pauli(self.index())
    }

    /// Orthonormal eigenvectors for eigenvalues +1 and -1.
    pub fn eigenbasis(self) -> [[C64; 2]; 2] {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let i = C64::new(0.0, FRAC_1_SQRT_2);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        match self {
            PauliObservable::X => [[s, s], [s, -s]],
            PauliObservable::Y => [[s, i], [s, -i]],
            PauliObservable::Z => [[one, zero], [zero, one]],
        }
    }

    pub fn projectors(self) -> [Mat2; 2] {
        self.eigenbasis().map(|v| Mat2::outer(&v))
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{}", self.index())
    }
}

/// Two distinct Pauli observables `(Q, R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ObservablePair {
    q: PauliObservable,
    r: PauliObservable,
}

impl ObservablePair {
    pub fn new(q: PauliObservable, r: PauliObservable) -> Result<Self> {
        if q == r {
            return Err(Error::domain(format!(
                "observable pair needs two distinct Paulis, got {q} twice"
            )));
        }
        Ok(ObservablePair { q, r })
    }

    pub fn from_indices(j: usize, k: usize) -> Result<Self> {
        Self::new(
            PauliObservable::from_index(j)?,
            PauliObservable::from_index(k)?,
        )
    }

    /// The three unordered pairs (σ1,σ2), (σ1,σ3), (σ2,σ3).
    pub fn all() -> [ObservablePair; 3] {
        use PauliObservable::*;
        [
            ObservablePair { q: X, r: Y },
            ObservablePair { q: X, r: Z },
            ObservablePair { q: Y, r: Z },
        ]
    }

    pub fn q(&self) -> PauliObservable {
        self.q
    }

    pub fn r(&self) -> PauliObservable {
        self.r
    }

    pub fn contains(&self, index: usize) -> bool {
        self.q.index() == index || self.r.index() == index
    }

    /// The Pauli index not measured.
    pub fn complement_index(&self) -> usize {
        6 - self.q.index() - self.r.index()
    }
}

impl fmt::Display for ObservablePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.q.index(), self.r.index())
    }
}

/// Parses `j,k`.
impl std::str::FromStr for ObservablePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (j, k) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(s, 0, "expected `j,k`"))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, 0, "Pauli index must be 1, 2 or 3"))?;
        let k: usize = k.trim().parse().map_err(|_| {
            Error::parse(
                s,
                s.find(',').unwrap_or(0) + 1,
                "Pauli index must be 1, 2 or 3",
            )
        })?;
        ObservablePair::from_indices(j, k)
    }
}

/// Rank-one projective measurement on one qubit in the basis
/// `{cosθ|0> + e^{iξ}sinθ|1>, e^{-iξ}sinθ|0> - cosθ|1>}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementProjectors {
    pub theta: f64,
    pub xi: f64,
}

impl MeasurementProjectors {
    /// σ3 eigenbasis.
    pub const Z: MeasurementProjectors = MeasurementProjectors {
        theta: 0.0,
        xi: 0.0,
    };
    /// σ1 eigenbasis.
    pub const X: MeasurementProjectors = MeasurementProjectors {
        theta: PI / 4.0,
        xi: 0.0,
    };

    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let phase = C64::from_polar(1.0, self.xi);
        [
            [C64::new(c, 0.0), phase * s],
            [phase.conj() * s, C64::new(-c, 0.0)],
        ]
    }

    pub fn projectors(&self) -> [Mat2; 2] {
        self.vectors().map(|v| Mat2::outer(&v))
    }
}

/// `Σ_x (P_x ⊗ 𝟙) ρ (P_x ⊗ 𝟙)` over the eigenprojectors of `x` on qubit A.
pub fn post_measurement_state(rho: &TwoQubitDensity, x: PauliObservable) -> TwoQubitDensity {
    let id = Mat2::identity();
    let out = x.projectors().iter().fold(Mat4::zeros(), |acc, p| {
        acc + tensor_product(p, &id).sandwich(rho.matrix())
    });
    TwoQubitDensity::from_trusted(out)
}

/// `S(A|B) = S(ρ_AB) - S(ρ_B)`; negative for sufficiently entangled states.
pub fn conditional_entropy(rho: &TwoQubitDensity) -> Result<f64> {
    let joint = von_neumann_entropy(rho.matrix())?;
    let memory = von_neumann_entropy(&partial_trace(rho.matrix(), Subsystem::B))?;
    Ok(joint - memory)
}

/// `U = S(Q|B) + S(R|B)` through explicit post-measurement states.
pub fn uncertainty_u(rho: &TwoQubitDensity, pair: ObservablePair) -> Result<f64> {
    let sq = conditional_entropy(&post_measurement_state(rho, pair.q))?;
    let sr = conditional_entropy(&post_measurement_state(rho, pair.r))?;
    Ok(sq + sr)
}

/// Closed form of `U` for a Bell-diagonal state:
/// `H((1 + c_j)/2) + H((1 + c_k)/2)`.
pub fn uncertainty_u_bd(s: &BellDiagonalState, pair: ObservablePair) -> f64 {
    binary_entropy_clamped((1.0 + s.coeff(pair.q.index())) / 2.0)
        + binary_entropy_clamped((1.0 + s.coeff(pair.r.index())) / 2.0)
}

/// `max_{α,β} |<φ_α|ψ_β>|²` over two orthonormal bases.
pub fn complementarity_of_bases(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut best: f64 = 0.0;
    for u in a {
        for v in b {
            let overlap = u[0].conj() * v[0] + u[1].conj() * v[1];
            best = best.max(overlap.norm_sqr());
        }
    }
    best
}

/// Complementarity of any two Paulis, including a degenerate pair (`c = 1`).
pub fn complementarity_raw(q: PauliObservable, r: PauliObservable) -> f64 {
    complementarity_of_bases(&q.eigenbasis(), &r.eigenbasis())
}

pub fn complementarity(pair: ObservablePair) -> f64 {
    complementarity_raw(pair.q, pair.r)
}

/// `U_b = log2(1/c) + S(A|B)`.
pub fn lower_bound_ub(rho: &TwoQubitDensity, pair: ObservablePair) -> Result<f64> {
    Ok(-complementarity(pair).log2() + conditional_entropy(rho)?)
}

/// Closed form of `U_b` for a Bell-diagonal state measured with any Pauli
/// pair: the Shannon entropy of its Bell-basis spectrum.
pub fn lower_bound_ub_bd(s: &BellDiagonalState) -> f64 {
    crate::linalg::shannon_entropy(&s.bell_eigenvalues().to_probabilities())
}

/// `U`, `U_b`, `c` and the slack `U - U_b` of one state and pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintyReport {
    pub u: f64,
    pub u_b: f64,
    pub c: f64,
    pub slack: f64,
}

impl UncertaintyReport {
    pub fn evaluate(rho: &TwoQubitDensity, pair: ObservablePair) -> Result<Self> {
        let u = uncertainty_u(rho, pair)?;
        let u_b = lower_bound_ub(rho, pair)?;
        Ok(UncertaintyReport {
            u,
            u_b,
            c: complementarity(pair),
            slack: u - u_b,
        })
    }
}

/// `|c_i + c_j c_k| <= tol`, where `i` is the Pauli index not in `pair`.
pub fn spmc_holds(s: &BellDiagonalState, pair: ObservablePair, tol: f64) -> bool {
    spmc_residual(s.coeffs(), pair).abs() <= tol
}

fn spmc_residual(c: [f64; 3], pair: ObservablePair) -> f64 {
    let i = pair.complement_index();
    c[i - 1] + c[pair.q.index() - 1] * c[pair.r.index() - 1]
}

/// Where a Σ_l flip trajectory `η ∈ [0, 1]` starting at `s` meets the SPMC
/// surface of `pair`.
#[derive(Clone, Debug, PartialEq)]
pub enum SpmcContact {
    /// The whole trajectory stays on the surface.
    Everywhere,
    /// Isolated flip probabilities at which the trajectory touches or crosses.
    Points(Vec<f64>),
}

/// Locates the SPMC contacts of a flip trajectory numerically: a scan over
/// η followed by bisection on each sign change. Touching points (zeros
/// without a sign change) are reported where the residual is within `tol`.
pub fn spmc_contacts_on_flip_trajectory(
    s: &BellDiagonalState,
    axis: FlipAxis,
    pair: ObservablePair,
    tol: f64,
) -> SpmcContact {
    const STEPS: usize = 2000;
    let residual = |eta: f64| {
        let moved = crate::channels::scale_bd_off_axis(s, axis, 1.0 - 2.0 * eta);
        spmc_residual(moved.coeffs(), pair)
    };
    let etas: Vec<f64> = (0..=STEPS).map(|n| n as f64 / STEPS as f64).collect();
    let values: Vec<f64> = etas.iter().map(|&e| residual(e)).collect();
    if values.iter().all(|v| v.abs() <= tol) {
        return SpmcContact::Everywhere;
    }

    let mut points: Vec<f64> = Vec::new();
    let push = |eta: f64, points: &mut Vec<f64>| {
        if points
            .last()
            .is_none_or(|&p| (eta - p).abs() > 2.0 / STEPS as f64)
        {
            points.push(eta);
        }
    };
    for n in 0..=STEPS {
        if values[n].abs() <= tol {
            // Keep the local minimum of |residual| within a run of small values.
            let left = n.checked_sub(1).map_or(f64::INFINITY, |m| values[m].abs());
            let right = values.get(n + 1).map_or(f64::INFINITY, |v| v.abs());
            if values[n].abs() <= left && values[n].abs() <= right {
                push(etas[n], &mut points);
            }
        } else if n < STEPS
            && values[n + 1].abs() > tol
            && values[n].signum() != values[n + 1].signum()
        {
            let (mut lo, mut hi) = (etas[n], etas[n + 1]);
            let lo_sign = values[n].signum();
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if residual(mid).signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            push(0.5 * (lo + hi), &mut points);
        }
    }
    SpmcContact::Points(points)
}

/// Wootters concurrence.
///
/// The general route takes the square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ` with `ρ̃ = (σ2⊗σ2) ρ* (σ2⊗σ2)`. For X-shaped states the
/// closed form is evaluated as well; the two must agree, and the closed form
/// is returned since it has no square-root amplification near zero.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let general = concurrence_wootters(rho)?;
    if let Some(closed) = concurrence_x_state(rho) {
        if (closed - general).abs() > CONCURRENCE_ROUTE_TOL {
            return Err(Error::domain(format!(
                "concurrence routes disagree: Wootters {general}, X-state {closed}"
            )));
        }
        return Ok(closed);
    }
    Ok(general)
}

/// The general Wootters route only.
pub fn concurrence_wootters(rho: &TwoQubitDensity) -> Result<f64> {
    let m = rho.matrix();
    let eig = hermitian_eigen(m)?;
    let mut sqrt_diag = Mat4::zeros();
    for (k, &l) in eig.values.iter().enumerate() {
        sqrt_diag[(k, k)] = C64::new(l.max(0.0).sqrt(), 0.0);
    }
    let sqrt_rho = eig.vectors * sqrt_diag * eig.vectors.adjoint();
    let yy = tensor_product(&pauli(2), &pauli(2));
    let tilde = yy * m.conj() * yy;
    let r = sqrt_rho * tilde * sqrt_rho;
    let r = (r + r.adjoint()).scale(0.5);
    let s = hermitian_eigenvalues(&r)?.map(|l| l.max(0.0).sqrt());
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// `2 max(0, |ρ₂₃| - √(ρ₁₁ρ₄₄), |ρ₁₄| - √(ρ₂₂ρ₃₃))` if `rho` has X shape.
pub fn concurrence_x_state(rho: &TwoQubitDensity) -> Option<f64> {
    let m = rho.matrix();
    let on_pattern = |i: usize, j: usize| i == j || i + j == 3;
    for i in 0..4 {
        for j in 0..4 {
            if !on_pattern(i, j) && m[(i, j)].norm() >= X_PATTERN_TOL {
                return None;
            }
        }
    }
    let d = |i: usize| m[(i, i)].re.max(0.0);
    let a = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    let b = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    Some(2.0 * a.max(b).max(0.0))
}

/// Grid for the brute-force minimisation over `(θ, ξ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridResolution {
    /// Points on `θ ∈ [0, π]`, endpoints included.
    pub theta: usize,
    /// Points on `ξ ∈ [0, 2π]`, endpoints included.
    pub xi: usize,
}

impl GridResolution {
    pub const MIN_POINTS: usize = 64;

    pub fn new(theta: usize, xi: usize) -> Result<Self> {
        if theta < Self::MIN_POINTS || xi < Self::MIN_POINTS {
            return Err(Error::domain(format!(
                "brute-force grid needs at least {} points per angle, got {theta}×{xi}",
                Self::MIN_POINTS
            )));
        }
        Ok(GridResolution { theta, xi })
    }
}

impl Default for GridResolution {
    /// One-degree spacing on both angles.
    fn default() -> Self {
        GridResolution {
            theta: 181,
            xi: 361,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MissingInfoMinimum {
    /// Minimal missing information `M` in bits.
    pub m: f64,
    pub argmin: MeasurementProjectors,
}

/// `Σ_k q_k S(ρ_A^k)` for the measurement `proj` on qubit B.
pub fn missing_info_for_measurement(rho: &TwoQubitDensity, proj: MeasurementProjectors) -> f64 {
    missing_info_at(rho.matrix(), proj.theta, proj.xi)
}

fn missing_info_at(rho: &Mat4, theta: f64, xi: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let phase = C64::from_polar(1.0, xi);
    let outcomes = [
        [C64::new(c, 0.0), phase * s],
        [phase.conj() * s, C64::new(-c, 0.0)],
    ];
    outcomes
        .iter()
        .map(|b| {
            // Unnormalised conditional state of A: <b|_B ρ |b>_B.
            let mut block = Mat2::zeros();
            for a in 0..2 {
                for a2 in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..2 {
                        for l in 0..2 {
                            acc += b[j].conj() * rho[(2 * a + j, 2 * a2 + l)] * b[l];
                        }
                    }
                    block[(a, a2)] = acc;
                }
            }
            weighted_qubit_entropy(&block)
        })
        .sum()
}

/// Minimal missing information `M = min_{B_k} Σ_k q_k S(ρ_A^k)` over
/// projective measurements on B, by exhaustive search.
///
/// A coarse `(θ, ξ)` grid is scanned first; the best grid point is then
/// refined by alternating golden-section searches on each angle, within one
/// grid step, until a round improves `M` by less than `1e-10` bits. Ties are
/// broken towards the lexicographically smallest `(θ, ξ)`, so the result is
/// deterministic.
/// Values closer than this count as ties; the earlier grid point wins.
const ARGMIN_TIE_TOL: f64 = 1e-12;

pub fn minimal_missing_info_bruteforce(
    rho: &TwoQubitDensity,
    grid: GridResolution,
) -> Result<MissingInfoMinimum> {
    let grid = GridResolution::new(grid.theta, grid.xi)?;
    let m = rho.matrix();
    let theta_step = PI / (grid.theta - 1) as f64;
    let xi_step = 2.0 * PI / (grid.xi - 1) as f64;

    let row_minima: Vec<(f64, usize, usize)> = (0..grid.theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * theta_step;
            let mut best = (f64::INFINITY, i, 0);
            for j in 0..grid.xi {
                let v = missing_info_at(m, theta, j as f64 * xi_step);
                if v < best.0 - ARGMIN_TIE_TOL {
                    best = (v, i, j);
                }
            }
            best
        })
        .collect();
    let (mut value, i, j) = row_minima
        .into_iter()
        .fold((f64::INFINITY, 0, 0), |acc, row| {
            if row.0 < acc.0 - ARGMIN_TIE_TOL {
                row
            } else {
                acc
            }
        });
    let mut theta = i as f64 * theta_step;
    let mut xi = j as f64 * xi_step;

    for _ in 0..100 {
        let start = value;
        let (t, v) = golden_section(
            |t| missing_info_at(m, t, xi),
            (theta - theta_step).max(0.0),
            (theta + theta_step).min(PI),
        );
        if v < value - ARGMIN_TIE_TOL {
            theta = t;
            value = v;
        }
        let (x, v) = golden_section(|x| missing_info_at(m, theta, x), xi - xi_step, xi + xi_step);
        if v < value - ARGMIN_TIE_TOL {
            xi = x;
            value = v;
        }
        if start - value < 1e-10 {
            break;
        }
    }

    Ok(MissingInfoMinimum {
        m: value,
        argmin: MeasurementProjectors {
            theta,
            xi: xi.rem_euclid(2.0 * PI),
        },
    })
}

/// Golden-section minimisation of `f` on `[lo, hi]`; returns `(x, f(x))`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `M = H((1 + C_max)/2)` for a Bell-diagonal state,
/// `C_max = max_j |c_j|`.
pub fn minimal_missing_info_bd(s: &BellDiagonalState) -> f64 {
    let c_max = s.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    binary_entropy_clamped((1.0 + c_max) / 2.0)
}

/// How a value of `M` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MissingInfoRoute {
    ClosedForm,
    /// The closed form's precondition failed; the brute-force minimiser was used.
    BruteForceFallback,
}

/// `M` for an amplitude-damped Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdMissingInfo {
    pub m: f64,
    pub route: MissingInfoRoute,
    /// Missing information after a σ1 measurement on B (closed form only).
    pub m_x: Option<f64>,
    /// Missing information after a σ3 measurement on B (closed form only).
    pub m_z: Option<f64>,
    /// Optimal measurements; both σ1 and σ3 when they tie.
    pub argmins: [Option<MeasurementProjectors>; 2],
}

/// Minimal missing information of `s0` after amplitude damping `Γt` on A.
///
/// For `|c1| >= |c2|` the optimum is a σ1 or σ3 measurement on B:
/// `M = min{H((1+u)/2), [H(v₊) + H(v₋)]/2}` with
/// `u² = e^{-Γt}[c1² + 2cosh(Γt) - 2]` and `v± = (1 ± c3)e^{-Γt}/2`.
/// Otherwise falls back to [`minimal_missing_info_bruteforce`].
pub fn minimal_missing_info_ad(s0: &BellDiagonalState, gamma_t: f64) -> Result<AdMissingInfo> {
    let rho = crate::channels::evolve_bd_amplitude(s0, gamma_t)?;
    let [c1, c2, c3] = s0.coeffs();
    if c1.abs() < c2.abs() {
        let min = minimal_missing_info_bruteforce(&rho, GridResolution::default())?;
        return Ok(AdMissingInfo {
            m: min.m,
            route: MissingInfoRoute::BruteForceFallback,
            m_x: None,
            m_z: None,
            argmins: [Some(min.argmin), None],
        });
    }
    let decay = (-gamma_t).exp();
    // e^{-Γt}(2cosh Γt - 2) = (1 - e^{-Γt})², which stays finite for large Γt.
    let u = (c1 * c1 * decay + (-(-gamma_t).exp_m1()).powi(2))
        .sqrt()
        .min(1.0);
    let m_x = binary_entropy_clamped((1.0 + u) / 2.0);
    let v_plus = (1.0 + c3) * decay / 2.0;
    let v_minus = (1.0 - c3) * decay / 2.0;
    let m_z = (binary_entropy_clamped(v_plus) + binary_entropy_clamped(v_minus)) / 2.0;
    let argmins = match m_x.partial_cmp(&m_z) {
        Some(std::cmp::Ordering::Less) => [Some(MeasurementProjectors::X), None],
        Some(std::cmp::Ordering::Greater) => [Some(MeasurementProjectors::Z), None],
        _ => [
            Some(MeasurementProjectors::Z),
            Some(MeasurementProjectors::X),
        ],
    };
    Ok(AdMissingInfo {
        m: m_x.min(m_z),
        route: MissingInfoRoute::ClosedForm,
        m_x: Some(m_x),
        m_z: Some(m_z),
        argmins,
    })
}

/// Discord `D = -S(A|B) + M` given a value for `M`.
pub fn discord_from_missing_info(rho: &TwoQubitDensity, m: f64) -> Result<f64> {
    Ok(m - conditional_entropy(rho)?)
}

/// Discord `D = -S(A|B) + M`; `M` comes from the Bell-diagonal closed form
/// when `rho` is Bell-diagonal and from the brute-force minimiser otherwise.
pub fn discord(rho: &TwoQubitDensity) -> Result<f64> {
    match rho.as_bell_diagonal() {
        Some(s) => discord_from_missing_info(rho, minimal_missing_info_bd(&s)),
        None => discord_bruteforce(rho, GridResolution::default()),
    }
}

/// Discord with `M` always from the brute-force minimiser.
pub fn discord_bruteforce(rho: &TwoQubitDensity, grid: GridResolution) -> Result<f64> {
    let min = minimal_missing_info_bruteforce(rho, grid)?;
    discord_from_missing_info(rho, min.m)
}

/// Reads discord off the measured uncertainty, `D = const - U`, with
/// `const = log2(1/c) + H((1 + |c_i|)/2)`.
///
/// Valid for an initial state `s0` under Σ_i noise when `|c_i|` dominates
/// the other two coefficients, the measured pair contains `σ_i`, and `s0`
/// lies on the SPMC surface of that pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordWitness {
    axis: FlipAxis,
    pair: ObservablePair,
    constant: f64,
}

impl DiscordWitness {
    pub fn new(s0: &BellDiagonalState, axis: FlipAxis, pair: ObservablePair) -> Result<Self> {
        let i = axis.index();
        if !pair.contains(i) {
            return Err(Error::WitnessNotValid(format!(
                "measured pair ({pair}) does not contain σ{i}"
            )));
        }
        let ci = s0.coeff(i).abs();
        for m in (1..=3).filter(|&m| m != i) {
            if s0.coeff(m).abs() > ci {
                return Err(Error::WitnessNotValid(format!(
                    "|C_σ{i}| = {ci} is smaller than |C_σ{m}| = {}",
                    s0.coeff(m).abs()
                )));
            }
        }
        if !spmc_holds(s0, pair, WITNESS_SPMC_TOL) {
            return Err(Error::WitnessNotValid(format!(
                "initial state is not on the SPMC surface of pair ({pair}): residual {:e}",
                spmc_residual(s0.coeffs(), pair)
            )));
        }
        let constant = -complementarity(pair).log2() + binary_entropy_clamped((1.0 + ci) / 2.0);
        Ok(DiscordWitness {
            axis,
            pair,
            constant,
        })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn axis(&self) -> FlipAxis {
        self.axis
    }

    pub fn pair(&self) -> ObservablePair {
        self.pair
    }

    pub fn discord(&self, u: f64) -> f64 {
        self.constant - u
    }

    /// Like [`DiscordWitness::discord`], also flagging flip probabilities
    /// past the fully dephasing point `η = ½` as extrapolated.
    pub fn discord_at(&self, u: f64, eta: f64) -> WitnessReading {
        WitnessReading {
            discord: self.discord(u),
            extrapolated: eta > 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessReading {
    pub discord: f64,
    pub extrapolated: bool,
}

pub fn witness_discord_from_u(
    s0: &BellDiagonalState,
    axis: FlipAxis,
    pair: ObservablePair,
    u: f64,
) -> Result<f64> {
    Ok(DiscordWitness::new(s0, axis, pair)?.discord(u))
}
