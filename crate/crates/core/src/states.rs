//! Bell-diagonal and general two-qubit states.
//!
//! A Bell-diagonal state is `ρ = ¼(𝟙⊗𝟙 + Σ_j c_j σ_j⊗σ_j)`. Its three
//! correlation coefficients range over a tetrahedron whose vertices are the
//! four Bell states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    density_spectrum, pauli, tensor_product, Mat4, ProbabilityVector, HERMITIAN_TOL,
};

/// Tetrahedron membership tolerance on the Bell-basis eigenvalues.
pub const TETRAHEDRON_TOL: f64 = 1e-12;
const BELL_DIAGONAL_MATCH_TOL: f64 = 1e-10;

/// Spectrum of a Bell-diagonal state in the Bell basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumBD {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
}

impl SpectrumBD {
    pub fn from_coeffs(c1: f64, c2: f64, c3: f64) -> Self {
        SpectrumBD {
            phi_plus: (1.0 + c1 - c2 + c3) / 4.0,
            phi_minus: (1.0 - c1 + c2 + c3) / 4.0,
            psi_plus: (1.0 + c1 + c2 - c3) / 4.0,
            psi_minus: (1.0 - c1 - c2 - c3) / 4.0,
        }
    }

    /// `[Φ+, Φ-, Ψ+, Ψ-]`
    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus]
    }

    pub fn min(&self) -> f64 {
        self.as_array().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn to_probabilities(&self) -> ProbabilityVector {
        ProbabilityVector::new(self.as_array().to_vec())
            .expect("spectrum of a valid Bell-diagonal state is a distribution")
    }
}

/// True iff `(c1, c2, c3)` lies in the Bell-diagonal tetrahedron.
pub fn is_valid(c1: f64, c2: f64, c3: f64) -> bool {
    [c1, c2, c3]
        .iter()
        .all(|c| c.is_finite() && c.abs() <= 1.0 + TETRAHEDRON_TOL)
        && SpectrumBD::from_coeffs(c1, c2, c3).min() >= -TETRAHEDRON_TOL
}

/// A valid Bell-diagonal state `(C_σ1, C_σ2, C_σ3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalState {
    c: [f64; 3],
}

impl BellDiagonalState {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if !is_valid(c1, c2, c3) {
            return Err(Error::domain(format!(
                "({c1}, {c2}, {c3}) is outside the Bell-diagonal tetrahedron"
            )));
        }
        Ok(BellDiagonalState { c: [c1, c2, c3] })
    }

    /// Maximally mixed state `𝟙/4`.
    pub fn maximally_mixed() -> Self {
        BellDiagonalState { c: [0.0; 3] }
    }

    /// Builds a state from coefficients that are valid by construction, e.g.
    /// the image of a valid state under a contraction.
    pub(crate) fn from_trusted(c: [f64; 3]) -> Self {
        debug_assert!(is_valid(c[0], c[1], c[2]), "{c:?}");
        BellDiagonalState { c }
    }

    pub fn coeffs(&self) -> [f64; 3] {
        self.c
    }

    /// Correlation coefficient for Pauli `index` in 1..=3.
    pub fn coeff(&self, index: usize) -> f64 {
        self.c[index - 1]
    }

    pub fn bell_eigenvalues(&self) -> SpectrumBD {
        SpectrumBD::from_coeffs(self.c[0], self.c[1], self.c[2])
    }

    pub fn to_density(&self) -> TwoQubitDensity {
        TwoQubitDensity(bd_matrix(self.c))
    }

    /// Uniform sample from the tetrahedron by rejection from the cube `[-1, 1]³`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
            if is_valid(c[0], c[1], c[2]) {
                return BellDiagonalState { c };
            }
        }
    }
}

impl fmt::Display for BellDiagonalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bd:{},{},{}", self.c[0], self.c[1], self.c[2])
    }
}

/// Parses the `bd:c1,c2,c3` literal.
impl FromStr for BellDiagonalState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("bd:")
            .ok_or_else(|| Error::parse(s, 0, "expected prefix `bd:`"))?;
        let mut c = [0.0; 3];
        let mut offset = 3;
        let mut fields = body.split(',');
        for (i, slot) in c.iter_mut().enumerate() {
            let field = fields.next().ok_or_else(|| {
                Error::parse(s, s.len(), format!("expected 3 coefficients, got {i}"))
            })?;
            *slot = field.trim().parse().map_err(|e| {
                Error::parse(s, offset, format!("invalid coefficient {field:?}: {e}"))
            })?;
            offset += field.len() + 1;
        }
        if fields.next().is_some() {
            return Err(Error::parse(
                s,
                offset - 1,
                "expected exactly 3 coefficients",
            ));
        }
        BellDiagonalState::new(c[0], c[1], c[2])
    }
}

fn bd_matrix(c: [f64; 3]) -> Mat4 {
    let [c1, c2, c3] = c;
    let mut m = Mat4::diag([
        (1.0 + c3) / 4.0,
        (1.0 - c3) / 4.0,
        (1.0 - c3) / 4.0,
        (1.0 + c3) / 4.0,
    ]);
    let corner = C64::new((c1 - c2) / 4.0, 0.0);
    let inner = C64::new((c1 + c2) / 4.0, 0.0);
    m[(0, 3)] = corner;
    m[(3, 0)] = corner;
    m[(1, 2)] = inner;
    m[(2, 1)] = inner;
    m
}

/// A two-qubit density operator: Hermitian, unit trace, positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitDensity(Mat4);

impl TwoQubitDensity {
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::domain("density matrix is not Hermitian"));
        }
        density_spectrum(&m)?;
        Ok(TwoQubitDensity(m))
    }

    /// Wraps a matrix produced by a map that preserves density validity.
    pub(crate) fn from_trusted(m: Mat4) -> Self {
        TwoQubitDensity(m)
    }

    /// `|ψ><ψ|` for a normalised pure state.
    pub fn pure(psi: [C64; 4]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("state vector has norm² {norm}")));
        }
        Ok(TwoQubitDensity(Mat4::outer(&psi)))
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitDensity(Mat4::identity().scale(0.25))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn spectrum(&self) -> Result<ProbabilityVector> {
        density_spectrum(&self.0)
    }

    /// `tr(ρ σ_j⊗σ_j)` for j = 1, 2, 3, plus whether ρ is Bell-diagonal.
    pub fn correlations(&self) -> Correlations {
        let coeffs: [f64; 3] = std::array::from_fn(|j| {
            let p = pauli(j + 1);
            (self.0 * tensor_product(&p, &p)).trace().re
        });
        let bell_diagonal = bd_matrix(coeffs).max_abs_diff(&self.0) <= BELL_DIAGONAL_MATCH_TOL;
        Correlations {
            coeffs,
            bell_diagonal,
        }
    }

    /// The Bell-diagonal parameters of ρ, if it is Bell-diagonal.
    pub fn as_bell_diagonal(&self) -> Option<BellDiagonalState> {
        let corr = self.correlations();
        if !corr.bell_diagonal {
            return None;
        }
        let [c1, c2, c3] = corr.coeffs;
        BellDiagonalState::new(c1, c2, c3).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlations {
    pub coeffs: [f64; 3],
    /// ρ is reproduced entry-wise (within 1e-10) by the Bell-diagonal state
    /// built from `coeffs`.
    pub bell_diagonal: bool,
}
