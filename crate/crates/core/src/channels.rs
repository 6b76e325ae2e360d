//! Local noise on qubit A.
//!
//! Every channel acts as `ρ ↦ Σ_μ (κ_μ ⊗ 𝟙) ρ (κ_μ ⊗ 𝟙)†`; qubit B is a
//! noiseless memory. Channels are parameterised by the dimensionless product
//! `Γt` rather than by rate and time separately.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{pauli, tensor_product, Mat2, Mat4};
use crate::states::{BellDiagonalState, TwoQubitDensity};

const TRACE_PRESERVATION_TOL: f64 = 1e-10;
pub const UNITALITY_TOL: f64 = 1e-10;

/// Σ_l noise: the Pauli error applied with probability η.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipAxis {
    BitFlip = 1,
    BitPhaseFlip = 2,
    PhaseFlip = 3,
}

impl FlipAxis {
    pub const ALL: [FlipAxis; 3] = [
        FlipAxis::BitFlip,
        FlipAxis::BitPhaseFlip,
        FlipAxis::PhaseFlip,
    ];

    pub fn from_index(l: usize) -> Result<Self> {
        match l {
            1 => Ok(FlipAxis::BitFlip),
            2 => Ok(FlipAxis::BitPhaseFlip),
            3 => Ok(FlipAxis::PhaseFlip),
            _ => Err(Error::domain(format!(
                "flip axis must be 1, 2 or 3, got {l}"
            ))),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelKind {
    Flip {
        axis: FlipAxis,
        eta: f64,
    },
    PhaseDamping {
        gamma_t: f64,
    },
    /// `relabeled == false` is the orientation in which population decays
    /// from |0> to |1>.
    AmplitudeDamping {
        gamma_t: f64,
        relabeled: bool,
    },
    Custom,
}

/// A trace-preserving set of single-qubit Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Mat2>,
    kind: ChannelKind,
    label: String,
}

impl KrausChannel {
    /// A channel from arbitrary Kraus operators; rejects sets that are not
    /// trace preserving.
    pub fn new(label: impl Into<String>, operators: Vec<Mat2>) -> Result<Self> {
        let ch = KrausChannel {
            operators,
            kind: ChannelKind::Custom,
            label: label.into(),
        };
        ch.check_trace_preserving()?;
        Ok(ch)
    }

    pub fn identity() -> Self {
        KrausChannel {
            operators: vec![Mat2::identity()],
            kind: ChannelKind::Flip {
                axis: FlipAxis::BitFlip,
                eta: 0.0,
            },
            label: "identity".into(),
        }
    }

    pub fn operators(&self) -> &[Mat2] {
        &self.operators
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Set for flip channels with η > ½, which lie past the fully dephasing
    /// point but are still well defined.
    pub fn is_extrapolated(&self) -> bool {
        matches!(self.kind, ChannelKind::Flip { eta, .. } if eta > 0.5)
    }

    /// Flip probability of the phase-flip channel equivalent to this phase
    /// damping, `η₃ = (1 - e^{-Γt/2}) / 2`.
    pub fn equivalent_flip_eta(&self) -> Option<f64> {
        match self.kind {
            ChannelKind::PhaseDamping { gamma_t } => Some(phase_damping_flip_eta(gamma_t)),
            ChannelKind::Flip {
                axis: FlipAxis::PhaseFlip,
                eta,
            } => Some(eta),
            _ => None,
        }
    }

    /// Largest entry of `|Σ κ†κ - 𝟙|`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(Mat2::zeros(), |acc, k| acc + k.adjoint() * *k);
        sum.max_abs_diff(&Mat2::identity())
    }

    fn check_trace_preserving(&self) -> Result<()> {
        let defect = self.trace_preservation_defect();
        if defect.is_nan() || defect > TRACE_PRESERVATION_TOL {
            return Err(Error::Channel(format!(
                "{}: Σ κ†κ deviates from identity by {defect:e}",
                self.label
            )));
        }
        Ok(())
    }

    /// Single-qubit action `ρ ↦ Σ κ ρ κ†`.
    pub fn apply_single(&self, rho: &Mat2) -> Mat2 {
        self.operators
            .iter()
            .fold(Mat2::zeros(), |acc, k| acc + k.sandwich(rho))
    }
}

impl fmt::Display for KrausChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_gamma_t(gamma_t: f64) -> Result<()> {
    if gamma_t.is_nan() || gamma_t < 0.0 {
        return Err(Error::domain(format!(
            "Γt must be non-negative, got {gamma_t}"
        )));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!(
            "flip probability η must lie in [0, 1], got {eta}"
        )));
    }
    Ok(())
}

/// `κ₀ = √(1-η) 𝟙`, `κ₁ = √η σ_l`.
pub fn make_flip_channel(axis: FlipAxis, eta: f64) -> Result<KrausChannel> {
    check_eta(eta)?;
    Ok(KrausChannel {
        operators: vec![
            Mat2::identity().scale((1.0 - eta).sqrt()),
            pauli(axis.index()).scale(eta.sqrt()),
        ],
        kind: ChannelKind::Flip { axis, eta },
        label: format!("flip:{}:{eta}", axis.index()),
    })
}

pub fn phase_damping_flip_eta(gamma_t: f64) -> f64 {
    0.5 * (1.0 - (-gamma_t / 2.0).exp())
}

/// `κ₀ = |0><0| + e^{-Γt/2}|1><1|`, `κ₁ = √(1-e^{-Γt}) |1><1|`.
pub fn make_phase_damping(gamma_t: f64) -> Result<KrausChannel> {
    check_gamma_t(gamma_t)?;
    let mut k0 = Mat2::identity();
    k0[(1, 1)] = real((-gamma_t / 2.0).exp());
    let mut k1 = Mat2::zeros();
    k1[(1, 1)] = real((-(-gamma_t).exp_m1()).sqrt());
    Ok(KrausChannel {
        operators: vec![k0, k1],
        kind: ChannelKind::PhaseDamping { gamma_t },
        label: format!("pd:{gamma_t}"),
    })
}

/// `κ₀ = e^{-Γt/2}|0><0| + |1><1|`, `κ₁ = √(1-e^{-Γt}) |1><0|`.
///
/// Population decays from |0> towards |1>. See
/// [`make_amplitude_damping_relabeled`] for the opposite orientation.
pub fn make_amplitude_damping(gamma_t: f64) -> Result<KrausChannel> {
    check_gamma_t(gamma_t)?;
    let mut k0 = Mat2::identity();
    k0[(0, 0)] = real((-gamma_t / 2.0).exp());
    let mut k1 = Mat2::zeros();
    k1[(1, 0)] = real((-(-gamma_t).exp_m1()).sqrt());
    Ok(KrausChannel {
        operators: vec![k0, k1],
        kind: ChannelKind::AmplitudeDamping {
            gamma_t,
            relabeled: false,
        },
        label: format!("ad:{gamma_t}"),
    })
}

/// Amplitude damping towards |0>: `κ₀ = |0><0| + e^{-Γt/2}|1><1|`,
/// `κ₁ = √(1-e^{-Γt}) |0><1|`.
pub fn make_amplitude_damping_relabeled(gamma_t: f64) -> Result<KrausChannel> {
    check_gamma_t(gamma_t)?;
    let mut k0 = Mat2::identity();
    k0[(1, 1)] = real((-gamma_t / 2.0).exp());
    let mut k1 = Mat2::zeros();
    k1[(0, 1)] = real((-(-gamma_t).exp_m1()).sqrt());
    Ok(KrausChannel {
        operators: vec![k0, k1],
        kind: ChannelKind::AmplitudeDamping {
            gamma_t,
            relabeled: true,
        },
        label: format!("ad-relabeled:{gamma_t}"),
    })
}

/// True iff `Σ κ κ† = 𝟙` within `tol`, i.e. the channel fixes `𝟙/2`.
pub fn is_unital(ch: &KrausChannel, tol: f64) -> bool {
    let sum = ch
        .operators
        .iter()
        .fold(Mat2::zeros(), |acc, k| acc + *k * k.adjoint());
    sum.max_abs_diff(&Mat2::identity()) <= tol
}

/// Applies `ch` to qubit A of `rho`.
pub fn apply_local_a(ch: &KrausChannel, rho: &TwoQubitDensity) -> Result<TwoQubitDensity> {
    ch.check_trace_preserving()?;
    let id = Mat2::identity();
    let out = ch.operators.iter().fold(Mat4::zeros(), |acc, k| {
        acc + tensor_product(k, &id).sandwich(rho.matrix())
    });
    Ok(TwoQubitDensity::from_trusted(out))
}

/// Closed-form Σ_l noise on a Bell-diagonal state: `c_l` is kept and the
/// other two coefficients are scaled by `1 - 2η`.
pub fn evolve_bd_flip(
    s: &BellDiagonalState,
    axis: FlipAxis,
    eta: f64,
) -> Result<BellDiagonalState> {
    check_eta(eta)?;
    Ok(scale_bd_off_axis(s, axis, 1.0 - 2.0 * eta))
}

/// Scales the two coefficients other than `axis` by `factor ∈ [-1, 1]`.
pub(crate) fn scale_bd_off_axis(
    s: &BellDiagonalState,
    axis: FlipAxis,
    factor: f64,
) -> BellDiagonalState {
    debug_assert!(factor.abs() <= 1.0);
    let mut c = s.coeffs();
    for (m, cm) in c.iter_mut().enumerate() {
        if m + 1 != axis.index() {
            *cm *= factor;
        }
    }
    BellDiagonalState::from_trusted(c)
}

/// Closed-form amplitude damping (verbatim orientation) of a Bell-diagonal
/// state. The result is an X state
///
/// ```text
///       ⎡ v₊  0   0    w₋  ⎤
///   ½ · ⎢ 0   v₋  w₊   0   ⎥
///       ⎢ 0   w₊  1-v₊ 0   ⎥
///       ⎣ w₋  0   0    1-v₋⎦
/// ```
///
/// with `v± = e^{-Γt}(1 ± c₃)/2` and `w± = e^{-Γt/2}(c₁ ± c₂)/2`.
pub fn evolve_bd_amplitude(s: &BellDiagonalState, gamma_t: f64) -> Result<TwoQubitDensity> {
    check_gamma_t(gamma_t)?;
    let [c1, c2, c3] = s.coeffs();
    let decay = (-gamma_t).exp();
    let coherence = (-gamma_t / 2.0).exp();
    let v_plus = decay * (1.0 + c3) / 2.0;
    let v_minus = decay * (1.0 - c3) / 2.0;
    let w_plus = coherence * (c1 + c2) / 2.0;
    let w_minus = coherence * (c1 - c2) / 2.0;
    let mut m = Mat4::diag([v_plus, v_minus, 1.0 - v_plus, 1.0 - v_minus]);
    m[(0, 3)] = real(w_minus);
    m[(3, 0)] = real(w_minus);
    m[(1, 2)] = real(w_plus);
    m[(2, 1)] = real(w_plus);
    Ok(TwoQubitDensity::from_trusted(m.scale(0.5)))
}

/// A channel as written on the command line: `flip:<axis>:<eta>`,
/// `pd:<gamma_t>`, `pd:<gamma>:<t>` or `ad:<gamma_t>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelSpec {
    Flip { axis: FlipAxis, eta: f64 },
    PhaseDamping { gamma_t: f64 },
    AmplitudeDamping { gamma_t: f64 },
}

impl ChannelSpec {
    pub fn to_channel(&self) -> Result<KrausChannel> {
        match *self {
            ChannelSpec::Flip { axis, eta } => make_flip_channel(axis, eta),
            ChannelSpec::PhaseDamping { gamma_t } => make_phase_damping(gamma_t),
            ChannelSpec::AmplitudeDamping { gamma_t } => make_amplitude_damping(gamma_t),
        }
    }

    pub fn is_unital(&self) -> bool {
        !matches!(self, ChannelSpec::AmplitudeDamping { .. })
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Flip { axis, eta } => write!(f, "flip:{}:{eta}", axis.index()),
            ChannelSpec::PhaseDamping { gamma_t } => write!(f, "pd:{gamma_t}"),
            ChannelSpec::AmplitudeDamping { gamma_t } => write!(f, "ad:{gamma_t}"),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = Vec::new();
        let mut start = 0;
        for part in s.split(':') {
            fields.push((start, part));
            start += part.len() + 1;
        }
        let number = |(pos, text): (usize, &str)| -> Result<f64> {
            text.trim()
                .parse::<f64>()
                .map_err(|e| Error::parse(s, pos, format!("invalid number {text:?}: {e}")))
        };
        let spec = match fields.as_slice() {
            [(_, "flip"), axis, eta] => {
                let l = axis
                    .1
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(s, axis.0, "flip axis must be 1, 2 or 3"))?;
                let axis = FlipAxis::from_index(l)
                    .map_err(|_| Error::parse(s, axis.0, "flip axis must be 1, 2 or 3"))?;
                let eta = number(*eta)?;
                check_eta(eta)?;
                ChannelSpec::Flip { axis, eta }
            }
            [(_, "pd"), gt] => ChannelSpec::PhaseDamping {
                gamma_t: number(*gt)?,
            },
            [(_, "pd"), g, t] => ChannelSpec::PhaseDamping {
                gamma_t: number(*g)? * number(*t)?,
            },
            [(_, "ad"), gt] => ChannelSpec::AmplitudeDamping {
                gamma_t: number(*gt)?,
            },
            [(_, "flip" | "pd" | "ad"), ..] => {
                return Err(Error::parse(s, s.len(), "wrong number of fields"))
            }
            _ => return Err(Error::parse(s, 0, "expected `flip:`, `pd:` or `ad:`")),
        };
        if let ChannelSpec::PhaseDamping { gamma_t } | ChannelSpec::AmplitudeDamping { gamma_t } =
            spec
        {
            check_gamma_t(gamma_t)?;
        }
        Ok(spec)
    }
}
