//! Time sweeps, long-time classification under amplitude damping, SPMC
//! surface sampling and the unital-monotonicity check.
//!
//! In a sweep the channel literal describes one unit of time: `pd:Γ` and
//! `ad:Γ` evolve to `Γ·t`, and `flip:l:η` is composed with itself `t` times,
//! which scales the off-axis coefficients by `(1 - 2η)^t`.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{
    apply_local_a, evolve_bd_amplitude, make_amplitude_damping, make_flip_channel,
    make_phase_damping, phase_damping_flip_eta, scale_bd_off_axis, ChannelSpec, FlipAxis,
    KrausChannel,
};
use crate::error::{Error, Result};
use crate::linalg::von_neumann_entropy;
use crate::metrics::{
    concurrence, conditional_entropy, lower_bound_ub, lower_bound_ub_bd, minimal_missing_info_ad,
    minimal_missing_info_bd, uncertainty_u, ObservablePair,
};
use crate::states::{BellDiagonalState, TwoQubitDensity};

/// `Γt` standing in for the infinite-time limit.
pub const LONG_TIME_GAMMA_T: f64 = 50.0;
/// Half-width of the band in which a classification is `Boundary`.
pub const BOUNDARY_BAND: f64 = 1e-9;
/// Tolerance for the monotonicity assertions of [`property_check_unital`].
pub const MONOTONICITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn linear(start: f64, end: f64, points: usize) -> Self {
        TimeGrid {
            start,
            end,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start >= 0.0 && self.start < self.end && self.end.is_finite()) {
            return Err(Error::domain(format!(
                "time grid needs 0 <= start < end, got [{}, {}]",
                self.start, self.end
            )));
        }
        if self.points < 2 {
            return Err(Error::domain(format!(
                "time grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err(Error::domain("logarithmic time grid needs start > 0"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|n| {
                if n == self.points - 1 {
                    return self.end;
                }
                let f = n as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.end - self.start) * f,
                    Spacing::Log => self.start * (self.end / self.start).powf(f),
                }
            })
            .collect()
    }
}

/// A CSV column of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    U,
    Ub,
    D,
    E,
    M,
}

impl Column {
    pub const ALL: [Column; 5] = [Column::U, Column::Ub, Column::D, Column::E, Column::M];

    pub fn header(self) -> &'static str {
        match self {
            Column::U => "U",
            Column::Ub => "Ub",
            Column::D => "D",
            Column::E => "E",
            Column::M => "M",
        }
    }

    pub fn from_header(s: &str) -> Option<Self> {
        Column::ALL.into_iter().find(|c| c.header() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub initial: BellDiagonalState,
    pub channel: ChannelSpec,
    pub pair: ObservablePair,
    pub grid: TimeGrid,
    /// Emitted columns; always written in the order U, Ub, D, E, M.
    pub outputs: Vec<Column>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if let ChannelSpec::Flip { eta, .. } = self.channel {
            if eta > 0.5 {
                return Err(Error::domain(format!(
                    "a flip with η = {eta} > ½ per unit time has no continuous-time extension"
                )));
            }
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<Column> {
        let mut cols = self.outputs.clone();
        cols.sort();
        cols.dedup();
        cols
    }
}

fn preset(initial: [f64; 3], channel: ChannelSpec) -> SweepConfig {
    SweepConfig {
        initial: BellDiagonalState::new(initial[0], initial[1], initial[2])
            .expect("preset state is valid"),
        channel,
        pair: ObservablePair::from_indices(1, 3).expect("distinct"),
        grid: TimeGrid::linear(0.0, 10.0, 201),
        outputs: Column::ALL.to_vec(),
    }
}

/// (−0.5, 0.4, 0.8) under phase damping, measuring σ1 and σ3.
pub fn fig2_preset() -> SweepConfig {
    preset([-0.5, 0.4, 0.8], ChannelSpec::PhaseDamping { gamma_t: 1.0 })
}

/// (−0.5, 0.4, 0.8) under amplitude damping, measuring σ1 and σ3.
pub fn fig3_preset() -> SweepConfig {
    preset(
        [-0.5, 0.4, 0.8],
        ChannelSpec::AmplitudeDamping { gamma_t: 1.0 },
    )
}

/// The Bell state (−1, 1, 1) under amplitude damping, measuring σ1 and σ3.
pub fn smfig_b_preset() -> SweepConfig {
    preset(
        [-1.0, 1.0, 1.0],
        ChannelSpec::AmplitudeDamping { gamma_t: 1.0 },
    )
}

/// A state evolved under one of the built-in channels.
#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum EvolvedState {
    /// Unital noise keeps the state Bell-diagonal.
    BellDiagonal(BellDiagonalState),
    /// Amplitude damping of a Bell-diagonal state by `gamma_t`.
    AmplitudeDamped {
        initial: BellDiagonalState,
        gamma_t: f64,
        rho: TwoQubitDensity,
    },
}

impl EvolvedState {
    pub fn density(&self) -> TwoQubitDensity {
        match self {
            EvolvedState::BellDiagonal(s) => s.to_density(),
            EvolvedState::AmplitudeDamped { rho, .. } => *rho,
        }
    }

    /// Minimal missing information from the applicable closed form.
    pub fn missing_info(&self) -> Result<f64> {
        match self {
            EvolvedState::BellDiagonal(s) => Ok(minimal_missing_info_bd(s)),
            EvolvedState::AmplitudeDamped {
                initial, gamma_t, ..
            } => Ok(minimal_missing_info_ad(initial, *gamma_t)?.m),
        }
    }
}

/// Evolves `s` for time `t` under the unit-time channel `spec`.
pub fn evolve(s: &BellDiagonalState, spec: ChannelSpec, t: f64) -> Result<EvolvedState> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain(format!("time must be non-negative, got {t}")));
    }
    Ok(match spec {
        ChannelSpec::Flip { axis, eta } => {
            if eta > 0.5 {
                return Err(Error::domain(format!(
                    "flip rate η = {eta} > ½ cannot be composed in time"
                )));
            }
            EvolvedState::BellDiagonal(scale_bd_off_axis(s, axis, (1.0 - 2.0 * eta).powf(t)))
        }
        ChannelSpec::PhaseDamping { gamma_t } => {
            let eta = phase_damping_flip_eta(gamma_t * t);
            EvolvedState::BellDiagonal(scale_bd_off_axis(s, FlipAxis::PhaseFlip, 1.0 - 2.0 * eta))
        }
        ChannelSpec::AmplitudeDamping { gamma_t } => {
            let gt = gamma_t * t;
            EvolvedState::AmplitudeDamped {
                initial: *s,
                gamma_t: gt,
                rho: evolve_bd_amplitude(s, gt)?,
            }
        }
    })
}

/// Metrics of one time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub t: f64,
    pub u: f64,
    pub u_b: f64,
    pub d: f64,
    pub e: f64,
    pub m: f64,
}

impl SweepRecord {
    pub fn get(&self, col: Column) -> f64 {
        match col {
            Column::U => self.u,
            Column::Ub => self.u_b,
            Column::D => self.d,
            Column::E => self.e,
            Column::M => self.m,
        }
    }
}

/// Evaluates one state: `U` and `U_b` through the general density route,
/// `M` from the closed form of the evolution, `D = M - S(A|B)` and the
/// concurrence `E`.
pub fn evaluate(t: f64, state: &EvolvedState, pair: ObservablePair) -> Result<SweepRecord> {
    let rho = state.density();
    let cond = conditional_entropy(&rho)?;
    let m = state.missing_info()?;
    Ok(SweepRecord {
        t,
        u: uncertainty_u(&rho, pair)?,
        u_b: lower_bound_ub(&rho, pair)?,
        d: m - cond,
        e: concurrence(&rho)?,
        m,
    })
}

/// Runs a sweep. Points are evaluated in parallel; records come back in
/// ascending `t`.
pub fn run_time_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.grid
        .values()
        .into_par_iter()
        .map(|t| evaluate(t, &evolve(&cfg.initial, cfg.channel, t)?, cfg.pair))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `U_b(0) > U_b(∞)`: amplitude damping eventually lowers the bound.
    Decrease,
    Increase,
    Boundary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Decrease => "decrease",
            Verdict::Increase => "increase",
            Verdict::Boundary => "boundary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub u_b_initial: f64,
    pub u_b_limit: f64,
}

/// Whether long-time amplitude damping lowers `U_b` below its initial value.
///
/// The limit is evaluated on the state damped to `Γt = 50`.
pub fn classify_longtime_ad(s: &BellDiagonalState) -> Result<ClassificationResult> {
    let u_b_initial = lower_bound_ub_bd(s);
    let pair = ObservablePair::from_indices(1, 3)?;
    let u_b_limit = lower_bound_ub(&evolve_bd_amplitude(s, LONG_TIME_GAMMA_T)?, pair)?;
    let diff = u_b_initial - u_b_limit;
    let verdict = if diff > BOUNDARY_BAND {
        Verdict::Decrease
    } else if diff < -BOUNDARY_BAND {
        Verdict::Increase
    } else {
        Verdict::Boundary
    };
    Ok(ClassificationResult {
        verdict,
        u_b_initial,
        u_b_limit,
    })
}

/// Grid over `(c_j, c_k) ∈ [-1, 1]²` for the measured pair, with the third
/// coefficient fixed by `c_i = -c_j c_k`. Only tetrahedron members are
/// emitted. The origin is always included; for even resolutions, where it
/// is not a grid node, it is appended last.
pub fn sample_spmc_surface(
    pair: ObservablePair,
    resolution: usize,
) -> Result<Vec<BellDiagonalState>> {
    if resolution < 2 {
        return Err(Error::domain(format!(
            "surface resolution must be at least 2, got {resolution}"
        )));
    }
    let axis: Vec<f64> = (0..resolution)
        .map(|n| -1.0 + 2.0 * n as f64 / (resolution - 1) as f64)
        .collect();
    let (j, k, i) = (pair.q().index(), pair.r().index(), pair.complement_index());
    let mut out = Vec::with_capacity(resolution * resolution + 1);
    let mut has_origin = false;
    for &cj in &axis {
        for &ck in &axis {
            let mut c = [0.0; 3];
            c[j - 1] = cj;
            c[k - 1] = ck;
            c[i - 1] = -cj * ck;
            if let Ok(s) = BellDiagonalState::new(c[0], c[1], c[2]) {
                has_origin |= c == [0.0; 3];
                out.push(s);
            }
        }
    }
    if !has_origin {
        out.push(BellDiagonalState::maximally_mixed());
    }
    Ok(out)
}

/// Flip probabilities at which each flip channel is checked.
pub fn unital_eta_grid() -> [f64; 10] {
    std::array::from_fn(|n| 0.05 * (n + 1) as f64)
}

/// `Γt` values at which phase and amplitude damping are checked.
pub fn damping_gamma_t_grid() -> [f64; 10] {
    std::array::from_fn(|n| 0.5 * (n + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    JointEntropy,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitalViolation {
    pub trial: usize,
    pub state: BellDiagonalState,
    pub channel: String,
    pub quantity: Quantity,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleSource {
    Trial(usize),
    /// (−0.5, 0.4, 0.8), tried when no sampled state qualifies.
    Reference,
}

/// A state whose `U_b` drops under amplitude damping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdCounterexample {
    pub source: CounterexampleSource,
    pub state: BellDiagonalState,
    pub gamma_t: f64,
    pub u_b_before: f64,
    pub u_b_after: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitalReport {
    pub trials: usize,
    pub seed: u64,
    /// Number of (state, channel) evaluations.
    pub checks: usize,
    pub violations: Vec<UnitalViolation>,
    /// Smallest observed `S(ρ') - S(ρ)`.
    pub min_entropy_change: f64,
    /// Smallest observed `U_b' - U_b`.
    pub min_bound_change: f64,
    pub counterexample: Option<AdCounterexample>,
}

impl UnitalReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for UnitalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trials {} seed {}", self.trials, self.seed)?;
        writeln!(f, "unital checks {}", self.checks)?;
        writeln!(f, "violations {}", self.violations.len())?;
        writeln!(f, "min entropy change {:.12e}", self.min_entropy_change)?;
        writeln!(f, "min lower-bound change {:.12e}", self.min_bound_change)?;
        for v in &self.violations {
            writeln!(
                f,
                "violation trial {} state {} channel {} {:?} {:.12} -> {:.12}",
                v.trial, v.state, v.channel, v.quantity, v.before, v.after
            )?;
        }
        match &self.counterexample {
            Some(c) => {
                let source = match c.source {
                    CounterexampleSource::Trial(n) => format!("trial {n}"),
                    CounterexampleSource::Reference => "reference".to_owned(),
                };
                writeln!(
                    f,
                    "amplitude-damping counterexample ({source}) state {} gamma_t {} Ub {:.12} -> {:.12}",
                    c.state, c.gamma_t, c.u_b_before, c.u_b_after
                )?;
            }
            None => writeln!(f, "amplitude-damping counterexample none")?,
        }
        writeln!(f, "result {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

struct TrialOutcome {
    checks: usize,
    violations: Vec<UnitalViolation>,
    min_entropy_change: f64,
    min_bound_change: f64,
}

fn unital_channels() -> Result<Vec<KrausChannel>> {
    let mut channels = Vec::with_capacity(40);
    for axis in FlipAxis::ALL {
        for eta in unital_eta_grid() {
            channels.push(make_flip_channel(axis, eta)?);
        }
    }
    for gt in damping_gamma_t_grid() {
        channels.push(make_phase_damping(gt)?);
    }
    Ok(channels)
}

fn check_trial(
    trial: usize,
    s: &BellDiagonalState,
    channels: &[KrausChannel],
) -> Result<TrialOutcome> {
    let pair = ObservablePair::from_indices(1, 3)?;
    let rho = s.to_density();
    let entropy = von_neumann_entropy(rho.matrix())?;
    let bound = lower_bound_ub(&rho, pair)?;
    let mut out = TrialOutcome {
        checks: 0,
        violations: Vec::new(),
        min_entropy_change: f64::INFINITY,
        min_bound_change: f64::INFINITY,
    };
    for ch in channels {
        let evolved = apply_local_a(ch, &rho)?;
        let entropy_after = von_neumann_entropy(evolved.matrix())?;
        let bound_after = lower_bound_ub(&evolved, pair)?;
        out.checks += 1;
        out.min_entropy_change = out.min_entropy_change.min(entropy_after - entropy);
        out.min_bound_change = out.min_bound_change.min(bound_after - bound);
        for (quantity, before, after) in [
            (Quantity::JointEntropy, entropy, entropy_after),
            (Quantity::LowerBound, bound, bound_after),
        ] {
            if after < before - MONOTONICITY_TOL {
                out.violations.push(UnitalViolation {
                    trial,
                    state: *s,
                    channel: ch.label().to_owned(),
                    quantity,
                    before,
                    after,
                });
            }
        }
    }
    Ok(out)
}

fn find_ad_decrease(s: &BellDiagonalState) -> Result<Option<(f64, f64, f64)>> {
    let pair = ObservablePair::from_indices(1, 3)?;
    let rho = s.to_density();
    let before = lower_bound_ub(&rho, pair)?;
    for gt in damping_gamma_t_grid().into_iter().chain([20.0]) {
        let after = lower_bound_ub(&apply_local_a(&make_amplitude_damping(gt)?, &rho)?, pair)?;
        if after < before - MONOTONICITY_TOL {
            return Ok(Some((gt, before, after)));
        }
    }
    Ok(None)
}

/// Checks that no unital channel lowers `S(ρ_AB)` or `U_b`.
///
/// Draws `n_trials` Bell-diagonal states uniformly (seeded ChaCha8), applies
/// each flip channel at 10 values of η and phase damping at 10 values of
/// `Γt` through the Kraus route, and records every decrease beyond
/// `1e-9`. Also searches the same states, then the reference state, for an
/// amplitude-damping decrease of `U_b`.
pub fn property_check_unital(n_trials: usize, seed: u64) -> Result<UnitalReport> {
    if n_trials == 0 {
        return Err(Error::domain("property check needs at least one trial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<BellDiagonalState> = (0..n_trials)
        .map(|_| BellDiagonalState::sample(&mut rng))
        .collect();
    let channels = unital_channels()?;

    let outcomes: Vec<TrialOutcome> = states
        .par_iter()
        .enumerate()
        .map(|(n, s)| check_trial(n, s, &channels))
        .collect::<Result<_>>()?;

    let mut report = UnitalReport {
        trials: n_trials,
        seed,
        checks: 0,
        violations: Vec::new(),
        min_entropy_change: f64::INFINITY,
        min_bound_change: f64::INFINITY,
        counterexample: None,
    };
    for o in outcomes {
        report.checks += o.checks;
        report.violations.extend(o.violations);
        report.min_entropy_change = report.min_entropy_change.min(o.min_entropy_change);
        report.min_bound_change = report.min_bound_change.min(o.min_bound_change);
    }

    let reference = BellDiagonalState::new(-0.5, 0.4, 0.8)?;
    let candidates = states
        .iter()
        .enumerate()
        .map(|(n, s)| (CounterexampleSource::Trial(n), *s))
        .chain([(CounterexampleSource::Reference, reference)]);
    for (source, state) in candidates {
        if let Some((gamma_t, u_b_before, u_b_after)) = find_ad_decrease(&state)? {
            report.counterexample = Some(AdCounterexample {
                source,
                state,
                gamma_t,
                u_b_before,
                u_b_after,
            });
            break;
        }
    }
    Ok(report)
}

fn format_value(v: f64) -> String {
    let s = format!("{v:.12}");
    // Never emit "-0.000000000000".
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// Writes `t` plus the requested columns, fixed-point with 12 decimals,
/// `\n` line endings.
pub fn emit_csv<W: Write>(
    records: &[SweepRecord],
    columns: &[Column],
    mut out: W,
) -> std::io::Result<()> {
    let mut cols = columns.to_vec();
    cols.sort();
    cols.dedup();
    let mut header = String::from("t");
    for c in &cols {
        header.push(',');
        header.push_str(c.header());
    }
    header.push('\n');
    out.write_all(header.as_bytes())?;
    for r in records {
        let mut line = format_value(r.t);
        for &c in &cols {
            line.push(',');
            line.push_str(&format_value(r.get(c)));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

pub fn emit_csv_string(records: &[SweepRecord], columns: &[Column]) -> String {
    let mut buf = Vec::new();
    emit_csv(records, columns, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn write_csv_file(path: &Path, records: &[SweepRecord], columns: &[Column]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::domain("no records to write"));
    }
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    emit_csv(records, columns, BufWriter::new(file)).map_err(io_err)
}

/// Parses output of [`emit_csv`]. Columns absent from the header read as NaN.
pub fn parse_csv(text: &str) -> Result<(Vec<Column>, Vec<SweepRecord>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(text, 0, "empty CSV"))?;
    let mut names = header.split(',');
    if names.next() != Some("t") {
        return Err(Error::parse(header, 0, "first column must be `t`"));
    }
    let cols: Vec<Column> = names
        .map(|n| {
            Column::from_header(n)
                .ok_or_else(|| Error::parse(header, 0, format!("unknown column {n:?}")))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    for line in lines {
        let values: Vec<f64> = line
            .split(',')
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::parse(line, 0, e.to_string()))
            })
            .collect::<Result<_>>()?;
        if values.len() != cols.len() + 1 {
            return Err(Error::parse(line, 0, "wrong number of fields"));
        }
        let mut r = SweepRecord {
            t: values[0],
            u: f64::NAN,
            u_b: f64::NAN,
            d: f64::NAN,
            e: f64::NAN,
            m: f64::NAN,
        };
        for (c, v) in cols.iter().zip(&values[1..]) {
            match c {
                Column::U => r.u = *v,
                Column::Ub => r.u_b = *v,
                Column::D => r.d = *v,
                Column::E => r.e = *v,
                Column::M => r.m = *v,
            }
        }
        records.push(r);
    }
    Ok((cols, records))
}
