//! Eigenvalue recovery from ancilla-zero probabilities and `theta`-trajectory
//! scans for locating resonance stationary points.
//!
//! Three recovery variants are supported:
//!
//! * [`Variant::Shift`]: circuits for `H` and `H + xI`; the two magnitudes fix the phase.
//! * [`Variant::Cubic`]: `H0 = H - c_I I` and `H0 + H0^3`, where `c_I` is the identity coefficient.
//! * [`Variant::Square`]: `H0^2` and `H0^2 + H0^4`.
//!
//! The cubic and square variants determine the phase of the `H0` eigenvalue
//! through `arccos` of a doubled angle, so they only resolve eigenvalues with
//! `Re(lambda - c_I) >= 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sector_eig;
use crate::pauli::{sum_mul, to_lcu, PauliString, PauliSum};
use crate::sim::{run_direct_measurement, Readout};

pub const DEFAULT_SHIFT_X: f64 = 1.0;

/// Slack allowed on an `arccos` argument before it is treated as inconsistent.
pub const ACOS_SLACK: f64 = 1e-9;

/// Continuation steps longer than this (Hartree) flag a trajectory break.
pub const JUMP_WARNING: f64 = 0.5;

/// Speeds (Hartree per radian) above this are not reported as pause points.
pub const DEFAULT_PAUSE_THRESHOLD: f64 = 0.05;

/// Offset between the seeds of the two circuits in one shot-mode measurement.
const SECOND_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    #[default]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Branch::Plus),
            "-" | "minus" => Ok(Branch::Minus),
            _ => Err(Error::InvalidParameter(format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Shift,
    Cubic,
    Square,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Shift => "shift",
            Variant::Cubic => "cubic",
            Variant::Square => "square",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shift" => Ok(Variant::Shift),
            "cubic" => Ok(Variant::Cubic),
            "square" => Ok(Variant::Square),
            _ => Err(Error::InvalidParameter(format!("unknown variant {s:?}"))),
        }
    }
}

/// Measured probabilities and normalizations for one recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryInputs {
    pub p: f64,
    pub p_prime: f64,
    pub a: f64,
    pub a_prime: f64,
    /// Energy shift of the second circuit; shift variant only.
    pub x: f64,
    /// Constant added back to the recovered value.
    pub shift: Complex64,
    pub branch: Branch,
}

impl RecoveryInputs {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("p'", self.p_prime)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not a probability")));
            }
        }
        for (name, v) in [("A", self.a), ("A'", self.a_prime)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if self.p == 0.0 {
            return Err(Error::ZeroMagnitude);
        }
        Ok(())
    }

    fn with_branch(self, branch: Branch) -> Self {
        Self { branch, ..self }
    }
}

fn checked_acos(argument: f64) -> Result<f64> {
    if !argument.is_finite() || argument.abs() > 1.0 + ACOS_SLACK {
        return Err(Error::InconsistentProbabilities { argument });
    }
    Ok(argument.clamp(-1.0, 1.0).acos())
}

/// `E` from `|E| = sqrt(p) A` and `|E + x| = sqrt(p') A'`.
pub fn recover_shift(inp: &RecoveryInputs) -> Result<Complex64> {
    inp.validate()?;
    let x = inp.x;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::InvalidParameter("shift x must be finite and non-zero".into()));
    }
    let mag = inp.p.sqrt() * inp.a;
    let shifted = inp.p_prime * inp.a_prime * inp.a_prime;
    let phi = checked_acos((shifted - x * x - mag * mag) / (2.0 * x * mag))?;
    Ok(inp.shift + Complex64::from_polar(mag, inp.branch.sign() * phi))
}

/// `shift + mu` from `|mu| = sqrt(p) A` and `|mu + mu^3| = sqrt(p') A'`.
pub fn recover_cubic(inp: &RecoveryInputs) -> Result<Complex64> {
    inp.validate()?;
    let r2 = inp.p * inp.a * inp.a;
    let arg = inp.p_prime * inp.a_prime * inp.a_prime / (2.0 * r2 * r2) - 1.0 / (2.0 * r2) - r2 / 2.0;
    let half = 0.5 * checked_acos(arg)?;
    Ok(inp.shift + Complex64::from_polar(r2.sqrt(), inp.branch.sign() * half))
}

/// `shift + sqrt(mu)` from `|mu| = sqrt(p) A` and `|mu + mu^2| = sqrt(p') A'`.
pub fn recover_square(inp: &RecoveryInputs) -> Result<Complex64> {
    inp.validate()?;
    let r = inp.p.sqrt() * inp.a;
    let arg = inp.p_prime * inp.a_prime * inp.a_prime / (2.0 * r * r * r) - 1.0 / (2.0 * r) - r / 2.0;
    let half = 0.5 * checked_acos(arg)?;
    Ok(inp.shift + Complex64::from_polar(r.sqrt(), inp.branch.sign() * half))
}

pub fn recover(variant: Variant, inp: &RecoveryInputs) -> Result<Complex64> {
    match variant {
        Variant::Shift => recover_shift(inp),
        Variant::Cubic => recover_cubic(inp),
        Variant::Square => recover_square(inp),
    }
}

/// `(H + x I)`, `H0 + H0^3` or `H0^2` / `H0^2 + H0^4` with the matching shift.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantCircuits {
    pub first: PauliSum,
    pub second: PauliSum,
    pub shift: Complex64,
}

pub fn variant_circuits(h: &PauliSum, variant: Variant, x: f64) -> Result<VariantCircuits> {
    let n = h.n_qubits();
    match variant {
        Variant::Shift => {
            let mut second = h.clone();
            second.add_term(PauliString::identity(n)?, Complex64::new(x, 0.0))?;
            Ok(VariantCircuits {
                first: h.clone(),
                second,
                shift: Complex64::default(),
            })
        }
        Variant::Cubic => {
            let h0 = h.without_identity();
            let cube = sum_mul(&sum_mul(&h0, &h0)?, &h0)?;
            Ok(VariantCircuits {
                second: h0.add(&cube)?,
                first: h0,
                shift: h.identity_coefficient(),
            })
        }
        Variant::Square => {
            let h0 = h.without_identity();
            let sq = sum_mul(&h0, &h0)?;
            let fourth = sum_mul(&sq, &sq)?;
            Ok(VariantCircuits {
                second: sq.add(&fourth)?,
                first: sq,
                shift: h.identity_coefficient(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    pub variant: Variant,
    pub readout: Readout,
    pub x: f64,
    pub branch: Branch,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            variant: Variant::Shift,
            readout: Readout::Exact,
            x: DEFAULT_SHIFT_X,
            branch: Branch::Minus,
        }
    }
}

/// One circuit-based eigenvalue estimate with both branches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub variant: Variant,
    pub branch: Branch,
    pub energy: Complex64,
    pub energy_plus: Complex64,
    pub energy_minus: Complex64,
    pub inputs: RecoveryInputs,
    pub readout: Readout,
}

/// Runs both circuits of `variant` on `phi` and recovers the eigenvalue.
pub fn measure_eigenvalue(h: &PauliSum, phi: &[Complex64], opts: &MeasureOptions) -> Result<Measurement> {
    let circuits = variant_circuits(h, opts.variant, opts.x)?;
    let lcu = to_lcu(&circuits.first)?;
    let lcu_prime = to_lcu(&circuits.second)?;
    let second_readout = match opts.readout {
        Readout::Exact => Readout::Exact,
        Readout::Shots { shots, seed } => Readout::Shots {
            shots,
            seed: seed.wrapping_add(SECOND_SEED_OFFSET),
        },
    };
    let m = run_direct_measurement(&lcu, phi, opts.readout)?;
    let m_prime = run_direct_measurement(&lcu_prime, phi, second_readout)?;
    let inputs = RecoveryInputs {
        p: m.p0,
        p_prime: m_prime.p0,
        a: lcu.norm(),
        a_prime: lcu_prime.norm(),
        x: opts.x,
        shift: circuits.shift,
        branch: opts.branch,
    };
    let energy_plus = recover(opts.variant, &inputs.with_branch(Branch::Plus))?;
    let energy_minus = recover(opts.variant, &inputs.with_branch(Branch::Minus))?;
    Ok(Measurement {
        variant: opts.variant,
        branch: opts.branch,
        energy: match opts.branch {
            Branch::Plus => energy_plus,
            Branch::Minus => energy_minus,
        },
        energy_plus,
        energy_minus,
        inputs,
        readout: opts.readout,
    })
}

/// Resonance position `E = Re(E_theta)`.
pub fn position(energy: Complex64) -> f64 {
    energy.re
}

/// Resonance width `Gamma = -2 Im(E_theta)`.
pub fn width(energy: Complex64) -> f64 {
    -2.0 * energy.im
}

/// Inclusive grid `start, start + step, ..., stop`, rounded to 12 decimals.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidParameter(format!(
            "bad grid {start}:{stop}:{step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub alpha: f64,
    pub theta: f64,
    /// Circuit-recovered eigenvalue.
    pub energy: Complex64,
    /// Diagonalization eigenvalue followed by continuation.
    pub energy_diag: Complex64,
    /// `|dE/dtheta|` by finite differences of `energy`.
    pub speed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub n_electrons: usize,
    pub measure: MeasureOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            n_electrons: 1,
            measure: MeasureOptions::default(),
        }
    }
}

/// Central differences inside, one-sided at the ends, zero for a single point.
fn fill_speeds(points: &mut [TrajectoryPoint]) {
    let n = points.len();
    if n < 2 {
        points.iter_mut().for_each(|p| p.speed = 0.0);
        return;
    }
    let speeds: Vec<f64> = (0..n)
        .map(|k| {
            let (lo, hi) = (k.saturating_sub(1), (k + 1).min(n - 1));
            (points[hi].energy - points[lo].energy).norm() / (points[hi].theta - points[lo].theta)
        })
        .collect();
    for (p, s) in points.iter_mut().zip(speeds) {
        p.speed = s;
    }
}

/// Follows one eigenvalue of `builder(theta)` along `thetas` at fixed `alpha`.
pub fn trajectory_scan<F>(
    builder: F,
    alpha: f64,
    thetas: &[f64],
    seed_target: Complex64,
    opts: &ScanOptions,
) -> Result<Vec<TrajectoryPoint>>
where
    F: Fn(f64) -> Result<PauliSum>,
{
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("empty theta grid".into()));
    }
    if thetas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("theta grid must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(thetas.len());
    let mut previous = seed_target;
    for (k, &theta) in thetas.iter().enumerate() {
        let h = builder(theta)?;
        let sector = sector_eig(&h, opts.n_electrons)?;
        let dec = &sector.decomposition;
        let (idx, jump) = dec.nearest(previous).ok_or(Error::EmptySum)?;
        let warning = (k > 0 && jump > JUMP_WARNING).then(|| {
            format!("continuation jumped {jump:.4} Hartree at theta = {theta}")
        });
        let measured = measure_eigenvalue(&h, &dec.vectors[idx], &opts.measure)?;
        previous = dec.values[idx];
        points.push(TrajectoryPoint {
            alpha,
            theta,
            energy: measured.energy,
            energy_diag: dec.values[idx],
            speed: 0.0,
            warning,
        });
    }
    fill_speeds(&mut points);
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub alpha: f64,
    pub points: Vec<TrajectoryPoint>,
}

/// One trajectory per `alpha`, computed in parallel.
pub fn scan_grid<F>(
    builder: F,
    alphas: &[f64],
    thetas: &[f64],
    seed_target: Complex64,
    opts: &ScanOptions,
) -> Result<Vec<Trajectory>>
where
    F: Fn(f64, f64) -> Result<PauliSum> + Sync,
{
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("empty alpha grid".into()));
    }
    alphas
        .par_iter()
        .map(|&alpha| {
            let points = trajectory_scan(|theta| builder(alpha, theta), alpha, thetas, seed_target, opts)?;
            Ok(Trajectory { alpha, points })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryPoint {
    pub alpha: f64,
    pub theta: f64,
    pub energy: Complex64,
    pub energy_diag: Complex64,
    pub speed: f64,
    pub position: f64,
    pub width: f64,
}

impl StationaryPoint {
    pub fn is_pause(&self, threshold: f64) -> bool {
        self.speed <= threshold
    }
}

/// Slowest point over all trajectories. Interior points (with neighbours on
/// both sides) are preferred because end speeds are one-sided estimates;
/// ties go to smaller theta, then smaller alpha.
pub fn stationary_point(trajectories: &[Trajectory]) -> Result<StationaryPoint> {
    let usable: Vec<&Trajectory> = trajectories.iter().filter(|t| t.points.len() >= 2).collect();
    if usable.is_empty() {
        return Err(Error::InvalidParameter(
            "stationary point needs a trajectory with at least two points".into(),
        ));
    }
    let any_interior = usable.iter().any(|t| t.points.len() >= 3);
    let candidates = usable.iter().flat_map(|t| {
        let n = t.points.len();
        t.points
            .iter()
            .enumerate()
            .filter(move |(k, _)| !any_interior || (*k > 0 && *k + 1 < n))
            .map(|(_, p)| p)
    });
    let best = candidates
        .min_by(|a, b| {
            a.speed
                .total_cmp(&b.speed)
                .then(a.theta.total_cmp(&b.theta))
                .then(a.alpha.total_cmp(&b.alpha))
        })
        .expect("non-empty candidate set");
    Ok(StationaryPoint {
        alpha: best.alpha,
        theta: best.theta,
        energy: best.energy,
        energy_diag: best.energy_diag,
        speed: best.speed,
        position: position(best.energy),
        width: width(best.energy),
    })
}

pub const CSV_HEADER: &str = "alpha,theta,re_E,im_E,speed,re_E_diag,im_E_diag";

pub fn trajectories_to_csv(trajectories: &[Trajectory]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in trajectories.iter().flat_map(|t| &t.points) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.alpha, p.theta, p.energy.re, p.energy.im, p.speed, p.energy_diag.re, p.energy_diag.im
        ));
    }
    out
}

/// Settings and provenance recorded alongside exported results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub variant: Variant,
    pub x: f64,
    pub branch: Branch,
    pub readout: Readout,
    pub n_electrons: usize,
    pub seed_target: Complex64,
    pub pause_threshold: f64,
    /// Free-form provenance such as parameters and fixture checksums.
    pub extra: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub metadata: RunMetadata,
    pub trajectories: Vec<Trajectory>,
    pub stationary: Option<StationaryPoint>,
    pub pause: bool,
}

impl ScanReport {
    pub fn new(metadata: RunMetadata, trajectories: Vec<Trajectory>) -> Self {
        let stationary = stationary_point(&trajectories).ok();
        let pause = stationary.is_some_and(|s| s.is_pause(metadata.pause_threshold));
        Self {
            metadata,
            trajectories,
            stationary,
            pause,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
