//! Statevector simulation of the direct-measurement circuit
//! `U = (B^dagger (x) I) V (B (x) I)` acting on `|0>_a |phi>_s`.
//!
//! Amplitude index layout is `ancilla << n_system | system`: each ancilla basis
//! state owns one contiguous block of `2^n_system` amplitudes.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::LcuHamiltonian;

pub const MAX_SIM_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(Error::QubitCeiling {
                what: "statevector",
                requested: n_qubits,
                ceiling: MAX_SIM_QUBITS,
            });
        }
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_SIM_QUBITS {
            return Err(Error::QubitCeiling {
                what: "statevector",
                requested: n_qubits,
                ceiling: MAX_SIM_QUBITS,
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Norm { norm });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Ancilla preparation `B`: the real Householder reflection that swaps `|0>`
/// with `|b> = sum_i sqrt(beta_i / A) |i>`. It is symmetric and orthogonal,
/// so `B^dagger = B`.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaPrep {
    target: Vec<f64>,
    /// Unit reflection axis `(|0> - |b>) / || |0> - |b> ||`; `None` when `|b> = |0>`.
    axis: Option<Vec<f64>>,
}

pub fn prepare_b(betas: &[f64]) -> Result<AncillaPrep> {
    AncillaPrep::new(betas)
}

impl AncillaPrep {
    pub fn new(betas: &[f64]) -> Result<Self> {
        if !betas.len().is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "ancilla register needs a power-of-two length, got {}",
                betas.len()
            )));
        }
        if betas.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidParameter("LCU weights must be non-negative".into()));
        }
        let total: f64 = betas.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("LCU weights are all zero".into()));
        }
        let target: Vec<f64> = betas.iter().map(|b| (b / total).sqrt()).collect();
        let mut axis = target.iter().map(|t| -t).collect::<Vec<_>>();
        axis[0] += 1.0;
        let len = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        let axis = if len < 1e-15 {
            None
        } else {
            axis.iter_mut().for_each(|a| *a /= len);
            Some(axis)
        };
        Ok(Self { target, axis })
    }

    /// Amplitudes of `B|0>`.
    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            let refl = self.axis.as_ref().map_or(0.0, |w| 2.0 * w[i] * w[j]);
            Complex64::new(id - refl, 0.0)
        })
    }

    /// Applies `B (x) I` to a register whose low `n_system` qubits are the system.
    pub fn apply(&self, state: &mut StateVector, n_system: usize) -> Result<()> {
        let n_anc = self.dim().trailing_zeros() as usize;
        if state.n_qubits != n_anc + n_system {
            return Err(Error::Dimension {
                expected: n_anc + n_system,
                found: state.n_qubits,
            });
        }
        let Some(w) = &self.axis else {
            return Ok(());
        };
        let stride = 1usize << n_system;
        let mut col = vec![Complex64::default(); self.dim()];
        for s in 0..stride {
            for (i, c) in col.iter_mut().enumerate() {
                *c = state.amps[i * stride + s];
            }
            let dot: Complex64 = col.iter().zip(w).map(|(c, wi)| c * wi).sum();
            for (i, wi) in w.iter().enumerate() {
                state.amps[i * stride + s] = col[i] - 2.0 * wi * dot;
            }
        }
        Ok(())
    }
}

/// `V = sum_i |i><i| (x) e^{i phase_i} P_i`.
pub fn apply_select_v(state: &mut StateVector, lcu: &LcuHamiltonian) -> Result<()> {
    if state.n_qubits != lcu.total_qubits() {
        return Err(Error::Dimension {
            expected: lcu.total_qubits(),
            found: state.n_qubits,
        });
    }
    let block = 1usize << lcu.n_system();
    let n_terms = lcu.n_terms();
    state
        .amps
        .par_chunks_mut(block)
        .enumerate()
        .filter(|(i, _)| *i < n_terms)
        .for_each_init(
            || vec![Complex64::default(); block],
            |scratch, (i, amps)| {
                let p = &lcu.strings()[i];
                let phase = lcu.unit_phase(i);
                if p.is_identity() {
                    amps.iter_mut().for_each(|a| *a *= phase);
                    return;
                }
                p.apply(amps, scratch);
                for (a, s) in amps.iter_mut().zip(scratch.iter()) {
                    *a = phase * s;
                }
            },
        );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Readout {
    Exact,
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReadoutMode {
    Exact,
    Shots,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementResult {
    pub mode: ReadoutMode,
    /// Probability (exact) or frequency (shots) of the all-zero ancilla outcome.
    pub p0: f64,
    pub shots: u64,
    pub seed: u64,
    /// `<0, phi| U |0, phi>`, which equals `<phi|H|phi> / A`; exact mode only.
    pub success_amplitude: Option<Complex64>,
}

/// The full output register `U |0>_a |phi>_s`.
pub fn direct_measurement_state(lcu: &LcuHamiltonian, phi: &[Complex64]) -> Result<StateVector> {
    let n_s = lcu.n_system();
    if phi.len() != 1 << n_s {
        return Err(Error::Dimension {
            expected: 1 << n_s,
            found: phi.len(),
        });
    }
    let norm = phi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Norm { norm });
    }
    let total = lcu.total_qubits();
    if total > MAX_SIM_QUBITS {
        return Err(Error::QubitCeiling {
            what: "direct measurement circuit",
            requested: total,
            ceiling: MAX_SIM_QUBITS,
        });
    }
    let mut state = StateVector {
        n_qubits: total,
        amps: vec![Complex64::default(); 1 << total],
    };
    state.amps[..phi.len()].copy_from_slice(phi);
    let prep = AncillaPrep::new(lcu.betas())?;
    prep.apply(&mut state, n_s)?;
    apply_select_v(&mut state, lcu)?;
    prep.apply(&mut state, n_s)?;
    Ok(state)
}

pub fn run_direct_measurement(
    lcu: &LcuHamiltonian,
    phi: &[Complex64],
    readout: Readout,
) -> Result<MeasurementResult> {
    if let Readout::Shots { shots: 0, .. } = readout {
        return Err(Error::InvalidParameter("shot count must be positive".into()));
    }
    let state = direct_measurement_state(lcu, phi)?;
    let zero_block = &state.amps[..phi.len()];
    let p_exact = zero_block.iter().map(|a| a.norm_sqr()).sum::<f64>().clamp(0.0, 1.0);
    match readout {
        Readout::Exact => {
            let amp = zero_block.iter().zip(phi).map(|(o, p)| p.conj() * o).sum();
            Ok(MeasurementResult {
                mode: ReadoutMode::Exact,
                p0: p_exact,
                shots: 0,
                seed: 0,
                success_amplitude: Some(amp),
            })
        }
        Readout::Shots { shots, seed } => Ok(MeasurementResult {
            mode: ReadoutMode::Shots,
            p0: sample_frequency(p_exact, shots, seed)?,
            shots,
            seed,
            success_amplitude: None,
        }),
    }
}

/// Frequency of success in `shots` ideal Bernoulli trials with probability `p`.
pub fn sample_frequency(p: f64, shots: u64, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, p.clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidParameter(format!("binomial sampler: {e}")))?;
    Ok(dist.sample(&mut rng) as f64 / shots as f64)
}
