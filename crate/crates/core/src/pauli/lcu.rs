use num_complex::Complex64;
use serde::Serialize;

use super::{PauliString, PauliSum};
use crate::error::{Error, Result};

/// `H = sum_i beta_i e^{i phase_i} P_i` with `beta_i >= 0`, padded with zero
/// identity entries to a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuHamiltonian {
    betas: Vec<f64>,
    phases: Vec<f64>,
    strings: Vec<PauliString>,
    norm: f64,
    n_terms: usize,
    n_ancilla: usize,
    n_system: usize,
}

/// Flat view used for reports.
#[derive(Debug, Clone, Serialize)]
pub struct LcuSummary {
    pub n_terms: usize,
    pub n_ancilla: usize,
    pub n_system: usize,
    pub norm: f64,
}

fn ceil_log2(l: usize) -> usize {
    if l <= 1 {
        0
    } else {
        (usize::BITS - (l - 1).leading_zeros()) as usize
    }
}

pub fn to_lcu(s: &PauliSum) -> Result<LcuHamiltonian> {
    if s.is_empty() {
        return Err(Error::EmptySum);
    }
    let n_terms = s.len();
    let n_ancilla = ceil_log2(n_terms);
    let padded = 1usize << n_ancilla;
    let mut betas = Vec::with_capacity(padded);
    let mut phases = Vec::with_capacity(padded);
    let mut strings = Vec::with_capacity(padded);
    for (p, c) in s.terms() {
        betas.push(c.norm());
        phases.push(c.arg());
        strings.push(*p);
    }
    let identity = PauliString::identity(s.n_qubits())?;
    betas.resize(padded, 0.0);
    phases.resize(padded, 0.0);
    strings.resize(padded, identity);
    let norm = betas.iter().sum();
    Ok(LcuHamiltonian {
        betas,
        phases,
        strings,
        norm,
        n_terms,
        n_ancilla,
        n_system: s.n_qubits(),
    })
}

impl LcuHamiltonian {
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    /// The l1 norm `A = sum_i beta_i`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Number of terms before padding (`L`).
    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn total_qubits(&self) -> usize {
        self.n_ancilla + self.n_system
    }

    /// `e^{i phase_i}` for entry `i`.
    pub fn unit_phase(&self, i: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.phases[i])
    }

    pub fn reconstruct(&self) -> Result<PauliSum> {
        let mut out = PauliSum::new(self.n_system)?;
        for i in 0..self.n_terms {
            out.add_term(self.strings[i], Complex64::from_polar(self.betas[i], self.phases[i]))?;
        }
        Ok(out)
    }

    pub fn summary(&self) -> LcuSummary {
        LcuSummary {
            n_terms: self.n_terms,
            n_ancilla: self.n_ancilla,
            n_system: self.n_system,
            norm: self.norm,
        }
    }
}
