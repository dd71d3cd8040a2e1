//! Complex-rotated Hamiltonian of the one-electron model potential
//! `V(x) = (x^2/2 - J) exp(-lambda x^2) + J` in an orthogonalized even-Gaussian
//! basis `chi_k = exp(-alpha_k x^2)`, `alpha_k = alpha * ratio^k`.
//!
//! Rotating the coordinate `x -> x e^{i theta}` turns the kinetic operator into
//! `-eta^2 d^2/dx^2 / 2` with `eta = e^{-i theta}` and the potential into
//! `V(x e^{i theta}) = V(x / eta)`. All matrix elements are closed-form
//! Gaussian integrals on the real line.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::pauli::{jw_one_body, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    /// Asymptotic potential height `J` (Hartree).
    pub coupling: f64,
    pub alpha: f64,
    /// Rotation angle in radians.
    pub theta: f64,
    pub n_basis: usize,
    pub ratio: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            coupling: 0.8,
            alpha: 0.65,
            theta: 0.16,
            n_basis: 5,
            ratio: 0.45,
        }
    }
}

impl ModelParams {
    pub fn new(alpha: f64, theta: f64, n_basis: usize) -> Self {
        Self {
            alpha,
            theta,
            n_basis,
            ..Self::default()
        }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return bad(format!("theta must be non-negative, got {}", self.theta));
        }
        if self.n_basis == 0 {
            return bad("basis needs at least one function".into());
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return bad(format!("exponent ratio must lie in (0, 1), got {}", self.ratio));
        }
        if !self.lambda.is_finite() || !self.coupling.is_finite() {
            return bad("lambda and J must be finite".into());
        }
        Ok(())
    }

    /// `eta = e^{-i theta}`.
    pub fn eta(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.theta)
    }

    pub fn exponents(&self) -> Vec<f64> {
        (0..self.n_basis)
            .map(|k| self.alpha * self.ratio.powi(k as i32))
            .collect()
    }
}

fn check_exponent_pair(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("Gaussian exponents must be positive ({a}, {b})")));
    }
    Ok(())
}

/// `int exp(-(a+b) x^2) dx`.
pub fn overlap(a: f64, b: f64) -> Result<f64> {
    let p = a + b;
    if !(p > 0.0) {
        return Err(Error::Domain(format!("combined exponent {p} is not positive")));
    }
    Ok((PI / p).sqrt())
}

/// `<chi_a| -eta^2/2 d^2/dx^2 |chi_b> = eta^2 ab/(a+b) sqrt(pi/(a+b))`.
pub fn kinetic(a: f64, b: f64, eta: Complex64) -> Result<Complex64> {
    check_exponent_pair(a, b)?;
    let p = a + b;
    Ok(eta * eta * (a * b / p) * overlap(a, b)?)
}

/// `<chi_a| V(x e^{i theta}) |chi_b>`.
///
/// With `s = e^{i theta}` and `c = a + b + lambda s^2` the Gaussian-damped part
/// integrates to `s^2 sqrt(pi) / (4 c^{3/2}) - J sqrt(pi/c)` on the principal
/// branch, which needs `Re c > 0`.
pub fn potential(a: f64, b: f64, params: &ModelParams) -> Result<Complex64> {
    check_exponent_pair(a, b)?;
    let rot_sq = Complex64::from_polar(1.0, 2.0 * params.theta);
    let c = a + b + params.lambda * rot_sq;
    if c.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Re(a + b + lambda e^(2i theta)) = {} is not positive; theta = {} is too large",
            c.re, params.theta
        )));
    }
    let sqrt_pi = PI.sqrt();
    let sqrt_c = c.sqrt();
    let quadratic = rot_sq * sqrt_pi / (4.0 * c * sqrt_c);
    let damped_constant = -params.coupling * sqrt_pi / sqrt_c;
    Ok(quadratic + damped_constant + params.coupling * overlap(a, b)?)
}

/// Orthonormal functions `psi_i = sum_k coeffs[i][k] chi_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    pub exponents: Vec<f64>,
    /// Lower-triangular; row `i` holds the expansion of `psi_i`.
    pub coeffs: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    fn primitive_overlaps(exponents: &[f64]) -> Result<Vec<Vec<f64>>> {
        exponents
            .iter()
            .map(|&a| exponents.iter().map(|&b| overlap(a, b)).collect())
            .collect()
    }

    /// `<psi_i|psi_j>`.
    pub fn gram(&self) -> Result<Vec<Vec<f64>>> {
        let s = Self::primitive_overlaps(&self.exponents)?;
        let n = self.len();
        Ok((0..n)
            .map(|i| (0..n).map(|j| inner(&self.coeffs[i], &self.coeffs[j], &s)).collect())
            .collect())
    }
}

fn inner(u: &[f64], v: &[f64], s: &[Vec<f64>]) -> f64 {
    let mut acc = 0.0;
    for (k, uk) in u.iter().enumerate() {
        if *uk == 0.0 {
            continue;
        }
        for (l, vl) in v.iter().enumerate() {
            acc += uk * s[k][l] * vl;
        }
    }
    acc
}

/// Classical Gram-Schmidt over the primitive Gaussians in the given order,
/// with one re-orthogonalization pass per function.
pub fn gram_schmidt(exponents: &[f64]) -> Result<OrthoBasis> {
    let n = exponents.len();
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (exponents[i], exponents[j]);
            if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) {
                return Err(Error::DegenerateBasis { index: i });
            }
        }
    }
    let s = OrthoBasis::primitive_overlaps(exponents)?;
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut gamma = vec![0.0; n];
        gamma[k] = 1.0;
        for _pass in 0..2 {
            let projections: Vec<f64> = coeffs.iter().map(|psi| inner(&gamma, psi, &s)).collect();
            for (psi, proj) in coeffs.iter().zip(projections) {
                for (g, p) in gamma.iter_mut().zip(psi) {
                    *g -= proj * p;
                }
            }
        }
        let norm = inner(&gamma, &gamma, &s).max(0.0).sqrt();
        if norm < 1e-12 * s[k][k].sqrt() {
            return Err(Error::DegenerateBasis { index: k });
        }
        gamma.iter_mut().for_each(|g| *g /= norm);
        coeffs.push(gamma);
    }
    Ok(OrthoBasis {
        exponents: exponents.to_vec(),
        coeffs,
    })
}

/// One-electron matrix `h_ij = <psi_i| T + V |psi_j>` (complex symmetric).
pub fn build_matrix(params: &ModelParams) -> Result<ComplexMatrix> {
    params.validate()?;
    let exps = params.exponents();
    let basis = gram_schmidt(&exps)?;
    let eta = params.eta();
    let n = exps.len();
    let mut prim = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..=k {
            let v = kinetic(exps[k], exps[l], eta)? + potential(exps[k], exps[l], params)?;
            prim[(k, l)] = v;
            prim[(l, k)] = v;
        }
    }
    let c = &basis.coeffs;
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = Complex64::default();
            for k in 0..=i {
                for l in 0..=j {
                    acc += prim[(k, l)] * (c[i][k] * c[j][l]);
                }
            }
            h[(i, j)] = acc;
            h[(j, i)] = acc;
        }
    }
    Ok(h)
}

/// Qubit Hamiltonian of the model, one spin orbital per basis function.
pub fn build_pauli(params: &ModelParams) -> Result<PauliSum> {
    jw_one_body(&build_matrix(params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig;
    use crate::testing::integrate_line;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn model_v(x: Complex64, p: &ModelParams) -> Complex64 {
        (0.5 * x * x - p.coupling) * (-p.lambda * x * x).exp() + p.coupling
    }

    fn potential_by_quadrature(a: f64, b: f64, p: &ModelParams) -> Complex64 {
        let rot = Complex64::from_polar(1.0, p.theta);
        integrate_line(|x| (-(a + b) * x * x).exp() * model_v(rot * x, p))
    }

    /// Kinetic integral in the symmetric (integrated by parts) form
    /// `1/2 int chi_a' chi_b'`.
    fn kinetic_by_quadrature(a: f64, b: f64) -> Complex64 {
        integrate_line(|x| c(0.5 * (2.0 * a * x) * (2.0 * b * x) * (-(a + b) * x * x).exp(), 0.0))
    }

    #[test]
    fn overlap_closed_form() {
        let a = 0.65;
        assert!((overlap(a, a).unwrap() - (PI / (2.0 * a)).sqrt()).abs() < 1e-15);
        let q = integrate_line(|x| c((-(0.65 + 0.2925) * x * x).exp(), 0.0));
        assert!((overlap(0.65, 0.2925).unwrap() - q.re).abs() < 1e-10 * q.re);
        assert_eq!(overlap(0.3, 1.7).unwrap(), overlap(1.7, 0.3).unwrap());
        assert!(overlap(-1.0, 0.5).is_err());
    }

    #[test]
    fn kinetic_matches_quadrature() {
        let one = c(1.0, 0.0);
        let k = kinetic(0.65, 0.65, one).unwrap();
        assert!(k.im == 0.0 && k.re > 0.0);
        assert!(rel(k, kinetic_by_quadrature(0.65, 0.65)) < 1e-10);

        let eta = Complex64::from_polar(1.0, -0.16);
        let rotated = kinetic(0.65, 0.2925, eta).unwrap();
        assert!(rel(rotated, eta * eta * kinetic(0.65, 0.2925, one).unwrap()) < 1e-15);
        assert!(rel(rotated, eta * eta * kinetic_by_quadrature(0.65, 0.2925)) < 1e-10);
        assert!(kinetic(0.0, 1.0, one).is_err());
    }

    #[test]
    fn harmonic_limit_of_potential() {
        let p = ModelParams {
            lambda: 0.0,
            coupling: 0.0,
            theta: 0.0,
            ..ModelParams::default()
        };
        let (a, b) = (0.4, 0.9);
        let v = potential(a, b, &p).unwrap();
        let moment = integrate_line(|x| c(0.5 * x * x * (-(a + b) * x * x).exp(), 0.0));
        assert!(rel(v, moment) < 1e-10);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn constant_limit_of_potential() {
        // lambda -> infinity leaves only the asymptotic constant J
        let p = ModelParams {
            lambda: 1e16,
            theta: 0.0,
            ..ModelParams::default()
        };
        let v = potential(0.3, 0.5, &p).unwrap();
        assert!(rel(v, c(p.coupling * overlap(0.3, 0.5).unwrap(), 0.0)) < 1e-7);
    }

    #[test]
    fn rotated_potential_matches_quadrature() {
        let p = ModelParams::new(0.65, 0.16, 5);
        let v = potential(0.65, 0.65, &p).unwrap();
        assert!(rel(v, potential_by_quadrature(0.65, 0.65, &p)) < 1e-8);
    }

    #[test]
    fn integrals_match_quadrature_across_a_random_sweep() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1978);
        for _ in 0..60 {
            let a = rng.gen_range(0.01..5.0);
            let b = rng.gen_range(0.01..5.0);
            let theta = rng.gen_range(0.0..0.3);
            let p = ModelParams::new(0.65, theta, 5);
            let v = potential(a, b, &p).unwrap();
            let vq = potential_by_quadrature(a, b, &p);
            assert!(rel(v, vq) < 1e-8, "V a={a} b={b} theta={theta}: {v} vs {vq}");
            let eta = p.eta();
            let k = kinetic(a, b, eta).unwrap();
            assert!(rel(k, eta * eta * kinetic_by_quadrature(a, b)) < 1e-8);
            let s = overlap(a, b).unwrap();
            let sq = integrate_line(|x| c((-(a + b) * x * x).exp(), 0.0));
            assert!((s - sq.re).abs() < 1e-8 * s);
        }
    }

    #[test]
    fn branch_cut_is_a_domain_error() {
        let p = ModelParams {
            lambda: 10.0,
            theta: 1.2,
            ..ModelParams::default()
        };
        assert!(matches!(potential(0.01, 0.01, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn single_function_is_just_normalized() {
        let basis = gram_schmidt(&[0.65]).unwrap();
        assert!((basis.coeffs[0][0] - overlap(0.65, 0.65).unwrap().powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_for_two_and_five_functions() {
        for n in [2, 5, 10] {
            let basis = gram_schmidt(&ModelParams::new(0.65, 0.16, n).exponents()).unwrap();
            let g = basis.gram().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g[i][j] - want).abs() < 1e-10, "n={n} ({i},{j}) {}", g[i][j]);
                }
                for k in i + 1..n {
                    assert_eq!(basis.coeffs[i][k], 0.0);
                }
            }
        }
    }

    #[test]
    fn repeated_exponent_is_degenerate() {
        assert!(matches!(
            gram_schmidt(&[0.5, 0.3, 0.5]),
            Err(Error::DegenerateBasis { index: 2 })
        ));
    }

    #[test]
    fn matrix_is_complex_symmetric() {
        for (alpha, theta, n) in [(0.65, 0.16, 5), (0.5, 0.24, 4), (0.8, 0.1, 7)] {
            let h = build_matrix(&ModelParams::new(alpha, theta, n)).unwrap();
            assert!(h.symmetry_defect() < 1e-10);
            assert!(h.sub(&h.adjoint()).max_abs() > 1e-3);
        }
    }

    #[test]
    fn unrotated_matrix_is_real_with_real_spectrum() {
        for n in [2, 5] {
            let h = build_matrix(&ModelParams::new(0.65, 0.0, n)).unwrap();
            assert!(h.as_slice().iter().all(|v| v.im == 0.0));
            assert!(eig(&h).unwrap().values.iter().all(|v| v.im.abs() < 1e-10));
            let s = build_pauli(&ModelParams::new(0.65, 0.0, n)).unwrap();
            assert!(s.terms().all(|(_, c)| c.im.abs() < 1e-12));
        }
    }

    #[test]
    fn trace_matches_identity_coefficient() {
        // For a one-body operator the identity coefficient is tr(h)/2.
        let p = ModelParams::new(0.65, 0.16, 5);
        let h = build_matrix(&p).unwrap();
        let s = build_pauli(&p).unwrap();
        assert!((s.identity_coefficient() - h.trace() * 0.5).norm() < 1e-12);
        assert_eq!(s.len(), 26);
    }

    #[test]
    fn two_function_model_matches_reference_polar_form() {
        let s = build_pauli(&ModelParams::new(0.65, 0.16, 2)).unwrap();
        let expected = [
            ("II", 1.31556, -0.04180),
            ("YY", 0.13333, 2.32888),
            ("XX", 0.13333, 2.32888),
            ("ZI", 0.25212, 3.05283),
            ("IZ", 1.06378, 3.11093),
        ];
        assert_eq!(s.len(), 5);
        for (label, beta, phase) in expected {
            let got = s.coefficient_of(label);
            assert!((got - Complex64::from_polar(beta, phase)).norm() < 1e-5, "{label}: {got}");
        }
    }

    #[test]
    fn five_function_spectrum_is_near_the_ten_function_resonance() {
        let h = build_matrix(&ModelParams::new(0.65, 0.16, 5)).unwrap();
        let (_, d) = eig(&h).unwrap().nearest(c(2.124, -0.019)).unwrap();
        assert!(d < 5e-2);
    }

    #[test]
    fn invalid_params_are_rejected() {
        for p in [
            ModelParams::new(0.0, 0.1, 2),
            ModelParams::new(0.5, -0.1, 2),
            ModelParams::new(0.5, 0.1, 0),
            ModelParams {
                ratio: 1.0,
                ..ModelParams::default()
            },
        ] {
            assert!(build_matrix(&p).is_err());
        }
    }
}
