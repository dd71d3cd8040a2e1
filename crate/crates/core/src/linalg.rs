//! Dense complex matrices and a general (non-Hermitian) eigensolver.
//!
//! Eigenvalues come from Householder reduction to upper Hessenberg form
//! followed by single-shift complex QR iteration with deflation. The Schur
//! vectors are accumulated and eigenvectors are obtained by inverse iteration
//! on the triangular Schur factor (one back-substitution per eigenvalue, with
//! near-singular pivots lifted to a small floor) and mapped back.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Largest matrix accepted by [`eig`].
pub const MAX_EIG_DIM: usize = 1024;

/// Tolerance of the particle-number check in [`sector_eig`].
pub const NUMBER_CONSERVATION_TOL: f64 = 1e-8;

/// Default acceptance radius of [`eigvec_for`].
pub const EIGVEC_TARGET_TOL: f64 = 1e-3;

const PIVOT_FLOOR: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::default() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { data, ..*self }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        Self { data, ..*self }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m_ij - m_ji|` (complex symmetry, no conjugation).
    pub fn symmetry_defect(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues with unit-norm right eigenvectors, sorted by descending real
/// part then descending imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the eigenvalue closest to `target` and its distance. Ties go
    /// to the earlier entry in sort order.
    pub fn nearest(&self, target: Complex64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, v) in self.values.iter().enumerate() {
            let d = (v - target).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        best
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit Hermitian norm, largest component made real positive.
fn normalize_with_phase(v: &mut [Complex64]) {
    let n = norm2(v);
    if n == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .fold(Complex64::default(), |best, a| if a.norm() > best.norm() { a } else { best });
    let fix = pivot.conj() / pivot.norm() / n;
    v.iter_mut().for_each(|a| *a *= fix);
}

fn reduce_to_hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows;
    let mut v = vec![Complex64::default(); n];
    for k in 0..n.saturating_sub(2) {
        let col_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * col_norm;
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vn = norm2(&v[k + 1..n]);
        if vn == 0.0 {
            continue;
        }
        for a in &mut v[k + 1..n] {
            *a /= vn;
        }
        // H <- (I - 2vv*) H
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= 2.0 * v[i] * dot;
            }
        }
        // H <- H (I - 2vv*), Q <- Q (I - 2vv*)
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let dot: Complex64 = (k + 1..n).map(|j| m[(i, j)] * v[j]).sum();
                for j in k + 1..n {
                    m[(i, j)] -= 2.0 * dot * v[j].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::default();
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (l1, l2) = (mean + disc, mean - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Reduces an upper Hessenberg `h` to upper triangular Schur form in place,
/// accumulating the unitary similarity into `z`.
fn hessenberg_qr(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows;
    if n < 2 {
        return Ok(());
    }
    let max_sweeps = 100 * n;
    let tiny = f64::MIN_POSITIVE * (n as f64) / f64::EPSILON;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut sweeps = 0usize;
    let mut rotations: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * scale || sub <= tiny {
                h[(lo, lo - 1)] = Complex64::default();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::Convergence { sweeps: max_sweeps });
        }

        let shift = if since_deflation.is_multiple_of(10) {
            // exceptional shift
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rotations.clear();
        for k in lo..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::default())
            } else {
                (a / r, b / r)
            };
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            h[(k + 1, k)] = Complex64::default();
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let last_row = (k + 2).min(hi);
            for i in 0..=last_row {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s;
                z[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(())
}

/// Right eigenvectors of upper triangular `t`, one per diagonal entry.
fn triangular_eigenvectors(t: &ComplexMatrix, floor: f64) -> Vec<Vec<Complex64>> {
    let n = t.rows;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![Complex64::default(); k + 1];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut d = t[(i, i)] - lambda;
            if d.norm() < floor {
                d = Complex64::new(floor, 0.0);
            }
            y[i] = -s / d;
            let big = y[i].norm();
            if big > 1e100 {
                y.iter_mut().for_each(|a| *a /= big);
            }
        }
        out.push(y);
    }
    out
}

/// Full eigendecomposition of a square complex matrix.
pub fn eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n > MAX_EIG_DIM {
        return Err(Error::InvalidParameter(format!(
            "eigensolver dimension {n} exceeds {MAX_EIG_DIM}"
        )));
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut t = m.clone();
    let mut z = ComplexMatrix::identity(n);
    reduce_to_hessenberg(&mut t, &mut z);
    hessenberg_qr(&mut t, &mut z)?;

    let floor = (PIVOT_FLOOR * m.frobenius_norm()).max(f64::MIN_POSITIVE);
    let ys = triangular_eigenvectors(&t, floor);
    let mut pairs: Vec<(Complex64, Vec<Complex64>)> = ys
        .into_iter()
        .enumerate()
        .map(|(k, y)| {
            let mut v: Vec<Complex64> = (0..n)
                .map(|i| (0..y.len()).map(|j| z[(i, j)] * y[j]).sum())
                .collect();
            normalize_with_phase(&mut v);
            (t[(k, k)], v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.0.re
            .partial_cmp(&a.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| b.0.im.partial_cmp(&a.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition { values, vectors })
}

/// Unit right eigenvector for the eigenvalue nearest `target`.
pub fn eigvec_for(m: &ComplexMatrix, target: Complex64) -> Result<Vec<Complex64>> {
    let dec = eig(m)?;
    match dec.nearest(target) {
        Some((k, d)) if d <= EIGVEC_TARGET_TOL => Ok(dec.vectors[k].clone()),
        _ => Err(Error::EigenvalueNotFound {
            target,
            tolerance: EIGVEC_TARGET_TOL,
        }),
    }
}

/// Spectrum of one particle-number block of a number-conserving Pauli sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorEigen {
    pub n_electrons: usize,
    /// Basis indices (Hamming weight `n_electrons`) spanning the block.
    pub basis: Vec<usize>,
    /// Eigenpairs with eigenvectors embedded in the full `2^n` register.
    pub decomposition: EigenDecomposition,
}

/// Dense block of `h` restricted to basis states of Hamming weight `n_electrons`.
pub fn sector_matrix(h: &PauliSum, n_electrons: usize) -> Result<(Vec<usize>, ComplexMatrix)> {
    let n = h.n_qubits();
    if n_electrons > n {
        return Err(Error::InvalidParameter(format!(
            "{n_electrons} electrons on {n} spin orbitals"
        )));
    }
    let violation = h.number_violation();
    if violation > NUMBER_CONSERVATION_TOL {
        return Err(Error::NotNumberConserving {
            magnitude: violation,
        });
    }
    let basis: Vec<usize> = (0..1usize << n)
        .filter(|b| b.count_ones() as usize == n_electrons)
        .collect();
    let mut position = vec![usize::MAX; 1 << n];
    for (k, b) in basis.iter().enumerate() {
        position[*b] = k;
    }
    let dim = basis.len();
    let mut block = ComplexMatrix::zeros(dim, dim);
    for (p, c) in h.terms() {
        for (col, &b) in basis.iter().enumerate() {
            let (phase, t) = p.apply_to_basis(b);
            let row = position[t];
            if row != usize::MAX {
                block[(row, col)] += c * phase;
            }
        }
    }
    Ok((basis, block))
}

pub fn sector_eig(h: &PauliSum, n_electrons: usize) -> Result<SectorEigen> {
    let (basis, block) = sector_matrix(h, n_electrons)?;
    let dec = eig(&block)?;
    let full = 1usize << h.n_qubits();
    let vectors = dec
        .vectors
        .iter()
        .map(|v| {
            let mut out = vec![Complex64::default(); full];
            for (k, b) in basis.iter().enumerate() {
                out[*b] = v[k];
            }
            out
        })
        .collect();
    Ok(SectorEigen {
        n_electrons,
        basis,
        decomposition: EigenDecomposition {
            values: dec.values,
            vectors,
        },
    })
}
