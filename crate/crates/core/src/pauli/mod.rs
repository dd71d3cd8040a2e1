//! Pauli strings and complex-weighted sums of them.
//!
//! A string is stored as a pair of bit masks. Bit `k` of each mask belongs to
//! qubit `k`, which is also character `k` of the textual form counted from the
//! left: `"ZIIII"` is `Z` on qubit 0. Computational basis index bit `k` is the
//! state of qubit `k`.

mod jw;
mod lcu;

pub use jw::{jw_ladder, jw_one_body, jw_two_body, number_operator, TwoBodyTensor};
pub use lcu::{to_lcu, LcuHamiltonian};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest register a [`PauliString`] can describe.
pub const MAX_PAULI_QUBITS: usize = 16;

/// Largest sum converted to a dense matrix by [`to_matrix`].
pub const DEFAULT_MATRIX_CEILING: usize = 10;

/// Coefficients at or below this magnitude are dropped.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub(crate) fn i_pow(k: u32) -> Complex64 {
    I_POWERS[(k & 3) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis on a fixed-size register.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: u32,
    z: u32,
    n: u8,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("a Pauli string needs at least one qubit".into()));
    }
    if n > MAX_PAULI_QUBITS {
        return Err(Error::QubitCeiling {
            what: "Pauli string",
            requested: n,
            ceiling: MAX_PAULI_QUBITS,
        });
    }
    Ok(())
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        Ok(Self {
            x: 0,
            z: 0,
            n: n_qubits as u8,
        })
    }

    pub fn from_ops(ops: &[Pauli]) -> Result<Self> {
        check_qubits(ops.len())?;
        let (mut x, mut z) = (0u32, 0u32);
        for (k, op) in ops.iter().enumerate() {
            let (bx, bz) = op.bits();
            x |= (bx as u32) << k;
            z |= (bz as u32) << k;
        }
        Ok(Self {
            x,
            z,
            n: ops.len() as u8,
        })
    }

    /// `op` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, op: Pauli) -> Result<Self> {
        let mut s = Self::identity(n_qubits)?;
        if qubit >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                len: n_qubits,
            });
        }
        s.set(qubit, op);
        Ok(s)
    }

    fn set(&mut self, qubit: usize, op: Pauli) {
        let (bx, bz) = op.bits();
        let bit = 1u32 << qubit;
        self.x = (self.x & !bit) | ((bx as u32) << qubit);
        self.z = (self.z & !bit) | ((bz as u32) << qubit);
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn ops(&self) -> Vec<Pauli> {
        (0..self.n_qubits()).map(|k| self.get(k)).collect()
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Image of basis state `basis` under the string: `P|b> = phase |target>`.
    #[inline]
    pub fn apply_to_basis(&self, basis: usize) -> (Complex64, usize) {
        let sign = ((basis as u32) & self.z).count_ones() * 2;
        (i_pow(self.y_count() + sign), basis ^ self.x as usize)
    }

    /// Applies the string to a full register of amplitudes.
    pub fn apply(&self, input: &[Complex64], output: &mut [Complex64]) {
        debug_assert_eq!(input.len(), output.len());
        let y = self.y_count();
        let flip = self.x as usize;
        let z = self.z;
        for (b, amp) in input.iter().enumerate() {
            let sign = ((b as u32) & z).count_ones() * 2;
            output[b ^ flip] = i_pow(y + sign) * amp;
        }
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for k in 0..self.n_qubits() {
                match self.get(k).cmp(&other.get(k)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n_qubits() {
            write!(f, "{}", self.get(k).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad Pauli character '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ops(&ops)
    }
}

/// Product of two strings: `a * b = phase * product`, phase in {1, i, -1, -i}.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<(Complex64, PauliString)> {
    if a.n != b.n {
        return Err(Error::Dimension {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    let product = PauliString {
        x: a.x ^ b.x,
        z: a.z ^ b.z,
        n: a.n,
    };
    // P = i^{|x&z|} X^x Z^z, and Z^za X^xb = (-1)^{|za&xb|} X^xb Z^za.
    let swaps = (a.z & b.x).count_ones();
    let k = a.y_count() + b.y_count() + 2 * swaps + 4 * 16 - product.y_count();
    Ok((i_pow(k), product))
}

/// Complex-weighted sum of Pauli strings on a common register.
///
/// Terms keep their insertion order; that order is what serialization and
/// LCU conversion follow.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: IndexMap<PauliString, Complex64>,
    prune_tol: f64,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        Ok(Self {
            n_qubits,
            terms: IndexMap::new(),
            prune_tol: DEFAULT_PRUNE_TOL,
        })
    }

    pub fn identity(n_qubits: usize, coefficient: Complex64) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        s.add_term(PauliString::identity(n_qubits)?, coefficient)?;
        Ok(s)
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = Self::new(n_qubits)?;
        for (p, c) in terms {
            s.add_term(p, c)?;
        }
        Ok(s)
    }

    /// Convenience constructor from textual strings, e.g. `[("XX", c)]`.
    pub fn from_labels<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Complex64)>,
    {
        let mut out: Option<Self> = None;
        for (label, c) in terms {
            let p: PauliString = label.parse()?;
            let s = match out.as_mut() {
                Some(s) => s,
                None => out.insert(Self::new(p.n_qubits())?),
            };
            s.add_term(p, c)?;
        }
        out.ok_or(Error::EmptySum)
    }

    pub fn with_prune_tol(mut self, tol: f64) -> Self {
        self.prune_tol = tol.max(0.0);
        self.prune();
        self
    }

    pub fn prune_tol(&self) -> f64 {
        self.prune_tol
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.terms.contains_key(p)
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Coefficient by textual label; zero for absent or malformed labels.
    pub fn coefficient_of(&self, label: &str) -> Complex64 {
        label
            .parse::<PauliString>()
            .map(|p| self.coefficient(&p))
            .unwrap_or_default()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|(p, _)| p.is_identity())
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    /// The sum with its identity term removed.
    pub fn without_identity(&self) -> Self {
        let mut out = self.clone();
        out.terms.shift_remove(&PauliString {
            x: 0,
            z: 0,
            n: self.n_qubits as u8,
        });
        out
    }

    /// Accumulates `c` onto the coefficient of `p`.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        let entry = self.terms.entry(p).or_default();
        *entry += c;
        if entry.norm() <= self.prune_tol {
            self.terms.shift_remove(&p);
        }
        Ok(())
    }

    pub fn prune(&mut self) {
        let tol = self.prune_tol;
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(*p, *c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        sum_mul(self, other)
    }

    /// `out = H * input` without forming a matrix.
    pub fn apply(&self, input: &[Complex64], output: &mut [Complex64]) {
        debug_assert_eq!(input.len(), 1usize << self.n_qubits);
        output.iter_mut().for_each(|o| *o = Complex64::default());
        for (p, c) in self.terms() {
            let y = p.y_count();
            let flip = p.x as usize;
            for (b, amp) in input.iter().enumerate() {
                let sign = ((b as u32) & p.z).count_ones() * 2;
                output[b ^ flip] += c * i_pow(y + sign) * amp;
            }
        }
    }

    /// Largest magnitude of a matrix element connecting basis states of
    /// different Hamming weight, i.e. how far the sum is from commuting with
    /// the total number operator.
    pub fn number_violation(&self) -> f64 {
        let mut off: std::collections::HashMap<(usize, usize), Complex64> = Default::default();
        for (p, c) in self.terms() {
            if p.x == 0 {
                continue;
            }
            for b in 0..(1usize << self.n_qubits) {
                let (phase, t) = p.apply_to_basis(b);
                if t.count_ones() != b.count_ones() {
                    *off.entry((t, b)).or_default() += c * phase;
                }
            }
        }
        off.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Product of two Pauli sums, pruned.
pub fn sum_mul(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Dimension {
            expected: a.n_qubits,
            found: b.n_qubits,
        });
    }
    let mut out = PauliSum::new(a.n_qubits)?.with_prune_tol(a.prune_tol);
    let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
    for (pa, ca) in a.terms() {
        for (pb, cb) in b.terms() {
            let (phase, p) = pauli_mul(pa, pb)?;
            *acc.entry(p).or_default() += ca * cb * phase;
        }
    }
    out.terms = acc;
    out.prune();
    Ok(out)
}

pub fn to_matrix(s: &PauliSum) -> Result<ComplexMatrix> {
    to_matrix_with_ceiling(s, DEFAULT_MATRIX_CEILING)
}

/// Dense `2^n x 2^n` matrix of the sum, refusing registers above `ceiling`.
pub fn to_matrix_with_ceiling(s: &PauliSum, ceiling: usize) -> Result<ComplexMatrix> {
    if s.n_qubits > ceiling {
        return Err(Error::QubitCeiling {
            what: "dense matrix",
            requested: s.n_qubits,
            ceiling,
        });
    }
    let dim = 1usize << s.n_qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (p, c) in s.terms() {
        for col in 0..dim {
            let (phase, row) = p.apply_to_basis(col);
            m[(row, col)] += c * phase;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{dense_pauli, random_sum};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn textual_form_round_trips() {
        let p = ps("YYIII");
        assert_eq!(p.to_string(), "YYIII");
        assert_eq!(p.get(0), Pauli::Y);
        assert_eq!(p.get(2), Pauli::I);
        assert_eq!(p.weight(), 2);
        assert!("YQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!(PauliString::identity(17).is_err());
    }

    #[test]
    fn xy_is_iz() {
        let (phase, p) = pauli_mul(&ps("X"), &ps("Y")).unwrap();
        assert_eq!(phase, c(0.0, 1.0));
        assert_eq!(p, ps("Z"));
    }

    #[test]
    fn strings_are_involutions() {
        for label in ["I", "X", "Y", "Z", "XYZI", "YYZX"] {
            let p = ps(label);
            let (phase, q) = pauli_mul(&p, &p).unwrap();
            assert_eq!(phase, c(1.0, 0.0));
            assert!(q.is_identity());
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            pauli_mul(&ps("X"), &ps("XX")),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn xz_times_zx_matches_dense_product() {
        let (a, b) = (ps("XZ"), ps("ZX"));
        let (phase, p) = pauli_mul(&a, &b).unwrap();
        let lhs = dense_pauli(&a).matmul(&dense_pauli(&b));
        let rhs = dense_pauli(&p).scale(phase);
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn products_match_dense_exhaustively_up_to_two_qubits() {
        let singles = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for n in 1..=2usize {
            let all: Vec<PauliString> = (0..4usize.pow(n as u32))
                .map(|mut code| {
                    let ops: Vec<Pauli> = (0..n)
                        .map(|_| {
                            let op = singles[code % 4];
                            code /= 4;
                            op
                        })
                        .collect();
                    PauliString::from_ops(&ops).unwrap()
                })
                .collect();
            for a in &all {
                for b in &all {
                    let (phase, p) = pauli_mul(a, b).unwrap();
                    let lhs = dense_pauli(a).matmul(&dense_pauli(b));
                    assert!(lhs.max_abs_diff(&dense_pauli(&p).scale(phase)) < 1e-15, "{a} {b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn products_match_dense_on_four_qubits(codes in proptest::collection::vec(0u8..16, 4)) {
            let singles = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
            let a = PauliString::from_ops(&codes.iter().map(|c| singles[(c & 3) as usize]).collect::<Vec<_>>()).unwrap();
            let b = PauliString::from_ops(&codes.iter().map(|c| singles[(c >> 2) as usize]).collect::<Vec<_>>()).unwrap();
            let (phase, p) = pauli_mul(&a, &b).unwrap();
            let lhs = dense_pauli(&a).matmul(&dense_pauli(&b));
            prop_assert!(lhs.max_abs_diff(&dense_pauli(&p).scale(phase)) < 1e-15);
        }

        #[test]
        fn sum_mul_is_associative(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_sum(&mut rng, 3, 6);
            let b = random_sum(&mut rng, 3, 6);
            let d = random_sum(&mut rng, 3, 6);
            let left = sum_mul(&sum_mul(&a, &b).unwrap(), &d).unwrap();
            let right = sum_mul(&a, &sum_mul(&b, &d).unwrap()).unwrap();
            let diff = to_matrix(&left).unwrap().max_abs_diff(&to_matrix(&right).unwrap());
            prop_assert!(diff < 1e-10);
        }
    }

    #[test]
    fn identity_times_sum_is_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let b = random_sum(&mut rng, 3, 7);
        let id = PauliSum::identity(3, c(1.0, 0.0)).unwrap();
        let out = sum_mul(&id, &b).unwrap();
        assert_eq!(out.len(), b.len());
        for (p, coef) in b.terms() {
            assert!((out.coefficient(p) - coef).norm() < 1e-15);
        }
    }

    #[test]
    fn sum_mul_matches_dense_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_sum(&mut rng, 3, 8);
            let b = random_sum(&mut rng, 3, 8);
            let prod = to_matrix(&sum_mul(&a, &b).unwrap()).unwrap();
            let dense = to_matrix(&a).unwrap().matmul(&to_matrix(&b).unwrap());
            assert!(prod.max_abs_diff(&dense) < 1e-12);
        }
    }

    #[test]
    fn square_of_four_term_model_hamiltonian() {
        let h = PauliSum::from_labels([
            ("YY", Complex64::from_polar(0.13333, 2.32888)),
            ("XX", Complex64::from_polar(0.13333, 2.32888)),
            ("ZI", Complex64::from_polar(0.25212, 3.05283)),
            ("IZ", Complex64::from_polar(1.06378, 3.11093)),
        ])
        .unwrap();
        let sq = sum_mul(&h, &h).unwrap();
        assert_eq!(sq.len(), 2);
        let ii = sq.coefficient_of("II");
        let zz = sq.coefficient_of("ZZ");
        assert!((ii.norm() - 1.19577).abs() < 1e-4, "{ii}");
        assert!((ii.arg() + 0.09723).abs() < 1e-4, "{ii}");
        assert!((zz.norm() - 0.53529).abs() < 1e-4, "{zz}");
        assert!((zz.arg() + 0.05311).abs() < 1e-4, "{zz}");
    }

    #[test]
    fn z_matrix_is_diag_one_minus_one() {
        let m = to_matrix(&PauliSum::from_labels([("Z", c(1.0, 0.0))]).unwrap()).unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(1, 1)], c(-1.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn matrix_projection_recovers_coefficients() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let s = random_sum(&mut rng, 3, 10);
        let m = to_matrix(&s).unwrap();
        for (p, coef) in s.terms() {
            // c_P = Tr(P^dagger M) / 2^n
            let proj = dense_pauli(p).adjoint().matmul(&m).trace() / 8.0;
            assert!((proj - coef).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_ceiling_is_enforced() {
        let s = PauliSum::identity(11, c(1.0, 0.0)).unwrap();
        assert!(matches!(to_matrix(&s), Err(Error::QubitCeiling { .. })));
        assert!(to_matrix_with_ceiling(&s, 11).is_ok());
    }

    #[test]
    fn cancellation_prunes_terms() {
        let mut s = PauliSum::from_labels([("XZ", c(0.5, 0.0)), ("ZZ", c(1.0, 0.0))]).unwrap();
        s.add_term(ps("XZ"), c(-0.5, 0.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert!(!s.contains(&ps("XZ")));
        assert!(s.add_term(ps("XZZ"), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn apply_matches_dense_matrix() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let s = random_sum(&mut rng, 4, 12);
        let v: Vec<Complex64> = (0..16).map(|k| c(k as f64 * 0.1, 1.0 - k as f64 * 0.05)).collect();
        let mut out = vec![Complex64::default(); 16];
        s.apply(&v, &mut out);
        let dense = to_matrix(&s).unwrap().matvec(&v);
        for (a, b) in out.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
