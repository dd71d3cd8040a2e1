//! Independent reference implementations used only by unit tests.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::ComplexMatrix;
use crate::pauli::{Pauli, PauliString, PauliSum};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(p: Pauli) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    let rows = match p {
        Pauli::I => [[c(1.0, 0.0), z], [z, c(1.0, 0.0)]],
        Pauli::X => [[z, c(1.0, 0.0)], [c(1.0, 0.0), z]],
        Pauli::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        Pauli::Z => [[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]],
    };
    ComplexMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())]
    })
}

/// Kronecker-product matrix of a string. Qubit 0 is the least significant
/// index bit, so it is the rightmost factor.
pub fn dense_pauli(p: &PauliString) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1);
    for q in (0..p.n_qubits()).rev() {
        m = kron(&m, &single(p.get(q)));
    }
    m
}

pub fn random_sum(rng: &mut impl Rng, n: usize, terms: usize) -> PauliSum {
    let singles = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut s = PauliSum::new(n).unwrap();
    while s.len() < terms {
        let ops: Vec<Pauli> = (0..n).map(|_| singles[rng.gen_range(0..4)]).collect();
        let p = PauliString::from_ops(&ops).unwrap();
        if s.contains(&p) {
            if s.len() >= 4usize.pow(n as u32) {
                break;
            }
            continue;
        }
        s.add_term(p, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .unwrap();
    }
    s
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `a_j` in the occupation basis: bit `k` of the index is the occupation of
/// orbital `k`, with sign `(-1)^(occupied orbitals below j)`.
pub fn fermion_annihilator(j: usize, n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for occ in 0..dim {
        if occ >> j & 1 == 1 {
            let below = (occ & ((1 << j) - 1)).count_ones();
            let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(occ ^ (1 << j), occ)] = c(sign, 0.0);
        }
    }
    m
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += pair * WGK[k];
        if k % 2 == 1 {
            gauss += pair * WG[k / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

fn adaptive(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32) -> Complex64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return val;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod integral of `f` over `[-40, 40]`.
pub fn integrate_line(f: impl Fn(f64) -> Complex64) -> Complex64 {
    let rough = adaptive(&f, -40.0, 40.0, 1e-6, 12);
    let tol = (1e-13 * rough.norm()).max(1e-14);
    // split at the origin where the integrands peak
    adaptive(&f, -40.0, 0.0, 0.5 * tol, 40) + adaptive(&f, 0.0, 40.0, 0.5 * tol, 40)
}
