//! Jordan-Wigner images of fermionic operators.
//!
//! Orbital `j` maps to qubit `j`; the parity string covers orbitals `0..j`.

use num_complex::Complex64;

use super::{sum_mul, Pauli, PauliString, PauliSum};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// `a_j^dagger` (creation) or `a_j` as a Pauli sum on `n` qubits:
/// `1/2 (X_j -/+ i Y_j) Z_{j-1} ... Z_0`.
pub fn jw_ladder(j: usize, n: usize, dagger: bool) -> Result<PauliSum> {
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let mut tail = vec![Pauli::I; n];
    tail[..j].iter_mut().for_each(|p| *p = Pauli::Z);
    let mut x_ops = tail.clone();
    x_ops[j] = Pauli::X;
    let mut y_ops = tail;
    y_ops[j] = Pauli::Y;
    let y_coef = if dagger {
        Complex64::new(0.0, -0.5)
    } else {
        Complex64::new(0.0, 0.5)
    };
    PauliSum::from_terms(
        n,
        [
            (PauliString::from_ops(&x_ops)?, Complex64::new(0.5, 0.0)),
            (PauliString::from_ops(&y_ops)?, y_coef),
        ],
    )
}

/// Total number operator `sum_j (I - Z_j) / 2`.
pub fn number_operator(n: usize) -> Result<PauliSum> {
    let mut s = PauliSum::new(n)?;
    for j in 0..n {
        s.add_term(PauliString::identity(n)?, Complex64::new(0.5, 0.0))?;
        s.add_term(PauliString::single(n, j, Pauli::Z)?, Complex64::new(-0.5, 0.0))?;
    }
    Ok(s)
}

struct Ladders {
    create: Vec<PauliSum>,
    annihilate: Vec<PauliSum>,
}

impl Ladders {
    fn new(n: usize) -> Result<Self> {
        Ok(Self {
            create: (0..n).map(|j| jw_ladder(j, n, true)).collect::<Result<_>>()?,
            annihilate: (0..n).map(|j| jw_ladder(j, n, false)).collect::<Result<_>>()?,
        })
    }
}

/// `sum_ij h_ij a_i^dagger a_j`.
pub fn jw_one_body(h: &ComplexMatrix) -> Result<PauliSum> {
    if !h.is_square() {
        return Err(Error::NonSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let ops = Ladders::new(n)?;
    let mut out = PauliSum::new(n)?;
    for i in 0..n {
        for j in 0..n {
            let hij = h[(i, j)];
            if hij == Complex64::default() {
                continue;
            }
            let term = sum_mul(&ops.create[i], &ops.annihilate[j])?;
            for (p, c) in term.terms() {
                out.add_term(*p, c * hij)?;
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Dense rank-4 tensor `g[i][j][k][l]` with equal extents.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyTensor {
    dim: usize,
    data: Vec<Complex64>,
}

impl TwoBodyTensor {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::default(); dim.pow(4)],
        }
    }

    pub fn from_nested(g: &[Vec<Vec<Vec<Complex64>>>]) -> Result<Self> {
        let dim = g.len();
        let mut out = Self::zeros(dim);
        for (i, gi) in g.iter().enumerate() {
            if gi.len() != dim {
                return Err(Error::RaggedTensor(format!("axis 1 at [{i}] has length {}", gi.len())));
            }
            for (j, gij) in gi.iter().enumerate() {
                if gij.len() != dim {
                    return Err(Error::RaggedTensor(format!(
                        "axis 2 at [{i}][{j}] has length {}",
                        gij.len()
                    )));
                }
                for (k, gijk) in gij.iter().enumerate() {
                    if gijk.len() != dim {
                        return Err(Error::RaggedTensor(format!(
                            "axis 3 at [{i}][{j}][{k}] has length {}",
                            gijk.len()
                        )));
                    }
                    for (l, v) in gijk.iter().enumerate() {
                        out.set(i, j, k, l, *v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.data[self.index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Complex64) {
        let idx = self.index(i, j, k, l);
        self.data[idx] = v;
    }
}

/// `1/2 sum_ijkl g_ijkl a_i^dagger a_j^dagger a_k a_l`.
pub fn jw_two_body(g: &TwoBodyTensor) -> Result<PauliSum> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::RaggedTensor("empty tensor".into()));
    }
    let ops = Ladders::new(n)?;
    let mut out = PauliSum::new(n)?;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                // a_i^dagger a_i^dagger = 0
                continue;
            }
            let pair_create = sum_mul(&ops.create[i], &ops.create[j])?;
            for k in 0..n {
                for l in 0..n {
                    let gijkl = g.get(i, j, k, l);
                    if k == l || gijkl == Complex64::default() {
                        continue;
                    }
                    let pair_destroy = sum_mul(&ops.annihilate[k], &ops.annihilate[l])?;
                    let term = sum_mul(&pair_create, &pair_destroy)?;
                    for (p, c) in term.terms() {
                        out.add_term(*p, c * gijkl * 0.5)?;
                    }
                }
            }
        }
    }
    out.prune();
    Ok(out)
}
