use num_complex::Complex64;

use super::Gate;
use crate::sim::kernel;

/// Small dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from row-major entries; `None` unless the length is a square.
    pub fn from_row_major(data: Vec<Complex64>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Matrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Matrix { dim: n, data: out }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Matrix { dim: n, data: out }
    }

    /// Max-entry deviation of `U U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        self.mul(&self.adjoint()).distance(&Matrix::identity(self.dim))
    }

    pub fn distance(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&Matrix::identity(self.dim)) <= tol
    }

    /// Applies the matrix to a vector of matching length.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }
}

/// Unitary of `gate` on the qubits listed in `support` (bit `b` of the matrix
/// index corresponds to `support[b]`). Classical conditions are ignored.
pub fn local_unitary(gate: &Gate, support: &[usize]) -> Matrix {
    let position = |q: usize| {
        support
            .iter()
            .position(|&s| s == q)
            .expect("gate qubit missing from support")
    };
    let local = Gate {
        kind: gate.kind.clone(),
        targets: gate.targets.iter().map(|&q| position(q)).collect(),
        controls: gate.controls.iter().map(|&q| position(q)).collect(),
        cond: Vec::new(),
    };
    let dim = 1usize << support.len();
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        column.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        column[col] = Complex64::new(1.0, 0.0);
        kernel::apply_gate(&mut column, &local);
        for row in 0..dim {
            data[row * dim + col] = column[row];
        }
    }
    Matrix { dim, data }
}
