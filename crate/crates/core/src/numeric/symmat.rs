//! Packed symmetric matrices. Storing only the lower triangle makes the
//! symmetry invariant structural: `get(i, j)` and `get(j, i)` read the same
//! word, so symmetry holds to exact bit equality by construction.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMat {
    dim: usize,
    /// Lower triangle, row-major: entry (i, j) with i >= j sits at
    /// i * (i + 1) / 2 + j.
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        SymMat {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// Builds from a callback invoked once per unordered index pair (i >= j).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMat::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.data[i * (i + 1) / 2 + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[Self::idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[Self::idx(i, j)] = v;
    }

    #[inline]
    pub fn add_assign_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[Self::idx(i, j)] += v;
    }

    pub fn scale(&self, s: f64) -> SymMat {
        SymMat {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        debug_assert_eq!(self.dim, other.dim);
        SymMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        debug_assert_eq!(self.dim, other.dim);
        SymMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Symmetrized outer product (u vᵀ + v uᵀ) / 1, entry (i, j) = uᵢvⱼ + uⱼvᵢ.
    pub fn sym_outer(u: &[f64], v: &[f64]) -> SymMat {
        debug_assert_eq!(u.len(), v.len());
        SymMat::from_fn(u.len(), |i, j| u[i] * v[j] + u[j] * v[i])
    }

    /// Plain outer product u uᵀ.
    pub fn outer(u: &[f64]) -> SymMat {
        SymMat::from_fn(u.len(), |i, j| u[i] * u[j])
    }

    /// Quadratic form xᵀ A y.
    pub fn quad(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += x[i] * self.get(i, j) * y[j];
            }
        }
        acc
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Squared Frobenius norm over all ordered index pairs.
    pub fn frob_sq(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.get(i, j);
                acc += v * v;
            }
        }
        acc
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Conjugation Rᵀ A R for an orthogonal (or any) change of tangent basis.
    /// The result is filled per unordered pair, so it stays exactly symmetric.
    pub fn conjugate(&self, r: &DMatrix<f64>) -> SymMat {
        debug_assert_eq!(r.nrows(), self.dim);
        let k = r.ncols();
        SymMat::from_fn(k, |i, j| {
            let mut acc = 0.0;
            for p in 0..self.dim {
                for q in 0..self.dim {
                    acc += r[(p, i)] * self.get(p, q) * r[(q, j)];
                }
            }
            acc
        })
    }
}
