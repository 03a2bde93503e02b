//! Synthetic scenarios: second-fundamental-form data in an adapted frame
//! without an embedding, for any holomorphic sectional curvature c. The
//! pointwise algebra (identities, inequalities, equality classification) is
//! evaluated exactly as for immersions; realizability (Codazzi) is out of
//! scope.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::immersion::SecondFundamentalForm;
use crate::numeric::SymMat;
use crate::warped::WarpData;

/// Raw synthetic payload as it appears in scenario files. `h` is indexed
/// `[normal][row][col]` with 0-based tangent indices, D_T block first; the
/// first normal slice is the distinguished direction e_{n+1}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticScenario {
    pub n1: usize,
    pub n2: usize,
    pub c: f64,
    pub h: Vec<Vec<Vec<f64>>>,
    /// Optional warping data; when absent, the warp term is derived from
    /// the mixed sectional curvatures through the warped identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warp: Option<WarpData>,
    /// J-pairing of the D_T block as index pairs (Je_p = e_q), 0-based.
    /// Defaults to the interleaved pairing (0,1), (2,3), ….
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_pairs: Option<Vec<(usize, usize)>>,
}

impl SyntheticScenario {
    /// Validates dimensions and symmetry, returning the typed form.
    pub fn compile(&self) -> Result<CompiledSynthetic> {
        if self.n1 % 2 != 0 {
            return Err(Error::ParityError { n1: self.n1 });
        }
        let n = self.n1 + self.n2;
        if n < 2 {
            return Err(Error::config("synthetic", "need n1 + n2 >= 2"));
        }
        let normal_dim = self.h.len();
        if normal_dim < self.n2 || (normal_dim - self.n2) % 2 != 0 {
            return Err(Error::config(
                "synthetic.h",
                format!(
                    "normal dimension {normal_dim} incompatible with a CR embedding: \
                     need >= n2 = {} and the excess even (J D_perp plus a J-invariant nu)",
                    self.n2
                ),
            ));
        }
        let mut slices = Vec::with_capacity(normal_dim);
        for (r, slice) in self.h.iter().enumerate() {
            if slice.len() != n || slice.iter().any(|row| row.len() != n) {
                return Err(Error::config(
                    format!("synthetic.h[{r}]"),
                    format!("expected an {n}x{n} matrix"),
                ));
            }
            for i in 0..n {
                for j in 0..i {
                    if (slice[i][j] - slice[j][i]).abs() > crate::tol::TOL_EXACT {
                        return Err(Error::config(
                            format!("synthetic.h[{r}][{i}][{j}]"),
                            "second fundamental form must be symmetric in tangent indices",
                        ));
                    }
                }
            }
            slices.push(SymMat::from_fn(n, |i, j| slice[i][j]));
        }
        let h = SecondFundamentalForm::new(self.n1, self.n2, slices)?;
        let omega = self.omega()?;
        Ok(CompiledSynthetic {
            h,
            c: self.c,
            omega,
            warp: self.warp.clone(),
        })
    }

    /// The tangent pairing matrix Ω with Ω_{pq} = g(Je_p, e_q).
    fn omega(&self) -> Result<DMatrix<f64>> {
        let n = self.n1 + self.n2;
        let mut omega = DMatrix::zeros(n, n);
        let pairs: Vec<(usize, usize)> = match &self.j_pairs {
            Some(p) => p.clone(),
            None => (0..self.n1 / 2).map(|a| (2 * a, 2 * a + 1)).collect(),
        };
        if pairs.len() != self.n1 / 2 {
            return Err(Error::config(
                "synthetic.j_pairs",
                format!("expected {} pairs covering the D_T block", self.n1 / 2),
            ));
        }
        let mut seen = vec![false; self.n1];
        for &(p, q) in &pairs {
            if p >= self.n1 || q >= self.n1 || p == q {
                return Err(Error::config(
                    "synthetic.j_pairs",
                    format!("pair ({p}, {q}) must name two distinct D_T indices (0..{})", self.n1),
                ));
            }
            if seen[p] || seen[q] {
                return Err(Error::config(
                    "synthetic.j_pairs",
                    format!("index repeated in pair ({p}, {q})"),
                ));
            }
            seen[p] = true;
            seen[q] = true;
            omega[(p, q)] = 1.0;
            omega[(q, p)] = -1.0;
        }
        Ok(omega)
    }
}

/// Validated synthetic data ready for evaluation.
#[derive(Debug, Clone)]
pub struct CompiledSynthetic {
    pub h: SecondFundamentalForm,
    pub c: f64,
    pub omega: DMatrix<f64>,
    pub warp: Option<WarpData>,
}
