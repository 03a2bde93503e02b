//! Ordered orthonormal frames, 2-plane specifications, and Gram–Schmidt
//! orthonormalization against an arbitrary inner product.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol::TOL_FRAME;

/// How the vector list of a [`Frame`] is partitioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameSplit {
    /// A plain subspace basis with no distinguished blocks.
    Flat,
    /// Adapted CR frame: holomorphic tangent block, totally real tangent
    /// block, then the normal block.
    Adapted { dt: usize, dperp: usize, normal: usize },
}

/// An ordered list of vectors with an optional block structure.
#[derive(Debug, Clone)]
pub struct Frame {
    vectors: Vec<DVector<f64>>,
    split: FrameSplit,
    orthonormal: bool,
}

impl Frame {
    pub fn new(vectors: Vec<DVector<f64>>, split: FrameSplit) -> Result<Self> {
        if let FrameSplit::Adapted { dt, dperp, normal } = split {
            if dt + dperp + normal != vectors.len() {
                return Err(Error::dim(
                    dt + dperp + normal,
                    vectors.len(),
                    "frame split must partition the vector list",
                ));
            }
            if dt % 2 != 0 {
                return Err(Error::ParityError { n1: dt });
            }
        }
        let orthonormal = gram_deviation(&vectors) < TOL_FRAME;
        Ok(Frame {
            vectors,
            split,
            orthonormal,
        })
    }

    /// The standard basis of R^k as a flat frame.
    pub fn standard(k: usize) -> Frame {
        let vectors = (0..k)
            .map(|i| DVector::from_fn(k, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        Frame {
            vectors,
            split: FrameSplit::Flat,
            orthonormal: true,
        }
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn split(&self) -> FrameSplit {
        self.split
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    /// A flat sub-frame built from a contiguous index range.
    pub fn block(&self, range: std::ops::Range<usize>) -> Frame {
        Frame {
            vectors: self.vectors[range].to_vec(),
            split: FrameSplit::Flat,
            orthonormal: self.orthonormal,
        }
    }

    /// Expands coefficients over this frame into the carrier space.
    pub fn expand(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.vectors[0].len());
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            out.axpy(*c, v, 1.0);
        }
        out
    }
}

fn gram_deviation(vectors: &[DVector<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((u.dot(v) - target).abs());
        }
    }
    worst
}

/// An orthonormal pair spanning a 2-plane, expressed in the same carrier
/// space as the parent frame it was drawn from.
#[derive(Debug, Clone)]
pub struct PlaneSpec {
    pub u: DVector<f64>,
    pub v: DVector<f64>,
}

impl PlaneSpec {
    /// Validates unit norms and orthogonality at 1e-12, and membership in the
    /// declared parent subspace at 1e-10 when a parent is supplied.
    pub fn new(u: DVector<f64>, v: DVector<f64>, parent: Option<&Frame>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::dim(u.len(), v.len(), "plane spanning vectors"));
        }
        let tol = 1e-12;
        if (u.norm() - 1.0).abs() > tol || (v.norm() - 1.0).abs() > tol {
            return Err(Error::DegenerateInput(format!(
                "plane spanning vectors must be unit length (|u| = {}, |v| = {})",
                u.norm(),
                v.norm()
            )));
        }
        if u.dot(&v).abs() > tol {
            return Err(Error::DegenerateInput(format!(
                "plane spanning vectors must be orthogonal (<u,v> = {:e})",
                u.dot(&v)
            )));
        }
        if let Some(frame) = parent {
            for w in [&u, &v] {
                let mut resid = w.clone();
                for b in frame.vectors() {
                    let c = resid.dot(b);
                    resid.axpy(-c, b, 1.0);
                }
                if resid.norm() > 1e-10 {
                    return Err(Error::DegenerateInput(format!(
                        "plane does not lie in the parent subspace (residual {:e})",
                        resid.norm()
                    )));
                }
            }
        }
        Ok(PlaneSpec { u, v })
    }

    /// Skips validation; for internal construction from already-orthonormal
    /// data (sampler output is re-orthonormalized explicitly).
    pub(crate) fn new_unchecked(u: DVector<f64>, v: DVector<f64>) -> Self {
        PlaneSpec { u, v }
    }
}

/// Order-stable Gram–Schmidt with respect to an arbitrary inner product.
///
/// The first vector keeps its direction. Fails with `DegenerateInput` when
/// the Gram determinant of the inputs is at or below 1e-14.
pub fn gram_schmidt<F>(vectors: &[DVector<f64>], inner: F) -> Result<Frame>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> f64,
{
    if vectors.is_empty() {
        return Err(Error::DegenerateInput("no vectors to orthonormalize".into()));
    }
    let k = vectors.len();
    let gram = DMatrix::from_fn(k, k, |i, j| inner(&vectors[i], &vectors[j]));
    let det = gram.determinant();
    if det <= 1e-14 {
        return Err(Error::DegenerateInput(format!(
            "Gram determinant {det:e} <= 1e-14; vectors are (numerically) dependent"
        )));
    }
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(k);
    for v in vectors {
        let mut w = v.clone();
        // Two projection passes: the second sweep removes the roundoff the
        // first leaves behind on ill-conditioned inputs.
        for _ in 0..2 {
            for b in &out {
                let c = inner(&w, b);
                w.axpy(-c, b, 1.0);
            }
        }
        let norm = inner(&w, &w).sqrt();
        if !norm.is_finite() || norm < 1e-14 {
            return Err(Error::DegenerateInput(
                "vector collapsed during orthonormalization".into(),
            ));
        }
        out.push(w / norm);
    }
    // The orthonormality flag is judged in the same inner product.
    let mut worst: f64 = 0.0;
    for (i, u) in out.iter().enumerate() {
        for (j, v) in out.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(u, v) - target).abs());
        }
    }
    Ok(Frame {
        vectors: out,
        split: FrameSplit::Flat,
        orthonormal: worst < TOL_FRAME,
    })
}

/// Euclidean dot product, the default inner form.
pub fn euclidean(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    u.dot(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vecs(data: &[&[f64]]) -> Vec<DVector<f64>> {
        data.iter().map(|r| DVector::from_row_slice(r)).collect()
    }

    #[test]
    fn identity_basis_is_fixed() {
        let input = vecs(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let frame = gram_schmidt(&input, euclidean).unwrap();
        for (a, b) in frame.vectors().iter().zip(&input) {
            assert_eq!(a, b);
        }
        assert!(frame.is_orthonormal());
    }

    #[test]
    fn textbook_two_vectors() {
        let input = vecs(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let frame = gram_schmidt(&input, euclidean).unwrap();
        assert_abs_diff_eq!(frame.vectors()[0][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(frame.vectors()[0][1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(frame.vectors()[1][0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(frame.vectors()[1][1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn random_vectors_orthonormalize_and_preserve_span() {
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let input: Vec<DVector<f64>> = (0..5)
            .map(|_| DVector::from_fn(8, |_, _| next()))
            .collect();
        let frame = gram_schmidt(&input, euclidean).unwrap();
        // Gram matrix is the identity at 1e-12.
        for (i, u) in frame.vectors().iter().enumerate() {
            for (j, v) in frame.vectors().iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(u.dot(v), target, epsilon = 1e-12);
            }
        }
        // Span preserved: projecting each input back onto the output span
        // leaves a residual below 1e-10.
        for v in &input {
            let mut resid = v.clone();
            for b in frame.vectors() {
                let c = resid.dot(b);
                resid.axpy(-c, b, 1.0);
            }
            assert!(resid.norm() < 1e-10, "projection residual {}", resid.norm());
        }
    }

    #[test]
    fn dependent_input_is_rejected() {
        let input = vecs(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            gram_schmidt(&input, euclidean),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn weighted_inner_product() {
        let w = |u: &DVector<f64>, v: &DVector<f64>| 2.0 * u[0] * v[0] + 0.5 * u[1] * v[1];
        let input = vecs(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let frame = gram_schmidt(&input, w).unwrap();
        assert_abs_diff_eq!(w(&frame.vectors()[0], &frame.vectors()[0]), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w(&frame.vectors()[0], &frame.vectors()[1]), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w(&frame.vectors()[1], &frame.vectors()[1]), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn plane_spec_validation() {
        let u = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let v = DVector::from_row_slice(&[0.0, 1.0, 0.0]);
        assert!(PlaneSpec::new(u.clone(), v.clone(), None).is_ok());
        let bad = DVector::from_row_slice(&[0.7, 0.7, 0.0]);
        assert!(PlaneSpec::new(u.clone(), bad, None).is_err());
        let parent = Frame::new(
            vec![u.clone(), DVector::from_row_slice(&[0.0, 0.0, 1.0])],
            FrameSplit::Flat,
        )
        .unwrap();
        assert!(PlaneSpec::new(u, v, Some(&parent)).is_err());
    }
}
