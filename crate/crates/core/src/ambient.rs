//! The complex space form M̃^{2m}(c): standard complex structure J, the
//! five-term curvature tensor, sectional curvature, and the closed-form
//! minimum of sectional curvature over 2-planes of a tagged subspace.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::frame::{Frame, PlaneSpec};
use crate::tol::TOL_FRAME;

/// A complex space form of constant holomorphic sectional curvature `c` and
/// complex dimension `m` (real dimension 2m). J is the standard interleaved
/// action (x₁, y₁, …, x_m, y_m) ↦ (−y₁, x₁, …, −y_m, x_m), which is exact in
/// floating point and satisfies J² = −I and ⟨JX, JY⟩ = ⟨X, Y⟩ identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientModel {
    pub c: f64,
    pub m: usize,
}

impl AmbientModel {
    pub fn new(c: f64, m: usize) -> Self {
        AmbientModel { c, m }
    }

    pub fn flat(m: usize) -> Self {
        AmbientModel { c: 0.0, m }
    }

    /// Real dimension 2m.
    pub fn real_dim(&self) -> usize {
        2 * self.m
    }

    fn check_dim(&self, v: &DVector<f64>, context: &str) -> Result<()> {
        if v.len() != self.real_dim() {
            return Err(Error::dim(self.real_dim(), v.len(), context));
        }
        Ok(())
    }

    /// Applies the standard complex structure.
    pub fn j(&self, v: &DVector<f64>) -> DVector<f64> {
        apply_j(v)
    }
}

/// J on R^{2k}: (x₁, y₁, …) ↦ (−y₁, x₁, …). Pure sign-flip permutation.
pub fn apply_j(v: &DVector<f64>) -> DVector<f64> {
    debug_assert!(v.len() % 2 == 0, "J needs an even-dimensional carrier");
    DVector::from_fn(v.len(), |i, _| {
        if i % 2 == 0 {
            -v[i + 1]
        } else {
            v[i - 1]
        }
    })
}

/// The curvature tensor R̃(X, Y, Z, W) of the complex space form:
///
/// ```text
/// (c/4) [ g(X,W) g(Y,Z) − g(X,Z) g(Y,W)
///       + g(JX,W) g(JY,Z) − g(JX,Z) g(JY,W) + 2 g(X,JY) g(JZ,W) ]
/// ```
pub fn csf_curvature(
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    w: &DVector<f64>,
    model: &AmbientModel,
) -> Result<f64> {
    for (v, n) in [(x, "X"), (y, "Y"), (z, "Z"), (w, "W")] {
        model.check_dim(v, n)?;
    }
    let jx = apply_j(x);
    let jy = apply_j(y);
    let jz = apply_j(z);
    Ok(model.c / 4.0
        * (x.dot(w) * y.dot(z) - x.dot(z) * y.dot(w)
            + jx.dot(w) * jy.dot(z)
            - jx.dot(z) * jy.dot(w)
            + 2.0 * x.dot(&jy) * jz.dot(w)))
}

/// Sectional curvature of an orthonormal 2-plane:
/// K̃(π) = (c/4)(1 + 3 g(Ju, v)²), equal to R̃(u, v, v, u).
pub fn csf_sectional(pi: &PlaneSpec, model: &AmbientModel) -> Result<f64> {
    model.check_dim(&pi.u, "plane u")?;
    model.check_dim(&pi.v, "plane v")?;
    let ju_v = apply_j(&pi.u).dot(&pi.v);
    Ok(model.c / 4.0 * (1.0 + 3.0 * ju_v * ju_v))
}

/// Classification of a subspace against the complex structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceTag {
    JInvariant,
    TotallyReal,
    Generic,
}

/// Tag plus the residual norms backing it: `j_closure` is the largest
/// distance of J(basis vector) from the subspace, `j_orthogonality` the
/// largest in-subspace component of J(basis vector).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceClass {
    pub tag: SubspaceTag,
    pub j_closure: f64,
    pub j_orthogonality: f64,
}

/// Tests J-closure and J-orthogonality of the span of `v`.
pub fn classify_subspace(v: &Frame, model: &AmbientModel) -> Result<SubspaceClass> {
    let mut j_closure: f64 = 0.0;
    let mut j_orthogonality: f64 = 0.0;
    for b in v.vectors() {
        model.check_dim(b, "subspace basis vector")?;
        let jb = apply_j(b);
        let mut inside = DVector::zeros(jb.len());
        for e in v.vectors() {
            inside.axpy(jb.dot(e), e, 1.0);
        }
        j_orthogonality = j_orthogonality.max(inside.norm());
        j_closure = j_closure.max((&jb - &inside).norm());
    }
    let tag = if j_closure < TOL_FRAME {
        SubspaceTag::JInvariant
    } else if j_orthogonality < TOL_FRAME {
        SubspaceTag::TotallyReal
    } else {
        SubspaceTag::Generic
    };
    Ok(SubspaceClass {
        tag,
        j_closure,
        j_orthogonality,
    })
}

/// Closed-form inf of K̃ over 2-planes of `v`, when the classification
/// admits one:
///
/// * J-invariant, dim ≥ 4: min(c/4, c) — a non-holomorphic plane always
///   exists and the bound is attained;
/// * J-invariant, dim 2: the only plane is the (holomorphic) subspace
///   itself, so the value is c;
/// * totally real: every plane has K̃ = c/4;
/// * generic: `None`, callers fall back to the sampled search.
pub fn kmin_closed_form(v: &Frame, model: &AmbientModel) -> Result<Option<f64>> {
    if v.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "kmin needs dim >= 2, got {}",
            v.len()
        )));
    }
    let class = classify_subspace(v, model)?;
    Ok(match class.tag {
        SubspaceTag::JInvariant => {
            if v.len() == 2 {
                Some(model.c)
            } else {
                Some((model.c / 4.0).min(model.c))
            }
        }
        SubspaceTag::TotallyReal => Some(model.c / 4.0),
        SubspaceTag::Generic => None,
    })
}

/// The coefficient the main inequalities carry for the holomorphic factor:
/// min(c/4, c), uniform in the sign of c. (For a 2-dimensional holomorphic
/// factor the true infimum over its single plane is c; the bound uses the
/// ambient-wide minimum and stays valid, just not sharp there.)
pub fn kmin_holomorphic_bound(c: f64) -> f64 {
    (c / 4.0).min(c)
}

/// The coefficient for the totally real factor: every plane in it has
/// K̃ = c/4.
pub fn kmin_totally_real(c: f64) -> f64 {
    c / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::frame::FrameSplit;
    use crate::numeric::{gram_schmidt, euclidean, min_over_planes, SearchBudget};
    use approx::assert_abs_diff_eq;

    fn e(i: usize, dim: usize) -> DVector<f64> {
        DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    fn pseudo(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn rand_vec(dim: usize, state: &mut u64) -> DVector<f64> {
        DVector::from_fn(dim, |_, _| pseudo(state))
    }

    #[test]
    fn j_squares_to_minus_identity_and_is_isometric() {
        let model = AmbientModel::new(4.0, 3);
        let mut s = 1u64;
        for _ in 0..10 {
            let v = rand_vec(6, &mut s);
            let jjv = apply_j(&apply_j(&v));
            assert_eq!(jjv, -v.clone());
            let w = rand_vec(6, &mut s);
            assert_eq!(apply_j(&v).dot(&apply_j(&w)), model.j(&v).dot(&model.j(&w)));
            assert_abs_diff_eq!(apply_j(&v).dot(&apply_j(&w)), v.dot(&w), epsilon = 1e-15);
        }
    }

    #[test]
    fn repeated_slots_vanish() {
        let model = AmbientModel::new(4.0, 2);
        let mut s = 7u64;
        let x = rand_vec(4, &mut s);
        let y = rand_vec(4, &mut s);
        let z = rand_vec(4, &mut s);
        assert_abs_diff_eq!(csf_curvature(&x, &x, &y, &z, &model).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(csf_curvature(&x, &y, &z, &z, &model).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn orthonormal_pair_with_jx_perp_y_has_curvature_c_over_4() {
        // c = 4, JX ⊥ Y: R̃(X,Y,Y,X) = 1.
        let model = AmbientModel::new(4.0, 2);
        let x = e(0, 4);
        let y = e(2, 4);
        assert_abs_diff_eq!(
            csf_curvature(&x, &y, &y, &x, &model).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn first_bianchi_identity() {
        let model = AmbientModel::new(-2.7, 3);
        let mut s = 99u64;
        for _ in 0..20 {
            let x = rand_vec(6, &mut s);
            let y = rand_vec(6, &mut s);
            let z = rand_vec(6, &mut s);
            let w = rand_vec(6, &mut s);
            let cyc = csf_curvature(&x, &y, &z, &w, &model).unwrap()
                + csf_curvature(&y, &z, &x, &w, &model).unwrap()
                + csf_curvature(&z, &x, &y, &w, &model).unwrap();
            assert_abs_diff_eq!(cyc, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn curvature_symmetries() {
        let model = AmbientModel::new(1.3, 3);
        let mut s = 3u64;
        for _ in 0..20 {
            let x = rand_vec(6, &mut s);
            let y = rand_vec(6, &mut s);
            let z = rand_vec(6, &mut s);
            let w = rand_vec(6, &mut s);
            let r = csf_curvature(&x, &y, &z, &w, &model).unwrap();
            assert_abs_diff_eq!(
                r,
                -csf_curvature(&y, &x, &z, &w, &model).unwrap(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                r,
                csf_curvature(&z, &w, &x, &y, &model).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn sectional_examples() {
        // Holomorphic plane: K̃ = c.
        let model = AmbientModel::new(4.0, 2);
        let u = e(0, 4);
        let pi = PlaneSpec::new(u.clone(), apply_j(&u), None).unwrap();
        assert_abs_diff_eq!(csf_sectional(&pi, &model).unwrap(), 4.0, epsilon = 1e-15);
        // Ju ⊥ v, c = −8: K̃ = −2.
        let model = AmbientModel::new(-8.0, 2);
        let pi = PlaneSpec::new(e(0, 4), e(2, 4), None).unwrap();
        assert_abs_diff_eq!(csf_sectional(&pi, &model).unwrap(), -2.0, epsilon = 1e-15);
        // Flat ambient.
        let model = AmbientModel::flat(2);
        let mut s = 11u64;
        let f = gram_schmidt(&[rand_vec(4, &mut s), rand_vec(4, &mut s)], euclidean).unwrap();
        let pi = PlaneSpec::new(f.vectors()[0].clone(), f.vectors()[1].clone(), None).unwrap();
        assert_eq!(csf_sectional(&pi, &model).unwrap(), 0.0);
    }

    #[test]
    fn sectional_stays_between_bounds() {
        for c in [4.0, -8.0, 0.5] {
            let model = AmbientModel::new(c, 3);
            let (lo, hi) = ((c / 4.0_f64).min(c), (c / 4.0_f64).max(c));
            let mut s = 17u64;
            for _ in 0..50 {
                let f = gram_schmidt(&[rand_vec(6, &mut s), rand_vec(6, &mut s)], euclidean).unwrap();
                let pi =
                    PlaneSpec::new(f.vectors()[0].clone(), f.vectors()[1].clone(), None).unwrap();
                let k = csf_sectional(&pi, &model).unwrap();
                assert!(k >= lo - 1e-12 && k <= hi + 1e-12, "K = {k} outside [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let model = AmbientModel::new(4.0, 2);
        let u = e(0, 4);
        let holo = Frame::new(vec![u.clone(), apply_j(&u)], FrameSplit::Flat).unwrap();
        assert_eq!(classify_subspace(&holo, &model).unwrap().tag, SubspaceTag::JInvariant);

        // span{e1, e3} in C² (Je1 = e2): totally real.
        let tr = Frame::new(vec![e(0, 4), e(2, 4)], FrameSplit::Flat).unwrap();
        assert_eq!(classify_subspace(&tr, &model).unwrap().tag, SubspaceTag::TotallyReal);

        // span{e1, (e2 + e3)/√2}: generic; both residuals exceed the frame tol.
        let mixed = (e(1, 4) + e(2, 4)) / 2.0_f64.sqrt();
        let gen = Frame::new(vec![e(0, 4), mixed], FrameSplit::Flat).unwrap();
        let class = classify_subspace(&gen, &model).unwrap();
        assert_eq!(class.tag, SubspaceTag::Generic);
        assert!(class.j_closure > TOL_FRAME && class.j_orthogonality > TOL_FRAME);
    }

    #[test]
    fn kmin_closed_form_cases() {
        // J-invariant 4-dim, c = 4 → 1.
        let model = AmbientModel::new(4.0, 3);
        let v = Frame::new(vec![e(0, 6), e(1, 6), e(2, 6), e(3, 6)], FrameSplit::Flat).unwrap();
        assert_eq!(kmin_closed_form(&v, &model).unwrap(), Some(1.0));
        // Totally real, c = −8 → −2.
        let model = AmbientModel::new(-8.0, 3);
        let v = Frame::new(vec![e(0, 6), e(2, 6), e(4, 6)], FrameSplit::Flat).unwrap();
        assert_eq!(kmin_closed_form(&v, &model).unwrap(), Some(-2.0));
        // J-invariant, c = −4 → −4.
        let model = AmbientModel::new(-4.0, 3);
        let v = Frame::new(vec![e(0, 6), e(1, 6), e(2, 6), e(3, 6)], FrameSplit::Flat).unwrap();
        assert_eq!(kmin_closed_form(&v, &model).unwrap(), Some(-4.0));
        // Holomorphic 2-plane: the only plane is itself, value c.
        let model = AmbientModel::new(4.0, 3);
        let v = Frame::new(vec![e(0, 6), e(1, 6)], FrameSplit::Flat).unwrap();
        assert_eq!(kmin_closed_form(&v, &model).unwrap(), Some(4.0));
        // Generic subspace: not applicable.
        let mixed = (e(1, 6) + e(2, 6)) / 2.0_f64.sqrt();
        let v = Frame::new(vec![e(0, 6), mixed], FrameSplit::Flat).unwrap();
        assert_eq!(kmin_closed_form(&v, &model).unwrap(), None);
    }

    #[test]
    fn closed_form_agrees_with_sampled_minimum() {
        for (c, dims) in [(4.0, 4), (-8.0, 4), (2.0, 2)] {
            let model = AmbientModel::new(c, 3);
            let v = Frame::new((0..dims).map(|i| e(i, 6)).collect(), FrameSplit::Flat).unwrap();
            let closed = kmin_closed_form(&v, &model).unwrap().unwrap();
            let sampled = min_over_planes(
                |pi| csf_sectional(pi, &model).unwrap(),
                &v,
                &SearchBudget::default(),
                42,
            )
            .unwrap();
            assert_abs_diff_eq!(sampled.value, closed, epsilon = 1e-6);
        }
        // Totally real subspace of dimension 3.
        let model = AmbientModel::new(-8.0, 3);
        let v = Frame::new(vec![e(0, 6), e(2, 6), e(4, 6)], FrameSplit::Flat).unwrap();
        let sampled = min_over_planes(
            |pi| csf_sectional(pi, &model).unwrap(),
            &v,
            &SearchBudget::default(),
            42,
        )
        .unwrap();
        assert_abs_diff_eq!(sampled.value, -2.0, epsilon = 1e-6);
    }
}
