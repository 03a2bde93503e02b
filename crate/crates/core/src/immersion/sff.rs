//! Second fundamental form in an adapted frame, shape operators, mean
//! curvature, and the Gauss equation for 2-plane sectional curvature.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::immersion::AdaptedFrameReport;
use crate::numeric::frame::PlaneSpec;
use crate::numeric::symmat::SymMat;

/// Coefficients h^r_{ij} of the second fundamental form: one symmetric
/// n × n slice per normal direction, tangent indices split as n1 | n2.
/// Symmetry in (i, j) is structural (packed storage).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForm {
    pub n1: usize,
    pub n2: usize,
    slices: Vec<SymMat>,
}

impl SecondFundamentalForm {
    pub fn new(n1: usize, n2: usize, slices: Vec<SymMat>) -> Result<Self> {
        let n = n1 + n2;
        for s in &slices {
            if s.dim() != n {
                return Err(Error::dim(n, s.dim(), "second fundamental form slice"));
            }
        }
        Ok(SecondFundamentalForm { n1, n2, slices })
    }

    pub fn zero(n1: usize, n2: usize, normal_dim: usize) -> Self {
        SecondFundamentalForm {
            n1,
            n2,
            slices: vec![SymMat::zeros(n1 + n2); normal_dim],
        }
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn normal_dim(&self) -> usize {
        self.slices.len()
    }

    #[inline]
    pub fn get(&self, r: usize, i: usize, j: usize) -> f64 {
        self.slices[r].get(i, j)
    }

    pub fn slice(&self, r: usize) -> &SymMat {
        &self.slices[r]
    }

    pub fn slices(&self) -> &[SymMat] {
        &self.slices
    }

    /// ‖h‖² over all ordered tangent pairs and all normal directions.
    pub fn norm_sq(&self) -> f64 {
        self.slices.iter().map(|s| s.frob_sq()).sum()
    }

    /// h(x, y) expressed in the normal frame, for tangent-frame coefficient
    /// vectors x, y.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.slices.len(), |r, _| {
            self.slices[r].quad(x.as_slice(), y.as_slice())
        })
    }

    /// Rotates the tangent frame: slice ↦ Rᵀ (slice) R.
    pub fn rotate_tangent(&self, r: &DMatrix<f64>) -> SecondFundamentalForm {
        SecondFundamentalForm {
            n1: self.n1,
            n2: self.n2,
            slices: self.slices.iter().map(|s| s.conjugate(r)).collect(),
        }
    }

    /// Rotates the normal frame: new slice s = Σ_r O_{rs} (old slice r),
    /// where column s of `o` holds the coefficients of the new s-th normal
    /// over the old normal frame.
    pub fn rotate_normal(&self, o: &DMatrix<f64>) -> SecondFundamentalForm {
        let nd = self.slices.len();
        debug_assert_eq!(o.nrows(), nd);
        let n = self.n();
        let slices = (0..o.ncols())
            .map(|s| {
                SymMat::from_fn(n, |i, j| {
                    (0..nd).map(|r| o[(r, s)] * self.slices[r].get(i, j)).sum()
                })
            })
            .collect();
        SecondFundamentalForm {
            n1: self.n1,
            n2: self.n2,
            slices,
        }
    }
}

/// Extracts h from the jet: h^r_{ij} = ⟨D²φ(e_i, e_j), ẽ_r⟩. The tangential
/// part of the ambient second derivative carries the Christoffel symbols and
/// dies against the normal frame, so no connection terms are needed.
pub fn second_fundamental_form(report: &AdaptedFrameReport) -> Result<SecondFundamentalForm> {
    let normals: Vec<DVector<f64>> = (0..report.normal_dim())
        .map(|r| report.normal(r).clone())
        .collect();
    second_fundamental_form_parts(
        &report.jet,
        &report.tangent_coeffs,
        &normals,
        report.n1,
        report.n2,
    )
}

/// Frame-agnostic extraction from the raw parts: tangent-frame coefficients
/// over the coordinate basis (column i = e_i) and the ambient normal frame.
pub(crate) fn second_fundamental_form_parts(
    jet: &crate::immersion::Jet,
    tangent_coeffs: &DMatrix<f64>,
    normals: &[DVector<f64>],
    n1: usize,
    n2: usize,
) -> Result<SecondFundamentalForm> {
    let n = n1 + n2;
    let cols: Vec<DVector<f64>> = (0..n).map(|i| tangent_coeffs.column(i).into_owned()).collect();
    // One ambient second-derivative vector per unordered tangent pair.
    let mut slices = vec![SymMat::zeros(n); normals.len()];
    for i in 0..n {
        for j in 0..=i {
            let d2 = jet.second_derivative(&cols[i], &cols[j]);
            for (r, slice) in slices.iter_mut().enumerate() {
                slice.set(i, j, d2.dot(&normals[r]));
            }
        }
    }
    SecondFundamentalForm::new(n1, n2, slices)
}

/// Mean curvature vector in the normal frame and its squared norm:
/// H^r = (1/n) Σ_i h^r_{ii}.
pub fn mean_curvature(h: &SecondFundamentalForm) -> (DVector<f64>, f64) {
    let n = h.n() as f64;
    let vec = DVector::from_fn(h.normal_dim(), |r, _| h.slice(r).trace() / n);
    let norm_sq = vec.norm_squared();
    (vec, norm_sq)
}

/// Shape operator A_ξ for the ξ-th normal direction (matrix of the slice).
pub fn shape_operator(h: &SecondFundamentalForm, xi_index: usize) -> Result<DMatrix<f64>> {
    if xi_index >= h.normal_dim() {
        return Err(Error::IndexError(format!(
            "normal index {xi_index} out of range (normal dim {})",
            h.normal_dim()
        )));
    }
    Ok(h.slice(xi_index).to_dmatrix())
}

/// Sectional curvature of M along a plane expressed in the adapted tangent
/// frame, via the Gauss equation:
/// K^M(π) = K̃(π) + Σ_r [h^r(u,u) h^r(v,v) − h^r(u,v)²].
pub fn gauss_sectional(h: &SecondFundamentalForm, pi: &PlaneSpec, ambient_k: f64) -> f64 {
    let mut acc = ambient_k;
    for r in 0..h.normal_dim() {
        let s = h.slice(r);
        let huu = s.quad(pi.u.as_slice(), pi.u.as_slice());
        let hvv = s.quad(pi.v.as_slice(), pi.v.as_slice());
        let huv = s.quad(pi.u.as_slice(), pi.v.as_slice());
        acc += huu * hvv - huv * huv;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientModel;
    use crate::dsl::parse;
    use crate::gallery::{gallery_chart, GalleryKey};
    use crate::immersion::{adapt_frame, ImmersionChart};
    use approx::assert_abs_diff_eq;

    #[test]
    fn totally_geodesic_product_has_zero_h() {
        let chart = gallery_chart(GalleryKey::Product).unwrap();
        let report = adapt_frame(&chart, &[0.3, -0.7, 1.1, 0.4]).unwrap();
        let h = second_fundamental_form(&report).unwrap();
        assert_eq!(h.norm_sq(), 0.0);
        let (hvec, hnsq) = mean_curvature(&h);
        assert_eq!(hvec.norm(), 0.0);
        assert_eq!(hnsq, 0.0);
    }

    #[test]
    fn chen_c2_h_structure_at_z_eq_i() {
        // At z = i, t = 0: ‖h(e_x, e_t)‖ = 1, h(e_t, e_t) = 0, h(D_T, D_T) = 0.
        let chart = gallery_chart(GalleryKey::ChenC2).unwrap();
        let report = adapt_frame(&chart, &[0.0, 1.0, 0.0]).unwrap();
        let h = second_fundamental_form(&report).unwrap();
        assert_eq!(h.normal_dim(), 1);
        // D_T block vanishes.
        for a in 0..2 {
            for b in 0..2 {
                assert_abs_diff_eq!(h.get(0, a, b), 0.0, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(h.get(0, 2, 2), 0.0, epsilon = 1e-12);
        // The mixed pair (e_x, e_t) carries norm 1. The adapted frame J-pairs
        // (e_1, e_2) = (v, Jv), so |h(e_1,e_3)|² + |h(e_2,e_3)|² = 1.
        let m2 = h.get(0, 0, 2).powi(2) + h.get(0, 1, 2).powi(2);
        assert_abs_diff_eq!(m2, 1.0, epsilon = 1e-12);
        let (_, hnsq) = mean_curvature(&h);
        assert_abs_diff_eq!(hnsq, 0.0, epsilon = 1e-24);
    }

    fn sphere_chart(rho: f64) -> ImmersionChart {
        // S²(ρ) ⊂ R³ ⊂ C², chart (θ, φ); not CR-warped, exercised through
        // the low-level frame machinery in tests only.
        let vars = ["th", "ph"];
        let comps = [
            format!("{rho}*sin(th)*cos(ph)"),
            format!("{rho}*sin(th)*sin(ph)"),
            format!("{rho}*cos(th)"),
            "0".to_string(),
        ];
        ImmersionChart::new(
            2,
            0,
            vars.iter().map(|s| s.to_string()).collect(),
            comps.iter().map(|s| parse(s, &vars).unwrap()).collect(),
            None,
            vec![(0.2, 2.9), (-7.0, 7.0)],
            AmbientModel::flat(2),
        )
        .unwrap()
    }

    #[test]
    fn sphere_oracle() {
        // ‖h(e_i, e_i)‖ = 1/ρ for tangent e_i, ‖H‖ = 1/ρ, K = 1/ρ².
        use crate::immersion::jet_evaluate;
        use crate::numeric::{euclidean, gram_schmidt};
        use nalgebra::DVector;

        let rho = 2.5;
        let chart = sphere_chart(rho);
        let point = [1.1, 0.7];
        let jet = jet_evaluate(&chart, &point).unwrap();
        let tangents: Vec<DVector<f64>> =
            (0..2).map(|i| jet.jacobian.column(i).into_owned()).collect();
        let tframe = gram_schmidt(&tangents, euclidean).unwrap();

        // Hand-build the frame data the extractor needs: normals complete
        // the tangent frame.
        let mut proj = nalgebra::DMatrix::identity(4, 4);
        for v in tframe.vectors() {
            proj -= v * v.transpose();
        }
        let eig = nalgebra::SymmetricEigen::new(proj);
        let mut normals = Vec::new();
        for (i, l) in eig.eigenvalues.iter().enumerate() {
            if *l > 0.5 {
                normals.push(eig.eigenvectors.column(i).into_owned());
            }
        }
        assert_eq!(normals.len(), 2);

        // h^r_{ij} via the raw formula.
        let jtj = jet.jacobian.transpose() * &jet.jacobian;
        let mut tmat = nalgebra::DMatrix::zeros(4, 2);
        for (i, v) in tframe.vectors().iter().enumerate() {
            for k in 0..4 {
                tmat[(k, i)] = v[k];
            }
        }
        let coeffs = jtj.lu().solve(&(jet.jacobian.transpose() * &tmat)).unwrap();
        let cols: Vec<DVector<f64>> = (0..2).map(|i| coeffs.column(i).into_owned()).collect();
        let mut slices = vec![crate::numeric::SymMat::zeros(2); 2];
        for i in 0..2 {
            for j in 0..=i {
                let d2 = jet.second_derivative(&cols[i], &cols[j]);
                for (r, slice) in slices.iter_mut().enumerate() {
                    slice.set(i, j, d2.dot(&normals[r]));
                }
            }
        }
        let h = SecondFundamentalForm::new(2, 0, slices).unwrap();

        for i in 0..2 {
            let hii = h.apply(
                &DVector::from_fn(2, |r, _| if r == i { 1.0 } else { 0.0 }),
                &DVector::from_fn(2, |r, _| if r == i { 1.0 } else { 0.0 }),
            );
            assert_abs_diff_eq!(hii.norm(), 1.0 / rho, epsilon = 1e-10);
        }
        let (hvec, hnsq) = mean_curvature(&h);
        assert_abs_diff_eq!(hvec.norm(), 1.0 / rho, epsilon = 1e-10);
        assert_abs_diff_eq!(hnsq, 1.0 / (rho * rho), epsilon = 1e-10);

        let pi = PlaneSpec::new_unchecked(
            DVector::from_row_slice(&[1.0, 0.0]),
            DVector::from_row_slice(&[0.0, 1.0]),
        );
        assert_abs_diff_eq!(gauss_sectional(&h, &pi, 0.0), 1.0 / (rho * rho), epsilon = 1e-10);
    }

    #[test]
    fn shape_operator_trace_identity() {
        // tr A_r = n H^r on gallery data.
        let chart = gallery_chart(GalleryKey::ChenC3).unwrap();
        let report = adapt_frame(&chart, &[1.2, 0.5, 1.1, 0.7]).unwrap();
        let h = second_fundamental_form(&report).unwrap();
        let (hvec, _) = mean_curvature(&h);
        for r in 0..h.normal_dim() {
            let a = shape_operator(&h, r).unwrap();
            assert_abs_diff_eq!(a.trace(), h.n() as f64 * hvec[r], epsilon = 1e-12);
            assert_eq!(a, a.transpose());
        }
        assert!(shape_operator(&h, 99).is_err());
    }

    #[test]
    fn gauss_sectional_zero_h_returns_ambient() {
        let h = SecondFundamentalForm::zero(2, 1, 2);
        let pi = PlaneSpec::new_unchecked(
            DVector::from_row_slice(&[1.0, 0.0, 0.0]),
            DVector::from_row_slice(&[0.0, 1.0, 0.0]),
        );
        assert_eq!(gauss_sectional(&h, &pi, 0.75), 0.75);
    }
}
