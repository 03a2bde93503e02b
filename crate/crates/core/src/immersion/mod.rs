//! Immersion charts into flat C^m: jet evaluation, induced metric, adapted
//! CR frames, second fundamental form, shape operators, mean curvature, and
//! the Gauss equation for sectional curvature.

mod adapt;
mod sff;

pub use adapt::{adapt_frame, warped_frame, AdaptedFrameReport, CrResiduals, WarpedFrame};
pub use sff::{
    gauss_sectional, mean_curvature, second_fundamental_form, shape_operator,
    SecondFundamentalForm,
};
pub(crate) use sff::second_fundamental_form_parts;

use nalgebra::{DMatrix, DVector};

use crate::ambient::AmbientModel;
use crate::dsl::{self, ExprAst};
use crate::error::{Error, Result};
use crate::numeric::symmat::SymMat;

/// A coordinate parametrization of a warped product N_T ×_f N_⊥ into flat
/// C^m. The first `n1` coordinates parametrize the base, the remaining `n2`
/// the fiber; `components` holds the 2m real component expressions under the
/// convention that coordinates (2k−1, 2k) of the target form the k-th
/// complex slot.
#[derive(Debug, Clone)]
pub struct ImmersionChart {
    pub n1: usize,
    pub n2: usize,
    pub variables: Vec<String>,
    pub components: Vec<ExprAst>,
    /// Warping function over the base coordinates (constant for a trivial
    /// product). `None` for charts that are not warped products (control
    /// cases evaluate only metric-level identities).
    pub f_expr: Option<ExprAst>,
    /// Per-coordinate closed domain box.
    pub domain: Vec<(f64, f64)>,
    pub ambient: AmbientModel,
    /// Constant intrinsic sectional curvature of the fiber metric g_{N2},
    /// when known (gallery entries); enables the independent fiber-curvature
    /// cross-checks.
    pub fiber_k: Option<f64>,
}

impl ImmersionChart {
    pub fn new(
        n1: usize,
        n2: usize,
        variables: Vec<String>,
        components: Vec<ExprAst>,
        f_expr: Option<ExprAst>,
        domain: Vec<(f64, f64)>,
        ambient: AmbientModel,
    ) -> Result<Self> {
        let n = n1 + n2;
        if variables.len() != n {
            return Err(Error::dim(n, variables.len(), "chart variables"));
        }
        if components.len() != ambient.real_dim() {
            return Err(Error::dim(
                ambient.real_dim(),
                components.len(),
                "chart components",
            ));
        }
        if domain.len() != n {
            return Err(Error::dim(n, domain.len(), "chart domain"));
        }
        if ambient.c != 0.0 {
            return Err(Error::config(
                "ambient.c",
                "numerical immersions are supported only into flat C^m (c = 0); \
                 use synthetic mode for c != 0",
            ));
        }
        Ok(ImmersionChart {
            n1,
            n2,
            variables,
            components,
            f_expr,
            domain,
            ambient,
            fiber_k: None,
        })
    }

    pub fn with_fiber_curvature(mut self, k: f64) -> Self {
        self.fiber_k = Some(k);
        self
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::dim(self.dim(), point.len(), "chart point"));
        }
        for (i, (x, (lo, hi))) in point.iter().zip(&self.domain).enumerate() {
            if x < lo || x > hi {
                return Err(Error::DomainError(format!(
                    "coordinate {} = {} outside [{}, {}]",
                    self.variables[i], x, lo, hi
                )));
            }
        }
        Ok(())
    }
}

/// Position, Jacobian and per-component Hessians of a chart at a point,
/// exact to roundoff via second-order jets.
#[derive(Debug, Clone)]
pub struct Jet {
    pub position: DVector<f64>,
    /// 2m × n matrix; column i is the i-th coordinate tangent vector.
    pub jacobian: DMatrix<f64>,
    /// One n × n Hessian per ambient component.
    pub hessians: Vec<SymMat>,
    pub sigma_min: f64,
}

impl Jet {
    /// Induced metric g_ij = ⟨∂_i φ, ∂_j φ⟩.
    pub fn induced_metric(&self) -> DMatrix<f64> {
        let j = &self.jacobian;
        j.transpose() * j
    }

    /// The ambient second-derivative vector D²φ(x, y) for coordinate-space
    /// directions x, y.
    pub fn second_derivative(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.hessians.len(), |k, _| {
            self.hessians[k].quad(x.as_slice(), y.as_slice())
        })
    }
}

/// Rank threshold for the immersion condition.
const SIGMA_MIN_THRESHOLD: f64 = 1e-8;

/// Evaluates position, first and second derivatives of all components.
pub fn jet_evaluate(chart: &ImmersionChart, point: &[f64]) -> Result<Jet> {
    chart.check_point(point)?;
    let n = chart.dim();
    let two_m = chart.ambient.real_dim();
    let mut position = DVector::zeros(two_m);
    let mut jacobian = DMatrix::zeros(two_m, n);
    let mut hessians = Vec::with_capacity(two_m);
    for (k, comp) in chart.components.iter().enumerate() {
        let jet = dsl::eval_jet(comp, point)?;
        position[k] = jet.value();
        for i in 0..n {
            jacobian[(k, i)] = jet.grad()[i];
        }
        hessians.push(jet.hess().clone());
    }
    let svd = jacobian.clone().svd(false, false);
    let sigma_min = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !(sigma_min > SIGMA_MIN_THRESHOLD) {
        return Err(Error::NotImmersed {
            sigma_min,
            threshold: SIGMA_MIN_THRESHOLD,
        });
    }
    Ok(Jet {
        position,
        jacobian,
        hessians,
        sigma_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use approx::assert_abs_diff_eq;

    fn linear_chart() -> ImmersionChart {
        // F(u, v) = (u, v, 2u + v, 0) into C².
        let vars = ["u", "v"];
        ImmersionChart::new(
            2,
            0,
            vars.iter().map(|s| s.to_string()).collect(),
            ["u", "v", "2*u + v", "0"]
                .iter()
                .map(|s| parse(s, &vars).unwrap())
                .collect(),
            None,
            vec![(-5.0, 5.0); 2],
            AmbientModel::flat(2),
        )
        .unwrap()
    }

    #[test]
    fn linear_chart_jet() {
        let chart = linear_chart();
        let jet = jet_evaluate(&chart, &[0.5, -1.0]).unwrap();
        assert_eq!(jet.position.as_slice(), &[0.5, -1.0, 0.0, 0.0]);
        let expected = [[1.0, 0.0], [0.0, 1.0], [2.0, 1.0], [0.0, 0.0]];
        for (k, row) in expected.iter().enumerate() {
            for i in 0..2 {
                assert_eq!(jet.jacobian[(k, i)], row[i]);
            }
        }
        for h in &jet.hessians {
            assert_eq!(h.frob_sq(), 0.0);
        }
    }

    #[test]
    fn chen_c2_partial_derivatives() {
        let chart = crate::gallery::gallery_chart(crate::gallery::GalleryKey::ChenC2).unwrap();
        // At (x, y, t) = (1, 0, 0): ∂_t F = (0, 0, 1, 0) and ∂_{xt} F = (0, 0, 1, 0).
        let jet = jet_evaluate(&chart, &[1.0, 0.0, 0.0]).unwrap();
        let dt: Vec<f64> = (0..4).map(|k| jet.jacobian[(k, 2)]).collect();
        assert_eq!(dt, vec![0.0, 0.0, 1.0, 0.0]);
        let dxt: Vec<f64> = (0..4).map(|k| jet.hessians[k].get(0, 2)).collect();
        assert_eq!(dxt, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn hessians_match_finite_differences() {
        let chart = crate::gallery::gallery_chart(crate::gallery::GalleryKey::ChenC3).unwrap();
        let p = [1.1, -0.4, 0.9, 2.2];
        let jet = jet_evaluate(&chart, &p).unwrap();
        let h = 1e-4;
        for (k, comp) in chart.components.iter().enumerate() {
            for i in 0..4 {
                for j in 0..4 {
                    let mut pp = p;
                    let mut pm = p;
                    let mut mp = p;
                    let mut mm = p;
                    pp[i] += h;
                    pp[j] += h;
                    pm[i] += h;
                    pm[j] -= h;
                    mp[i] -= h;
                    mp[j] += h;
                    mm[i] -= h;
                    mm[j] -= h;
                    let fd = (comp.eval_f64(&pp).unwrap() - comp.eval_f64(&pm).unwrap()
                        - comp.eval_f64(&mp).unwrap()
                        + comp.eval_f64(&mm).unwrap())
                        / (4.0 * h * h);
                    assert_abs_diff_eq!(jet.hessians[k].get(i, j), fd, epsilon = 1e-4);
                }
            }
        }
    }

    #[test]
    fn rank_deficiency_is_caught() {
        let chart = crate::gallery::gallery_chart(crate::gallery::GalleryKey::ChenC2).unwrap();
        // At z = 0 the t-direction collapses.
        match jet_evaluate(&chart, &[0.0, 0.0, 0.3]) {
            Err(Error::NotImmersed { .. }) => {}
            other => panic!("expected NotImmersed, got {other:?}"),
        }
    }

    #[test]
    fn out_of_domain_point_is_rejected() {
        let chart = linear_chart();
        assert!(matches!(
            jet_evaluate(&chart, &[7.0, 0.0]),
            Err(Error::DomainError(_))
        ));
    }
}
