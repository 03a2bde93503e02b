//! Warped-product metric data: gradient and Laplacian of the warping
//! function under the geometer's sign convention (Δ = −div grad), the fiber
//! curvature formula, the mixed-curvature identity Σ K(e_a ∧ e_A) = n₂Δf/f,
//! and the transfer between leaf-wise and intrinsic first Chen invariants of
//! the fiber.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dsl::{self, ExprAst};
use crate::error::{Error, Result};
use crate::tol::TOL_EXACT;

/// Pointwise warping data. `laplacian_f` always carries the geometer's sign,
/// so for f = |z| on a flat base it is −1/|z|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpData {
    pub f: f64,
    /// Components of ∇f in an orthonormal base frame, when available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_f: Option<Vec<f64>>,
    pub grad_norm_sq: f64,
    pub laplacian_f: f64,
}

impl WarpData {
    pub fn new(f: f64, grad_f: Option<Vec<f64>>, grad_norm_sq: f64, laplacian_f: f64) -> Result<Self> {
        if f <= 0.0 {
            return Err(Error::NonPositiveWarp { f });
        }
        if let Some(g) = &grad_f {
            let n2: f64 = g.iter().map(|x| x * x).sum();
            if (n2 - grad_norm_sq).abs() > TOL_EXACT * (1.0 + grad_norm_sq.abs()) {
                return Err(Error::DegenerateInput(format!(
                    "grad_norm_sq {} inconsistent with supplied gradient ({} from components)",
                    grad_norm_sq, n2
                )));
            }
        }
        Ok(WarpData {
            f,
            grad_f,
            grad_norm_sq,
            laplacian_f,
        })
    }

    /// A constant warp: f ≡ value, no gradient, no Laplacian.
    pub fn constant(value: f64) -> Result<Self> {
        WarpData::new(value, Some(vec![]), 0.0, 0.0)
    }

    /// The warp term n₂Δf/f the inequalities subtract.
    pub fn warp_term(&self, n2: usize) -> f64 {
        n2 as f64 * self.laplacian_f / self.f
    }
}

/// Declaration of a warped product N₁ ×_f N₂ with a DSL warping function in
/// the base coordinates.
#[derive(Debug, Clone)]
pub struct WarpedSpec {
    pub n1: usize,
    pub n2: usize,
    pub f_expr: ExprAst,
}

impl WarpedSpec {
    pub fn new(n1: usize, n2: usize, f_expr: ExprAst) -> Result<Self> {
        if n1 % 2 != 0 {
            return Err(Error::ParityError { n1 });
        }
        if n2 == 0 {
            return Err(Error::DegenerateInput("fiber dimension n2 must be >= 1".into()));
        }
        Ok(WarpedSpec { n1, n2, f_expr })
    }
}

/// Evaluates f, ∇f and Δf at a base point. The base chart is assumed
/// metrically flat at the point: `base_metric` is the (constant) Gram matrix
/// of the coordinate directions, so Δf = −tr(G⁻¹ Hess f) and
/// ‖∇f‖² = ∇fᵀ G⁻¹ ∇f in coordinates.
pub fn grad_laplacian(
    f_expr: &ExprAst,
    point: &[f64],
    base_metric: &DMatrix<f64>,
) -> Result<WarpData> {
    let d = point.len();
    if base_metric.nrows() != d || base_metric.ncols() != d {
        return Err(Error::dim(d, base_metric.nrows(), "base metric"));
    }
    let jet = dsl::eval_jet(f_expr, point)?;
    let f = jet.value();
    if f <= 0.0 {
        return Err(Error::NonPositiveWarp { f });
    }
    let ginv = base_metric
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateInput("base metric is singular".into()))?;
    let grad_coord = DVector::from_row_slice(jet.grad());
    let grad_up = &ginv * &grad_coord;
    let grad_norm_sq = grad_coord.dot(&grad_up);
    let mut div_grad = 0.0;
    for i in 0..d {
        for j in 0..d {
            div_grad += ginv[(i, j)] * jet.hess().get(i, j);
        }
    }
    // Orthonormalize the coordinate frame (Cholesky of G) to express ∇f in
    // an orthonormal base frame; for an identity metric this is a copy.
    let chol = base_metric
        .clone()
        .cholesky()
        .ok_or_else(|| Error::DegenerateInput("base metric is not positive definite".into()))?;
    // e_a = sum_k (L^{-T})_{ka} ∂_k gives an orthonormal frame; the component
    // of ∇f along e_a is e_a(f) = (L^{-1} grad_coord)_a.
    let l = chol.l();
    let grad_frame = l
        .clone()
        .try_inverse()
        .map(|linv| linv * &grad_coord)
        .ok_or_else(|| Error::DegenerateInput("base metric Cholesky factor is singular".into()))?;
    WarpData::new(
        f,
        Some(grad_frame.iter().copied().collect()),
        grad_norm_sq,
        -div_grad,
    )
}

/// Fiber-plane sectional curvature of the warped metric:
/// K^M(V ∧ W) = (K^{N₂}(Ṽ ∧ W̃) − ‖∇f‖²) / f².
pub fn bo_fiber_sectional(warp: &WarpData, k_fiber: f64) -> f64 {
    (k_fiber - warp.grad_norm_sq) / (warp.f * warp.f)
}

/// Mixed-plane sectional curvature for a unit base direction with Hessian
/// value `hess_ff = Hess f(X, X)` (analyst's sign): K^M(X ∧ V) = −Hess f(X,X)/f.
pub fn bo_mixed_sectional(warp: &WarpData, hess_ff: f64) -> f64 {
    -hess_ff / warp.f
}

/// Residual of the fundamental warped-product identity
/// |Σ_a Σ_A K^M(e_a ∧ e_A) − n₂Δf/f|.
pub fn warp_identity_residual(mixed_k: &DMatrix<f64>, warp: &WarpData, n2: usize) -> f64 {
    let sum: f64 = mixed_k.iter().sum();
    (sum - warp.warp_term(n2)).abs()
}

/// Leaf-wise first Chen invariant of the fiber from the intrinsic one:
/// δ̂(T_xN_⊥) = δ_{N_⊥}/f² − [C(n₂,2) − 1]·‖∇f‖²/f².
pub fn bo_delta_transfer(delta_fiber_intrinsic: f64, warp: &WarpData, n2: usize) -> Result<f64> {
    let coeff = transfer_coeff(n2)?;
    let f2 = warp.f * warp.f;
    Ok(delta_fiber_intrinsic / f2 - coeff * warp.grad_norm_sq / f2)
}

/// Inverse transfer: δ_{N_⊥} = f²·δ̂ + [C(n₂,2) − 1]·‖∇f‖².
pub fn bo_delta_transfer_inverse(delta_hat: f64, warp: &WarpData, n2: usize) -> Result<f64> {
    let coeff = transfer_coeff(n2)?;
    Ok(warp.f * warp.f * delta_hat + coeff * warp.grad_norm_sq)
}

fn transfer_coeff(n2: usize) -> Result<f64> {
    if n2 < 2 {
        return Err(Error::DegenerateInput(format!(
            "delta transfer needs a fiber of dimension >= 2, got {n2}"
        )));
    }
    Ok((n2 * (n2 - 1) / 2) as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use approx::assert_abs_diff_eq;

    fn eye(d: usize) -> DMatrix<f64> {
        DMatrix::identity(d, d)
    }

    #[test]
    fn constant_warp_has_no_gradient() {
        let f = parse("5", &["x", "y"]).unwrap();
        let w = grad_laplacian(&f, &[0.3, -1.2], &eye(2)).unwrap();
        assert_eq!(w.f, 5.0);
        assert_eq!(w.grad_norm_sq, 0.0);
        assert_eq!(w.laplacian_f, 0.0);
    }

    #[test]
    fn radius_on_flat_plane() {
        // f = √(x² + y²) at r = 2: geometer's Δf = −1/2. Oracle: central
        // finite differences of −(f_xx + f_yy).
        let f = parse("sqrt(x^2 + y^2)", &["x", "y"]).unwrap();
        let p = [1.2, 1.6];
        let w = grad_laplacian(&f, &p, &eye(2)).unwrap();
        assert_abs_diff_eq!(w.f, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.laplacian_f, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(w.grad_norm_sq, 1.0, epsilon = 1e-12);

        let h = 1e-4;
        let ev = |x: f64, y: f64| (x * x + y * y).sqrt();
        let fxx = (ev(p[0] + h, p[1]) - 2.0 * ev(p[0], p[1]) + ev(p[0] - h, p[1])) / (h * h);
        let fyy = (ev(p[0], p[1] + h) - 2.0 * ev(p[0], p[1]) + ev(p[0], p[1] - h)) / (h * h);
        assert_abs_diff_eq!(w.laplacian_f, -(fxx + fyy), epsilon = 1e-5);
    }

    #[test]
    fn cosh_on_line() {
        let f = parse("cosh(t)", &["t"]).unwrap();
        let w = grad_laplacian(&f, &[1.0], &eye(1)).unwrap();
        assert_abs_diff_eq!(w.laplacian_f, -1.0f64.cosh(), epsilon = 1e-13);
        assert_abs_diff_eq!(w.grad_norm_sq, 1.0f64.sinh().powi(2), epsilon = 1e-13);
    }

    #[test]
    fn gradient_satisfies_directional_derivative() {
        // g(∇f, X) = X(f) checked against directional jets for a non-radial f.
        let f = parse("exp(x/2) * (y + 2) + x*y^2", &["x", "y"]).unwrap();
        let p = [0.4, 0.9];
        let w = grad_laplacian(&f, &p, &eye(2)).unwrap();
        let jet = crate::dsl::eval_jet(&f, &p).unwrap();
        let g = w.grad_f.unwrap();
        for (i, gi) in g.iter().enumerate() {
            assert_abs_diff_eq!(*gi, jet.grad()[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn nonpositive_warp_is_rejected() {
        let f = parse("x - 2", &["x"]).unwrap();
        assert!(matches!(
            grad_laplacian(&f, &[1.0], &eye(1)),
            Err(Error::NonPositiveWarp { .. })
        ));
    }

    #[test]
    fn fiber_sectional_cases() {
        // Trivial warp: identity in k_fiber.
        let w = WarpData::constant(1.0).unwrap();
        for k in [-2.0, 0.0, 1.0, 3.5] {
            assert_eq!(bo_fiber_sectional(&w, k), k);
        }
        // Flat cone R⁺ ×_r S²: (1 − 1)/r² = 0.
        let w = WarpData::new(2.0, None, 1.0, 0.0).unwrap();
        assert_eq!(bo_fiber_sectional(&w, 1.0), 0.0);
        // Hyperbolic factor dt² + e^{2t} dx²: f = e^t, ‖∇f‖² = e^{2t}, flat fiber.
        let t: f64 = 0.7;
        let w = WarpData::new(t.exp(), None, (2.0 * t).exp(), -t.exp()).unwrap();
        assert_abs_diff_eq!(bo_fiber_sectional(&w, 0.0), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn warp_identity_fixtures() {
        // Constant warp, flat mixed curvatures.
        let w = WarpData::constant(3.0).unwrap();
        let mixed = DMatrix::zeros(2, 1);
        assert_eq!(warp_identity_residual(&mixed, &w, 1), 0.0);

        // Hyperbolic plane dt² + cosh²t dx²: K = −f''/f = −1, n₂Δf/f = −1.
        let f = parse("cosh(t)", &["t"]).unwrap();
        let t = 0.8;
        let w = grad_laplacian(&f, &[t], &eye(1)).unwrap();
        let jet = crate::dsl::eval_jet(&f, &[t]).unwrap();
        let k = bo_mixed_sectional(&w, jet.hess().get(0, 0));
        assert_abs_diff_eq!(k, -1.0, epsilon = 1e-13);
        let mixed = DMatrix::from_element(1, 1, k);
        assert!(warp_identity_residual(&mixed, &w, 1) < 1e-10);
    }

    #[test]
    fn delta_transfer_cases() {
        // f ≡ 1: leaf-wise equals intrinsic.
        let w = WarpData::constant(1.0).unwrap();
        assert_eq!(bo_delta_transfer(0.7, &w, 3).unwrap(), 0.7);
        // n2 = 2: binomial coefficient collapses, δ̂ = δ/f² regardless of ∇f.
        let w = WarpData::new(2.0, None, 5.0, 0.0).unwrap();
        assert_eq!(bo_delta_transfer(1.2, &w, 2).unwrap(), 0.3);
        // Unit 3-sphere fiber (δ = 2), f = 2, ‖∇f‖² = 1 → δ̂ = 0.
        let w = WarpData::new(2.0, None, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(bo_delta_transfer(2.0, &w, 3).unwrap(), 0.0, epsilon = 1e-15);
        // Degenerate fiber dimension.
        assert!(bo_delta_transfer(0.0, &w, 1).is_err());
    }

    #[test]
    fn delta_transfer_round_trip() {
        let mut state = 5u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..100 {
            let f = 0.5 + (next() + 1.0) * 2.0;
            let w = WarpData::new(f, None, (next() + 1.2).abs(), next()).unwrap();
            for n2 in 2..=5 {
                let delta = next() * 3.0;
                let hat = bo_delta_transfer(delta, &w, n2).unwrap();
                let back = bo_delta_transfer_inverse(hat, &w, n2).unwrap();
                assert_abs_diff_eq!(back, delta, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn constant_metric_laplacian_respects_the_metric() {
        // Base metric diag(4, 1): Δf = −(f_xx/4 + f_yy) for f = x² + y².
        let f = parse("x^2 + y^2", &["x", "y"]).unwrap();
        let g = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        let w = grad_laplacian(&f, &[0.5, 0.5], &g).unwrap();
        assert_abs_diff_eq!(w.laplacian_f, -(2.0 / 4.0 + 2.0), epsilon = 1e-13);
        // ‖∇f‖² = (2x)²/4 + (2y)².
        assert_abs_diff_eq!(w.grad_norm_sq, 0.25 + 1.0, epsilon = 1e-13);
    }
}
