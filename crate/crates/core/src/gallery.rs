//! Built-in immersion gallery. Each entry ships its chart and the closed-form
//! invariants it is expected to produce, frozen as functions of the point.

use serde::{Deserialize, Serialize};

use crate::ambient::AmbientModel;
use crate::dsl::parse;
use crate::error::{Error, Result};
use crate::immersion::ImmersionChart;

/// Stable gallery keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryKey {
    /// F(z, t) = (z cos t, z sin t) into C²; |dz|² + |z|² dt², f = |z|.
    ChenC2,
    /// F(z, u) = z·u for u ∈ S² ⊂ R³, into C³; f = |z|.
    ChenC3,
    /// Totally geodesic C × R² ⊂ C³, f ≡ 1.
    Product,
    /// Flat cone R⁺ ×_r S² ⊂ R³ ⊂ C²; not CR-warped (control case for the
    /// metric-level identities only).
    Cone,
}

impl GalleryKey {
    pub fn parse_key(s: &str) -> Result<GalleryKey> {
        Ok(match s {
            "chen_c2" => GalleryKey::ChenC2,
            "chen_c3" => GalleryKey::ChenC3,
            "product" => GalleryKey::Product,
            "cone" => GalleryKey::Cone,
            other => {
                return Err(Error::config(
                    "gallery",
                    format!("unknown gallery key `{other}` (chen_c2, chen_c3, product, cone)"),
                ))
            }
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            GalleryKey::ChenC2 => "chen_c2",
            GalleryKey::ChenC3 => "chen_c3",
            GalleryKey::Product => "product",
            GalleryKey::Cone => "cone",
        }
    }

    /// Whether the entry is a CR-warped product (the cone is a metric-level
    /// control case).
    pub fn is_cr(&self) -> bool {
        !matches!(self, GalleryKey::Cone)
    }
}

/// Closed-form expected invariants at a point, used as test fixtures and
/// surfaced in reports for provenance. `None` means "no closed form stored".
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ExpectedInvariants {
    pub h_norm_sq: Option<f64>,
    pub mean_curv_norm_sq: Option<f64>,
    pub tau_m: Option<f64>,
    /// n₂ Δf / f with the geometer's sign.
    pub warp_term: Option<f64>,
    pub slack_i: Option<f64>,
    pub slack_ii: Option<f64>,
    pub minimal: bool,
    pub equality_case: bool,
}

pub fn gallery_chart(key: GalleryKey) -> Result<ImmersionChart> {
    match key {
        GalleryKey::ChenC2 => {
            let vars = ["x", "y", "t"];
            ImmersionChart::new(
                2,
                1,
                vars.iter().map(|s| s.to_string()).collect(),
                ["x*cos(t)", "y*cos(t)", "x*sin(t)", "y*sin(t)"]
                    .iter()
                    .map(|s| parse(s, &vars))
                    .collect::<Result<_>>()?,
                Some(parse("sqrt(x^2 + y^2)", &vars[..2])?),
                vec![(-4.0, 4.0), (-4.0, 4.0), (-7.0, 7.0)],
                AmbientModel::flat(2),
            )
        }
        GalleryKey::ChenC3 => {
            let vars = ["x", "y", "th", "ph"];
            ImmersionChart::new(
                2,
                2,
                vars.iter().map(|s| s.to_string()).collect(),
                [
                    "x*sin(th)*cos(ph)",
                    "y*sin(th)*cos(ph)",
                    "x*sin(th)*sin(ph)",
                    "y*sin(th)*sin(ph)",
                    "x*cos(th)",
                    "y*cos(th)",
                ]
                .iter()
                .map(|s| parse(s, &vars))
                .collect::<Result<_>>()?,
                Some(parse("sqrt(x^2 + y^2)", &vars[..2])?),
                vec![(-4.0, 4.0), (-4.0, 4.0), (0.2, 2.9), (-7.0, 7.0)],
                AmbientModel::flat(3),
            )
            .map(|c| c.with_fiber_curvature(1.0))
        }
        GalleryKey::Product => {
            let vars = ["x", "y", "s", "u"];
            ImmersionChart::new(
                2,
                2,
                vars.iter().map(|s| s.to_string()).collect(),
                ["x", "y", "s", "0", "u", "0"]
                    .iter()
                    .map(|s| parse(s, &vars))
                    .collect::<Result<_>>()?,
                Some(parse("1", &vars[..2])?),
                vec![(-4.0, 4.0); 4],
                AmbientModel::flat(3),
            )
            .map(|c| c.with_fiber_curvature(0.0))
        }
        GalleryKey::Cone => {
            let vars = ["r", "th", "ph"];
            ImmersionChart::new(
                1,
                2,
                vars.iter().map(|s| s.to_string()).collect(),
                [
                    "r*sin(th)*cos(ph)",
                    "r*sin(th)*sin(ph)",
                    "r*cos(th)",
                    "0",
                ]
                .iter()
                .map(|s| parse(s, &vars))
                .collect::<Result<_>>()?,
                Some(parse("r", &vars[..1])?),
                vec![(0.05, 6.0), (0.2, 2.9), (-7.0, 7.0)],
                AmbientModel::flat(2),
            )
            .map(|c| c.with_fiber_curvature(1.0))
        }
    }
}

/// Closed-form fixtures per entry. `point` is the full chart point.
pub fn expected_invariants(key: GalleryKey, point: &[f64]) -> ExpectedInvariants {
    match key {
        GalleryKey::ChenC2 => {
            let r2 = point[0] * point[0] + point[1] * point[1];
            ExpectedInvariants {
                h_norm_sq: Some(2.0 / r2),
                mean_curv_norm_sq: Some(0.0),
                tau_m: Some(-1.0 / r2),
                warp_term: Some(-1.0 / r2),
                slack_i: Some(1.0 / r2),
                slack_ii: None,
                minimal: true,
                equality_case: false,
            }
        }
        GalleryKey::ChenC3 => {
            let r2 = point[0] * point[0] + point[1] * point[1];
            ExpectedInvariants {
                h_norm_sq: Some(4.0 / r2),
                mean_curv_norm_sq: Some(0.0),
                tau_m: Some(-2.0 / r2),
                warp_term: Some(-2.0 / r2),
                slack_i: Some(2.0 / r2),
                slack_ii: Some(2.0 / r2),
                minimal: true,
                equality_case: false,
            }
        }
        GalleryKey::Product => ExpectedInvariants {
            h_norm_sq: Some(0.0),
            mean_curv_norm_sq: Some(0.0),
            tau_m: Some(0.0),
            warp_term: Some(0.0),
            slack_i: Some(0.0),
            slack_ii: Some(0.0),
            minimal: true,
            equality_case: true,
        },
        GalleryKey::Cone => ExpectedInvariants {
            h_norm_sq: Some(0.0),
            mean_curv_norm_sq: Some(0.0),
            tau_m: Some(0.0),
            warp_term: Some(0.0),
            slack_i: None,
            slack_ii: None,
            minimal: true,
            equality_case: false,
        },
    }
}

/// Default evaluation grids (3 radii × 4 angular stations for the Chen
/// entries; small sweeps for the controls).
pub fn default_grid(key: GalleryKey) -> Vec<Vec<f64>> {
    // Radius stations r ∈ {0.5, 1, 2} realized at generic (x, y) pairs.
    let xy = [(0.5, 0.0), (0.6, 0.8), (-1.2, 1.6)];
    match key {
        GalleryKey::ChenC2 => {
            let ts = [0.0, 0.5235987755982988, 0.7853981633974483, 1.0471975511965976];
            let mut out = Vec::new();
            for (x, y) in xy {
                for t in ts {
                    out.push(vec![x, y, t]);
                }
            }
            out
        }
        GalleryKey::ChenC3 => {
            let angles = [(0.7, 0.3), (1.1, 2.0), (1.9, 4.0), (2.4, 5.5)];
            let mut out = Vec::new();
            for (x, y) in xy {
                for (th, ph) in angles {
                    out.push(vec![x, y, th, ph]);
                }
            }
            out
        }
        GalleryKey::Product => vec![
            vec![0.3, -0.7, 1.1, 0.4],
            vec![1.5, 2.0, -0.2, 0.9],
            vec![-1.0, 0.1, 0.0, -2.3],
        ],
        GalleryKey::Cone => vec![
            vec![0.5, 0.8, 0.4],
            vec![1.0, 1.2, 2.2],
            vec![2.0, 2.0, 5.0],
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::jet_evaluate;

    #[test]
    fn keys_round_trip() {
        for key in [GalleryKey::ChenC2, GalleryKey::ChenC3, GalleryKey::Product, GalleryKey::Cone] {
            assert_eq!(GalleryKey::parse_key(key.as_str()).unwrap(), key);
        }
        assert!(GalleryKey::parse_key("nope").is_err());
    }

    #[test]
    fn charts_evaluate_on_their_default_grids() {
        for key in [GalleryKey::ChenC2, GalleryKey::ChenC3, GalleryKey::Product, GalleryKey::Cone] {
            let chart = gallery_chart(key).unwrap();
            for p in default_grid(key) {
                jet_evaluate(&chart, &p).unwrap();
            }
        }
    }

    #[test]
    fn chen_c3_metric_is_warped() {
        // Induced metric must be dx² + dy² + r²(dθ² + sin²θ dφ²).
        let chart = gallery_chart(GalleryKey::ChenC3).unwrap();
        let p = [0.6, 0.8, 1.1, 2.0];
        let g = jet_evaluate(&chart, &p).unwrap().induced_metric();
        let r2 = p[0] * p[0] + p[1] * p[1];
        approx::assert_abs_diff_eq!(g[(0, 0)], 1.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(g[(1, 1)], 1.0, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(g[(2, 2)], r2, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(g[(3, 3)], r2 * p[2].sin().powi(2), epsilon = 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    approx::assert_abs_diff_eq!(g[(i, j)], 0.0, epsilon = 1e-12);
                }
            }
        }
    }
}
