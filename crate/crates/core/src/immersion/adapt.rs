//! CR frame adaptation at a chart point: orthonormal tangent frame split
//! into the holomorphic block (J-paired as Je_{2a−1} = e_{2a}) and the
//! totally real block, plus the normal decomposition T^⊥M = J D_⊥ ⊕ ν.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::ambient::apply_j;
use crate::error::{Error, Result};
use crate::immersion::{jet_evaluate, ImmersionChart, Jet};
use crate::numeric::frame::{euclidean, gram_schmidt, Frame, FrameSplit};
use crate::tol::{TOL_FRAME, TOL_IDENTITY};

/// Residual norms of the structure tests backing the adapted frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrResiduals {
    /// max over D_T basis vectors of ‖Jv − proj_{D_T}(Jv)‖.
    pub j_invariance: f64,
    /// max over D_⊥ basis vectors of ‖proj_{TM}(Jv)‖.
    pub totally_real: f64,
    /// Worst Gram deviation of the full frame (tangent and normal together).
    pub frame_gram: f64,
    /// Largest cross term between base and fiber blocks of the induced
    /// metric (warped-product structure check).
    pub warped_block: f64,
}

/// The adapted frame at a point, with everything downstream consumers need:
/// tangent vectors in ambient coordinates, their coordinate-space
/// coefficients, the normal frame split into J D_⊥ and ν, and the jet.
#[derive(Debug, Clone)]
pub struct AdaptedFrameReport {
    pub point: Vec<f64>,
    pub jet: Jet,
    /// Full frame: n tangent vectors (D_T block then D_⊥ block) followed by
    /// the normal block (J D_⊥ first, then ν).
    pub frame: Frame,
    pub n1: usize,
    pub n2: usize,
    /// Coefficients of the tangent frame vectors over the coordinate basis:
    /// column i holds e_i = Σ_k coeffs[(k, i)] ∂_k.
    pub tangent_coeffs: DMatrix<f64>,
    /// Number of ν directions (normals beyond J D_⊥).
    pub nu_dim: usize,
    pub residuals: CrResiduals,
}

impl AdaptedFrameReport {
    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn normal_dim(&self) -> usize {
        self.frame.len() - self.n()
    }

    pub fn tangent(&self, i: usize) -> &DVector<f64> {
        &self.frame.vectors()[i]
    }

    pub fn normal(&self, r: usize) -> &DVector<f64> {
        &self.frame.vectors()[self.n() + r]
    }

    pub fn jdperp_basis(&self) -> &[DVector<f64>] {
        &self.frame.vectors()[self.n()..self.n() + self.n2]
    }

    pub fn nu_basis(&self) -> &[DVector<f64>] {
        &self.frame.vectors()[self.n() + self.n2..]
    }

    /// Expands a tangent-frame coefficient vector into ambient coordinates.
    pub fn expand_tangent(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.frame.vectors()[0].len());
        for i in 0..self.n() {
            out.axpy(coeffs[i], self.tangent(i), 1.0);
        }
        out
    }
}

fn project_onto(v: &DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for b in basis {
        out.axpy(v.dot(b), b, 1.0);
    }
    out
}

/// Builds the adapted frame at `point`, or reports why the submanifold is
/// not a CR-warped product there.
pub fn adapt_frame(chart: &ImmersionChart, point: &[f64]) -> Result<AdaptedFrameReport> {
    let jet = jet_evaluate(chart, point)?;
    adapt_frame_from_jet(chart, point, jet)
}

/// Orthonormal base | fiber tangent frame plus a completed normal frame,
/// without any CR structure tests or J-pairing. This is the path for
/// warped-metric control charts that are not CR submanifolds.
#[derive(Debug, Clone)]
pub struct WarpedFrame {
    pub jet: Jet,
    pub tangents: Vec<DVector<f64>>,
    pub normals: Vec<DVector<f64>>,
    pub tangent_coeffs: DMatrix<f64>,
    pub warped_block: f64,
}

pub fn warped_frame(chart: &ImmersionChart, point: &[f64]) -> Result<WarpedFrame> {
    let jet = jet_evaluate(chart, point)?;
    let n1 = chart.n1;
    let n = chart.dim();
    let two_m = chart.ambient.real_dim();
    let g = jet.induced_metric();
    let mut warped_block: f64 = 0.0;
    for a in 0..n1 {
        for b in n1..n {
            warped_block = warped_block.max(g[(a, b)].abs());
        }
    }
    let coord_tangents: Vec<DVector<f64>> =
        (0..n).map(|i| jet.jacobian.column(i).into_owned()).collect();
    let base = gram_schmidt(&coord_tangents[..n1], euclidean)?;
    let mut tangents = base.vectors().to_vec();
    for v in &coord_tangents[n1..] {
        let mut w = v.clone();
        for _ in 0..2 {
            let proj = project_onto(&w, &tangents);
            w -= proj;
        }
        let norm = w.norm();
        if norm < 1e-10 {
            return Err(Error::DegenerateInput(
                "fiber tangent collapsed during orthonormalization".into(),
            ));
        }
        tangents.push(w / norm);
    }
    let mut proj = DMatrix::identity(two_m, two_m);
    for v in &tangents {
        proj -= v * v.transpose();
    }
    let eig = nalgebra::SymmetricEigen::new(proj);
    let mut ranked: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, l)| (*l, i))
        .collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut normals = Vec::with_capacity(two_m - n);
    for (lambda, idx) in ranked.into_iter().take(two_m - n) {
        if lambda < 0.5 {
            return Err(Error::DegenerateInput(
                "normal completion failed: complement dimension deficit".into(),
            ));
        }
        normals.push(eig.eigenvectors.column(idx).into_owned());
    }
    let mut tangent_mat = DMatrix::zeros(two_m, n);
    for (i, v) in tangents.iter().enumerate() {
        for k in 0..two_m {
            tangent_mat[(k, i)] = v[k];
        }
    }
    let jtj = jet.jacobian.transpose() * &jet.jacobian;
    let jt_f = jet.jacobian.transpose() * &tangent_mat;
    let tangent_coeffs = jtj
        .lu()
        .solve(&jt_f)
        .ok_or_else(|| Error::DegenerateInput("induced metric is singular".into()))?;
    Ok(WarpedFrame {
        jet,
        tangents,
        normals,
        tangent_coeffs,
        warped_block,
    })
}

pub(crate) fn adapt_frame_from_jet(
    chart: &ImmersionChart,
    point: &[f64],
    jet: Jet,
) -> Result<AdaptedFrameReport> {
    let n1 = chart.n1;
    let n2 = chart.n2;
    let n = n1 + n2;
    let two_m = chart.ambient.real_dim();

    // Warped-product structure: the induced metric must block-diagonalize.
    let g = jet.induced_metric();
    let mut warped_block: f64 = 0.0;
    for a in 0..n1 {
        for b in n1..n {
            warped_block = warped_block.max(g[(a, b)].abs());
        }
    }
    if warped_block > TOL_IDENTITY {
        return Err(Error::CRViolation(format!(
            "induced metric does not split base ⊕ fiber (cross term {warped_block:.3e})"
        )));
    }

    let coord_tangents: Vec<DVector<f64>> =
        (0..n).map(|i| jet.jacobian.column(i).into_owned()).collect();

    // Orthonormalize the base block, then the fiber block against everything.
    let base = gram_schmidt(&coord_tangents[..n1], euclidean)?;
    let mut all = base.vectors().to_vec();
    for v in &coord_tangents[n1..] {
        let mut w = v.clone();
        for _ in 0..2 {
            let proj = project_onto(&w, &all);
            w -= proj;
        }
        let norm = w.norm();
        if norm < 1e-10 {
            return Err(Error::DegenerateInput(
                "fiber tangent collapsed during orthonormalization".into(),
            ));
        }
        all.push(w / norm);
    }

    // CR residuals on the declared split.
    let (dt_raw, dperp) = all.split_at(n1);
    let mut j_invariance: f64 = 0.0;
    for v in dt_raw {
        let jv = apply_j(v);
        j_invariance = j_invariance.max((&jv - project_onto(&jv, dt_raw)).norm());
    }
    let mut totally_real: f64 = 0.0;
    for v in dperp {
        let jv = apply_j(v);
        totally_real = totally_real.max(project_onto(&jv, &all).norm());
    }
    if n1 > 0 && j_invariance > TOL_FRAME {
        return Err(Error::CRViolation(format!(
            "base block is not J-invariant (residual {j_invariance:.3e})"
        )));
    }
    if totally_real > TOL_FRAME {
        return Err(Error::CRViolation(format!(
            "fiber block is not totally real (residual {totally_real:.3e})"
        )));
    }

    // J-pair the holomorphic block: e_{2a−1} arbitrary in the remaining part,
    // e_{2a} = J e_{2a−1} (projected onto D_T to shed roundoff).
    let dt_raw = dt_raw.to_vec();
    let dperp = dperp.to_vec();
    let mut dt_paired: Vec<DVector<f64>> = Vec::with_capacity(n1);
    for seed in &dt_raw {
        if dt_paired.len() == n1 {
            break;
        }
        let mut w = seed.clone();
        let proj = project_onto(&w, &dt_paired);
        w -= proj;
        let norm = w.norm();
        if norm < 1e-6 {
            continue; // already spanned by chosen pairs
        }
        w /= norm;
        let jw = project_onto(&apply_j(&w), &dt_raw);
        let jn = jw.norm();
        if jn < 0.5 {
            return Err(Error::CRViolation(
                "holomorphic block lost J-closure during pairing".into(),
            ));
        }
        dt_paired.push(w);
        dt_paired.push(jw / jn);
    }
    if dt_paired.len() != n1 {
        return Err(Error::CRViolation(format!(
            "could not J-pair the holomorphic block ({} of {} vectors)",
            dt_paired.len(),
            n1
        )));
    }

    // Normal block: J D_⊥ comes first (exactly orthonormal since J is an
    // isometry), then ν as the orthogonal complement via the SVD null space.
    let mut frame_vecs = dt_paired;
    frame_vecs.extend(dperp.iter().cloned());
    let mut normals: Vec<DVector<f64>> = dperp.iter().map(apply_j).collect();
    let nu_dim = two_m - n - n2;
    if nu_dim > 0 {
        // ν spans the top eigenspace of the projector onto the complement of
        // everything known so far.
        let mut proj = DMatrix::identity(two_m, two_m);
        for v in frame_vecs.iter().chain(&normals) {
            proj -= v * v.transpose();
        }
        let eig = nalgebra::SymmetricEigen::new(proj);
        let mut ranked: Vec<(f64, usize)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, i))
            .collect();
        ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for (lambda, idx) in ranked.into_iter().take(nu_dim) {
            if lambda < 0.5 {
                return Err(Error::DegenerateInput(
                    "normal completion failed: complement dimension deficit".into(),
                ));
            }
            normals.push(eig.eigenvectors.column(idx).into_owned());
        }
    }
    frame_vecs.extend(normals);

    let frame = Frame::new(
        frame_vecs,
        FrameSplit::Adapted {
            dt: n1,
            dperp: n2,
            normal: two_m - n,
        },
    )?;
    let mut frame_gram: f64 = 0.0;
    for (i, u) in frame.vectors().iter().enumerate() {
        for (j, v) in frame.vectors().iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            frame_gram = frame_gram.max((u.dot(v) - target).abs());
        }
    }
    if frame_gram > TOL_FRAME {
        return Err(Error::CRViolation(format!(
            "adapted frame failed orthonormality ({frame_gram:.3e})"
        )));
    }

    // Coefficients of the tangent frame over the coordinate basis: solve
    // J_coord · E = frame tangents in the least-squares sense (exact here
    // since the tangent frame spans the same space).
    let mut tangent_mat = DMatrix::zeros(two_m, n);
    for (i, v) in frame.vectors()[..n].iter().enumerate() {
        for k in 0..two_m {
            tangent_mat[(k, i)] = v[k];
        }
    }
    let jtj = jet.jacobian.transpose() * &jet.jacobian;
    let jt_f = jet.jacobian.transpose() * &tangent_mat;
    let tangent_coeffs = jtj
        .lu()
        .solve(&jt_f)
        .ok_or_else(|| Error::DegenerateInput("induced metric is singular".into()))?;

    Ok(AdaptedFrameReport {
        point: point.to_vec(),
        jet,
        frame,
        n1,
        n2,
        tangent_coeffs,
        nu_dim,
        residuals: CrResiduals {
            j_invariance,
            totally_real,
            frame_gram,
            warped_block,
        },
    })
}
