//! Per-point evaluation: turns a chart point or a synthetic payload into a
//! fully populated report record (invariants, identity residuals, slack
//! decompositions, equality analysis, minimality margins, checks).

use nalgebra::{DMatrix, DVector};

use crate::ambient::apply_j;
use crate::chen::{
    self, equality_classify, gauge_mean_curvature, gauss_oracle, ktilde_from_omega,
    lemma1_defect, mixed_curvature_matrix, theta, upsilon, CorollaryCheck, IneqVersion,
};
use crate::chen::synthetic::CompiledSynthetic;
use crate::error::{Error, Result};
use crate::immersion::{
    adapt_frame, second_fundamental_form, warped_frame, ImmersionChart, SecondFundamentalForm,
};
use crate::numeric::frame::{Frame, FrameSplit, PlaneSpec};
use crate::numeric::grassmann::{min_over_planes, PlaneMin, SearchBudget};
use crate::pipeline::report::{
    ChainReport, CheckLine, CorollaryReport, EqualityReport, InvariantReport, KminReport,
    PointRecord, ResidualReport,
};
use crate::tol::Tolerances;
use crate::warped::{bo_delta_transfer_inverse, bo_fiber_sectional, grad_laplacian, WarpData};

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub budget: SearchBudget,
    pub seed: u64,
    pub tol: Tolerances,
}

/// Block basis of the tangent coefficient space R^n.
fn block_frame(n: usize, offset: usize, len: usize) -> Frame {
    let vectors = (offset..offset + len)
        .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    Frame::new(vectors, FrameSplit::Flat).expect("standard block basis is orthonormal")
}

/// Orthogonal n×n rotation that carries the block basis at `offset` onto an
/// orthonormal completion of the argmin pair (placing the pair first) and
/// fixes everything outside the block.
fn block_rotation(n: usize, offset: usize, len: usize, min: &PlaneMin) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = vec![min.coeff_u.clone(), min.coeff_v.clone()];
    for i in 0..len {
        if cols.len() == len {
            break;
        }
        let mut w = DVector::from_fn(len, |r, _| if r == i { 1.0 } else { 0.0 });
        for _ in 0..2 {
            for b in &cols {
                let c = w.dot(b);
                w.axpy(-c, b, 1.0);
            }
        }
        if w.norm() > 1e-6 {
            let normed = w.clone() / w.norm();
            cols.push(normed);
        }
    }
    debug_assert_eq!(cols.len(), len, "block completion failed");
    let mut r = DMatrix::identity(n, n);
    for i in 0..len {
        for j in 0..len {
            r[(offset + i, offset + j)] = cols[j][i];
        }
    }
    r
}

struct AlgebraInput<'a> {
    h: &'a SecondFundamentalForm,
    omega: &'a DMatrix<f64>,
    c: f64,
    warp: Option<WarpData>,
    fiber_k: Option<f64>,
}

struct AlgebraOutput {
    invariants: InvariantReport,
    residuals: ResidualReport,
    chain_i: ChainReport,
    chain_ii: Option<ChainReport>,
    equality_i: EqualityReport,
    equality_ii: Option<EqualityReport>,
    corollaries: CorollaryReport,
    kmin: Vec<KminReport>,
    checks: Vec<CheckLine>,
}

/// Closed-form ambient plane minimum of a factor subspace read off the
/// pairing matrix, when the block is J-invariant or totally real there.
fn kmin_closed_from_omega(
    omega: &DMatrix<f64>,
    c: f64,
    offset: usize,
    len: usize,
    tol_frame: f64,
) -> Option<f64> {
    let n = omega.nrows();
    // J-closure of the block: rows of Ω outside the block must vanish, and
    // the in-block part must be orthogonal (J maps the block onto itself).
    let mut off_block: f64 = 0.0;
    for i in offset..offset + len {
        for j in 0..n {
            if !(offset..offset + len).contains(&j) {
                off_block = off_block.max(omega[(i, j)].abs());
            }
        }
    }
    let block = omega.view((offset, offset), (len, len)).into_owned();
    let btb = block.transpose() * &block;
    let mut j_dev: f64 = 0.0;
    let mut tr_dev: f64 = 0.0;
    for i in 0..len {
        for j in 0..len {
            let id = if i == j { 1.0 } else { 0.0 };
            j_dev = j_dev.max((btb[(i, j)] - id).abs());
            tr_dev = tr_dev.max(block[(i, j)].abs());
        }
    }
    if tr_dev < tol_frame && off_block < tol_frame {
        return Some(c / 4.0); // totally real block
    }
    if j_dev < tol_frame && off_block < tol_frame {
        return Some(if len == 2 { c } else { (c / 4.0).min(c) });
    }
    None
}

fn evaluate_algebra(input: &AlgebraInput<'_>, opts: &EvalOptions) -> Result<AlgebraOutput> {
    let (h, _) = gauge_mean_curvature(input.h, opts.tol.identity)?;
    let (n1, n2) = (h.n1, h.n2);
    let n = n1 + n2;
    let c = input.c;
    let omega = input.omega;
    let tol = &opts.tol;
    if n1 < 2 {
        return Err(Error::DegenerateInput(format!(
            "inequality evaluation needs n1 >= 2, got {n1}"
        )));
    }

    let oracle = gauss_oracle(&h, omega, c);
    let (_, h_mean_sq) = crate::immersion::mean_curvature(&h);
    let h_norm_sq = h.norm_sq();

    // Scalar curvature pieces via Gauss sums.
    let tau_m = chen::partial_scalar(&oracle, &Frame::standard(n))?;
    let nt_frame = block_frame(n, 0, n1);
    let tau_nt = chen::partial_scalar(&oracle, &nt_frame)?;
    let perp_frame = if n2 >= 2 {
        Some(block_frame(n, n1, n2))
    } else {
        None
    };
    let tau_nperp = match &perp_frame {
        Some(f) => chen::partial_scalar(&oracle, f)?,
        None => 0.0,
    };

    // Leaf-wise Chen invariants with their minimizing planes.
    let (delta_hat_nt, min_nt) = chen::delta_invariant(&oracle, &nt_frame, &opts.budget, opts.seed)?;
    let perp_min = match &perp_frame {
        Some(f) => Some(chen::delta_invariant(&oracle, f, &opts.budget, opts.seed)?),
        None => None,
    };
    let delta_hat_nperp = perp_min.as_ref().map(|(d, _)| *d);

    // Warp term: supplied warp data when present, otherwise derived from the
    // mixed sectional curvatures through the warped identity.
    let mixed = mixed_curvature_matrix(&oracle, n1, n2);
    let mixed_sum: f64 = mixed.iter().sum();
    let (warp_term, warp_identity_res, warp_data) = match &input.warp {
        Some(w) => {
            let term = w.warp_term(n2);
            (term, Some((mixed_sum - term).abs()), Some(w.clone()))
        }
        None => (mixed_sum, None, None),
    };

    // Fundamental identity.
    let fund = chen::fundamental_identity_residual(tau_m, h_mean_sq, h_norm_sq, n1, n2, c);

    // Upsilon closure.
    let upsilon1 = chen::upsilon1(&h, tau_m, c)?;
    let s_prim: f64 = (0..n1).map(|a| h.get(0, a, a)).sum();
    let upsilon_closure =
        (s_prim * s_prim - (n1 as f64 - 1.0) * (upsilon1 + h_norm_sq)).abs();

    // Inequality (i) and its chain.
    let ineq_i = chen::inequality_i(delta_hat_nt, n1, n2, c, h_mean_sq, warp_term)?;
    let bound_i = crate::ambient::kmin_holomorphic_bound(c);
    let ktilde_pi_i = ktilde_from_omega(omega, c, &min_nt.plane);
    let rot_i = block_rotation(n, 0, n1, &min_nt);
    let h_i = h.rotate_tangent(&rot_i);
    let theta_i = theta(&h_i, (0, 1), IneqVersion::I)?;
    let ups_i = upsilon(&h_i, tau_m, c, IneqVersion::I)?;
    let defect_i = lemma1_defect(&h_i, ups_i, (0, 1), IneqVersion::I)?;
    let chain_i = ChainReport {
        version: "i",
        slack: ineq_i.slack,
        theta: theta_i,
        lemma1_defect: defect_i,
        lemma1_slack: 2.0 * defect_i,
        ktilde_pi_star: ktilde_pi_i,
        ktilde_bound: bound_i,
        residual: (ineq_i.slack - (theta_i + defect_i + (ktilde_pi_i - bound_i))).abs(),
    };
    let class_i = equality_classify(&h_i, (0, 1), IneqVersion::I, tol.equality())?;
    let e1_i = (ktilde_pi_i - bound_i).abs() <= tol.opt;
    let equality_i = EqualityReport {
        version: "i",
        e1_attained: e1_i,
        equality: e1_i && class_i.is_equality,
        classification: class_i,
    };

    // Inequality (ii), when the fiber has dimension >= 2.
    let mut ineq_ii = None;
    let mut chain_ii = None;
    let mut equality_ii = None;
    let mut theta_ii = None;
    if let Some((delta_hat_perp, min_perp)) = &perp_min {
        let lw = {
            let nf = n as f64;
            let rhs = nf * nf / 2.0 * h_mean_sq - warp_term
                + (n2 * (n2 + 2 * n1 - 1)) as f64 / 2.0 * (c / 4.0)
                - c / 4.0;
            chen::Inequality {
                version: "ii",
                lhs: *delta_hat_perp,
                rhs,
                slack: rhs - delta_hat_perp,
            }
        };
        let bound_ii = c / 4.0;
        let ktilde_pi_ii = ktilde_from_omega(omega, c, &min_perp.plane);
        let rot_ii = block_rotation(n, n1, n2, min_perp);
        let h_ii = h.rotate_tangent(&rot_ii);
        let th = theta(&h_ii, (n1, n1 + 1), IneqVersion::II)?;
        theta_ii = Some(th);
        let ups_ii = upsilon(&h_ii, tau_m, c, IneqVersion::II)?;
        let defect_ii = lemma1_defect(&h_ii, ups_ii, (n1, n1 + 1), IneqVersion::II)?;
        chain_ii = Some(ChainReport {
            version: "ii",
            slack: lw.slack,
            theta: th,
            lemma1_defect: defect_ii,
            lemma1_slack: 2.0 * defect_ii,
            ktilde_pi_star: ktilde_pi_ii,
            ktilde_bound: bound_ii,
            residual: (lw.slack - (th + defect_ii + (ktilde_pi_ii - bound_ii))).abs(),
        });
        let class_ii = equality_classify(&h_ii, (n1, n1 + 1), IneqVersion::II, tol.equality())?;
        let e1_ii = (ktilde_pi_ii - bound_ii).abs() <= tol.opt;
        equality_ii = Some(EqualityReport {
            version: "ii",
            e1_attained: e1_ii,
            equality: e1_ii && class_ii.is_equality,
            classification: class_ii,
        });
        // Intrinsic form when warp data is available.
        let (intr_lhs, intr_rhs) = match &warp_data {
            Some(w) => {
                let f2 = w.f * w.f;
                let coeff = ((n2 * (n2 - 1) / 2) as f64 - 1.0) * w.grad_norm_sq;
                (
                    Some(f2 * delta_hat_perp + coeff),
                    Some(f2 * lw.rhs + coeff),
                )
            }
            None => (None, None),
        };
        ineq_ii = Some((lw, intr_lhs, intr_rhs));
    }

    // Intrinsic fiber invariant via the transfer, and its closed-form
    // cross-check for constant-curvature fibers.
    let delta_nperp_intrinsic = match (&warp_data, delta_hat_nperp) {
        (Some(w), Some(d)) => Some(bo_delta_transfer_inverse(d, w, n2)?),
        _ => None,
    };
    let delta_transfer_res = match (input.fiber_k, delta_nperp_intrinsic) {
        (Some(k), Some(d)) if n2 >= 2 => {
            let closed = k * ((n2 * (n2 - 1) / 2) as f64 - 1.0);
            Some((d - closed).abs())
        }
        _ => None,
    };

    // Bishop–O'Neill fiber consistency: Gauss-route fiber plane curvature
    // versus (k_fiber − ‖∇f‖²)/f².
    let bo_fiber_res = match (input.fiber_k, &warp_data) {
        (Some(k), Some(w)) if n2 >= 2 => {
            let bo = bo_fiber_sectional(w, k);
            let mut worst: f64 = 0.0;
            for a in n1..n {
                for b in (a + 1)..n {
                    let mut u = DVector::zeros(n);
                    let mut v = DVector::zeros(n);
                    u[a] = 1.0;
                    v[b] = 1.0;
                    let kg = oracle(&PlaneSpec::new_unchecked(u, v));
                    worst = worst.max((kg - bo).abs());
                }
            }
            Some(worst)
        }
        _ => None,
    };

    // Factor-subspace ambient minima: closed form against the sampled search.
    let mut kmin_reports = Vec::new();
    let mut kmin_vals = [0.0f64; 2];
    for (idx, (name, offset, len)) in [("nt", 0usize, n1), ("nperp", n1, n2)].iter().enumerate() {
        if *len < 2 {
            kmin_vals[idx] = c / 4.0;
            continue;
        }
        let frame = block_frame(n, *offset, *len);
        let sampled = min_over_planes(
            |pi| ktilde_from_omega(omega, c, pi),
            &frame,
            &opts.budget,
            opts.seed,
        )?;
        let closed = kmin_closed_from_omega(omega, c, *offset, *len, tol.frame);
        let mismatch = closed.map(|cf| (cf - sampled.value).abs() > tol.opt).unwrap_or(false);
        kmin_vals[idx] = closed.unwrap_or(sampled.value);
        kmin_reports.push(KminReport {
            subspace: if idx == 0 { "nt" } else { "nperp" },
            closed_form: closed,
            sampled: sampled.value,
            provenance: if closed.is_some() { "closed-form" } else { "sampled" },
            mismatch,
        });
        let _ = name;
    }

    // Minimality corollaries and the Ricci condition (flat ambient only).
    let corollary = match &warp_data {
        Some(w) => chen::corollary_minimal_check(
            delta_hat_nt,
            delta_hat_nperp,
            delta_nperp_intrinsic,
            n1,
            n2,
            c,
            w,
            h_mean_sq,
            tol.identity,
        ),
        None => CorollaryCheck {
            cond_i: f64::NAN,
            cond_ii: None,
            cond_ii_intrinsic: None,
            minimal: h_mean_sq < tol.identity,
        },
    };
    let ricci_max_eig = if c == 0.0 {
        Some(chen::ricci_form(&h).1)
    } else {
        None
    };

    let warp_report = warp_data.clone().unwrap_or(WarpData {
        f: 1.0,
        grad_f: None,
        grad_norm_sq: 0.0,
        laplacian_f: warp_term / n2.max(1) as f64,
    });

    let invariants = InvariantReport {
        n1,
        n2,
        n,
        c,
        tau_m,
        tau_nt,
        tau_nperp,
        delta_hat_nt,
        delta_hat_nperp,
        delta_nt_intrinsic: delta_hat_nt,
        delta_nperp_intrinsic,
        h_norm_sq,
        h_mean_norm_sq: h_mean_sq,
        warp_term,
        warp: warp_report,
        kmin_nt: kmin_vals[0],
        kmin_nperp: kmin_vals[1],
        kmin_nt_bound: bound_i,
        inequality_i: ineq_i,
        inequality_ii: ineq_ii.as_ref().map(|(lw, il, ir)| chen::InequalityTwo {
            leafwise: *lw,
            intrinsic_lhs: il.unwrap_or(f64::NAN),
            intrinsic_rhs: ir.unwrap_or(f64::NAN),
            intrinsic_slack: match (il, ir) {
                (Some(l), Some(r)) => r - l,
                _ => f64::NAN,
            },
        }),
        theta_i,
        theta_ii,
        theta_ii_mirrored: theta_ii.is_some(),
        upsilon1,
    };

    let residuals = ResidualReport {
        fundamental_identity: Some(fund),
        warp_identity: warp_identity_res,
        bo_fiber: bo_fiber_res,
        upsilon_closure: Some(upsilon_closure),
        delta_transfer: delta_transfer_res,
    };

    // Check lines (the exit-status policy lives here).
    let mut checks = vec![
        CheckLine::residual("fundamental-identity", fund, tol.identity),
        CheckLine::residual("upsilon-closure", upsilon_closure, tol.identity),
        CheckLine::slack("slack-i", invariants.inequality_i.slack, tol.identity),
        CheckLine::upper("theta-i-nonnegative", -theta_i, tol.exact),
        CheckLine::residual("chain-i", chain_i.residual, tol.equality()),
    ];
    if let Some(res) = warp_identity_res {
        checks.push(CheckLine::residual("warp-identity", res, tol.identity));
    }
    if let Some(res) = bo_fiber_res {
        checks.push(CheckLine::residual("bo-fiber", res, tol.identity));
    }
    if let Some(res) = delta_transfer_res {
        checks.push(CheckLine::residual("delta-transfer", res, tol.identity));
    }
    if let Some((lw, il, ir)) = &ineq_ii {
        checks.push(CheckLine::slack("slack-ii", lw.slack, tol.identity));
        if let (Some(il), Some(ir)) = (il, ir) {
            let w = warp_data.as_ref().expect("intrinsic form implies warp data");
            let transfer = (w.f * w.f * lw.slack - (ir - il)).abs();
            checks.push(CheckLine::residual("slack-ii-transfer", transfer, tol.identity));
        }
        checks.push(CheckLine::upper(
            "theta-ii-nonnegative",
            -theta_ii.unwrap_or(0.0),
            tol.exact,
        ));
        if let Some(ch) = &chain_ii {
            checks.push(CheckLine::residual("chain-ii", ch.residual, tol.equality()));
        }
    }
    for km in &kmin_reports {
        if let Some(cf) = km.closed_form {
            checks.push(CheckLine::residual(
                format!("kmin-{}-agreement", km.subspace),
                cf - km.sampled,
                tol.opt,
            ));
        }
    }
    if equality_i.equality {
        checks.push(CheckLine::residual(
            "equality-i-slack",
            invariants.inequality_i.slack,
            tol.equality(),
        ));
    }
    if let Some(eq) = &equality_ii {
        if eq.equality {
            if let Some((lw, _, _)) = &ineq_ii {
                checks.push(CheckLine::residual("equality-ii-slack", lw.slack, tol.equality()));
            }
        }
    }
    if corollary.minimal && warp_data.is_some() {
        checks.push(CheckLine::upper("corollary-i", corollary.cond_i, tol.identity));
        if let Some(v) = corollary.cond_ii {
            checks.push(CheckLine::upper("corollary-ii", v, tol.identity));
        }
        if let Some(v) = corollary.cond_ii_intrinsic {
            checks.push(CheckLine::upper("corollary-ii-intrinsic", v, tol.identity));
        }
        if let Some(v) = ricci_max_eig {
            checks.push(CheckLine::upper("ricci-max-eig", v, tol.identity));
        }
    }

    Ok(AlgebraOutput {
        invariants,
        residuals,
        chain_i,
        chain_ii,
        equality_i,
        equality_ii,
        corollaries: CorollaryReport {
            check: corollary,
            ricci_max_eig,
        },
        kmin: kmin_reports,
        checks,
    })
}

/// Evaluates a CR-warped chart at one point. Charts that fail the CR tests
/// (controls like the flat cone) fall back to the metric-level identities.
pub fn evaluate_immersion_point(
    chart: &ImmersionChart,
    point: &[f64],
    index: usize,
    opts: &EvalOptions,
) -> Result<PointRecord> {
    match adapt_frame(chart, point) {
        Ok(report) => {
            let h = second_fundamental_form(&report)?;
            // Pairing matrix of the adapted tangent frame.
            let n = report.n();
            let omega = DMatrix::from_fn(n, n, |i, j| {
                apply_j(report.tangent(i)).dot(report.tangent(j))
            });
            let warp = match &chart.f_expr {
                Some(f) => {
                    let g = report.jet.induced_metric();
                    let base_metric = g.view((0, 0), (chart.n1, chart.n1)).into_owned();
                    Some(grad_laplacian(f, &point[..chart.n1], &base_metric)?)
                }
                None => None,
            };
            let input = AlgebraInput {
                h: &h,
                omega: &omega,
                c: chart.ambient.c,
                warp,
                fiber_k: chart.fiber_k,
            };
            let out = evaluate_algebra(&input, opts)?;
            let mut checks = out.checks;
            checks.push(CheckLine::residual(
                "cr-j-invariance",
                report.residuals.j_invariance,
                opts.tol.frame,
            ));
            checks.push(CheckLine::residual(
                "cr-totally-real",
                report.residuals.totally_real,
                opts.tol.frame,
            ));
            checks.push(CheckLine::residual(
                "warped-metric-split",
                report.residuals.warped_block,
                opts.tol.identity,
            ));
            Ok(PointRecord {
                index,
                point: point.to_vec(),
                cr: true,
                cr_violation: None,
                invariants: Some(out.invariants),
                residuals: out.residuals,
                chain_i: Some(out.chain_i),
                chain_ii: out.chain_ii,
                equality_i: Some(out.equality_i),
                equality_ii: out.equality_ii,
                corollaries: Some(out.corollaries),
                kmin: out.kmin,
                tolerances: opts.tol,
                checks,
            })
        }
        Err(Error::CRViolation(msg)) => {
            evaluate_metric_only(chart, point, index, opts, msg)
        }
        Err(other) => Err(other),
    }
}

/// Metric-level record for non-CR warped charts: warp identity and fiber
/// curvature consistency only.
fn evaluate_metric_only(
    chart: &ImmersionChart,
    point: &[f64],
    index: usize,
    opts: &EvalOptions,
    violation: String,
) -> Result<PointRecord> {
    let wf = warped_frame(chart, point)?;
    let h = crate::immersion::second_fundamental_form_parts(
        &wf.jet,
        &wf.tangent_coeffs,
        &wf.normals,
        chart.n1,
        chart.n2,
    )?;
    let n = chart.dim();
    // Flat ambient: the oracle is pure Gauss.
    let zero_omega = DMatrix::zeros(n, n);
    let oracle = gauss_oracle(&h, &zero_omega, 0.0);
    let warp = match &chart.f_expr {
        Some(f) => {
            let g = wf.jet.induced_metric();
            let base_metric = g.view((0, 0), (chart.n1, chart.n1)).into_owned();
            Some(grad_laplacian(f, &point[..chart.n1], &base_metric)?)
        }
        None => None,
    };
    let mixed = mixed_curvature_matrix(&oracle, chart.n1, chart.n2);
    let mixed_sum: f64 = mixed.iter().sum();
    let mut residuals = ResidualReport::default();
    let mut checks = Vec::new();
    if let Some(w) = &warp {
        let res = (mixed_sum - w.warp_term(chart.n2)).abs();
        residuals.warp_identity = Some(res);
        checks.push(CheckLine::residual("warp-identity", res, opts.tol.identity));
        if let Some(k) = chart.fiber_k {
            if chart.n2 >= 2 {
                let bo = bo_fiber_sectional(w, k);
                let mut worst: f64 = 0.0;
                for a in chart.n1..n {
                    for b in (a + 1)..n {
                        let mut u = DVector::zeros(n);
                        let mut v = DVector::zeros(n);
                        u[a] = 1.0;
                        v[b] = 1.0;
                        worst = worst.max((oracle(&PlaneSpec::new_unchecked(u, v)) - bo).abs());
                    }
                }
                residuals.bo_fiber = Some(worst);
                checks.push(CheckLine::residual("bo-fiber", worst, opts.tol.identity));
            }
        }
    }
    checks.push(CheckLine::residual(
        "warped-metric-split",
        wf.warped_block,
        opts.tol.identity,
    ));
    Ok(PointRecord {
        index,
        point: point.to_vec(),
        cr: false,
        cr_violation: Some(violation),
        invariants: None,
        residuals,
        chain_i: None,
        chain_ii: None,
        equality_i: None,
        equality_ii: None,
        corollaries: None,
        kmin: Vec::new(),
        tolerances: opts.tol,
        checks,
    })
}

/// Evaluates a synthetic scenario (one record).
pub fn evaluate_synthetic(
    compiled: &CompiledSynthetic,
    index: usize,
    opts: &EvalOptions,
) -> Result<PointRecord> {
    let input = AlgebraInput {
        h: &compiled.h,
        omega: &compiled.omega,
        c: compiled.c,
        warp: compiled.warp.clone(),
        fiber_k: None,
    };
    let out = evaluate_algebra(&input, opts)?;
    Ok(PointRecord {
        index,
        point: Vec::new(),
        cr: true,
        cr_violation: None,
        invariants: Some(out.invariants),
        residuals: out.residuals,
        chain_i: Some(out.chain_i),
        chain_ii: out.chain_ii,
        equality_i: Some(out.equality_i),
        equality_ii: out.equality_ii,
        corollaries: Some(out.corollaries),
        kmin: out.kmin,
        tolerances: opts.tol,
        checks: out.checks,
    })
}
