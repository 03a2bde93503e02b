//! Minimization of a plane functional over the Grassmannian of 2-planes in
//! a subspace: deterministic low-discrepancy sampling of orthonormal pairs
//! followed by coordinate relaxation on the two spanning vectors.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::frame::{Frame, PlaneSpec};

/// Sampling and refinement budget for the plane search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_refine")]
    pub refine_steps: usize,
}

fn default_samples() -> usize {
    4096
}
fn default_refine() -> usize {
    200
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            samples: 4096,
            refine_steps: 200,
        }
    }
}

/// Result of a plane search: the minimum value, the plane expanded in the
/// carrier space of the subspace frame, and its coefficients over the frame.
#[derive(Debug, Clone)]
pub struct PlaneMin {
    pub value: f64,
    pub plane: PlaneSpec,
    pub coeff_u: DVector<f64>,
    pub coeff_v: DVector<f64>,
}

/// Additive Kronecker sequence on [0,1)^dim with irrational generators;
/// the seed only shifts the starting offsets, so runs with equal seeds are
/// bit-identical.
struct Kronecker {
    offsets: Vec<f64>,
    alphas: Vec<f64>,
    step: u64,
}

impl Kronecker {
    fn new(dim: usize, seed: u64) -> Self {
        const PRIMES: [u64; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
        let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
        let mut offsets = Vec::with_capacity(dim);
        let mut alphas = Vec::with_capacity(dim);
        for i in 0..dim {
            state = splitmix64(state);
            offsets.push((state >> 11) as f64 / (1u64 << 53) as f64);
            let p = PRIMES[i % PRIMES.len()] as f64 * (1.0 + (i / PRIMES.len()) as f64);
            alphas.push(p.sqrt().fract());
        }
        Kronecker {
            offsets,
            alphas,
            step: 0,
        }
    }

    fn next_point(&mut self) -> Vec<f64> {
        self.step += 1;
        let t = self.step as f64;
        self.offsets
            .iter()
            .zip(&self.alphas)
            .map(|(o, a)| (o + t * a).fract())
            .collect()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Box–Muller over consecutive uniform pairs; the final uniform is mapped
/// away from zero so the logarithm stays finite.
fn gaussians(uniforms: &[f64], count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let u1 = 1.0 - uniforms[i];
        let u2 = uniforms[i + 1];
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        out.push(r * phi.cos());
        if out.len() < count {
            out.push(r * phi.sin());
        }
        i += 2;
    }
    out
}

/// Normalizes `a` and orthogonalizes `b` against it; returns false when the
/// pair is too close to collinear to define a plane.
fn orthonormalize_pair(a: &mut DVector<f64>, b: &mut DVector<f64>) -> bool {
    let na = a.norm();
    if na < 1e-12 {
        return false;
    }
    *a /= na;
    let c = b.dot(a);
    b.axpy(-c, a, 1.0);
    let nb = b.norm();
    if nb < 1e-9 {
        return false;
    }
    *b /= nb;
    true
}

/// Minimizes `curv` over 2-planes inside the span of `subspace`.
///
/// For a 2-dimensional subspace the unique plane is returned exactly. In
/// general, `budget.samples` low-discrepancy orthonormal coefficient pairs
/// are scored, the best is polished by `budget.refine_steps` sweeps of
/// coordinate relaxation with re-orthonormalization, and ties resolve
/// deterministically, so a fixed seed reproduces the result bit for bit.
pub fn min_over_planes<F>(
    curv: F,
    subspace: &Frame,
    budget: &SearchBudget,
    seed: u64,
) -> Result<PlaneMin>
where
    F: Fn(&PlaneSpec) -> f64,
{
    let k = subspace.len();
    if k < 2 {
        return Err(Error::DegenerateInput(format!(
            "plane search needs a subspace of dimension >= 2, got {k}"
        )));
    }

    let eval = |cu: &DVector<f64>, cv: &DVector<f64>| -> (f64, PlaneSpec) {
        let plane = PlaneSpec::new_unchecked(subspace.expand(cu), subspace.expand(cv));
        (curv(&plane), plane)
    };

    if k == 2 {
        let cu = DVector::from_row_slice(&[1.0, 0.0]);
        let cv = DVector::from_row_slice(&[0.0, 1.0]);
        let (value, plane) = eval(&cu, &cv);
        return Ok(PlaneMin {
            value,
            plane,
            coeff_u: cu,
            coeff_v: cv,
        });
    }

    // Each candidate needs 2k Gaussians; Box–Muller consumes uniforms in
    // pairs, so draw an even count per vector.
    let per_vec = k + (k & 1);
    let mut seq = Kronecker::new(2 * per_vec, seed);
    let mut best_val = f64::INFINITY;
    let mut best: Option<(DVector<f64>, DVector<f64>)> = None;
    let mut produced = 0;
    while produced < budget.samples.max(1) {
        let u = seq.next_point();
        let g = gaussians(&u, 2 * k);
        let mut a = DVector::from_row_slice(&g[..k]);
        let mut b = DVector::from_row_slice(&g[k..2 * k]);
        if !orthonormalize_pair(&mut a, &mut b) {
            continue;
        }
        produced += 1;
        let (val, _) = eval(&a, &b);
        if val < best_val {
            best_val = val;
            best = Some((a, b));
        }
    }
    let (mut cu, mut cv) = best.expect("budget.samples >= 1 produced no candidate");

    // Coordinate relaxation: perturb one coefficient of one spanning vector,
    // re-orthonormalize, keep strict improvements; halve the step when a
    // full sweep stalls.
    let mut step = 0.5;
    let mut sweeps = 0;
    while sweeps < budget.refine_steps && step > 1e-13 {
        sweeps += 1;
        let mut improved = false;
        for which in 0..2 {
            for i in 0..k {
                for sign in [1.0, -1.0] {
                    let mut a = cu.clone();
                    let mut b = cv.clone();
                    if which == 0 {
                        a[i] += sign * step;
                    } else {
                        b[i] += sign * step;
                    }
                    if !orthonormalize_pair(&mut a, &mut b) {
                        continue;
                    }
                    let (val, _) = eval(&a, &b);
                    if val < best_val {
                        best_val = val;
                        cu = a;
                        cv = b;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let (value, plane) = eval(&cu, &cv);
    Ok(PlaneMin {
        value,
        plane,
        coeff_u: cu,
        coeff_v: cv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_functional_returns_the_constant() {
        for k in 2..=5 {
            let frame = Frame::standard(k);
            let got = min_over_planes(|_| 2.5, &frame, &SearchBudget::default(), 7).unwrap();
            assert_eq!(got.value, 2.5);
        }
    }

    #[test]
    fn two_dimensional_subspace_is_exact() {
        let frame = Frame::standard(2);
        let curv = |p: &PlaneSpec| p.u[0] * p.u[0] + 3.0 * p.v[1];
        let got = min_over_planes(curv, &frame, &SearchBudget::default(), 0).unwrap();
        let direct = curv(&PlaneSpec::new_unchecked(
            DVector::from_row_slice(&[1.0, 0.0]),
            DVector::from_row_slice(&[0.0, 1.0]),
        ));
        assert_eq!(got.value, direct);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let frame = Frame::standard(4);
        let curv = |p: &PlaneSpec| {
            let d = [1.0, -0.7, 0.3, 2.0];
            (0..4).map(|i| d[i] * p.u[i] * p.u[i] * p.v[i] * p.v[i]).sum::<f64>()
        };
        let a = min_over_planes(curv, &frame, &SearchBudget::default(), 123).unwrap();
        let b = min_over_planes(curv, &frame, &SearchBudget::default(), 123).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        for i in 0..4 {
            assert_eq!(a.coeff_u[i].to_bits(), b.coeff_u[i].to_bits());
            assert_eq!(a.coeff_v[i].to_bits(), b.coeff_v[i].to_bits());
        }
        let c = min_over_planes(curv, &frame, &SearchBudget::default(), 124).unwrap();
        // A different seed may land on the same minimum value but must still
        // be deterministic; just sanity-check it is finite.
        assert!(c.value.is_finite());
    }

    #[test]
    fn degenerate_subspace_is_rejected() {
        let frame = Frame::standard(1);
        assert!(min_over_planes(|_| 0.0, &frame, &SearchBudget::default(), 0).is_err());
    }

    /// Independent oracle: dense random sampling (plain LCG, nothing shared
    /// with the implementation) plus projected finite-difference descent.
    fn oracle_min<F>(curv: &F, k: usize, samples: usize) -> f64
    where
        F: Fn(&PlaneSpec) -> f64,
    {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let frame = Frame::standard(k);
        let f = |a: &DVector<f64>, b: &DVector<f64>| {
            curv(&PlaneSpec::new_unchecked(frame.expand(a), frame.expand(b)))
        };
        let mut pool: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::new();
        for _ in 0..samples {
            let mut a = DVector::from_fn(k, |_, _| next());
            let mut b = DVector::from_fn(k, |_, _| next());
            if !orthonormalize_pair(&mut a, &mut b) {
                continue;
            }
            let v = f(&a, &b);
            pool.push((v, a, b));
            pool.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            pool.truncate(5);
        }
        // Nelder–Mead in the raw 2k-dimensional pair space, evaluating the
        // functional after projection onto orthonormal pairs. Direct search
        // follows the curved valleys of the projected functional where plain
        // gradient descent stalls. Restart the simplex around the incumbent a
        // few times to shake off collapse.
        let dim = 2 * k;
        let feval = |x: &[f64]| -> f64 {
            let mut a = DVector::from_row_slice(&x[..k]);
            let mut b = DVector::from_row_slice(&x[k..]);
            if !orthonormalize_pair(&mut a, &mut b) {
                return f64::INFINITY;
            }
            f(&a, &b)
        };
        let mut best = f64::INFINITY;
        for (_, a0, b0) in pool {
            let mut center: Vec<f64> = a0.iter().chain(b0.iter()).copied().collect();
            let mut radius = 0.2;
            for _restart in 0..6 {
                let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
                simplex.push((feval(&center), center.clone()));
                for i in 0..dim {
                    let mut p = center.clone();
                    p[i] += radius;
                    simplex.push((feval(&p), p));
                }
                for _ in 0..4000 {
                    simplex.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                    let (fb, fw) = (simplex[0].0, simplex[dim].0);
                    if (fw - fb).abs() < 1e-15 {
                        break;
                    }
                    let mut centroid = vec![0.0; dim];
                    for (_, p) in &simplex[..dim] {
                        for i in 0..dim {
                            centroid[i] += p[i] / dim as f64;
                        }
                    }
                    let worst = simplex[dim].1.clone();
                    let refl: Vec<f64> = (0..dim).map(|i| 2.0 * centroid[i] - worst[i]).collect();
                    let fr = feval(&refl);
                    if fr < simplex[0].0 {
                        let exp: Vec<f64> = (0..dim).map(|i| 3.0 * centroid[i] - 2.0 * worst[i]).collect();
                        let fe = feval(&exp);
                        simplex[dim] = if fe < fr { (fe, exp) } else { (fr, refl) };
                    } else if fr < simplex[dim - 1].0 {
                        simplex[dim] = (fr, refl);
                    } else {
                        let con: Vec<f64> = (0..dim).map(|i| 0.5 * (centroid[i] + worst[i])).collect();
                        let fc = feval(&con);
                        if fc < simplex[dim].0 {
                            simplex[dim] = (fc, con);
                        } else {
                            let best_pt = simplex[0].1.clone();
                            for entry in simplex.iter_mut().skip(1) {
                                let shrunk: Vec<f64> = (0..dim)
                                    .map(|i| 0.5 * (entry.1[i] + best_pt[i]))
                                    .collect();
                                *entry = (feval(&shrunk), shrunk);
                            }
                        }
                    }
                }
                simplex.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                center = simplex[0].1.clone();
                best = best.min(simplex[0].0);
                radius *= 0.25;
            }
        }
        best
    }

    #[test]
    fn biquadratic_matches_dense_oracle() {
        // Random diagonal biquadratic forms on k = 4 versus an exhaustive
        // 1e5-sample oracle with independent descent; agreement at 1e-4.
        let coeff_sets = [
            [0.8, -1.3, 0.4, 1.9],
            [-0.5, -0.2, 1.1, 0.9],
            [2.0, 1.0, -0.1, 0.3],
        ];
        for d in coeff_sets {
            let curv = move |p: &PlaneSpec| {
                (0..4).map(|i| d[i] * p.u[i] * p.u[i] * p.v[i] * p.v[i]).sum::<f64>()
            };
            let frame = Frame::standard(4);
            let ours = min_over_planes(curv, &frame, &SearchBudget::default(), 5).unwrap();
            let oracle = oracle_min(&curv, 4, 100_000);
            assert_abs_diff_eq!(ours.value, oracle, epsilon = 1e-4);
        }
    }
}
