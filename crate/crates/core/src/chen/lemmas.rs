//! The three preparatory algebraic facts: the constrained product bound
//! (2α₁α₂ ≥ β under the quadratic closure) and the two index-rearrangement
//! identities in the h coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::immersion::SecondFundamentalForm;
use crate::tol::TOL_EXACT;

/// Outcome of the constrained product bound for real numbers α₁..α_n, β
/// with (Σα)² = (n−1)(Σα² + β): then 2α₁α₂ ≥ β, with equality iff
/// α₁ + α₂ = α₃ = … = α_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Outcome {
    /// |(Σα)² − (n−1)(Σα² + β)|; the slack bound is only asserted when this
    /// is below tolerance.
    pub constraint_residual: f64,
    /// 2α₁α₂ − β.
    pub slack: f64,
    /// α₁ + α₂ = α₃ = … = α_n within tolerance (vacuously true for n = 2).
    pub equality: bool,
}

pub fn lemma1_check(alphas: &[f64], beta: f64) -> Lemma1Outcome {
    let n = alphas.len();
    debug_assert!(n >= 2, "lemma 1 needs at least two alphas");
    let sum: f64 = alphas.iter().sum();
    let sum_sq: f64 = alphas.iter().map(|a| a * a).sum();
    let constraint_residual = (sum * sum - (n as f64 - 1.0) * (sum_sq + beta)).abs();
    let slack = 2.0 * alphas[0] * alphas[1] - beta;
    let head = alphas[0] + alphas[1];
    let equality = alphas[2..].iter().all(|a| (head - a).abs() <= TOL_EXACT);
    Lemma1Outcome {
        constraint_residual,
        slack,
        equality,
    }
}

/// Which rearrangement identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaKind {
    /// Splits {1..n} into {1,2} ∪ {3..n}.
    Lemma2,
    /// Further splits {3..n} into the D_T and D_⊥ blocks.
    Lemma3,
}

/// |LHS − RHS| of the selected identity. These are exact rearrangements, so
/// the residual is roundoff-level for every symmetric h.
pub fn lemma_identity_residual(kind: LemmaKind, h: &SecondFundamentalForm) -> Result<f64> {
    let n = h.n();
    let n1 = h.n1;
    let nd = h.normal_dim();
    if h.n1 < 2 || n < 3 {
        return Err(Error::dim(3, n, "lemma identities need n1 >= 2 and n >= 3"));
    }
    if nd == 0 {
        return Ok(0.0);
    }
    let lhs2 = {
        // (1/2)Σ_{i≠j}(h⁰_ij)² + (1/2)Σ_{r≥1}Σ_{i,j}(h^r_ij)²
        //   + Σ_{r≥1} h^r_11 h^r_22 − Σ_r (h^r_12)²
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += 0.5 * h.get(0, i, j).powi(2);
                }
            }
        }
        for r in 1..nd {
            for i in 0..n {
                for j in 0..n {
                    acc += 0.5 * h.get(r, i, j).powi(2);
                }
            }
            acc += h.get(r, 0, 0) * h.get(r, 1, 1);
        }
        for r in 0..nd {
            acc -= h.get(r, 0, 1).powi(2);
        }
        acc
    };
    let rhs2 = {
        // (1/2)Σ_{i≠j≥3}(h⁰_ij)² + (1/2)Σ_{r≥1}Σ_{i,j≥3}(h^r_ij)²
        //   + (1/2)Σ_{r≥1}(h^r_11 + h^r_22)² + Σ_r Σ_{j≥3}[(h^r_1j)² + (h^r_2j)²]
        let mut acc = 0.0;
        for i in 2..n {
            for j in 2..n {
                if i != j {
                    acc += 0.5 * h.get(0, i, j).powi(2);
                }
            }
        }
        for r in 1..nd {
            for i in 2..n {
                for j in 2..n {
                    acc += 0.5 * h.get(r, i, j).powi(2);
                }
            }
            acc += 0.5 * (h.get(r, 0, 0) + h.get(r, 1, 1)).powi(2);
        }
        for r in 0..nd {
            for j in 2..n {
                acc += h.get(r, 0, j).powi(2) + h.get(r, 1, j).powi(2);
            }
        }
        acc
    };
    match kind {
        LemmaKind::Lemma2 => Ok((lhs2 - rhs2).abs()),
        LemmaKind::Lemma3 => {
            // LHS of the second identity is the tail of the first one's RHS.
            let lhs3 = {
                let mut acc = 0.0;
                for i in 2..n {
                    for j in 2..n {
                        if i != j {
                            acc += 0.5 * h.get(0, i, j).powi(2);
                        }
                    }
                }
                for r in 1..nd {
                    for i in 2..n {
                        for j in 2..n {
                            acc += 0.5 * h.get(r, i, j).powi(2);
                        }
                    }
                }
                for r in 0..nd {
                    for j in 2..n {
                        acc += h.get(r, 0, j).powi(2) + h.get(r, 1, j).powi(2);
                    }
                }
                acc
            };
            let rhs3 = {
                let mut acc = 0.0;
                // Block-diagonal quadratic pieces.
                for a in 2..n1 {
                    for b in 2..n1 {
                        if a != b {
                            acc += 0.5 * h.get(0, a, b).powi(2);
                        }
                    }
                }
                for aa in n1..n {
                    for bb in n1..n {
                        if aa != bb {
                            acc += 0.5 * h.get(0, aa, bb).powi(2);
                        }
                    }
                }
                for r in 1..nd {
                    for a in 2..n1 {
                        for b in 2..n1 {
                            acc += 0.5 * h.get(r, a, b).powi(2);
                        }
                    }
                    for aa in n1..n {
                        for bb in n1..n {
                            acc += 0.5 * h.get(r, aa, bb).powi(2);
                        }
                    }
                }
                // Couplings of the distinguished pair to each block.
                for r in 0..nd {
                    for a in 2..n1 {
                        acc += h.get(r, 0, a).powi(2) + h.get(r, 1, a).powi(2);
                    }
                    for aa in n1..n {
                        acc += h.get(r, 0, aa).powi(2) + h.get(r, 1, aa).powi(2);
                    }
                }
                // Mixed D_T–D_⊥ entries beyond the distinguished pair.
                for r in 0..nd {
                    for a in 2..n1 {
                        for aa in n1..n {
                            acc += h.get(r, a, aa).powi(2);
                        }
                    }
                }
                acc
            };
            Ok((lhs3 - rhs3).abs())
        }
    }
}
