//! Fair two-level frameworks: one real element followed by a perfect one,
//! tuned so that Alice and Bob end up with the same cheat probability.

use serde::Serialize;

use crate::elements::{Bbbg09Coefficient, CHAILLOUX_CHEAT_PROB};
use crate::error::{invalid, Error, Result};

const BRACKET_LO: f64 = 0.75;
const BRACKET_HI: f64 = 1.0 - 1e-9;
const MAX_ITER: usize = 200;

/// Default residual tolerance used by the CLI.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Cheat probability of an element followed by a perfect element:
/// `p + (1 − p)/2`.
pub fn nested_with_perfect(p: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&p) {
        return Err(invalid(format!("cheat probability must lie in [0.5, 1), got {p}")));
    }
    Ok(p + (1.0 - p) * 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairSolution {
    pub alpha_sq: f64,
    pub beta_sq: f64,
    /// Element-level cheat probability shared by both parties (= α²).
    pub common_cheat_prob: f64,
    /// Bias of the two-level framework, `common_cheat_prob / 2`.
    pub framework_bias: f64,
    pub coefficient_used: Bbbg09Coefficient,
    /// `|3/4 + c·αβ − α²|` at the returned point.
    pub residual: f64,
}

/// Difference between Alice's and Bob's element-level cheat probabilities for
/// BBBG09 with `α² = s`.
fn fair_gap(s: f64, c: f64) -> f64 {
    0.75 + c * (s * (1.0 - s)).sqrt() - s
}

/// Finds `α²` for which BBBG09 followed by a perfect element is fair.
///
/// Since `p ↦ p + (1 − p)/2` is strictly increasing, equal framework cheat
/// probabilities are equivalent to `3/4 + c·αβ = α²`, which is bisected on
/// `α² ∈ [3/4, 1)`. The lower bracket end excludes the spurious root of the
/// squared equation (where `4α² − 3 < 0`).
pub fn solve_fair_bbbg09(coefficient: Bbbg09Coefficient, tolerance: f64) -> Result<FairSolution> {
    if !(tolerance > 0.0 && tolerance <= 1e-6) {
        return Err(invalid(format!("tolerance must lie in (0, 1e-6], got {tolerance}")));
    }
    let c = coefficient.value();
    let (mut lo, mut hi) = (BRACKET_LO, BRACKET_HI);
    let (f_lo, f_hi) = (fair_gap(lo, c), fair_gap(hi, c));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::SolverFailure(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f_mid = fair_gap(mid, c);
        if f_mid.abs() <= tolerance {
            return Ok(FairSolution {
                alpha_sq: mid,
                beta_sq: 1.0 - mid,
                common_cheat_prob: mid,
                framework_bias: nested_with_perfect(mid)? - 0.5,
                coefficient_used: coefficient,
                residual: f_mid.abs(),
            });
        }
        // f is positive left of the root
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::SolverFailure(format!(
        "residual above {tolerance:e} after {MAX_ITER} bisection steps"
    )))
}

/// A symmetric element (`p = q`) followed by a perfect element; already fair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairComposition {
    pub common_cheat_prob: f64,
    pub framework_cheat_prob: f64,
    pub framework_bias: f64,
}

pub fn compose_symmetric(cheat_prob: f64) -> Result<FairComposition> {
    let framework = nested_with_perfect(cheat_prob)?;
    Ok(FairComposition {
        common_cheat_prob: cheat_prob,
        framework_cheat_prob: framework,
        framework_bias: framework - 0.5,
    })
}

/// Chailloux's protocol followed by a perfect element.
pub fn fair_chailloux() -> FairComposition {
    compose_symmetric(CHAILLOUX_CHEAT_PROB).expect("valid cheat probability")
}
