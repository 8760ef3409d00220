//! Closed-form evaluation of the nested framework.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::elements::{noisy_alice_prob, ElementProfile, NoiseSetting};
use crate::engine::FrameworkSpec;
use crate::error::{invalid, Error, Result};

/// Probability that a cheater wins somewhere in the chain when level `i` is
/// won with `level_probs[i]` and every loss escalates:
/// `Σ_i P_i Π_{j<i} (1 − P_j)`.
pub fn nested_prob(level_probs: &[f64]) -> Result<f64> {
    if level_probs.is_empty() {
        return Err(invalid("need at least one level"));
    }
    let mut total = 0.0;
    let mut reach = 1.0;
    for (i, &p) in level_probs.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("level {i} probability {p} is outside [0, 1]")));
        }
        total += p * reach;
        reach *= 1.0 - p;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

/// Success probability of a cheating `party` against the whole framework.
pub fn nested_prob_noisy(spec: &FrameworkSpec, party: Party) -> f64 {
    let probs = match party {
        Party::Alice => spec.alice_level_probs(),
        Party::Bob => spec.bob_level_probs(),
    };
    nested_prob(&probs).expect("framework specs are non-empty with valid probabilities")
}

/// Confirms that no cheater controls the framework outright, i.e. the nested
/// probability stays below 1, for elements that are secure but not perfect.
pub fn check_corollary1(level_probs: &[f64]) -> Result<bool> {
    if let Some((i, p)) = level_probs
        .iter()
        .enumerate()
        .find(|(_, p)| !(**p > 0.5 && **p < 1.0))
    {
        return Err(Error::PreconditionViolation(format!(
            "level {i} probability {p} is outside the open interval (0.5, 1)"
        )));
    }
    Ok(nested_prob(level_probs)? < 1.0)
}

/// Rate at which honest parties reach the end of the chain by noise alone,
/// `Π_i (1 − p*_i) · P_e^N`.
pub fn justice_error(p_stars: &[f64], p_e: f64) -> Result<f64> {
    if p_stars.is_empty() {
        return Err(invalid("need at least one level"));
    }
    if !(0.0..=0.5).contains(&p_e) {
        return Err(invalid(format!("QBER must lie in [0, 0.5], got {p_e}")));
    }
    p_stars.iter().try_fold(1.0, |acc, &ps| {
        if (0.0..=1.0).contains(&ps) {
            Ok(acc * (1.0 - ps) * p_e)
        } else {
            Err(invalid(format!("p_star {ps} is outside [0, 1]")))
        }
    })
}

/// Rounds half away from zero at `decimals` places (inputs here are
/// non-negative, so this is round-half-up).
pub fn round_half_up(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// One row of the ideal-element table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub depth: usize,
    pub element_prob: f64,
    /// Exact nested cheat probability (unrounded).
    pub nested_prob: f64,
    /// `nested_prob − 1/2` (unrounded).
    pub bias: f64,
}

impl Table1Row {
    /// `N,element_prob,cheat_prob,bias` with 2/4/4 decimals.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.2},{:.4},{:.4}",
            self.depth,
            round_half_up(self.element_prob, 2),
            round_half_up(self.nested_prob, 4),
            round_half_up(self.bias, 4)
        )
    }
}

pub const TABLE1_HEADER: &str = "N,element_prob,cheat_prob,bias";

/// Cheat probability and bias of chains of 2 to 6 perfect elements.
pub fn table1() -> Vec<Table1Row> {
    (2..=6)
        .map(|depth| {
            let probs = vec![0.5; depth];
            let nested = nested_prob(&probs).expect("non-empty");
            Table1Row {
                depth,
                element_prob: 0.5,
                nested_prob: nested,
                bias: nested - 0.5,
            }
        })
        .collect()
}

/// Which family of curves to draw over the noise grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepPanel {
    /// One curve per depth, all elements equal to the base profile.
    ByDepth { depths: Vec<usize> },
    /// One curve per cheat probability `p` at a fixed depth; `p*` and `q`
    /// come from the base profile.
    ByCheatProb { p_values: Vec<f64>, depth: usize },
}

impl SweepPanel {
    pub fn default_a() -> Self {
        SweepPanel::ByDepth { depths: vec![1, 2, 3] }
    }

    pub fn default_b() -> Self {
        SweepPanel::ByCheatProb {
            p_values: vec![0.6, 0.7, 0.8],
            depth: 2,
        }
    }
}

/// Curves of a cheating Alice's success probability against `P_e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    /// Ordered as requested, keyed by label (`N=2`, `p=0.8`, ...).
    pub curves: Vec<(String, Vec<f64>)>,
}

impl SweepResult {
    pub fn curve(&self, label: &str) -> Option<&[f64]> {
        self.curves
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c.as_slice())
    }

    pub fn as_map(&self) -> BTreeMap<&str, &[f64]> {
        self.curves
            .iter()
            .map(|(l, c)| (l.as_str(), c.as_slice()))
            .collect()
    }
}

/// `P_e ∈ {0, 0.01, …, 0.5}`.
pub fn default_p_e_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 100.0).collect()
}

pub fn sweep_alice(
    base: &ElementProfile,
    panel: &SweepPanel,
    p_e_grid: &[f64],
) -> Result<SweepResult> {
    if p_e_grid.is_empty() {
        return Err(invalid("noise grid is empty"));
    }
    let noise: Vec<NoiseSetting> = p_e_grid
        .iter()
        .map(|&pe| NoiseSetting::new(pe))
        .collect::<Result<_>>()?;
    let curve = |element: &ElementProfile, depth: usize| -> Result<Vec<f64>> {
        noise
            .iter()
            .map(|n| nested_prob(&vec![noisy_alice_prob(element, n); depth]))
            .collect()
    };
    let curves = match panel {
        SweepPanel::ByDepth { depths } => {
            if depths.is_empty() {
                return Err(invalid("no depths to sweep"));
            }
            depths
                .iter()
                .map(|&n| {
                    if n == 0 || n > crate::engine::MAX_LEVELS {
                        return Err(invalid(format!("depth {n} out of range")));
                    }
                    Ok((format!("N={n}"), curve(base, n)?))
                })
                .collect::<Result<Vec<_>>>()?
        }
        SweepPanel::ByCheatProb { p_values, depth } => {
            if p_values.is_empty() {
                return Err(invalid("no cheat probabilities to sweep"));
            }
            if *depth == 0 || *depth > crate::engine::MAX_LEVELS {
                return Err(invalid(format!("depth {depth} out of range")));
            }
            p_values
                .iter()
                .map(|&p| {
                    let element = ElementProfile::new(
                        format!("{}(p={p})", base.name()),
                        p,
                        base.q(),
                        base.p_star(),
                    )?;
                    Ok((format!("p={p}"), curve(&element, *depth)?))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(SweepResult {
        grid: p_e_grid.to_vec(),
        curves,
    })
}
