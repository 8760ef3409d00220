//! Framework elements abstracted to their security signature `(p, q, p*)`
//! and the cheat probabilities they yield over a noisy channel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// One element protocol, described only by what a cheater can achieve on a
/// noiseless channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementProfile {
    name: String,
    p: f64,
    q: f64,
    p_star: f64,
}

impl ElementProfile {
    /// `p`: best success probability of a cheating Alice against honest Bob.
    /// `q`: the same for a cheating Bob.
    /// `p_star`: probability that Bob cannot verify Alice's commitment at all.
    pub fn new(name: impl Into<String>, p: f64, q: f64, p_star: f64) -> Result<Self> {
        let name = name.into();
        if !(0.5..1.0).contains(&p) {
            return Err(invalid(format!("{name}: p must lie in [0.5, 1), got {p}")));
        }
        if !(0.5..1.0).contains(&q) {
            return Err(invalid(format!("{name}: q must lie in [0.5, 1), got {q}")));
        }
        if !(0.0..=p).contains(&p_star) {
            return Err(invalid(format!(
                "{name}: p_star must lie in [0, p] = [0, {p}], got {p_star}"
            )));
        }
        Ok(Self { name, p, q, p_star })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// Neither party gains anything by cheating.
    pub fn is_perfect(&self) -> bool {
        self.p == 0.5 && self.q == 0.5
    }
}

/// Channel noise seen by the framework. Losses are not modelled: the
/// transmission parameter is pinned to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSetting {
    p_e: f64,
    eta: f64,
}

impl NoiseSetting {
    pub const ETA: f64 = 1.0;

    /// `p_e` is the quantum bit error rate; `0.5` is the fully random channel.
    pub fn new(p_e: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p_e) {
            return Err(invalid(format!("QBER must lie in [0, 0.5], got {p_e}")));
        }
        Ok(Self { p_e, eta: Self::ETA })
    }

    pub fn noiseless() -> Self {
        Self { p_e: 0.0, eta: Self::ETA }
    }

    pub fn p_e(&self) -> f64 {
        self.p_e
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Cheating Alice's success probability on a noisy channel:
/// `p* + (p − p*)(1 − P_e) + (1 − p) P_e`.
///
/// Rounds where Bob cannot verify are won outright; verified rounds are won
/// when the channel leaves her forged announcement unflipped, and lost rounds
/// are rescued when it flips.
pub fn noisy_alice_prob(profile: &ElementProfile, noise: &NoiseSetting) -> f64 {
    let (p, ps, pe) = (profile.p, profile.p_star, noise.p_e);
    // expanded as p + P_e(1 + p* − 2p) so both ends of the noise range are exact
    (p + pe * (1.0 + ps - 2.0 * p)).clamp(0.0, 1.0)
}

/// Cheating Bob's success probability on a noisy channel: `q(1 − P_e) + (1 − q) P_e`.
pub fn noisy_bob_prob(profile: &ElementProfile, noise: &NoiseSetting) -> f64 {
    let (q, pe) = (profile.q, noise.p_e);
    (q + pe * (1.0 - 2.0 * q)).clamp(0.0, 1.0)
}

/// Which prefactor multiplies `αβ` in BBBG09's cheating-Alice bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bbbg09Coefficient {
    /// `3/4 + αβ/2`; consistent with the published fair solution `α² = 0.9`.
    #[default]
    Half,
    /// `3/4 + αβ/4`, as the bound is printed in the fair-composition inequality.
    Quarter,
}

impl Bbbg09Coefficient {
    pub fn value(self) -> f64 {
        match self {
            Bbbg09Coefficient::Half => 0.5,
            Bbbg09Coefficient::Quarter => 0.25,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Bbbg09Coefficient::Half => "half",
            Bbbg09Coefficient::Quarter => "quarter",
        }
    }
}

impl fmt::Display for Bbbg09Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bbbg09Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(Bbbg09Coefficient::Half),
            "quarter" => Ok(Bbbg09Coefficient::Quarter),
            other => Err(invalid(format!(
                "unknown coefficient `{other}` (expected `half` or `quarter`)"
            ))),
        }
    }
}

/// Two-basis protocols leave Bob unable to verify half of the time.
pub const TWO_BASIS_P_STAR: f64 = 0.5;

/// Cheat probability of Chailloux's loss-tolerant protocol (bias 0.359).
pub const CHAILLOUX_CHEAT_PROB: f64 = 0.859;

/// A perfect element: no party can bias it.
pub fn profile_ideal() -> ElementProfile {
    ElementProfile::new("ideal", 0.5, 0.5, 0.0).expect("ideal profile is valid")
}

/// BBBG09 with overlap `α² = alpha_sq`, `β² = 1 − α²`:
/// `p = 3/4 + c·αβ`, `q = α²`, `p* = 1/2`.
pub fn profile_bbbg09(alpha_sq: f64, coefficient: Bbbg09Coefficient) -> Result<ElementProfile> {
    if !(0.5..1.0).contains(&alpha_sq) {
        return Err(invalid(format!("alpha_sq must lie in [0.5, 1), got {alpha_sq}")));
    }
    let alpha_beta = (alpha_sq * (1.0 - alpha_sq)).sqrt();
    let p = 0.75 + coefficient.value() * alpha_beta;
    ElementProfile::new(
        format!("bbbg09(alpha_sq={alpha_sq},{coefficient})"),
        p,
        alpha_sq,
        TWO_BASIS_P_STAR,
    )
}

pub fn profile_chailloux() -> ElementProfile {
    ElementProfile::new(
        "chailloux",
        CHAILLOUX_CHEAT_PROB,
        CHAILLOUX_CHEAT_PROB,
        TWO_BASIS_P_STAR,
    )
    .expect("chailloux profile is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn custom(p: f64, q: f64, p_star: f64) -> ElementProfile {
        ElementProfile::new("custom", p, q, p_star).unwrap()
    }

    fn noise(p_e: f64) -> NoiseSetting {
        NoiseSetting::new(p_e).unwrap()
    }

    #[test]
    fn alice_examples() {
        let e = custom(0.8, 0.8, 0.5);
        assert_eq!(noisy_alice_prob(&e, &noise(0.0)), 0.8);
        assert!((noisy_alice_prob(&e, &noise(0.2)) - 0.78).abs() < 1e-15);
        let no_verify = custom(0.8, 0.8, 0.0);
        assert_eq!(noisy_alice_prob(&no_verify, &noise(0.5)), 0.5);
    }

    #[test]
    fn bob_examples() {
        assert_eq!(noisy_bob_prob(&custom(0.8, 0.9, 0.0), &noise(0.0)), 0.9);
        assert_eq!(noisy_bob_prob(&custom(0.8, 0.9, 0.0), &noise(0.5)), 0.5);
        assert!((noisy_bob_prob(&custom(0.8, 0.8, 0.0), &noise(0.25)) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn ideal_is_a_fixed_point() {
        let ideal = profile_ideal();
        assert_eq!(ideal.p(), 0.5);
        assert!(ideal.is_perfect());
        for pe in [0.0, 0.1, 0.3, 0.5] {
            assert_eq!(noisy_alice_prob(&ideal, &noise(pe)), 0.5);
            assert_eq!(noisy_bob_prob(&ideal, &noise(pe)), 0.5);
        }
    }

    #[test]
    fn bbbg09_variants() {
        let half = profile_bbbg09(0.9, Bbbg09Coefficient::Half).unwrap();
        assert!((half.p() - 0.9).abs() < 1e-15);
        assert_eq!(half.q(), 0.9);
        assert_eq!(half.p_star(), 0.5);
        let quarter = profile_bbbg09(0.9, Bbbg09Coefficient::Quarter).unwrap();
        assert!((quarter.p() - 0.825).abs() < 1e-15);
        assert!(profile_bbbg09(0.5, Bbbg09Coefficient::Half).is_err());
        assert!(profile_bbbg09(1.0, Bbbg09Coefficient::Half).is_err());
        assert!(profile_bbbg09(0.4, Bbbg09Coefficient::Quarter).is_err());
    }

    #[test]
    fn chailloux_profile() {
        let c = profile_chailloux();
        assert_eq!(c.p(), 0.859);
        assert_eq!(noisy_alice_prob(&c, &NoiseSetting::noiseless()), 0.859);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(ElementProfile::new("x", 0.49, 0.6, 0.0).is_err());
        assert!(ElementProfile::new("x", 0.6, 1.0, 0.0).is_err());
        assert!(ElementProfile::new("x", 0.6, 0.6, 0.7).is_err());
        assert!(ElementProfile::new("x", 0.6, 0.6, -0.1).is_err());
        assert!(NoiseSetting::new(0.51).is_err());
        assert!(NoiseSetting::new(-0.01).is_err());
        assert_eq!(NoiseSetting::new(0.3).unwrap().eta(), 1.0);
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("half".parse::<Bbbg09Coefficient>().unwrap(), Bbbg09Coefficient::Half);
        assert_eq!("quarter".parse::<Bbbg09Coefficient>().unwrap(), Bbbg09Coefficient::Quarter);
        assert!("third".parse::<Bbbg09Coefficient>().is_err());
    }
}
