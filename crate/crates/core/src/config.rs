//! Scenario files.
//!
//! Scenarios are TOML documents. Top-level keys set the channel QBER and the
//! Monte Carlo budget; each `[[elements]]` table adds one level, outermost
//! first:
//!
//! ```toml
//! p_e = 0.1
//! trials = 100000
//! seed = 42
//!
//! [[elements]]
//! kind = "bbbg09"
//! params = { alpha_sq = 0.9, coefficient = "half" }
//!
//! [[elements]]
//! kind = "ideal"
//! repeat = 2
//!
//! [[elements]]
//! kind = "custom"
//! params = { p = 0.8, q = 0.75, p_star = 0.5 }
//!
//! [sweep]            # optional, used by `sweep`
//! n_values = [1, 2, 3]
//! p_values = [0.6, 0.7, 0.8]
//! depth = 2
//! p_e_grid = [0.0, 0.25, 0.5]
//! ```
//!
//! Unknown keys anywhere are rejected and the offending key is named.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{default_p_e_grid, SweepPanel};
use crate::elements::{
    profile_bbbg09, profile_chailloux, profile_ideal, Bbbg09Coefficient, ElementProfile,
    NoiseSetting,
};
use crate::engine::FrameworkSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Ideal,
    Bbbg09,
    Chailloux,
    Custom,
}

impl ElementKind {
    fn allowed_params(self) -> &'static [&'static str] {
        match self {
            ElementKind::Ideal | ElementKind::Chailloux => &[],
            ElementKind::Bbbg09 => &["alpha_sq", "coefficient"],
            ElementKind::Custom => &["p", "q", "p_star"],
        }
    }

    fn name(self) -> &'static str {
        match self {
            ElementKind::Ideal => "ideal",
            ElementKind::Bbbg09 => "bbbg09",
            ElementKind::Chailloux => "chailloux",
            ElementKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    pub kind: ElementKind,
    /// Consecutive copies of this element.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub repeat: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_e_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub p_e: f64,
    pub trials: u64,
    pub seed: u64,
    pub elements: Vec<ElementEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ElementEntry {
    fn number(&self, key: &str) -> Result<f64> {
        match self.params.get(key) {
            Some(ParamValue::Number(x)) => Ok(*x),
            Some(ParamValue::Text(_)) => Err(config_err(format!(
                "{} parameter `{key}` must be a number",
                self.kind.name()
            ))),
            None => Err(config_err(format!(
                "{} element is missing parameter `{key}`",
                self.kind.name()
            ))),
        }
    }

    fn check_keys(&self) -> Result<()> {
        let allowed = self.kind.allowed_params();
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(config_err(format!(
                "unknown parameter `{k}` for element kind `{}`",
                self.kind.name()
            ))),
            None => Ok(()),
        }
    }

    pub fn to_profile(&self) -> Result<ElementProfile> {
        self.check_keys()?;
        let profile = match self.kind {
            ElementKind::Ideal => profile_ideal(),
            ElementKind::Chailloux => profile_chailloux(),
            ElementKind::Bbbg09 => {
                let coefficient = match self.params.get("coefficient") {
                    None => Bbbg09Coefficient::default(),
                    Some(ParamValue::Text(s)) => s.parse()?,
                    Some(ParamValue::Number(_)) => {
                        return Err(config_err(
                            "bbbg09 parameter `coefficient` must be \"half\" or \"quarter\"",
                        ))
                    }
                };
                profile_bbbg09(self.number("alpha_sq")?, coefficient)?
            }
            ElementKind::Custom => ElementProfile::new(
                "custom",
                self.number("p")?,
                self.number("q")?,
                self.number("p_star")?,
            )?,
        };
        Ok(profile)
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(config_err("`trials` must be positive"));
        }
        if self.elements.iter().any(|e| e.repeat == 0) {
            return Err(config_err("`repeat` must be positive"));
        }
        self.framework().map(|_| ())
    }

    /// Element profiles in nesting order, `repeat` expanded.
    pub fn profiles(&self) -> Result<Vec<ElementProfile>> {
        let mut out = Vec::new();
        for entry in &self.elements {
            let profile = entry.to_profile()?;
            out.extend(std::iter::repeat_n(profile, entry.repeat));
        }
        Ok(out)
    }

    pub fn noise(&self) -> Result<NoiseSetting> {
        NoiseSetting::new(self.p_e)
    }

    pub fn framework(&self) -> Result<FrameworkSpec> {
        FrameworkSpec::new(self.profiles()?, self.noise()?)
    }

    fn sweep_section(&self) -> SweepSection {
        self.sweep.clone().unwrap_or_default()
    }

    /// Depth curves, from `[sweep] n_values` or `N ∈ {1, 2, 3}`.
    pub fn panel_a(&self) -> SweepPanel {
        match self.sweep_section().n_values {
            Some(depths) => SweepPanel::ByDepth { depths },
            None => SweepPanel::default_a(),
        }
    }

    /// Cheat-probability curves, from `[sweep] p_values` / `depth` or
    /// `p ∈ {0.6, 0.7, 0.8}` at depth 2.
    pub fn panel_b(&self) -> SweepPanel {
        let s = self.sweep_section();
        let SweepPanel::ByCheatProb { p_values, depth } = SweepPanel::default_b() else {
            unreachable!()
        };
        SweepPanel::ByCheatProb {
            p_values: s.p_values.unwrap_or(p_values),
            depth: s.depth.unwrap_or(depth),
        }
    }

    pub fn p_e_grid(&self) -> Vec<f64> {
        self.sweep_section().p_e_grid.unwrap_or_else(default_p_e_grid)
    }
}
