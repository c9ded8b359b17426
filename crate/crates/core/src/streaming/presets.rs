use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which guarantee a preset targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Non-negative monotone objectives: `c = 1`, `1/q = 2p + 1`.
    Monotone,
    /// Non-negative objectives: `c = √(1 + 1/p)`, `1/q = p + √(p(p+1)) + 1`.
    Nonmonotone,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(Preset::Monotone),
            "nonmonotone" => Ok(Preset::Nonmonotone),
            other => Err(Error::Config(format!("unknown preset `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigMode {
    MonotonePreset,
    NonmonotonePreset,
    Custom,
}

impl ConfigMode {
    pub fn label(self) -> &'static str {
        match self {
            ConfigMode::MonotonePreset => "monotone-preset",
            ConfigMode::NonmonotonePreset => "nonmonotone-preset",
            ConfigMode::Custom => "custom",
        }
    }
}

/// Parameters of one streaming run: threshold `c`, sampling probability
/// `q`, and the seed of the coin generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    pub c: f64,
    pub q: f64,
    pub seed: u64,
    pub mode: ConfigMode,
}

fn require_width(p: usize) -> Result<f64> {
    if p < 1 {
        return Err(Error::Config(format!(
            "matchoid width p must be at least 1, got {p}"
        )));
    }
    Ok(p as f64)
}

impl AlgoConfig {
    pub fn monotone_preset(p: usize) -> Result<Self> {
        let p = require_width(p)?;
        Ok(AlgoConfig {
            c: 1.0,
            q: 1.0 / (2.0 * p + 1.0),
            seed: 0,
            mode: ConfigMode::MonotonePreset,
        })
    }

    pub fn nonmonotone_preset(p: usize) -> Result<Self> {
        let pf = require_width(p)?;
        Ok(AlgoConfig {
            c: (1.0 + 1.0 / pf).sqrt(),
            q: 1.0 / (pf + (pf * (pf + 1.0)).sqrt() + 1.0),
            seed: 0,
            mode: ConfigMode::NonmonotonePreset,
        })
    }

    pub fn preset(preset: Preset, p: usize) -> Result<Self> {
        match preset {
            Preset::Monotone => Self::monotone_preset(p),
            Preset::Nonmonotone => Self::nonmonotone_preset(p),
        }
    }

    pub fn custom(c: f64, q: f64) -> Result<Self> {
        let config = AlgoConfig {
            c,
            q,
            seed: 0,
            mode: ConfigMode::Custom,
        };
        config.validate()?;
        Ok(config)
    }

    /// `q = 1`, `c = 1`: every element is evaluated.
    pub fn deterministic() -> Self {
        AlgoConfig {
            c: 1.0,
            q: 1.0,
            seed: 0,
            mode: ConfigMode::Custom,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Config(format!(
                "c must be a positive real, got {}",
                self.c
            )));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::Config(format!(
                "q must lie in (0, 1], got {}",
                self.q
            )));
        }
        Ok(())
    }
}

/// Expected approximation ratio guaranteed by a preset: `4p` for monotone
/// objectives, `2p + 2√(p(p+1)) + 1` otherwise.
pub fn approx_ratio_bound(p: usize, preset: Preset) -> Result<f64> {
    let p = require_width(p)?;
    Ok(match preset {
        Preset::Monotone => 4.0 * p,
        Preset::Nonmonotone => 2.0 * p + 2.0 * (p * (p + 1.0)).sqrt() + 1.0,
    })
}
