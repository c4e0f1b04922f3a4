//! JSON experiment files.
//!
//! Power-like quantities (Ω, Γ, T) carry an explicit unit tag:
//! `{"db": 10}` or `{"linear": 10}`, with `linear = 10^(db / 10)`.

use std::fmt;
use std::path::Path;

use relay_switching::montecarlo::SamplingConfig;
use relay_switching::{
    ExperimentConfig, LinkParams, RelayLinks, RelayTopology, Scheme, SelectionMetric, SweepAxis,
    SwitchThreshold,
};
use serde::{Deserialize, Serialize};

/// Raised for anything wrong with the user's input; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Power {
    Db(f64),
    Linear(f64),
}

impl Power {
    pub fn linear(self) -> f64 {
        match self {
            Power::Db(db) => 10f64.powf(db / 10.0),
            Power::Linear(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ThresholdSpec {
    Db(f64),
    Linear(f64),
    /// The threshold maximizing the DSSC-B switching rate.
    WorstCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopSpec {
    pub omega: Power,
    pub doppler_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaySpec {
    pub sr: HopSpec,
    pub rd: HopSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub gamma: Power,
    pub relays: Vec<RelaySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: String,
    pub values: Vec<f64>,
}

/// Seed as written in the file: a number or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Fixed(u64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

impl std::str::FromStr for SeedSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(SeedSpec::Auto(AutoTag::Auto));
        }
        s.parse()
            .map(SeedSpec::Fixed)
            .map_err(|_| format!("seed must be a u64 or `auto`, got `{s}`"))
    }
}

impl SeedSpec {
    /// Draws from OS entropy only for `auto`.
    pub fn resolve(self) -> u64 {
        match self {
            SeedSpec::Fixed(s) => s,
            SeedSpec::Auto(_) => {
                use std::hash::{BuildHasher, Hasher};
                std::collections::hash_map::RandomState::new()
                    .build_hasher()
                    .finish()
            }
        }
    }
}

fn default_seed() -> SeedSpec {
    SeedSpec::Fixed(1)
}

fn default_replications() -> usize {
    20
}

fn default_period() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfigFile {
    pub topology: TopologySpec,
    pub scheme: Scheme,
    #[serde(default)]
    pub metric: SelectionMetric,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdSpec>,
    pub sampling: SamplingConfig,
    #[serde(default = "default_period")]
    pub decision_period_samples: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_seed")]
    pub seed: SeedSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// Directory for CSV output; `--out` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

impl CliConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err(format!("invalid config: {e}")))
    }

    pub fn topology(&self) -> anyhow::Result<RelayTopology> {
        let hop = |h: &HopSpec, name: String| {
            LinkParams::new(h.omega.linear(), h.doppler_hz)
                .map_err(|e| config_err(format!("{name}: {e}")))
        };
        let relays = self
            .topology
            .relays
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(RelayLinks::new(
                    hop(&r.sr, format!("relay {} sr", i + 1))?,
                    hop(&r.rd, format!("relay {} rd", i + 1))?,
                ))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        RelayTopology::new(relays, self.topology.gamma.linear())
            .map_err(|e| config_err(e.to_string()))
    }

    /// Threshold in linear units; `worst_case` runs the optimizer.
    pub fn threshold(&self, topology: &RelayTopology) -> anyhow::Result<Option<SwitchThreshold>> {
        let t = match self.threshold {
            None => return Ok(None),
            Some(ThresholdSpec::Db(db)) => 10f64.powf(db / 10.0),
            Some(ThresholdSpec::Linear(x)) => x,
            Some(ThresholdSpec::WorstCase) => {
                let bounds = relay_switching::closedform::default_threshold_bounds(topology);
                let t = relay_switching::closedform::worst_case_threshold(topology, bounds)
                    .map_err(|e| config_err(format!("worst_case threshold: {e}")))?;
                return Ok(Some(t));
            }
        };
        SwitchThreshold::new(t)
            .map(Some)
            .map_err(|e| config_err(e.to_string()))
    }

    pub fn sweep_axis(&self) -> anyhow::Result<Option<(SweepAxis, Vec<f64>)>> {
        self.sweep
            .as_ref()
            .map(|s| {
                let axis = s
                    .axis
                    .parse::<SweepAxis>()
                    .map_err(|e| config_err(e.to_string()))?;
                Ok((axis, s.values.clone()))
            })
            .transpose()
    }

    /// The experiment this file describes, with `seed` already resolved.
    pub fn experiment(&self, seed: u64) -> anyhow::Result<ExperimentConfig> {
        let topology = self.topology()?;
        let threshold = self.threshold(&topology)?;
        let cfg = ExperimentConfig {
            threshold,
            scheme: self.scheme,
            metric: self.metric,
            sampling: self.sampling,
            decision_period_samples: self.decision_period_samples,
            replications: self.replications,
            base_seed: seed,
            topology,
        };
        cfg.validate().map_err(|e| config_err(e.to_string()))?;
        Ok(cfg)
    }
}
