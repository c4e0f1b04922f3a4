//! Replicated simulations compared against the closed forms.
//!
//! Seeds are derived deterministically: replication `k` uses
//! `base_seed ^ k`, and hop `h` of that replication (`h = 2 i` for the SR
//! hop of relay `i`, `2 i + 1` for its RD hop) uses
//! `splitmix64(replication_seed ^ ((h + 1) << 32))`. A replication's traces
//! therefore do not depend on which other replications run alongside it.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{self, RelayLinks, RelayTopology, SwitchThreshold};
use crate::error::{Error, Result};
use crate::fading::{
    generate_trace, LinkParams, TraceConfig, DEFAULT_NUM_SINUSOIDS, DEFAULT_SAMPLES_PER_DOPPLER,
};
use crate::protocol::{run_dssc, run_or, summarize, RelayTraces, SelectionMetric, Summary};

/// First positive zero of `J0`. A decision period of
/// `J0_FIRST_ZERO / (2π F)` makes consecutive samples of a hop uncorrelated.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Or,
    DsscB,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Or => "or",
            Scheme::DsscB => "dssc_b",
        }
    }
}

/// How every hop of a replication is sampled. The sample rate is
/// `samples_per_doppler × (largest Doppler frequency in the topology)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default = "default_samples_per_doppler")]
    pub samples_per_doppler: f64,
    pub duration_s: f64,
    #[serde(default = "default_num_sinusoids")]
    pub num_sinusoids: usize,
}

fn default_samples_per_doppler() -> f64 {
    DEFAULT_SAMPLES_PER_DOPPLER
}

fn default_num_sinusoids() -> usize {
    DEFAULT_NUM_SINUSOIDS
}

impl SamplingConfig {
    pub fn new(duration_s: f64) -> Self {
        Self {
            samples_per_doppler: DEFAULT_SAMPLES_PER_DOPPLER,
            duration_s,
            num_sinusoids: DEFAULT_NUM_SINUSOIDS,
        }
    }

    pub fn sample_rate_hz(&self, topology: &RelayTopology) -> f64 {
        self.samples_per_doppler * topology.max_doppler_hz()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub topology: RelayTopology,
    pub scheme: Scheme,
    #[serde(default)]
    pub metric: SelectionMetric,
    /// Linear SNR threshold `T`; required for DSSC-B, rejected for OR.
    #[serde(default)]
    pub threshold: Option<SwitchThreshold>,
    pub sampling: SamplingConfig,
    /// DSSC-B decision stride in samples. 1 approximates continuous time.
    #[serde(default = "default_period")]
    pub decision_period_samples: usize,
    pub replications: usize,
    pub base_seed: u64,
}

fn default_period() -> usize {
    1
}

impl ExperimentConfig {
    pub fn or(
        topology: RelayTopology,
        sampling: SamplingConfig,
        replications: usize,
        seed: u64,
    ) -> Self {
        Self {
            topology,
            scheme: Scheme::Or,
            metric: SelectionMetric::MinEquivalent,
            threshold: None,
            sampling,
            decision_period_samples: 1,
            replications,
            base_seed: seed,
        }
    }

    pub fn dssc(
        topology: RelayTopology,
        threshold: SwitchThreshold,
        sampling: SamplingConfig,
        replications: usize,
        seed: u64,
    ) -> Self {
        Self {
            scheme: Scheme::DsscB,
            threshold: Some(threshold),
            ..Self::or(topology, sampling, replications, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        match (self.scheme, self.threshold) {
            (Scheme::DsscB, None) => {
                return Err(Error::Config("DSSC-B requires a threshold".into()))
            }
            (Scheme::Or, Some(_)) => {
                return Err(Error::Config("OR does not take a threshold".into()))
            }
            _ => {}
        }
        if self.scheme == Scheme::DsscB {
            if self.topology.len() != 2 {
                return Err(Error::Config(format!(
                    "DSSC-B needs exactly 2 relays, got {}",
                    self.topology.len()
                )));
            }
            if self.metric != SelectionMetric::MinEquivalent {
                return Err(Error::Config(
                    "DSSC-B only supports the min_equivalent metric".into(),
                ));
            }
        }
        if self.decision_period_samples == 0 {
            return Err(Error::Config("decision_period_samples must be >= 1".into()));
        }
        let tc = self.trace_config(0);
        tc.validate()?;
        for (i, r) in self.topology.relays().iter().enumerate() {
            tc.check_resolution(&format!("S-R{}", i + 1), &r.sr)?;
            tc.check_resolution(&format!("R{}-D", i + 1), &r.rd)?;
        }
        Ok(())
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sampling.sample_rate_hz(&self.topology)
    }

    fn trace_config(&self, seed: u64) -> TraceConfig {
        TraceConfig {
            sample_rate_hz: self.sample_rate_hz(),
            duration_s: self.sampling.duration_s,
            num_sinusoids: self.sampling.num_sinusoids,
            seed,
        }
    }

    pub fn total_time_s(&self) -> f64 {
        self.replications as f64 * self.sampling.duration_s
    }
}

/// Decision stride (in samples) whose duration is the first zero of the
/// Doppler autocorrelation `J0(2π F τ)`, at least 1.
pub fn decorrelated_period_samples(sample_rate_hz: f64, doppler_hz: f64) -> usize {
    let tau = J0_FIRST_ZERO / (2.0 * std::f64::consts::PI * doppler_hz);
    ((tau * sample_rate_hz).round() as usize).max(1)
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn replication_seed(base_seed: u64, k: usize) -> u64 {
    base_seed ^ k as u64
}

pub fn hop_seed(replication_seed: u64, hop: usize) -> u64 {
    splitmix64(replication_seed ^ ((hop as u64 + 1) << 32))
}

/// Fading traces of replication `k`, identical whether or not the other
/// replications are generated.
pub fn replication_traces(config: &ExperimentConfig, k: usize) -> Result<Vec<RelayTraces>> {
    let rep = replication_seed(config.base_seed, k);
    let hop = |params: LinkParams, h: usize| {
        generate_trace(params, config.trace_config(hop_seed(rep, h)))
    };
    config
        .topology
        .relays()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(RelayTraces {
                sr: hop(r.sr, 2 * i)?,
                rd: hop(r.rd, 2 * i + 1)?,
            })
        })
        .collect()
}

pub fn run_replication(config: &ExperimentConfig, k: usize) -> Result<Summary> {
    let traces = replication_traces(config, k)?;
    let trace = match config.scheme {
        Scheme::Or => run_or(&traces, config.metric)?,
        Scheme::DsscB => {
            let t = config.threshold.expect("validated");
            run_dssc(
                &traces,
                t.envelope_level(config.topology.gamma()),
                config.decision_period_samples,
            )?
        }
    };
    summarize(&trace, trace.duration_s())
}

/// What a [`RateReport`] measures. Relay indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SwitchRate,
    /// Mean activation interval over all relays.
    ActivationTime,
    RelayActivationTime(usize),
    Occupancy(usize),
}

impl Quantity {
    /// CSV label; relays are numbered from 1.
    pub fn label(self) -> String {
        match self {
            Quantity::SwitchRate => "switch_rate_hz".into(),
            Quantity::ActivationTime => "activation_time_s".into(),
            Quantity::RelayActivationTime(i) => format!("activation_time_s_relay{}", i + 1),
            Quantity::Occupancy(i) => format!("occupancy_relay{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub quantity: Quantity,
    /// Closed-form value, when one exists for this configuration.
    pub analytic: Option<f64>,
    pub sim_mean: f64,
    pub sim_stderr: f64,
    /// `|sim_mean − analytic| / analytic` when `analytic > 0`.
    pub rel_deviation: Option<f64>,
    pub n_events: usize,
    /// Replications that contributed to the estimate.
    pub n_samples: usize,
}

impl RateReport {
    fn new(quantity: Quantity, analytic: Option<f64>, values: &[f64], n_events: usize) -> Self {
        let (sim_mean, sim_stderr) = mean_stderr(values);
        let rel_deviation = analytic
            .filter(|a| *a > 0.0 && a.is_finite() && !values.is_empty())
            .map(|a| (sim_mean - a).abs() / a);
        Self {
            quantity,
            analytic,
            sim_mean,
            sim_stderr,
            rel_deviation,
            n_events,
            n_samples: values.len(),
        }
    }
}

/// Mean and standard error of the mean; the error is 0 for fewer than two
/// values and the mean is NaN for none.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub scheme: Scheme,
    pub base_seed: u64,
    pub replications: usize,
    pub total_time_s: f64,
    pub switch_rate: RateReport,
    pub activation_time: RateReport,
    pub relay_activation_time: Vec<RateReport>,
    pub occupancy: Vec<RateReport>,
    /// No switch occurred in any replication; deviations are not meaningful.
    pub low_power: bool,
}

impl ExperimentReport {
    pub fn all(&self) -> Vec<&RateReport> {
        let mut v = vec![&self.switch_rate, &self.activation_time];
        v.extend(&self.relay_activation_time);
        v.extend(&self.occupancy);
        v
    }
}

/// Closed-form counterparts of every reported quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticValues {
    pub switch_rate: Option<f64>,
    pub activation_time: Option<f64>,
    pub relay_activation_time: Vec<Option<f64>>,
    pub occupancy: Vec<Option<f64>>,
}

pub fn analytic_values(config: &ExperimentConfig) -> Result<AnalyticValues> {
    let topo = &config.topology;
    let l = topo.len();
    let none = AnalyticValues {
        switch_rate: None,
        activation_time: None,
        relay_activation_time: vec![None; l],
        occupancy: vec![None; l],
    };
    let inv = |r: f64| if r > 0.0 { 1.0 / r } else { f64::INFINITY };
    match config.scheme {
        // The closed forms describe the min-equivalent metric only.
        Scheme::Or if config.metric != SelectionMetric::MinEquivalent => Ok(none),
        Scheme::Or if l == 2 => {
            let rate = closedform::or_switch_rate_inid_2(topo)?;
            let (r1, r2) = (topo.relay(0)?, topo.relay(1)?);
            let (p1, p2) = closedform::steady_state_or(r1.min_equivalent(), r2.min_equivalent());
            let at = closedform::or_activation_time_inid_2(topo)?;
            Ok(AnalyticValues {
                switch_rate: Some(rate),
                activation_time: Some(inv(rate)),
                relay_activation_time: at.iter().map(|&t| Some(t)).collect(),
                occupancy: vec![Some(p1), Some(p2)],
            })
        }
        Scheme::Or if topo.is_iid() && l <= closedform::MAX_IID_RELAYS => {
            let rate = closedform::or_switch_rate_iid_l(l, topo.max_doppler_hz())?;
            Ok(AnalyticValues {
                switch_rate: Some(rate),
                activation_time: Some(inv(rate)),
                relay_activation_time: vec![Some(inv(rate)); l],
                occupancy: vec![Some(1.0 / l as f64); l],
            })
        }
        Scheme::Or => Ok(none),
        Scheme::DsscB => {
            let t = config
                .threshold
                .ok_or_else(|| Error::Config("DSSC-B requires a threshold".into()))?;
            let rate = closedform::dssc_switch_rate(topo, t)?;
            let (p1, p2) = closedform::dssc_activation_probabilities(topo, t)?;
            Ok(AnalyticValues {
                switch_rate: Some(rate),
                activation_time: Some(inv(rate)),
                relay_activation_time: vec![
                    Some(closedform::dssc_activation_time(0, topo, t)?),
                    Some(closedform::dssc_activation_time(1, topo, t)?),
                ],
                occupancy: vec![Some(p1), Some(p2)],
            })
        }
    }
}

/// Runs every replication (in parallel) and compares the across-replication
/// estimates with the closed forms.
///
/// Per-replication summaries are collected in replication order before
/// being reduced, so the report does not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let analytic = analytic_values(config)?;
    let summaries: Vec<Summary> = (0..config.replications)
        .into_par_iter()
        .map(|k| run_replication(config, k))
        .collect::<Result<_>>()?;
    Ok(reduce(config, &analytic, &summaries))
}

fn reduce(
    config: &ExperimentConfig,
    analytic: &AnalyticValues,
    summaries: &[Summary],
) -> ExperimentReport {
    let l = config.topology.len();
    let total_events: usize = summaries.iter().map(|s| s.n_switches).sum();
    let total_intervals: usize = summaries.iter().map(|s| s.n_intervals).sum();

    let rates: Vec<f64> = summaries.iter().map(|s| s.switch_rate_hz).collect();
    let switch_rate = RateReport::new(
        Quantity::SwitchRate,
        analytic.switch_rate,
        &rates,
        total_events,
    );

    // Replications with no completed interval carry no activation estimate.
    let at: Vec<f64> = summaries
        .iter()
        .filter(|s| !s.censored)
        .map(|s| s.mean_activation_s)
        .collect();
    let activation_time = RateReport::new(
        Quantity::ActivationTime,
        analytic.activation_time,
        &at,
        total_intervals,
    );

    let relay_activation_time = (0..l)
        .map(|i| {
            let v: Vec<f64> = summaries
                .iter()
                .filter_map(|s| s.relay_mean_activation_s[i])
                .collect();
            RateReport::new(
                Quantity::RelayActivationTime(i),
                analytic.relay_activation_time[i],
                &v,
                total_intervals,
            )
        })
        .collect();

    let occupancy = (0..l)
        .map(|i| {
            let v: Vec<f64> = summaries.iter().map(|s| s.occupancy[i]).collect();
            RateReport::new(
                Quantity::Occupancy(i),
                analytic.occupancy[i],
                &v,
                total_events,
            )
        })
        .collect();

    ExperimentReport {
        scheme: config.scheme,
        base_seed: config.base_seed,
        replications: config.replications,
        total_time_s: config.total_time_s(),
        switch_rate,
        activation_time,
        relay_activation_time,
        occupancy,
        low_power: total_events == 0,
    }
}

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `F_SR / F_RD` of every relay, keeping the largest Doppler frequency
    /// of the template fixed.
    DopplerRatio,
    /// Relay count; every relay copies relay 1 of the template.
    #[serde(rename = "L")]
    RelayCount,
    /// Linear threshold `T` (DSSC-B).
    Threshold,
    /// Linear unfaded SNR `Γ`.
    Gamma,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::DopplerRatio => "doppler_ratio",
            SweepAxis::RelayCount => "L",
            SweepAxis::Threshold => "threshold",
            SweepAxis::Gamma => "gamma",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "doppler_ratio" => Ok(SweepAxis::DopplerRatio),
            "L" | "l" | "relays" => Ok(SweepAxis::RelayCount),
            "threshold" => Ok(SweepAxis::Threshold),
            "gamma" => Ok(SweepAxis::Gamma),
            other => Err(Error::Config(format!(
                "unknown sweep axis `{other}`; expected one of doppler_ratio, L, threshold, gamma"
            ))),
        }
    }
}

/// Topology with every relay's Doppler pair set to ratio `F_SR / F_RD =
/// ratio`, the larger of the two equal to `f_max`.
pub fn with_doppler_ratio(
    topology: &RelayTopology,
    ratio: f64,
    f_max: f64,
) -> Result<RelayTopology> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::Config(format!(
            "doppler ratio must be > 0, got {ratio}"
        )));
    }
    let (f_sr, f_rd) = if ratio >= 1.0 {
        (f_max, f_max / ratio)
    } else {
        (f_max * ratio, f_max)
    };
    let relays = topology
        .relays()
        .iter()
        .map(|r| {
            Ok(RelayLinks::new(
                LinkParams::new(r.sr.omega(), f_sr)?,
                LinkParams::new(r.rd.omega(), f_rd)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    RelayTopology::new(relays, topology.gamma())
}

/// `template` with `axis` set to `value`.
pub fn apply_axis(
    template: &ExperimentConfig,
    axis: SweepAxis,
    value: f64,
) -> Result<ExperimentConfig> {
    let mut cfg = template.clone();
    match axis {
        SweepAxis::DopplerRatio => {
            cfg.topology = with_doppler_ratio(
                &template.topology,
                value,
                template.topology.max_doppler_hz(),
            )?;
        }
        SweepAxis::RelayCount => {
            if !(value >= 2.0 && value.fract() == 0.0) {
                return Err(Error::Config(format!(
                    "relay count must be an integer >= 2, got {value}"
                )));
            }
            cfg.topology = RelayTopology::identical(
                value as usize,
                *template.topology.relay(0)?,
                template.topology.gamma(),
            )?;
        }
        SweepAxis::Threshold => {
            cfg.threshold = Some(SwitchThreshold::new(value)?);
        }
        SweepAxis::Gamma => {
            cfg.topology = template.topology.with_gamma(value)?;
        }
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub report: ExperimentReport,
}

/// One independent experiment per value; each row reuses the template's
/// base seed, so a row is reproducible on its own.
pub fn sweep(
    template: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let cfg = apply_axis(template, axis, value)?;
            Ok(SweepRow {
                axis,
                value,
                report: run_experiment(&cfg)?,
            })
        })
        .collect()
}

/// DSSC-B at its worst-case threshold next to OR on the same topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCaseComparison {
    pub threshold: SwitchThreshold,
    pub dssc: ExperimentReport,
    pub or: ExperimentReport,
    /// Analytic `SR_DSSC(T*) < SR_OR`.
    pub analytic_ordering_holds: bool,
    /// Simulated `SR_DSSC(T*) < SR_OR`.
    pub simulated_ordering_holds: bool,
}

/// Finds `T*` maximizing the DSSC-B rate, then simulates DSSC-B at `T*` and
/// OR with the sampling, replications and seed of `template`.
pub fn compare_worst_case(template: &ExperimentConfig) -> Result<WorstCaseComparison> {
    let topo = &template.topology;
    if topo.len() != 2 {
        return Err(Error::UnsupportedTopology {
            required: 2,
            got: topo.len(),
        });
    }
    let t_star =
        closedform::worst_case_threshold(topo, closedform::default_threshold_bounds(topo))?;
    let dssc_cfg = ExperimentConfig {
        scheme: Scheme::DsscB,
        metric: SelectionMetric::MinEquivalent,
        threshold: Some(t_star),
        ..template.clone()
    };
    let or_cfg = ExperimentConfig {
        scheme: Scheme::Or,
        metric: SelectionMetric::MinEquivalent,
        threshold: None,
        ..template.clone()
    };
    let dssc = run_experiment(&dssc_cfg)?;
    let or = run_experiment(&or_cfg)?;
    let analytic_ordering_holds = match (dssc.switch_rate.analytic, or.switch_rate.analytic) {
        (Some(d), Some(o)) => d < o,
        _ => false,
    };
    let simulated_ordering_holds = dssc.switch_rate.sim_mean < or.switch_rate.sim_mean;
    Ok(WorstCaseComparison {
        threshold: t_star,
        dssc,
        or,
        analytic_ordering_holds,
        simulated_ordering_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iid_topology(l: usize, f: f64) -> RelayTopology {
        let h = LinkParams::new(1.0, f).unwrap();
        RelayTopology::identical(l, RelayLinks::new(h, h), 1.0).unwrap()
    }

    fn or_config(reps: usize, duration: f64) -> ExperimentConfig {
        ExperimentConfig::or(
            iid_topology(2, 10.0),
            SamplingConfig::new(duration),
            reps,
            7,
        )
    }

    #[test]
    fn seeds_are_documented_derivation() {
        assert_eq!(replication_seed(5, 3), 6);
        assert_ne!(hop_seed(1, 0), hop_seed(1, 1));
        // reference value of splitmix64(0)
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn validation_rules() {
        let mut c = or_config(1, 1.0);
        assert!(c.validate().is_ok());
        c.replications = 0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = or_config(1, 1.0);
        c.threshold = Some(SwitchThreshold::new(1.0).unwrap());
        assert!(c.validate().is_err());
        c.scheme = Scheme::DsscB;
        assert!(c.validate().is_ok());
        c.threshold = None;
        assert!(c.validate().is_err());
        let mut c = or_config(1, 1.0);
        c.sampling.samples_per_doppler = 16.0;
        assert!(matches!(c.validate(), Err(Error::Resolution { .. })));
        let mut c = ExperimentConfig::dssc(
            iid_topology(3, 10.0),
            SwitchThreshold::new(1.0).unwrap(),
            SamplingConfig::new(1.0),
            1,
            0,
        );
        assert!(c.validate().is_err());
        c.topology = iid_topology(2, 10.0);
        c.metric = SelectionMetric::HalfHarmonicMean;
        assert!(c.validate().is_err());
    }

    #[test]
    fn deterministic_reports() {
        let c = or_config(4, 2.0);
        assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
    }

    #[test]
    fn replication_is_isolated() {
        let c = or_config(6, 1.0);
        let alone = ExperimentConfig {
            replications: 1,
            ..c.clone()
        };
        assert_eq!(
            replication_traces(&c, 0).unwrap(),
            replication_traces(&alone, 0).unwrap()
        );
        assert_ne!(
            replication_traces(&c, 0).unwrap()[0].sr.samples,
            replication_traces(&c, 1).unwrap()[0].sr.samples
        );
    }

    #[test]
    fn dssc_zero_threshold_reports_no_deviation() {
        let c = ExperimentConfig::dssc(
            iid_topology(2, 10.0),
            SwitchThreshold::new(0.0).unwrap(),
            SamplingConfig::new(2.0),
            3,
            1,
        );
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.switch_rate.sim_mean, 0.0);
        assert_eq!(r.switch_rate.analytic, Some(0.0));
        assert_eq!(r.switch_rate.rel_deviation, None);
        assert!(r.low_power);
    }

    #[test]
    fn or_iid_rate_quick() {
        let r = run_experiment(&or_config(8, 10.0)).unwrap();
        let dev = r.switch_rate.rel_deviation.unwrap();
        assert!(dev < 0.05, "{dev}");
        assert!(r.switch_rate.sim_stderr > 0.0);
        let occ: f64 = r.occupancy.iter().map(|o| o.sim_mean).sum();
        assert!((occ - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hhm_metric_has_no_analytic() {
        let mut c = or_config(1, 1.0);
        c.metric = SelectionMetric::HalfHarmonicMean;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.switch_rate.analytic, None);
        assert!(r.switch_rate.sim_mean > 0.0);
    }

    #[test]
    fn mean_stderr_examples() {
        assert_eq!(mean_stderr(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert!(mean_stderr(&[]).0.is_nan());
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("L".parse::<SweepAxis>().unwrap(), SweepAxis::RelayCount);
        assert_eq!("gamma".parse::<SweepAxis>().unwrap(), SweepAxis::Gamma);
        assert!(matches!(
            "speed".parse::<SweepAxis>(),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn apply_axis_values() {
        let c = or_config(1, 1.0);
        let r = apply_axis(&c, SweepAxis::DopplerRatio, 4.0).unwrap();
        let relay = r.topology.relay(0).unwrap();
        assert_eq!(relay.sr.doppler_hz(), 10.0);
        assert_eq!(relay.rd.doppler_hz(), 2.5);
        let r = apply_axis(&c, SweepAxis::DopplerRatio, 0.5).unwrap();
        assert_eq!(r.topology.relay(1).unwrap().sr.doppler_hz(), 5.0);
        assert_eq!(
            apply_axis(&c, SweepAxis::RelayCount, 5.0)
                .unwrap()
                .topology
                .len(),
            5
        );
        assert!(apply_axis(&c, SweepAxis::RelayCount, 2.5).is_err());
        assert_eq!(
            apply_axis(&c, SweepAxis::Gamma, 3.0)
                .unwrap()
                .topology
                .gamma(),
            3.0
        );
        assert!(apply_axis(&c, SweepAxis::Threshold, -1.0).is_err());
    }

    #[test]
    fn l_sweep_analytic_increases() {
        let c = or_config(1, 0.5);
        let rows = sweep(&c, SweepAxis::RelayCount, &[2.0, 3.0, 4.0]).unwrap();
        let a: Vec<f64> = rows
            .iter()
            .map(|r| r.report.switch_rate.analytic.unwrap())
            .collect();
        assert!(a.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn decorrelated_period() {
        assert_eq!(decorrelated_period_samples(640.0, 10.0), 24);
        assert_eq!(decorrelated_period_samples(1.0, 10.0), 1);
    }

    #[test]
    fn config_json_round_trip() {
        let c = ExperimentConfig::dssc(
            iid_topology(2, 10.0),
            SwitchThreshold::new(0.5).unwrap(),
            SamplingConfig::new(3.0),
            2,
            11,
        );
        let s = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
