//! Sample-by-sample execution of the OR and DSSC-B selection rules.
//!
//! Relay indices are 0-based in this API; the CSV exports print them
//! 1-based.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::FadingTrace;

/// End-to-end metric combining the two hop envelopes of a relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMetric {
    /// `min(a_SR, a_RD)`, the decode-and-forward bottleneck.
    #[default]
    MinEquivalent,
    /// `a_SR a_RD / (a_SR + a_RD)`, an amplify-and-forward proxy.
    HalfHarmonicMean,
}

pub fn metric_value(metric: SelectionMetric, a_sr: f64, a_rd: f64) -> f64 {
    match metric {
        SelectionMetric::MinEquivalent => a_sr.min(a_rd),
        SelectionMetric::HalfHarmonicMean => {
            let sum = a_sr + a_rd;
            if sum > 0.0 {
                a_sr * a_rd / sum
            } else {
                0.0
            }
        }
    }
}

/// Index of the largest metric; ties go to the lowest index.
pub fn or_select(metrics: &[f64]) -> Result<usize> {
    if metrics.is_empty() {
        return Err(Error::Domain("no relay metrics to select from".into()));
    }
    let mut best = 0;
    for (i, &m) in metrics.iter().enumerate().skip(1) {
        if m > metrics[best] {
            best = i;
        }
    }
    Ok(best)
}

/// DSSC-B state carried between decision periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DsscState {
    /// Active relay, 0 or 1.
    pub active: usize,
    /// Whether the active relay's metric was above the threshold at the
    /// previous period.
    pub prev_above: bool,
}

impl DsscState {
    /// Relay 0 active with no history, so the first period cannot switch.
    pub fn initial() -> Self {
        Self {
            active: 0,
            prev_above: false,
        }
    }
}

/// Advances DSSC-B by one period given both relays' current metrics.
///
/// Switches exactly when the active relay's metric was above
/// `threshold_env` at the previous period and is below it now. After a
/// switch, `prev_above` describes the incoming relay's current metric.
pub fn dssc_step(state: DsscState, metrics: [f64; 2], threshold_env: f64) -> (DsscState, bool) {
    let current = metrics[state.active];
    if state.prev_above && current < threshold_env {
        let incoming = 1 - state.active;
        let next = DsscState {
            active: incoming,
            prev_above: metrics[incoming] > threshold_env,
        };
        (next, true)
    } else {
        let next = DsscState {
            active: state.active,
            prev_above: current > threshold_env,
        };
        (next, false)
    }
}

/// Fading traces of one relay's two hops.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayTraces {
    pub sr: FadingTrace,
    pub rd: FadingTrace,
}

impl RelayTraces {
    fn metric_at(&self, metric: SelectionMetric, k: usize) -> f64 {
        metric_value(metric, self.sr.samples[k], self.rd.samples[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchEvent {
    pub time_s: f64,
    pub from: usize,
    pub to: usize,
}

/// A completed dwell between two consecutive switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActivationInterval {
    pub relay: usize,
    pub duration_s: f64,
}

/// Per-sample active relay plus the switch events derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTrace {
    pub active_index: Vec<usize>,
    pub events: Vec<SwitchEvent>,
    pub sample_rate_hz: f64,
    pub num_relays: usize,
}

impl SelectionTrace {
    fn from_active(active_index: Vec<usize>, sample_rate_hz: f64, num_relays: usize) -> Self {
        let events = active_index
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(k, w)| SwitchEvent {
                time_s: (k + 1) as f64 / sample_rate_hz,
                from: w[0],
                to: w[1],
            })
            .collect();
        Self {
            active_index,
            events,
            sample_rate_hz,
            num_relays,
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.active_index.len() as f64 / self.sample_rate_hz
    }

    pub fn switch_times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.time_s).collect()
    }

    /// Dwell times between consecutive switches. The open intervals before
    /// the first and after the last switch are censored and left out.
    pub fn activation_intervals(&self) -> Vec<ActivationInterval> {
        self.events
            .windows(2)
            .map(|w| ActivationInterval {
                relay: w[0].to,
                duration_s: w[1].time_s - w[0].time_s,
            })
            .collect()
    }

    /// Writes `t_s,from_relay,to_relay` with 1-based relay numbers.
    pub fn write_events_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t_s,from_relay,to_relay")?;
        for e in &self.events {
            writeln!(out, "{:e},{},{}", e.time_s, e.from + 1, e.to + 1)?;
        }
        Ok(())
    }
}

fn check_aligned(relays: &[RelayTraces]) -> Result<(usize, f64)> {
    let first = relays
        .first()
        .ok_or_else(|| Error::Config("no relay traces supplied".into()))?;
    let (n, fs) = (first.sr.len(), first.sr.sample_rate_hz());
    for (i, r) in relays.iter().enumerate() {
        for (name, t) in [("SR", &r.sr), ("RD", &r.rd)] {
            if t.len() != n || t.sample_rate_hz() != fs {
                return Err(Error::Config(format!(
                    "trace {name} of relay {} has {} samples at {} Hz, expected {n} at {fs} Hz",
                    i + 1,
                    t.len(),
                    t.sample_rate_hz()
                )));
            }
        }
    }
    if n == 0 {
        return Err(Error::Config("relay traces are empty".into()));
    }
    Ok((n, fs))
}

/// Opportunistic relaying: the relay with the largest metric is active at
/// every sample.
pub fn run_or(relays: &[RelayTraces], metric: SelectionMetric) -> Result<SelectionTrace> {
    if relays.len() < 2 {
        return Err(Error::Config(format!(
            "OR needs at least 2 relays, got {}",
            relays.len()
        )));
    }
    let (n, fs) = check_aligned(relays)?;
    let mut metrics = vec![0.0; relays.len()];
    let mut active = Vec::with_capacity(n);
    for k in 0..n {
        for (m, r) in metrics.iter_mut().zip(relays) {
            *m = r.metric_at(metric, k);
        }
        active.push(or_select(&metrics)?);
    }
    Ok(SelectionTrace::from_active(active, fs, relays.len()))
}

/// DSSC-B over two relays with the min-equivalent metric.
///
/// The rule is evaluated at samples `0, P, 2P, …` (`P = period_samples`);
/// a decision taken at period `j` sets the relay for period `j + 1`.
pub fn run_dssc(
    relays: &[RelayTraces],
    threshold_env: f64,
    period_samples: usize,
) -> Result<SelectionTrace> {
    if relays.len() != 2 {
        return Err(Error::Config(format!(
            "DSSC-B needs exactly 2 relays, got {}",
            relays.len()
        )));
    }
    if period_samples == 0 {
        return Err(Error::Config("decision period must be >= 1 sample".into()));
    }
    if !(threshold_env >= 0.0) {
        return Err(Error::Domain(format!(
            "threshold must be >= 0, got {threshold_env}"
        )));
    }
    let (n, fs) = check_aligned(relays)?;
    let mut state = DsscState::initial();
    let mut active = Vec::with_capacity(n);
    for start in (0..n).step_by(period_samples) {
        let end = (start + period_samples).min(n);
        active.extend(std::iter::repeat_n(state.active, end - start));
        let metrics = [
            relays[0].metric_at(SelectionMetric::MinEquivalent, start),
            relays[1].metric_at(SelectionMetric::MinEquivalent, start),
        ];
        state = dssc_step(state, metrics, threshold_env).0;
    }
    Ok(SelectionTrace::from_active(active, fs, 2))
}

/// Rates and dwell statistics of one selection trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n_switches: usize,
    pub switch_rate_hz: f64,
    /// Mean completed activation interval, or the whole duration when no
    /// interval completed.
    pub mean_activation_s: f64,
    /// True when no activation interval completed.
    pub censored: bool,
    pub n_intervals: usize,
    /// Mean completed interval per relay (`None` if that relay has none).
    pub relay_mean_activation_s: Vec<Option<f64>>,
    /// Fraction of samples each relay is active.
    pub occupancy: Vec<f64>,
}

pub fn summarize(trace: &SelectionTrace, duration_s: f64) -> Result<Summary> {
    if !(duration_s > 0.0) {
        return Err(Error::Domain(format!(
            "duration must be > 0, got {duration_s}"
        )));
    }
    let intervals = trace.activation_intervals();
    let n_switches = trace.events.len();
    let censored = intervals.is_empty();
    let mean_activation_s = if censored {
        duration_s
    } else {
        intervals.iter().map(|i| i.duration_s).sum::<f64>() / intervals.len() as f64
    };

    let mut per_relay = vec![(0.0, 0usize); trace.num_relays];
    for iv in &intervals {
        per_relay[iv.relay].0 += iv.duration_s;
        per_relay[iv.relay].1 += 1;
    }
    let relay_mean_activation_s = per_relay
        .iter()
        .map(|&(sum, n)| (n > 0).then(|| sum / n as f64))
        .collect();

    let mut counts = vec![0usize; trace.num_relays];
    for &a in &trace.active_index {
        counts[a] += 1;
    }
    let total = trace.active_index.len().max(1) as f64;
    let occupancy = counts.iter().map(|&c| c as f64 / total).collect();

    Ok(Summary {
        n_switches,
        switch_rate_hz: n_switches as f64 / duration_s,
        mean_activation_s,
        censored,
        n_intervals: intervals.len(),
        relay_mean_activation_s,
        occupancy,
    })
}
