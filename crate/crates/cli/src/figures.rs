//! Data behind the five figures of the numerical study, one CSV per curve.
//!
//! Rates are divided by `π · max(F)` and activation times multiplied by it,
//! which makes every curve independent of the absolute Doppler scale.

use std::f64::consts::PI;

use anyhow::Result;
use relay_switching::closedform::{default_threshold_bounds, worst_case_threshold};
use relay_switching::montecarlo::{analytic_values, run_experiment, with_doppler_ratio};
use relay_switching::{
    ExperimentConfig, LinkParams, RelayLinks, RelayTopology, SamplingConfig, SwitchThreshold,
};

use crate::report::Row;

/// Largest Doppler frequency of every figure scenario, Hz.
pub const F_MAX: f64 = 10.0;
/// Unfaded SNR `Γ` (10 dB) of every figure scenario.
pub const GAMMA: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub struct SimSettings {
    pub simulate: bool,
    pub replications: usize,
    pub duration_s: f64,
    pub seed: u64,
}

pub struct Curve {
    pub file_name: String,
    pub comments: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy)]
enum Pick {
    SwitchRate,
    Relay1Activation,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Two identical relays with `Γ Ω_SR = Γ Ω_RD + sign · 10 dB`.
fn unbalanced(sign: f64, f_sr: f64, f_rd: f64) -> Result<RelayTopology> {
    let relay = RelayLinks::new(
        LinkParams::new(10f64.powf(sign), f_sr)?,
        LinkParams::new(1.0, f_rd)?,
    );
    Ok(RelayTopology::identical(2, relay, GAMMA)?)
}

fn iid(l: usize) -> Result<RelayTopology> {
    let hop = LinkParams::new(1.0, F_MAX)?;
    Ok(RelayTopology::identical(
        l,
        RelayLinks::new(hop, hop),
        GAMMA,
    )?)
}

fn sign_tag(sign: f64) -> &'static str {
    if sign > 0.0 {
        "plus10db"
    } else {
        "minus10db"
    }
}

fn experiment(
    topology: RelayTopology,
    threshold: Option<SwitchThreshold>,
    sim: &SimSettings,
) -> ExperimentConfig {
    let sampling = SamplingConfig::new(sim.duration_s);
    match threshold {
        Some(t) => ExperimentConfig::dssc(topology, t, sampling, sim.replications, sim.seed),
        None => ExperimentConfig::or(topology, sampling, sim.replications, sim.seed),
    }
}

fn point(cfg: &ExperimentConfig, pick: Pick, param: (&str, f64), sim: &SimSettings) -> Result<Row> {
    let scheme = cfg.scheme.name();
    let norm = PI * cfg.topology.max_doppler_hz();
    if sim.simulate {
        let report = run_experiment(cfg)?;
        let (r, k) = match pick {
            Pick::SwitchRate => (&report.switch_rate, 1.0 / norm),
            Pick::Relay1Activation => (&report.relay_activation_time[0], norm),
        };
        return Ok(Row::from_report(scheme, param, r, cfg.base_seed).scaled(k));
    }
    let a = analytic_values(cfg)?;
    let (value, k, label) = match pick {
        Pick::SwitchRate => (a.switch_rate, 1.0 / norm, "switch_rate_hz"),
        Pick::Relay1Activation => (a.relay_activation_time[0], norm, "activation_time_s_relay1"),
    };
    let value = value.ok_or_else(|| anyhow::anyhow!("no closed form for {scheme}"))?;
    Ok(Row::analytic(scheme, label, param, value).scaled(k))
}

fn normalization_comment() -> String {
    format!(
        "normalization: rates divided by pi*max(F), activation times multiplied by pi*max(F); max(F) = {F_MAX:e} Hz"
    )
}

/// OR vs DSSC-B at its worst-case threshold across `F_SR / F_RD`.
fn doppler_ratio_figure(figure: u8, pick: Pick, sim: &SimSettings) -> Result<Vec<Curve>> {
    let mut curves = Vec::new();
    for sign in [1.0, -1.0] {
        let base = unbalanced(sign, F_MAX, F_MAX)?;
        let (mut or_rows, mut dssc_rows) = (Vec::new(), Vec::new());
        for ratio in log_grid(0.1, 10.0, 21) {
            let topo = with_doppler_ratio(&base, ratio, F_MAX)?;
            let t_star = worst_case_threshold(&topo, default_threshold_bounds(&topo))?;
            let param = ("doppler_ratio", ratio);
            or_rows.push(point(
                &experiment(topo.clone(), None, sim),
                pick,
                param,
                sim,
            )?);
            dssc_rows.push(point(
                &experiment(topo, Some(t_star), sim),
                pick,
                param,
                sim,
            )?);
        }
        let comments = vec![
            normalization_comment(),
            format!(
                "L=2, Gamma*Omega_SR = Gamma*Omega_RD {} 10 dB, DSSC-B at the worst-case threshold",
                if sign > 0.0 { "+" } else { "-" }
            ),
        ];
        for (scheme, rows) in [("or", or_rows), ("dssc", dssc_rows)] {
            curves.push(Curve {
                file_name: format!("fig{figure}_{scheme}_{}.csv", sign_tag(sign)),
                comments: comments.clone(),
                rows,
            });
        }
    }
    Ok(curves)
}

/// OR with `L = 2..10` i.i.d. relays.
fn relay_count_figure(figure: u8, pick: Pick, sim: &SimSettings) -> Result<Vec<Curve>> {
    let rows = (2..=10)
        .map(|l| point(&experiment(iid(l)?, None, sim), pick, ("L", l as f64), sim))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![Curve {
        file_name: format!("fig{figure}_or.csv"),
        comments: vec![
            normalization_comment(),
            "i.i.d. hops, equal Doppler frequencies".into(),
        ],
        rows,
    }])
}

/// OR and DSSC-B versus the threshold with `F_SR = 2 F_RD`.
fn threshold_figure(sim: &SimSettings) -> Result<Vec<Curve>> {
    let mut curves = Vec::new();
    for sign in [1.0, -1.0] {
        let topo = unbalanced(sign, F_MAX, F_MAX / 2.0)?;
        let omega = topo.relay(0)?.min_equivalent().omega;
        let (mut or_rows, mut dssc_rows) = (Vec::new(), Vec::new());
        for t in log_grid(1e-2 * GAMMA * omega, 1e1 * GAMMA * omega, 20) {
            let param = ("threshold", t);
            let threshold = SwitchThreshold::new(t)?;
            or_rows.push(point(
                &experiment(topo.clone(), None, sim),
                Pick::SwitchRate,
                param,
                sim,
            )?);
            dssc_rows.push(point(
                &experiment(topo.clone(), Some(threshold), sim),
                Pick::SwitchRate,
                param,
                sim,
            )?);
        }
        let comments = vec![
            normalization_comment(),
            format!(
                "L=2, F_SR = 2 F_RD, Gamma*Omega_SR = Gamma*Omega_RD {} 10 dB, threshold T linear",
                if sign > 0.0 { "+" } else { "-" }
            ),
        ];
        for (scheme, rows) in [("or", or_rows), ("dssc", dssc_rows)] {
            curves.push(Curve {
                file_name: format!("fig5_{scheme}_{}.csv", sign_tag(sign)),
                comments: comments.clone(),
                rows,
            });
        }
    }
    Ok(curves)
}

pub fn figure(n: u8, sim: &SimSettings) -> Result<Vec<Curve>> {
    match n {
        1 => doppler_ratio_figure(1, Pick::SwitchRate, sim),
        2 => relay_count_figure(2, Pick::SwitchRate, sim),
        3 => doppler_ratio_figure(3, Pick::Relay1Activation, sim),
        4 => relay_count_figure(4, Pick::Relay1Activation, sim),
        5 => threshold_figure(sim),
        _ => anyhow::bail!(crate::config::ConfigError(format!(
            "unknown figure {n}; expected 1-5"
        ))),
    }
}
