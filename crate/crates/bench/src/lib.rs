//! Fixed workloads shared by the criterion benches.

use relay_switching::{
    ExperimentConfig, LinkParams, RelayLinks, RelayTopology, SamplingConfig, SwitchThreshold,
};

/// Two i.i.d. relays, unit power, every hop at `doppler_hz`.
pub fn iid_pair(doppler_hz: f64) -> RelayTopology {
    let hop = LinkParams::new(1.0, doppler_hz).expect("valid hop");
    RelayTopology::identical(2, RelayLinks::new(hop, hop), 1.0).expect("valid topology")
}

/// The default desk-scale OR experiment: 20 × 10 s at 10 Hz.
pub fn or_desk_scale() -> ExperimentConfig {
    ExperimentConfig::or(iid_pair(10.0), SamplingConfig::new(10.0), 20, 1)
}

/// DSSC-B on the same topology at `T / Γ = 1`.
pub fn dssc_desk_scale() -> ExperimentConfig {
    let t = SwitchThreshold::new(1.0).expect("valid threshold");
    ExperimentConfig::dssc(iid_pair(10.0), t, SamplingConfig::new(10.0), 20, 1)
}
