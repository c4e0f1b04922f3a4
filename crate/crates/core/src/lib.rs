//! Relay switching rate and relay activation time of selective
//! decode-and-forward relaying over time-varying Rayleigh fading.
//!
//! Two selection schemes are covered:
//!
//! * opportunistic relaying (OR): the relay with the best end-to-end metric
//!   is always active;
//! * switch-and-examine combining (DSSC-B): the active relay is kept until
//!   its metric down-crosses a threshold, then the other relay takes over.
//!
//! [`closedform`] holds the analytic rates, [`fading`] and [`protocol`]
//! simulate the schemes, and [`montecarlo`] ties both together into
//! replicated experiments.

pub mod closedform;
pub mod error;
pub mod fading;
pub mod montecarlo;
pub mod protocol;
pub mod quadrature;

pub use closedform::{
    DsscStationary, MinEquivalentParams, RelayLinks, RelayTopology, SwitchThreshold,
};
pub use error::{Error, Result};
pub use fading::{FadingTrace, LinkParams, TraceConfig};
pub use montecarlo::{
    ExperimentConfig, ExperimentReport, Quantity, RateReport, SamplingConfig, Scheme, SweepAxis,
};
pub use protocol::{SelectionMetric, SelectionTrace, Summary};
