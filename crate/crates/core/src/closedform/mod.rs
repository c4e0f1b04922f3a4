//! Analytic switching rates, activation times and steady-state
//! probabilities for opportunistic relaying (OR) and DSSC-B.
//!
//! Every expression here works on the min-equivalent virtual channel
//! `a_i = min(a_SRi, a_RiD)`, which is itself Rayleigh with
//! `Ω_i = Ω_SR Ω_RD / (Ω_SR + Ω_RD)`.

mod densities;
mod dssc;
mod optimize;
mod or;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::LinkParams;

pub use densities::{
    f_z_at_zero, f_z_at_zero_iid, min_equiv_cdf, min_equiv_pdf, omega_min, velocity_integral,
    zdot_pdf, zdot_pdf_iid,
};
pub use dssc::{
    dssc_activation_probabilities, dssc_activation_time, dssc_crossing_rate, dssc_stationary,
    dssc_switch_rate, dssc_switch_rate_composed, dssc_transition_matrix, threshold_cdfs,
};
pub use optimize::{default_threshold_bounds, golden_section_max, worst_case_threshold};
pub use or::{
    or_activation_time_iid_l, or_activation_time_inid_2, or_switch_rate_iid_2,
    or_switch_rate_iid_l, or_switch_rate_iid_l_composed, or_switch_rate_inid_2,
    or_switch_rate_inid_2_composed, steady_state_or, MAX_IID_RELAYS,
};

/// The two hops of one relay path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayLinks {
    /// Source → relay.
    pub sr: LinkParams,
    /// Relay → destination.
    pub rd: LinkParams,
}

impl RelayLinks {
    pub fn new(sr: LinkParams, rd: LinkParams) -> Self {
        Self { sr, rd }
    }

    pub fn min_equivalent(&self) -> MinEquivalentParams {
        omega_min(&self.sr, &self.rd)
    }
}

/// `L >= 2` relay paths sharing the unfaded SNR `Γ = P_T / N_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTopology")]
pub struct RelayTopology {
    relays: Vec<RelayLinks>,
    gamma: f64,
}

#[derive(Deserialize)]
struct RawTopology {
    relays: Vec<RelayLinks>,
    gamma: f64,
}

impl TryFrom<RawTopology> for RelayTopology {
    type Error = Error;

    fn try_from(raw: RawTopology) -> Result<Self> {
        RelayTopology::new(raw.relays, raw.gamma)
    }
}

impl RelayTopology {
    pub fn new(relays: Vec<RelayLinks>, gamma: f64) -> Result<Self> {
        if relays.len() < 2 {
            return Err(Error::Config(format!(
                "a topology needs at least 2 relays, got {}",
                relays.len()
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Config(format!(
                "gamma must be finite and > 0, got {gamma}"
            )));
        }
        Ok(Self { relays, gamma })
    }

    /// `count` copies of the same relay path.
    pub fn identical(count: usize, links: RelayLinks, gamma: f64) -> Result<Self> {
        Self::new(vec![links; count], gamma)
    }

    pub fn relays(&self) -> &[RelayLinks] {
        &self.relays
    }

    pub fn relay(&self, index: usize) -> Result<&RelayLinks> {
        self.relays.get(index).ok_or_else(|| {
            Error::Domain(format!(
                "relay index {index} out of range for {} relays",
                self.relays.len()
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.relays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relays.is_empty()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.relays.clone(), gamma)
    }

    pub fn max_doppler_hz(&self) -> f64 {
        self.relays
            .iter()
            .flat_map(|r| [r.sr.doppler_hz(), r.rd.doppler_hz()])
            .fold(0.0, f64::max)
    }

    /// True when every hop has the same Ω and the same Doppler frequency.
    pub fn is_iid(&self) -> bool {
        let first = self.relays[0].sr;
        self.relays
            .iter()
            .flat_map(|r| [r.sr, r.rd])
            .all(|h| h == first)
    }

    pub(crate) fn require_two(&self) -> Result<(&RelayLinks, &RelayLinks)> {
        match self.relays.as_slice() {
            [r1, r2] => Ok((r1, r2)),
            _ => Err(Error::UnsupportedTopology {
                required: 2,
                got: self.relays.len(),
            }),
        }
    }
}

/// Average squared value `Ω_i` of a min-equivalent virtual channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinEquivalentParams {
    pub omega: f64,
}

impl MinEquivalentParams {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain(format!("omega must be > 0, got {omega}")));
        }
        Ok(Self { omega })
    }
}

/// DSSC-B switching threshold `T` on the SNR scale, linear.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SwitchThreshold(f64);

impl SwitchThreshold {
    pub fn new(t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!(
                "switching threshold must be finite and >= 0, got {t}"
            )));
        }
        Ok(Self(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Envelope-domain threshold `sqrt(T / Γ)`.
    pub fn envelope_level(self, gamma: f64) -> f64 {
        (self.0 / gamma).sqrt()
    }
}

impl TryFrom<f64> for SwitchThreshold {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        Self::new(t)
    }
}

impl From<SwitchThreshold> for f64 {
    fn from(t: SwitchThreshold) -> f64 {
        t.0
    }
}

/// Stationary law of the six-state DSSC-B chain.
///
/// States 1–3 have relay 1 active (just down-crossed / below / above the
/// threshold), states 4–6 are the same for relay 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DsscStationary {
    pub pi: [f64; 6],
    pub rho1: f64,
    pub rho2: f64,
}
