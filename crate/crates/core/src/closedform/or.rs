use std::f64::consts::PI;

use super::densities::{f_z_at_zero, velocity_integral};
use super::{MinEquivalentParams, RelayTopology};
use crate::error::{Error, Result};

/// Largest relay count for the i.i.d. L-relay formula. The alternating
/// binomial sum loses all significant digits beyond this.
pub const MAX_IID_RELAYS: usize = 30;

/// Two-relay OR switching rate for i.n.i.d. hops, evaluated term by term.
pub fn or_switch_rate_inid_2(topology: &RelayTopology) -> Result<f64> {
    let (r1, r2) = topology.require_two()?;
    let (sr1, rd1, sr2, rd2) = (r1.sr, r1.rd, r2.sr, r2.rd);
    let w1 = r1.min_equivalent().omega;
    let w2 = r2.min_equivalent().omega;
    let g = |a: &crate::fading::LinkParams, b: &crate::fading::LinkParams| {
        (a.omega() * a.doppler_hz().powi(2) + b.omega() * b.doppler_hz().powi(2)).sqrt()
    };
    let bracket = sr1.omega() * sr2.omega() * g(&rd1, &rd2)
        + rd1.omega() * sr2.omega() * g(&sr1, &rd2)
        + rd2.omega() * sr1.omega() * g(&sr2, &rd1)
        + rd1.omega() * rd2.omega() * g(&sr1, &sr2);
    let denom = (w1 + w2).powf(1.5) * (sr1.omega() + rd1.omega()) * (sr2.omega() + rd2.omega());
    Ok(PI * (2.0 * w1 * w2).sqrt() * bracket / denom)
}

/// Same rate assembled as `2 f_Z(0) ∫_0^∞ ż f_Ż(ż) dż`.
pub fn or_switch_rate_inid_2_composed(topology: &RelayTopology) -> Result<f64> {
    let (r1, r2) = topology.require_two()?;
    let fz = f_z_at_zero(r1.min_equivalent(), r2.min_equivalent());
    Ok(2.0 * fz * velocity_integral(topology)?)
}

/// Two-relay OR rate for i.i.d. amplitudes; depends only on the four
/// Doppler frequencies.
pub fn or_switch_rate_iid_2(f_sr1: f64, f_r1d: f64, f_sr2: f64, f_r2d: f64) -> Result<f64> {
    for f in [f_sr1, f_r1d, f_sr2, f_r2d] {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::Domain(format!(
                "Doppler frequencies must be > 0, got {f}"
            )));
        }
    }
    let h = |a: f64, b: f64| a.hypot(b);
    let sum = h(f_sr1, f_sr2) + h(f_sr1, f_r2d) + h(f_r1d, f_sr2) + h(f_r1d, f_r2d);
    Ok(PI * sum / (4.0 * 2.0f64.sqrt()))
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
}

/// `Σ_{l=0}^{L−2} (−1)^l C(L−2, l) (l+2)^{−3/2}`.
pub(super) fn alternating_sum(l: usize) -> Result<f64> {
    if l < 2 {
        return Err(Error::Domain(format!("need at least 2 relays, got {l}")));
    }
    if l > MAX_IID_RELAYS {
        return Err(Error::Domain(format!(
            "relay count {l} exceeds {MAX_IID_RELAYS}; the alternating sum is ill-conditioned"
        )));
    }
    let n = l - 2;
    Ok((0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, k) as f64 * ((k + 2) as f64).powf(-1.5)
        })
        .sum())
}

fn check_doppler(f: f64) -> Result<()> {
    if f.is_finite() && f > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Doppler frequency must be > 0, got {f}"
        )))
    }
}

/// OR switching rate with `l` relays, all hops i.i.d. with Doppler `f`.
pub fn or_switch_rate_iid_l(l: usize, f: f64) -> Result<f64> {
    check_doppler(f)?;
    let sum = alternating_sum(l)?;
    Ok(2.0f64.sqrt() * (l * (l - 1)) as f64 * PI * f * sum)
}

/// `L f_Z(0) ∫_0^∞ ż f_Ż(ż) dż` from the order-statistic density at zero
/// and the single-Gaussian velocity law. Independent of Ω; evaluated at
/// unit virtual-channel power.
pub fn or_switch_rate_iid_l_composed(l: usize, f: f64) -> Result<f64> {
    check_doppler(f)?;
    let omega = 1.0;
    let fz = super::densities::f_z_at_zero_iid(l, omega)?;
    let sigma = 2.0 * PI * f * omega.sqrt();
    Ok(l as f64 * fz * sigma / (2.0 * PI).sqrt())
}

/// Mean activation time of each relay, `2 Ω_i / (SR (Ω_1 + Ω_2))`.
pub fn or_activation_time_inid_2(topology: &RelayTopology) -> Result<[f64; 2]> {
    let (r1, r2) = topology.require_two()?;
    let rate = or_switch_rate_inid_2(topology)?;
    let (rho1, rho2) = steady_state_or(r1.min_equivalent(), r2.min_equivalent());
    Ok([2.0 * rho1 / rate, 2.0 * rho2 / rate])
}

pub fn or_activation_time_iid_l(l: usize, f: f64) -> Result<f64> {
    Ok(1.0 / or_switch_rate_iid_l(l, f)?)
}

/// Probability that each relay is selected, `Ω_i / (Ω_1 + Ω_2)`.
pub fn steady_state_or(p1: MinEquivalentParams, p2: MinEquivalentParams) -> (f64, f64) {
    let total = p1.omega + p2.omega;
    (p1.omega / total, p2.omega / total)
}
