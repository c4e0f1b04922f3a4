use std::f64::consts::PI;

use super::{MinEquivalentParams, RelayLinks, RelayTopology};
use crate::error::{Error, Result};
use crate::fading::LinkParams;

/// `Ω_i = Ω_SR Ω_RD / (Ω_SR + Ω_RD)`.
pub fn omega_min(sr: &LinkParams, rd: &LinkParams) -> MinEquivalentParams {
    let (a, b) = (sr.omega(), rd.omega());
    MinEquivalentParams {
        omega: a * b / (a + b),
    }
}

fn check_nonnegative(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "envelope value must be >= 0, got {x}"
        )))
    }
}

/// Density of `min(a_SR, a_RD)`: Rayleigh with parameter `Ω_i`.
pub fn min_equiv_pdf(x: f64, sr: &LinkParams, rd: &LinkParams) -> Result<f64> {
    check_nonnegative(x)?;
    let k = 1.0 / sr.omega() + 1.0 / rd.omega();
    Ok(2.0 * x * k * (-k * x * x).exp())
}

pub fn min_equiv_cdf(x: f64, sr: &LinkParams, rd: &LinkParams) -> Result<f64> {
    check_nonnegative(x)?;
    let k = 1.0 / sr.omega() + 1.0 / rd.omega();
    Ok(-(-k * x * x).exp_m1())
}

/// Density of `Z = a_1 − a_2` at zero, `sqrt(π Ω_1 Ω_2) / (Ω_1 + Ω_2)^{3/2}`.
pub fn f_z_at_zero(p1: MinEquivalentParams, p2: MinEquivalentParams) -> f64 {
    let (a, b) = (p1.omega, p2.omega);
    (PI * a * b).sqrt() / (a + b).powf(1.5)
}

/// Density at zero of `a_i − max_{j≠i} a_j` for `l` i.i.d. virtual channels
/// with average squared value `omega`.
pub fn f_z_at_zero_iid(l: usize, omega: f64) -> Result<f64> {
    let sum = super::or::alternating_sum(l)?;
    Ok((l - 1) as f64 * PI.sqrt() / omega.sqrt() * sum)
}

/// The four Gaussian components of `Ż = ȧ_1 − ȧ_2`: `(weight, s)` with the
/// component variance equal to `π² s`.
fn velocity_components(r1: &RelayLinks, r2: &RelayLinks) -> [(f64, f64); 4] {
    let spread = |h: &LinkParams| h.omega() * h.doppler_hz().powi(2);
    let norm = (r1.sr.omega() + r1.rd.omega()) * (r2.sr.omega() + r2.rd.omega());
    [
        (
            r1.sr.omega() * r2.sr.omega() / norm,
            spread(&r1.rd) + spread(&r2.rd),
        ),
        (
            r1.rd.omega() * r2.sr.omega() / norm,
            spread(&r1.sr) + spread(&r2.rd),
        ),
        (
            r2.rd.omega() * r1.sr.omega() / norm,
            spread(&r2.sr) + spread(&r1.rd),
        ),
        (
            r1.rd.omega() * r2.rd.omega() / norm,
            spread(&r1.sr) + spread(&r2.sr),
        ),
    ]
}

/// Density of `Ż(t)` for a two-relay topology: a four-term zero-mean
/// Gaussian mixture.
pub fn zdot_pdf(x: f64, topology: &RelayTopology) -> Result<f64> {
    let (r1, r2) = topology.require_two()?;
    let c = 1.0 / (2.0f64.sqrt() * PI.powf(1.5));
    Ok(velocity_components(r1, r2)
        .iter()
        .map(|&(w, s)| c * w * (-x * x / (2.0 * PI * PI * s)).exp() / s.sqrt())
        .sum())
}

/// `Ż` density for i.i.d. virtual channels (`omega` per virtual channel,
/// common Doppler `doppler_hz`): a single Gaussian of variance `4π²F²Ω`.
pub fn zdot_pdf_iid(x: f64, omega: f64, doppler_hz: f64) -> f64 {
    (-x * x / (8.0 * PI * PI * doppler_hz * doppler_hz * omega)).exp()
        / ((2.0 * PI).powf(1.5) * doppler_hz * omega.sqrt())
}

/// `∫_0^∞ ż f_Ż(ż) dż` in closed form.
pub fn velocity_integral(topology: &RelayTopology) -> Result<f64> {
    let (r1, r2) = topology.require_two()?;
    let c = PI.sqrt() / 2.0f64.sqrt();
    Ok(velocity_components(r1, r2)
        .iter()
        .map(|&(w, s)| c * w * s.sqrt())
        .sum())
}
