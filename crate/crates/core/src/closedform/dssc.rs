//! DSSC-B: switch away from the active relay only when its min-equivalent
//! envelope down-crosses `sqrt(T / Γ)`.

use std::f64::consts::PI;

use super::{DsscStationary, RelayLinks, RelayTopology, SwitchThreshold};
use crate::error::Result;

// Beyond this exponent the direct form overflows; switch to log space.
const LOG_SPACE_EXPONENT: f64 = 700.0;

/// `u_i = T / (Γ Ω_i)` for both relays.
fn exponents(r1: &RelayLinks, r2: &RelayLinks, gamma: f64, t: f64) -> (f64, f64) {
    (
        t / (gamma * r1.min_equivalent().omega),
        t / (gamma * r2.min_equivalent().omega),
    )
}

/// `q_i = F_{a_i²}(T / Γ) = 1 − exp(−T / (Γ Ω_i))` for a two-relay topology.
pub fn threshold_cdfs(topology: &RelayTopology, threshold: SwitchThreshold) -> Result<(f64, f64)> {
    let (r1, r2) = topology.require_two()?;
    let (u1, u2) = exponents(r1, r2, topology.gamma(), threshold.value());
    Ok((-(-u1).exp_m1(), -(-u2).exp_m1()))
}

/// `sqrt(T/(Γ Ω_SR)) F_SR + sqrt(T/(Γ Ω_RD)) F_RD`.
fn slope_term(r: &RelayLinks, gamma: f64, t: f64) -> f64 {
    (t / (gamma * r.sr.omega())).sqrt() * r.sr.doppler_hz()
        + (t / (gamma * r.rd.omega())).sqrt() * r.rd.doppler_hz()
}

/// Down-crossing rate `N_i(T)` of relay `index`'s min-equivalent envelope
/// at `sqrt(T / Γ)`. Works for any relay count.
pub fn dssc_crossing_rate(
    index: usize,
    topology: &RelayTopology,
    threshold: SwitchThreshold,
) -> Result<f64> {
    let r = topology.relay(index)?;
    let t = threshold.value();
    let gamma = topology.gamma();
    let u = t / (gamma * r.min_equivalent().omega);
    Ok((2.0 * PI).sqrt() * slope_term(r, gamma, t) * (-u).exp())
}

/// Relay activation probabilities `(ρ_1, ρ_2)` from the closed forms
/// expressed through `F_{a_i²}(T/Γ)`.
///
/// At `T = 0` the chain never moves and the ratio is 0/0; the returned
/// value is the right limit `ρ_i = Ω_i / (Ω_1 + Ω_2)`.
pub fn dssc_activation_probabilities(
    topology: &RelayTopology,
    threshold: SwitchThreshold,
) -> Result<(f64, f64)> {
    let (r1, r2) = topology.require_two()?;
    let (w1, w2) = (r1.min_equivalent().omega, r2.min_equivalent().omega);
    if threshold.value() == 0.0 {
        return Ok((w1 / (w1 + w2), w2 / (w1 + w2)));
    }
    let (u1, u2) = exponents(r1, r2, topology.gamma(), threshold.value());
    let rho1 = rho_closed_form(u1, u2);
    let rho2 = rho_closed_form(u2, u1);
    Ok((rho1, rho2))
}

/// `F_2(F_2−1)(1−F_1+F_1²) / [F_1(F_1−1)(1−2F_2+2F_2²) + F_2(F_2−1)]`,
/// divided through by `1 − F_2` so it stays finite as both CDFs approach 1.
fn rho_closed_form(u_own: f64, u_other: f64) -> f64 {
    let q_own = -(-u_own).exp_m1();
    let q_other = -(-u_other).exp_m1();
    let keep = 1.0 - q_own + q_own * q_own;
    let leave = 1.0 - 2.0 * q_other + 2.0 * q_other * q_other;
    // (1 − q_own) / (1 − q_other)
    let ratio = (u_other - u_own).exp();
    q_other * keep / (q_own * leave * ratio + q_other)
}

/// Explicit one-step transition matrix of the six-state DSSC-B chain for
/// independent per-period samples, `P[from][to]`.
///
/// Per relay the states are: 0 = down-crossed (previous sample above,
/// current below, so the next period switches), 1 = below without a
/// crossing, 2 = above. On a switch the incoming relay's previous and
/// current samples are both fresh.
pub fn dssc_transition_matrix(q1: f64, q2: f64) -> [[f64; 6]; 6] {
    let mut p = [[0.0; 6]; 6];
    for (own, (q, q_other)) in [(q1, q2), (q2, q1)].into_iter().enumerate() {
        let s = 3 * own;
        let o = 3 - s;
        p[s][o] = (1.0 - q_other) * q_other;
        p[s][o + 1] = q_other * q_other;
        p[s][o + 2] = 1.0 - q_other;
        p[s + 1][s + 1] = q;
        p[s + 1][s + 2] = 1.0 - q;
        p[s + 2][s] = q;
        p[s + 2][s + 2] = 1.0 - q;
    }
    p
}

/// Closed-form stationary law of [`dssc_transition_matrix`].
///
/// With `e_i = 1 − q_i` and
/// `D = q_1 e_1 (1 − q_2 e_2) + q_2 e_2 (1 − q_1 e_1)`:
///
/// ```text
/// π_1 = π_4 = q_1 e_1 q_2 e_2 / D
/// π_2 = q_1³ q_2 e_2 / D          π_5 = q_2³ q_1 e_1 / D
/// π_3 = e_1 (1 − q_1 e_1) q_2 e_2 / D
/// π_6 = e_2 (1 − q_2 e_2) q_1 e_1 / D
/// ```
///
/// `T = 0` and very large `T` return the corresponding limits.
pub fn dssc_stationary(
    topology: &RelayTopology,
    threshold: SwitchThreshold,
) -> Result<DsscStationary> {
    let (r1, r2) = topology.require_two()?;
    let (w1, w2) = (r1.min_equivalent().omega, r2.min_equivalent().omega);
    let t = threshold.value();
    let pi = if t == 0.0 {
        let rho1 = w1 / (w1 + w2);
        [0.0, 0.0, rho1, 0.0, 0.0, 1.0 - rho1]
    } else {
        let (u1, u2) = exponents(r1, r2, topology.gamma(), t);
        let u_min = u1.min(u2);
        if u_min > LOG_SPACE_EXPONENT {
            // Every e_i underflows: all mass sits in the "below" states.
            let e1 = (u_min - u1).exp();
            let e2 = (u_min - u2).exp();
            [0.0, e2 / (e1 + e2), 0.0, 0.0, e1 / (e1 + e2), 0.0]
        } else {
            let (q1, q2) = (-(-u1).exp_m1(), -(-u2).exp_m1());
            let (e1, e2) = ((-u1).exp(), (-u2).exp());
            let (m1, m2) = (q1 * e1, q2 * e2);
            let d = m1 * (1.0 - m2) + m2 * (1.0 - m1);
            [
                m1 * m2 / d,
                q1.powi(3) * m2 / d,
                e1 * (1.0 - m1) * m2 / d,
                m1 * m2 / d,
                q2.powi(3) * m1 / d,
                e2 * (1.0 - m2) * m1 / d,
            ]
        }
    };
    Ok(DsscStationary {
        pi,
        rho1: pi[0] + pi[1] + pi[2],
        rho2: pi[3] + pi[4] + pi[5],
    })
}

/// Two-relay DSSC-B switching rate in expanded form.
///
/// With `α = e^{u_1} − 1`, `β = e^{u_2} − 1` and `S_i` the slope terms of
/// `N_i`, the expanded expression regroups exactly into
///
/// ```text
/// sqrt(2π) [e^{−u_1} β S_1 + e^{−u_2} α S_2 + αβ (S_1 + S_2)]
///     / (αβ(α + β + 2) + α + β)
/// ```
///
/// whose denominator has no cancellation. Large exponents are handled in
/// log space; `T = 0` gives 0.
pub fn dssc_switch_rate(topology: &RelayTopology, threshold: SwitchThreshold) -> Result<f64> {
    let (r1, r2) = topology.require_two()?;
    let t = threshold.value();
    if t == 0.0 {
        return Ok(0.0);
    }
    let gamma = topology.gamma();
    let (u1, u2) = exponents(r1, r2, gamma, t);
    let (s1, s2) = (slope_term(r1, gamma, t), slope_term(r2, gamma, t));
    let root = (2.0 * PI).sqrt();

    // The largest denominator term grows like exp(u1 + u2 + max(u1, u2)).
    if u1 + u2 + u1.max(u2) <= LOG_SPACE_EXPONENT {
        let (a, b) = (u1.exp_m1(), u2.exp_m1());
        let num = (-u1).exp() * b * s1 + (-u2).exp() * a * s2 + a * b * (s1 + s2);
        let den = a * b * (a + b + 2.0) + a + b;
        return Ok(root * num / den);
    }

    let ln_a = ln_expm1(u1);
    let ln_b = ln_expm1(u2);
    let ln_den = log_sum_exp(&[
        ln_a + ln_b + log_sum_exp(&[ln_a, ln_b, 2f64.ln()]),
        log_sum_exp(&[ln_a, ln_b]),
    ]);
    let ln_num = log_sum_exp(&[
        -u1 + ln_b + s1.ln(),
        -u2 + ln_a + s2.ln(),
        ln_a + ln_b + (s1 + s2).ln(),
    ]);
    Ok(root * (ln_num - ln_den).exp())
}

fn ln_expm1(u: f64) -> f64 {
    if u > 30.0 {
        u + (-(-u).exp()).ln_1p()
    } else {
        u.exp_m1().ln()
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ρ_1 N_1(T) + ρ_2 N_2(T)`.
pub fn dssc_switch_rate_composed(
    topology: &RelayTopology,
    threshold: SwitchThreshold,
) -> Result<f64> {
    let (rho1, rho2) = dssc_activation_probabilities(topology, threshold)?;
    Ok(rho1 * dssc_crossing_rate(0, topology, threshold)?
        + rho2 * dssc_crossing_rate(1, topology, threshold)?)
}

/// Mean activation time `2 ρ_i / SR_DSSC` of relay `index` (0 or 1).
///
/// Returns `f64::INFINITY` when the switching rate is zero (e.g. `T = 0`):
/// the active relay is never released.
pub fn dssc_activation_time(
    index: usize,
    topology: &RelayTopology,
    threshold: SwitchThreshold,
) -> Result<f64> {
    topology.require_two()?;
    topology.relay(index)?;
    let rate = dssc_switch_rate(topology, threshold)?;
    if rate <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let (rho1, rho2) = dssc_activation_probabilities(topology, threshold)?;
    let rho = if index == 0 { rho1 } else { rho2 };
    Ok(2.0 * rho / rate)
}
