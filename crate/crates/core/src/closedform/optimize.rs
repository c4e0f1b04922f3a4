use super::dssc::dssc_switch_rate;
use super::{RelayTopology, SwitchThreshold};
use crate::error::{Error, Result};

const GRID_POINTS: usize = 400;
const ARG_REL_TOL: f64 = 1e-10;
const MAX_ITER: usize = 500;

/// `1 / φ`, the golden-section contraction factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `rel_tol * |x|` (or `rel_tol`
/// near zero). Returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iter {
        if (b - a).abs() <= rel_tol * (0.5 * (a + b)).abs().max(1.0e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Search bounds spanning the region where `SR_DSSC(T)` is not negligible.
pub fn default_threshold_bounds(topology: &RelayTopology) -> (f64, f64) {
    let omegas = topology.relays().iter().map(|r| r.min_equivalent().omega);
    let lo = omegas.clone().fold(f64::INFINITY, f64::min);
    let hi = omegas.fold(0.0, f64::max);
    let g = topology.gamma();
    (1e-4 * g * lo, 1e2 * g * hi)
}

/// Threshold `T*` that maximizes the two-relay DSSC-B switching rate on
/// `[lo, hi]`.
///
/// A log-spaced grid locates the peak, then golden-section search refines
/// it inside the neighbouring grid cells.
pub fn worst_case_threshold(
    topology: &RelayTopology,
    bounds: (f64, f64),
) -> Result<SwitchThreshold> {
    topology.require_two()?;
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "threshold bounds must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let rate = |t: f64| {
        SwitchThreshold::new(t)
            .and_then(|t| dssc_switch_rate(topology, t))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let step = (hi / lo).ln() / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|k| (lo.ln() + step * k as f64).exp().clamp(lo, hi))
        .collect();
    let best = grid
        .iter()
        .enumerate()
        .map(|(k, &t)| (k, rate(t)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(k, _)| k)
        .expect("grid is non-empty");
    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(GRID_POINTS - 1)];
    let (t_star, _) = golden_section_max(rate, left, right, ARG_REL_TOL, MAX_ITER);
    SwitchThreshold::new(t_star)
}
