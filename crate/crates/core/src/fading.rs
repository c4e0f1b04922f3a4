//! Time-varying Rayleigh fading envelopes.
//!
//! Each hop is simulated with the improved sum-of-sinusoids Clarke model:
//!
//! ```text
//! I(t) = sqrt(Ω/N) Σ cos(2π F t cos α_n + φ_n)
//! Q(t) = sqrt(Ω/N) Σ cos(2π F t sin α_n + ψ_n)
//! α_n  = (2πn − π + θ) / (4N),   n = 1..N
//! ```
//!
//! with θ, φ_n, ψ_n drawn once per seed, uniform on [−π, π). The envelope
//! `a(t) = |I + jQ|` is Rayleigh with `E[a²] = Ω`, and its derivative is
//! zero-mean Gaussian with standard deviation `π F sqrt(Ω)`. Only the envelope
//! is stored.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator used for every random draw in the crate. Pinned so that traces
/// stay reproducible across versions.
pub const RNG_ALGORITHM: &str = "ChaCha20Rng (rand_chacha 0.3, seed_from_u64)";

/// Minimum samples per second, per hertz of Doppler spread.
pub const MIN_SAMPLES_PER_DOPPLER: f64 = 32.0;
/// Default samples per second, per hertz of the largest Doppler spread.
pub const DEFAULT_SAMPLES_PER_DOPPLER: f64 = 64.0;
pub const DEFAULT_NUM_SINUSOIDS: usize = 64;
pub const MIN_NUM_SINUSOIDS: usize = 8;
/// Shortest trace accepted by [`validate_rayleigh`].
pub const MIN_VALIDATION_SAMPLES: usize = 100_000;

// Oscillators are advanced by complex rotation and re-anchored to the exact
// phase at this stride.
const RESYNC_STRIDE: usize = 1024;

/// One wireless hop: average squared gain and maximum Doppler frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLinkParams")]
pub struct LinkParams {
    omega: f64,
    doppler_hz: f64,
}

#[derive(Deserialize)]
struct RawLinkParams {
    omega: f64,
    doppler_hz: f64,
}

impl TryFrom<RawLinkParams> for LinkParams {
    type Error = Error;

    fn try_from(raw: RawLinkParams) -> Result<Self> {
        LinkParams::new(raw.omega, raw.doppler_hz)
    }
}

impl LinkParams {
    pub fn new(omega: f64, doppler_hz: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Config(format!(
                "average squared gain must be finite and > 0, got {omega}"
            )));
        }
        if !(doppler_hz.is_finite() && doppler_hz > 0.0) {
            return Err(Error::Config(format!(
                "Doppler frequency must be finite and > 0, got {doppler_hz}"
            )));
        }
        Ok(Self { omega, doppler_hz })
    }

    /// Average squared channel gain `E[a²]`, linear.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Maximum Doppler frequency in Hz.
    pub fn doppler_hz(&self) -> f64 {
        self.doppler_hz
    }

    /// Standard deviation of the envelope derivative, `π F sqrt(Ω)`.
    pub fn derivative_std(&self) -> f64 {
        PI * self.doppler_hz * self.omega.sqrt()
    }
}

/// Sampling and synthesis settings for one trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    /// Oscillators per quadrature component.
    pub num_sinusoids: usize,
    pub seed: u64,
}

impl TraceConfig {
    /// Config sampled at the default `64 x doppler_hz` rate.
    pub fn for_doppler(doppler_hz: f64, duration_s: f64, seed: u64) -> Self {
        Self {
            sample_rate_hz: DEFAULT_SAMPLES_PER_DOPPLER * doppler_hz,
            duration_s,
            num_sinusoids: DEFAULT_NUM_SINUSOIDS,
            seed,
        }
    }

    pub fn num_samples(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(Error::Config(format!(
                "sample_rate_hz must be finite and > 0, got {}",
                self.sample_rate_hz
            )));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::Config(format!(
                "duration_s must be finite and > 0, got {}",
                self.duration_s
            )));
        }
        if self.num_sinusoids < MIN_NUM_SINUSOIDS {
            return Err(Error::Config(format!(
                "num_sinusoids must be >= {MIN_NUM_SINUSOIDS}, got {}",
                self.num_sinusoids
            )));
        }
        if self.num_samples() < 2 {
            return Err(Error::Config(
                "trace must contain at least two samples".to_string(),
            ));
        }
        Ok(())
    }

    /// Checks the sampling rule for one hop; `hop` names it in the error.
    pub fn check_resolution(&self, hop: &str, params: &LinkParams) -> Result<()> {
        if self.sample_rate_hz < MIN_SAMPLES_PER_DOPPLER * params.doppler_hz {
            return Err(Error::Resolution {
                hop: hop.to_string(),
                sample_rate_hz: self.sample_rate_hz,
                doppler_hz: params.doppler_hz,
                min_ratio: MIN_SAMPLES_PER_DOPPLER,
            });
        }
        Ok(())
    }
}

/// Uniformly sampled envelope `a(t_k)`, `t_k = k / sample_rate_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingTrace {
    pub params: LinkParams,
    pub config: TraceConfig,
    pub samples: Vec<f64>,
}

impl FadingTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.config.sample_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.config.sample_rate_hz
    }

    pub fn mean_square(&self) -> f64 {
        mean_square(&self.samples)
    }

    /// Writes `t_s,envelope`, one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t_s,envelope")?;
        let fs = self.config.sample_rate_hz;
        for (k, a) in self.samples.iter().enumerate() {
            writeln!(out, "{:e},{:e}", k as f64 / fs, a)?;
        }
        Ok(())
    }
}

/// Synthesizes a Rayleigh envelope with Clarke Doppler dynamics.
///
/// Pure function of `(params, config)`: the same inputs always produce a
/// bit-identical trace.
pub fn generate_trace(params: LinkParams, config: TraceConfig) -> Result<FadingTrace> {
    config.validate()?;
    config.check_resolution(
        &format!("omega={}, doppler_hz={}", params.omega, params.doppler_hz),
        &params,
    )?;

    let n = config.num_samples();
    let osc = config.num_sinusoids;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let theta = uniform_phase(&mut rng);
    let mut in_phase = Vec::with_capacity(osc);
    let mut quadrature = Vec::with_capacity(osc);
    let w = 2.0 * PI * params.doppler_hz / config.sample_rate_hz;
    for k in 1..=osc {
        let alpha = (2.0 * PI * k as f64 - PI + theta) / (4.0 * osc as f64);
        let phi = uniform_phase(&mut rng);
        let psi = uniform_phase(&mut rng);
        in_phase.push((w * alpha.cos(), phi));
        quadrature.push((w * alpha.sin(), psi));
    }

    let mut i_sum = vec![0.0; n];
    let mut q_sum = vec![0.0; n];
    accumulate(&in_phase, &mut i_sum);
    accumulate(&quadrature, &mut q_sum);

    let scale = (params.omega / osc as f64).sqrt();
    let samples = i_sum
        .iter()
        .zip(&q_sum)
        .map(|(i, q)| scale * i.hypot(*q))
        .collect();
    Ok(FadingTrace {
        params,
        config,
        samples,
    })
}

fn uniform_phase(rng: &mut ChaCha20Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Adds `Σ cos(step * k + phase)` into `out[k]`.
fn accumulate(oscillators: &[(f64, f64)], out: &mut [f64]) {
    for (block, chunk) in out.chunks_mut(RESYNC_STRIDE).enumerate() {
        let k0 = (block * RESYNC_STRIDE) as f64;
        for &(step, phase) in oscillators {
            let (rot_im, rot_re) = step.sin_cos();
            let (mut im, mut re) = (step * k0 + phase).sin_cos();
            for slot in chunk.iter_mut() {
                *slot += re;
                let next_re = re * rot_re - im * rot_im;
                im = re * rot_im + im * rot_re;
                re = next_re;
            }
        }
    }
}

pub fn mean_square(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|a| a * a).sum::<f64>() / samples.len() as f64
}

/// Rayleigh CDF with `E[a²] = omega`.
pub fn rayleigh_cdf(x: f64, omega: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x * x / omega).exp_m1()
    }
}

/// One-directional level crossing rate of a Rayleigh envelope,
/// `sqrt(2π) F ρ exp(−ρ²)` with `ρ = level / sqrt(Ω)`.
pub fn rayleigh_lcr(params: &LinkParams, level: f64) -> f64 {
    let rho = level / params.omega.sqrt();
    (2.0 * PI).sqrt() * params.doppler_hz * rho * (-rho * rho).exp()
}

/// Outcome of [`validate_rayleigh`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub expected_omega: f64,
    pub mean_square: f64,
    /// `|mean_square − omega| / omega`.
    pub moment_deviation: f64,
    /// Kolmogorov–Smirnov distance to the Rayleigh CDF.
    pub ks_distance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks the trace marginal against a Rayleigh law with the trace's own Ω.
pub fn validate_rayleigh(trace: &FadingTrace, tolerance: f64) -> Result<ValidationReport> {
    validate_rayleigh_against(trace, trace.params.omega, tolerance)
}

/// Checks the trace marginal against a Rayleigh law with parameter `omega`.
///
/// Passes when both the relative second-moment error and the KS distance
/// are within `tolerance`.
pub fn validate_rayleigh_against(
    trace: &FadingTrace,
    omega: f64,
    tolerance: f64,
) -> Result<ValidationReport> {
    if trace.len() < MIN_VALIDATION_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_VALIDATION_SAMPLES,
            got: trace.len(),
        });
    }
    if !(omega > 0.0 && tolerance >= 0.0) {
        return Err(Error::Domain(format!(
            "omega must be > 0 and tolerance >= 0, got {omega} and {tolerance}"
        )));
    }
    let ms = trace.mean_square();
    let moment_deviation = (ms - omega).abs() / omega;

    let mut sorted = trace.samples.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let ks_distance = sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let cdf = rayleigh_cdf(x, omega);
            let lo = k as f64 / n;
            let hi = (k + 1) as f64 / n;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max);

    Ok(ValidationReport {
        expected_omega: omega,
        mean_square: ms,
        moment_deviation,
        ks_distance,
        tolerance,
        passed: moment_deviation <= tolerance && ks_distance <= tolerance,
    })
}

/// Which crossings [`measure_lcr`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
    Both,
}

/// Counts crossings of `level` between consecutive samples and divides by
/// the trace duration `len / sample_rate_hz`.
pub fn measure_lcr(
    samples: &[f64],
    sample_rate_hz: f64,
    level: f64,
    direction: Direction,
) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: samples.len(),
        });
    }
    if !(level >= 0.0) {
        return Err(Error::Domain(format!("level must be >= 0, got {level}")));
    }
    if !(sample_rate_hz > 0.0) {
        return Err(Error::Domain(format!(
            "sample rate must be > 0, got {sample_rate_hz}"
        )));
    }
    let count = samples
        .windows(2)
        .filter(|w| {
            let (was_above, is_above) = (w[0] > level, w[1] > level);
            match direction {
                Direction::Up => !was_above && is_above,
                Direction::Down => was_above && !is_above,
                Direction::Both => was_above != is_above,
            }
        })
        .count();
    Ok(count as f64 * sample_rate_hz / samples.len() as f64)
}
