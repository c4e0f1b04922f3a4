//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use relay_switching::closedform::{
    default_threshold_bounds, dssc_crossing_rate, dssc_stationary, dssc_switch_rate,
    dssc_switch_rate_composed, f_z_at_zero, or_switch_rate_iid_l, or_switch_rate_inid_2,
    threshold_cdfs, velocity_integral, worst_case_threshold,
};
use relay_switching::fading::{
    generate_trace, measure_lcr, rayleigh_lcr, validate_rayleigh, Direction,
};
use relay_switching::montecarlo::{
    decorrelated_period_samples, replication_traces, run_experiment, ExperimentConfig,
    SamplingConfig,
};
use relay_switching::quadrature::integrate;
use relay_switching::{LinkParams, RelayLinks, RelayTopology, SwitchThreshold, TraceConfig};

type Outcome = (bool, String);

fn link(omega: f64, f: f64) -> LinkParams {
    LinkParams::new(omega, f).unwrap()
}

fn iid(l: usize, f: f64) -> RelayTopology {
    RelayTopology::identical(l, RelayLinks::new(link(1.0, f), link(1.0, f)), 1.0).unwrap()
}

/// Both relays alike, `Γ Ω_SR = Γ Ω_RD ± 10 dB`, `F_SR / F_RD = ratio`
/// with the larger Doppler frequency equal to `f_max`.
fn unbalanced(sign: f64, ratio: f64, f_max: f64) -> RelayTopology {
    let (f_sr, f_rd) = if ratio >= 1.0 {
        (f_max, f_max / ratio)
    } else {
        (f_max * ratio, f_max)
    };
    let r = RelayLinks::new(link(10f64.powf(sign), f_sr), link(1.0, f_rd));
    RelayTopology::identical(2, r, 10.0).unwrap()
}

fn within(sim: f64, reference: f64, tol: f64) -> bool {
    ((sim - reference) / reference).abs() <= tol
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = ExperimentConfig::or(iid(2, 10.0), SamplingConfig::new(10.0), 20, 2024);
    let r = run_experiment(&cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let target = 31.4159;
    let rate = r.switch_rate.sim_mean;
    let c1 = (
        within(rate, target, 0.05) && elapsed < 30.0,
        format!(
            "simulated {rate:.4} ± {:.4} Hz vs {target} Hz ({:+.2}%), {} events, {elapsed:.2} s",
            r.switch_rate.sim_stderr,
            100.0 * (rate / target - 1.0),
            r.switch_rate.n_events
        ),
    );
    let at_target = 0.031831;
    let at = r.activation_time.sim_mean;
    let c2 = (
        within(at, at_target, 0.05),
        format!(
            "mean activation {at:.6} s vs {at_target} s ({:+.2}%)",
            100.0 * (at / at_target - 1.0)
        ),
    );
    (c1, c2)
}

fn criterion_3() -> Outcome {
    let exact = (or_switch_rate_iid_l(2, 10.0).unwrap() - 10.0 * PI).abs();
    let mut ok = exact <= 1e-12;
    let mut detail = format!("|SR(2) − πF| = {exact:.1e}");
    for l in 2..=4 {
        let cfg = ExperimentConfig::or(iid(l, 10.0), SamplingConfig::new(10.0), 20, 77 + l as u64);
        let r = run_experiment(&cfg).unwrap();
        let a = or_switch_rate_iid_l(l, 10.0).unwrap();
        let pass = within(r.switch_rate.sim_mean, a, 0.05);
        ok &= pass;
        detail += &format!(
            "; L={l}: sim {:.3} vs {a:.3} Hz ({:+.2}%)",
            r.switch_rate.sim_mean,
            100.0 * (r.switch_rate.sim_mean / a - 1.0)
        );
    }
    let curve: Vec<f64> = (2..=10)
        .map(|l| or_switch_rate_iid_l(l, 10.0).unwrap())
        .collect();
    let monotone = curve.windows(2).all(|w| w[1] > w[0]);
    ok &= monotone;
    detail += &format!("; analytic L=2..10 increasing: {monotone}");
    (ok, detail)
}

const RATIOS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for sign in [1.0, -1.0] {
        for (k, &ratio) in RATIOS.iter().enumerate() {
            let topo = unbalanced(sign, ratio, 50.0);
            let a = or_switch_rate_inid_2(&topo).unwrap();
            let cfg = ExperimentConfig::or(topo, SamplingConfig::new(10.0), 20, 400 + k as u64);
            let sim = run_experiment(&cfg).unwrap().switch_rate.sim_mean;
            ok &= within(sim, a, 0.05);
            parts.push(format!(
                "{:+}dB r={ratio}: {:+.2}%",
                10.0 * sign,
                100.0 * (sim / a - 1.0)
            ));
        }
    }
    (ok, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let topo = iid(2, 10.0);
    let t = SwitchThreshold::new(1.0).unwrap();
    let target = (2.0 * PI).sqrt() * 20.0 * (-2.0f64).exp();
    let analytic = dssc_switch_rate(&topo, t).unwrap();
    let cfg = ExperimentConfig::dssc(topo.clone(), t, SamplingConfig::new(10.0), 40, 5150);
    let r = run_experiment(&cfg).unwrap();
    let sim = r.switch_rate.sim_mean;

    // Down-crossing rate of one relay's min envelope, the N_1 ingredient.
    let mut n1 = 0.0;
    for k in 0..cfg.replications {
        let traces = replication_traces(&cfg, k).unwrap();
        let m: Vec<f64> = traces[0]
            .sr
            .samples
            .iter()
            .zip(&traces[0].rd.samples)
            .map(|(a, b)| a.min(*b))
            .collect();
        n1 += measure_lcr(&m, cfg.sample_rate_hz(), 1.0, Direction::Down).unwrap();
    }
    n1 /= cfg.replications as f64;
    (
        within(sim, target, 0.05),
        format!(
            "simulated {sim:.3} ± {:.3} Hz vs {target:.4} Hz ({:+.2}%); closed form {analytic:.4} Hz; \
             measured N1 {n1:.3} Hz ({:+.2}% vs {:.4})",
            r.switch_rate.sim_stderr,
            100.0 * (sim / target - 1.0),
            100.0 * (n1 / target - 1.0),
            dssc_crossing_rate(0, &topo, t).unwrap()
        ),
    )
}

fn random_topology(rng: &mut ChaCha20Rng) -> RelayTopology {
    let mut hop = || {
        link(
            10f64.powf(rng.gen_range(-1.0..1.0)),
            rng.gen_range(1.0..100.0),
        )
    };
    let relays = vec![RelayLinks::new(hop(), hop()), RelayLinks::new(hop(), hop())];
    RelayTopology::new(relays, 10f64.powf(rng.gen_range(-1.0..2.0))).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let topo = random_topology(&mut rng);
        let w = topo.relay(0).unwrap().min_equivalent().omega;
        let t = topo.gamma() * w * 10f64.powf(rng.gen_range(-3.0..1.5));
        let t = SwitchThreshold::new(t).unwrap();
        let a = dssc_switch_rate(&topo, t).unwrap();
        let b = dssc_switch_rate_composed(&topo, t).unwrap();
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
    }
    (
        worst <= 1e-9,
        format!("max relative gap {worst:.2e} over 1000 cases"),
    )
}

/// Transition matrix of the DSSC-B chain built state by state from the
/// protocol rule. Per relay: 0 = just down-crossed, 1 = below, 2 = above.
fn chain(q: [f64; 2]) -> [[f64; 6]; 6] {
    let mut p = [[0.0; 6]; 6];
    for a in 0..2 {
        let b = 1 - a;
        let (qa, qb) = (q[a], q[b]);
        // down-crossed: hand over; the incoming relay's last two samples
        // are fresh draws
        p[3 * a][3 * b] = (1.0 - qb) * qb;
        p[3 * a][3 * b + 1] = qb * qb;
        p[3 * a][3 * b + 2] = 1.0 - qb;
        // below: stay, next sample decides
        p[3 * a + 1][3 * a + 1] = qa;
        p[3 * a + 1][3 * a + 2] = 1.0 - qa;
        // above: a sample below is a down-crossing
        p[3 * a + 2][3 * a] = qa;
        p[3 * a + 2][3 * a + 2] = 1.0 - qa;
    }
    p
}

fn power_iteration(p: &[[f64; 6]; 6]) -> [f64; 6] {
    let mut pi = [1.0 / 6.0; 6];
    for _ in 0..1_000_000 {
        let mut next = [0.0; 6];
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                next[j] += pi[i] * v;
            }
        }
        let delta = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if delta < 1e-16 {
            break;
        }
    }
    pi
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (mut worst_pi, mut worst_sum) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let topo = random_topology(&mut rng);
        let w = topo.relay(0).unwrap().min_equivalent().omega;
        let t =
            SwitchThreshold::new(topo.gamma() * w * 10f64.powf(rng.gen_range(-1.0..0.7))).unwrap();
        let (q1, q2) = threshold_cdfs(&topo, t).unwrap();
        let st = dssc_stationary(&topo, t).unwrap();
        let oracle = power_iteration(&chain([q1, q2]));
        for (a, b) in st.pi.iter().zip(&oracle) {
            worst_pi = worst_pi.max((a - b).abs());
        }
        worst_sum = worst_sum.max((st.pi.iter().sum::<f64>() - 1.0).abs());
    }

    // Occupancy: unequal relays, decision period at the first zero of the
    // Doppler autocorrelation so per-period samples are uncorrelated.
    let f = 50.0;
    let r1 = RelayLinks::new(link(2.0, f), link(2.0, f));
    let r2 = RelayLinks::new(link(1.0, f), link(1.0, f));
    let topo = RelayTopology::new(vec![r1, r2], 1.0).unwrap();
    let t = SwitchThreshold::new(0.5).unwrap();
    let mut cfg = ExperimentConfig::dssc(topo.clone(), t, SamplingConfig::new(20.0), 10, 7007);
    cfg.decision_period_samples = decorrelated_period_samples(cfg.sample_rate_hz(), f);
    let r = run_experiment(&cfg).unwrap();
    let st = dssc_stationary(&topo, t).unwrap();
    let (o1, o2) = (r.occupancy[0].sim_mean, r.occupancy[1].sim_mean);
    let occ_ok = within(o1, st.rho1, 0.02) && within(o2, st.rho2, 0.02);
    (
        worst_pi <= 1e-9 && worst_sum <= 1e-12 && occ_ok,
        format!(
            "max |π − π_power| {worst_pi:.1e}, max |Σπ − 1| {worst_sum:.1e} (200 cases); \
             occupancy {o1:.4}/{o2:.4} vs {:.4}/{:.4} over {} s, period {} samples",
            st.rho1,
            st.rho2,
            cfg.total_time_s(),
            cfg.decision_period_samples
        ),
    )
}

fn rayleigh_pdf(x: f64, omega: f64) -> f64 {
    2.0 * x / omega * (-x * x / omega).exp()
}

fn rayleigh_sf(x: f64, omega: f64) -> f64 {
    (-x * x / omega).exp()
}

/// `∫ ż f_Ż(ż)` over `ż > 0`, with the mixture built from the probability
/// of each hop being the bottleneck (itself by quadrature).
fn velocity_by_quadrature(topo: &RelayTopology) -> f64 {
    let mut comps = Vec::new();
    let per_relay = |r: &RelayLinks| {
        let (s, d) = (r.sr, r.rd);
        let upper = 40.0 * s.omega().max(d.omega()).sqrt();
        let p_sr_min = integrate(
            |x| rayleigh_pdf(x, s.omega()) * rayleigh_sf(x, d.omega()),
            0.0,
            upper,
            1e-14,
            0.0,
        )
        .unwrap()
        .value;
        let var = |h: LinkParams| (PI * h.doppler_hz()).powi(2) * h.omega();
        [(p_sr_min, var(s)), (1.0 - p_sr_min, var(d))]
    };
    let (a, b) = (
        per_relay(topo.relay(0).unwrap()),
        per_relay(topo.relay(1).unwrap()),
    );
    for (w1, v1) in a {
        for (w2, v2) in b {
            comps.push((w1 * w2, v1 + v2));
        }
    }
    let sd = comps.iter().map(|c| c.1.sqrt()).fold(0.0, f64::max);
    integrate(
        |z| {
            z * comps
                .iter()
                .map(|&(w, v)| w * (-z * z / (2.0 * v)).exp() / (2.0 * PI * v).sqrt())
                .sum::<f64>()
        },
        0.0,
        40.0 * sd,
        1e-14,
        1e-13,
    )
    .unwrap()
    .value
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let (mut worst_fz, mut worst_v) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let topo = random_topology(&mut rng);
        let (p1, p2) = (
            topo.relay(0).unwrap().min_equivalent(),
            topo.relay(1).unwrap().min_equivalent(),
        );
        let upper = 40.0 * p1.omega.max(p2.omega).sqrt();
        let q = integrate(
            |x| rayleigh_pdf(x, p1.omega) * rayleigh_pdf(x, p2.omega),
            0.0,
            upper,
            1e-14,
            1e-13,
        )
        .unwrap()
        .value;
        let fz = f_z_at_zero(p1, p2);
        worst_fz = worst_fz.max((fz - q).abs() / q);
    }
    for _ in 0..100 {
        let topo = random_topology(&mut rng);
        let q = velocity_by_quadrature(&topo);
        let v = velocity_integral(&topo).unwrap();
        worst_v = worst_v.max((v - q).abs() / q);
    }
    (
        worst_fz <= 1e-9 && worst_v <= 1e-9,
        format!("max relative error: f_Z(0) {worst_fz:.1e}, velocity integral {worst_v:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut cases: Vec<(String, RelayTopology)> = Vec::new();
    for sign in [1.0, -1.0] {
        for ratio in RATIOS {
            cases.push((
                format!("fig1 {:+}dB r={ratio}", 10.0 * sign),
                unbalanced(sign, ratio, 50.0),
            ));
        }
        cases.push((
            format!("fig5 {:+}dB", 10.0 * sign),
            unbalanced(sign, 2.0, 50.0),
        ));
    }
    for (k, (name, topo)) in cases.iter().enumerate() {
        let t_star = worst_case_threshold(topo, default_threshold_bounds(topo)).unwrap();
        let d = dssc_switch_rate(topo, t_star).unwrap();
        let o = or_switch_rate_inid_2(topo).unwrap();
        let seed = 900 + k as u64;
        let sampling = SamplingConfig::new(10.0);
        let sim_d = run_experiment(&ExperimentConfig::dssc(
            topo.clone(),
            t_star,
            sampling,
            10,
            seed,
        ))
        .unwrap()
        .switch_rate
        .sim_mean;
        let sim_o = run_experiment(&ExperimentConfig::or(topo.clone(), sampling, 10, seed))
            .unwrap()
            .switch_rate
            .sim_mean;
        let pass = d < o && sim_d < sim_o;
        ok &= pass;
        parts.push(format!(
            "{name}: {:.2}/{:.2} (sim {:.2}/{:.2})",
            d, o, sim_d, sim_o
        ));
    }
    // Every threshold of the Fig. 5 sweep, analytic.
    for sign in [1.0, -1.0] {
        let topo = unbalanced(sign, 2.0, 50.0);
        let o = or_switch_rate_inid_2(&topo).unwrap();
        let (lo, hi) = default_threshold_bounds(&topo);
        let sweep_ok = (0..20).all(|k| {
            let t = lo * (hi / lo).powf(k as f64 / 19.0);
            dssc_switch_rate(&topo, SwitchThreshold::new(t).unwrap()).unwrap() < o
        });
        ok &= sweep_ok;
        parts.push(format!(
            "fig5 {:+}dB sweep below OR: {sweep_ok}",
            10.0 * sign
        ));
    }
    (ok, format!("DSSC/OR Hz — {}", parts.join("; ")))
}

fn criterion_10() -> Outcome {
    let f = 50.0;
    let params = link(1.0, f);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut counts = [0.0; 3];
    let levels = [0.5, 1.0, 2.0];
    let n_traces = 16;
    for seed in 0..n_traces {
        let trace =
            generate_trace(params, TraceConfig::for_doppler(f, 200.0, 1000 + seed)).unwrap();
        let v = validate_rayleigh(&trace, 0.02).unwrap();
        ok &= v.passed;
        if seed == 0 {
            parts.push(format!(
                "trace 0: moment {:.4}, KS {:.4}",
                v.moment_deviation, v.ks_distance
            ));
        }
        for (c, &rho) in counts.iter_mut().zip(&levels) {
            *c += measure_lcr(&trace.samples, trace.sample_rate_hz(), rho, Direction::Both)
                .unwrap()
                / 2.0;
        }
    }
    for (c, &rho) in counts.iter().zip(&levels) {
        let sim = c / n_traces as f64;
        let expected = rayleigh_lcr(&params, rho);
        ok &= within(sim, expected, 0.03);
        parts.push(format!(
            "LCR ρ={rho}: {sim:.3} vs {expected:.3} Hz ({:+.2}%)",
            100.0 * (sim / expected - 1.0)
        ));
    }
    (ok, parts.join("; "))
}

fn main() -> ExitCode {
    let titles = [
        "i.i.d. OR switching rate = πF",
        "OR mean activation time = 1/(πF)",
        "L-relay i.i.d. OR switching rate",
        "i.n.i.d. OR switching rate, unbalanced hops",
        "DSSC-B continuous-time switching rate",
        "DSSC-B regrouped vs compositional closed form",
        "DSSC-B Markov stationary law and occupancy",
        "f_Z(0) and velocity integral vs quadrature",
        "DSSC-B at worst-case threshold below OR",
        "fading generator: Rayleigh marginal and LCR",
    ];
    let (c1, c2) = criterion_1_and_2();
    let outcomes = [
        c1,
        c2,
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let mut failed = 0;
    for (i, ((pass, detail), title)) in outcomes.iter().zip(titles).enumerate() {
        let tag = if *pass { "PASS" } else { "FAIL" };
        failed += usize::from(!pass);
        println!("{tag} criterion {:>2}: {title} — {detail}", i + 1);
    }
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
