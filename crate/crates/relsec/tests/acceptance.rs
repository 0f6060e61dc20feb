//! Acceptance suite: one test per release criterion, each printing a
//! pass line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The regression grid spans the parameter sets used throughout the
//! qualitative study: receiver/eavesdropper counts, relay counts, antenna
//! counts, and the named fading special cases. The source -> relay average
//! SNR is pinned to 10 dB throughout.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relsec::channel::{hop_ccdf, hop_coefficients, hop_pdf, FadingParams};
use relsec::config::{
    db_to_linear, MethodKind, MetricKind, NetworkConfig, SweepSpec, SweepVariable,
};
use relsec::dualhop::DualHopDist;
use relsec::extremes::{max_snr_pdf_direct, min_snr_pdf_direct};
use relsec::metrics::{build_model, esmc, pnsmc, sopm, Method};
use relsec::montecarlo::{simulate_metrics, HopSampler, SimMode, SimPlan};
use relsec::quad;
use relsec::series::SeriesConfig;
use relsec::sweep::{rows_to_csv, run_sweep};

const MC_TRIALS: u64 = 1_000_000;
const MC_SEED: u64 = 20240817;
/// Two-sided 99% normal quantile.
const Z99: f64 = 2.5758293035489004;
const TARGET_RATE: f64 = 0.5;

fn fade(kappa: f64, mu: f64, m: f64, snr_db: f64) -> FadingParams {
    FadingParams::new(kappa, mu, m, db_to_linear(snr_db)).unwrap()
}

#[allow(clippy::too_many_arguments)]
fn net(
    p: u32,
    q: u32,
    w: u32,
    g_rx: u32,
    g_eve: u32,
    fading: (f64, f64, f64),
    main_db: f64,
    eve_db: f64,
) -> NetworkConfig {
    let (kappa, mu, m) = fading;
    NetworkConfig {
        relays: p,
        receivers: q,
        eavesdroppers: w,
        antennas_rx: g_rx,
        antennas_eve: g_eve,
        hop_sp: fade(kappa, mu, m, 10.0),
        hop_pq: fade(kappa, mu, m, main_db),
        hop_pw: fade(kappa, mu, m, eve_db),
    }
}

const INF: f64 = f64::INFINITY;

/// >= 12 configurations spanning the figure-style parameter sets; all
/// shapes integer so the closed form applies.
fn regression_grid() -> Vec<(&'static str, NetworkConfig)> {
    vec![
        ("many-receivers-w1", net(2, 5, 1, 2, 2, (2.0, 1.0, INF), 5.0, -10.0)),
        ("many-receivers-w3", net(2, 5, 3, 2, 2, (2.0, 1.0, INF), 5.0, -10.0)),
        ("eve-snr-low", net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0)),
        ("eve-snr-mid", net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, 0.0)),
        ("eve-snr-high", net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, 10.0)),
        ("unshadowed-los", net(2, 2, 2, 2, 2, (1.0, 1.0, INF), 5.0, -10.0)),
        ("one-relay", net(1, 2, 2, 2, 2, (1.0, 1.0, 2.0), 3.0, -10.0)),
        ("three-relays", net(3, 2, 2, 2, 2, (1.0, 1.0, 2.0), 3.0, -10.0)),
        ("four-relays", net(4, 2, 2, 2, 2, (1.0, 1.0, 2.0), 3.0, -10.0)),
        ("rx-antennas-2", net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0)),
        ("rx-antennas-4", net(2, 2, 2, 4, 2, (1.0, 1.0, 2.0), 5.0, -10.0)),
        ("shadowed-rician", net(2, 2, 2, 2, 2, (2.0, 1.0, 3.0), 5.0, -10.0)),
        ("rician", net(2, 2, 2, 2, 2, (2.0, 1.0, INF), 5.0, -10.0)),
    ]
}

fn symmetric_net() -> NetworkConfig {
    net(1, 1, 1, 2, 2, (1.0, 1.0, 2.0), 3.0, 3.0)
}

fn all_metrics(
    cfg: &NetworkConfig,
    trunc: &SeriesConfig,
    method: &Method,
) -> (f64, f64, f64, [f64; 3]) {
    let p = pnsmc(cfg, trunc, method).unwrap();
    let s = sopm(cfg, TARGET_RATE, trunc, method).unwrap();
    let e = esmc(cfg, trunc, method).unwrap();
    (
        p.value,
        s.value,
        e.value,
        [p.tail_estimate, s.tail_estimate, e.tail_estimate],
    )
}

#[test]
fn criterion_1_three_way_oracle_agreement() {
    let trunc = SeriesConfig::default();
    for (name, cfg) in regression_grid() {
        let (pc, sc, ec, _) = all_metrics(&cfg, &trunc, &Method::ClosedForm);
        let (pq, sq, eq, _) = all_metrics(&cfg, &trunc, &Method::Quadrature);
        assert!((pc - pq).abs() < 5e-4, "{name}: pnsmc {pc} vs {pq}");
        assert!((sc - sq).abs() < 5e-4, "{name}: sopm {sc} vs {sq}");
        assert!((ec - eq).abs() < 5e-3, "{name}: esmc {ec} vs {eq}");
        let mc = Method::MonteCarlo {
            trials: MC_TRIALS,
            seed: MC_SEED,
        };
        let (pm, sm, em, err) = all_metrics(&cfg, &trunc, &mc);
        for (metric, m_hat, stderr, analytical) in [
            ("pnsmc", pm, err[0], [pc, pq]),
            ("sopm", sm, err[1], [sc, sq]),
            ("esmc", em, err[2], [ec, eq]),
        ] {
            let band = Z99 * stderr.max(1.0 / MC_TRIALS as f64);
            for a in analytical {
                assert!(
                    (m_hat - a).abs() <= band,
                    "{name}/{metric}: {a} outside {m_hat} +- {band}"
                );
            }
        }
    }
    println!("criterion 1 (three-way oracle agreement on the regression grid): pass");
}

#[test]
fn criterion_2_special_case_collapse() {
    let trunc = SeriesConfig::default();
    let snr = 1.3;
    // Rayleigh: exponential SNR density.
    let c = hop_coefficients(&FadingParams::new(0.0, 1.0, INF, snr).unwrap(), 1, &trunc).unwrap();
    for i in 0..=60 {
        let x = 0.1 * i as f64;
        let reference = (1.0 / snr) * (-x / snr).exp();
        let got = hop_pdf(&c, x);
        assert!(
            ((got - reference) / reference).abs() < 1e-6,
            "rayleigh x={x}"
        );
    }
    // Nakagami (kappa=0, mu=m_N, m=inf) and kappa=0 with finite m: both are
    // exactly the Gamma SNR density with shape mu.
    for m_shadow in [INF, 5.0] {
        let mu = 3.0;
        let c =
            hop_coefficients(&FadingParams::new(0.0, mu, m_shadow, snr).unwrap(), 1, &trunc)
                .unwrap();
        let ln_gamma_mu = 2.0f64.ln(); // Gamma(3) = 2
        for i in 1..=60 {
            let x = 0.1 * i as f64;
            let reference =
                ((mu / snr).powf(mu) / ln_gamma_mu.exp()) * x.powf(mu - 1.0) * (-mu * x / snr).exp();
            let got = hop_pdf(&c, x);
            assert!(
                ((got - reference) / reference).abs() < 1e-6,
                "gamma m={m_shadow} x={x}"
            );
        }
    }
    // Rician via the finite shadowing surrogate: within 1e-3 of the exact
    // noncentral law, relative to the density peak.
    let k = 2.0;
    let c = hop_coefficients(&FadingParams::new(k, 1.0, INF, 1.0).unwrap(), 1, &trunc).unwrap();
    let bessel_i0 = |z: f64| {
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for j in 1..200 {
            term *= (z * z / 4.0) / ((j * j) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    };
    let rician =
        |x: f64| (1.0 + k) * (-k - (1.0 + k) * x).exp() * bessel_i0(2.0 * (k * (1.0 + k) * x).sqrt());
    let peak = (0..=120).map(|i| rician(0.05 * i as f64)).fold(0.0, f64::max);
    for i in 0..=120 {
        let x = 0.05 * i as f64;
        assert!(
            (hop_pdf(&c, x) - rician(x)).abs() / peak < 1e-3,
            "rician x={x}"
        );
    }
    println!("criterion 2 (special-case densities collapse): pass");
}

#[test]
fn criterion_3_normalization_and_distribution_sanity() {
    let trunc = SeriesConfig::default();
    let cfg = net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0);
    let model = build_model(&cfg, &trunc).unwrap();
    let (q, w) = (model.receivers, model.eavesdroppers);

    // Densities integrate to 1 +- 1e-4.
    let hop = |c: &relsec::channel::HopCoefficients, x: f64| hop_pdf(c, x);
    let checks: Vec<(&str, Box<dyn Fn(f64) -> f64>)> = vec![
        ("first hop", Box::new(|x| hop(&model.mult.first_hop, x))),
        ("second hop", Box::new(|x| hop(&model.mult.second_hop, x))),
        ("best relay", Box::new(|x| model.mult.bestrelay_pdf(x))),
        ("worst receiver", Box::new(|x| min_snr_pdf_direct(&model.mult, q, x))),
        ("strongest eavesdropper", Box::new(|x| max_snr_pdf_direct(&model.eav, w, x))),
    ];
    for (name, f) in &checks {
        let total = quad::integrate_semi_infinite(f, 1e-8).unwrap();
        assert!((total - 1.0).abs() < 1e-4, "{name} integrates to {total}");
    }

    // CDFs monotone with endpoints 0 and 1.
    let cdfs: Vec<(&str, Box<dyn Fn(f64) -> f64>)> = vec![
        ("hop", Box::new(|x| 1.0 - hop_ccdf(&model.mult.first_hop, x))),
        ("best relay", Box::new(|x| model.mult.bestrelay_cdf(x))),
        (
            "worst receiver",
            Box::new(|x| relsec::extremes::min_snr_cdf_direct(&model.mult, q, x)),
        ),
        (
            "strongest eavesdropper",
            Box::new(|x| relsec::extremes::max_snr_cdf_direct(&model.eav, w, x)),
        ),
    ];
    for (name, f) in &cdfs {
        assert!(f(0.0).abs() < 1e-9, "{name} at 0");
        assert!((f(1e4) - 1.0).abs() < 1e-9, "{name} at inf");
        let mut prev = -1.0;
        for i in 0..=200 {
            let v = f(0.1 * i as f64);
            assert!(v >= prev - 1e-13, "{name} not monotone at {i}");
            prev = v;
        }
    }
    println!("criterion 3 (normalization and distribution sanity): pass");
}

/// Evaluates `metric` by quadrature along a sweep of `variable`, returning
/// the values in grid order.
fn sweep_quad(
    base: &NetworkConfig,
    variable: SweepVariable,
    grid: &[f64],
    metric: MetricKind,
) -> Vec<f64> {
    let trunc = SeriesConfig::default();
    grid.iter()
        .map(|&v| {
            let (cfg, rate) = variable.apply(base, TARGET_RATE, v);
            match metric {
                MetricKind::Pnsmc => pnsmc(&cfg, &trunc, &Method::Quadrature).unwrap().value,
                MetricKind::Sopm => sopm(&cfg, rate, &trunc, &Method::Quadrature).unwrap().value,
                MetricKind::Esmc => esmc(&cfg, &trunc, &Method::Quadrature).unwrap().value,
            }
        })
        .collect()
}

fn assert_strictly(vals: &[f64], increasing: bool, what: &str) {
    for pair in vals.windows(2) {
        if increasing {
            assert!(pair[1] > pair[0], "{what} not increasing: {vals:?}");
        } else {
            assert!(pair[1] < pair[0], "{what} not decreasing: {vals:?}");
        }
    }
}

#[test]
fn criterion_4_monotonicity_suite() {
    let base = net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0);
    use MetricKind::*;
    use SweepVariable::*;
    let down: &[(SweepVariable, MetricKind, Vec<f64>)] = &[
        (MainSnrDb, Sopm, vec![-5.0, 0.0, 5.0, 10.0]),
        (Relays, Sopm, vec![1.0, 2.0, 3.0, 4.0]),
        (MSp, Sopm, vec![0.5, 1.0, 2.0, 4.0]),
        (MPq, Sopm, vec![0.5, 1.0, 2.0, 4.0]),
        (Receivers, Pnsmc, vec![1.0, 2.0, 4.0, 6.0]),
        (Eavesdroppers, Pnsmc, vec![1.0, 2.0, 3.0]),
        (EveSnrDb, Pnsmc, vec![-10.0, -5.0, 0.0, 5.0]),
    ];
    let up: &[(SweepVariable, MetricKind, Vec<f64>)] = &[
        (TargetRate, Sopm, vec![0.25, 0.5, 1.0, 2.0]),
        (EveSnrDb, Sopm, vec![-10.0, -5.0, 0.0, 5.0]),
        (KappaSp, Esmc, vec![0.0, 1.0, 2.0, 4.0]),
        (KappaPq, Esmc, vec![0.0, 1.0, 2.0, 4.0]),
        (AntennasRx, Esmc, vec![1.0, 2.0, 4.0]),
    ];
    for (var, metric, grid) in down {
        let vals = sweep_quad(&base, *var, grid, *metric);
        assert_strictly(&vals, false, &format!("{:?} in {:?}", metric, var));
    }
    for (var, metric, grid) in up {
        let vals = sweep_quad(&base, *var, grid, *metric);
        assert_strictly(&vals, true, &format!("{:?} in {:?}", metric, var));
    }
    // More multipath clusters on the multicast side raise the probability
    // of a positive secrecy capacity. Checked away from the saturated
    // PNSMC ~ 1 regime (where residual outage is dominated by
    // order-statistic spread and the direction is not clean): unshadowed
    // hops with the eavesdropper at 0 dB.
    let mu_base = net(2, 2, 2, 2, 2, (1.0, 1.0, INF), 5.0, 0.0);
    for var in [MuSp, MuPq] {
        let vals = sweep_quad(&mu_base, var, &[1.0, 2.0, 3.0], Pnsmc);
        assert_strictly(&vals, true, &format!("Pnsmc in {var:?} (0 dB eve)"));
    }
    // Eavesdropper-side concentration effects (larger kappa_c or more
    // eavesdropper antennas) lower the secrecy capacity through concavity
    // of log(1 + x): the averages are held fixed, so these parameters only
    // shrink the eavesdropper SNR's spread, which raises its ergodic
    // capacity. That direction is only unambiguous without order
    // statistics on the eavesdropper side: with best-of-P relay selection
    // or a strongest-of-W eavesdropper, the extremum *benefits* from
    // spread, and the reduction in spread helps security instead. The
    // checks therefore run on the single-relay, single-eavesdropper
    // topology with unshadowed hops.
    let eve_base = net(1, 2, 1, 2, 1, (1.0, 1.0, INF), 5.0, -5.0);
    let vals = sweep_quad(&eve_base, KappaPw, &[0.0, 1.0, 2.0, 4.0], Esmc);
    assert_strictly(&vals, false, "Esmc in KappaPw (P = W = 1)");
    let vals = sweep_quad(&eve_base, AntennasEve, &[1.0, 2.0, 4.0], Esmc);
    assert_strictly(&vals, false, "Esmc in AntennasEve (P = W = 1)");
    println!("criterion 4 (qualitative monotonicity suite): pass");
}

#[test]
fn criterion_5_symmetry_fixed_points() {
    let trunc = SeriesConfig::default();
    let cfg = symmetric_net();
    for method in [
        Method::ClosedForm,
        Method::Quadrature,
        Method::MonteCarlo {
            trials: MC_TRIALS,
            seed: MC_SEED,
        },
    ] {
        let p = pnsmc(&cfg, &trunc, &method).unwrap().value;
        assert!((p - 0.5).abs() < 0.002, "{method:?}: pnsmc {p}");
        let e = esmc(&cfg, &trunc, &method).unwrap().value;
        assert!(e.abs() < 0.005, "{method:?}: esmc {e}");
    }
    println!("criterion 5 (symmetric-network fixed points): pass");
}

#[test]
fn criterion_6_outage_complement_identity() {
    let trunc = SeriesConfig::default();
    let cfg = net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0);
    for method in [Method::ClosedForm, Method::Quadrature] {
        let p = pnsmc(&cfg, &trunc, &method).unwrap().value;
        let s = sopm(&cfg, 1e-9, &trunc, &method).unwrap().value;
        assert!(
            (p - (1.0 - s)).abs() < 1e-6,
            "{method:?}: pnsmc {p} vs 1 - sopm {s}"
        );
    }
    // Monte-Carlo: exact indicator complement on shared draws.
    let est = simulate_metrics(
        &SimPlan {
            trials: 200_000,
            seed: MC_SEED,
            mode: SimMode::AnalysisConsistent,
            net: cfg,
        },
        1e-9,
    )
    .unwrap();
    assert!((est.sopm + est.pnsmc - 1.0).abs() <= 1e-12);
    println!("criterion 6 (outage/non-zero-capacity complement identity): pass");
}

#[test]
fn criterion_7_truncation_stability() {
    let d25 = SeriesConfig::with_depth(25);
    let d35 = SeriesConfig::with_depth(35);
    for (name, cfg) in regression_grid() {
        let (p25, s25, e25, _) = all_metrics(&cfg, &d25, &Method::ClosedForm);
        let (p35, s35, e35, _) = all_metrics(&cfg, &d35, &Method::ClosedForm);
        assert!((p25 - p35).abs() < 1e-6, "{name}: pnsmc {p25} vs {p35}");
        assert!((s25 - s35).abs() < 1e-6, "{name}: sopm {s25} vs {s35}");
        assert!((e25 - e35).abs() < 1e-6, "{name}: esmc {e25} vs {e35}");
    }
    println!("criterion 7 (depth-25 vs depth-35 truncation stability): pass");
}

#[test]
fn criterion_8_sampler_correctness() {
    // KS distance between 10^6 draws and the analytical CDF, below the
    // alpha = 0.01 critical value, for parameter triples including the
    // kappa = 0 and m = inf special cases.
    let n = 1_000_000usize;
    let crit = 1.63 / (n as f64).sqrt();
    let triples: &[(f64, f64, f64, u32)] = &[
        (0.0, 1.0, INF, 1), // Rayleigh
        (0.0, 2.0, 5.0, 1), // Gamma reduction with finite shadowing
        (2.0, 1.0, 3.0, 1), // shadowed Rician
        (2.0, 1.0, INF, 1), // Rician (m = inf, constructive S = 1)
        (1.0, 2.0, 2.0, 2), // multi-antenna
    ];
    for &(kappa, mu, m, antennas) in triples {
        let p = FadingParams::new(kappa, mu, m, 1.0).unwrap();
        let sampler = HopSampler::new(&p, antennas).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED);
        let mut xs: Vec<f64> = (0..n).map(|_| sampler.draw(&mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let coeffs = hop_coefficients(&p, antennas, &SeriesConfig::with_depth(60)).unwrap();
        let mut d = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let f = 1.0 - hop_ccdf(&coeffs, x);
            d = d.max((f - i as f64 / n as f64).abs());
            d = d.max(((i as f64 + 1.0) / n as f64 - f).abs());
        }
        assert!(
            d < crit,
            "KS {d} vs {crit} for kappa={kappa} mu={mu} m={m} antennas={antennas}"
        );
    }
    println!("criterion 8 (sampler Kolmogorov-Smirnov correctness): pass");
}

#[test]
fn criterion_9_csv_determinism_across_thread_counts() {
    let cfg = net(2, 2, 2, 2, 2, (1.0, 1.0, 2.0), 5.0, -10.0);
    let spec = SweepSpec {
        variable: SweepVariable::MainSnrDb,
        grid: vec![0.0, 5.0, 10.0],
        metrics: vec![MetricKind::Pnsmc, MetricKind::Sopm, MetricKind::Esmc],
        methods: vec![
            MethodKind::ClosedForm,
            MethodKind::Quadrature,
            MethodKind::MonteCarlo,
        ],
        target_rate: Some(TARGET_RATE),
    };
    let sim = SimPlan {
        trials: 100_000,
        seed: MC_SEED,
        mode: SimMode::AnalysisConsistent,
        net: cfg.clone(),
    };
    let trunc = SeriesConfig::default();
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| rows_to_csv(&run_sweep(&cfg, &spec, &trunc, &sim, TARGET_RATE, false), None))
    };
    let single = run_with(1);
    let multi = run_with(4);
    assert_eq!(single, multi, "CSV differs between 1 and 4 worker threads");
    assert!(single.contains("monte_carlo"));
    println!("criterion 9 (byte-identical CSV across worker-thread counts): pass");
}

/// The lambda-min / lambda-max expansions evaluated here feed every closed
/// form above; pin down one independently computable case end to end:
/// Rayleigh hops, P = Q = W = 1, both hops unit mean. Then lambda_b* and
/// lambda_c* are Exp(1/2)... rate 2 exponentials (min of two unit-mean
/// exponentials with the 10 dB first hop replaced by unit mean too), and
/// PNSMC = Pr(X > Y) = 1/2 while ESMC integrates to 0 by symmetry.
#[test]
fn end_to_end_rayleigh_sanity() {
    let trunc = SeriesConfig::default();
    let h = FadingParams::new(0.0, 1.0, INF, 1.0).unwrap();
    let cfg = NetworkConfig {
        relays: 1,
        receivers: 1,
        eavesdroppers: 1,
        antennas_rx: 1,
        antennas_eve: 1,
        hop_sp: h,
        hop_pq: h,
        hop_pw: h,
    };
    let model = build_model(&cfg, &trunc).unwrap();
    // dual-hop of two unit-mean Rayleigh SNRs: Exp(rate 2)
    let d: &DualHopDist = &model.mult;
    for i in 1..=10 {
        let x = 0.2 * i as f64;
        let expect = 2.0 * (-2.0 * x).exp();
        assert!(
            ((d.bestrelay_pdf(x) - expect) / expect).abs() < 1e-9,
            "x={x}"
        );
    }
    let p = pnsmc(&cfg, &trunc, &Method::ClosedForm).unwrap().value;
    assert!((p - 0.5).abs() < 1e-9, "pnsmc {p}");
    let e = esmc(&cfg, &trunc, &Method::ClosedForm).unwrap().value;
    assert!(e.abs() < 1e-9, "esmc {e}");
}
