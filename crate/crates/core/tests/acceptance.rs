//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hostile_pac::aggregation::{self, BoundConfig};
use hostile_pac::datagen;
use hostile_pac::divergence::{f_divergence, DivergenceKind};
use hostile_pac::harness::{bound, moment_validity, run_coverage, run_sweep, ExperimentConfig, SweepAxis};
use hostile_pac::moments::{MomentBound, RegimeTag};
use hostile_pac::param_space::{expectation, DiscreteDistribution};
use hostile_pac::rng::data_stream;
use hostile_pac::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const T5_REGRESSION: &str = include_str!("../../../configs/t5_regression.toml");
const AR1_T7: &str = include_str!("../../../configs/ar1_t7_mixing.toml");
const AR1_ZERO_ONE: &str = include_str!("../../../configs/ar1_zero_one_mixing.toml");
const ORACLE_RATE: &str = include_str!("../../../configs/circle_oracle_rate.toml");
const RATE_SHAPE: &str = include_str!("../../../configs/circle_rate_shape.toml");
const FINITE_CLASS: &str = include_str!("../../../configs/finite_class_subgaussian.toml");
const CLASSIFICATION: &str = include_str!("../../../configs/classification_subgaussian.toml");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

/// Random distribution on k atoms; about a third of the draws zero out a
/// random subset of coordinates.
fn random_dist(rng: &mut ChaCha8Rng, k: usize) -> DiscreteDistribution {
    let sparse = rng.random_bool(1.0 / 3.0);
    loop {
        let masses: Vec<f64> = (0..k)
            .map(|_| if sparse && rng.random_bool(0.5) { 0.0 } else { -rng.random::<f64>().max(1e-300).ln() })
            .collect();
        if masses.iter().any(|m| *m > 0.0) {
            return DiscreteDistribution::from_masses(masses).unwrap();
        }
    }
}

fn positive_dist(rng: &mut ChaCha8Rng, k: usize) -> DiscreteDistribution {
    let masses: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
    DiscreteDistribution::from_masses(masses).unwrap()
}

/// Bound configuration with M/δ = `level`.
fn cfg_at(p: f64, level: f64) -> Result<BoundConfig> {
    let q = p / (p - 1.0);
    BoundConfig::new(p, 0.5, MomentBound { value: 0.5 * level, q, n: 1, regime: RegimeTag::IidVariance })
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn divergence_closed_form() -> Result<Outcome> {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let k = rng.random_range(1..=60);
        let p = 1.0 + log_uniform(&mut rng, 0.05, 4.0);
        let rho = random_dist(&mut rng, k);
        let pi = DiscreteDistribution::uniform(k)?;
        let lib = f_divergence(&rho, &pi, DivergenceKind::PhiP { p })? + 1.0;
        let oracle = (k as f64).powf(p - 1.0) * rho.weights().iter().map(|r| r.powf(p)).sum::<f64>();
        worst = worst.max((lib - oracle).abs() / oracle);
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e}"))
}

fn holder_inequality() -> Result<Outcome> {
    let mut rng = rng(2);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let k = rng.random_range(1..=40);
        let p = 1.0 + log_uniform(&mut rng, 0.05, 6.0);
        let q = p / (p - 1.0);
        let rho = random_dist(&mut rng, k);
        let pi = if rng.random_bool(0.5) { positive_dist(&mut rng, k) } else { random_dist(&mut rng, k) };
        let scale = log_uniform(&mut rng, 1e-3, 1e3);
        let delta: Vec<f64> = (0..k).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let lhs = expectation(&rho, &delta)?.abs();
        let moment: f64 = pi.weights().iter().zip(&delta).map(|(w, d)| w * d.abs().powf(q)).sum();
        let div = aggregation::divergence_plus_one(&rho, &pi, p)?;
        let rhs = moment.powf(1.0 / q) * div.powf(1.0 / p);
        let slack = if div.is_infinite() { f64::INFINITY } else { (rhs - lhs) / scale };
        worst = worst.min(slack);
    }
    outcome(worst >= -1e-12, format!("min scaled slack {worst:.3e}"))
}

fn rbar_residual(rn: &[f64], pi: &DiscreteDistribution, q: f64, level: f64, rbar: f64) -> f64 {
    let s: f64 = pi.weights().iter().zip(rn).map(|(w, r)| w * (rbar - r).max(0.0).powf(q)).sum();
    (s - level).abs() / level
}

fn rbar_solver() -> Result<Outcome> {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let k = rng.random_range(1..=200);
        let q = 1.0 + log_uniform(&mut rng, 0.1, 8.0);
        let pi = random_dist(&mut rng, k);
        let rn: Vec<f64> = (0..k).map(|_| 5.0 * rng.random::<f64>()).collect();
        let level = log_uniform(&mut rng, 1e-6, 10.0);
        let rbar = aggregation::solve_rbar(&rn, &pi, q, 0.5 * level, 0.5)?;
        worst = worst.max(rbar_residual(&rn, &pi, q, level, rbar));
    }
    let half = DiscreteDistribution::uniform(2)?;
    let low = aggregation::solve_rbar(&[0.0, 1.0], &half, 2.0, 0.0125, 0.1)?;
    let high = aggregation::solve_rbar(&[0.0, 1.0], &half, 2.0, 0.0625, 0.1)?;
    let e_low = (low - 0.5).abs();
    let e_high = (high - (1.0 + 1.5f64.sqrt()) / 2.0).abs();
    outcome(
        worst <= 1e-10 && e_low <= 1e-10 && e_high <= 1e-10,
        format!("max residual {worst:.2e}, closed forms off by {e_low:.1e} and {e_high:.1e}"),
    )
}

fn minimizer_identity() -> Result<Outcome> {
    let mut rng = rng(4);
    let (mut worst_identity, mut worst_gap, mut probes) = (0.0f64, f64::INFINITY, 0usize);
    for _ in 0..100 {
        let k = rng.random_range(2..=50);
        let p = 1.0 + log_uniform(&mut rng, 0.1, 5.0);
        let pi = random_dist(&mut rng, k);
        let rn: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let cfg = cfg_at(p, log_uniform(&mut rng, 1e-5, 1.0))?;
        let min = aggregation::minimized_objective_identity(&rn, &pi, &cfg)?;
        worst_identity = worst_identity.max((min.objective - min.rbar).abs() / min.rbar.abs());
        for _ in 0..1_000 {
            let rho = random_dist(&mut rng, k);
            let obj = aggregation::objective(&rho, &pi, &rn, &cfg)?;
            worst_gap = worst_gap.min((obj - min.objective) / min.objective.abs());
            probes += 1;
        }
    }
    outcome(
        worst_identity <= 1e-8 && worst_gap >= -1e-12,
        format!("identity error {worst_identity:.2e}, min relative gap {worst_gap:.2e} over {probes} probes"),
    )
}

fn scaling_equivariance() -> Result<Outcome> {
    let mut rng = rng(5);
    let (mut worst_w, mut worst_r) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let k = rng.random_range(1..=50);
        let p = 1.0 + log_uniform(&mut rng, 0.1, 5.0);
        let pi = random_dist(&mut rng, k);
        let rn: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let level = log_uniform(&mut rng, 1e-4, 1.0);
        let base = aggregation::minimized_objective_identity(&rn, &pi, &cfg_at(p, level)?)?;
        for c in [0.1, 10.0] {
            let q = p / (p - 1.0);
            let scaled: Vec<f64> = rn.iter().map(|r| c * r).collect();
            let s = aggregation::minimized_objective_identity(&scaled, &pi, &cfg_at(p, level * c.powf(q))?)?;
            for (a, b) in base.rho_hat.weights().iter().zip(s.rho_hat.weights()) {
                worst_w = worst_w.max((a - b).abs());
            }
            worst_r = worst_r.max((s.rbar - c * base.rbar).abs() / (c * base.rbar).abs());
        }
    }
    outcome(worst_w <= 1e-10 && worst_r <= 1e-10, format!("weight drift {worst_w:.2e}, r̄ relative drift {worst_r:.2e}"))
}

fn coverage_iid() -> Result<Outcome> {
    let cfg = ExperimentConfig::from_toml_str(T5_REGRESSION)?;
    let rep = run_coverage(&cfg)?;
    outcome(
        rep.coverage_bound >= 0.90,
        format!(
            "coverage {:.3} over {} replications with {} probes, M = {:.4}, empirical moment {:.4}",
            rep.coverage_bound, rep.replications, rep.probes, rep.moment_bound, rep.empirical_moment
        ),
    )
}

fn coverage_dependent() -> Result<Outcome> {
    let cfg = ExperimentConfig::from_toml_str(AR1_T7)?;
    let rep = run_coverage(&cfg)?;
    outcome(
        rep.coverage_bound >= 0.90,
        format!(
            "coverage {:.3} over {} replications, M = {:.4}, empirical moment {:.4}",
            rep.coverage_bound, rep.replications, rep.moment_bound, rep.empirical_moment
        ),
    )
}

fn oracle_rate() -> Result<Outcome> {
    let cfg = ExperimentConfig::from_toml_str(ORACLE_RATE)?;
    let rep = run_coverage(&cfg)?;
    let on_event: Vec<_> = rep.records.iter().filter(|r| r.bound_hit).collect();
    let certified = on_event.iter().filter(|r| r.rate_hit.is_some()).count();
    let in_range = on_event.iter().filter(|r| r.rate_gamma_in_range == Some(true)).count();
    let misses = on_event.iter().filter(|r| r.rate_hit == Some(false)).count();
    let (d_lo, d_hi) = on_event
        .iter()
        .filter_map(|r| r.complexity_d)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
    outcome(
        !on_event.is_empty() && certified == on_event.len() && in_range == on_event.len() && misses == 0,
        format!(
            "{} of {} replications on the event, {certified} certified (d in [{d_lo:.3}, {d_hi:.3}]), \
             {in_range} with γ/2 in the checked interval, {misses} misses",
            on_event.len(),
            rep.replications
        ),
    )
}

fn rate_shape() -> Result<Outcome> {
    let ns = [100.0, 400.0, 1600.0, 6400.0];
    let cfg = ExperimentConfig::from_toml_str(RATE_SHAPE)?;
    let table = run_sweep(&cfg, SweepAxis::N, &ns)?;
    let slope = table.slope_median_margin.unwrap_or(f64::NAN);
    let mut dense = ExperimentConfig::from_toml_str(T5_REGRESSION)?;
    dense.replications = 100;
    dense.probes = 0;
    dense.workers = 0;
    let dense_slope = run_sweep(&dense, SweepAxis::N, &ns)?.slope_median_margin.unwrap_or(f64::NAN);
    outcome(
        (-0.6..=-0.4).contains(&slope),
        format!("slope {slope:.4} on the separated finite class; 100 sampled atoms: {dense_slope:.4} (not gated)"),
    )
}

fn moment_validity_all() -> Result<Outcome> {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, text, reps) in [
        ("variance", T5_REGRESSION, 500),
        ("subgaussian", CLASSIFICATION, 500),
        ("mixing_bounded", AR1_ZERO_ONE, 500),
        ("mixing_unbounded", AR1_T7, 500),
    ] {
        let mut cfg = ExperimentConfig::from_toml_str(text)?;
        cfg.replications = reps;
        cfg.workers = 0;
        let check = moment_validity(&cfg, 50)?;
        let max = check.estimates.iter().copied().fold(0.0, f64::max);
        ok &= check.fraction_within >= 0.99;
        details.push(format!("{name} {:.2} (max {max:.3e} vs {:.3e})", check.fraction_within, check.bound));
    }
    outcome(ok, details.join(", "))
}

fn finite_class_subgaussian() -> Result<Outcome> {
    let cfg = ExperimentConfig::from_toml_str(FINITE_CLASS)?;
    let setup = cfg.setup()?;
    let k = setup.pi.len() as f64;
    let oracle = (0.25 * 2.0 * std::f64::consts::E * (2.0 * k / cfg.delta).ln() / cfg.n as f64).sqrt();
    let risk = datagen::true_risk_closed_form(&cfg.generator, &setup.atoms, cfg.loss)?;
    let (mut worst, mut hits) = (0.0f64, 0usize);
    for r in 0..cfg.replications {
        let data = datagen::generate_with_rng(&cfg.generator, cfg.n, &mut data_stream(cfg.seed, r as u64))?;
        let run = bound::run_bound_on(&setup, &data)?;
        let erm = run.get("dirac_erm").expect("dirac_erm is always reported");
        worst = worst.max((erm.report.margin - oracle).abs());
        if let Some(term) = run.finite_class_term {
            worst = worst.max((term - oracle).abs());
        } else {
            worst = f64::INFINITY;
        }
        if risk[run.erm_index] <= erm.report.upper {
            hits += 1;
        }
    }
    let coverage = hits as f64 / cfg.replications as f64;
    outcome(
        worst <= 1e-10 && coverage >= 0.90,
        format!("margin {oracle:.6} matched within {worst:.1e}, coverage {coverage:.3} over {} replications", cfg.replications),
    )
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion, Option<Duration>); 11] = [
        ("divergence closed form", divergence_closed_form, Some(Duration::from_secs(5))),
        ("Hölder core inequality", holder_inequality, Some(Duration::from_secs(10))),
        ("r̄ₙ solver", rbar_solver, Some(Duration::from_secs(5))),
        ("minimizer identity", minimizer_identity, Some(Duration::from_secs(30))),
        ("scaling equivariance", scaling_equivariance, None),
        ("coverage, i.i.d. heavy-tailed", coverage_iid, Some(Duration::from_secs(300))),
        ("coverage, dependent", coverage_dependent, Some(Duration::from_secs(300))),
        ("oracle rate", oracle_rate, None),
        ("rate shape", rate_shape, None),
        ("moment-bound validity", moment_validity_all, None),
        ("finite-class sub-Gaussian path", finite_class_subgaussian, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => {
                let over = budget.is_some_and(|b| elapsed > b);
                let detail = if over { format!("{}; over the {:?} budget", o.detail, budget.unwrap()) } else { o.detail };
                (o.passed && !over, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<32} {}  {}  [{:.2}s]",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
