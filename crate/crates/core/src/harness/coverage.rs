//! Monte Carlo coverage of the bounds against closed-form true risks.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use super::bound::support_min;
use super::config::{Assumptions, ExperimentConfig, Setup};
use crate::aggregation::{self, pac_margin};
use crate::datagen;
use crate::error::{invalid, Error, Result};
use crate::ext_real;
use crate::moments::deviation_moment;
use crate::param_space::{expectation, DiscreteDistribution};
use crate::risk::empirical_risk_direct;
use crate::rng::{data_stream, probe_stream, StreamRng};

/// Fewest replications a coverage run accepts.
pub const MIN_REPLICATIONS: usize = 50;
/// Largest support of a sparse probe.
const SPARSE_SUPPORT: usize = 10;

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub rbar: f64,
    pub rn_min: f64,
    pub rho_hat_rn: f64,
    pub rho_hat_risk: f64,
    pub rho_hat_margin: f64,
    pub rho_hat_divergence_plus_one: f64,
    /// |∫R dρ − ∫rₙ dρ| ≤ margin(ρ) for ρ̂ₙ and every probe.
    pub bound_hit: bool,
    /// min over checked ρ of margin(ρ) − |∫R dρ − ∫rₙ dρ|.
    #[serde(serialize_with = "ext_real::serialize")]
    pub bound_slack: f64,
    /// ∫R dρ̂ₙ ≤ r̄ₙ ≤ min over candidates of ∫R dρ + 2 margin(ρ).
    pub oracle_hit: bool,
    /// ∫R dρ̂ₙ ≤ R̄ₙ.
    pub population_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity_d: Option<f64>,
    /// inf rₙ + 2(M/δ)^{1/(q+d)}, when the complexity check passed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_hit: Option<bool>,
    /// (r̄ₙ − inf rₙ)/2 lies in the verified γ range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_gamma_in_range: Option<bool>,
    /// Σⱼ πⱼ |rₙ(θⱼ) − R(θⱼ)|^q.
    pub deviation_moment: f64,
    pub assumptions: Assumptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub assumptions: Assumptions,
    pub replications: usize,
    pub probes: usize,
    pub coverage_bound: f64,
    pub coverage_oracle: f64,
    pub coverage_population: f64,
    /// Replications where the complexity check passed and the two-sided event held.
    pub rate_replications: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_rate: Option<f64>,
    /// Mean of r̄ₙ − ∫R dρ̂ₙ.
    pub mean_slack: f64,
    pub median_margin: f64,
    pub prior_margin: f64,
    pub mean_rbar: f64,
    pub rbar_population: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_rate_bound: Option<f64>,
    /// Average of the per-replication deviation moments: a Monte Carlo
    /// estimate of M, never used inside a bound.
    pub empirical_moment: f64,
    pub moment_bound: f64,
    #[serde(skip)]
    pub records: Vec<ReplicationRecord>,
}

struct Shared<'a> {
    setup: &'a Setup,
    risk: Vec<f64>,
    rbar_population: f64,
}

pub fn run_coverage(config: &ExperimentConfig) -> Result<CoverageReport> {
    let setup = config.setup()?;
    run_coverage_setup(&setup)
}

pub fn run_coverage_setup(setup: &Setup) -> Result<CoverageReport> {
    let config = &setup.config;
    if config.replications < MIN_REPLICATIONS {
        return Err(Error::Config(format!(
            "coverage needs at least {MIN_REPLICATIONS} replications, got {}",
            config.replications
        )));
    }
    let risk = match datagen::true_risk_closed_form(&config.generator, &setup.atoms, config.loss) {
        Ok(r) => r,
        Err(Error::Unsupported(msg)) => {
            return Err(Error::Config(format!("coverage needs a closed-form true risk: {msg}")))
        }
        Err(e) => return Err(e),
    };
    let cfg = &setup.bound;
    let rbar_population = if cfg.moment.value > 0.0 {
        aggregation::solve_rbar_population(&risk, &setup.pi, cfg.q, cfg.moment.value, cfg.delta)?
    } else {
        support_min(&risk, &setup.pi)
    };
    let shared = Shared { setup, risk, rbar_population };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let records: Vec<ReplicationRecord> = pool.install(|| {
        (0..config.replications).into_par_iter().map(|r| replicate(&shared, r)).collect::<Result<Vec<_>>>()
    })?;

    let population_rate_bound = match &config.complexity {
        Some(c) => {
            let est = c.verify(&shared.risk, &setup.pi)?;
            if est.satisfied {
                let r_min = support_min(&shared.risk, &setup.pi);
                Some(aggregation::oracle_bound_population(r_min, cfg.moment.value, cfg.delta, cfg.q, est.d)?)
            } else {
                None
            }
        }
        None => None,
    };
    Ok(summarize(setup, records, rbar_population, population_rate_bound))
}

fn fraction(records: &[ReplicationRecord], pred: impl Fn(&ReplicationRecord) -> bool) -> f64 {
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

fn summarize(
    setup: &Setup,
    records: Vec<ReplicationRecord>,
    rbar_population: f64,
    population_rate_bound: Option<f64>,
) -> CoverageReport {
    let reps = records.len();
    let mean = |f: &dyn Fn(&ReplicationRecord) -> f64| records.iter().map(f).sum::<f64>() / reps as f64;
    let rated: Vec<&ReplicationRecord> = records.iter().filter(|r| r.bound_hit && r.rate_hit.is_some()).collect();
    let coverage_rate = if rated.is_empty() {
        None
    } else {
        Some(rated.iter().filter(|r| r.rate_hit == Some(true)).count() as f64 / rated.len() as f64)
    };
    let mut margins: Vec<f64> = records.iter().map(|r| r.rho_hat_margin).collect();
    CoverageReport {
        assumptions: setup.assumptions(),
        replications: reps,
        probes: setup.config.probes,
        coverage_bound: fraction(&records, |r| r.bound_hit),
        coverage_oracle: fraction(&records, |r| r.oracle_hit),
        coverage_population: fraction(&records, |r| r.population_hit),
        rate_replications: rated.len(),
        coverage_rate,
        mean_slack: mean(&|r| r.rbar - r.rho_hat_risk),
        median_margin: median(&mut margins),
        prior_margin: pac_margin(&setup.bound, 1.0),
        mean_rbar: mean(&|r| r.rbar),
        rbar_population,
        population_rate_bound,
        empirical_moment: mean(&|r| r.deviation_moment),
        moment_bound: setup.bound.moment.value,
        records,
    }
}

/// Random aggregation distribution: even indices are flat Dirichlet over all
/// atoms, odd indices are Dirichlet on a random support of at most 10 atoms.
pub fn random_probe(rng: &mut StreamRng, k: usize, sparse: bool) -> DiscreteDistribution {
    let mut masses = vec![0.0; k];
    if sparse {
        let size = rng.random_range(1..=k.min(SPARSE_SUPPORT));
        let mut idx: Vec<usize> = (0..k).collect();
        for i in 0..size {
            let j = rng.random_range(i..k);
            idx.swap(i, j);
            masses[idx[i]] = Exp1.sample(rng);
        }
    } else {
        masses.iter_mut().for_each(|m| *m = Exp1.sample(rng));
    }
    if masses.iter().all(|m| *m == 0.0) {
        masses[0] = 1.0;
    }
    DiscreteDistribution::from_masses(masses).expect("positive masses")
}

fn replicate(shared: &Shared, r: usize) -> Result<ReplicationRecord> {
    let setup = shared.setup;
    let config = &setup.config;
    let cfg = &setup.bound;
    let pi = &setup.pi;
    let risk = &shared.risk;

    let data = datagen::generate_with_rng(&config.generator, config.n, &mut data_stream(config.seed, r as u64))?;
    let rn = empirical_risk_direct(&data, &setup.atoms, config.loss)?;
    let min = aggregation::minimized_objective_identity(&rn, pi, cfg)?;
    let rho_report = aggregation::evaluate_bound(&min.rho_hat, pi, &rn, cfg)?;
    let rho_hat_risk = expectation(&min.rho_hat, risk)?;

    // two-sided event over ρ̂ₙ and the probes; each checked ρ also competes in
    // the oracle infimum
    let mut slack = rho_report.margin - (rho_hat_risk - rho_report.rn_integral).abs();
    let mut oracle_inf = rho_hat_risk + 2.0 * rho_report.margin;
    let mut rng = probe_stream(config.seed, r as u64);
    for i in 0..config.probes {
        let probe = random_probe(&mut rng, pi.len(), i % 2 == 1);
        let rep = aggregation::evaluate_bound(&probe, pi, &rn, cfg)?;
        let probe_risk = expectation(&probe, risk)?;
        slack = slack.min(rep.margin - (probe_risk - rep.rn_integral).abs());
        oracle_inf = oracle_inf.min(probe_risk + 2.0 * rep.margin);
    }
    // π and every Dirac mass on the support join the oracle infimum
    oracle_inf = oracle_inf.min(expectation(pi, risk)? + 2.0 * pac_margin(cfg, 1.0));
    for j in pi.support() {
        let w = pi.weight(j);
        oracle_inf = oracle_inf.min(risk[j] + 2.0 * pac_margin(cfg, w.powf(1.0 - cfg.p)));
    }
    let bound_hit = slack >= 0.0;

    let rn_min = support_min(&rn, pi);
    let (mut complexity_d, mut rate_bound, mut rate_hit, mut rate_gamma_in_range) = (None, None, None, None);
    if let Some(c) = &config.complexity {
        let est = c.verify(&rn, pi)?;
        complexity_d = Some(est.d);
        if est.satisfied {
            let bound = aggregation::oracle_bound_empirical(rn_min, cfg.moment.value, cfg.delta, cfg.q, est.d)?;
            rate_bound = Some(bound);
            rate_hit = Some(rho_hat_risk <= bound);
            let half = 0.5 * (min.rbar - rn_min);
            rate_gamma_in_range = Some(half >= est.gamma_interval.0 && half <= est.gamma_interval.1);
        }
    }

    Ok(ReplicationRecord {
        replication: r,
        rbar: min.rbar,
        rn_min,
        rho_hat_rn: rho_report.rn_integral,
        rho_hat_risk,
        rho_hat_margin: rho_report.margin,
        rho_hat_divergence_plus_one: rho_report.divergence_plus_one,
        bound_hit,
        bound_slack: slack,
        oracle_hit: rho_hat_risk <= min.rbar && min.rbar <= oracle_inf,
        population_hit: rho_hat_risk <= shared.rbar_population,
        complexity_d,
        rate_bound,
        rate_hit,
        rate_gamma_in_range,
        deviation_moment: deviation_moment(&rn, risk, pi, cfg.q),
        assumptions: setup.assumptions(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::tests_support::REGRESSION;

    fn config(extra: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(&REGRESSION.replace("probes = 10", &format!("probes = 10\n{extra}"))).unwrap()
    }

    #[test]
    fn coverage_is_deterministic_across_worker_counts() {
        let a = run_coverage(&config("workers = 1")).unwrap();
        let b = run_coverage(&config("workers = 3")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.len(), 50);
        assert!((0.0..=1.0).contains(&a.coverage_bound));
    }

    #[test]
    fn inflation_never_lowers_coverage() {
        let base = run_coverage(&config("")).unwrap();
        let loose = run_coverage(&config("moment_inflation = 100.0")).unwrap();
        assert!(loose.coverage_bound >= base.coverage_bound);
        assert_eq!(loose.coverage_bound, 1.0);
        for (a, b) in base.records.iter().zip(&loose.records) {
            assert!(b.bound_slack >= a.bound_slack || !a.bound_hit);
        }
    }

    #[test]
    fn zero_probes_checks_rho_hat_only() {
        let cfg = ExperimentConfig::from_toml_str(&REGRESSION.replace("probes = 10", "probes = 0")).unwrap();
        let rep = run_coverage(&cfg).unwrap();
        for r in &rep.records {
            let own = r.rho_hat_margin - (r.rho_hat_risk - r.rho_hat_rn).abs();
            assert_eq!(r.bound_slack, own);
        }
    }

    #[test]
    fn rejects_small_runs_and_missing_oracles() {
        let small = ExperimentConfig::from_toml_str(&REGRESSION.replace("replications = 50", "replications = 10")).unwrap();
        assert!(matches!(run_coverage(&small), Err(Error::Config(_))));
        let abs = REGRESSION.replace("kind = \"squared\"", "kind = \"absolute\"").replace("kind = \"variance\"", "kind = \"variance\"\ns2 = 4.0");
        assert!(matches!(run_coverage(&ExperimentConfig::from_toml_str(&abs).unwrap()), Err(Error::Config(_))));
    }

    #[test]
    fn probes_are_distributions() {
        let mut rng = probe_stream(1, 0);
        for i in 0..200 {
            let p = random_probe(&mut rng, 37, i % 2 == 1);
            assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if i % 2 == 1 {
                assert!(p.support().count() <= SPARSE_SUPPORT);
            }
        }
    }
}
