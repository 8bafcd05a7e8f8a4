//! Single-dataset runs: bound reports for the standard aggregation
//! distributions, and the ρ̂ₙ weights themselves.

use serde::Serialize;

use super::config::{Assumptions, ExperimentConfig, Setup};
use crate::aggregation::{self, BoundReport, ComplexityEstimate};
use crate::datagen;
use crate::error::{Error, Result};
use crate::param_space::{expectation, DiscreteDistribution};
use crate::risk::{empirical_risk_direct, Dataset};
use crate::rng::data_stream;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: &'static str,
    #[serde(flatten)]
    pub report: BoundReport,
    /// ∫R dρ when the generator has a closed-form risk.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub risk_integral: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRun {
    pub assumptions: Assumptions,
    pub erm_index: usize,
    pub rbar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity: Option<ComplexityEstimate>,
    /// γ used for π_γ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// σ √(2e log(2K/δ)/n) when the exponent was optimized for a finite class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_class_term: Option<f64>,
    pub bounds: Vec<NamedBound>,
}

impl BoundRun {
    pub fn get(&self, name: &str) -> Option<&NamedBound> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

/// The dataset a single run uses: replication 0 of the configured seed.
pub fn primary_dataset(config: &ExperimentConfig) -> Result<Dataset> {
    datagen::generate_with_rng(&config.generator, config.n, &mut data_stream(config.seed, 0))
}

pub fn run_bound(config: &ExperimentConfig) -> Result<BoundRun> {
    let setup = config.setup()?;
    let data = primary_dataset(config)?;
    run_bound_on(&setup, &data)
}

/// Bound reports for ρ̂ₙ, π_γ (when the complexity check passes), the Dirac
/// mass at the ERM atom, and π itself.
pub fn run_bound_on(setup: &Setup, data: &Dataset) -> Result<BoundRun> {
    let cfg = &setup.bound;
    let pi = &setup.pi;
    let rn = empirical_risk_direct(data, &setup.atoms, setup.config.loss)?;
    let risk = match datagen::true_risk_closed_form(&setup.config.generator, &setup.atoms, setup.config.loss) {
        Ok(r) => Some(r),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let min = aggregation::minimized_objective_identity(&rn, pi, cfg)?;
    let erm = aggregation::erm_index(&rn)?;

    let complexity = match &setup.config.complexity {
        Some(c) => {
            let est = c.verify(&rn, pi)?;
            if c.require && !est.satisfied {
                return Err(Error::AssumptionViolated(format!(
                    "empirical complexity check failed on γ ∈ [{}, {}]",
                    est.gamma_interval.0, est.gamma_interval.1
                )));
            }
            Some(est)
        }
        None => None,
    };
    let certified = complexity.filter(|c| c.satisfied);

    let risk_integral = |rho: &DiscreteDistribution| -> Result<Option<f64>> {
        risk.as_ref().map(|r| expectation(rho, r)).transpose()
    };

    let mut rho_report = aggregation::evaluate_bound(&min.rho_hat, pi, &rn, cfg)?;
    rho_report.rbar = Some(min.rbar);
    if let Some(c) = certified {
        let rn_min = support_min(&rn, pi);
        rho_report.oracle_empirical = Some(aggregation::oracle_bound_empirical(rn_min, cfg.moment.value, cfg.delta, cfg.q, c.d)?);
    }
    if let (Some(r), Some(c)) = (&risk, &setup.config.complexity) {
        let est = c.verify(r, pi)?;
        if est.satisfied {
            let r_min = support_min(r, pi);
            rho_report.oracle_population =
                Some(aggregation::oracle_bound_population(r_min, cfg.moment.value, cfg.delta, cfg.q, est.d)?);
        }
    }
    let mut bounds =
        vec![NamedBound { name: "rho_hat", risk_integral: risk_integral(&min.rho_hat)?, report: rho_report }];

    let mut gamma = None;
    if let Some(c) = certified {
        let g = aggregation::optimal_gamma(c.d, cfg.p, cfg.moment.value.max(f64::MIN_POSITIVE), cfg.delta)?;
        let pi_gamma = aggregation::catoni_pi_gamma(&rn, pi, g)?;
        bounds.push(NamedBound {
            name: "pi_gamma",
            risk_integral: risk_integral(&pi_gamma)?,
            report: aggregation::evaluate_bound(&pi_gamma, pi, &rn, cfg)?,
        });
        gamma = Some(g);
    }
    let dirac = DiscreteDistribution::dirac(pi.len(), erm)?;
    bounds.push(NamedBound {
        name: "dirac_erm",
        risk_integral: risk_integral(&dirac)?,
        report: aggregation::evaluate_bound(&dirac, pi, &rn, cfg)?,
    });
    bounds.push(NamedBound {
        name: "prior",
        risk_integral: risk_integral(pi)?,
        report: aggregation::evaluate_bound(pi, pi, &rn, cfg)?,
    });

    let finite_class_term = match (setup.optimal_q, setup.regime) {
        (Some(_), crate::moments::MomentRegime::SubGaussian { sigma2 }) => {
            Some(crate::moments::optimized_finite_bound(sigma2, setup.config.n, pi.len(), cfg.delta)?)
        }
        _ => None,
    };

    Ok(BoundRun {
        assumptions: setup.assumptions(),
        erm_index: erm,
        rbar: min.rbar,
        complexity,
        gamma,
        finite_class_term,
        bounds,
    })
}

pub(crate) fn support_min(values: &[f64], pi: &DiscreteDistribution) -> f64 {
    values.iter().zip(pi.weights()).filter(|(_, &w)| w > 0.0).map(|(v, _)| *v).fold(f64::INFINITY, f64::min)
}

/// ρ̂ₙ with its atoms, for the `aggregate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub assumptions: Assumptions,
    pub rbar: f64,
    pub objective: f64,
    pub erm_index: usize,
    pub weights: Vec<f64>,
    pub atoms: Vec<Vec<f64>>,
}

pub fn run_aggregate_on(setup: &Setup, data: &Dataset) -> Result<Aggregate> {
    let rn = empirical_risk_direct(data, &setup.atoms, setup.config.loss)?;
    let min = aggregation::minimized_objective_identity(&rn, &setup.pi, &setup.bound)?;
    Ok(Aggregate {
        assumptions: setup.assumptions(),
        rbar: min.rbar,
        objective: min.objective,
        erm_index: aggregation::erm_index(&rn)?,
        weights: min.rho_hat.weights().to_vec(),
        atoms: setup.atoms.iter().map(|a| a.coords().to_vec()).collect(),
    })
}
