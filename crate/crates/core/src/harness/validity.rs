//! Repeated Monte Carlo estimates of the moment term, compared with the
//! regime's bound.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Assumptions, ExperimentConfig};
use crate::datagen;
use crate::error::{invalid, Result};
use crate::moments::deviation_moment;
use crate::risk::{empirical_risk_direct, true_risk, MonteCarlo};
use crate::rng::data_stream;

/// Oracle draws used when the generator has no closed-form risk.
pub const ORACLE_DRAWS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub assumptions: Assumptions,
    pub runs: usize,
    pub replications: usize,
    /// The moment bound before inflation.
    pub bound: f64,
    pub estimates: Vec<f64>,
    /// Share of runs whose estimate is at most the bound.
    pub fraction_within: f64,
    /// Largest Monte Carlo standard error of the oracle risk, zero for closed forms.
    pub oracle_std_error: f64,
}

/// `runs` independent estimates, each averaging `config.replications` datasets.
pub fn moment_validity(config: &ExperimentConfig, runs: usize) -> Result<MomentCheck> {
    if runs == 0 || config.replications < 2 {
        return Err(invalid("moment validity needs runs >= 1 and replications >= 2"));
    }
    let setup = config.setup()?;
    let oracle = true_risk(
        &config.generator,
        &setup.atoms,
        config.loss,
        Some(MonteCarlo { draws: ORACLE_DRAWS, seed: config.seed }),
    )?;
    let oracle_std_error = oracle.std_errors.as_ref().map_or(0.0, |s| s.iter().copied().fold(0.0, f64::max));
    let risk = oracle.values;
    let q = setup.bound.q;
    let bound = setup.bound.moment.value / config.moment_inflation;
    let reps = config.replications;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let deviations: Vec<f64> = pool.install(|| {
        (0..runs * reps)
            .into_par_iter()
            .map(|i| {
                let mut rng = data_stream(config.seed, i as u64);
                let data = datagen::generate_with_rng(&config.generator, config.n, &mut rng)?;
                let rn = empirical_risk_direct(&data, &setup.atoms, config.loss)?;
                Ok(deviation_moment(&rn, &risk, &setup.pi, q))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let estimates: Vec<f64> = deviations.chunks(reps).map(|c| c.iter().sum::<f64>() / reps as f64).collect();
    let fraction_within = estimates.iter().filter(|e| **e <= bound).count() as f64 / runs as f64;
    Ok(MomentCheck { assumptions: setup.assumptions(), runs, replications: reps, bound, estimates, fraction_within, oracle_std_error })
}
