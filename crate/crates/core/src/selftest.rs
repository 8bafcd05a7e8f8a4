//! Closed-form worked examples, evaluated through the public API.

use serde::Serialize;

use crate::aggregation::{self, BoundConfig};
use crate::divergence::{divergence_plus_one_uniform, f_divergence, DivergenceKind};
use crate::error::Result;
use crate::moments::{self, MomentBound, MomentRegime, RegimeTag};
use crate::param_space::{expectation, prior_moment_tau, AtomSet, DiscreteDistribution};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    #[serde(with = "crate::ext_real")]
    pub value: f64,
    #[serde(with = "crate::ext_real")]
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTest {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SelfTest {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Check {
    let passed = if expected.is_infinite() || value.is_infinite() {
        value == expected
    } else {
        (value - expected).abs() <= tolerance * expected.abs().max(1.0)
    };
    Check { name, value, expected, tolerance, passed }
}

fn dist(w: &[f64]) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(w.to_vec())
}

fn bound_cfg(p: f64, m: f64, delta: f64) -> Result<BoundConfig> {
    let q = p / (p - 1.0);
    BoundConfig::new(p, delta, MomentBound { value: m, q, n: 1, regime: RegimeTag::IidVariance })
}

pub fn run() -> Result<SelfTest> {
    const EXACT: f64 = 1e-12;
    const TIGHT: f64 = 1e-10;
    const SCALAR: f64 = 1e-5;
    let mut c = Vec::new();

    // Parameter space.
    c.push(check("expectation_two_atoms", expectation(&dist(&[0.25, 0.75])?, &[4.0, 0.0])?, 1.0, EXACT));
    let one_one = AtomSet::from_coords(vec![vec![1.0, 1.0]])?;
    c.push(check("tau_single_atom", prior_moment_tau(&one_one, &DiscreteDistribution::dirac(1, 0)?)?, 4.0, EXACT));
    let pm = AtomSet::from_coords(vec![vec![-1.0], vec![1.0]])?;
    c.push(check("tau_symmetric_pair", prior_moment_tau(&pm, &DiscreteDistribution::uniform(2)?)?, 1.0, EXACT));

    // Divergences.
    let u10 = DiscreteDistribution::uniform(10)?;
    let d10 = DiscreteDistribution::dirac(10, 3)?;
    c.push(check("phi2_dirac_k10", f_divergence(&d10, &u10, DivergenceKind::PhiP { p: 2.0 })? + 1.0, 10.0, EXACT));
    let rho = dist(&[0.5, 0.5])?;
    let pi = dist(&[0.25, 0.75])?;
    c.push(check("chi_square_two_atoms", f_divergence(&rho, &pi, DivergenceKind::ChiSquare)?, 1.0 / 3.0, EXACT));
    c.push(check("kl_two_atoms", f_divergence(&rho, &pi, DivergenceKind::KL)?, 0.5 * (4.0f64 / 3.0).ln(), EXACT));
    let null = dist(&[1.0, 0.0])?;
    c.push(check("null_atom_infinite", f_divergence(&null, &dist(&[0.0, 1.0])?, DivergenceKind::KL)?, f64::INFINITY, 0.0));
    c.push(check("uniform_closed_form_half_half", divergence_plus_one_uniform(&dist(&[0.5, 0.5, 0.0, 0.0])?, 4, 2.0)?, 2.0, EXACT));

    // Moment bounds.
    c.push(check("iid_variance_q2", moments::moment_iid_variance(4.0, 100, 2.0)?.value, 0.04, EXACT));
    c.push(check("iid_variance_q1_5", moments::moment_iid_variance(4.0, 100, 1.5)?.value, 0.04f64.powf(0.75), EXACT));
    c.push(check("subgaussian_q2", moments::moment_subgaussian(1.0, 100, 2.0)?.value, 0.04, EXACT));
    c.push(check("subgaussian_q4", moments::moment_subgaussian(1.0, 100, 4.0)?.value, 0.0032, EXACT));
    c.push(check("mixing_bounded", moments::moment_mixing_bounded(2.0, 100)?.value, 0.02, EXACT));
    let geo = moments::geometric_alpha_sum(1.0, 1.0, 1.0)?;
    c.push(check("geometric_alpha_sum", geo, 2.0 / (1.0 - (-1.0f64).exp()), EXACT));
    c.push(check("geometric_alpha_sum_power3", moments::geometric_alpha_sum(1.0, 3.0, 3.0)?, geo, EXACT));
    c.push(check("mixing_bounded_geometric", moments::moment_mixing_bounded(geo, 100)?.value, 0.0316492, SCALAR));
    let unbounded = |factor, integral, frac| MomentRegime::MixingUnbounded {
        r: 3.0,
        s: 3.0,
        moment_integral: integral,
        alpha_frac_sum: frac,
        davydov_factor: factor,
    };
    c.push(check("mixing_unbounded_davydov", moments::moment_mixing_unbounded(&unbounded(8.0, 1.0, 1.0), 100)?.value, 0.08, EXACT));
    c.push(check("mixing_unbounded_unit_factor", moments::moment_mixing_unbounded(&unbounded(1.0, 2.0, 3.0), 100)?.value, 0.06, EXACT));
    c.push(check("kappa_quadratic", moments::kappa_quadratic(9.0, 2.0, 3.0)?, 120.0, EXACT));
    c.push(check("kappa_student_t5", moments::kappa_quadratic(25.0, 1.0, 3.0)?, 224.0, EXACT));
    c.push(check("optimal_q_k10", moments::optimal_q_finite(10, 0.05)?.q, 2.0 * 400.0f64.ln(), EXACT));
    c.push(check("optimized_finite_term", moments::optimized_finite_bound(1.0, 100, 10, 0.05)?, (2.0 * std::f64::consts::E * 400.0f64.ln() / 100.0).sqrt(), EXACT));

    // Bounds and aggregation.
    c.push(check("margin_dirac_k10", aggregation::pac_margin(&bound_cfg(2.0, 0.004, 0.1)?, 10.0), 0.632456, SCALAR));
    c.push(check("margin_prior", aggregation::pac_margin(&bound_cfg(2.0, 0.04, 0.1)?, 1.0), 0.4f64.sqrt(), EXACT));
    let cfg = bound_cfg(2.0, 0.04, 0.1)?;
    let u3 = DiscreteDistribution::uniform(3)?;
    c.push(check("upper_prior_constant_rn", aggregation::evaluate_bound(&u3, &u3, &[0.5; 3], &cfg)?.upper, 0.5 + 0.4f64.sqrt(), EXACT));
    let cfg_k10 = bound_cfg(2.0, 0.001, 0.1)?;
    let rn10: Vec<f64> = (0..10).map(|j| j as f64 / 10.0).collect();
    let erm = DiscreteDistribution::dirac(10, aggregation::erm_index(&rn10)?)?;
    c.push(check("margin_finite_class", aggregation::evaluate_bound(&erm, &u10, &rn10, &cfg_k10)?.margin, 0.1 * 10.0f64.sqrt(), EXACT));
    let half = dist(&[0.5, 0.5])?;
    c.push(check("rbar_two_atoms_low", aggregation::solve_rbar(&[0.0, 1.0], &half, 2.0, 0.0125, 0.1)?, 0.5, TIGHT));
    let rbar_hi = aggregation::solve_rbar(&[0.0, 1.0], &half, 2.0, 0.0625, 0.1)?;
    c.push(check("rbar_two_atoms_high", rbar_hi, (1.0 + 1.5f64.sqrt()) / 2.0, TIGHT));
    c.push(check("rbar_single_atom", aggregation::solve_rbar(&[0.3], &dist(&[1.0])?, 3.0, 0.08, 0.1)?, 0.3 + 0.8f64.powf(1.0 / 3.0), TIGHT));
    let rh = aggregation::rho_hat(&[0.0, 1.0], &half, 2.0, rbar_hi)?;
    c.push(check("rho_hat_two_atoms", rh.weight(0), 0.908248, SCALAR));
    let pg = aggregation::catoni_pi_gamma(&[0.0, 0.1, 1.0], &u3, 0.2)?;
    c.push(check("pi_gamma_two_qualify", pg.weight(0) + pg.weight(1), 1.0, EXACT));
    c.push(check("optimal_gamma_d2", aggregation::optimal_gamma(2.0, 2.0, 0.001, 0.1)?, 0.1, EXACT));
    c.push(check("optimal_gamma_d1", aggregation::optimal_gamma(1.0, 2.0, 0.004, 0.1)?, 0.02f64.powf(2.0 / 3.0), EXACT));
    c.push(check("erm_tie_break", aggregation::erm_index(&[0.3, 0.1, 0.1])? as f64, 1.0, 0.0));
    c.push(check("oracle_empirical", aggregation::oracle_bound_empirical(0.2, 1e-5, 0.1, 2.0, 2.0)?, 0.4, EXACT));
    c.push(check("oracle_population_unit", aggregation::oracle_bound_population(0.0, 0.1, 0.1, 2.0, 2.0)?, 2.0f64.sqrt(), EXACT));
    c.push(check("oracle_population", aggregation::oracle_bound_population(0.1, 1e-5, 0.1, 2.0, 2.0)?, 0.241421, SCALAR));

    let failed = c.iter().filter(|x| !x.passed).count();
    Ok(SelfTest { passed: c.len() - failed, failed, checks: c })
}
