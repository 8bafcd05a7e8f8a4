//! PAC-Bayesian bound evaluation and the optimal aggregation distribution.
//!
//! With probability at least 1 − δ, simultaneously for every ρ,
//! `|∫R dρ − ∫rₙ dρ| ≤ (M/δ)^{1/q} (D_{φp−1}(ρ, π) + 1)^{1/p}`, q = p/(p − 1).
//! The right-hand side of the upper bound is minimized by ρ̂ₙ, whose density
//! against π is proportional to `[r̄ₙ − rₙ]₊^{1/(p−1)}`, and the minimum equals
//! r̄ₙ, the root of `∫[u − rₙ]₊^q dπ = M/δ`.

use serde::Serialize;

use crate::divergence::{f_divergence, DivergenceKind};
use crate::error::{ensure_len, invalid, Error, Result};
use crate::ext_real;
use crate::moments::{check_delta, MomentBound};
use crate::param_space::{expectation, DiscreteDistribution};

/// Relative residual accepted by the r̄ₙ solver.
pub const RBAR_TOLERANCE: f64 = 1e-10;
/// Iteration cap of the r̄ₙ bisection.
pub const RBAR_MAX_ITER: usize = 200;
/// Largest complexity exponent reported as satisfied.
pub const D_MAX: f64 = 64.0;
/// Resolution of reported complexity exponents.
pub const D_RESOLUTION: f64 = 1e-3;

/// Exponents, confidence level and moment bound of one bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConfig {
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    pub moment: MomentBound,
}

impl BoundConfig {
    pub fn new(p: f64, delta: f64, moment: MomentBound) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(invalid(format!("p must be finite and > 1, got {p}")));
        }
        check_delta(delta)?;
        let q = p / (p - 1.0);
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
            return Err(Error::Numerical(format!("conjugate exponent drifted for p = {p}")));
        }
        if (moment.q - q).abs() > 1e-9 * q.max(1.0) {
            return Err(invalid(format!("moment bound was computed for q = {}, but p = {p} needs q = {q}", moment.q)));
        }
        if !(moment.value >= 0.0) || !moment.value.is_finite() {
            return Err(invalid(format!("moment bound must be finite and >= 0, got {}", moment.value)));
        }
        Ok(Self { p, q, delta, moment })
    }

    /// M/δ.
    pub fn level(&self) -> f64 {
        self.moment.value / self.delta
    }
}

/// (M/δ)^{1/q} (D + 1)^{1/p}, with +∞ propagated.
pub fn pac_margin(cfg: &BoundConfig, div_plus_one: f64) -> f64 {
    if div_plus_one == f64::INFINITY {
        return f64::INFINITY;
    }
    cfg.level().powf(1.0 / cfg.q) * div_plus_one.powf(1.0 / cfg.p)
}

/// Two-sided bound for one aggregation distribution, plus optional oracle
/// quantities when the report describes ρ̂ₙ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub rn_integral: f64,
    #[serde(serialize_with = "ext_real::serialize")]
    pub margin: f64,
    #[serde(serialize_with = "ext_real::serialize")]
    pub upper: f64,
    #[serde(serialize_with = "ext_real::serialize")]
    pub lower: f64,
    #[serde(serialize_with = "ext_real::serialize")]
    pub divergence_plus_one: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_population: Option<f64>,
}

/// D_{φp−1}(ρ, π) + 1.
pub fn divergence_plus_one(rho: &DiscreteDistribution, pi: &DiscreteDistribution, p: f64) -> Result<f64> {
    Ok(f_divergence(rho, pi, DivergenceKind::PhiP { p })? + 1.0)
}

pub fn evaluate_bound(
    rho: &DiscreteDistribution,
    pi: &DiscreteDistribution,
    rn: &[f64],
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    ensure_len(pi.len(), rho.len())?;
    ensure_len(pi.len(), rn.len())?;
    let rn_integral = expectation(rho, rn)?;
    let div = divergence_plus_one(rho, pi, cfg.p)?;
    let margin = pac_margin(cfg, div);
    Ok(BoundReport {
        rn_integral,
        margin,
        upper: rn_integral + margin,
        lower: rn_integral - margin,
        divergence_plus_one: div,
        rbar: None,
        oracle_empirical: None,
        oracle_population: None,
    })
}

/// ∫rₙ dρ + (M/δ)^{1/q}(D + 1)^{1/p}: the upper bound as a function of ρ.
pub fn objective(rho: &DiscreteDistribution, pi: &DiscreteDistribution, rn: &[f64], cfg: &BoundConfig) -> Result<f64> {
    Ok(evaluate_bound(rho, pi, rn, cfg)?.upper)
}

/// Smallest u with Σⱼ πⱼ [u − rₙⱼ]₊^q = M/δ.
pub fn solve_rbar(rn: &[f64], pi: &DiscreteDistribution, q: f64, m: f64, delta: f64) -> Result<f64> {
    ensure_len(pi.len(), rn.len())?;
    if !(q >= 1.0) || !q.is_finite() {
        return Err(invalid(format!("q must be finite and >= 1, got {q}")));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(invalid(format!("moment bound must be finite and > 0 to solve for r̄, got {m}")));
    }
    check_delta(delta)?;
    let target = m / delta;

    let support = || rn.iter().zip(pi.weights()).filter(|(_, &w)| w > 0.0);
    if support().any(|(r, _)| r.is_nan() || *r == f64::NEG_INFINITY) {
        return Err(invalid("empirical risks must not be NaN or -inf on the prior support"));
    }
    let base = support().map(|(r, _)| *r).fold(f64::INFINITY, f64::min);
    if !base.is_finite() {
        return Err(invalid("all prior mass sits on atoms with infinite empirical risk"));
    }
    let w_star: f64 = support().filter(|(r, _)| **r == base).map(|(_, w)| w).sum();
    // gaps from the minimum, restricted to the support
    let gaps: Vec<(f64, f64)> = support().map(|(r, &w)| (r - base, w)).collect();
    let g = |x: f64| -> f64 {
        gaps.iter().filter(|(h, _)| *h < x).map(|(h, w)| w * (x - h).powf(q)).sum()
    };

    let mut lo = target.powf(1.0 / q);
    let mut hi = (target / w_star).powf(1.0 / q);
    if g(hi) < target {
        // w* rounding; widen until the bracket is valid
        hi *= 1.0 + 1e-12;
    }
    let mut iterations = 0;
    while iterations < RBAR_MAX_ITER {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (x, residual) = [lo, hi]
        .into_iter()
        .map(|x| (x, (g(x) - target).abs() / target))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    if residual > RBAR_TOLERANCE {
        return Err(Error::NonConvergence { iterations, residual });
    }
    Ok(base + x)
}

/// R̄ₙ: the population analogue of r̄ₙ, with M replaced by 2^q M.
pub fn solve_rbar_population(risk: &[f64], pi: &DiscreteDistribution, q: f64, m: f64, delta: f64) -> Result<f64> {
    solve_rbar(risk, pi, q, m * 2f64.powf(q), delta)
}

/// ρ̂ₙ ∝ πⱼ [r̄ − rₙⱼ]₊^{1/(p−1)}.
pub fn rho_hat(rn: &[f64], pi: &DiscreteDistribution, p: f64, rbar: f64) -> Result<DiscreteDistribution> {
    ensure_len(pi.len(), rn.len())?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(invalid(format!("p must be finite and > 1, got {p}")));
    }
    let exponent = 1.0 / (p - 1.0);
    let gap = |r: f64| if r < rbar { rbar - r } else { 0.0 };
    // scaling by the largest gap keeps large exponents from underflowing
    let scale = rn.iter().zip(pi.weights()).filter(|(_, &w)| w > 0.0).map(|(r, _)| gap(*r)).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Numerical(format!("no atom has empirical risk below r̄ = {rbar}")));
    }
    let masses: Vec<f64> = rn
        .iter()
        .zip(pi.weights())
        .map(|(r, &w)| if w > 0.0 { w * (gap(*r) / scale).powf(exponent) } else { 0.0 })
        .collect();
    DiscreteDistribution::from_masses(masses).map_err(|e| Error::Numerical(format!("ρ̂ normalization failed: {e}")))
}

/// r̄ₙ, ρ̂ₙ and the objective evaluated at ρ̂ₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub rbar: f64,
    pub rho_hat: DiscreteDistribution,
    pub objective: f64,
}

pub fn minimized_objective_identity(rn: &[f64], pi: &DiscreteDistribution, cfg: &BoundConfig) -> Result<Minimizer> {
    let rbar = solve_rbar(rn, pi, cfg.q, cfg.moment.value, cfg.delta)?;
    let rho = rho_hat(rn, pi, cfg.p, rbar)?;
    let objective = objective(&rho, pi, rn, cfg)?;
    Ok(Minimizer { rbar, rho_hat: rho, objective })
}

/// π restricted to {rₙ ≤ min rₙ + γ} and renormalized. The minimum is taken
/// over the support of π.
pub fn catoni_pi_gamma(rn: &[f64], pi: &DiscreteDistribution, gamma: f64) -> Result<DiscreteDistribution> {
    ensure_len(pi.len(), rn.len())?;
    if !(gamma >= 0.0) {
        return Err(invalid(format!("gamma must be >= 0, got {gamma}")));
    }
    let base = support_min(rn, pi)?;
    let masses: Vec<f64> =
        rn.iter().zip(pi.weights()).map(|(r, &w)| if *r <= base + gamma { w } else { 0.0 }).collect();
    DiscreteDistribution::from_masses(masses)
}

fn support_min(values: &[f64], pi: &DiscreteDistribution) -> Result<f64> {
    let base = values.iter().zip(pi.weights()).filter(|(_, &w)| w > 0.0).map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
    if !base.is_finite() {
        return Err(invalid("values must be finite somewhere on the prior support"));
    }
    Ok(base)
}

/// γ = (d(1 − 1/p) M/δ)^{1/(1 + d(1 − 1/p))}.
pub fn optimal_gamma(d: f64, p: f64, m: f64, delta: f64) -> Result<f64> {
    if !(d > 0.0) || !(p > 1.0) || !(m > 0.0) {
        return Err(invalid(format!("optimal gamma needs d > 0, p > 1, M > 0; got d = {d}, p = {p}, M = {m}")));
    }
    check_delta(delta)?;
    let a = d * (1.0 - 1.0 / p);
    Ok((a * m / delta).powf(1.0 / (1.0 + a)))
}

/// Index of the smallest empirical risk; ties go to the smallest index.
pub fn erm_index(rn: &[f64]) -> Result<usize> {
    if rn.is_empty() {
        return Err(invalid("empirical risk vector is empty"));
    }
    let mut best = 0;
    for (j, r) in rn.iter().enumerate() {
        if r.is_nan() {
            return Err(invalid(format!("empirical risk at atom {j} is NaN")));
        }
        if *r < rn[best] {
            best = j;
        }
    }
    Ok(best)
}

/// Certified exponent d with π{values ≤ inf + γ} ≥ γ^d on a γ range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityEstimate {
    pub d: f64,
    pub gamma_interval: (f64, f64),
    pub satisfied: bool,
}

/// Sublevel masses π{gap ≤ γ} as a sorted step function: (breakpoint, mass at and after it).
fn sublevel_steps(values: &[f64], pi: &DiscreteDistribution) -> Result<Vec<(f64, f64)>> {
    ensure_len(pi.len(), values.len())?;
    let base = support_min(values, pi)?;
    let mut gaps: Vec<(f64, f64)> =
        values.iter().zip(pi.weights()).filter(|(_, &w)| w > 0.0).map(|(v, &w)| (v - base, w)).collect();
    gaps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut steps: Vec<(f64, f64)> = Vec::with_capacity(gaps.len());
    let mut mass = 0.0;
    for (g, w) in gaps {
        mass += w;
        match steps.last_mut() {
            Some(last) if last.0 == g => last.1 = mass,
            _ => steps.push((g, mass)),
        }
    }
    Ok(steps)
}

fn mass_at(steps: &[(f64, f64)], gamma: f64) -> f64 {
    let idx = steps.partition_point(|(g, _)| *g <= gamma);
    if idx == 0 {
        0.0
    } else {
        steps[idx - 1].1.min(1.0)
    }
}

/// Smallest d with mass ≥ γ^d: ln(mass)/ln(γ), or 0 when the mass is full.
fn required_d(mass: f64, gamma: f64) -> f64 {
    if mass >= 1.0 {
        0.0
    } else if mass <= 0.0 {
        f64::INFINITY
    } else {
        mass.ln() / gamma.ln()
    }
}

fn finish(d_min: f64, interval: (f64, f64)) -> ComplexityEstimate {
    let d = if d_min.is_finite() {
        ((d_min / D_RESOLUTION - 1e-9).ceil() * D_RESOLUTION).max(D_RESOLUTION)
    } else {
        f64::INFINITY
    };
    let satisfied = d <= D_MAX;
    ComplexityEstimate { d: if satisfied { d } else { D_MAX }, gamma_interval: interval, satisfied }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("complexity gammas must lie in (0, 1), got {gamma}")));
    }
    Ok(())
}

/// Smallest d (rounded up to 1e−3) such that π{values ≤ inf + γ} ≥ γ^d at
/// every grid point. The valid set of d is upward closed because γ < 1, so
/// the smallest member is the informative one. `satisfied` is false when
/// it exceeds [`D_MAX`].
pub fn verify_complexity(values: &[f64], pi: &DiscreteDistribution, gamma_grid: &[f64]) -> Result<ComplexityEstimate> {
    if gamma_grid.is_empty() {
        return Err(invalid("complexity grid is empty"));
    }
    gamma_grid.iter().try_for_each(|g| check_gamma(*g))?;
    let steps = sublevel_steps(values, pi)?;
    let d_min = gamma_grid.iter().map(|&g| required_d(mass_at(&steps, g), g)).fold(0.0, f64::max);
    let lo = gamma_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = gamma_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(finish(d_min, (lo, hi)))
}

/// As [`verify_complexity`], but certified for every γ in [lo, hi] rather
/// than a grid. On each constant piece of the mass function the required d
/// grows with γ, so the supremum sits at the right end of each piece.
pub fn verify_complexity_interval(values: &[f64], pi: &DiscreteDistribution, lo: f64, hi: f64) -> Result<ComplexityEstimate> {
    check_gamma(lo)?;
    check_gamma(hi)?;
    if !(lo < hi) {
        return Err(invalid(format!("complexity interval needs lo < hi, got [{lo}, {hi}]")));
    }
    let steps = sublevel_steps(values, pi)?;
    let mut d_min = required_d(mass_at(&steps, hi), hi);
    for (j, &(g, _)) in steps.iter().enumerate() {
        if g > lo && g <= hi {
            // mass just below this breakpoint
            let before = if j == 0 { 0.0 } else { steps[j - 1].1.min(1.0) };
            d_min = d_min.max(required_d(before, g));
        }
    }
    Ok(finish(d_min, (lo, hi)))
}

fn check_oracle_inputs(m: f64, delta: f64, q: f64, d: f64) -> Result<()> {
    if !(m >= 0.0) || !m.is_finite() || !(q >= 1.0) || !(d >= 0.0) {
        return Err(invalid(format!("oracle bound needs M >= 0, q >= 1, d >= 0; got M = {m}, q = {q}, d = {d}")));
    }
    check_delta(delta)
}

/// inf rₙ + 2 (M/δ)^{1/(q+d)}.
pub fn oracle_bound_empirical(rn_min: f64, m: f64, delta: f64, q: f64, d: f64) -> Result<f64> {
    check_oracle_inputs(m, delta, q, d)?;
    Ok(rn_min + 2.0 * (m / delta).powf(1.0 / (q + d)))
}

/// inf R + 2^{q/(q+d)} (M/δ)^{1/(q+d)}.
pub fn oracle_bound_population(r_min: f64, m: f64, delta: f64, q: f64, d: f64) -> Result<f64> {
    check_oracle_inputs(m, delta, q, d)?;
    Ok(r_min + 2f64.powf(q / (q + d)) * (m / delta).powf(1.0 / (q + d)))
}
