//! Upper bounds on the moment term M_{φq,n} = ∫ E|rₙ(θ) − R(θ)|^q π(dθ).
//!
//! Each regime turns analytic data constants into a [`MomentBound`] that
//! remembers its exponent q. The only data-driven quantity here is
//! [`empirical_moment_estimate`], which exists to validate the bounds and is
//! never used inside a guarantee.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Error, Result};
use crate::param_space::DiscreteDistribution;
use crate::risk::{empirical_risk, LossTable};

/// Tolerance on the exponent identity 1/r + 2/s = 1.
const EXPONENT_TOLERANCE: f64 = 1e-12;

/// Davydov covariance constant used by default in the unbounded mixing bound.
pub const DAVYDOV_FACTOR: f64 = 8.0;

fn default_davydov() -> f64 {
    DAVYDOV_FACTOR
}

/// Data assumption together with the constants needed to bound the moment term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentRegime {
    /// i.i.d. data, s² = ∫ Var[ℓ₁(θ)] π(dθ).
    IidVariance { s2: f64 },
    /// i.i.d. data, each ℓᵢ(θ) sub-Gaussian with parameter σ².
    SubGaussian { sigma2: f64 },
    /// Stationary data, losses in [0, 1], `alpha_sum` = Σ_{j∈ℤ} αⱼ.
    MixingBounded { alpha_sum: f64 },
    /// Stationary data with 1/r + 2/s = 1, `moment_integral` =
    /// ∫ {E[ℓˢ]}^{2/s} dπ and `alpha_frac_sum` = Σ αⱼ^{1/r}.
    MixingUnbounded {
        r: f64,
        s: f64,
        moment_integral: f64,
        alpha_frac_sum: f64,
        #[serde(default = "default_davydov")]
        davydov_factor: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    IidVariance,
    SubGaussian,
    MixingBounded,
    MixingUnbounded,
}

impl MomentRegime {
    pub fn tag(&self) -> RegimeTag {
        match self {
            MomentRegime::IidVariance { .. } => RegimeTag::IidVariance,
            MomentRegime::SubGaussian { .. } => RegimeTag::SubGaussian,
            MomentRegime::MixingBounded { .. } => RegimeTag::MixingBounded,
            MomentRegime::MixingUnbounded { .. } => RegimeTag::MixingUnbounded,
        }
    }

    /// Bound on M_{φq,n}. Mixing regimes only support q = 2.
    pub fn bound(&self, n: usize, q: f64) -> Result<MomentBound> {
        match *self {
            MomentRegime::IidVariance { s2 } => moment_iid_variance(s2, n, q),
            MomentRegime::SubGaussian { sigma2 } => moment_subgaussian(sigma2, n, q),
            MomentRegime::MixingBounded { alpha_sum } => {
                require_q_two(q)?;
                moment_mixing_bounded(alpha_sum, n)
            }
            MomentRegime::MixingUnbounded { .. } => {
                require_q_two(q)?;
                moment_mixing_unbounded(self, n)
            }
        }
    }
}

fn require_q_two(q: f64) -> Result<()> {
    if (q - 2.0).abs() > 1e-9 {
        return Err(invalid(format!("mixing moment bounds hold for q = 2 only, got q = {q}")));
    }
    Ok(())
}

/// Upper bound on M_{φq,n}, tagged with the q it was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentBound {
    pub value: f64,
    pub q: f64,
    pub n: usize,
    pub regime: RegimeTag,
}

impl MomentBound {
    /// Same bound with `value` multiplied by `factor` ≥ 1. A larger M is
    /// still a valid upper bound.
    pub fn inflated(self, factor: f64) -> Self {
        Self { value: self.value * factor, ..self }
    }
}

fn check_n(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("sample size must be positive"));
    }
    Ok(n as f64)
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(invalid(format!("{name} must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// (s²/n)^{q/2}, valid for 1 < q ≤ 2.
pub fn moment_iid_variance(s2: f64, n: usize, q: f64) -> Result<MomentBound> {
    check_nonneg("s2", s2)?;
    let nf = check_n(n)?;
    if !(q > 1.0 && q <= 2.0) {
        return Err(invalid(format!("variance moment bound needs 1 < q <= 2, got {q}")));
    }
    Ok(MomentBound { value: (s2 / nf).powf(q / 2.0), q, n, regime: RegimeTag::IidVariance })
}

/// 2 (qσ²/n)^{q/2}, valid for q ≥ 2.
pub fn moment_subgaussian(sigma2: f64, n: usize, q: f64) -> Result<MomentBound> {
    check_nonneg("sigma2", sigma2)?;
    let nf = check_n(n)?;
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid(format!("sub-Gaussian moment bound needs q >= 2, got {q}")));
    }
    Ok(MomentBound { value: 2.0 * (q * sigma2 / nf).powf(q / 2.0), q, n, regime: RegimeTag::SubGaussian })
}

/// (1/n) Σ_{j∈ℤ} αⱼ for losses bounded by 1; q = 2.
pub fn moment_mixing_bounded(alpha_sum: f64, n: usize) -> Result<MomentBound> {
    check_nonneg("alpha_sum", alpha_sum)?;
    let nf = check_n(n)?;
    Ok(MomentBound { value: alpha_sum / nf, q: 2.0, n, regime: RegimeTag::MixingBounded })
}

/// davydov_factor · moment_integral · alpha_frac_sum / n; q = 2.
pub fn moment_mixing_unbounded(regime: &MomentRegime, n: usize) -> Result<MomentBound> {
    let MomentRegime::MixingUnbounded { r, s, moment_integral, alpha_frac_sum, davydov_factor } = *regime else {
        return Err(invalid("expected a mixing_unbounded regime"));
    };
    if !(r >= 1.0) || !(s >= 2.0) {
        return Err(invalid(format!("need r >= 1 and s >= 2, got r = {r}, s = {s}")));
    }
    if (1.0 / r + 2.0 / s - 1.0).abs() > EXPONENT_TOLERANCE {
        return Err(invalid(format!("exponents violate 1/r + 2/s = 1: r = {r}, s = {s}")));
    }
    check_nonneg("moment_integral", moment_integral)?;
    check_nonneg("alpha_frac_sum", alpha_frac_sum)?;
    check_nonneg("davydov_factor", davydov_factor)?;
    let nf = check_n(n)?;
    Ok(MomentBound {
        value: davydov_factor * moment_integral * alpha_frac_sum / nf,
        q: 2.0,
        n,
        regime: RegimeTag::MixingUnbounded,
    })
}

/// Σ_{j∈ℤ} αⱼ^{1/power} under the envelope αⱼ ≤ c₁ e^{−c₂|j|}, majorized by
/// 2 c₁^{1/power} / (1 − e^{−c₂/power}).
pub fn geometric_alpha_sum(c1: f64, c2: f64, power: f64) -> Result<f64> {
    check_nonneg("c1", c1)?;
    if !(c2 > 0.0) || !c2.is_finite() {
        return Err(invalid(format!("c2 must be positive, got {c2}")));
    }
    if !(power >= 1.0) || !power.is_finite() {
        return Err(invalid(format!("power must be >= 1, got {power}")));
    }
    Ok(2.0 * c1.powf(1.0 / power) / -(-c2 / power).exp_m1())
}

/// κ = 8 [E Y⁴ + τ E‖X‖⁴], an upper bound on s² for squared loss and linear
/// predictors.
pub fn kappa_quadratic(ey4: f64, tau: f64, ex4: f64) -> Result<f64> {
    check_nonneg("E[Y^4]", ey4)?;
    check_nonneg("tau", tau)?;
    check_nonneg("E[|X|^4]", ex4)?;
    Ok(8.0 * (ey4 + tau * ex4))
}

/// Optimized exponent for a finite class under sub-Gaussian losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalQ {
    pub q: f64,
    /// Set when 2 log(2K/δ) fell below 2 and q was clamped to 2.
    pub clamped: bool,
}

/// q = 2 log(2K/δ), clamped to 2 from below.
pub fn optimal_q_finite(k: usize, delta: f64) -> Result<OptimalQ> {
    check_delta(delta)?;
    if k == 0 {
        return Err(invalid("class size must be positive"));
    }
    let q = 2.0 * (2.0 * k as f64 / delta).ln();
    // ties at the boundary 2K/δ = e are not a clamp
    if q < 2.0 - 1e-12 {
        Ok(OptimalQ { q: 2.0, clamped: true })
    } else {
        Ok(OptimalQ { q: q.max(2.0), clamped: false })
    }
}

/// √(2e σ² log(2K/δ) / n): the ERM excess term at the optimized q.
pub fn optimized_finite_bound(sigma2: f64, n: usize, k: usize, delta: f64) -> Result<f64> {
    check_nonneg("sigma2", sigma2)?;
    check_delta(delta)?;
    let nf = check_n(n)?;
    Ok((2.0 * std::f64::consts::E * sigma2 * (2.0 * k as f64 / delta).ln() / nf).sqrt())
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Monte Carlo estimate of M_{φq,n}: the average over tables of
/// Σⱼ πⱼ |rₙ(θⱼ) − R(θⱼ)|^q.
pub fn empirical_moment_estimate(
    tables: &[LossTable],
    risk: &[f64],
    pi: &DiscreteDistribution,
    q: f64,
) -> Result<f64> {
    let rns = tables.iter().map(empirical_risk).collect::<Result<Vec<_>>>()?;
    empirical_moment_from_risks(&rns, risk, pi, q)
}

/// Same estimate from precomputed empirical-risk vectors.
pub fn empirical_moment_from_risks(rns: &[Vec<f64>], risk: &[f64], pi: &DiscreteDistribution, q: f64) -> Result<f64> {
    if rns.len() < 2 {
        return Err(invalid("moment estimate needs at least two replications"));
    }
    if !(q > 0.0) {
        return Err(invalid(format!("moment exponent must be positive, got {q}")));
    }
    ensure_len(pi.len(), risk.len())?;
    let mut total = 0.0;
    for rn in rns {
        if rn.len() != risk.len() {
            return Err(Error::LengthMismatch { expected: risk.len(), got: rn.len() });
        }
        total += deviation_moment(rn, risk, pi, q);
    }
    Ok(total / rns.len() as f64)
}

/// Σⱼ πⱼ |rₙ(θⱼ) − R(θⱼ)|^q for one replication.
pub fn deviation_moment(rn: &[f64], risk: &[f64], pi: &DiscreteDistribution, q: f64) -> f64 {
    pi.weights()
        .iter()
        .zip(rn.iter().zip(risk))
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, (a, b))| w * (a - b).abs().powf(q))
        .sum()
}
