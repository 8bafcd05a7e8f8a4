//! Csiszár f-divergences between distributions on a shared atom set.
//!
//! `D_f(ρ, π) = Σⱼ πⱼ f(ρⱼ / πⱼ)` when ρ ≪ π, and `+∞` otherwise. Infinity is
//! returned as `f64::INFINITY` rather than an error so that bound evaluation
//! can carry a vacuous margin through.
//!
//! Each generator f is evaluated in the shifted form `f(r) − f'(1)(r − 1)`,
//! which is pointwise nonnegative and leaves the sum unchanged because
//! `Σ πⱼ (rⱼ − 1) = 0` under absolute continuity. This keeps the result
//! nonnegative and accurate when ρ is close to π.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Result};
use crate::param_space::DiscreteDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivergenceKind {
    /// f(x) = xᵖ − 1, p > 1.
    PhiP { p: f64 },
    /// f(x) = x log x (natural log).
    #[serde(rename = "kl")]
    KL,
    /// f(x) = x² − 1; identical to `PhiP { p: 2 }`.
    ChiSquare,
}

impl DivergenceKind {
    fn validate(&self) -> Result<()> {
        match self {
            DivergenceKind::PhiP { p } if !(*p > 1.0) || !p.is_finite() => {
                Err(invalid(format!("phi_p divergence needs finite p > 1, got {p}")))
            }
            _ => Ok(()),
        }
    }
}

/// (1 + h)ᵖ − 1 − p·h, accurate for small |h|.
#[inline]
fn shifted_power(h: f64, p: f64) -> f64 {
    if h.abs() < 0.5 {
        (p * h.ln_1p()).exp_m1() - p * h
    } else {
        (1.0 + h).powf(p) - 1.0 - p * h
    }
    .max(0.0)
}

/// (1 + h) log(1 + h) − h.
#[inline]
fn shifted_entropy(h: f64) -> f64 {
    if h <= -1.0 {
        return 1.0;
    }
    ((1.0 + h) * h.ln_1p() - h).max(0.0)
}

/// D_f(ρ, π) for the chosen generator.
pub fn f_divergence(rho: &DiscreteDistribution, pi: &DiscreteDistribution, kind: DivergenceKind) -> Result<f64> {
    ensure_len(pi.len(), rho.len())?;
    kind.validate()?;
    let p = match kind {
        DivergenceKind::PhiP { p } => Some(p),
        DivergenceKind::ChiSquare => Some(2.0),
        DivergenceKind::KL => None,
    };
    let mut total = 0.0;
    for (&r, &q) in rho.weights().iter().zip(pi.weights()) {
        if q == 0.0 {
            if r > 0.0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        let h = (r - q) / q;
        total += q * match p {
            Some(p) => shifted_power(h, p),
            None => shifted_entropy(h),
        };
    }
    Ok(total)
}

/// ∫ (dρ/dπ)ᵖ dπ = D_{φp−1}(ρ, π) + 1, summed directly.
pub fn phi_p_plus_one(rho: &DiscreteDistribution, pi: &DiscreteDistribution, p: f64) -> Result<f64> {
    ensure_len(pi.len(), rho.len())?;
    DivergenceKind::PhiP { p }.validate()?;
    let mut total = 0.0;
    for (&r, &q) in rho.weights().iter().zip(pi.weights()) {
        if r == 0.0 {
            continue;
        }
        if q == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += q * (r / q).powf(p);
    }
    Ok(total)
}

/// Closed form for uniform π over K atoms: K^{p−1} Σ ρⱼᵖ.
pub fn divergence_plus_one_uniform(rho: &DiscreteDistribution, k: usize, p: f64) -> Result<f64> {
    ensure_len(k, rho.len())?;
    DivergenceKind::PhiP { p }.validate()?;
    let sum: f64 = rho.weights().iter().filter(|w| **w > 0.0).map(|w| w.powf(p)).sum();
    Ok((k as f64).powf(p - 1.0) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn dist(w: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(w.to_vec()).unwrap()
    }

    #[test]
    fn identical_distributions_have_zero_divergence() {
        let pi = dist(&[0.2, 0.3, 0.5]);
        for kind in [DivergenceKind::PhiP { p: 1.5 }, DivergenceKind::KL, DivergenceKind::ChiSquare] {
            assert_eq!(f_divergence(&pi, &pi, kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn dirac_against_uniform() {
        let pi = DiscreteDistribution::uniform(10).unwrap();
        let rho = DiscreteDistribution::dirac(10, 3).unwrap();
        assert_relative_eq!(f_divergence(&rho, &pi, DivergenceKind::PhiP { p: 2.0 }).unwrap(), 9.0, max_relative = 1e-14);
        assert_relative_eq!(divergence_plus_one_uniform(&rho, 10, 2.0).unwrap(), 10.0, max_relative = 1e-14);
        assert_relative_eq!(phi_p_plus_one(&rho, &pi, 2.0).unwrap(), 10.0, max_relative = 1e-14);
    }

    #[test]
    fn hand_computed_two_atom_values() {
        let rho = dist(&[0.5, 0.5]);
        let pi = dist(&[0.25, 0.75]);
        // 0.25/0.25 + 0.25/0.75 − 1
        assert_relative_eq!(f_divergence(&rho, &pi, DivergenceKind::ChiSquare).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        // 0.5 log 2 + 0.5 log(2/3)
        assert_relative_eq!(
            f_divergence(&rho, &pi, DivergenceKind::KL).unwrap(),
            0.5 * (4.0f64 / 3.0).ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(0.5 * (4.0f64 / 3.0).ln(), 0.14384, epsilon = 1e-5);
    }

    #[test]
    fn non_absolutely_continuous_is_infinite() {
        let rho = dist(&[0.5, 0.5]);
        let pi = dist(&[1.0, 0.0]);
        for kind in [DivergenceKind::PhiP { p: 3.0 }, DivergenceKind::KL, DivergenceKind::ChiSquare] {
            assert_eq!(f_divergence(&rho, &pi, kind).unwrap(), f64::INFINITY);
        }
        assert_eq!(phi_p_plus_one(&rho, &pi, 2.0).unwrap(), f64::INFINITY);
        // shared null atoms contribute nothing
        let rho = dist(&[1.0, 0.0]);
        assert_eq!(f_divergence(&rho, &pi, DivergenceKind::KL).unwrap(), 0.0);
    }

    #[test]
    fn uniform_closed_form_examples() {
        let rho = DiscreteDistribution::uniform(7).unwrap();
        assert_relative_eq!(divergence_plus_one_uniform(&rho, 7, 2.5).unwrap(), 1.0, max_relative = 1e-14);
        let rho = dist(&[0.5, 0.5, 0.0, 0.0]);
        assert_relative_eq!(divergence_plus_one_uniform(&rho, 4, 2.0).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let rho = dist(&[0.5, 0.5]);
        assert!(f_divergence(&rho, &dist(&[1.0]), DivergenceKind::KL).is_err());
        assert!(f_divergence(&rho, &rho, DivergenceKind::PhiP { p: 1.0 }).is_err());
        assert!(divergence_plus_one_uniform(&rho, 2, 0.5).is_err());
        assert!(divergence_plus_one_uniform(&rho, 3, 2.0).is_err());
    }

    fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..50).prop_flat_map(|k| {
            (prop::collection::vec(0.0f64..1.0, k), prop::collection::vec(0.01f64..1.0, k))
        })
    }

    proptest! {
        #[test]
        fn divergences_are_nonnegative((r, q) in pair(), p in 1.01f64..4.0) {
            prop_assume!(r.iter().sum::<f64>() > 1e-6);
            let rho = DiscreteDistribution::from_masses(r).unwrap();
            let pi = DiscreteDistribution::from_masses(q).unwrap();
            for kind in [DivergenceKind::PhiP { p }, DivergenceKind::KL, DivergenceKind::ChiSquare] {
                prop_assert!(f_divergence(&rho, &pi, kind).unwrap() >= 0.0);
            }
        }

        #[test]
        fn chi_square_is_phi_two((r, q) in pair()) {
            prop_assume!(r.iter().sum::<f64>() > 1e-6);
            let rho = DiscreteDistribution::from_masses(r).unwrap();
            let pi = DiscreteDistribution::from_masses(q).unwrap();
            prop_assert_eq!(
                f_divergence(&rho, &pi, DivergenceKind::ChiSquare).unwrap(),
                f_divergence(&rho, &pi, DivergenceKind::PhiP { p: 2.0 }).unwrap()
            );
        }

        #[test]
        fn closed_form_matches_uniform(r in prop::collection::vec(0.0f64..1.0, 2..50), p in prop::sample::select(vec![1.5, 2.0, 3.0])) {
            prop_assume!(r.iter().sum::<f64>() > 1e-6);
            let k = r.len();
            let rho = DiscreteDistribution::from_masses(r).unwrap();
            let pi = DiscreteDistribution::uniform(k).unwrap();
            let direct = f_divergence(&rho, &pi, DivergenceKind::PhiP { p }).unwrap() + 1.0;
            let closed = divergence_plus_one_uniform(&rho, k, p).unwrap();
            prop_assert!((direct - closed).abs() <= 1e-12 * closed);
            let summed = phi_p_plus_one(&rho, &pi, p).unwrap();
            prop_assert!((summed - closed).abs() <= 1e-12 * closed);
        }

        #[test]
        fn strictly_positive_away_from_prior(q in prop::collection::vec(0.05f64..1.0, 2..20), j in 0usize..20, eps in 1e-9f64..0.5) {
            let k = q.len();
            let pi = DiscreteDistribution::from_masses(q).unwrap();
            // move mass eps·(something) from a donor atom to atom j
            let j = j % k;
            let donor = (j + 1) % k;
            let shift = eps.min(pi.weight(donor));
            let mut w = pi.weights().to_vec();
            w[donor] -= shift;
            w[j] += shift;
            let rho = DiscreteDistribution::new(w).unwrap();
            let max_diff = rho.weights().iter().zip(pi.weights()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assume!(max_diff > 1e-9);
            for kind in [DivergenceKind::PhiP { p: 2.0 }, DivergenceKind::PhiP { p: 1.5 }, DivergenceKind::KL] {
                let d = f_divergence(&rho, &pi, kind).unwrap();
                prop_assert!(d > 0.0, "{:?}: {}", kind, d);
            }
        }
    }
}
