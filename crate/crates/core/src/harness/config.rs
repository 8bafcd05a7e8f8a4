//! Experiment configuration (TOML) and its resolution into bound inputs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aggregation::BoundConfig;
use crate::datagen::{self, GeneratorSpec, MixingBoundSpec};
use crate::error::{Error, Result};
use crate::moments::{self, MomentRegime, OptimalQ, DAVYDOV_FACTOR};
use crate::param_space::{build_prior, prior_moment_tau, AtomSet, DiscreteDistribution, PriorSpec};
use crate::risk::LossKind;

fn default_replications() -> usize {
    1
}

fn default_inflation() -> f64 {
    1.0
}

fn default_davydov() -> f64 {
    DAVYDOV_FACTOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Hölder exponent. May be omitted when the regime derives q itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub delta: f64,
    /// Random aggregation distributions checked alongside ρ̂ₙ in coverage runs.
    #[serde(default)]
    pub probes: usize,
    /// Worker threads for replications; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    /// Multiplies the moment bound; values above 1 loosen every bound.
    #[serde(default = "default_inflation")]
    pub moment_inflation: f64,
    pub loss: LossKind,
    pub generator: GeneratorSpec,
    pub prior: PriorSpec,
    pub regime: RegimeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexity: Option<ComplexityConfig>,
}

/// Moment regime with its constants. Omitted constants are derived from the
/// generator, prior and loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegimeConfig {
    Variance {
        #[serde(default)]
        s2: S2Source,
    },
    Subgaussian {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma2: Option<f64>,
        /// Use q = 2 log(2K/δ) and the matching p instead of the configured p.
        #[serde(default)]
        optimize_q: bool,
    },
    MixingBounded {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha_sum: Option<f64>,
    },
    MixingUnbounded {
        r: f64,
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        moment_integral: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha_frac_sum: Option<f64>,
        #[serde(default = "default_davydov")]
        davydov_factor: f64,
    },
}

/// Where s² comes from: a number, `"kappa"` (8[E Y⁴ + τ E‖X‖⁴]) or `"exact"`
/// (∫ Var ℓ₁(θ) dπ from the generator's closed-form moments).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum S2Source {
    Value(f64),
    Method(S2Method),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S2Method {
    Kappa,
    Exact,
}

impl Default for S2Source {
    fn default() -> Self {
        S2Source::Method(S2Method::Kappa)
    }
}

/// γ range on which the complexity assumption is verified: an explicit grid,
/// or the whole interval [lo, hi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    /// Fail with an assumption violation when the check does not pass.
    #[serde(default)]
    pub require: bool,
}

impl ComplexityConfig {
    pub fn verify(&self, values: &[f64], pi: &DiscreteDistribution) -> Result<crate::aggregation::ComplexityEstimate> {
        match (&self.grid, self.lo, self.hi) {
            (Some(grid), None, None) => crate::aggregation::verify_complexity(values, pi, grid),
            (None, Some(lo), Some(hi)) => crate::aggregation::verify_complexity_interval(values, pi, lo, hi),
            _ => Err(Error::Config("[complexity] needs either `grid` or both `lo` and `hi`".into())),
        }
    }
}

/// Constants and assumptions attached to every output record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumptions {
    pub regime: MomentRegime,
    pub moment_bound: f64,
    pub moment_inflation: f64,
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    pub n: usize,
    pub atoms: usize,
    pub c1: f64,
    pub c2: f64,
    pub seed: u64,
}

/// A validated configuration with its prior built and its moment bound fixed.
#[derive(Debug, Clone)]
pub struct Setup {
    pub config: ExperimentConfig,
    pub atoms: AtomSet,
    pub pi: DiscreteDistribution,
    pub regime: MomentRegime,
    pub bound: BoundConfig,
    pub envelope: MixingBoundSpec,
    pub optimal_q: Option<OptimalQ>,
}

impl Setup {
    pub fn assumptions(&self) -> Assumptions {
        Assumptions {
            regime: self.regime,
            moment_bound: self.bound.moment.value,
            moment_inflation: self.config.moment_inflation,
            p: self.bound.p,
            q: self.bound.q,
            delta: self.bound.delta,
            n: self.config.n,
            atoms: self.atoms.len(),
            c1: self.envelope.c1,
            c2: self.envelope.c2,
            seed: self.config.seed,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => config_err(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    /// Cross-field checks that do not need the prior.
    pub fn validate(&self) -> Result<()> {
        self.generator.validate().map_err(|e| config_err(format!("[generator]: {e}")))?;
        if self.n == 0 {
            return Err(config_err("n must be positive"));
        }
        if self.replications == 0 {
            return Err(config_err("replications must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(config_err(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.moment_inflation >= 1.0) || !self.moment_inflation.is_finite() {
            return Err(config_err(format!("moment_inflation must be finite and >= 1, got {}", self.moment_inflation)));
        }
        let needs_p = !matches!(self.regime, RegimeConfig::Subgaussian { optimize_q: true, .. });
        match (needs_p, self.p) {
            (true, None) => return Err(config_err("p is required for this regime")),
            (false, Some(_)) => return Err(config_err("p must be omitted when optimize_q derives it")),
            (_, Some(p)) if !(p > 1.0) || !p.is_finite() => {
                return Err(config_err(format!("p must be finite and > 1, got {p}")))
            }
            _ => {}
        }
        let p = self.p.unwrap_or(2.0);
        let ar1 = matches!(self.generator, GeneratorSpec::Ar1 { .. });
        match &self.regime {
            RegimeConfig::Variance { s2 } => {
                if ar1 {
                    return Err(config_err("the variance regime assumes i.i.d. data; use a mixing regime for AR(1)"));
                }
                if p < 2.0 {
                    return Err(config_err(format!("the variance regime needs q <= 2, i.e. p >= 2; got p = {p}")));
                }
                if let S2Source::Method(_) = s2 {
                    if self.loss != LossKind::Squared {
                        return Err(config_err("derived s2 needs the squared loss"));
                    }
                }
                if let S2Source::Value(v) = s2 {
                    if !(*v >= 0.0) || !v.is_finite() {
                        return Err(config_err(format!("s2 must be finite and >= 0, got {v}")));
                    }
                }
            }
            RegimeConfig::Subgaussian { sigma2, optimize_q } => {
                if ar1 {
                    return Err(config_err("the sub-Gaussian regime assumes i.i.d. data"));
                }
                if !optimize_q && p > 2.0 {
                    return Err(config_err(format!("the sub-Gaussian regime needs q >= 2, i.e. p <= 2; got p = {p}")));
                }
                if sigma2.is_none() && !self.loss.is_bounded_unit() {
                    return Err(config_err("sigma2 can only be derived for losses in [0, 1]"));
                }
            }
            RegimeConfig::MixingBounded { .. } | RegimeConfig::MixingUnbounded { .. } => {
                if !ar1 {
                    return Err(config_err("mixing regimes need the ar1 generator"));
                }
                if (p - 2.0).abs() > 1e-12 {
                    return Err(config_err(format!("mixing regimes hold for p = q = 2; got p = {p}")));
                }
                if let RegimeConfig::MixingBounded { .. } = self.regime {
                    if !self.loss.is_bounded_unit() {
                        return Err(config_err("mixing_bounded needs a loss bounded by 1 (zero_one)"));
                    }
                } else if self.loss != LossKind::Squared {
                    return Err(config_err("mixing_unbounded is implemented for the squared loss"));
                }
            }
        }
        if let Some(c) = &self.complexity {
            match (&c.grid, c.lo, c.hi) {
                (Some(g), None, None) if !g.is_empty() => {}
                (None, Some(lo), Some(hi)) if 0.0 < lo && lo < hi && hi < 1.0 => {}
                _ => {
                    return Err(config_err(
                        "[complexity] needs a nonempty `grid` or `lo`, `hi` with 0 < lo < hi < 1",
                    ))
                }
            }
        }
        Ok(())
    }

    /// Builds the prior and resolves every derived constant.
    pub fn setup(&self) -> Result<Setup> {
        self.validate()?;
        let (atoms, pi) = build_prior(&self.prior, self.seed).map_err(|e| config_err(format!("[prior]: {e}")))?;
        if atoms.dim() != self.generator.x_dim() {
            return Err(config_err(format!(
                "prior atoms have dimension {} but the generator's design has dimension {}",
                atoms.dim(),
                self.generator.x_dim()
            )));
        }
        let envelope = datagen::mixing_spec_for(&self.generator)?;
        let (regime, q, optimal_q) = self.resolve_regime(&atoms, &pi, &envelope)?;
        let p = self.p.unwrap_or(q / (q - 1.0));
        let moment = regime.bound(self.n, q)?.inflated(self.moment_inflation);
        let bound = BoundConfig::new(p, self.delta, moment)?;
        Ok(Setup { config: self.clone(), atoms, pi, regime, bound, envelope, optimal_q })
    }

    fn resolve_regime(
        &self,
        atoms: &AtomSet,
        pi: &DiscreteDistribution,
        envelope: &MixingBoundSpec,
    ) -> Result<(MomentRegime, f64, Option<OptimalQ>)> {
        let q_of = |p: f64| p / (p - 1.0);
        Ok(match &self.regime {
            RegimeConfig::Variance { s2 } => {
                let s2 = match s2 {
                    S2Source::Value(v) => *v,
                    S2Source::Method(S2Method::Kappa) => {
                        let m = datagen::analytic_moments(&self.generator)?;
                        let tau = prior_moment_tau(atoms, pi)?;
                        moments::kappa_quadratic(m.ey(4)?, tau, m.ex4()?)?
                    }
                    S2Source::Method(S2Method::Exact) => {
                        let vars = atoms
                            .iter()
                            .map(|a| datagen::squared_loss_variance(&self.generator, a.coords()))
                            .collect::<Result<Vec<_>>>()?;
                        crate::param_space::expectation(pi, &vars)?
                    }
                };
                (MomentRegime::IidVariance { s2 }, q_of(self.p.expect("validated")), None)
            }
            RegimeConfig::Subgaussian { sigma2, optimize_q } => {
                // losses in [0, 1] are sub-Gaussian with σ² = 1/4
                let sigma2 = sigma2.unwrap_or(0.25);
                if *optimize_q {
                    let opt = moments::optimal_q_finite(atoms.len(), self.delta)?;
                    (MomentRegime::SubGaussian { sigma2 }, opt.q, Some(opt))
                } else {
                    (MomentRegime::SubGaussian { sigma2 }, q_of(self.p.expect("validated")), None)
                }
            }
            RegimeConfig::MixingBounded { alpha_sum } => {
                let alpha_sum = match alpha_sum {
                    Some(v) => *v,
                    None => moments::geometric_alpha_sum(envelope.c1, envelope.c2, 1.0)?,
                };
                (MomentRegime::MixingBounded { alpha_sum }, 2.0, None)
            }
            RegimeConfig::MixingUnbounded { r, s, moment_integral, alpha_frac_sum, davydov_factor } => {
                let moment_integral = match moment_integral {
                    Some(v) => *v,
                    None => {
                        if (*s - 3.0).abs() > 1e-12 {
                            return Err(config_err("moment_integral can only be derived for s = 3; supply it explicitly"));
                        }
                        let vals = atoms
                            .iter()
                            .map(|a| datagen::squared_loss_moment(&self.generator, a.coords(), 3).map(|m| m.powf(2.0 / 3.0)))
                            .collect::<Result<Vec<_>>>()?;
                        crate::param_space::expectation(pi, &vals)?
                    }
                };
                let alpha_frac_sum = match alpha_frac_sum {
                    Some(v) => *v,
                    None => moments::geometric_alpha_sum(envelope.c1, envelope.c2, *r)?,
                };
                let regime = MomentRegime::MixingUnbounded {
                    r: *r,
                    s: *s,
                    moment_integral,
                    alpha_frac_sum,
                    davydov_factor: *davydov_factor,
                };
                (regime, 2.0, None)
            }
        })
    }
}
