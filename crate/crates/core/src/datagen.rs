//! Synthetic heavy-tailed and dependent data with analytically known moments.
//!
//! Moments are tracked through symmetric cumulants: every random quantity the
//! generators build (noise, ⟨θ, X⟩, the stationary AR(1) level, residuals of
//! linear predictors) is a sum of independent, symmetric, scaled pieces, and
//! cumulants add over independent sums. Orders 2, 4 and 6 are kept; a missing
//! order means the moment does not exist.

use rand::Rng;
use rand_distr::{Distribution, Normal, StudentT, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::param_space::AtomSet;
use crate::risk::{dot, Dataset, LossKind, MonteCarlo, TrueRisk};
use crate::rng::{data_stream, stream_rng, StreamRng, ORACLE_STREAM};

/// Burn-in used to start AR(1) paths when the stationary law has no closed form.
pub const AR1_BURN_IN: usize = 1_000;

/// Additive noise law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum NoiseLaw {
    Gaussian { variance: f64 },
    /// `scale` × Student-t with `dof` degrees of freedom.
    StudentT { dof: f64, scale: f64 },
}

impl NoiseLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseLaw::Gaussian { variance } if !(variance >= 0.0) || !variance.is_finite() => {
                Err(invalid(format!("gaussian noise variance must be finite and >= 0, got {variance}")))
            }
            NoiseLaw::StudentT { dof, scale } if !(dof > 2.0) || !dof.is_finite() || !(scale >= 0.0) || !scale.is_finite() => {
                Err(invalid(format!("student-t noise needs dof > 2 and scale >= 0, got dof = {dof}, scale = {scale}")))
            }
            _ => Ok(()),
        }
    }

    pub fn variance(&self) -> f64 {
        self.cumulants().k2
    }

    /// E[εᵏ]. Odd orders vanish; even orders error when the moment is infinite.
    pub fn raw_moment(&self, order: u32) -> Result<f64> {
        if order % 2 == 1 {
            if let NoiseLaw::StudentT { dof, .. } = *self {
                if dof <= order as f64 {
                    return Err(Error::MomentDoesNotExist { order, dof });
                }
            }
            return Ok(0.0);
        }
        match *self {
            NoiseLaw::Gaussian { variance } => Ok(double_factorial(order - 1) * variance.powi(order as i32 / 2)),
            NoiseLaw::StudentT { dof, scale } => student_t_moment(dof, scale, order),
        }
    }

    fn cumulants(&self) -> Cumulants {
        match *self {
            NoiseLaw::Gaussian { variance } => Cumulants { k2: variance, k4: Some(0.0), k6: Some(0.0) },
            NoiseLaw::StudentT { dof, scale } => {
                let m2 = student_t_moment(dof, scale, 2).unwrap_or(f64::INFINITY);
                let m4 = student_t_moment(dof, scale, 4).ok();
                let m6 = student_t_moment(dof, scale, 6).ok();
                Cumulants::from_moments(m2, m4, m6)
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseLaw::Gaussian { variance } => {
                if variance == 0.0 {
                    0.0
                } else {
                    Normal::new(0.0, variance.sqrt()).expect("validated variance").sample(rng)
                }
            }
            NoiseLaw::StudentT { dof, scale } => scale * StudentT::new(dof).expect("validated dof").sample(rng),
        }
    }
}

fn double_factorial(k: u32) -> f64 {
    (1..=k).rev().step_by(2).map(f64::from).product()
}

/// Raw even moments of σT, T ~ t(ν): E T^{2m} = ν^m Π_{i=1..m} (2i−1)/(ν−2i).
fn student_t_moment(dof: f64, scale: f64, order: u32) -> Result<f64> {
    if order % 2 == 1 {
        return Ok(0.0);
    }
    if dof <= order as f64 {
        return Err(Error::MomentDoesNotExist { order, dof });
    }
    let m = order / 2;
    let mut value = 1.0;
    for i in 1..=m {
        value *= dof * f64::from(2 * i - 1) / (dof - f64::from(2 * i));
    }
    Ok(value * scale.powi(order as i32))
}

/// Distribution of the covariates in i.i.d. designs. Coordinates are
/// independent and centered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum XLaw {
    /// N(0, scale²) coordinates.
    Gaussian { scale: f64 },
    /// Uniform(−half_width, half_width) coordinates.
    UniformBox { half_width: f64 },
}

impl XLaw {
    fn validate(&self) -> Result<()> {
        let v = match *self {
            XLaw::Gaussian { scale } => scale,
            XLaw::UniformBox { half_width } => half_width,
        };
        if !(v >= 0.0) || !v.is_finite() {
            return Err(invalid(format!("covariate law parameter must be finite and >= 0, got {v}")));
        }
        Ok(())
    }

    fn coordinate_cumulants(&self) -> Cumulants {
        match *self {
            XLaw::Gaussian { scale } => Cumulants { k2: scale * scale, k4: Some(0.0), k6: Some(0.0) },
            XLaw::UniformBox { half_width: h } => Cumulants {
                k2: h.powi(2) / 3.0,
                k4: Some(-2.0 * h.powi(4) / 15.0),
                k6: Some(16.0 * h.powi(6) / 63.0),
            },
        }
    }

    /// Common covariance scale: Cov(X) = second_moment · I.
    pub fn second_moment(&self) -> f64 {
        self.coordinate_cumulants().k2
    }

    /// Cumulants of ⟨v, X⟩.
    fn projection(&self, v: &[f64]) -> Cumulants {
        let c = self.coordinate_cumulants();
        v.iter().fold(Cumulants::ZERO, |acc, &vi| acc.add(&c.scale(vi)))
    }

    /// E‖X‖⁴ = k m₄ + k(k−1) m₂².
    fn norm_fourth(&self, k: usize) -> f64 {
        let c = self.coordinate_cumulants();
        let m2 = c.k2;
        let m4 = c.moment(4).expect("covariate laws have all moments");
        let k = k as f64;
        k * m4 + k * (k - 1.0) * m2 * m2
    }

    fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match *self {
            XLaw::Gaussian { scale } => {
                let normal = Normal::new(0.0, scale).expect("validated scale");
                out.iter_mut().for_each(|v| *v = normal.sample(rng));
            }
            XLaw::UniformBox { half_width } => {
                if half_width == 0.0 {
                    out.fill(0.0);
                } else {
                    let u = Uniform::new(-half_width, half_width).expect("validated width");
                    out.iter_mut().for_each(|v| *v = u.sample(rng));
                }
            }
        }
    }
}

/// Geometric α-mixing envelope αⱼ ≤ c₁ e^{−c₂|j|}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingBoundSpec {
    pub c1: f64,
    pub c2: f64,
}

impl MixingBoundSpec {
    fn validate(&self) -> Result<()> {
        if !(self.c1 >= 0.0) || !self.c1.is_finite() || !(self.c2 > 0.0) || !self.c2.is_finite() {
            return Err(invalid(format!("mixing envelope needs c1 >= 0 and c2 > 0, got {self:?}")));
        }
        Ok(())
    }
}

/// Synthetic data process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// yᵢ = ⟨θ*, xᵢ⟩ + εᵢ with i.i.d. xᵢ and εᵢ.
    IidLinearRegression { theta_star: Vec<f64>, x_law: XLaw, noise: NoiseLaw },
    /// yᵢ = a yᵢ₋₁ + εᵢ, observed as pairs xᵢ = (1, yᵢ₋₁). `mixing` is the
    /// assumed α envelope; it is configuration, not derived.
    Ar1 {
        a: f64,
        noise: NoiseLaw,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mixing: Option<MixingBoundSpec>,
    },
    /// yᵢ = sign⟨θ*, xᵢ⟩ ∈ {−1, +1} (0 maps to +1), flipped with probability
    /// `flip_prob`.
    BoundedClassification { theta_star: Vec<f64>, x_law: XLaw, flip_prob: f64 },
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::IidLinearRegression { theta_star, x_law, noise } => {
                check_theta(theta_star)?;
                x_law.validate()?;
                noise.validate()
            }
            GeneratorSpec::Ar1 { a, noise, mixing } => {
                if !(a.abs() < 1.0) {
                    return Err(invalid(format!("AR(1) coefficient must satisfy |a| < 1, got {a}")));
                }
                if let Some(m) = mixing {
                    m.validate()?;
                }
                noise.validate()
            }
            GeneratorSpec::BoundedClassification { theta_star, x_law, flip_prob } => {
                check_theta(theta_star)?;
                x_law.validate()?;
                if !(*flip_prob >= 0.0 && *flip_prob < 0.5) {
                    return Err(invalid(format!("label flip probability must lie in [0, 0.5), got {flip_prob}")));
                }
                Ok(())
            }
        }
    }

    /// Dimension of the regression design xᵢ.
    pub fn x_dim(&self) -> usize {
        match self {
            GeneratorSpec::IidLinearRegression { theta_star, .. }
            | GeneratorSpec::BoundedClassification { theta_star, .. } => theta_star.len(),
            GeneratorSpec::Ar1 { .. } => 2,
        }
    }

    pub fn is_iid(&self) -> bool {
        !matches!(self, GeneratorSpec::Ar1 { .. })
    }
}

fn check_theta(theta: &[f64]) -> Result<()> {
    if theta.is_empty() || theta.iter().any(|t| !t.is_finite()) {
        return Err(invalid("theta_star must be a nonempty finite vector"));
    }
    Ok(())
}

/// Draws n observations. Deterministic in `(spec, n, seed)`.
pub fn generate(spec: &GeneratorSpec, n: usize, seed: u64) -> Result<Dataset> {
    generate_with_rng(spec, n, &mut data_stream(seed, 0))
}

/// Draws n observations from an explicit stream.
pub fn generate_with_rng(spec: &GeneratorSpec, n: usize, rng: &mut StreamRng) -> Result<Dataset> {
    spec.validate()?;
    if n == 0 {
        return Err(invalid("cannot generate an empty dataset"));
    }
    let mut data = Dataset::with_capacity(spec.x_dim(), n);
    match spec {
        GeneratorSpec::IidLinearRegression { theta_star, x_law, noise } => {
            let mut x = vec![0.0; theta_star.len()];
            for _ in 0..n {
                x_law.sample_into(rng, &mut x);
                let y = dot(theta_star, &x) + noise.sample(rng);
                data.push(&x, y)?;
            }
        }
        GeneratorSpec::Ar1 { a, noise, .. } => {
            if n < 2 {
                return Err(invalid("AR(1) datasets need n >= 2"));
            }
            let mut prev = match noise {
                NoiseLaw::Gaussian { variance } => {
                    let stationary = variance / (1.0 - a * a);
                    NoiseLaw::Gaussian { variance: stationary }.sample(rng)
                }
                NoiseLaw::StudentT { .. } => {
                    let mut y = 0.0;
                    for _ in 0..AR1_BURN_IN {
                        y = a * y + noise.sample(rng);
                    }
                    y
                }
            };
            for _ in 0..n {
                let y = a * prev + noise.sample(rng);
                data.push(&[1.0, prev], y)?;
                prev = y;
            }
        }
        GeneratorSpec::BoundedClassification { theta_star, x_law, flip_prob } => {
            let mut x = vec![0.0; theta_star.len()];
            for _ in 0..n {
                x_law.sample_into(rng, &mut x);
                let clean = if dot(theta_star, &x) >= 0.0 { 1.0 } else { -1.0 };
                let y = if rng.random::<f64>() < *flip_prob { -clean } else { clean };
                data.push(&x, y)?;
            }
        }
    }
    Ok(data)
}

/// Symmetric (odd cumulants zero) cumulants of orders 2, 4, 6.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Cumulants {
    k2: f64,
    k4: Option<f64>,
    k6: Option<f64>,
}

impl Cumulants {
    const ZERO: Cumulants = Cumulants { k2: 0.0, k4: Some(0.0), k6: Some(0.0) };

    fn from_moments(m2: f64, m4: Option<f64>, m6: Option<f64>) -> Self {
        let k4 = m4.map(|m4| m4 - 3.0 * m2 * m2);
        let k6 = match (m4, m6) {
            (Some(m4), Some(m6)) => Some(m6 - 15.0 * m4 * m2 + 30.0 * m2.powi(3)),
            _ => None,
        };
        Self { k2: m2, k4, k6 }
    }

    fn scale(&self, b: f64) -> Self {
        if b == 0.0 {
            return Self::ZERO;
        }
        Self { k2: self.k2 * b.powi(2), k4: self.k4.map(|k| k * b.powi(4)), k6: self.k6.map(|k| k * b.powi(6)) }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            k2: self.k2 + other.k2,
            k4: self.k4.zip(other.k4).map(|(a, b)| a + b),
            k6: self.k6.zip(other.k6).map(|(a, b)| a + b),
        }
    }

    /// Stationary law of y = Σₖ aᵏ εₖ: κₘ(y) = κₘ(ε) / (1 − aᵐ).
    fn ar1_stationary(&self, a: f64) -> Self {
        Self {
            k2: self.k2 / (1.0 - a.powi(2)),
            k4: self.k4.map(|k| k / (1.0 - a.powi(4))),
            k6: self.k6.map(|k| k / (1.0 - a.powi(6))),
        }
    }

    /// Raw moment E Zᵏ for even k ≤ 6.
    fn moment(&self, order: u32) -> Option<f64> {
        let k2 = self.k2;
        match order {
            0 => Some(1.0),
            2 => Some(k2),
            4 => self.k4.map(|k4| k4 + 3.0 * k2 * k2),
            6 => self.k6.zip(self.k4).map(|(k6, k4)| k6 + 15.0 * k4 * k2 + 15.0 * k2.powi(3)),
            o if o % 2 == 1 => Some(0.0),
            _ => None,
        }
    }

    /// E (Z + c)ᵏ for even k ≤ 6.
    fn shifted_moment(&self, c: f64, order: u32) -> Option<f64> {
        let mut total = 0.0;
        for j in (0..=order).step_by(2) {
            let binom = binomial(order, j);
            total += binom * self.moment(j)? * c.powi((order - j) as i32);
        }
        Some(total)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Closed-form moments of the observed response and design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticMoments {
    pub ey2: f64,
    pub ey4: Option<f64>,
    pub ey6: Option<f64>,
    /// E‖Xᵢ‖⁴.
    pub ex4: Option<f64>,
    /// Var(εᵢ); zero for classification labels.
    pub var_eps: f64,
    /// Degrees of freedom of Student-t noise, when present.
    #[serde(skip)]
    dof: Option<f64>,
}

impl AnalyticMoments {
    /// E[Yᵢᵏ] for k ∈ {2, 4, 6}, or the reason it does not exist.
    pub fn ey(&self, order: u32) -> Result<f64> {
        let v = match order {
            2 => Some(self.ey2),
            4 => self.ey4,
            6 => self.ey6,
            _ => return Err(invalid(format!("response moment of order {order} is not tracked"))),
        };
        v.ok_or(Error::MomentDoesNotExist { order, dof: self.dof.unwrap_or(f64::NAN) })
    }

    pub fn ex4(&self) -> Result<f64> {
        self.ex4.ok_or(Error::MomentDoesNotExist { order: 4, dof: self.dof.unwrap_or(f64::NAN) })
    }
}

pub fn analytic_moments(spec: &GeneratorSpec) -> Result<AnalyticMoments> {
    spec.validate()?;
    let dof = |noise: &NoiseLaw| match noise {
        NoiseLaw::StudentT { dof, .. } => Some(*dof),
        NoiseLaw::Gaussian { .. } => None,
    };
    Ok(match spec {
        GeneratorSpec::IidLinearRegression { theta_star, x_law, noise } => {
            let y = x_law.projection(theta_star).add(&noise.cumulants());
            AnalyticMoments {
                ey2: y.k2,
                ey4: y.moment(4),
                ey6: y.moment(6),
                ex4: Some(x_law.norm_fourth(theta_star.len())),
                var_eps: noise.variance(),
                dof: dof(noise),
            }
        }
        GeneratorSpec::Ar1 { a, noise, .. } => {
            let y = noise.cumulants().ar1_stationary(*a);
            let ey4 = y.moment(4);
            AnalyticMoments {
                ey2: y.k2,
                ey4,
                ey6: y.moment(6),
                ex4: ey4.map(|m4| 1.0 + 2.0 * y.k2 + m4),
                var_eps: noise.variance(),
                dof: dof(noise),
            }
        }
        GeneratorSpec::BoundedClassification { theta_star, x_law, .. } => AnalyticMoments {
            ey2: 1.0,
            ey4: Some(1.0),
            ey6: Some(1.0),
            ex4: Some(x_law.norm_fourth(theta_star.len())),
            var_eps: 0.0,
            dof: None,
        },
    })
}

/// Cumulants of the residual yᵢ − ⟨θ, xᵢ⟩ without its constant shift, and the shift.
fn residual_law(spec: &GeneratorSpec, theta: &[f64]) -> Result<(Cumulants, f64)> {
    match spec {
        GeneratorSpec::IidLinearRegression { theta_star, x_law, noise } => {
            let diff: Vec<f64> = theta_star.iter().zip(theta).map(|(s, t)| s - t).collect();
            Ok((x_law.projection(&diff).add(&noise.cumulants()), 0.0))
        }
        GeneratorSpec::Ar1 { a, noise, .. } => {
            // yᵢ − θ₀ − θ₁ yᵢ₋₁ = (a − θ₁) yᵢ₋₁ + εᵢ − θ₀, with yᵢ₋₁ ⟂ εᵢ
            let eps = noise.cumulants();
            let level = eps.ar1_stationary(*a).scale(a - theta[1]);
            Ok((level.add(&eps), -theta[0]))
        }
        GeneratorSpec::BoundedClassification { .. } => {
            Err(Error::Unsupported("squared-loss moments are not tracked for classification data".into()))
        }
    }
}

/// E[ℓᵢ(θ)ˢ] for the squared loss, s ∈ {1, 2, 3}.
pub fn squared_loss_moment(spec: &GeneratorSpec, theta: &[f64], s: u32) -> Result<f64> {
    spec.validate()?;
    if theta.len() != spec.x_dim() {
        return Err(Error::DimensionMismatch { expected: spec.x_dim(), got: theta.len() });
    }
    if !(1..=3).contains(&s) {
        return Err(Error::Unsupported(format!("squared-loss moment of order {s} (supported: 1, 2, 3)")));
    }
    let (law, shift) = residual_law(spec, theta)?;
    law.shifted_moment(shift, 2 * s).ok_or_else(|| match spec {
        GeneratorSpec::IidLinearRegression { noise: NoiseLaw::StudentT { dof, .. }, .. }
        | GeneratorSpec::Ar1 { noise: NoiseLaw::StudentT { dof, .. }, .. } => {
            Error::MomentDoesNotExist { order: 2 * s, dof: *dof }
        }
        _ => Error::Numerical("missing residual moment".into()),
    })
}

/// Var[ℓᵢ(θ)] for the squared loss.
pub fn squared_loss_variance(spec: &GeneratorSpec, theta: &[f64]) -> Result<f64> {
    let m1 = squared_loss_moment(spec, theta, 1)?;
    let m2 = squared_loss_moment(spec, theta, 2)?;
    Ok(m2 - m1 * m1)
}

/// Closed-form R(θⱼ) for every atom.
///
/// Supported: squared loss for regression and AR(1) data, and the zero-one
/// loss at threshold 0 for classification data with Gaussian covariates.
pub fn true_risk_closed_form(spec: &GeneratorSpec, atoms: &AtomSet, loss: LossKind) -> Result<Vec<f64>> {
    spec.validate()?;
    if atoms.dim() != spec.x_dim() {
        return Err(Error::DimensionMismatch { expected: spec.x_dim(), got: atoms.dim() });
    }
    match (spec, loss) {
        (GeneratorSpec::IidLinearRegression { .. } | GeneratorSpec::Ar1 { .. }, LossKind::Squared) => {
            atoms.iter().map(|a| squared_loss_moment(spec, a.coords(), 1)).collect()
        }
        (
            GeneratorSpec::BoundedClassification { theta_star, x_law: XLaw::Gaussian { .. }, flip_prob },
            LossKind::ZeroOne { threshold: 0.0 },
        ) => Ok(atoms
            .iter()
            .map(|a| flip_prob + (1.0 - 2.0 * flip_prob) * sign_disagreement(a.coords(), theta_star))
            .collect()),
        _ => Err(Error::Unsupported(format!("no closed-form risk for {loss:?} on this generator"))),
    }
}

/// P(1[⟨θ, X⟩ ≥ 0] ≠ 1[⟨θ*, X⟩ ≥ 0]) for rotation-invariant X: angle(θ, θ*)/π.
fn sign_disagreement(theta: &[f64], theta_star: &[f64]) -> f64 {
    let nt = dot(theta, theta).sqrt();
    let ns = dot(theta_star, theta_star).sqrt();
    match (nt == 0.0, ns == 0.0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 0.5,
        (false, false) => {
            let cos = (dot(theta, theta_star) / (nt * ns)).clamp(-1.0, 1.0);
            cos.acos() / std::f64::consts::PI
        }
    }
}

/// Monte Carlo R(θⱼ) on a fresh oracle stream.
///
/// i.i.d. generators report the per-draw standard error; AR(1) uses one long
/// stationary path and reports a batch-means standard error over 100 batches.
pub fn true_risk_monte_carlo(spec: &GeneratorSpec, atoms: &AtomSet, loss: LossKind, mc: MonteCarlo) -> Result<TrueRisk> {
    if mc.draws < 200 {
        return Err(invalid("Monte Carlo risk needs at least 200 draws"));
    }
    if atoms.dim() != spec.x_dim() {
        return Err(Error::DimensionMismatch { expected: spec.x_dim(), got: atoms.dim() });
    }
    let mut rng = stream_rng(mc.seed, ORACLE_STREAM);
    let data = generate_with_rng(spec, mc.draws, &mut rng)?;
    let batches = if spec.is_iid() { mc.draws } else { 100 };
    let per_batch = mc.draws / batches;
    let used = per_batch * batches;

    let mut values = Vec::with_capacity(atoms.len());
    let mut errors = Vec::with_capacity(atoms.len());
    let mut batch_means = vec![0.0; batches];
    for atom in atoms.iter() {
        batch_means.fill(0.0);
        for (i, (x, y)) in data.rows().take(used).enumerate() {
            batch_means[i / per_batch] += loss.eval(dot(atom.coords(), x), y);
        }
        batch_means.iter_mut().for_each(|m| *m /= per_batch as f64);
        let mean = batch_means.iter().sum::<f64>() / batches as f64;
        let var = batch_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
        values.push(mean);
        errors.push((var / batches as f64).sqrt());
    }
    Ok(TrueRisk { values, std_errors: Some(errors) })
}

/// The α envelope assumed for `spec`. i.i.d. generators have α ≡ 0.
pub fn mixing_spec_for(spec: &GeneratorSpec) -> Result<MixingBoundSpec> {
    match spec {
        GeneratorSpec::Ar1 { mixing: Some(m), .. } => {
            m.validate()?;
            Ok(*m)
        }
        GeneratorSpec::Ar1 { mixing: None, .. } => {
            Err(Error::Config("AR(1) generator needs a configured mixing envelope (c1, c2)".into()))
        }
        _ => Ok(MixingBoundSpec { c1: 0.0, c2: 1.0 }),
    }
}
