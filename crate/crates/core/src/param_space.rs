//! Parameter atoms, discrete distributions over them, and prior construction.
//!
//! Every integral over the parameter space is an exact finite sum over the
//! atoms of an [`AtomSet`]. Atom order is fixed at construction and indices
//! stay valid through loss tables, distributions and reports.

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Error, Result};
use crate::rng::{stream_rng, PRIOR_STREAM};

/// Tolerance within which a weight vector counts as normalized.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;
/// Constructors renormalize weight vectors whose sum is this close to one.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

/// A single parameter vector θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterAtom(Vec<f64>);

impl ParameterAtom {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("parameter atom has no coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("parameter atom has a non-finite coordinate"));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }
}

/// An ordered, nonempty set of atoms sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomSet {
    dim: usize,
    atoms: Vec<ParameterAtom>,
}

impl AtomSet {
    pub fn new(atoms: Vec<ParameterAtom>) -> Result<Self> {
        let first = atoms.first().ok_or_else(|| invalid("atom set is empty"))?;
        let dim = first.dim();
        if let Some(bad) = atoms.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
        }
        Ok(Self { dim, atoms })
    }

    pub fn from_coords(coords: Vec<Vec<f64>>) -> Result<Self> {
        let atoms = coords.into_iter().map(ParameterAtom::new).collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom(&self, j: usize) -> &ParameterAtom {
        &self.atoms[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParameterAtom> {
        self.atoms.iter()
    }
}

/// Probability weights aligned with an [`AtomSet`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates `weights`; sums off by at most [`RENORMALIZE_TOLERANCE`] are
    /// renormalized, anything further off is rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(Self::normalized(weights, total))
    }

    /// Normalizes nonnegative masses with a strictly positive total.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if masses.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("mass is negative or not finite".into()));
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Numerical(format!("cannot normalize masses with total {total}")));
        }
        Ok(Self::normalized(masses, total))
    }

    fn normalized(mut weights: Vec<f64>, total: f64) -> Self {
        if total != 1.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Self { weights }
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDistribution("uniform over zero atoms".into()));
        }
        Ok(Self { weights: vec![1.0 / k as f64; k] })
    }

    pub fn dirac(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(invalid(format!("dirac index {index} out of range for {k} atoms")));
        }
        let mut weights = vec![0.0; k];
        weights[index] = 1.0;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    /// Indices carrying positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(j, _)| j)
    }
}

/// Base law for i.i.d. sampled priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum SampleLaw {
    /// Independent N(0, scale²) coordinates.
    Gaussian { scale: f64 },
    /// Independent uniform coordinates on `[lower_i, upper_i]`.
    UniformBox { lower: Vec<f64>, upper: Vec<f64> },
}

/// How to discretize the prior π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec {
    /// Tensor grid with `points` per axis, enumerated in row-major order
    /// (last coordinate fastest).
    UniformGrid { lower: Vec<f64>, upper: Vec<f64>, points: usize },
    /// `count` i.i.d. draws from `base`, kept in draw order.
    IidSample { base: SampleLaw, dimension: usize, count: usize },
    /// Caller-provided atoms and weights.
    Explicit { atoms: Vec<Vec<f64>>, weights: Vec<f64> },
}

/// Builds the atom set and prior weights. Grid and sampled priors are uniform.
pub fn build_prior(spec: &PriorSpec, seed: u64) -> Result<(AtomSet, DiscreteDistribution)> {
    match spec {
        PriorSpec::UniformGrid { lower, upper, points } => {
            check_box(lower, upper)?;
            if *points == 0 {
                return Err(invalid("grid prior needs at least one point per axis"));
            }
            let axes: Vec<Vec<f64>> = lower
                .iter()
                .zip(upper)
                .map(|(&lo, &hi)| linspace(lo, hi, *points))
                .collect();
            let k = points.checked_pow(lower.len() as u32).ok_or_else(|| invalid("grid too large"))?;
            if k < 2 {
                return Err(invalid("grid prior must have at least two atoms"));
            }
            let mut coords = Vec::with_capacity(k);
            for flat in 0..k {
                let mut rem = flat;
                let mut atom = vec![0.0; axes.len()];
                for (axis, slot) in axes.iter().zip(atom.iter_mut()).rev() {
                    *slot = axis[rem % points];
                    rem /= points;
                }
                coords.push(atom);
            }
            Ok((AtomSet::from_coords(coords)?, DiscreteDistribution::uniform(k)?))
        }
        PriorSpec::IidSample { base, dimension, count } => {
            if *count < 2 {
                return Err(invalid("sampled prior must have at least two atoms"));
            }
            if *dimension == 0 {
                return Err(invalid("sampled prior needs a positive dimension"));
            }
            let mut rng = stream_rng(seed, PRIOR_STREAM);
            let coords: Vec<Vec<f64>> = match base {
                SampleLaw::Gaussian { scale } => {
                    let normal = Normal::new(0.0, *scale)
                        .map_err(|_| invalid(format!("invalid gaussian prior scale {scale}")))?;
                    (0..*count).map(|_| (0..*dimension).map(|_| normal.sample(&mut rng)).collect()).collect()
                }
                SampleLaw::UniformBox { lower, upper } => {
                    check_box(lower, upper)?;
                    ensure_len(*dimension, lower.len())?;
                    (0..*count)
                        .map(|_| lower.iter().zip(upper).map(|(&lo, &hi)| sample_uniform(&mut rng, lo, hi)).collect())
                        .collect()
                }
            };
            Ok((AtomSet::from_coords(coords)?, DiscreteDistribution::uniform(*count)?))
        }
        PriorSpec::Explicit { atoms, weights } => {
            ensure_len(atoms.len(), weights.len())?;
            Ok((AtomSet::from_coords(atoms.clone())?, DiscreteDistribution::new(weights.clone())?))
        }
    }
}

fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        Uniform::new(lo, hi).map(|u| u.sample(rng)).unwrap_or(lo)
    }
}

fn check_box(lower: &[f64], upper: &[f64]) -> Result<()> {
    ensure_len(lower.len(), upper.len())?;
    if lower.is_empty() {
        return Err(invalid("box has no coordinates"));
    }
    for (lo, hi) in lower.iter().zip(upper) {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(invalid("box bounds must be finite"));
        }
        if lo > hi {
            return Err(invalid(format!("box lower bound {lo} exceeds upper bound {hi}")));
        }
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect()
}

/// ∫ g dρ as the weighted sum Σ ρⱼ gⱼ.
///
/// Atoms with zero weight are skipped, so infinite values there do not
/// poison the sum.
pub fn expectation(dist: &DiscreteDistribution, values: &[f64]) -> Result<f64> {
    ensure_len(dist.len(), values.len())?;
    Ok(dist
        .weights()
        .iter()
        .zip(values)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, v)| w * v)
        .sum())
}

/// τ = Σ πⱼ ‖θⱼ‖⁴.
pub fn prior_moment_tau(atoms: &AtomSet, pi: &DiscreteDistribution) -> Result<f64> {
    prior_norm_moment(atoms, pi, 4)
}

/// Σ πⱼ ‖θⱼ‖⁶.
pub fn prior_moment_sixth(atoms: &AtomSet, pi: &DiscreteDistribution) -> Result<f64> {
    prior_norm_moment(atoms, pi, 6)
}

fn prior_norm_moment(atoms: &AtomSet, pi: &DiscreteDistribution, order: i32) -> Result<f64> {
    ensure_len(atoms.len(), pi.len())?;
    let values: Vec<f64> = atoms.iter().map(|a| a.norm_sq().powi(order / 2)).collect();
    expectation(pi, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn grid_prior_is_uniform_and_row_major() {
        let spec = PriorSpec::UniformGrid { lower: vec![-1.0], upper: vec![1.0], points: 3 };
        let (atoms, pi) = build_prior(&spec, 0).unwrap();
        let coords: Vec<f64> = atoms.iter().map(|a| a.coords()[0]).collect();
        assert_eq!(coords, vec![-1.0, 0.0, 1.0]);
        for w in pi.weights() {
            assert_relative_eq!(*w, 1.0 / 3.0);
        }

        let spec = PriorSpec::UniformGrid { lower: vec![0.0, 10.0], upper: vec![1.0, 11.0], points: 2 };
        let (atoms, _) = build_prior(&spec, 0).unwrap();
        let coords: Vec<Vec<f64>> = atoms.iter().map(|a| a.coords().to_vec()).collect();
        assert_eq!(coords, vec![vec![0.0, 10.0], vec![0.0, 11.0], vec![1.0, 10.0], vec![1.0, 11.0]]);
    }

    #[test]
    fn explicit_prior_is_returned_unchanged() {
        let spec = PriorSpec::Explicit { atoms: vec![vec![0.0], vec![1.0]], weights: vec![0.25, 0.75] };
        let (atoms, pi) = build_prior(&spec, 0).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(pi.weights(), &[0.25, 0.75]);
    }

    #[test]
    fn sampled_prior_is_deterministic() {
        let spec = PriorSpec::IidSample { base: SampleLaw::Gaussian { scale: 1.0 }, dimension: 2, count: 100 };
        let a = build_prior(&spec, 7).unwrap();
        let b = build_prior(&spec, 7).unwrap();
        assert_eq!(a, b);
        let c = build_prior(&spec, 8).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn prior_errors() {
        let empty = PriorSpec::UniformGrid { lower: vec![0.0], upper: vec![1.0], points: 0 };
        assert!(build_prior(&empty, 0).is_err());
        let single = PriorSpec::UniformGrid { lower: vec![0.0], upper: vec![1.0], points: 1 };
        assert!(build_prior(&single, 0).is_err());
        let nan = PriorSpec::UniformGrid { lower: vec![f64::NAN], upper: vec![1.0], points: 3 };
        assert!(build_prior(&nan, 0).is_err());
        let inf = PriorSpec::UniformGrid { lower: vec![0.0], upper: vec![f64::INFINITY], points: 3 };
        assert!(build_prior(&inf, 0).is_err());
        let bad_weights = PriorSpec::Explicit { atoms: vec![vec![0.0], vec![1.0]], weights: vec![0.5, 0.6] };
        assert!(build_prior(&bad_weights, 0).is_err());
    }

    #[test]
    fn distribution_renormalizes_only_tiny_drift() {
        let d = DiscreteDistribution::new(vec![0.5, 0.5 + 1e-10]).unwrap();
        let total: f64 = d.weights().iter().sum();
        assert!((total - 1.0).abs() <= WEIGHT_TOLERANCE);
        assert!(DiscreteDistribution::new(vec![0.5, 0.5 + 1e-8]).is_err());
        assert!(DiscreteDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![]).is_err());
    }

    #[test]
    fn expectation_examples() {
        let d = DiscreteDistribution::new(vec![0.25, 0.75]).unwrap();
        assert_relative_eq!(expectation(&d, &[4.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(expectation(&d, &[3.5, 3.5]).unwrap(), 3.5);
        let dirac = DiscreteDistribution::dirac(3, 2).unwrap();
        assert_eq!(expectation(&dirac, &[1.0, f64::INFINITY, 7.0]).unwrap(), 7.0);
        assert!(expectation(&d, &[1.0]).is_err());
    }

    #[test]
    fn tau_examples() {
        let atoms = AtomSet::from_coords(vec![vec![1.0, 1.0]]).unwrap();
        let pi = DiscreteDistribution::dirac(1, 0).unwrap();
        assert_relative_eq!(prior_moment_tau(&atoms, &pi).unwrap(), 4.0);
        assert_relative_eq!(prior_moment_sixth(&atoms, &pi).unwrap(), 8.0);

        let origin = AtomSet::from_coords(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(prior_moment_tau(&origin, &pi).unwrap(), 0.0);

        let atoms = AtomSet::from_coords(vec![vec![-1.0], vec![1.0]]).unwrap();
        let pi = DiscreteDistribution::uniform(2).unwrap();
        assert_relative_eq!(prior_moment_tau(&atoms, &pi).unwrap(), 1.0);
    }

    #[test]
    fn atom_set_rejects_mixed_dimensions() {
        assert!(AtomSet::from_coords(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(AtomSet::from_coords(vec![]).is_err());
        assert!(AtomSet::from_coords(vec![vec![f64::NAN]]).is_err());
    }

    fn dist_and_vectors() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, f64, f64)> {
        (1usize..40).prop_flat_map(|k| {
            (
                prop::collection::vec(0.0f64..1.0, k),
                prop::collection::vec(-100.0f64..100.0, k),
                prop::collection::vec(-100.0f64..100.0, k),
                -10.0f64..10.0,
                -10.0f64..10.0,
            )
        })
    }

    proptest! {
        #[test]
        fn expectation_is_linear((masses, v, w, a, b) in dist_and_vectors()) {
            prop_assume!(masses.iter().sum::<f64>() > 1e-3);
            let d = DiscreteDistribution::from_masses(masses).unwrap();
            let total: f64 = d.weights().iter().sum();
            prop_assert!((total - 1.0).abs() <= WEIGHT_TOLERANCE);
            let mixed: Vec<f64> = v.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let lhs = expectation(&d, &mixed).unwrap();
            let rhs = a * expectation(&d, &v).unwrap() + b * expectation(&d, &w).unwrap();
            let scale = 1.0 + a.abs() * 100.0 + b.abs() * 100.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }
}
