//! f-divergence PAC-Bayesian bounds, optimal aggregation and Monte Carlo
//! coverage experiments for heavy-tailed and dependent data.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregation;
pub mod datagen;
pub mod divergence;
pub mod error;
pub mod ext_real;
pub mod harness;
pub mod moments;
pub mod param_space;
pub mod risk;
pub mod rng;
pub mod selftest;

pub use aggregation::{BoundConfig, BoundReport, ComplexityEstimate};
pub use datagen::{GeneratorSpec, MixingBoundSpec, NoiseLaw, XLaw};
pub use divergence::DivergenceKind;
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, RegimeConfig};
pub use moments::{MomentBound, MomentRegime};
pub use param_space::{AtomSet, DiscreteDistribution, ParameterAtom, PriorSpec};
pub use risk::{Dataset, LossKind, LossTable};
