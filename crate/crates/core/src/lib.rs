//! Edge-sign prediction in signed networks: combines per-edge sentiment
//! probabilities with structural-balance triangle costs through MAP inference
//! in a hinge-loss Markov random field.
//!
//! Numeric code is generic over [`scalar::Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod error;
pub mod evaluation;
pub mod graph;
pub mod inference;
pub mod learning;
pub mod potentials;
pub mod reduction;
pub mod rng;
pub mod scalar;
pub mod sentiment;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Graph = graph::SignedGraph<f64>;
pub type Edge = graph::SignedEdge<f64>;
pub type Weights = potentials::CostWeights<f64>;
pub type Problem = inference::HlMrfProblem<f64>;
pub type Solver = inference::SolverOptions<f64>;
pub type Solution = inference::SolverResult<f64>;
pub type Learn = learning::LearnConfig<f64>;
pub type Sentiment = sentiment::SentimentModel<f64>;
pub type Calibration = sentiment::CalibrationMap<f64>;
pub type Scored = evaluation::ScoredEdge<f64>;
pub type Sweep = evaluation::SweepConfig<f64>;
pub type Reduction = reduction::ReductionOutput<f64>;
