//! polarkit: simulation and inference for affective-polarization
//! dynamics.
//!
//! The toolkit models a binary-choice process on a two-party social
//! network: each node carries a fixed party label and a mutable stance,
//! and switches stance with a logistic probability driven by in-group
//! love (alpha), out-group hate (beta) and inertia (delta). On top of
//! the single-node kernel sit a stochastic network simulator, the
//! fully-connected mean-field ODE (two-party and N-party), and a
//! maximum-likelihood estimator that recovers (alpha, beta, delta) from
//! stance-transition data.
//!
//! The numeric kernels are generic over the scalar type through
//! [`scalar::Real`] (f32 or f64); the aliases at the crate root pin the
//! double-precision instantiations that the CLI and file formats use.

pub mod estimation;
pub mod experiments;
pub mod graph;
pub mod influence;
pub mod io;
pub mod meanfield;
pub mod model;
pub mod scalar;
pub mod sim;

pub use graph::{NodeId, Party, PartyGraph, Stance};
pub use influence::InfluenceMeasureKind;
pub use scalar::Real;

/// Double-precision instantiations of the generic kernels.
pub type InfluenceVector64 = influence::InfluenceVector<f64>;
pub type ModelParams64 = model::ModelParams<f64>;
pub type SimConfig64 = sim::SimConfig<f64>;
pub type Trajectory64 = sim::Trajectory<f64>;
pub type MeanFieldState64 = meanfield::MeanFieldState<f64>;
pub type TwoPartyConfig64 = meanfield::TwoPartyConfig<f64>;
pub type EmotionMatrix64 = meanfield::EmotionMatrix<f64>;
pub type MultiPartyState64 = meanfield::MultiPartyState<f64>;
pub type TransitionObservation64 = estimation::TransitionObservation<f64>;
pub type EstimationResult64 = estimation::EstimationResult<f64>;
