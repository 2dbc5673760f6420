//! Computational-mechanics toolkit for proof-of-work blockchains.
//!
//! * [`symbolic`]: symbol streams, epsilon-machines, causal-state inference and
//!   statistical complexity, with a precise path for probabilities near 0 or 1.
//! * [`pow`]: desk-scale proof-of-work chain (ASCII-hex headers, single SHA-256,
//!   Merkle roots, 256-bit targets, nonce search, longest-chain fork choice,
//!   birthday-bound collision math).
//! * [`complexity`]: the two-state mining machine and its statistical complexity,
//!   side by side with empirical inference on simulated mining streams.
//! * [`market`]: logistic and delayed-logistic maps, Lyapunov exponents and
//!   bifurcation scans.
//! * [`report`]: the reproduction table of published figures.
//!
//! The numerical core is generic over [`Scalar`] (`f32`/`f64`); the aliases below
//! pin the `f64` instantiation used by the chain-facing code and the CLI.

pub mod complexity;
pub mod market;
pub mod pow;
pub mod report;
pub mod scalar;
pub mod symbolic;

pub use scalar::Scalar;

/// `f64` epsilon-machine.
pub type Machine = symbolic::EpsilonMachine<f64>;
/// `f32` epsilon-machine.
pub type Machine32 = symbolic::EpsilonMachine<f32>;
/// `f64` probability distribution.
pub type Distribution = symbolic::ProbabilityDistribution<f64>;
/// `f32` probability distribution.
pub type Distribution32 = symbolic::ProbabilityDistribution<f32>;
/// `f64` inference settings.
pub type Config = symbolic::InferenceConfig<f64>;
/// `f64` map specification.
pub type Map = market::MapSpec<f64>;
/// `f32` map specification.
pub type Map32 = market::MapSpec<f32>;
/// `f64` orbit.
pub type Trajectory = market::Orbit<f64>;
