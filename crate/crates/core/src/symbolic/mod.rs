//! Symbol streams, epsilon-machines and information measures.

mod distribution;
mod entropy;
mod error;
mod inference;
mod machine;
mod stream;

pub use distribution::ProbabilityDistribution;
pub use entropy::{
    binary_entropy, entropy_term_precise, log1m_shanks, shannon_entropy, statistical_complexity, PRECISE_SWITCHOVER,
};
pub use error::SymbolicError;
pub use inference::{infer_causal_states, InferenceConfig};
pub use machine::{CausalState, EpsilonMachine};
pub use stream::SymbolStream;
