//! Mining viewed as a two-state process.
//!
//! σ₁ is "mining": each hash attempt fails (symbol 0) and stays in σ₁ with
//! probability `1 − p`, or succeeds (symbol 1) and moves to σ₂ with
//! probability `p`. σ₂ is "block found": the next round always starts, so it
//! emits 0 and returns to σ₁. The state probabilities are assigned directly as
//! `(1 − p, p)`, which is within `p²` of stationary for small `p`.
//!
//! The attempt stream itself is i.i.d. Bernoulli(`p`), so strict causal-state
//! inference on it finds a single state and `C_μ = 0`. [`compare_with_inference`]
//! reports both views.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::pow::{
    self, difficulty_to_target, leading_zero_probability, merkle_root, DifficultyTarget, Hash256, MineOutcome,
    MiningJob, NonceMode, PowError,
};
use crate::symbolic::{
    self, infer_causal_states, statistical_complexity, CausalState, EpsilonMachine, InferenceConfig,
    ProbabilityDistribution, SymbolStream, SymbolicError,
};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStateModel<F: Scalar = f64> {
    pub success_probability: F,
    pub machine: EpsilonMachine<F>,
}

impl<F: Scalar> TwoStateModel<F> {
    pub fn statistical_complexity(&self) -> Result<F, SymbolicError> {
        statistical_complexity(&self.machine)
    }
}

/// The two-state mining machine for per-attempt success probability `p`.
pub fn blockchain_machine<F: Scalar>(p: F) -> Result<TwoStateModel<F>, SymbolicError> {
    if !(p > F::zero() && p < F::one()) {
        return Err(SymbolicError::Domain {
            name: "p",
            value: p.to_f64().unwrap_or(f64::NAN),
            domain: "(0, 1)",
        });
    }
    let q = F::one() - p;
    let mining = CausalState::new(0, vec![q, p], &[(0, 0), (1, 1)])?;
    let found = CausalState::new(1, vec![F::one(), F::zero()], &[(0, 0)])?;
    let probabilities = ProbabilityDistribution::new(vec![q, p])?;
    Ok(TwoStateModel {
        success_probability: p,
        machine: EpsilonMachine::new(vec!['0', '1'], vec![mining, found], probabilities)?,
    })
}

/// One symbol per hash attempt: 1 if the attempt met `target`, else 0.
///
/// Each block is mined in random nonce mode with its own seed drawn from
/// `seed`; after a success the next header builds on the found hash with a
/// fresh single-transaction Merkle root.
pub fn mining_symbol_stream(
    target: &DifficultyTarget,
    attempts: usize,
    seed: u64,
) -> Result<SymbolStream, SymbolicError> {
    if attempts == 0 {
        return Err(SymbolicError::Domain {
            name: "attempts",
            value: 0.0,
            domain: "[1, ∞)",
        });
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(attempts);
    let mut parent = pow::Block::genesis().hash();
    let mut height = 1u64;
    while data.len() < attempts {
        let payload = format!("block-{height}");
        let job = MiningJob {
            parent_hash: parent,
            merkle_root: merkle_root(&[payload.as_bytes()]).expect("one payload"),
            target: *target,
            nonce_start: 0,
            mode: NonceMode::Random,
            seed: seeds.next_u64(),
            max_attempts: (attempts - data.len()) as u64,
        };
        match pow::mine(&job) {
            MineOutcome::Found {
                hash, attempts: tries, ..
            } => {
                data.extend(std::iter::repeat_n(0u8, tries as usize - 1));
                data.push(1);
                parent = hash;
                height += 1;
            }
            MineOutcome::Exhausted { attempts: tries } => {
                data.extend(std::iter::repeat_n(0u8, tries as usize));
            }
        }
    }
    SymbolStream::new(vec!['0', '1'], data)
}

/// Success probability and the resulting two-state complexity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRoute {
    pub p: f64,
    pub p_sigma1: f64,
    pub p_sigma2: f64,
    pub c_mu: f64,
}

impl ComplexityRoute {
    fn from_p(p: f64) -> Result<Self, SymbolicError> {
        let model = blockchain_machine(p)?;
        Ok(Self {
            p,
            p_sigma1: 1.0 - p,
            p_sigma2: p,
            c_mu: model.statistical_complexity()?,
        })
    }
}

/// Difficulty → target → success probability → `C_μ`.
///
/// `exact` uses `p = target / 2²⁵⁶`. `leading_zeros` uses `p = 16⁻ᵏ` where `k`
/// is the smallest hex-zero count that guarantees a hash meets the target
/// (one more than the zeros in the target's own rendering); this is the route
/// behind the published figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperReproduction {
    pub difficulty: f64,
    pub target: Hash256,
    pub target_value: f64,
    pub target_hex_leading_zeros: u32,
    pub sufficient_hex_zeros: u32,
    pub exact: ComplexityRoute,
    pub leading_zeros: ComplexityRoute,
}

#[derive(Debug, thiserror::Error)]
pub enum ReproductionError {
    #[error(transparent)]
    Pow(#[from] PowError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

pub fn paper_reproduction_report(difficulty: f64) -> Result<PaperReproduction, ReproductionError> {
    let target = difficulty_to_target(difficulty)?;
    let zeros = target.sufficient_hex_zeros();
    Ok(PaperReproduction {
        difficulty,
        target: target.target(),
        target_value: target.to_f64(),
        target_hex_leading_zeros: target.leading_hex_zeros(),
        sufficient_hex_zeros: zeros,
        exact: ComplexityRoute::from_p(target.success_probability())?,
        leading_zeros: ComplexityRoute::from_p(leading_zero_probability(zeros)?)?,
    })
}

/// The two-state model next to what inference recovers from the attempt stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferenceComparison {
    pub attempts: usize,
    pub empirical_success_rate: f64,
    pub model_states: usize,
    pub model_c_mu: f64,
    pub inferred_states: usize,
    pub inferred_c_mu: f64,
}

pub fn compare_with_inference(
    target: &DifficultyTarget,
    attempts: usize,
    seed: u64,
    config: &InferenceConfig<f64>,
) -> Result<InferenceComparison, SymbolicError> {
    let stream = mining_symbol_stream(target, attempts, seed)?;
    let model = blockchain_machine(target.success_probability())?;
    let inferred = infer_causal_states(&stream, config)?;
    let ones = stream.data().iter().filter(|&&s| s == 1).count();
    Ok(InferenceComparison {
        attempts,
        empirical_success_rate: ones as f64 / attempts as f64,
        model_states: model.machine.state_count(),
        model_c_mu: model.statistical_complexity()?,
        inferred_states: inferred.state_count(),
        inferred_c_mu: symbolic::statistical_complexity(&inferred)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pow::leading_zero_target;
    use crate::symbolic::binary_entropy;

    #[test]
    fn machine_examples() {
        let c = blockchain_machine(2f64.powi(-72))
            .unwrap()
            .statistical_complexity()
            .unwrap();
        assert!((c / 1.56e-20 - 1.0).abs() < 0.01, "{c}");
        assert_eq!(
            blockchain_machine(0.5f64).unwrap().statistical_complexity().unwrap(),
            1.0
        );
        let c = blockchain_machine(1.0f64 / 16.0)
            .unwrap()
            .statistical_complexity()
            .unwrap();
        // H(1/16) at 60 digits
        assert!((c - 0.337_290_066_617_013_9).abs() < 1e-12);
        assert!(blockchain_machine(0.0f64).is_err());
        assert!(blockchain_machine(1.0f64).is_err());
    }

    #[test]
    fn state_probabilities_are_assigned_not_solved() {
        let m = blockchain_machine(0.25f64).unwrap().machine;
        assert_eq!(m.state_probabilities().weights(), &[0.75, 0.25]);
        // The oscillating chain's own stationary law is (1/(1+p), p/(1+p)).
        let pi = m.stationary_distribution().unwrap();
        assert!((pi.get(0) - 0.8).abs() < 1e-12);
        assert!(blockchain_machine(1e-12f64).unwrap().machine.is_stationary(1e-9));
    }

    #[test]
    fn complexity_is_binary_entropy_and_increasing() {
        let mut prev = 0.0;
        for i in 1..=50 {
            let p = 0.5 * i as f64 / 50.0;
            let c = blockchain_machine(p).unwrap().statistical_complexity().unwrap();
            assert!(((c - binary_entropy(p).unwrap()) / c).abs() < 1e-6);
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn stream_examples() {
        let all = mining_symbol_stream(&DifficultyTarget::accept_all(), 500, 1).unwrap();
        assert!(all.data().iter().all(|&s| s == 1));
        let toy = leading_zero_target(1).unwrap();
        let a = mining_symbol_stream(&toy, 5_000, 3).unwrap();
        assert_eq!(a, mining_symbol_stream(&toy, 5_000, 3).unwrap());
        assert_ne!(a, mining_symbol_stream(&toy, 5_000, 4).unwrap());
        assert_eq!(a.len(), 5_000);
        assert!(mining_symbol_stream(&toy, 0, 3).is_err());
    }

    #[test]
    fn reproduction_at_published_difficulty() {
        let r = paper_reproduction_report(595_921_917_085.42).unwrap();
        assert!((r.target_value / 4.524_004_658_678_446_3e55 - 1.0).abs() < 1e-9);
        assert_eq!(r.target_hex_leading_zeros, 17);
        assert_eq!(r.sufficient_hex_zeros, 18);
        assert!((r.leading_zeros.p_sigma2 / 2.1e-22 - 1.0).abs() < 0.01);
        assert!((r.leading_zeros.c_mu / 1.56e-20 - 1.0).abs() < 0.01);
        // 16^-18 < p ≤ 16^-17
        assert!(r.exact.p > 16f64.powi(-18) && r.exact.p <= 16f64.powi(-17));
    }

    #[test]
    fn reproduction_at_difficulty_one_and_sixteen() {
        let one = paper_reproduction_report(1.0).unwrap();
        let p = 65535.0 / 2f64.powi(48);
        assert!((one.exact.p / p - 1.0).abs() < 1e-12);
        // H(65535/2^48) at 60 digits: 7.7863705249743219613e-9
        assert!((one.exact.c_mu / 7.786_370_524_974_322e-9 - 1.0).abs() < 1e-9);
        let sixteen = paper_reproduction_report(16.0).unwrap();
        assert!((sixteen.exact.p / one.exact.p - 1.0 / 16.0).abs() < 1e-9);
        assert!(paper_reproduction_report(0.5).is_err());
    }
}
