use std::collections::{BTreeMap, VecDeque};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ProbabilityDistribution, SymbolStream, SymbolicError};
use crate::Scalar;

/// Equivalence class of histories with a common next-symbol distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalState<F: Scalar = f64> {
    pub id: usize,
    /// History suffixes (as symbol text) merged into this state; empty for
    /// analytically specified machines.
    pub histories: Vec<String>,
    pub emission: ProbabilityDistribution<F>,
    /// Symbol index to successor state id.
    pub successor: BTreeMap<u8, usize>,
}

impl<F: Scalar> CausalState<F> {
    pub fn new(id: usize, emission: Vec<F>, successor: &[(u8, usize)]) -> Result<Self, SymbolicError> {
        Ok(Self {
            id,
            histories: Vec::new(),
            emission: ProbabilityDistribution::new(emission)?,
            successor: successor.iter().copied().collect(),
        })
    }
}

/// Causal states with their transitions and the distribution `P(σ)` over them.
///
/// State ids are positions in `states`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MachineRepr<F>", into = "MachineRepr<F>")]
#[serde(bound = "")]
pub struct EpsilonMachine<F: Scalar = f64> {
    alphabet: Vec<char>,
    states: Vec<CausalState<F>>,
    state_probabilities: ProbabilityDistribution<F>,
}

impl<F: Scalar> EpsilonMachine<F> {
    /// Validates structure only: ids, emission arity, closed successor map.
    /// `state_probabilities` need not be stationary, see [`Self::is_stationary`].
    pub fn new(
        alphabet: Vec<char>,
        states: Vec<CausalState<F>>,
        state_probabilities: ProbabilityDistribution<F>,
    ) -> Result<Self, SymbolicError> {
        // Reuse the stream's alphabet rules.
        SymbolStream::new(alphabet.clone(), Vec::new())?;
        if states.is_empty() {
            return Err(SymbolicError::InvalidMachine("no states".into()));
        }
        if state_probabilities.len() != states.len() {
            return Err(SymbolicError::InvalidMachine(format!(
                "{} state probabilities for {} states",
                state_probabilities.len(),
                states.len()
            )));
        }
        for (i, s) in states.iter().enumerate() {
            if s.id != i {
                return Err(SymbolicError::InvalidMachine(format!(
                    "state at position {i} has id {}",
                    s.id
                )));
            }
            if s.emission.len() != alphabet.len() {
                return Err(SymbolicError::InvalidMachine(format!(
                    "state {i} emits over {} symbols, alphabet has {}",
                    s.emission.len(),
                    alphabet.len()
                )));
            }
            for (symbol, &w) in s.emission.weights().iter().enumerate() {
                let next = s.successor.get(&(symbol as u8));
                if w > F::zero() && next.is_none() {
                    return Err(SymbolicError::InvalidMachine(format!(
                        "state {i} emits symbol {symbol} without a successor"
                    )));
                }
            }
            if let Some((&symbol, &next)) = s.successor.iter().find(|(_, &n)| n >= states.len()) {
                return Err(SymbolicError::InvalidMachine(format!(
                    "state {i} on symbol {symbol} goes to missing state {next}"
                )));
            }
        }
        Ok(Self {
            alphabet,
            states,
            state_probabilities,
        })
    }

    /// Builds a machine and fills `P(σ)` with the stationary distribution.
    pub fn with_stationary(alphabet: Vec<char>, states: Vec<CausalState<F>>) -> Result<Self, SymbolicError> {
        let n = states.len().max(1);
        let mut m = Self::new(alphabet, states, ProbabilityDistribution::uniform(n))?;
        m.state_probabilities = m.stationary_distribution()?;
        Ok(m)
    }

    /// Period-0 process: always emits the first symbol of `01`.
    pub fn crystal() -> Self {
        Self::with_stationary(
            vec!['0', '1'],
            vec![CausalState::new(0, vec![F::one(), F::zero()], &[(0, 0)]).unwrap()],
        )
        .unwrap()
    }

    pub fn fair_coin() -> Self {
        let half = F::lit(0.5);
        Self::with_stationary(
            vec!['0', '1'],
            vec![CausalState::new(0, vec![half, half], &[(0, 0), (1, 0)]).unwrap()],
        )
        .unwrap()
    }

    /// Period-2 process 0101…
    pub fn tick_tock() -> Self {
        Self::with_stationary(
            vec!['0', '1'],
            vec![
                CausalState::new(0, vec![F::one(), F::zero()], &[(0, 1)]).unwrap(),
                CausalState::new(1, vec![F::zero(), F::one()], &[(1, 0)]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Binary process with no two consecutive 1s; a 1 is emitted with
    /// probability ½ whenever allowed.
    pub fn golden_mean() -> Self {
        let half = F::lit(0.5);
        Self::with_stationary(
            vec!['0', '1'],
            vec![
                CausalState::new(0, vec![half, half], &[(0, 0), (1, 1)]).unwrap(),
                CausalState::new(1, vec![F::one(), F::zero()], &[(0, 0)]).unwrap(),
            ],
        )
        .unwrap()
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> &[CausalState<F>] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_probabilities(&self) -> &ProbabilityDistribution<F> {
        &self.state_probabilities
    }

    /// Replaces `P(σ)`; the length must match the state count.
    pub fn set_state_probabilities(&mut self, probabilities: ProbabilityDistribution<F>) -> Result<(), SymbolicError> {
        if probabilities.len() != self.states.len() {
            return Err(SymbolicError::InvalidMachine(format!(
                "{} probabilities for {} states",
                probabilities.len(),
                self.states.len()
            )));
        }
        self.state_probabilities = probabilities;
        Ok(())
    }

    /// Row-stochastic state transition matrix, summing emissions that lead to the same state.
    pub fn transition_matrix(&self) -> Vec<Vec<F>> {
        let n = self.states.len();
        let mut t = vec![vec![F::zero(); n]; n];
        for s in &self.states {
            for (&symbol, &next) in &s.successor {
                t[s.id][next] = t[s.id][next] + s.emission.get(symbol as usize);
            }
        }
        t
    }

    /// `max_j |(πT)_j − π_j|` for the current `P(σ)`.
    pub fn stationarity_residual(&self) -> F {
        let t = self.transition_matrix();
        let pi = self.state_probabilities.weights();
        (0..pi.len())
            .map(|j| {
                let flow: F = (0..pi.len()).map(|i| pi[i] * t[i][j]).sum();
                (flow - pi[j]).abs()
            })
            .fold(F::zero(), F::max)
    }

    pub fn is_stationary(&self, tol: F) -> bool {
        self.stationarity_residual() <= tol
    }

    /// Solves `π = πT`, `Σπ = 1` by Gaussian elimination. Requires a single
    /// communicating class.
    pub fn stationary_distribution(&self) -> Result<ProbabilityDistribution<F>, SymbolicError> {
        let t = self.transition_matrix();
        let n = t.len();
        check_irreducible(&t)?;
        // Rows of (Tᵀ − I) with the last equation replaced by normalization.
        let mut a: Vec<Vec<F>> = (0..n)
            .map(|j| {
                let mut row: Vec<F> = (0..n).map(|i| t[i][j]).collect();
                row[j] = row[j] - F::one();
                row.push(F::zero());
                row
            })
            .collect();
        a[n - 1] = vec![F::one(); n + 1];
        let pi = solve(a).ok_or_else(|| SymbolicError::InvalidMachine("singular balance equations".into()))?;
        let pi: Vec<F> = pi.into_iter().map(|p| p.max(F::zero())).collect();
        let total: F = pi.iter().copied().sum();
        ProbabilityDistribution::new(pi.into_iter().map(|p| p / total).collect())
    }

    /// Samples `length` symbols starting from a state drawn from `P(σ)`.
    /// Deterministic for a fixed seed.
    pub fn generate(&self, length: usize, seed: u64) -> Result<SymbolStream, SymbolicError> {
        if length == 0 {
            return Err(SymbolicError::Domain {
                name: "length",
                value: 0.0,
                domain: "[1, ∞)",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = |d: &ProbabilityDistribution<F>| -> Vec<f64> {
            d.weights().iter().map(|w| w.to_f64().unwrap_or(0.0)).collect()
        };
        let start = WeightedIndex::new(weights(&self.state_probabilities))
            .map_err(|e| SymbolicError::InvalidMachine(format!("state probabilities: {e}")))?;
        let emit: Vec<WeightedIndex<f64>> = self
            .states
            .iter()
            .map(|s| WeightedIndex::new(weights(&s.emission)))
            .collect::<Result<_, _>>()
            .map_err(|e| SymbolicError::InvalidMachine(format!("emission: {e}")))?;

        let mut state = start.sample(&mut rng);
        let mut data = Vec::with_capacity(length);
        for _ in 0..length {
            let symbol = emit[state].sample(&mut rng) as u8;
            data.push(symbol);
            state = self.states[state].successor[&symbol];
        }
        SymbolStream::new(self.alphabet.clone(), data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SymbolicError> {
        serde_json::from_str(text).map_err(|e| SymbolicError::Json(e.to_string()))
    }
}

fn reachable<F: Scalar>(t: &[Vec<F>], start: usize, forward: bool) -> Vec<bool> {
    let n = t.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            let w = if forward { t[i][j] } else { t[j][i] };
            if w > F::zero() && !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

fn check_irreducible<F: Scalar>(t: &[Vec<F>]) -> Result<(), SymbolicError> {
    let fwd = reachable(t, 0, true);
    let bwd = reachable(t, 0, false);
    let (reachable, unreachable): (Vec<usize>, Vec<usize>) = (0..t.len()).partition(|&i| fwd[i] && bwd[i]);
    if unreachable.is_empty() {
        Ok(())
    } else {
        Err(SymbolicError::Reducible { reachable, unreachable })
    }
}

/// Gaussian elimination with partial pivoting on an augmented `n × (n+1)` system.
fn solve<F: Scalar>(mut a: Vec<Vec<F>>) -> Option<Vec<F>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() <= F::epsilon() {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, r) in a.iter_mut().enumerate() {
            if row != col {
                let factor = r[col] / pivot_row[col];
                if factor != F::zero() {
                    for (x, &p) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x = *x - factor * p;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(bound = "")]
struct StateRepr<F: Scalar> {
    id: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    histories: Vec<String>,
    emission: BTreeMap<char, F>,
    successor: BTreeMap<char, usize>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(bound = "")]
struct MachineRepr<F: Scalar> {
    alphabet: String,
    states: Vec<StateRepr<F>>,
    state_probabilities: BTreeMap<usize, F>,
}

impl<F: Scalar> From<EpsilonMachine<F>> for MachineRepr<F> {
    fn from(m: EpsilonMachine<F>) -> Self {
        let symbol = |i: u8| m.alphabet[i as usize];
        let states = m
            .states
            .iter()
            .map(|s| StateRepr {
                id: s.id,
                histories: s.histories.clone(),
                emission: s
                    .emission
                    .weights()
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| (symbol(i as u8), w))
                    .collect(),
                successor: s.successor.iter().map(|(&a, &n)| (symbol(a), n)).collect(),
            })
            .collect();
        MachineRepr {
            alphabet: m.alphabet.iter().collect(),
            states,
            state_probabilities: m.state_probabilities.weights().iter().copied().enumerate().collect(),
        }
    }
}

impl<F: Scalar> TryFrom<MachineRepr<F>> for EpsilonMachine<F> {
    type Error = SymbolicError;

    fn try_from(r: MachineRepr<F>) -> Result<Self, Self::Error> {
        let alphabet: Vec<char> = r.alphabet.chars().collect();
        let index = |c: char| -> Result<u8, SymbolicError> {
            alphabet
                .iter()
                .position(|&a| a == c)
                .map(|i| i as u8)
                .ok_or_else(|| SymbolicError::InvalidMachine(format!("symbol {c:?} not in alphabet")))
        };
        let mut states = Vec::with_capacity(r.states.len());
        for s in r.states {
            let mut emission = vec![F::zero(); alphabet.len()];
            for (c, w) in s.emission {
                emission[index(c)? as usize] = w;
            }
            let successor = s
                .successor
                .into_iter()
                .map(|(c, n)| Ok((index(c)?, n)))
                .collect::<Result<_, SymbolicError>>()?;
            states.push(CausalState {
                id: s.id,
                histories: s.histories,
                emission: ProbabilityDistribution::new(emission)?,
                successor,
            });
        }
        let n = states.len();
        if r.state_probabilities.keys().any(|&k| k >= n) || r.state_probabilities.len() != n {
            return Err(SymbolicError::InvalidMachine(
                "state_probabilities must cover exactly the state ids".into(),
            ));
        }
        let probs = ProbabilityDistribution::new(r.state_probabilities.into_values().collect())?;
        EpsilonMachine::new(alphabet, states, probs)
    }
}
