//! Causal-state reconstruction from a symbol stream.
//!
//! Histories are the length-`max_history_length` suffixes preceding each
//! position. Each history's next-symbol distribution is estimated from counts,
//! histories are greedily clustered by total-variation distance (most frequent
//! first), and the clusters are then split until every symbol leads each class
//! to a single successor class.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use super::{CausalState, EpsilonMachine, ProbabilityDistribution, SymbolStream, SymbolicError};
use crate::Scalar;

/// Upper bound on `alphabet^max_history_length × alphabet` count cells.
const MAX_COUNT_CELLS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InferenceConfig<F: Scalar = f64> {
    pub max_history_length: usize,
    /// Total-variation threshold for merging histories into one class.
    pub merge_tolerance: F,
    /// Histories seen fewer times than this are attached to the nearest class
    /// after clustering instead of seeding classes.
    pub min_history_count: u64,
}

impl<F: Scalar> Default for InferenceConfig<F> {
    fn default() -> Self {
        Self {
            max_history_length: 3,
            merge_tolerance: F::lit(0.05),
            min_history_count: 10,
        }
    }
}

impl<F: Scalar> InferenceConfig<F> {
    pub fn validate(&self) -> Result<(), SymbolicError> {
        if self.max_history_length < 1 {
            return Err(SymbolicError::InvalidConfig("max_history_length must be ≥ 1".into()));
        }
        if !(self.merge_tolerance > F::zero() && self.merge_tolerance < F::one()) {
            return Err(SymbolicError::InvalidConfig(format!(
                "merge_tolerance {} outside (0, 1)",
                self.merge_tolerance
            )));
        }
        if self.min_history_count < 1 {
            return Err(SymbolicError::InvalidConfig("min_history_count must be ≥ 1".into()));
        }
        Ok(())
    }
}

struct HistoryTable {
    alphabet: usize,
    modulus: u64,
    counts: Vec<u64>,
}

impl HistoryTable {
    fn build(stream: &SymbolStream, length: usize) -> Result<Self, SymbolicError> {
        let k = stream.alphabet_size();
        let cells = (k as u64)
            .checked_pow(length as u32)
            .filter(|&m| m.saturating_mul(k as u64) <= MAX_COUNT_CELLS as u64)
            .ok_or_else(|| {
                SymbolicError::InvalidConfig(format!("{k}^{length} histories exceed the count table limit"))
            })?;
        let mut counts = vec![0u64; cells as usize * k];
        let data = stream.data();
        let mut code = 0u64;
        for (i, &s) in data.iter().enumerate() {
            if i >= length {
                counts[code as usize * k + s as usize] += 1;
            }
            code = (code * k as u64 + s as u64) % cells;
        }
        Ok(Self {
            alphabet: k,
            modulus: cells,
            counts,
        })
    }

    fn row(&self, history: u64) -> &[u64] {
        let k = self.alphabet;
        &self.counts[history as usize * k..(history as usize + 1) * k]
    }

    fn total(&self, history: u64) -> u64 {
        self.row(history).iter().sum()
    }

    fn extend(&self, history: u64, symbol: usize) -> u64 {
        (history * self.alphabet as u64 + symbol as u64) % self.modulus
    }

    fn render(&self, history: u64, length: usize, alphabet: &[char]) -> String {
        let k = self.alphabet as u64;
        let mut out = vec![' '; length];
        let mut code = history;
        for slot in out.iter_mut().rev() {
            *slot = alphabet[(code % k) as usize];
            code /= k;
        }
        out.into_iter().collect()
    }
}

fn distribution<F: Scalar>(counts: &[u64]) -> ProbabilityDistribution<F> {
    ProbabilityDistribution::from_counts(counts).expect("non-empty counts")
}

/// Index of the closest class, lowest id on ties.
fn nearest<F: Scalar>(dist: &ProbabilityDistribution<F>, classes: &[Vec<u64>]) -> (usize, F) {
    let mut best = (0, F::infinity());
    for (id, counts) in classes.iter().enumerate() {
        let d = dist.total_variation(&distribution(counts));
        if d < best.1 {
            best = (id, d);
        }
    }
    best
}

fn add(into: &mut [u64], from: &[u64]) {
    for (a, b) in into.iter_mut().zip(from) {
        *a += b;
    }
}

/// Reconstructs an epsilon-machine from `stream`.
///
/// `P(σ)` is the stationary distribution of the inferred transitions when they
/// form one communicating class (it agrees with the empirical class visit
/// frequencies up to edge effects), otherwise the empirical frequencies.
pub fn infer_causal_states<F: Scalar>(
    stream: &SymbolStream,
    config: &InferenceConfig<F>,
) -> Result<EpsilonMachine<F>, SymbolicError> {
    config.validate()?;
    let alphabet = stream.alphabet().to_vec();
    let k = alphabet.len();
    if k == 1 {
        warn!("single-symbol alphabet: the process is trivially a one-state machine");
        let state = CausalState {
            id: 0,
            histories: vec![alphabet[0].to_string().repeat(config.max_history_length)],
            emission: ProbabilityDistribution::point(0, 1),
            successor: BTreeMap::from([(0, 0)]),
        };
        return EpsilonMachine::new(alphabet, vec![state], ProbabilityDistribution::point(0, 1));
    }
    let needed = 10 * config.min_history_count;
    if (stream.len() as u64) < needed {
        return Err(SymbolicError::InsufficientData(format!(
            "{} symbols, need at least {needed}",
            stream.len()
        )));
    }

    let length = config.max_history_length;
    let table = HistoryTable::build(stream, length)?;
    let mut observed: Vec<(u64, u64)> = (0..table.modulus)
        .map(|h| (h, table.total(h)))
        .filter(|&(_, n)| n > 0)
        .collect();
    observed.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let split = observed.partition_point(|&(_, n)| n >= config.min_history_count);
    let (frequent, rare) = observed.split_at(split);
    if frequent.is_empty() {
        return Err(SymbolicError::InsufficientData(format!(
            "no history of length {length} occurs {} times",
            config.min_history_count
        )));
    }

    // Greedy clustering by next-symbol distribution.
    let mut class_counts: Vec<Vec<u64>> = Vec::new();
    let mut members: Vec<Vec<u64>> = Vec::new();
    for &(h, _) in frequent {
        let dist = distribution::<F>(table.row(h));
        let (id, d) = nearest(&dist, &class_counts);
        if d <= config.merge_tolerance {
            add(&mut class_counts[id], table.row(h));
            members[id].push(h);
        } else {
            class_counts.push(table.row(h).to_vec());
            members.push(vec![h]);
        }
    }
    for &(h, _) in rare {
        let (id, _) = nearest(&distribution::<F>(table.row(h)), &class_counts);
        members[id].push(h);
    }

    let mut class_of = vec![usize::MAX; table.modulus as usize];
    let assign = |members: &[Vec<u64>], class_of: &mut Vec<usize>| {
        for (id, hs) in members.iter().enumerate() {
            for &h in hs {
                class_of[h as usize] = id;
            }
        }
    };
    assign(&members, &mut class_of);

    // Split classes until successors are determined by (class, symbol).
    loop {
        let mut next_members: Vec<Vec<u64>> = Vec::with_capacity(members.len());
        let mut changed = false;
        for hs in &members {
            // Each group carries the union of successor observations of its members.
            let mut groups: Vec<(BTreeMap<usize, usize>, Vec<u64>)> = Vec::new();
            for &h in hs {
                let signature: BTreeMap<usize, usize> = (0..k)
                    .filter(|&a| table.row(h)[a] > 0)
                    .filter_map(|a| {
                        let c = class_of[table.extend(h, a) as usize];
                        (c != usize::MAX).then_some((a, c))
                    })
                    .collect();
                let rare_member = table.total(h) < config.min_history_count;
                let compatible = groups
                    .iter()
                    .position(|(sig, _)| signature.iter().all(|(a, c)| sig.get(a).is_none_or(|g| g == c)));
                match compatible {
                    Some(g) => {
                        groups[g].0.extend(signature);
                        groups[g].1.push(h);
                    }
                    // Rare histories never found a class of their own.
                    None if rare_member => groups[0].1.push(h),
                    None => groups.push((signature, vec![h])),
                }
            }
            changed |= groups.len() > 1;
            next_members.extend(groups.into_iter().map(|(_, hs)| hs));
        }
        members = next_members;
        assign(&members, &mut class_of);
        if !changed {
            break;
        }
    }

    // Assemble states; successor on each symbol by count-weighted majority.
    let mut states = Vec::with_capacity(members.len());
    let mut visits = Vec::with_capacity(members.len());
    for (id, hs) in members.iter().enumerate() {
        let mut counts = vec![0u64; k];
        let mut votes: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); k];
        for &h in hs {
            let row = table.row(h);
            add(&mut counts, row);
            for (a, &n) in row.iter().enumerate() {
                let c = class_of[table.extend(h, a) as usize];
                if n > 0 && c != usize::MAX {
                    *votes[a].entry(c).or_default() += n;
                }
            }
        }
        let mut successor = BTreeMap::new();
        for (a, v) in votes.iter().enumerate() {
            match v.iter().max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0))) {
                Some((&c, _)) => {
                    successor.insert(a as u8, c);
                }
                // Only seen at the very end of the stream.
                None => counts[a] = 0,
            }
        }
        visits.push(counts.iter().sum::<u64>());
        let mut ordered = hs.clone();
        ordered.sort_by(|a, b| table.total(*b).cmp(&table.total(*a)).then(a.cmp(b)));
        states.push(CausalState {
            id,
            histories: ordered.iter().map(|&h| table.render(h, length, &alphabet)).collect(),
            emission: if counts.iter().any(|&c| c > 0) {
                distribution(&counts)
            } else {
                ProbabilityDistribution::uniform(k)
            },
            successor,
        });
    }
    // Uniform fallback above needs a successor for every symbol.
    for s in states.iter_mut() {
        for a in 0..k as u8 {
            s.successor.entry(a).or_insert(s.id);
        }
    }

    let empirical = ProbabilityDistribution::from_counts(&visits)?;
    let mut machine = EpsilonMachine::new(alphabet, states, empirical)?;
    if let Ok(pi) = machine.stationary_distribution() {
        machine.set_state_probabilities(pi)?;
    }
    Ok(machine)
}
