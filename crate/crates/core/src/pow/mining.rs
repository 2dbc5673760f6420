use std::sync::atomic::{AtomicU64, Ordering};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{header_hash, BlockHeader, DifficultyTarget, Hash256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonceMode {
    /// `nonce_start`, `nonce_start + 1`, … wrapping at 2³².
    Sequential,
    /// Successive 32-bit words of a ChaCha8 stream seeded with `seed`.
    Random,
}

/// A nonce search over one header template.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningJob {
    pub parent_hash: Hash256,
    pub merkle_root: Hash256,
    pub target: DifficultyTarget,
    pub nonce_start: u32,
    pub mode: NonceMode,
    pub seed: u64,
    pub max_attempts: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum MineOutcome {
    Found { nonce: u32, hash: Hash256, attempts: u64 },
    Exhausted { attempts: u64 },
}

impl MineOutcome {
    pub fn found(&self) -> Option<(u32, Hash256)> {
        match *self {
            Self::Found { nonce, hash, .. } => Some((nonce, hash)),
            Self::Exhausted { .. } => None,
        }
    }

    pub fn attempts(&self) -> u64 {
        match *self {
            Self::Found { attempts, .. } | Self::Exhausted { attempts } => attempts,
        }
    }
}

/// Nonces in scan order starting at attempt index `from`.
struct NonceSource {
    mode: NonceMode,
    next: u32,
    rng: ChaCha8Rng,
}

impl NonceSource {
    fn new(job: &MiningJob, from: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
        if job.mode == NonceMode::Random {
            // One 32-bit word per draw.
            rng.set_word_pos(from as u128);
        }
        Self {
            mode: job.mode,
            next: job.nonce_start.wrapping_add(from as u32),
            rng,
        }
    }

    fn draw(&mut self) -> u32 {
        match self.mode {
            NonceMode::Sequential => {
                let n = self.next;
                self.next = n.wrapping_add(1);
                n
            }
            NonceMode::Random => self.rng.next_u32(),
        }
    }
}

fn try_nonce(job: &MiningJob, nonce: u32) -> Option<Hash256> {
    let hash = header_hash(&BlockHeader {
        parent_hash: job.parent_hash,
        merkle_root: job.merkle_root,
        nonce,
    });
    job.target.is_met_by(&hash).then_some(hash)
}

/// First nonce in scan order whose header hash is below the target.
pub fn mine(job: &MiningJob) -> MineOutcome {
    let mut source = NonceSource::new(job, 0);
    for attempt in 1..=job.max_attempts {
        let nonce = source.draw();
        if let Some(hash) = try_nonce(job, nonce) {
            return MineOutcome::Found {
                nonce,
                hash,
                attempts: attempt,
            };
        }
    }
    MineOutcome::Exhausted {
        attempts: job.max_attempts,
    }
}

const BLOCK: u64 = 4096;

/// Same result as [`mine`], scanning with `workers` threads over interleaved
/// blocks of the attempt sequence.
pub fn mine_parallel(job: &MiningJob, workers: usize) -> MineOutcome {
    let workers = workers.max(1) as u64;
    if workers == 1 {
        return mine(job);
    }
    let best = AtomicU64::new(u64::MAX);
    std::thread::scope(|scope| {
        for w in 0..workers {
            let best = &best;
            scope.spawn(move || {
                let mut start = w * BLOCK;
                while start < job.max_attempts && start < best.load(Ordering::Relaxed) {
                    let end = (start + BLOCK).min(job.max_attempts);
                    let mut source = NonceSource::new(job, start);
                    for index in start..end {
                        let nonce = source.draw();
                        if try_nonce(job, nonce).is_some() {
                            best.fetch_min(index, Ordering::Relaxed);
                            return;
                        }
                    }
                    start += workers * BLOCK;
                }
            });
        }
    });
    match best.into_inner() {
        u64::MAX => MineOutcome::Exhausted {
            attempts: job.max_attempts,
        },
        index => {
            let nonce = NonceSource::new(job, index).draw();
            MineOutcome::Found {
                nonce,
                hash: try_nonce(job, nonce).expect("recorded hit"),
                attempts: index + 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pow::leading_zero_target;

    fn job(target: DifficultyTarget, mode: NonceMode, seed: u64) -> MiningJob {
        MiningJob {
            parent_hash: Hash256::ZERO,
            merkle_root: Hash256::ZERO,
            target,
            nonce_start: 0,
            mode,
            seed,
            max_attempts: 1 << 20,
        }
    }

    #[test]
    fn accept_all_succeeds_first_try() {
        let mut j = job(DifficultyTarget::accept_all(), NonceMode::Sequential, 0);
        j.nonce_start = 77;
        let out = mine(&j);
        assert_eq!(out.attempts(), 1);
        assert_eq!(out.found().unwrap().0, 77);
    }

    #[test]
    fn golden_sequential_two_zeros() {
        // Python: first n with sha256("0"*128 + "%08x" % n) starting "00".
        let out = mine(&job(leading_zero_target(2).unwrap(), NonceMode::Sequential, 0));
        assert_eq!(
            out,
            MineOutcome::Found {
                nonce: 86,
                hash: "00ef028063057a11863cac06c3c5fa01661576bbb0cc95bfe67681a9cdad4a53"
                    .parse()
                    .unwrap(),
                attempts: 87,
            }
        );
    }

    #[test]
    fn exhaustion_is_a_result() {
        let mut j = job(leading_zero_target(8).unwrap(), NonceMode::Random, 1);
        j.max_attempts = 10;
        assert_eq!(mine(&j), MineOutcome::Exhausted { attempts: 10 });
    }

    #[test]
    fn sequential_wraps_around() {
        let mut j = job(leading_zero_target(1).unwrap(), NonceMode::Sequential, 0);
        j.nonce_start = u32::MAX - 2;
        let source: Vec<u32> = {
            let mut s = NonceSource::new(&j, 0);
            (0..4).map(|_| s.draw()).collect()
        };
        assert_eq!(source, vec![u32::MAX - 2, u32::MAX - 1, u32::MAX, 0]);
    }

    #[test]
    fn random_source_supports_seek() {
        let j = job(leading_zero_target(1).unwrap(), NonceMode::Random, 99);
        let mut s = NonceSource::new(&j, 0);
        let all: Vec<u32> = (0..20).map(|_| s.draw()).collect();
        let mut t = NonceSource::new(&j, 13);
        assert_eq!(t.draw(), all[13]);
    }

    #[test]
    fn parallel_matches_single_worker() {
        for mode in [NonceMode::Sequential, NonceMode::Random] {
            for seed in 0..4 {
                let j = job(leading_zero_target(3).unwrap(), mode, seed);
                assert_eq!(mine_parallel(&j, 4), mine(&j), "{mode:?} seed {seed}");
            }
        }
        let mut j = job(leading_zero_target(8).unwrap(), NonceMode::Random, 1);
        j.max_attempts = 20_000;
        assert_eq!(mine_parallel(&j, 3), MineOutcome::Exhausted { attempts: 20_000 });
    }
}
