//! Desk-scale proof-of-work chain.
//!
//! Headers are three ASCII-hex strings (parent hash, Merkle root, nonce)
//! concatenated and hashed once with SHA-256. This is not Bitcoin's binary
//! 80-byte double-SHA-256 header.

mod chain;
mod collision;
mod error;
mod hash;
mod header;
mod merkle;
mod mining;
mod target;

pub use chain::{check_block, validate_block, Chain, RejectReason};
pub use collision::{collision_horizon, collision_probability, CollisionHorizon, MINUTES_PER_YEAR};
pub use error::PowError;
pub use hash::{sha256, Hash256};
pub use header::{header_hash, Block, BlockHeader};
pub use merkle::merkle_root;
pub use mining::{mine, mine_parallel, MineOutcome, MiningJob, NonceMode};
pub use target::{
    difficulty_to_target, leading_zero_probability, leading_zero_probability_exact, leading_zero_target,
    DifficultyTarget, MAX_TARGET_HEX,
};
