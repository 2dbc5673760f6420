use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{merkle_root, Block, DifficultyTarget, Hash256, PowError};

/// Why a block was refused by [`Chain::extend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    TargetNotMet,
    MerkleRootMismatch,
    HeightMismatch { expected: u64, got: u64 },
    Duplicate,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TargetNotMet => f.write_str("header hash is not below the target"),
            Self::MerkleRootMismatch => f.write_str("merkle root does not match the transactions"),
            Self::HeightMismatch { expected, got } => write!(f, "height {got}, expected {expected}"),
            Self::Duplicate => f.write_str("block already present"),
        }
    }
}

/// Proof-of-work and Merkle checks, reporting the first failure.
pub fn check_block(block: &Block, target: &DifficultyTarget) -> Result<(), RejectReason> {
    if !target.is_met_by(&block.hash()) {
        return Err(RejectReason::TargetNotMet);
    }
    match merkle_root(&block.transactions) {
        Ok(root) if root == block.header.merkle_root => Ok(()),
        _ => Err(RejectReason::MerkleRootMismatch),
    }
}

/// True iff the header hash is below `target` and the Merkle root matches.
pub fn validate_block(block: &Block, target: &DifficultyTarget) -> bool {
    check_block(block, target).is_ok()
}

/// Block tree rooted at [`Block::genesis`] with longest-chain fork choice.
/// Among equally high tips the first one seen stays active.
#[derive(Debug, Clone)]
pub struct Chain {
    blocks: HashMap<Hash256, Block>,
    order: Vec<Hash256>,
    tips: Vec<Hash256>,
    active_tip: Hash256,
}

impl Default for Chain {
    fn default() -> Self {
        Self::new()
    }
}

impl Chain {
    pub fn new() -> Self {
        let genesis = Block::genesis();
        let hash = genesis.hash();
        Self {
            blocks: HashMap::from([(hash, genesis)]),
            order: vec![hash],
            tips: vec![hash],
            active_tip: hash,
        }
    }

    pub fn genesis_hash(&self) -> Hash256 {
        self.order[0]
    }

    pub fn get(&self, hash: &Hash256) -> Option<&Block> {
        self.blocks.get(hash)
    }

    pub fn contains(&self, hash: &Hash256) -> bool {
        self.blocks.contains_key(hash)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Leaf hashes in the order they became leaves.
    pub fn tips(&self) -> &[Hash256] {
        &self.tips
    }

    pub fn active_tip(&self) -> Hash256 {
        self.active_tip
    }

    pub fn height(&self) -> u64 {
        self.blocks[&self.active_tip].height
    }

    /// Blocks in insertion order.
    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.order.iter().map(|h| &self.blocks[h])
    }

    /// Hashes from genesis to the active tip.
    pub fn active_branch(&self) -> Vec<Hash256> {
        let mut out = vec![self.active_tip];
        let mut cur = &self.blocks[&self.active_tip];
        while cur.height > 0 {
            out.push(cur.header.parent_hash);
            cur = &self.blocks[&cur.header.parent_hash];
        }
        out.reverse();
        out
    }

    /// Inserts a valid child of a known block and applies the fork choice.
    /// Returns the new block's hash.
    pub fn extend(&mut self, block: Block, target: &DifficultyTarget) -> Result<Hash256, PowError> {
        let hash = block.hash();
        let parent = self
            .blocks
            .get(&block.header.parent_hash)
            .ok_or(PowError::Orphan(block.header.parent_hash))?;
        let reject = |reason| PowError::Rejected { hash, reason };
        if self.blocks.contains_key(&hash) {
            return Err(reject(RejectReason::Duplicate));
        }
        if block.height != parent.height + 1 {
            return Err(reject(RejectReason::HeightMismatch {
                expected: parent.height + 1,
                got: block.height,
            }));
        }
        check_block(&block, target).map_err(reject)?;

        let parent_hash = block.header.parent_hash;
        self.tips.retain(|t| *t != parent_hash);
        self.tips.push(hash);
        if block.height > self.height() {
            self.active_tip = hash;
        }
        self.blocks.insert(hash, block);
        self.order.push(hash);
        Ok(hash)
    }

    /// Checks parent resolution, heights, leaf set and the fork choice.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut has_child: HashMap<Hash256, bool> = self.order.iter().map(|h| (*h, false)).collect();
        for (i, h) in self.order.iter().enumerate() {
            let b = &self.blocks[h];
            if i == 0 {
                if *b != Block::genesis() {
                    return Err("first block is not genesis".into());
                }
                continue;
            }
            let parent = self
                .blocks
                .get(&b.header.parent_hash)
                .ok_or_else(|| format!("{h} has unknown parent"))?;
            if parent.height + 1 != b.height {
                return Err(format!("{h} height {} after parent {}", b.height, parent.height));
            }
            has_child.insert(b.header.parent_hash, true);
        }
        let mut leaves: Vec<&Hash256> = self.order.iter().filter(|h| !has_child[*h]).collect();
        let mut tips: Vec<&Hash256> = self.tips.iter().collect();
        leaves.sort();
        tips.sort();
        if leaves != tips {
            return Err("tip set differs from leaf set".into());
        }
        let max = self.tips.iter().map(|t| self.blocks[t].height).max().unwrap_or(0);
        if self.height() != max {
            return Err(format!("active height {} below maximum {max}", self.height()));
        }
        let first = self
            .order
            .iter()
            .find(|h| self.blocks[*h].height == max)
            .expect("some block at max height");
        if *first != self.active_tip {
            return Err("active tip is not the first block seen at maximal height".into());
        }
        Ok(())
    }

    /// JSON array of blocks in insertion order, genesis first.
    pub fn to_json(&self) -> String {
        let blocks: Vec<&Block> = self.blocks().collect();
        serde_json::to_string_pretty(&blocks).expect("blocks serialize")
    }

    /// Replays a serialized chain, validating every non-genesis block against `target`.
    pub fn from_json(text: &str, target: &DifficultyTarget) -> Result<Self, PowError> {
        let blocks: Vec<Block> = serde_json::from_str(text).map_err(|e| PowError::Malformed(e.to_string()))?;
        let mut iter = blocks.into_iter();
        match iter.next() {
            Some(g) if g == Block::genesis() => {}
            _ => return Err(PowError::Malformed("chain must start with the genesis block".into())),
        }
        let mut chain = Self::new();
        for b in iter {
            chain.extend(b, target)?;
        }
        Ok(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pow::mining::{mine, MiningJob};
    use crate::pow::{leading_zero_target, NonceMode};

    fn toy() -> DifficultyTarget {
        leading_zero_target(1).unwrap()
    }

    fn child(parent: Hash256, height: u64, tag: &str) -> Block {
        let txs = vec![tag.as_bytes().to_vec()];
        let template = Block::new(parent, txs, 0, height).unwrap();
        let out = mine(&MiningJob {
            parent_hash: parent,
            merkle_root: template.header.merkle_root,
            target: toy(),
            nonce_start: 0,
            mode: NonceMode::Sequential,
            seed: 0,
            max_attempts: 1 << 16,
        });
        template.with_nonce(out.found().unwrap().0)
    }

    #[test]
    fn mined_block_validates() {
        let g = Chain::new().genesis_hash();
        let b = child(g, 1, "a");
        assert!(validate_block(&b, &toy()));
        // Fixture: with this payload the next nonce misses the 1-zero target.
        let bumped = b.with_nonce(b.header.nonce + 1);
        assert!(!toy().is_met_by(&bumped.hash()));
        assert!(!validate_block(&bumped, &toy()));
        let mut wrong_root = b.clone();
        wrong_root.transactions = vec![b"other".to_vec()];
        assert_eq!(check_block(&wrong_root, &toy()), Err(RejectReason::MerkleRootMismatch));
    }

    #[test]
    fn append_to_active_tip() {
        let mut chain = Chain::new();
        let b = child(chain.genesis_hash(), 1, "a");
        let h = chain.extend(b, &toy()).unwrap();
        assert_eq!(chain.active_tip(), h);
        assert_eq!(chain.height(), 1);
        chain.check_invariants().unwrap();
    }

    #[test]
    fn equal_height_fork_keeps_first_seen() {
        let mut chain = Chain::new();
        let g = chain.genesis_hash();
        let a = chain.extend(child(g, 1, "a"), &toy()).unwrap();
        let b = chain.extend(child(g, 1, "b"), &toy()).unwrap();
        assert_eq!(chain.active_tip(), a);
        assert_eq!(chain.tips(), &[a, b]);
        chain.check_invariants().unwrap();
    }

    #[test]
    fn longer_side_branch_takes_over() {
        let mut chain = Chain::new();
        let g = chain.genesis_hash();
        let main = chain.extend(child(g, 1, "main-1"), &toy()).unwrap();
        let side1 = chain.extend(child(g, 1, "side-1"), &toy()).unwrap();
        assert_eq!(chain.active_tip(), main);
        let side2 = chain.extend(child(side1, 2, "side-2"), &toy()).unwrap();
        assert_eq!(chain.active_tip(), side2);
        assert_eq!(chain.active_branch(), vec![g, side1, side2]);
        chain.check_invariants().unwrap();
    }

    #[test]
    fn rejections_name_the_check() {
        let mut chain = Chain::new();
        let g = chain.genesis_hash();
        let orphan = child(Hash256::MAX, 1, "x");
        assert_eq!(chain.extend(orphan, &toy()), Err(PowError::Orphan(Hash256::MAX)));
        let wrong_height = child(g, 5, "h");
        assert!(matches!(
            chain.extend(wrong_height, &toy()),
            Err(PowError::Rejected {
                reason: RejectReason::HeightMismatch { expected: 1, got: 5 },
                ..
            })
        ));
        let good = child(g, 1, "a");
        let hard = leading_zero_target(6).unwrap();
        assert!(matches!(
            chain.extend(good.clone(), &hard),
            Err(PowError::Rejected {
                reason: RejectReason::TargetNotMet,
                ..
            })
        ));
        chain.extend(good.clone(), &toy()).unwrap();
        assert!(matches!(
            chain.extend(good, &toy()),
            Err(PowError::Rejected {
                reason: RejectReason::Duplicate,
                ..
            })
        ));
        assert_eq!(chain.len(), 2);
    }

    #[test]
    fn json_replay() {
        let mut chain = Chain::new();
        let g = chain.genesis_hash();
        let a = chain.extend(child(g, 1, "a"), &toy()).unwrap();
        chain.extend(child(a, 2, "b"), &toy()).unwrap();
        chain.extend(child(g, 1, "c"), &toy()).unwrap();
        let json = chain.to_json();
        let back = Chain::from_json(&json, &toy()).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.active_tip(), chain.active_tip());
        assert!(Chain::from_json("[]", &toy()).is_err());
        assert!(Chain::from_json("{", &toy()).is_err());
    }
}
