use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{merkle_root, sha256, Hash256, PowError};

/// Parent hash, Merkle root and nonce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockHeader {
    pub parent_hash: Hash256,
    pub merkle_root: Hash256,
    pub nonce: u32,
}

impl BlockHeader {
    /// The 136-byte ASCII preimage: 64 + 64 hex characters, then the nonce as
    /// 8 zero-padded lowercase hex characters.
    pub fn preimage(&self) -> String {
        format!("{}{}{:08x}", self.parent_hash, self.merkle_root, self.nonce)
    }

    pub fn hash(&self) -> Hash256 {
        header_hash(self)
    }
}

/// Single SHA-256 over [`BlockHeader::preimage`].
pub fn header_hash(header: &BlockHeader) -> Hash256 {
    sha256(header.preimage().as_bytes())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub header: BlockHeader,
    /// Opaque payloads; only their Merkle commitment matters.
    pub transactions: Vec<Vec<u8>>,
    pub height: u64,
}

impl Block {
    /// Assembles a block, committing to `transactions` in the header.
    pub fn new(parent_hash: Hash256, transactions: Vec<Vec<u8>>, nonce: u32, height: u64) -> Result<Self, PowError> {
        let merkle_root = merkle_root(&transactions)?;
        Ok(Self {
            header: BlockHeader {
                parent_hash,
                merkle_root,
                nonce,
            },
            transactions,
            height,
        })
    }

    /// Fixed anchor: zero parent, single payload `genesis`, nonce 0, height 0.
    pub fn genesis() -> Self {
        Self::new(Hash256::ZERO, vec![b"genesis".to_vec()], 0, 0).expect("non-empty")
    }

    pub fn hash(&self) -> Hash256 {
        header_hash(&self.header)
    }

    pub fn with_nonce(&self, nonce: u32) -> Self {
        let mut b = self.clone();
        b.header.nonce = nonce;
        b
    }
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    parent_hash: Hash256,
    merkle_root: Hash256,
    nonce: u32,
    transactions: Vec<String>,
    height: u64,
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BlockRepr {
            parent_hash: self.header.parent_hash,
            merkle_root: self.header.merkle_root,
            nonce: self.header.nonce,
            transactions: self.transactions.iter().map(|t| BASE64.encode(t)).collect(),
            height: self.height,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = BlockRepr::deserialize(deserializer)?;
        let transactions = r
            .transactions
            .iter()
            .map(|t| BASE64.decode(t))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Self {
            header: BlockHeader {
                parent_hash: r.parent_hash,
                merkle_root: r.merkle_root,
                nonce: r.nonce,
            },
            transactions,
            height: r.height,
        })
    }
}
