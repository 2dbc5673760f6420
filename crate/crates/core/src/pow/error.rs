use thiserror::Error;

use super::{Hash256, RejectReason};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PowError {
    #[error("invalid hash {0:?}: expected 64 lowercase hex characters")]
    InvalidHash(String),
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("a block must carry at least one transaction")]
    EmptyTransactions,
    #[error("orphan block: parent {0} is not in the chain")]
    Orphan(Hash256),
    #[error("block {hash} rejected: {reason}")]
    Rejected { hash: Hash256, reason: RejectReason },
    #[error("malformed chain data: {0}")]
    Malformed(String),
}
