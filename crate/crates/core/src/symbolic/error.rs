use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol index {index} at position {position} is outside an alphabet of {size}")]
    SymbolOutOfRange { position: usize, index: u8, size: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("reducible transition structure: states {reachable:?} do not communicate with {unreachable:?}")]
    Reducible {
        reachable: Vec<usize>,
        unreachable: Vec<usize>,
    },
    #[error("invalid inference config: {0}")]
    InvalidConfig(String),
    #[error("json: {0}")]
    Json(String),
}
