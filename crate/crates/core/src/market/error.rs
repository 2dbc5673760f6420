use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("initial state does not match a {0} map")]
    StateShape(&'static str),
    #[error("orbit left the finite range at step {0}")]
    Diverged(usize),
    #[error("{got} iterations requested, at least {min} required")]
    TooFewIterations { got: usize, min: usize },
    #[error("unknown map {0:?} (expected logistic or delayed_logistic)")]
    UnknownMap(String),
    #[error("csv: {0}")]
    Csv(String),
}
