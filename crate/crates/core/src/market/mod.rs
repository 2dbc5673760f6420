//! Logistic and delayed-logistic maps: orbits, Lyapunov exponents, bifurcation scans.
//!
//! * logistic: `x' = r·x·(1 − x)`
//! * delayed logistic: `x_{n+1} = r·x_n·(1 − x_{n−1})`

mod error;
mod lyapunov;
mod maps;
mod scan;

pub use error::DynamicsError;
pub use lyapunov::{
    classify_regime, lyapunov, LyapunovEstimate, Regime, DEFAULT_BURN_IN, DEFAULT_ITERATIONS, LN_ZERO_FLOOR,
    MIN_ITERATIONS, RENORMALIZE_EVERY,
};
pub use maps::{distinct_values, iterate, MapKind, MapSpec, MapState, Orbit};
pub use scan::{bifurcation_scan, write_scan_csv, ScanRow, ScanSettings};
