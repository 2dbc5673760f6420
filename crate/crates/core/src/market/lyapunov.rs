use serde::{Deserialize, Serialize};

use super::{DynamicsError, MapKind, MapSpec, MapState};
use crate::Scalar;

pub const DEFAULT_BURN_IN: usize = 1_000;
pub const DEFAULT_ITERATIONS: usize = 100_000;
pub const MIN_ITERATIONS: usize = 10_000;
/// Tangent-vector renormalization period for the two-dimensional map.
pub const RENORMALIZE_EVERY: usize = 10;
/// Stand-in for `ln 0`, the natural log of the smallest positive double.
pub const LN_ZERO_FLOOR: f64 = -745.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LyapunovEstimate<F: Scalar = f64> {
    /// Nats per iteration.
    pub exponent: F,
    /// Set when a zero derivative (or collapsed tangent vector) was clamped to [`LN_ZERO_FLOOR`].
    pub clamped: bool,
}

/// Largest Lyapunov exponent over `n` post-burn-in iterates.
///
/// Logistic: mean of `ln|r(1 − 2x)|`. Delayed logistic: Jacobian products
/// applied to a tangent vector renormalized every [`RENORMALIZE_EVERY`] steps.
pub fn lyapunov<F: Scalar>(
    spec: &MapSpec<F>,
    initial: MapState<F>,
    burn_in: usize,
    n: usize,
) -> Result<LyapunovEstimate<F>, DynamicsError> {
    if n < MIN_ITERATIONS {
        return Err(DynamicsError::TooFewIterations {
            got: n,
            min: MIN_ITERATIONS,
        });
    }
    spec.check_initial(initial)?;
    let mut state = initial;
    for step in 0..burn_in {
        state = spec.step(state);
        if !state.is_finite() {
            return Err(DynamicsError::Diverged(step + 1));
        }
    }
    let floor = F::lit(LN_ZERO_FLOOR);
    let mut clamped = false;
    let mut ln_or_floor = |v: F| {
        if v > F::zero() {
            v.ln()
        } else {
            clamped = true;
            floor
        }
    };
    let r = spec.r;
    let mut sum = F::zero();
    match spec.kind {
        MapKind::Logistic => {
            for step in 0..n {
                let x = state.current();
                sum = sum + ln_or_floor((r * (F::one() - F::lit(2.0) * x)).abs());
                state = spec.step(state);
                if !state.is_finite() {
                    return Err(DynamicsError::Diverged(burn_in + step + 1));
                }
            }
        }
        MapKind::DelayedLogistic => {
            // Tangent (δx_{n−1}, δx_n), unit length.
            let half = F::lit(0.5).sqrt();
            let (mut dp, mut dc) = (half, half);
            for step in 0..n {
                let MapState::Two { previous, current } = state else {
                    return Err(DynamicsError::StateShape("delayed_logistic"));
                };
                // J = [[0, 1], [−r·x_n, r(1 − x_{n−1})]]
                let next_dc = -r * current * dp + r * (F::one() - previous) * dc;
                dp = dc;
                dc = next_dc;
                state = spec.step(state);
                if !state.is_finite() {
                    return Err(DynamicsError::Diverged(burn_in + step + 1));
                }
                if (step + 1) % RENORMALIZE_EVERY == 0 || step + 1 == n {
                    let norm = (dp * dp + dc * dc).sqrt();
                    sum = sum + ln_or_floor(norm);
                    if norm > F::zero() && norm.is_finite() {
                        dp = dp / norm;
                        dc = dc / norm;
                    } else {
                        dp = half;
                        dc = half;
                    }
                }
            }
        }
    }
    Ok(LyapunovEstimate {
        exponent: sum / F::lit(n as f64),
        clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FixedOrPeriodic,
    Marginal,
    Chaotic,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FixedOrPeriodic => "fixed_or_periodic",
            Self::Marginal => "marginal",
            Self::Chaotic => "chaotic",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_regime<F: Scalar>(exponent: F, tol: F) -> Result<Regime, DynamicsError> {
    if tol.is_nan() || tol <= F::zero() {
        return Err(DynamicsError::Domain {
            name: "tol",
            value: tol.to_f64().unwrap_or(f64::NAN),
            domain: "(0, ∞)",
        });
    }
    Ok(if exponent < -tol {
        Regime::FixedOrPeriodic
    } else if exponent > tol {
        Regime::Chaotic
    } else {
        Regime::Marginal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn logistic(r: f64, n: usize) -> LyapunovEstimate {
        lyapunov(&MapSpec::logistic(r).unwrap(), MapState::One(0.3), DEFAULT_BURN_IN, n).unwrap()
    }

    #[test]
    fn fully_chaotic_logistic() {
        let est = logistic(4.0, DEFAULT_ITERATIONS);
        assert!((est.exponent / LN_2 - 1.0).abs() < 0.02, "{}", est.exponent);
        let doubled = logistic(4.0, 2 * DEFAULT_ITERATIONS);
        assert!((doubled.exponent / est.exponent - 1.0).abs() < 0.01);
    }

    #[test]
    fn stable_fixed_point() {
        // |f'(0.6)| = 0.5 at r = 2.5
        let est = logistic(2.5, DEFAULT_ITERATIONS);
        assert!((est.exponent / -LN_2 - 1.0).abs() < 0.02, "{}", est.exponent);
        assert!(!est.clamped);
    }

    #[test]
    fn period_two_is_negative() {
        let est = logistic(3.2, DEFAULT_ITERATIONS);
        assert!(est.exponent < 0.0);
        let orbit = super::super::iterate(&MapSpec::logistic(3.2).unwrap(), MapState::One(0.3), 1000, 100).unwrap();
        assert_eq!(super::super::distinct_values(&orbit.samples, 1e-9).len(), 2);
    }

    #[test]
    fn zero_derivative_is_clamped() {
        // x = 0.5 is the superstable fixed point at r = 2.
        let est = lyapunov(&MapSpec::logistic(2.0).unwrap(), MapState::One(0.5), 0, MIN_ITERATIONS).unwrap();
        assert!(est.clamped);
        assert_eq!(est.exponent, LN_ZERO_FLOOR);
    }

    #[test]
    fn delayed_map_fixed_point_is_stable() {
        // Eigenvalues at x* = 1/3, r = 1.5: λ² − λ + ½ = 0, |λ| = √½.
        let est = lyapunov(
            &MapSpec::delayed_logistic(1.5).unwrap(),
            MapState::Two {
                previous: 0.2,
                current: 0.2,
            },
            DEFAULT_BURN_IN,
            DEFAULT_ITERATIONS,
        )
        .unwrap();
        assert!((est.exponent - 0.5f64.sqrt().ln()).abs() < 1e-3, "{}", est.exponent);
    }

    #[test]
    fn too_few_iterations() {
        let spec = MapSpec::logistic(4.0).unwrap();
        assert!(matches!(
            lyapunov(&spec, MapState::One(0.3), 0, 100),
            Err(DynamicsError::TooFewIterations { got: 100, .. })
        ));
    }

    #[test]
    fn classification() {
        assert_eq!(classify_regime(-0.69, 0.01).unwrap(), Regime::FixedOrPeriodic);
        assert_eq!(classify_regime(0.69, 0.01).unwrap(), Regime::Chaotic);
        assert_eq!(classify_regime(0.005, 0.01).unwrap(), Regime::Marginal);
        assert!(classify_regime(0.1, 0.0).is_err());
        let tol = 0.05;
        assert_eq!(
            classify_regime(logistic(2.5, DEFAULT_ITERATIONS).exponent, tol).unwrap(),
            Regime::FixedOrPeriodic
        );
        assert_eq!(
            classify_regime(logistic(4.0, DEFAULT_ITERATIONS).exponent, tol).unwrap(),
            Regime::Chaotic
        );
    }
}
