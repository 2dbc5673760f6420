use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Logistic,
    DelayedLogistic,
}

impl FromStr for MapKind {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "logistic" => Ok(Self::Logistic),
            "delayed_logistic" | "delayed-logistic" | "delayed" | "henon" => Ok(Self::DelayedLogistic),
            other => Err(DynamicsError::UnknownMap(other.to_string())),
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Logistic => "logistic",
            Self::DelayedLogistic => "delayed_logistic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MapSpec<F: Scalar = f64> {
    pub kind: MapKind,
    pub r: F,
}

impl<F: Scalar> MapSpec<F> {
    pub fn new(kind: MapKind, r: F) -> Result<Self, DynamicsError> {
        if !(r > F::zero() && r <= F::lit(4.0)) {
            return Err(DynamicsError::Domain {
                name: "r",
                value: r.to_f64().unwrap_or(f64::NAN),
                domain: "(0, 4]",
            });
        }
        Ok(Self { kind, r })
    }

    pub fn logistic(r: F) -> Result<Self, DynamicsError> {
        Self::new(MapKind::Logistic, r)
    }

    pub fn delayed_logistic(r: F) -> Result<Self, DynamicsError> {
        Self::new(MapKind::DelayedLogistic, r)
    }

    /// One application of the map.
    pub fn step(&self, state: MapState<F>) -> MapState<F> {
        match state {
            // r·(x(1−x)) never exceeds r/4 after rounding, so [0,1] stays invariant.
            MapState::One(x) => MapState::One(self.r * (x * (F::one() - x))),
            MapState::Two { previous, current } => MapState::Two {
                previous: current,
                current: self.r * current * (F::one() - previous),
            },
        }
    }

    pub(crate) fn check_initial(&self, state: MapState<F>) -> Result<(), DynamicsError> {
        let in_unit = |x: F| x >= F::zero() && x <= F::one();
        match (self.kind, state) {
            (MapKind::Logistic, MapState::One(x)) if in_unit(x) => Ok(()),
            (MapKind::DelayedLogistic, MapState::Two { previous, current })
                if in_unit(previous) && in_unit(current) =>
            {
                Ok(())
            }
            (MapKind::Logistic, MapState::One(x)) => Err(DynamicsError::Domain {
                name: "x0",
                value: x.to_f64().unwrap_or(f64::NAN),
                domain: "[0, 1]",
            }),
            (MapKind::DelayedLogistic, MapState::Two { .. }) => Err(DynamicsError::Domain {
                name: "(x0, x1)",
                value: f64::NAN,
                domain: "[0, 1]²",
            }),
            (MapKind::Logistic, _) => Err(DynamicsError::StateShape("logistic")),
            (MapKind::DelayedLogistic, _) => Err(DynamicsError::StateShape("delayed_logistic")),
        }
    }
}

/// Map state: `x` for the logistic map, `(x_{n−1}, x_n)` for the delayed map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum MapState<F: Scalar = f64> {
    One(F),
    Two { previous: F, current: F },
}

impl<F: Scalar> MapState<F> {
    /// The most recent coordinate `x_n`.
    pub fn current(&self) -> F {
        match *self {
            Self::One(x) => x,
            Self::Two { current, .. } => current,
        }
    }

    pub(crate) fn is_finite(&self) -> bool {
        match *self {
            Self::One(x) => x.is_finite(),
            Self::Two { previous, current } => previous.is_finite() && current.is_finite(),
        }
    }

    /// Same value for both coordinates of the delayed map.
    pub fn for_kind(kind: MapKind, x: F) -> Self {
        match kind {
            MapKind::Logistic => Self::One(x),
            MapKind::DelayedLogistic => Self::Two {
                previous: x,
                current: x,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Orbit<F: Scalar = f64> {
    pub spec: MapSpec<F>,
    pub initial: MapState<F>,
    pub burn_in: usize,
    /// `x_n` after the burn-in, `keep` values.
    pub samples: Vec<F>,
    /// Full state after the last retained sample.
    pub last: MapState<F>,
}

/// Runs `burn_in` discarded steps then records `keep` values of `x_n`.
pub fn iterate<F: Scalar>(
    spec: &MapSpec<F>,
    initial: MapState<F>,
    burn_in: usize,
    keep: usize,
) -> Result<Orbit<F>, DynamicsError> {
    spec.check_initial(initial)?;
    if keep < 1 {
        return Err(DynamicsError::Domain {
            name: "keep",
            value: 0.0,
            domain: "[1, ∞)",
        });
    }
    let mut state = initial;
    for step in 0..burn_in {
        state = spec.step(state);
        if !state.is_finite() {
            return Err(DynamicsError::Diverged(step + 1));
        }
    }
    let mut samples = Vec::with_capacity(keep);
    for step in 0..keep {
        state = spec.step(state);
        if !state.is_finite() {
            return Err(DynamicsError::Diverged(burn_in + step + 1));
        }
        samples.push(state.current());
    }
    Ok(Orbit {
        spec: *spec,
        initial,
        burn_in,
        samples,
        last: state,
    })
}

/// Sorted representatives of `values` that differ by more than `tol`.
pub fn distinct_values<F: Scalar>(values: &[F], tol: F) -> Vec<F> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<F> = Vec::new();
    for v in sorted {
        if out.last().is_none_or(|&last| v - last > tol) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_fixed() {
        for r in [0.5, 2.0, 3.7, 4.0] {
            let o = iterate(&MapSpec::logistic(r).unwrap(), MapState::One(0.0), 10, 50).unwrap();
            assert!(o.samples.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn attracting_fixed_points() {
        let spec = MapSpec::logistic(2.5).unwrap();
        let o = iterate(&spec, MapState::One(0.2), 1000, 100).unwrap();
        assert!(o.samples.iter().all(|&x| (x - 0.6f64).abs() < 1e-9));
        let x = *o.samples.last().unwrap();
        assert!((spec.r * x * (1.0 - x) - x).abs() <= 1e-9);

        let delayed = MapSpec::delayed_logistic(1.5).unwrap();
        let state = MapState::Two {
            previous: 0.2,
            current: 0.2,
        };
        let o = iterate(&delayed, state, 5000, 100).unwrap();
        assert!(o.samples.iter().all(|&x| (x - 1.0f64 / 3.0).abs() < 1e-6));
    }

    #[test]
    fn domain_errors() {
        assert!(MapSpec::logistic(0.0).is_err());
        assert!(MapSpec::logistic(4.5).is_err());
        let spec = MapSpec::logistic(3.0).unwrap();
        assert!(iterate(&spec, MapState::One(1.5), 0, 1).is_err());
        assert!(iterate(&spec, MapState::One(0.5), 0, 0).is_err());
        assert_eq!(
            iterate(
                &spec,
                MapState::Two {
                    previous: 0.1,
                    current: 0.1
                },
                0,
                1
            ),
            Err(DynamicsError::StateShape("logistic"))
        );
    }

    #[test]
    fn delayed_map_can_diverge() {
        let spec = MapSpec::delayed_logistic(4.0).unwrap();
        let r = iterate(
            &spec,
            MapState::Two {
                previous: 0.1,
                current: 0.9,
            },
            10_000,
            10,
        );
        assert!(matches!(r, Err(DynamicsError::Diverged(_))));
    }

    #[test]
    fn distinct_values_groups() {
        assert_eq!(distinct_values(&[0.5, 0.1, 0.5 + 1e-12, 0.1], 1e-9), vec![0.1, 0.5]);
    }

    #[test]
    fn parses_kinds() {
        assert_eq!("logistic".parse::<MapKind>().unwrap(), MapKind::Logistic);
        assert_eq!("delayed_logistic".parse::<MapKind>().unwrap(), MapKind::DelayedLogistic);
        assert!("tent".parse::<MapKind>().is_err());
    }

    #[test]
    fn f32_orbit() {
        let o = iterate(&MapSpec::<f32>::logistic(2.5).unwrap(), MapState::One(0.2), 1000, 5).unwrap();
        assert!(o.samples.iter().all(|&x| (x - 0.6).abs() < 1e-5));
    }
}
