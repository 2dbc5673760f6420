use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{classify_regime, iterate, lyapunov, DynamicsError, MapKind, MapSpec, MapState, Regime};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ScanSettings<F: Scalar = f64> {
    pub kind: MapKind,
    pub r_min: F,
    pub r_max: F,
    pub r_steps: usize,
    pub burn_in: usize,
    /// Attractor samples kept per row.
    pub keep: usize,
    /// Starting value (both coordinates for the delayed map).
    pub initial: F,
    pub lyapunov_iterations: usize,
    /// Half-width of the marginal band in [`classify_regime`].
    pub regime_tolerance: F,
}

impl<F: Scalar> ScanSettings<F> {
    pub fn new(kind: MapKind, r_min: F, r_max: F, r_steps: usize) -> Self {
        Self {
            kind,
            r_min,
            r_max,
            r_steps,
            burn_in: super::DEFAULT_BURN_IN,
            keep: 64,
            initial: F::lit(0.3),
            lyapunov_iterations: super::DEFAULT_ITERATIONS,
            regime_tolerance: F::lit(0.01),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ScanRow<F: Scalar = f64> {
    pub r: F,
    pub samples: Vec<F>,
    pub lyapunov: F,
    pub regime: Regime,
}

/// Rows at evenly spaced `r` from `r_min` to `r_max` inclusive, ascending.
pub fn bifurcation_scan<F: Scalar>(settings: &ScanSettings<F>) -> Result<Vec<ScanRow<F>>, DynamicsError> {
    if settings.r_steps < 2 {
        return Err(DynamicsError::Domain {
            name: "r_steps",
            value: settings.r_steps as f64,
            domain: "[2, ∞)",
        });
    }
    if settings.r_min.partial_cmp(&settings.r_max) != Some(std::cmp::Ordering::Less) {
        return Err(DynamicsError::Domain {
            name: "r_min",
            value: settings.r_min.to_f64().unwrap_or(f64::NAN),
            domain: "below r_max",
        });
    }
    let span = settings.r_max - settings.r_min;
    let last = F::lit((settings.r_steps - 1) as f64);
    (0..settings.r_steps)
        .map(|i| {
            let r = if i + 1 == settings.r_steps {
                settings.r_max
            } else {
                settings.r_min + span * F::lit(i as f64) / last
            };
            let spec = MapSpec::new(settings.kind, r)?;
            let start = MapState::for_kind(settings.kind, settings.initial);
            let orbit = iterate(&spec, start, settings.burn_in, settings.keep)?;
            let est = lyapunov(&spec, start, settings.burn_in, settings.lyapunov_iterations)?;
            Ok(ScanRow {
                r,
                samples: orbit.samples,
                lyapunov: est.exponent,
                regime: classify_regime(est.exponent, settings.regime_tolerance)?,
            })
        })
        .collect()
}

/// CSV with header `r,lyapunov,regime,s0,s1,…`.
pub fn write_scan_csv<F: Scalar, W: Write>(rows: &[ScanRow<F>], out: W) -> Result<(), DynamicsError> {
    let csv_err = |e: csv::Error| DynamicsError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let keep = rows.first().map_or(0, |r| r.samples.len());
    let mut header = vec!["r".to_string(), "lyapunov".into(), "regime".into()];
    header.extend((0..keep).map(|i| format!("s{i}")));
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut record = vec![row.r.to_string(), row.lyapunov.to_string(), row.regime.to_string()];
        record.extend(row.samples.iter().map(|s| s.to_string()));
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(|e| DynamicsError::Csv(e.to_string()))
}
