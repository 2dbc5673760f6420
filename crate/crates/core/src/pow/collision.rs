use serde::{Deserialize, Serialize};

use super::PowError;

/// Minutes in a Julian year.
pub const MINUTES_PER_YEAR: f64 = 60.0 * 24.0 * 365.25;

/// Birthday-bound probability of any collision among `k` uniform 256-bit
/// hashes: `k² / 2²⁵⁷`.
pub fn collision_probability(k_blocks: u64) -> f64 {
    let k = k_blocks as f64;
    // k² ≤ 2¹²⁸ and 2⁻²⁵⁷ are both well inside f64 range.
    k * k * 2f64.powi(-257)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionHorizon {
    /// `2¹²⁸`, the block count at which a collision becomes expected.
    pub expected_blocks: f64,
    pub years: f64,
}

pub fn collision_horizon(block_interval_minutes: f64) -> Result<CollisionHorizon, PowError> {
    if !(block_interval_minutes > 0.0 && block_interval_minutes.is_finite()) {
        return Err(PowError::Domain {
            name: "block_interval_minutes",
            value: block_interval_minutes,
            domain: "(0, ∞)",
        });
    }
    let expected_blocks = 2f64.powi(128);
    Ok(CollisionHorizon {
        expected_blocks,
        years: expected_blocks * block_interval_minutes / MINUTES_PER_YEAR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_examples() {
        assert_eq!(collision_probability(0), 0.0);
        assert!((collision_probability(431_616) / 8.0e-67 - 1.0).abs() < 0.01);
        // 4 / 2²⁵⁷
        assert!((collision_probability(2) / 1.727_233_711_018_889e-77 - 1.0).abs() < 1e-12);
        assert!(collision_probability(u64::MAX).is_finite());
    }

    #[test]
    fn horizon_examples() {
        let h = collision_horizon(10.0).unwrap();
        assert_eq!(h.expected_blocks, 340_282_366_920_938_463_463_374_607_431_768_211_456.0);
        assert!((h.expected_blocks / 3.4e38 - 1.0).abs() < 0.02);
        assert!((h.years / 6.5e33 - 1.0).abs() < 0.02);
        let double = collision_horizon(20.0).unwrap();
        assert_eq!(double.years, 2.0 * h.years);
        assert!(collision_horizon(0.0).is_err());
        assert!(collision_horizon(-1.0).is_err());
    }
}
