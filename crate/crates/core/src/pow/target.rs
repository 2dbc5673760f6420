use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Hash256, PowError};

/// `65535 × 2²⁰⁸`, the difficulty-1 target.
pub const MAX_TARGET_HEX: &str = "00000000ffff0000000000000000000000000000000000000000000000000000";

/// Threshold a header hash must be numerically below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTarget {
    target: Hash256,
    /// Difficulty the target was derived from, when known.
    difficulty: Option<f64>,
}

impl DifficultyTarget {
    /// Any positive 256-bit target, including ones above the difficulty-1
    /// maximum (toy targets and the accept-everything `2²⁵⁶ − 1`).
    pub fn new(target: Hash256) -> Result<Self, PowError> {
        if target == Hash256::ZERO {
            return Err(PowError::Domain {
                name: "target",
                value: 0.0,
                domain: "(0, 2^256)",
            });
        }
        Ok(Self {
            target,
            difficulty: None,
        })
    }

    pub fn max() -> Self {
        Self {
            target: MAX_TARGET_HEX.parse().expect("constant"),
            difficulty: Some(1.0),
        }
    }

    /// Accepts every hash except `2²⁵⁶ − 1`.
    pub fn accept_all() -> Self {
        Self {
            target: Hash256::MAX,
            difficulty: None,
        }
    }

    pub fn target(&self) -> Hash256 {
        self.target
    }

    pub fn difficulty(&self) -> Option<f64> {
        self.difficulty
    }

    pub fn to_biguint(&self) -> BigUint {
        self.target.to_biguint()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_biguint().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_met_by(&self, hash: &Hash256) -> bool {
        *hash < self.target
    }

    /// Exact per-attempt success probability `target / 2²⁵⁶`.
    pub fn success_probability_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.to_biguint()), BigInt::one() << 256)
    }

    /// `target / 2²⁵⁶` as a float.
    pub fn success_probability(&self) -> f64 {
        self.to_f64() * 2f64.powi(-256)
    }

    /// Leading zero hex digits of the target's own 64-hex rendering.
    pub fn leading_hex_zeros(&self) -> u32 {
        self.target.leading_hex_zeros()
    }

    /// Smallest `k` such that every hash with `k` leading hex zeros meets the
    /// target, i.e. `16^(64−k) ≤ target`.
    pub fn sufficient_hex_zeros(&self) -> u32 {
        let t = self.to_biguint();
        (0..=64u32)
            .find(|&k| BigUint::one() << (4 * (64 - k)) <= t)
            .expect("target ≥ 1")
    }
}

/// `floor(max_target / difficulty)`, evaluated exactly on the binary value of `difficulty`.
pub fn difficulty_to_target(difficulty: f64) -> Result<DifficultyTarget, PowError> {
    if !(difficulty.is_finite() && difficulty >= 1.0) {
        return Err(PowError::Domain {
            name: "difficulty",
            value: difficulty,
            domain: "[1, ∞)",
        });
    }
    let d = BigRational::from_float(difficulty).expect("finite");
    let max = BigInt::from(DifficultyTarget::max().to_biguint());
    let quotient = (BigRational::from_integer(max) / d).floor().to_integer();
    let value = quotient.to_biguint().expect("non-negative");
    // difficulty ≥ 1 keeps value ≤ max_target; it is positive for any finite f64.
    let target = Hash256::from_biguint(&value).expect("fits 256 bits");
    if value.is_zero() {
        return Err(PowError::Domain {
            name: "difficulty",
            value: difficulty,
            domain: "difficulties with a positive target",
        });
    }
    Ok(DifficultyTarget {
        target,
        difficulty: Some(difficulty),
    })
}

fn check_zeros(k: u32) -> Result<(), PowError> {
    if k > 64 {
        return Err(PowError::Domain {
            name: "k",
            value: k as f64,
            domain: "[0, 64]",
        });
    }
    Ok(())
}

/// `16⁻ᵏ`: chance that a uniform 256-bit hash has at least `k` leading hex zeros.
pub fn leading_zero_probability(k: u32) -> Result<f64, PowError> {
    check_zeros(k)?;
    Ok(2f64.powi(-4 * k as i32))
}

/// `16⁻ᵏ` as an exact rational.
pub fn leading_zero_probability_exact(k: u32) -> Result<BigRational, PowError> {
    check_zeros(k)?;
    Ok(BigRational::new(BigInt::one(), BigInt::one() << (4 * k as usize)))
}

/// Companion target `16^(64−k)`: met exactly by hashes with `k` leading hex
/// zeros. For `k = 0` it saturates at `2²⁵⁶ − 1`.
pub fn leading_zero_target(k: u32) -> Result<DifficultyTarget, PowError> {
    check_zeros(k)?;
    if k == 0 {
        return Ok(DifficultyTarget::accept_all());
    }
    let value = BigUint::one() << (4 * (64 - k) as usize);
    DifficultyTarget::new(Hash256::from_biguint(&value).expect("k ≥ 1 fits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PUBLISHED_DIFFICULTY: f64 = 595_921_917_085.42;

    #[test]
    fn difficulty_one_is_max_target() {
        let t = difficulty_to_target(1.0).unwrap();
        assert_eq!(t.target().to_hex(), MAX_TARGET_HEX);
        assert_eq!(t.to_biguint(), BigUint::from(65535u32) << 208);
    }

    #[test]
    fn published_difficulty_target() {
        let t = difficulty_to_target(PUBLISHED_DIFFICULTY).unwrap();
        assert!((t.to_f64() / 4.524_004_658_678_446_3e55 - 1.0).abs() < 1e-9);
        // exact quotient (Python fractions)
        assert_eq!(
            t.to_biguint().to_string(),
            "45240046586752577394511379272335868016630812999232641228"
        );
        assert_eq!(t.leading_hex_zeros(), 17);
        assert_eq!(t.sufficient_hex_zeros(), 18);
    }

    #[test]
    fn difficulty_two_halves() {
        let one = difficulty_to_target(1.0).unwrap().to_biguint();
        let two = difficulty_to_target(2.0).unwrap().to_biguint();
        assert_eq!(two, one / 2u32);
    }

    #[test]
    fn difficulty_domain() {
        assert!(difficulty_to_target(0.5).is_err());
        assert!(difficulty_to_target(f64::NAN).is_err());
        assert!(difficulty_to_target(f64::INFINITY).is_err());
    }

    #[test]
    fn leading_zero_examples() {
        assert_eq!(leading_zero_probability(0).unwrap(), 1.0);
        assert_eq!(leading_zero_probability(1).unwrap(), 1.0 / 16.0);
        assert_eq!(leading_zero_probability(18).unwrap(), 2f64.powi(-72));
        assert!((leading_zero_probability(18).unwrap() / 2.1e-22 - 1.0).abs() < 0.01);
        assert!(leading_zero_probability(65).is_err());
        assert_eq!(
            leading_zero_probability_exact(18).unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(2u8).pow(72u32))
        );
        assert_eq!(leading_zero_target(0).unwrap(), DifficultyTarget::accept_all());
        assert_eq!(leading_zero_target(64).unwrap().to_biguint(), BigUint::one());
        assert_eq!(
            leading_zero_target(1).unwrap().target().to_hex(),
            format!("1{}", "0".repeat(63))
        );
        let t = leading_zero_target(18).unwrap();
        assert_eq!(
            t.success_probability_exact(),
            leading_zero_probability_exact(18).unwrap()
        );
    }

    #[test]
    fn zero_target_rejected() {
        assert!(DifficultyTarget::new(Hash256::ZERO).is_err());
    }
}
