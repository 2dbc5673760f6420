use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::PowError;

/// 256-bit value read big-endian; rendered as 64 lowercase hex characters.
///
/// Byte-wise ordering equals numeric ordering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hash256([u8; 32]);

impl Hash256 {
    pub const ZERO: Self = Self([0; 32]);
    pub const MAX: Self = Self([0xff; 32]);

    pub const fn from_bytes(bytes: [u8; 32]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_bytes_be(&self.0)
    }

    /// `None` when `value` needs more than 256 bits.
    pub fn from_biguint(value: &BigUint) -> Option<Self> {
        let bytes = value.to_bytes_be();
        if bytes.len() > 32 {
            return None;
        }
        let mut out = [0u8; 32];
        out[32 - bytes.len()..].copy_from_slice(&bytes);
        Some(Self(out))
    }

    /// Number of leading zero hex digits (0..=64).
    pub fn leading_hex_zeros(&self) -> u32 {
        let mut zeros = 0;
        for b in self.0 {
            if b == 0 {
                zeros += 2;
            } else {
                if b < 0x10 {
                    zeros += 1;
                }
                break;
            }
        }
        zeros
    }

    /// Value as a float (rounded), for reporting.
    pub fn to_f64(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, &b| acc * 256.0 + b as f64)
    }
}

pub fn sha256(data: &[u8]) -> Hash256 {
    Hash256(Sha256::digest(data).into())
}

impl FromStr for Hash256 {
    type Err = PowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ok = s.len() == 64 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'));
        if !ok {
            return Err(PowError::InvalidHash(s.to_string()));
        }
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out).map_err(|_| PowError::InvalidHash(s.to_string()))?;
        Ok(Self(out))
    }
}

impl fmt::Display for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hash256({})", self.to_hex())
    }
}

impl Serialize for Hash256 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Hash256 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_and_case() {
        let h = sha256(b"abc");
        // FIPS 180-2 test vector.
        assert_eq!(
            h.to_hex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(h.to_hex().parse::<Hash256>().unwrap(), h);
        assert!(h.to_hex().to_uppercase().parse::<Hash256>().is_err());
        assert!("00".parse::<Hash256>().is_err());
    }

    #[test]
    fn leading_zeros() {
        assert_eq!(Hash256::ZERO.leading_hex_zeros(), 64);
        assert_eq!(Hash256::MAX.leading_hex_zeros(), 0);
        let mut b = [0u8; 32];
        b[2] = 0x0f;
        assert_eq!(Hash256::from_bytes(b).leading_hex_zeros(), 5);
    }

    #[test]
    fn ordering_is_numeric() {
        let small: Hash256 = format!("{}1", "0".repeat(63)).parse().unwrap();
        let big: Hash256 = format!("1{}", "0".repeat(63)).parse().unwrap();
        assert!(small < big);
        assert!(small.to_biguint() < big.to_biguint());
        assert_eq!(Hash256::from_biguint(&big.to_biguint()), Some(big));
        assert_eq!(Hash256::from_biguint(&(BigUint::from(1u8) << 256)), None);
    }
}
