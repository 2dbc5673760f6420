use super::{sha256, Hash256, PowError};

/// Leaves are SHA-256 of each payload; a parent is SHA-256 of its two 32-byte
/// children concatenated; an odd level duplicates its last node.
pub fn merkle_root<T: AsRef<[u8]>>(payloads: &[T]) -> Result<Hash256, PowError> {
    if payloads.is_empty() {
        return Err(PowError::EmptyTransactions);
    }
    let mut level: Vec<Hash256> = payloads.iter().map(|p| sha256(p.as_ref())).collect();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| {
                let right = pair.get(1).unwrap_or(&pair[0]);
                let mut buf = [0u8; 64];
                buf[..32].copy_from_slice(pair[0].as_bytes());
                buf[32..].copy_from_slice(right.as_bytes());
                sha256(&buf)
            })
            .collect();
    }
    Ok(level[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    // Expected digests from Python's hashlib.
    #[test]
    fn fixtures() {
        assert_eq!(
            merkle_root(&[b"a"]).unwrap().to_hex(),
            "ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb"
        );
        assert_eq!(
            merkle_root(&[b"a", b"b"]).unwrap().to_hex(),
            "e5a01fee14e0ed5c48714f22180f25ad8365b53f9779f79dc4a3d7e93963f94a"
        );
        assert_eq!(
            merkle_root(&[b"a", b"b", b"c"]).unwrap().to_hex(),
            "d31a37ef6ac14a2db1470c4316beb5592e6afd4465022339adafda76a18ffabe"
        );
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(merkle_root::<&[u8]>(&[]), Err(PowError::EmptyTransactions));
    }

    #[test]
    fn single_byte_change_changes_root() {
        let base = vec![b"tx-one".to_vec(), b"tx-two".to_vec(), b"tx-three".to_vec()];
        let root = merkle_root(&base).unwrap();
        for i in 0..base.len() {
            for j in 0..base[i].len() {
                let mut changed = base.clone();
                changed[i][j] ^= 1;
                assert_ne!(merkle_root(&changed).unwrap(), root);
            }
        }
    }
}
