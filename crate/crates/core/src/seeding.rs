//! Named sub-seeds and content digests.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Derive an independent seed for one pipeline stage from the run seed.
///
/// Re-running a single stage with the same run seed reproduces its randomness
/// no matter which other stages ran before it.
pub fn derive_seed(seed: u64, purpose: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(purpose.as_bytes());
    let out = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&out[..8]);
    u64::from_le_bytes(bytes)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}
