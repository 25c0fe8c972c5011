//! Multi-threaded drivers for the core's per-item checks.
//!
//! Work is split into fixed chunks in enumeration order and results are
//! sorted afterwards, so output does not depend on the thread count.

use std::env;

use rayon::prelude::*;
use shatterkit_core::tree::{GuaranteeChecker, GuaranteeViolation, ShatterTree, VerificationReport, VerifyMode};
use shatterkit_core::Error as CoreError;

use crate::error::Result;

/// Caps the worker count; `0` or unset means one worker per core.
pub const THREADS_ENV: &str = "SHATTERKIT_THREADS";

const CHUNK: usize = 1 << 12;

pub fn configured_threads() -> Result<usize> {
    match env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CoreError::InvalidArgument(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")).into()
        }),
        Err(_) => Ok(0),
    }
}

/// A pool sized by [`THREADS_ENV`].
pub fn pool() -> Result<rayon::ThreadPool> {
    let threads = configured_threads()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CoreError::Capability(format!("cannot start worker threads: {e}")).into())
}

/// Same result as `shatterkit_core::tree::verify_guarantee`, with subsets
/// checked in parallel. Violations are listed in colexicographic order of
/// their subsets.
pub fn verify_guarantee(tree: &ShatterTree, k: usize, mode: VerifyMode) -> Result<VerificationReport> {
    let checker = GuaranteeChecker::new(tree, k, mode)?;
    let pool = pool()?;
    let mut subsets = checker.subsets();
    let mut checked = 0u64;
    let mut found: Vec<(u64, GuaranteeViolation)> = Vec::new();
    pool.install(|| loop {
        let chunk: Vec<u64> = subsets.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        checked += chunk.len() as u64;
        found.par_extend(
            chunk
                .par_iter()
                .filter_map(|&s| checker.check(s).map(|v| (s, v))),
        );
    });
    found.sort_by_key(|&(s, _)| s);
    Ok(checker.report(checked, found.into_iter().map(|(_, v)| v).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use shatterkit_core::tree::build_tree;

    #[test]
    fn agrees_with_sequential() {
        let mut t = build_tree(3).unwrap();
        t.leaves[5] = t.leaves[2].clone();
        for k in 0..3 {
            for mode in [VerifyMode::Exhaustive, VerifyMode::Certificate] {
                let seq = shatterkit_core::tree::verify_guarantee(&t, k, mode).unwrap();
                assert_eq!(verify_guarantee(&t, k, mode).unwrap(), seq, "k={k} {mode:?}");
            }
        }
    }
}
