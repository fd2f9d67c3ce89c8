//! Process-wide guard on the size of dense tuple tables.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: u64 = 10_000_000;

static SIZE_CAP: AtomicU64 = AtomicU64::new(DEFAULT_SIZE_CAP);

pub fn size_cap() -> u64 {
    SIZE_CAP.load(Ordering::Relaxed)
}

/// Sets the maximum number of tuples any single table may hold.
pub fn set_size_cap(cap: u64) {
    SIZE_CAP.store(cap, Ordering::Relaxed);
}

/// `base^exp` as a table length, or `SizeCapExceeded`.
pub(crate) fn checked_table_len(base: usize, exp: usize) -> Result<usize> {
    let cap = size_cap();
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc > cap as u128 {
            return Err(Error::SizeCapExceeded {
                requested: acc,
                cap,
            });
        }
    }
    Ok(acc as usize)
}
