//! Materialization budget shared between groups built from the same session.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Cap on the number of elements (or assignments, coordinates, ...) any single
/// computation may materialize. Clones share one high-water meter so callers
/// can report how much of the budget a command actually used.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    peak: Arc<AtomicU64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            peak: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest amount charged so far.
    pub fn used(&self) -> u64 {
        self.peak.load(Ordering::Relaxed)
    }

    /// Records a materialization of `amount` units, failing if it exceeds the limit.
    pub fn charge(&self, what: &str, amount: u64) -> Result<()> {
        if amount > self.limit {
            return Err(Error::budget(what, amount, self.limit));
        }
        self.peak.fetch_max(amount, Ordering::Relaxed);
        Ok(())
    }

    /// Like [`Budget::charge`] for quantities that may not fit in a `u64`.
    pub fn charge_big(&self, what: &str, amount: &num_bigint::BigUint) -> Result<u64> {
        match u64::try_from(amount) {
            Ok(n) => self.charge(what, n).map(|_| n),
            Err(_) => Err(Error::budget(what, amount, self.limit)),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
