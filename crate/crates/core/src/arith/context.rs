use std::sync::Arc;

use crate::arith::factor::{Factorization, Factorize};
use crate::arith::sieve::SpfSieve;
use crate::error::Result;

/// Shared factorization context: an immutable SPF table plus trial-division
/// fallback above its limit. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Arith {
    sieve: Arc<SpfSieve>,
}

impl Arith {
    pub fn with_limit(limit: u64) -> Result<Self> {
        Ok(Arith { sieve: Arc::new(SpfSieve::new(limit.max(2))?) })
    }

    pub fn from_sieve(sieve: Arc<SpfSieve>) -> Self {
        Arith { sieve }
    }

    pub fn sieve(&self) -> &Arc<SpfSieve> {
        &self.sieve
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }

    /// Replaces the table with one covering at least `limit` (no-op if it
    /// already does). Results never depend on the table size.
    pub fn ensure(&mut self, limit: u64) -> Result<()> {
        if limit > self.sieve.limit() {
            let target = limit.max(self.sieve.limit().saturating_mul(2));
            self.sieve = Arc::new(SpfSieve::new(target)?);
        }
        Ok(())
    }
}

impl Factorize for Arith {
    fn factorize(&self, n: u64) -> Factorization {
        self.sieve.factorize(n)
    }
}
