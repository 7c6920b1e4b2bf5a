use crate::arith::factor::{trial_factor_with, Factorization, Factorize};
use crate::error::{Error, Result};

/// Default cap on the number of table entries (4 bytes each, so 1 GiB).
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Smallest-prime-factor table for `2..=limit`.
///
/// Factoring `m <= limit` costs `O(log m)` table lookups. Larger inputs
/// fall back to trial division by the table's primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpfSieve {
    limit: u64,
    // spf[i] is the least prime factor of i + 2
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidInput(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > budget || limit > u32::MAX as u64 {
            return Err(Error::Capacity { limit, budget: budget.min(u32::MAX as u64) });
        }
        let len = (limit - 1) as usize;
        let mut spf = vec![0u32; len];
        let mut primes = Vec::new();
        for m in 2..=limit {
            let idx = (m - 2) as usize;
            if spf[idx] != 0 {
                continue;
            }
            spf[idx] = m as u32;
            primes.push(m as u32);
            let mut j = m * m;
            while j <= limit {
                let jdx = (j - 2) as usize;
                if spf[jdx] == 0 {
                    spf[jdx] = m as u32;
                }
                j += m;
            }
        }
        Ok(SpfSieve { limit, spf, primes })
    }

    /// Rebuilds a sieve from a raw table, checking that each entry is a
    /// divisor of its index and that prime entries are self-referential.
    pub fn from_table(limit: u64, spf: Vec<u32>) -> Result<Self> {
        let bad = |reason: String| Error::Format { what: "SPF cache", reason };
        if limit < 2 || spf.len() as u64 != limit - 1 {
            return Err(bad(format!("table length {} does not match limit {limit}", spf.len())));
        }
        let mut primes = Vec::new();
        for (i, &p) in spf.iter().enumerate() {
            let m = i as u64 + 2;
            let p64 = p as u64;
            if p64 < 2 || m % p64 != 0 {
                return Err(bad(format!("entry {p} is not a factor of {m}")));
            }
            if p64 == m {
                primes.push(p);
            } else if spf[(p64 - 2) as usize] != p || spf[(m / p64 - 2) as usize] < p {
                // entries below m are already validated, so spf(m/p) >= p
                // means no smaller prime divides m
                return Err(bad(format!("entry {p} for {m} is not its least prime factor")));
            }
        }
        // A composite marked prime would pass the loop above; visit every
        // composite once as q * j with q = spf(q * j) <= spf(j) (linear sieve).
        for &q in &primes {
            let q = q as u64;
            if q * q > limit {
                break;
            }
            for j in q..=limit / q {
                if (spf[(j - 2) as usize] as u64) < q {
                    continue;
                }
                if spf[(q * j - 2) as usize] as u64 != q {
                    return Err(bad(format!("{} is recorded as prime but is divisible by {q}", q * j)));
                }
            }
        }
        Ok(SpfSieve { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Least prime factor of `m` for `2 <= m <= limit`.
    pub fn least_prime_factor(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit {
            return None;
        }
        Some(self.spf[(m - 2) as usize] as u64)
    }

    pub fn table(&self) -> &[u32] {
        &self.spf
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, m: u64) -> Option<bool> {
        self.least_prime_factor(m).map(|p| p == m)
    }
}

impl Factorize for SpfSieve {
    fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1, "cannot factor zero");
        if n > self.limit {
            return trial_factor_with(n, &self.primes);
        }
        let mut rest = n;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[(rest - 2) as usize] as u64;
            rest /= p;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization::from_parts_unchecked(n, factors)
    }
}
