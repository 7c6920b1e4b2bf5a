//! Primality testing and an unbounded, segmented prime generator.

use crate::arith::order::{mul_mod, pow_mod};

const SEGMENT: u64 = 1 << 15;

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= limit` by the plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit as usize + 1];
    let mut out = Vec::new();
    for m in 2..=limit as usize {
        if composite[m] {
            continue;
        }
        out.push(m as u64);
        let mut j = m * m;
        while j <= limit as usize {
            composite[j] = true;
            j += m;
        }
    }
    out
}

/// Unbounded ascending iterator over the primes, sieved in fixed-size segments.
#[derive(Clone, Debug)]
pub struct PrimeStream {
    base: Vec<u64>,
    base_limit: u64,
    segment_lo: u64,
    pending: Vec<u64>,
    pos: usize,
}

impl PrimeStream {
    pub fn new() -> Self {
        Self::starting_at(2)
    }

    /// Stream of the primes `>= lo`.
    pub fn starting_at(lo: u64) -> Self {
        PrimeStream { base: Vec::new(), base_limit: 1, segment_lo: lo.max(2), pending: Vec::new(), pos: 0 }
    }

    fn refill(&mut self) {
        let lo = self.segment_lo;
        let hi = lo.saturating_add(SEGMENT);
        let need = isqrt(hi) + 1;
        if need > self.base_limit {
            let new_limit = need.max(self.base_limit * 2);
            self.base = primes_up_to(new_limit);
            self.base_limit = new_limit;
        }
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut j = (lo.div_ceil(p) * p).max(p * p);
            while j < hi {
                composite[(j - lo) as usize] = true;
                j += p;
            }
        }
        self.pending.clear();
        self.pos = 0;
        self.pending.extend((lo..hi).filter(|&m| !composite[(m - lo) as usize] && m >= 2));
        self.segment_lo = hi;
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.pending.len() {
            if self.segment_lo == u64::MAX {
                return None;
            }
            self.refill();
        }
        let p = self.pending[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Iterator over all primes starting from 2.
pub fn prime_stream() -> PrimeStream {
    PrimeStream::new()
}

/// The `n`th prime, with `nth_prime(1) == 2`.
pub fn nth_prime(n: u64) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    // p_n < n (ln n + ln ln n) for n >= 6
    let bound = if n < 6 {
        13
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    if bound <= 1 << 26 {
        return primes_up_to(bound)[(n - 1) as usize];
    }
    PrimeStream::new().nth((n - 1) as usize).expect("prime stream is unbounded")
}

/// Number of primes `<= x`.
pub fn prime_count(x: u64) -> u64 {
    PrimeStream::new().take_while(|&p| p <= x).count() as u64
}

pub(crate) fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_naive() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), naive_prime(n), "n={n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(!is_prime(561));
    }

    #[test]
    fn nth_prime_values() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(4), 7);
        assert_eq!(nth_prime(1000), 7919);
        assert_eq!(nth_prime(5), 11);
        assert_eq!(nth_prime(6), 13);
    }

    #[test]
    fn stream_crosses_segments() {
        let streamed: Vec<u64> = prime_stream().take_while(|&p| p < 200_000).collect();
        assert_eq!(streamed, primes_up_to(199_999));
        let from: Vec<u64> = PrimeStream::starting_at(100).take(3).collect();
        assert_eq!(from, vec![101, 103, 107]);
        assert_eq!(PrimeStream::starting_at(7).next(), Some(7));
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }

    #[test]
    fn counts() {
        assert_eq!(prime_count(100), 25);
        assert_eq!(prime_count(1_000_000), 78_498);
    }
}
