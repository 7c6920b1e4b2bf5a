use std::fmt;
use std::sync::Arc;

use crate::arith::primes::is_prime;
use crate::error::{Error, Result};

/// Prime-exponent decomposition of a natural number `n >= 1`.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// factorization of 1 is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { n: 1, factors: Vec::new() }
    }

    /// Builds a factorization from explicit prime powers, checking every
    /// invariant (primality, ordering, exponents, no overflow of `n`).
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut last = 1u64;
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::InvalidInput(format!("zero exponent on {p}")));
            }
            if p <= last {
                return Err(Error::InvalidInput("primes must be strictly increasing".into()));
            }
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            let pe = p.checked_pow(e).ok_or(Error::Overflow("factorization product"))?;
            n = n.checked_mul(pe).ok_or(Error::Overflow("factorization product"))?;
            last = p;
        }
        Ok(Factorization { n, factors })
    }

    /// Assembles a factorization without re-validating. Callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(n: u64, factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p` in `n` (zero when `p` does not divide `n`).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.binary_search_by_key(&p, |&(q, _)| q).map(|i| self.factors[i].1).unwrap_or(0)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Anything that can factor natural numbers.
pub trait Factorize {
    /// Factors `n`. Panics on `n == 0`.
    fn factorize(&self, n: u64) -> Factorization;
}

impl<T: Factorize + ?Sized> Factorize for &T {
    fn factorize(&self, n: u64) -> Factorization {
        (**self).factorize(n)
    }
}

impl<T: Factorize + ?Sized> Factorize for Arc<T> {
    fn factorize(&self, n: u64) -> Factorization {
        (**self).factorize(n)
    }
}

/// Plain trial division; the fallback for isolated inputs.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrialDivision;

impl Factorize for TrialDivision {
    fn factorize(&self, n: u64) -> Factorization {
        factorize(n)
    }
}

/// Factors `n >= 1` by trial division.
pub fn factorize(n: u64) -> Factorization {
    trial_factor_with(n, &[])
}

/// Trial division that first tries the supplied ascending list of small
/// primes, then continues with odd candidates past the end of the list.
pub(crate) fn trial_factor_with(n: u64, small_primes: &[u32]) -> Factorization {
    assert!(n >= 1, "cannot factor zero");
    let original = n;
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };

    let mut next_candidate = 2u64;
    for &p in small_primes {
        let p = p as u64;
        if p.saturating_mul(p) > rest {
            next_candidate = u64::MAX;
            break;
        }
        push(&mut rest, p);
        next_candidate = p + 1;
    }
    if next_candidate != u64::MAX {
        if next_candidate <= 2 {
            push(&mut rest, 2);
            next_candidate = 3;
        }
        let mut d = next_candidate | 1;
        while d.saturating_mul(d) <= rest {
            push(&mut rest, d);
            d += 2;
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Factorization::from_parts_unchecked(original, factors)
}
