//! Pointwise arithmetic functions evaluated from a [`Factorization`].

use std::fmt;

use crate::arith::factor::Factorization;
use crate::arith::order::lcm;
use crate::arith::primes::is_prime;
use crate::error::{Error, Result};

/// Euler's totient, the order of the unit group mod `n`.
pub fn phi(fac: &Factorization) -> u64 {
    fac.factors().iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// Sum of divisors. Fails only if the value does not fit in 64 bits.
pub fn sigma(fac: &Factorization) -> Result<u64> {
    let mut total = 1u64;
    for &(p, e) in fac.factors() {
        // 1 + p + ... + p^e
        let mut term = 1u64;
        let mut power = 1u64;
        for _ in 0..e {
            power = power.checked_mul(p).ok_or(Error::Overflow("sigma"))?;
            term = term.checked_add(power).ok_or(Error::Overflow("sigma"))?;
        }
        total = total.checked_mul(term).ok_or(Error::Overflow("sigma"))?;
    }
    Ok(total)
}

/// Carmichael's function: the exponent of the unit group mod `n`.
pub fn carmichael_lambda(fac: &Factorization) -> u64 {
    fac.factors()
        .iter()
        .map(|&(p, e)| match (p, e) {
            (2, 1) => 1,
            (2, 2) => 2,
            (2, e) => 1 << (e - 2),
            (p, e) => (p - 1) * p.pow(e - 1),
        })
        // every prime-power term divides phi(n) <= n, so the lcm cannot overflow
        .fold(1, |acc, t| lcm(acc, t).expect("lambda(n) <= n"))
}

/// Number of prime factors counted with multiplicity.
pub fn big_omega(fac: &Factorization) -> u32 {
    fac.factors().iter().map(|&(_, e)| e).sum()
}

/// Number of distinct prime factors.
pub fn small_omega(fac: &Factorization) -> u32 {
    fac.factors().len() as u32
}

pub fn radical(fac: &Factorization) -> u64 {
    fac.primes().product()
}

/// Largest divisor of `n` that is a sum of two squares: primes `3 mod 4`
/// keep only an even part of their exponent.
pub fn largest_two_square_divisor(fac: &Factorization) -> u64 {
    fac.factors().iter().map(|&(p, e)| if p % 4 == 3 { p.pow(e - e % 2) } else { p.pow(e) }).product()
}

/// The part of `n` supported on the primes of `set`.
pub fn prime_set_part(set: &PrimeSet, fac: &Factorization) -> u64 {
    fac.factors().iter().filter(|&&(p, _)| set.contains(p)).map(|&(p, e)| p.pow(e)).product()
}

/// Sum of proper divisors with the convention `s(1) = 1`.
pub fn sum_proper_divisors(fac: &Factorization) -> Result<u64> {
    if fac.is_one() {
        return Ok(1);
    }
    Ok(sigma(fac)? - fac.n())
}

/// A finite, nonempty set of primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if primes.is_empty() {
            return Err(Error::InvalidInput("prime set must be nonempty".into()));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(PrimeSet(primes))
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    /// Product of the primes in the set.
    pub fn modulus(&self) -> Result<u64> {
        self.0.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).ok_or(Error::Overflow("prime set product"))
    }
}

/// The base functions a composition chain is built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseFn {
    Phi,
    Sigma,
    Lambda,
    SumProperDivisors,
    Radical,
    LargestTwoSquareDivisor,
    /// Multiplicative, `f(p^e) = p^e` for `p` in the set and `1` otherwise.
    GStar(PrimeSet),
}

impl BaseFn {
    pub fn eval(&self, fac: &Factorization) -> Result<u64> {
        eval_base(self, fac)
    }

    /// Short name used in chain strings (`phi`, `sigma`, `gstar:2,3`, ...).
    pub fn name(&self) -> String {
        match self {
            BaseFn::Phi => "phi".into(),
            BaseFn::Sigma => "sigma".into(),
            BaseFn::Lambda => "lambda".into(),
            BaseFn::SumProperDivisors => "s".into(),
            BaseFn::Radical => "rad".into(),
            BaseFn::LargestTwoSquareDivisor => "two-squares".into(),
            BaseFn::GStar(set) => {
                let list: Vec<String> = set.primes().iter().map(u64::to_string).collect();
                format!("gstar:{}", list.join(","))
            }
        }
    }
}

impl fmt::Display for BaseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn eval_base(fun: &BaseFn, fac: &Factorization) -> Result<u64> {
    Ok(match fun {
        BaseFn::Phi => phi(fac),
        BaseFn::Sigma => sigma(fac)?,
        BaseFn::Lambda => carmichael_lambda(fac),
        BaseFn::SumProperDivisors => sum_proper_divisors(fac)?,
        BaseFn::Radical => radical(fac),
        BaseFn::LargestTwoSquareDivisor => largest_two_square_divisor(fac),
        BaseFn::GStar(set) => prime_set_part(set, fac),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor::factorize;
    use crate::arith::order::gcd;

    fn f(n: u64) -> Factorization {
        factorize(n)
    }

    fn brute_phi(n: u64) -> u64 {
        (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64
    }

    fn brute_sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n % d == 0).sum()
    }

    /// Exponent of (Z/nZ)^x as the lcm of all unit orders.
    fn brute_exponent(n: u64) -> u64 {
        if n == 1 {
            return 1;
        }
        let mut exp = 1u64;
        for a in 1..n {
            if gcd(a, n) != 1 {
                continue;
            }
            let mut x = a;
            let mut t = 1;
            while x != 1 {
                x = x * a % n;
                t += 1;
            }
            exp = lcm(exp, t).unwrap();
        }
        exp
    }

    fn is_two_squares(m: u64) -> bool {
        (0..).take_while(|a| a * a <= m).any(|a| {
            let r = m - a * a;
            let b = (r as f64).sqrt() as u64;
            (b.saturating_sub(1)..=b + 1).any(|b| b * b == r)
        })
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&f(1)), 1);
        assert_eq!(phi(&f(10)), 4);
        assert_eq!(brute_phi(510510), 92160);
        assert_eq!(phi(&f(510510)), 92160);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&f(1)).unwrap(), 1);
        assert_eq!(sigma(&f(6)).unwrap(), 12);
        assert_eq!(sigma(&f(1024)).unwrap(), (0..=10).map(|i| 1u64 << i).sum::<u64>());
        assert_eq!(sigma(&f(1024)).unwrap(), 2047);
    }

    #[test]
    fn sigma_overflow_is_an_error() {
        let big = Factorization::from_factors(vec![(2, 62), (3, 1)]).unwrap();
        assert_eq!(sigma(&big), Err(Error::Overflow("sigma")));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(carmichael_lambda(&f(1)), 1);
        assert_eq!(carmichael_lambda(&f(8)), 2);
        assert_eq!(brute_exponent(561), 80);
        assert_eq!(carmichael_lambda(&f(561)), 80);
    }

    #[test]
    fn omegas() {
        assert_eq!((big_omega(&f(1)), small_omega(&f(1))), (0, 0));
        assert_eq!((big_omega(&f(12)), small_omega(&f(12))), (3, 2));
        assert_eq!((big_omega(&f(1 << 20)), small_omega(&f(1 << 20))), (20, 1));
    }

    #[test]
    fn pointwise_oracles_small_range() {
        for n in 1..=600u64 {
            let fac = f(n);
            assert_eq!(phi(&fac), brute_phi(n), "phi({n})");
            assert_eq!(sigma(&fac).unwrap(), brute_sigma(n), "sigma({n})");
        }
    }

    #[test]
    fn lambda_matches_group_exponent() {
        for n in 1..=1200u64 {
            assert_eq!(carmichael_lambda(&f(n)), brute_exponent(n), "n={n}");
        }
    }

    #[test]
    fn two_square_divisor_matches_scan() {
        assert_eq!(largest_two_square_divisor(&f(45)), 45);
        assert_eq!(largest_two_square_divisor(&f(3)), 1);
        assert_eq!(largest_two_square_divisor(&f(21)), 1);
        for n in 1..=3000u64 {
            let scan = (1..=n).rev().find(|d| n % d == 0 && is_two_squares(*d)).unwrap();
            assert_eq!(largest_two_square_divisor(&f(n)), scan, "n={n}");
        }
    }

    #[test]
    fn divisor_valued_examples() {
        assert_eq!(radical(&f(12)), 6);
        let two = PrimeSet::new(vec![2]).unwrap();
        assert_eq!(prime_set_part(&two, &f(24)), 8);
        assert_eq!(prime_set_part(&two, &f(15)), 1);
        let g = BaseFn::GStar(PrimeSet::new(vec![3, 2, 3]).unwrap());
        assert_eq!(g.eval(&f(360)).unwrap(), 72);
        assert_eq!(g.name(), "gstar:2,3");
    }

    #[test]
    fn sum_proper_divisors_convention() {
        assert_eq!(sum_proper_divisors(&f(1)).unwrap(), 1);
        assert_eq!(sum_proper_divisors(&f(6)).unwrap(), 6);
        assert_eq!(sum_proper_divisors(&f(7)).unwrap(), 1);
        assert_eq!(sum_proper_divisors(&f(12)).unwrap(), 16);
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new(vec![]).is_err());
        assert!(PrimeSet::new(vec![2, 9]).is_err());
        assert_eq!(PrimeSet::new(vec![2, 3, 5]).unwrap().modulus().unwrap(), 30);
    }
}
