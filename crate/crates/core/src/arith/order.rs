use crate::arith::factor::Factorize;
use crate::arith::functions::carmichael_lambda;
use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Multiplicative order of `a` modulo `n`: the least `t >= 1` with
/// `a^t = 1 (mod n)`.
///
/// Starts from `t = lambda(n)` and strips prime factors of `t` while the
/// congruence still holds.
pub fn mult_order<F: Factorize + ?Sized>(a: u64, n: u64, fz: &F) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be >= 1".into()));
    }
    if n == 1 {
        return Ok(1);
    }
    if gcd(a % n, n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    let mut t = carmichael_lambda(&fz.factorize(n));
    for &(q, _) in fz.factorize(t).factors() {
        while t % q == 0 && pow_mod(a, t / q, n) == 1 {
            t /= q;
        }
    }
    Ok(t)
}
