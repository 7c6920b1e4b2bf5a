//! Arithmetic functions, factorization and the composition chains built on them.

pub mod cache;
pub mod composition;
pub mod context;
pub mod factor;
pub mod functions;
pub mod order;
pub mod primes;
pub mod sieve;

pub use composition::{eval_composition, CompositionSpec, Domain, DomainSource, SetPredicate};
pub use context::Arith;
pub use factor::{factorize, Factorization, Factorize, TrialDivision};
pub use functions::{
    big_omega, carmichael_lambda, eval_base, largest_two_square_divisor, phi, prime_set_part, radical, sigma,
    small_omega, sum_proper_divisors, BaseFn, PrimeSet,
};
pub use order::{gcd, lcm, mult_order, pow_mod};
pub use primes::{is_prime, nth_prime, prime_count, prime_stream, primes_up_to, PrimeStream};
pub use sieve::SpfSieve;
