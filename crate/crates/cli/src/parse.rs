//! Text forms of chains, domains and sets used on the command line.

use std::fmt;

use normcat::arith::{BaseFn, CompositionSpec, Domain, PrimeSet, SetPredicate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    UnknownFunction(String),
    UnknownDomain(String),
    UnknownSet(String),
    BadPrimeList(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnknownFunction(t) => write!(
                f,
                "unknown function `{t}` (expected phi, sigma, lambda, s, rad, two-squares, gstar:<p,q,...> or id)"
            ),
            ParseError::UnknownDomain(t) => write!(
                f,
                "unknown domain `{t}` (expected naturals, primes, odd-shift, order-primes or restricted:<set>)"
            ),
            ParseError::UnknownSet(t) => {
                write!(f, "unknown set `{t}` (expected naturals, primes, squares, pow2 or empty)")
            }
            ParseError::BadPrimeList(t) => write!(f, "`{t}` is not a nonempty list of primes"),
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_primes(text: &str) -> Result<PrimeSet, ParseError> {
    let bad = || ParseError::BadPrimeList(text.to_string());
    let list = text.split(',').map(|p| p.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    PrimeSet::new(list).map_err(|_| bad())
}

fn parse_function(token: &str) -> Result<BaseFn, ParseError> {
    Ok(match token {
        "phi" => BaseFn::Phi,
        "sigma" => BaseFn::Sigma,
        "lambda" => BaseFn::Lambda,
        "s" => BaseFn::SumProperDivisors,
        "rad" => BaseFn::Radical,
        "two-squares" => BaseFn::LargestTwoSquareDivisor,
        _ => match token.strip_prefix("gstar:") {
            Some(list) => BaseFn::GStar(parse_primes(list)?),
            None => return Err(ParseError::UnknownFunction(token.to_string())),
        },
    })
}

/// Parses `phi.sigma` (outermost first, so `phi(sigma(n))`). `id` or an
/// empty string is the identity.
pub fn parse_chain(text: &str) -> Result<Vec<BaseFn>, ParseError> {
    let text = text.trim();
    if text.is_empty() || text == "id" {
        return Ok(Vec::new());
    }
    text.split('.').map(|t| parse_function(t.trim())).collect()
}

/// A single base function, for experiments that take `a` rather than a chain.
pub fn parse_base(text: &str) -> Result<BaseFn, ParseError> {
    parse_function(text.trim())
}

pub fn parse_set(text: &str) -> Result<SetPredicate, ParseError> {
    SetPredicate::builtin(text.trim()).ok_or_else(|| ParseError::UnknownSet(text.to_string()))
}

pub fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let text = text.trim();
    Ok(match text {
        "naturals" => Domain::Naturals,
        "primes" => Domain::Primes,
        "odd-shift" => Domain::OddShift,
        "order-primes" => Domain::OrderAtOddPrimes,
        _ => match text.strip_prefix("restricted:") {
            Some(set) => Domain::Restricted(parse_set(set)?),
            None => return Err(ParseError::UnknownDomain(text.to_string())),
        },
    })
}

pub fn parse_spec(chain: &str, domain: &str) -> Result<CompositionSpec, ParseError> {
    Ok(CompositionSpec::new(parse_chain(chain)?, parse_domain(domain)?))
}

/// Comma-separated, strictly increasing checkpoint list.
pub fn parse_checkpoints(text: &str) -> Result<Vec<u64>, String> {
    text.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad checkpoint `{t}`"))).collect()
}
