//! Composition chains `f_1 ∘ ... ∘ f_j` over an input domain.

use std::fmt;
use std::sync::Arc;

use crate::arith::factor::Factorize;
use crate::arith::functions::BaseFn;
use crate::arith::order::mult_order;
use crate::arith::primes::{is_prime, isqrt, nth_prime, PrimeStream};
use crate::error::{Error, Result};

/// Membership predicate for a restricted domain, identified by its label.
#[derive(Clone)]
pub struct SetPredicate {
    label: String,
    test: Arc<dyn Fn(u64) -> bool + Send + Sync>,
}

impl SetPredicate {
    pub fn new(label: impl Into<String>, test: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        SetPredicate { label: label.into(), test: Arc::new(test) }
    }

    pub fn naturals() -> Self {
        Self::new("naturals", |_| true)
    }

    pub fn primes() -> Self {
        Self::new("primes", is_prime)
    }

    pub fn squares() -> Self {
        Self::new("squares", |m| {
            let r = isqrt(m);
            r * r == m
        })
    }

    pub fn powers_of_two() -> Self {
        Self::new("pow2", |m: u64| m.is_power_of_two())
    }

    pub fn empty() -> Self {
        Self::new("empty", |_| false)
    }

    /// Looks up one of the built-in sets by label.
    pub fn builtin(label: &str) -> Option<Self> {
        match label {
            "naturals" => Some(Self::naturals()),
            "primes" => Some(Self::primes()),
            "squares" => Some(Self::squares()),
            "pow2" => Some(Self::powers_of_two()),
            "empty" => Some(Self::empty()),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, m: u64) -> bool {
        (self.test)(m)
    }
}

impl fmt::Debug for SetPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPredicate({})", self.label)
    }
}

impl PartialEq for SetPredicate {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

/// Where the `index`-th argument of the chain comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// `m = index`
    Naturals,
    /// `m = p_index`
    Primes,
    /// `m = ord_{2index-1}(2)`
    OddShift,
    /// `m = ord_{p_{index+1}}(2)`
    OrderAtOddPrimes,
    /// `m` = the `index`-th element of the set
    Restricted(SetPredicate),
}

impl Domain {
    pub fn name(&self) -> String {
        match self {
            Domain::Naturals => "naturals".into(),
            Domain::Primes => "primes".into(),
            Domain::OddShift => "odd-shift".into(),
            Domain::OrderAtOddPrimes => "order-primes".into(),
            Domain::Restricted(set) => format!("restricted:{}", set.label()),
        }
    }

    fn applies_order_map(&self) -> bool {
        matches!(self, Domain::OddShift | Domain::OrderAtOddPrimes)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One concatenation number: a chain of base functions over a domain.
///
/// `chain[0]` is the outermost function, so `[Phi, Sigma]` is `phi(sigma(m))`.
/// For the order domains the order map runs first and the chain after it.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionSpec {
    chain: Vec<BaseFn>,
    domain: Domain,
}

impl CompositionSpec {
    pub fn new(chain: Vec<BaseFn>, domain: Domain) -> Self {
        CompositionSpec { chain, domain }
    }

    pub fn identity(domain: Domain) -> Self {
        Self::new(Vec::new(), domain)
    }

    pub fn chain(&self) -> &[BaseFn] {
        &self.chain
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Chain length `j`.
    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    /// Chain rendered as `phi.sigma`, or `id` when empty.
    pub fn chain_name(&self) -> String {
        if self.chain.is_empty() {
            return "id".into();
        }
        self.chain.iter().map(BaseFn::name).collect::<Vec<_>>().join(".")
    }

    /// Applies the chain right-to-left to `m`.
    pub fn apply_chain<F: Factorize + ?Sized>(&self, m: u64, fz: &F) -> Result<u64> {
        self.chain.iter().rev().try_fold(m, |v, fun| fun.eval(&fz.factorize(v)))
    }

    /// Evaluates the composition on a raw domain argument as produced by
    /// [`DomainSource`]: the order map where the domain has one, then the chain.
    pub fn eval_argument<F: Factorize + ?Sized>(&self, arg: u64, fz: &F) -> Result<u64> {
        let m = if self.domain.applies_order_map() { mult_order(2, arg, fz)? } else { arg };
        self.apply_chain(m, fz)
    }

    /// Raw domain arguments for indices `1, 2, 3, ...`.
    pub fn sources(&self) -> DomainSource {
        DomainSource::new(&self.domain, 1)
    }

    /// Raw domain arguments starting at `index`.
    pub fn sources_from(&self, index: u64) -> DomainSource {
        DomainSource::new(&self.domain, index)
    }
}

impl fmt::Display for CompositionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.chain_name(), self.domain)
    }
}

/// Evaluates `f(index)` for the spec, resolving the domain pointwise.
pub fn eval_composition<F: Factorize + ?Sized>(spec: &CompositionSpec, index: u64, fz: &F) -> Result<u64> {
    if index == 0 {
        return Err(Error::InvalidInput("indices start at 1".into()));
    }
    let arg = spec.sources_from(index).next().expect("domain sources are unbounded");
    spec.eval_argument(arg, fz)
}

/// Sequential producer of the raw arguments of a domain.
///
/// For the order domains this yields the modulus (`2i - 1` or `p_{i+1}`);
/// the order itself is computed by [`CompositionSpec::eval_argument`] so
/// that the expensive part can be batched.
#[derive(Clone, Debug)]
pub struct DomainSource {
    kind: SourceKind,
    index: u64,
}

#[derive(Clone, Debug)]
enum SourceKind {
    Naturals,
    Odd,
    Primes(PrimeStream),
    Restricted { set: SetPredicate, candidate: u64 },
}

impl DomainSource {
    fn new(domain: &Domain, index: u64) -> Self {
        assert!(index >= 1, "indices start at 1");
        let kind = match domain {
            Domain::Naturals => SourceKind::Naturals,
            Domain::OddShift => SourceKind::Odd,
            Domain::Primes => SourceKind::Primes(PrimeStream::starting_at(nth_prime(index))),
            Domain::OrderAtOddPrimes => SourceKind::Primes(PrimeStream::starting_at(nth_prime(index + 1))),
            Domain::Restricted(set) => {
                let mut candidate = 1u64;
                let mut seen = 0u64;
                while seen + 1 < index {
                    if set.contains(candidate) {
                        seen += 1;
                    }
                    candidate += 1;
                }
                SourceKind::Restricted { set: set.clone(), candidate }
            }
        };
        DomainSource { kind, index }
    }

    /// Index of the next argument to be produced.
    pub fn next_index(&self) -> u64 {
        self.index
    }
}

impl Iterator for DomainSource {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let i = self.index;
        let arg = match &mut self.kind {
            SourceKind::Naturals => i,
            SourceKind::Odd => 2 * i - 1,
            SourceKind::Primes(stream) => stream.next()?,
            SourceKind::Restricted { set, candidate } => loop {
                let c = *candidate;
                *candidate = c.checked_add(1)?;
                if set.contains(c) {
                    break c;
                }
            },
        };
        self.index += 1;
        Some(arg)
    }
}
