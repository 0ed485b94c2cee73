//! Symbolic real generators and certified comparison of rational linear
//! combinations of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use super::enclose::{big, ln_enclosure, next_down, next_up, pi_enclosure, sqrt_enclosure, RatInterval};
use super::valuation::Valuation;
use super::ExactError;

/// Default number of precision doublings before an ordering is declared ambiguous.
pub const DEFAULT_REFINEMENT_DEPTH: u32 = 64;

/// Precision of the first slow-path refinement, in bits.
const BASE_BITS: u32 = 64;

/// Precision ceiling; doublings beyond it cannot separate dependent generators.
const MAX_BITS: u32 = 1 << 14;

/// How the numeric value of a generator is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Provider {
    /// The rational unit `1`.
    One,
    /// The constant π.
    Pi,
    /// `ln r` for a positive rational `r`.
    Ln(Rational64),
    /// `√r` for a nonnegative rational `r`.
    Sqrt(Rational64),
    /// A fixed interval that cannot be refined.
    Fixed { lo: Rational64, hi: Rational64 },
    /// The product of two providers.
    Product(Box<Provider>, Box<Provider>),
}

impl Provider {
    fn validate(&self) -> Result<(), ExactError> {
        match self {
            Provider::Ln(r) if *r <= Rational64::zero() => {
                Err(ExactError::InvalidGenerator(format!("ln of nonpositive {r}")))
            }
            Provider::Sqrt(r) if *r < Rational64::zero() => {
                Err(ExactError::InvalidGenerator(format!("sqrt of negative {r}")))
            }
            Provider::Fixed { lo, hi } if lo > hi => {
                Err(ExactError::InvalidGenerator(format!("empty interval [{lo}, {hi}]")))
            }
            Provider::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Enclosure at roughly `bits` bits of precision.
    pub fn enclose(&self, bits: u32) -> RatInterval {
        match self {
            Provider::One => RatInterval::point(BigRational::from_integer(BigInt::from(1))),
            Provider::Pi => pi_enclosure(bits),
            Provider::Ln(r) => ln_enclosure(r, bits),
            Provider::Sqrt(r) => sqrt_enclosure(r, bits),
            Provider::Fixed { lo, hi } => RatInterval::new(big(lo), big(hi)),
            Provider::Product(a, b) => a.enclose(bits + 8).mul(&b.enclose(bits + 8)),
        }
    }

    /// Whether refinement can shrink the enclosure toward a point.
    pub fn refinable(&self) -> bool {
        match self {
            Provider::Fixed { lo, hi } => lo == hi,
            Provider::Product(a, b) => a.refinable() && b.refinable(),
            _ => true,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            Provider::One => "1".into(),
            Provider::Pi => "pi".into(),
            Provider::Ln(r) => format!("ln({r})"),
            Provider::Sqrt(r) => format!("sqrt({r})"),
            Provider::Fixed { lo, hi } => format!("[{lo}, {hi}]"),
            Provider::Product(a, b) => format!("{}*{}", a.describe(), b.describe()),
        }
    }
}

/// A declared generator of the valuation group.
#[derive(Clone, Debug)]
pub struct Generator {
    pub symbol: String,
    pub provider: Provider,
    f64_enclosure: (f64, f64),
}

/// Ordered list of symbolic real generators; index `0` is always the unit `1`.
#[derive(Debug)]
pub struct ValuationBasis {
    gens: Vec<Generator>,
    index: BTreeMap<String, usize>,
    depth: u32,
    refinements: AtomicU64,
}

impl ValuationBasis {
    /// A basis containing only the unit generator.
    pub fn unit() -> Self {
        Self::new(Vec::new()).expect("unit basis is valid")
    }

    /// Builds a basis from `(symbol, provider)` pairs; the unit is added first.
    pub fn new(gens: Vec<(String, Provider)>) -> Result<Self, ExactError> {
        let mut basis = ValuationBasis {
            gens: Vec::new(),
            index: BTreeMap::new(),
            depth: DEFAULT_REFINEMENT_DEPTH,
            refinements: AtomicU64::new(0),
        };
        basis.push("1".into(), Provider::One)?;
        for (s, p) in gens {
            basis.push(s, p)?;
        }
        Ok(basis)
    }

    fn push(&mut self, symbol: String, provider: Provider) -> Result<(), ExactError> {
        provider.validate()?;
        if self.index.contains_key(&symbol) {
            return Err(ExactError::DuplicateSymbol(symbol));
        }
        let f64_enclosure = provider.enclose(BASE_BITS).to_f64_outward();
        self.index.insert(symbol.clone(), self.gens.len());
        self.gens.push(Generator { symbol, provider, f64_enclosure });
        Ok(())
    }

    /// Sets the refinement depth used by [`ValuationBasis::compare`].
    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn id(&self, symbol: &str) -> Result<u16, ExactError> {
        self.index
            .get(symbol)
            .map(|&i| i as u16)
            .ok_or_else(|| ExactError::UnknownSymbol(symbol.to_string()))
    }

    pub fn symbol(&self, id: u16) -> &str {
        &self.gens[id as usize].symbol
    }

    pub fn provider(&self, id: u16) -> &Provider {
        &self.gens[id as usize].provider
    }

    /// Number of slow-path refinements performed so far.
    pub fn refinement_count(&self) -> u64 {
        self.refinements.load(AtomicOrdering::Relaxed)
    }

    /// Outward-rounded floating enclosure of a valuation.
    pub fn enclose_f64(&self, v: &Valuation) -> (f64, f64) {
        let mut lo = 0f64;
        let mut hi = 0f64;
        let mut mag = 0f64;
        for (id, c) in v.terms() {
            let (glo, ghi) = self.gens[*id as usize].f64_enclosure;
            let cf = *c.numer() as f64 / *c.denom() as f64;
            let (a, b) = if cf >= 0.0 { (cf * glo, cf * ghi) } else { (cf * ghi, cf * glo) };
            lo += a;
            hi += b;
            mag += cf.abs() * glo.abs().max(ghi.abs());
        }
        let slack = mag * 1e-14 + f64::MIN_POSITIVE;
        (next_down(lo - slack), next_up(hi + slack))
    }

    /// Floating approximation of a valuation.
    pub fn approx(&self, v: &Valuation) -> f64 {
        let (lo, hi) = self.enclose_f64(v);
        0.5 * (lo + hi)
    }

    /// Certified rational enclosure at the given precision.
    pub fn enclose(&self, v: &Valuation, bits: u32) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for (id, c) in v.terms() {
            let g = self.gens[*id as usize].provider.enclose(bits);
            acc = acc.add(&g.scale(&big(c)));
        }
        acc
    }

    /// Sign of a valuation.
    pub fn sign(&self, v: &Valuation) -> Result<Ordering, ExactError> {
        if v.is_zero() {
            return Ok(Ordering::Equal);
        }
        let (lo, hi) = self.enclose_f64(v);
        if lo > 0.0 {
            return Ok(Ordering::Greater);
        }
        if hi < 0.0 {
            return Ok(Ordering::Less);
        }
        let refinable = v.terms().iter().all(|(id, _)| self.gens[*id as usize].provider.refinable());
        let mut bits = BASE_BITS;
        for _ in 0..self.depth.max(1) {
            self.refinements.fetch_add(1, AtomicOrdering::Relaxed);
            let iv = self.enclose(v, bits);
            if iv.lo == iv.hi {
                return Ok(iv.lo.cmp(&BigRational::zero()));
            }
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            if !refinable || bits >= MAX_BITS {
                break;
            }
            bits = (bits * 2).min(MAX_BITS);
        }
        Err(ExactError::AmbiguousOrdering { depth: self.depth })
    }

    /// Certified comparison of two valuations over this basis.
    pub fn compare(&self, a: &Valuation, b: &Valuation) -> Result<Ordering, ExactError> {
        if a == b {
            return Ok(Ordering::Equal);
        }
        let (alo, ahi) = self.enclose_f64(a);
        let (blo, bhi) = self.enclose_f64(b);
        if ahi < blo {
            return Ok(Ordering::Less);
        }
        if bhi < alo {
            return Ok(Ordering::Greater);
        }
        self.sign(&a.sub(b))
    }
}
