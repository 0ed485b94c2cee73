//! Exact rational linear combinations of basis generators.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde_json::{Map, Value};

use super::basis::ValuationBasis;
use super::ExactError;

/// A finitely supported map `generator → rational`, kept sorted by generator id
/// with no zero entries.
///
/// Generator `0` is the unit `1`, so constants are `{0: c}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation {
    terms: Vec<(u16, Rational64)>,
}

impl Valuation {
    pub fn zero() -> Self {
        Valuation { terms: Vec::new() }
    }

    pub fn constant(c: Rational64) -> Self {
        Self::generator(0, c)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Rational64::from_integer(c))
    }

    pub fn generator(id: u16, c: Rational64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Valuation { terms: vec![(id, c)] }
        }
    }

    /// Builds a canonical valuation from arbitrary `(id, coefficient)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (u16, Rational64)>>(pairs: I) -> Self {
        let mut m: BTreeMap<u16, Rational64> = BTreeMap::new();
        for (id, c) in pairs {
            *m.entry(id).or_insert_with(Rational64::zero) += c;
        }
        Valuation { terms: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(u16, Rational64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, id: u16) -> Rational64 {
        self.terms
            .iter()
            .find(|(i, _)| *i == id)
            .map(|(_, c)| *c)
            .unwrap_or_else(Rational64::zero)
    }

    /// The rational constant part.
    pub fn constant_part(&self) -> Rational64 {
        self.coeff(0)
    }

    /// Whether the valuation is a rational constant.
    pub fn as_constant(&self) -> Option<Rational64> {
        match self.terms.as_slice() {
            [] => Some(Rational64::zero()),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    fn merge(&self, other: &Self, sign: Rational64) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            match (a, b) {
                (Some(&(ia, ca)), Some(&(ib, cb))) if ia == ib => {
                    let c = ca + cb * sign;
                    if !c.is_zero() {
                        out.push((ia, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ia, ca)), Some(&(ib, _))) if ia < ib => {
                    out.push((ia, ca));
                    i += 1;
                }
                (Some(_), Some(&(ib, cb))) => {
                    out.push((ib, cb * sign));
                    j += 1;
                }
                (Some(&(ia, ca)), None) => {
                    out.push((ia, ca));
                    i += 1;
                }
                (None, Some(&(ib, cb))) => {
                    out.push((ib, cb * sign));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Valuation { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, Rational64::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, -Rational64::one())
    }

    pub fn neg(&self) -> Self {
        self.scale(-Rational64::one())
    }

    pub fn scale(&self, c: Rational64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Valuation { terms: self.terms.iter().map(|(i, x)| (*i, *x * c)).collect() }
    }

    /// Serializes as `{"symbol": "rational-string"}`.
    pub fn to_json(&self, basis: &ValuationBasis) -> Value {
        let mut m = Map::new();
        for (id, c) in &self.terms {
            m.insert(basis.symbol(*id).to_string(), Value::String(c.to_string()));
        }
        Value::Object(m)
    }

    /// Parses `{"symbol": "rational-string"}`.
    pub fn from_json(basis: &ValuationBasis, v: &Value) -> Result<Self, ExactError> {
        let obj = v.as_object().ok_or_else(|| ExactError::Parse("valuation must be an object".into()))?;
        let mut pairs = Vec::new();
        for (k, x) in obj {
            let s = x.as_str().ok_or_else(|| ExactError::Parse(format!("coefficient of {k} must be a string")))?;
            pairs.push((basis.id(k)?, parse_rational(s)?));
        }
        Ok(Self::from_pairs(pairs))
    }

    /// Human-readable rendering such as `3/2 + 2*pi`.
    pub fn display<'a>(&'a self, basis: &'a ValuationBasis) -> ValuationDisplay<'a> {
        ValuationDisplay { v: self, basis }
    }
}

pub struct ValuationDisplay<'a> {
    v: &'a Valuation,
    basis: &'a ValuationBasis,
}

impl fmt::Display for ValuationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (id, c)) in self.v.terms.iter().enumerate() {
            let neg = *c < Rational64::zero();
            let a = if neg { -*c } else { *c };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if *id == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", self.basis.symbol(*id))?;
            } else {
                write!(f, "{a}*{}", self.basis.symbol(*id))?;
            }
        }
        Ok(())
    }
}

/// Parses `"3"`, `"-2/5"` or a decimal such as `"0.125"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational64, ExactError> {
    let t = s.trim();
    let err = || ExactError::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_abs = ip.trim().trim_start_matches(['-', '+']);
        let ipv: i64 = if ip_abs.is_empty() { 0 } else { ip_abs.parse().map_err(|_| err())? };
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) || fp.len() > 15 {
            return Err(err());
        }
        let den = 10i64.pow(fp.len() as u32);
        let fpv: i64 = fp.parse().map_err(|_| err())?;
        let v = Rational64::new(ipv * den + fpv, den);
        return Ok(if neg { -v } else { v });
    }
    let n: i64 = t.parse().map_err(|_| err())?;
    Ok(Rational64::from_integer(n))
}

/// Parses a linear expression such as `"1/2 - 2*s + t/3"` over the basis symbols.
pub fn parse_linexpr(basis: &ValuationBasis, s: &str) -> Result<Valuation, ExactError> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(ExactError::Parse("empty expression".into()));
    }
    let mut pairs = Vec::new();
    let bytes = src.as_bytes();
    let mut start = 0;
    let mut i = 1;
    let mut pieces = Vec::new();
    while i <= bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/') {
            pieces.push(&src[start..i]);
            start = i;
        }
        i += 1;
    }
    for piece in pieces {
        let (neg, body) = match piece.as_bytes()[0] {
            b'-' => (true, &piece[1..]),
            b'+' => (false, &piece[1..]),
            _ => (false, piece),
        };
        if body.is_empty() {
            return Err(ExactError::Parse(format!("dangling sign in {s:?}")));
        }
        let mut coeff = Rational64::one();
        let mut symbol: Option<&str> = None;
        for factor in body.split('*') {
            let (num_part, div) = match factor.split_once('/') {
                Some((a, b)) => (a, Some(b)),
                None => (factor, None),
            };
            let is_symbol = num_part.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            if is_symbol {
                if symbol.is_some() {
                    return Err(ExactError::Parse(format!("nonlinear term {piece:?}")));
                }
                symbol = Some(num_part);
            } else {
                coeff *= parse_rational(num_part)?;
            }
            if let Some(d) = div {
                let dv = parse_rational(d)?;
                if dv.is_zero() {
                    return Err(ExactError::Parse("division by zero".into()));
                }
                coeff /= dv;
            }
        }
        if neg {
            coeff = -coeff;
        }
        let id = match symbol {
            Some(sym) => basis.id(sym)?,
            None => 0,
        };
        pairs.push((id, coeff));
    }
    Ok(Valuation::from_pairs(pairs))
}
