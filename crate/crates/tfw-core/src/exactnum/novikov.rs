//! Truncated Novikov series `Σ aᵢ T^{λᵢ}` over a shared valuation basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde_json::{json, Value};

use super::basis::ValuationBasis;
use super::coeff::{Coeff, DEFAULT_EPS};
use super::valuation::Valuation;
use super::ExactError;

/// Session data shared by every scalar: basis, truncation cutoff and coefficient tolerance.
#[derive(Debug)]
pub struct NovCtx {
    pub basis: Arc<ValuationBasis>,
    pub cutoff: Valuation,
    pub eps: f64,
}

impl NovCtx {
    pub fn new(basis: Arc<ValuationBasis>, cutoff: Valuation) -> Arc<Self> {
        Arc::new(NovCtx { basis, cutoff, eps: DEFAULT_EPS })
    }

    pub fn with_eps(basis: Arc<ValuationBasis>, cutoff: Valuation, eps: f64) -> Arc<Self> {
        Arc::new(NovCtx { basis, cutoff, eps })
    }

    /// A context over the same basis with another cutoff.
    pub fn with_cutoff(&self, cutoff: Valuation) -> Arc<Self> {
        Arc::new(NovCtx { basis: self.basis.clone(), cutoff, eps: self.eps })
    }

    pub fn compare(&self, a: &Valuation, b: &Valuation) -> Result<Ordering, ExactError> {
        self.basis.compare(a, b)
    }

    fn below_cutoff(&self, v: &Valuation) -> Result<bool, ExactError> {
        Ok(self.compare(v, &self.cutoff)? == Ordering::Less)
    }
}

/// A Novikov scalar: terms strictly increasing in valuation, all below the
/// cutoff, no zero coefficients.
#[derive(Clone, Debug)]
pub struct Novikov {
    ctx: Arc<NovCtx>,
    terms: Vec<(Valuation, Coeff)>,
}

impl PartialEq for Novikov {
    fn eq(&self, other: &Self) -> bool {
        self.same_ctx(other)
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((va, ca), (vb, cb))| va == vb && ca.approx_eq(cb, self.ctx.eps))
    }
}

fn sort_by_valuation(ctx: &NovCtx, terms: &mut [(Valuation, Coeff)]) -> Result<(), ExactError> {
    let mut err = None;
    terms.sort_by(|a, b| match ctx.compare(&a.0, &b.0) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

impl Novikov {
    pub fn zero(ctx: &Arc<NovCtx>) -> Self {
        Novikov { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<NovCtx>) -> Self {
        Self::constant(ctx, Coeff::one())
    }

    pub fn integer(ctx: &Arc<NovCtx>, n: i64) -> Self {
        Self::constant(ctx, Coeff::integer(n))
    }

    pub fn constant(ctx: &Arc<NovCtx>, c: Coeff) -> Self {
        Self::monomial(ctx, Valuation::zero(), c).expect("zero valuation compares exactly")
    }

    /// `c · T^v`, or zero when `v` is at or above the cutoff.
    pub fn monomial(ctx: &Arc<NovCtx>, v: Valuation, c: Coeff) -> Result<Self, ExactError> {
        if c.is_zero(ctx.eps) || !ctx.below_cutoff(&v)? {
            return Ok(Self::zero(ctx));
        }
        Ok(Novikov { ctx: ctx.clone(), terms: vec![(v, c)] })
    }

    /// Canonical scalar from arbitrary terms: merges equal valuations, drops
    /// zeros and truncated terms, sorts.
    pub fn from_terms<I: IntoIterator<Item = (Valuation, Coeff)>>(ctx: &Arc<NovCtx>, terms: I) -> Result<Self, ExactError> {
        let mut m: BTreeMap<Valuation, Coeff> = BTreeMap::new();
        for (v, c) in terms {
            let e = m.entry(v).or_insert_with(Coeff::zero);
            *e = e.add(&c, ctx.eps);
        }
        let mut out = Vec::with_capacity(m.len());
        for (v, c) in m {
            if !c.is_zero(ctx.eps) && ctx.below_cutoff(&v)? {
                out.push((v, c));
            }
        }
        sort_by_valuation(ctx, &mut out)?;
        Ok(Novikov { ctx: ctx.clone(), terms: out })
    }

    /// Re-canonicalizes the term list.
    pub fn normalize(&self) -> Result<Self, ExactError> {
        Self::from_terms(&self.ctx, self.terms.iter().cloned())
    }

    pub fn ctx(&self) -> &Arc<NovCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Valuation, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ctx(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx)
            || (Arc::ptr_eq(&self.ctx.basis, &other.ctx.basis) && self.ctx.cutoff == other.ctx.cutoff)
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if !Arc::ptr_eq(&self.ctx.basis, &other.ctx.basis) {
            return Err(ExactError::BasisMismatch);
        }
        if self.ctx.cutoff != other.ctx.cutoff {
            return Err(ExactError::CutoffMismatch);
        }
        Ok(())
    }

    /// Leading valuation.
    pub fn val(&self) -> Result<Valuation, ExactError> {
        self.terms.first().map(|(v, _)| v.clone()).ok_or(ExactError::ZeroHasNoValuation)
    }

    /// Leading term `(valuation, coefficient)`.
    pub fn leading(&self) -> Option<&(Valuation, Coeff)> {
        self.terms.first()
    }

    /// Coefficient of `T^0`.
    pub fn constant_coeff(&self) -> Coeff {
        self.coeff_at(&Valuation::zero())
    }

    pub fn coeff_at(&self, v: &Valuation) -> Coeff {
        self.terms.iter().find(|(w, _)| w == v).map(|(_, c)| *c).unwrap_or_else(Coeff::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let eps = self.ctx.eps;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (va, ca) = &self.terms[i];
            let (vb, cb) = &other.terms[j];
            match self.ctx.compare(va, vb)? {
                Ordering::Less => {
                    out.push((va.clone(), *ca));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb.clone(), *cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca.add(cb, eps);
                    if !c.is_zero(eps) {
                        out.push((va.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Novikov { ctx: self.ctx.clone(), terms: out })
    }

    pub fn neg(&self) -> Self {
        Novikov { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(v, c)| (v.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    /// Multiplication by `c · T^v`.
    pub fn mul_monomial(&self, v: &Valuation, c: &Coeff) -> Result<Self, ExactError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (w, d) in &self.terms {
            let s = w.add(v);
            if !self.ctx.below_cutoff(&s)? {
                break;
            }
            let p = d.mul(c);
            if !p.is_zero(self.ctx.eps) {
                out.push((s, p));
            }
        }
        Ok(Novikov { ctx: self.ctx.clone(), terms: out })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero(self.ctx.eps) {
            return Self::zero(&self.ctx);
        }
        Novikov { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(v, d)| (v.clone(), d.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        if self.terms.len() == 1 {
            let (v, c) = &self.terms[0];
            return other.mul_monomial(v, c);
        }
        if other.terms.len() == 1 {
            let (v, c) = &other.terms[0];
            return self.mul_monomial(v, c);
        }
        let mut pairs = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (va, ca) in &self.terms {
            for (vb, cb) in &other.terms {
                pairs.push((va.add(vb), ca.mul(cb)));
            }
        }
        Self::from_terms(&self.ctx, pairs)
    }

    pub fn pow(&self, n: u32) -> Result<Self, ExactError> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse by geometric series.
    ///
    /// Writing `x = c T^v (1 + u)`, the series of `(−u)ⁿ` is summed to cutoff
    /// `C + max(v, 0)`, so `x · x⁻¹ − 1` only has terms of valuation `≥ C − |v|`.
    pub fn invert(&self) -> Result<Self, ExactError> {
        let (v, c) = self.leading().cloned().ok_or(ExactError::ZeroDivision)?;
        let cinv = c.inv().ok_or(ExactError::ZeroDivision)?;
        let shift = if self.ctx.compare(&v, &Valuation::zero())? == Ordering::Greater { v.clone() } else { Valuation::zero() };
        let wide = self.ctx.with_cutoff(self.ctx.cutoff.add(&shift));
        let neg_v = v.neg();
        let u_terms: Vec<(Valuation, Coeff)> =
            self.terms[1..].iter().map(|(w, d)| (w.add(&neg_v), d.mul(&cinv))).collect();
        let u = Novikov::from_terms(&wide, u_terms)?;
        let minus_u = u.neg();
        let mut sum = Novikov::one(&wide);
        let mut power = Novikov::one(&wide);
        loop {
            power = power.mul(&minus_u)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        let shifted: Vec<(Valuation, Coeff)> = sum.terms.iter().map(|(w, d)| (w.add(&neg_v), d.mul(&cinv))).collect();
        let mut out = Vec::with_capacity(shifted.len());
        for (w, d) in shifted {
            if !self.ctx.below_cutoff(&w)? {
                break;
            }
            out.push((w, d));
        }
        Ok(Novikov { ctx: self.ctx.clone(), terms: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        self.mul(&other.invert()?)
    }

    /// Same scalar reinterpreted in another context over the same basis, truncated
    /// to its cutoff.
    pub fn recast(&self, ctx: &Arc<NovCtx>) -> Result<Self, ExactError> {
        if !Arc::ptr_eq(&self.ctx.basis, &ctx.basis) {
            return Err(ExactError::BasisMismatch);
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (v, c) in &self.terms {
            if !ctx.below_cutoff(v)? {
                break;
            }
            out.push((v.clone(), *c));
        }
        Ok(Novikov { ctx: ctx.clone(), terms: out })
    }

    /// Drops every term with valuation at or above `bound`.
    pub fn truncate_at(&self, bound: &Valuation) -> Result<Self, ExactError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (v, c) in &self.terms {
            if self.ctx.compare(v, bound)? != Ordering::Less {
                break;
            }
            out.push((v.clone(), *c));
        }
        Ok(Novikov { ctx: self.ctx.clone(), terms: out })
    }

    /// Whether every term has valuation at or above `bound`.
    pub fn vanishes_below(&self, bound: &Valuation) -> Result<bool, ExactError> {
        match self.leading() {
            None => Ok(true),
            Some((v, _)) => Ok(self.ctx.compare(v, bound)? != Ordering::Less),
        }
    }

    /// Constant rational shortcut used by the exact solvers.
    pub fn as_rational(&self) -> Option<Rational64> {
        match self.terms.as_slice() {
            [] => Some(Rational64::from_integer(0)),
            [(v, c)] if v.is_zero() => {
                let t = c.exact?;
                let one = Rational64::from_integer(1);
                if t.phase == Rational64::from_integer(0) {
                    Some(t.modulus)
                } else if t.phase == one {
                    Some(-t.modulus)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let basis = &self.ctx.basis;
        let terms: Vec<Value> =
            self.terms.iter().map(|(v, c)| json!({ "val": v.to_json(basis), "coeff": c.to_json() })).collect();
        Value::Array(terms)
    }

    pub fn from_json(ctx: &Arc<NovCtx>, v: &Value) -> Result<Self, ExactError> {
        let arr = v.as_array().ok_or_else(|| ExactError::Parse("scalar must be an array".into()))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let val = Valuation::from_json(&ctx.basis, t.get("val").ok_or_else(|| ExactError::Parse("term val".into()))?)?;
            let c = Coeff::from_json(t.get("coeff").ok_or_else(|| ExactError::Parse("term coeff".into()))?)?;
            terms.push((val, c));
        }
        Self::from_terms(ctx, terms)
    }

    /// Compact text such as `1 - T^{2} + (0.5+0.866i)T^{pi}`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let basis = &self.ctx.basis;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, c)| {
                let cs = match c.as_rational_string() {
                    Some(s) => s,
                    None => format!("({:.6}{:+.6}i)", c.z.re, c.z.im),
                };
                if v.is_zero() {
                    cs
                } else {
                    format!("{cs}*T^{{{}}}", v.display(basis))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl Coeff {
    fn as_rational_string(&self) -> Option<String> {
        let t = self.exact?;
        if t.phase == Rational64::from_integer(0) {
            Some(t.modulus.to_string())
        } else if t.phase == Rational64::from_integer(1) {
            Some(format!("-{}", t.modulus))
        } else {
            Some(format!("{}*e^(i*pi*{})", t.modulus, t.phase))
        }
    }
}
