//! Exact algebra in `𝕂[z₁^±, z₂^±]/(f)` over the Novikov field for curves of
//! degree one in `z₂`.
//!
//! With `f = A(z₁) + B(z₁)z₂` the quotient is the ring of rational functions in
//! `z₁` regular away from `0`, `∞` and the roots of `A` and `B`. Elements are
//! kept in partial-fraction normal form: a Laurent polynomial in `z₁` plus
//! principal parts `Σ c_j (z₁ − ρ)^{−j}` at each root `ρ`.

mod candidates;
mod ends;
mod linalg;
mod pop;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{Coeff, ExactError, NovCtx, Novikov, Provider, Valuation, ValuationBasis};
use crate::tropical::{TropCurve, TropError};

pub use candidates::{hms_lq_candidates, pants_candidates};
pub use ends::{end_parametrization, pole_profile, EndParametrization, PoleProfile, Puncture};
pub use linalg::{
    filtered_dim, structure_constants, verify_basis, BasisVerification, Echelon, FilteredDim, StructureConstants, Window,
};
pub use pop::{
    pop_generator, pop_module_table, solve_pop_coefficients, solve_pop_equation, Ansatz, PopGenerator, PopSolve,
    SignedMonomial,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MirrorError {
    #[error("f is not of degree one in z2 after clearing a monomial factor")]
    NotLinearInZ2,
    #[error("roots not resolvable: {0}")]
    RootsNotResolvable(String),
    #[error("parameter {0} is not bound to a single rational value")]
    UnboundParameter(String),
    #[error("cutoff exhausted: {0}")]
    CutoffExhausted(String),
    #[error("expected {expected} candidates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies at a puncture: {0}")]
    AtPuncture(String),
    #[error("point is not on the curve to the cutoff")]
    NotOnCurve,
    #[error("the function is zero")]
    ZeroFunction,
    #[error("negative gap: j1 = {j1} < j0 = {j0}")]
    NegativeGap { j0: i64, j1: i64 },
    #[error("no admissible solution: {0}")]
    NoAdmissibleSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("end has no puncture on this presentation: {0}")]
    EndNotFound(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Trop(#[from] TropError),
}

pub type Result<T> = std::result::Result<T, MirrorError>;

/// Which factor of `f = A + B z₂` a root belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootOf {
    A,
    B,
}

impl RootOf {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootOf::A => "A",
            RootOf::B => "B",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Novikov,
    pub of: RootOf,
}

/// Normal-form coordinate: `z₁^n` or `(z₁ − ρ_r)^{−j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Laurent(i64),
    Pole(usize, u32),
}

impl Coord {
    pub fn label(&self) -> String {
        match self {
            Coord::Laurent(n) => format!("z1^{n}"),
            Coord::Pole(r, j) => format!("(z1-r{r})^-{j}"),
        }
    }
}

/// An element of the quotient ring in partial-fraction normal form.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuotientElement {
    terms: BTreeMap<Coord, Novikov>,
}

impl QuotientElement {
    pub fn zero() -> Self {
        QuotientElement { terms: BTreeMap::new() }
    }

    pub fn single(c: Coord, x: Novikov) -> Self {
        let mut e = Self::zero();
        e.push(c, x);
        e
    }

    fn push(&mut self, c: Coord, x: Novikov) {
        if x.is_zero() {
            return;
        }
        self.terms.insert(c, x);
    }

    /// Adds `x` to the coefficient of `c`.
    fn accumulate(&mut self, c: Coord, x: &Novikov) -> Result<()> {
        if x.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.get(&c) {
            Some(y) => y.add(x)?,
            None => x.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&c);
        } else {
            self.terms.insert(c, sum);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Coord, Novikov> {
        &self.terms
    }

    pub fn coeff(&self, c: &Coord) -> Option<&Novikov> {
        self.terms.get(c)
    }

    /// Coefficients of the powers of `z₁`.
    pub fn laurent_part(&self) -> BTreeMap<i64, Novikov> {
        self.terms
            .iter()
            .filter_map(|(c, x)| match c {
                Coord::Laurent(n) => Some((*n, x.clone())),
                Coord::Pole(..) => None,
            })
            .collect()
    }

    /// Coefficients of `(z₁ − ρ_r)^{−j}`.
    pub fn pole_part(&self, r: usize) -> BTreeMap<u32, Novikov> {
        self.terms
            .iter()
            .filter_map(|(c, x)| match c {
                Coord::Pole(s, j) if *s == r => Some((*j, x.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (c, x) in &o.terms {
            out.accumulate(*c, x)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        QuotientElement { terms: self.terms.iter().map(|(c, x)| (*c, x.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Novikov) -> Result<Self> {
        let mut out = Self::zero();
        for (c, x) in &self.terms {
            out.push(*c, x.mul(s)?);
        }
        Ok(out)
    }

    /// Whether every coefficient has valuation at or above `bound`.
    pub fn vanishes_below(&self, bound: &Valuation) -> Result<bool> {
        for x in self.terms.values() {
            if !x.vanishes_below(bound)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(c, x)| json!({ "coord": c.label(), "coeff": x.to_json() })).collect();
        Value::Array(terms)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, x)| format!("({})*{}", x.display(), c.label())).collect();
        parts.join(" + ")
    }
}

/// A Laurent polynomial in `z₁, z₂` with Novikov coefficients.
pub type LaurentPoly = BTreeMap<[i64; 2], Novikov>;

/// The basis used by the mirror side: the single generator `pi`.
pub fn mirror_basis() -> Arc<ValuationBasis> {
    Arc::new(ValuationBasis::new(vec![("pi".into(), Provider::Pi)]).expect("pi basis is valid"))
}

/// `f = A(z₁) + B(z₁)z₂` with its resolved roots and the cached images of `z₂^{±1}`.
#[derive(Clone, Debug)]
pub struct CurvePresentation {
    pub name: String,
    pub ctx: Arc<NovCtx>,
    /// Equality decisions are made modulo `T^cutoff`.
    pub cutoff: Valuation,
    pub a_poly: BTreeMap<i64, Novikov>,
    pub b_poly: BTreeMap<i64, Novikov>,
    pub roots: Vec<Root>,
    /// Named scalars accepted by [`parse_laurent`].
    pub constants: Vec<(String, Novikov)>,
    /// Monomial factor `z₂^{shift}` removed from the input polynomial.
    pub z2_shift: i64,
    z2: QuotientElement,
    z2_inv: QuotientElement,
}

/// Generalized binomial coefficient `n(n−1)⋯(n−k+1)/k!` for any integer `n`.
pub fn binom(n: i64, k: u32) -> i64 {
    let mut c: i128 = 1;
    for i in 0..k as i128 {
        c = c * (n as i128 - i) / (i + 1);
    }
    c as i64
}

fn int(ctx: &Arc<NovCtx>, n: i64) -> Novikov {
    Novikov::integer(ctx, n)
}

/// `[1, x, x², …, xⁿ]`.
fn powers(x: &Novikov, n: usize) -> Result<Vec<Novikov>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Novikov::one(x.ctx()));
    for i in 0..n {
        let next = out[i].mul(x)?;
        out.push(next);
    }
    Ok(out)
}

/// Finite pole centre: the origin (`z₁^{−k}`) or a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Center {
    Origin,
    Root(usize),
}

impl Center {
    fn coord(self, k: u32) -> Coord {
        match self {
            Center::Origin => Coord::Laurent(-(k as i64)),
            Center::Root(r) => Coord::Pole(r, k),
        }
    }
}

/// Resolves `c₀ z^s + c₁ z^{s+1}` or `c z^s` into a leading coefficient, a
/// monomial shift and an optional root.
fn factor_linear(p: &BTreeMap<i64, Novikov>, which: &str) -> Result<(Novikov, i64, Option<Novikov>)> {
    let keys: Vec<i64> = p.keys().copied().collect();
    match keys.as_slice() {
        [s] => Ok((p[s].clone(), *s, None)),
        [s, t] if *t == *s + 1 => {
            let lead = p[t].clone();
            let root = p[s].neg().div(&lead)?;
            Ok((lead, *s, Some(root)))
        }
        _ => Err(MirrorError::RootsNotResolvable(format!(
            "{which} has support {keys:?}; only a monomial times a linear factor is supported"
        ))),
    }
}

impl CurvePresentation {
    /// Presents `f = A + B z₂`; `A` and `B` are polynomials in `z₁` given by
    /// exponent → coefficient, each a monomial times at most a linear factor.
    pub fn from_parts(
        name: &str,
        ctx: &Arc<NovCtx>,
        cutoff: Valuation,
        a_poly: BTreeMap<i64, Novikov>,
        b_poly: BTreeMap<i64, Novikov>,
    ) -> Result<Self> {
        let a_poly: BTreeMap<i64, Novikov> = a_poly.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let b_poly: BTreeMap<i64, Novikov> = b_poly.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if a_poly.is_empty() || b_poly.is_empty() {
            return Err(MirrorError::NotLinearInZ2);
        }
        let (a_lead, a_shift, a_root) = factor_linear(&a_poly, "A")?;
        let (b_lead, b_shift, b_root) = factor_linear(&b_poly, "B")?;
        let mut roots = Vec::new();
        if let Some(v) = a_root {
            roots.push(Root { value: v, of: RootOf::A });
        }
        if let Some(v) = b_root {
            roots.push(Root { value: v, of: RootOf::B });
        }
        let mut pres = CurvePresentation {
            name: name.to_string(),
            ctx: ctx.clone(),
            cutoff,
            a_poly,
            b_poly,
            roots,
            constants: Vec::new(),
            z2_shift: 0,
            z2: QuotientElement::zero(),
            z2_inv: QuotientElement::zero(),
        };
        if pres.roots.len() == 2 {
            let d = pres.roots[0].value.sub(&pres.roots[1].value)?;
            if pres.negligible(&d, &pres.roots[0].value)? {
                return Err(MirrorError::RootsNotResolvable("A and B share a root, so f is reducible".into()));
            }
        }
        for (i, r) in pres.roots.clone().iter().enumerate() {
            pres.constants.push((format!("r{i}"), r.value.clone()));
        }
        let a_el = pres.poly_element(&pres.a_poly)?;
        let b_el = pres.poly_element(&pres.b_poly)?;
        let a_inv = pres.inverse_of_factored(&a_lead, a_shift, pres.root_index(RootOf::A))?;
        let b_inv = pres.inverse_of_factored(&b_lead, b_shift, pres.root_index(RootOf::B))?;
        pres.z2 = pres.mul(&a_el, &b_inv)?.neg();
        pres.z2_inv = pres.mul(&b_el, &a_inv)?.neg();
        Ok(pres)
    }

    /// `1 − z₁ − z₂`.
    pub fn pants(cutoff: Valuation) -> Result<Self> {
        present_curve(&TropCurve::pants(), cutoff)
    }

    /// `f_Q = 1 − z₁ − z₂ + Q⁻¹z₁z₂` with `Q = T^{−2π log|q|} e^{iπ·argq}`.
    pub fn f_q(logq: Rational64, argq_pi: Rational64, cutoff: Valuation) -> Result<Self> {
        let mut p = present_curve(&TropCurve::lq(logq, argq_pi), cutoff)?;
        p.name = "f_Q".into();
        let q = p.root_value(RootOf::B).expect("f_Q has a root of B").clone();
        p.constants.push(("Q".into(), q));
        Ok(p)
    }

    fn root_index(&self, of: RootOf) -> Option<usize> {
        self.roots.iter().position(|r| r.of == of)
    }

    pub fn root_value(&self, of: RootOf) -> Option<&Novikov> {
        self.root_index(of).map(|i| &self.roots[i].value)
    }

    pub fn constant(&self, name: &str) -> Option<&Novikov> {
        self.constants.iter().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    /// `lead · z^shift · (z − ρ)` inverted in normal form.
    fn inverse_of_factored(&self, lead: &Novikov, shift: i64, root: Option<usize>) -> Result<QuotientElement> {
        let inv = lead.invert()?;
        let mono = QuotientElement::single(Coord::Laurent(-shift), inv);
        match root {
            None => Ok(mono),
            Some(r) => self.mul(&mono, &QuotientElement::single(Coord::Pole(r, 1), self.one_scalar())),
        }
    }

    fn poly_element(&self, p: &BTreeMap<i64, Novikov>) -> Result<QuotientElement> {
        let mut e = QuotientElement::zero();
        for (n, x) in p {
            e.accumulate(Coord::Laurent(*n), x)?;
        }
        Ok(e)
    }

    pub fn one_scalar(&self) -> Novikov {
        Novikov::one(&self.ctx)
    }

    pub fn scalar(&self, n: i64) -> Novikov {
        int(&self.ctx, n)
    }

    pub fn one(&self) -> QuotientElement {
        QuotientElement::single(Coord::Laurent(0), self.one_scalar())
    }

    pub fn constant_element(&self, c: &Novikov) -> QuotientElement {
        QuotientElement::single(Coord::Laurent(0), c.clone())
    }

    pub fn z1_pow(&self, n: i64) -> QuotientElement {
        QuotientElement::single(Coord::Laurent(n), self.one_scalar())
    }

    pub fn z2(&self) -> &QuotientElement {
        &self.z2
    }

    pub fn z2_inv(&self) -> &QuotientElement {
        &self.z2_inv
    }

    /// Whether `x` is zero modulo `T^cutoff` relative to the scale `reference`.
    pub fn negligible(&self, x: &Novikov, reference: &Novikov) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let base = match reference.leading() {
            Some((v, _)) => v.clone(),
            None => Valuation::zero(),
        };
        Ok(x.vanishes_below(&base.add(&self.cutoff))?)
    }

    fn center_value(&self, c: Center) -> Novikov {
        match c {
            Center::Origin => Novikov::zero(&self.ctx),
            Center::Root(r) => self.roots[r].value.clone(),
        }
    }

    /// `(z − a)^{−m}(z − b)^{−n}` for distinct centres.
    fn pole_pole(&self, a: Center, m: u32, b: Center, n: u32) -> Result<QuotientElement> {
        let d = self.center_value(a).sub(&self.center_value(b))?;
        let dinv = d.invert()?;
        let top = (m + n) as usize;
        let pd = powers(&dinv, top)?;
        let pnd = powers(&dinv.neg(), top)?;
        let mut out = QuotientElement::zero();
        for k in 1..=m {
            let c = binom((n + m - k - 1) as i64, m - k) * if (m - k) % 2 == 0 { 1 } else { -1 };
            let x = pd[(n + m - k) as usize].mul(&self.scalar(c))?;
            out.accumulate(a.coord(k), &x)?;
        }
        for k in 1..=n {
            let c = binom((m + n - k - 1) as i64, n - k) * if (n - k) % 2 == 0 { 1 } else { -1 };
            let x = pnd[(m + n - k) as usize].mul(&self.scalar(c))?;
            out.accumulate(b.coord(k), &x)?;
        }
        Ok(out)
    }

    /// `z^n (z − ρ_r)^{−j}` for `n ≥ 0`.
    fn poly_pole(&self, n: i64, r: usize, j: u32) -> Result<QuotientElement> {
        let rho = &self.roots[r].value;
        let nu = n as usize;
        let pr = powers(rho, nu)?;
        let pmr = powers(&rho.neg(), nu)?;
        let mut out = QuotientElement::zero();
        for i in 0..=nu {
            let c = pr[nu - i].mul(&self.scalar(binom(n, i as u32)))?;
            if (i as u32) < j {
                out.accumulate(Coord::Pole(r, j - i as u32), &c)?;
            } else {
                let e = i - j as usize;
                for t in 0..=e {
                    let x = c.mul(&pmr[e - t])?.mul(&self.scalar(binom(e as i64, t as u32)))?;
                    out.accumulate(Coord::Laurent(t as i64), &x)?;
                }
            }
        }
        Ok(out)
    }

    fn mul_coords(&self, a: Coord, b: Coord) -> Result<QuotientElement> {
        let one = self.one_scalar();
        match (a, b) {
            (Coord::Laurent(n), Coord::Laurent(m)) => Ok(QuotientElement::single(Coord::Laurent(n + m), one)),
            (Coord::Laurent(n), Coord::Pole(r, j)) | (Coord::Pole(r, j), Coord::Laurent(n)) => {
                if n >= 0 {
                    self.poly_pole(n, r, j)
                } else {
                    self.pole_pole(Center::Origin, (-n) as u32, Center::Root(r), j)
                }
            }
            (Coord::Pole(r, i), Coord::Pole(s, j)) if r == s => Ok(QuotientElement::single(Coord::Pole(r, i + j), one)),
            (Coord::Pole(r, i), Coord::Pole(s, j)) => self.pole_pole(Center::Root(r), i, Center::Root(s), j),
        }
    }

    pub fn mul(&self, a: &QuotientElement, b: &QuotientElement) -> Result<QuotientElement> {
        let mut out = QuotientElement::zero();
        for (ca, xa) in &a.terms {
            for (cb, xb) in &b.terms {
                let s = xa.mul(xb)?;
                if s.is_zero() {
                    continue;
                }
                let prod = self.mul_coords(*ca, *cb)?;
                for (c, x) in &prod.terms {
                    out.accumulate(*c, &x.mul(&s)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &QuotientElement, n: u32) -> Result<QuotientElement> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `z₂^m` in normal form.
    pub fn z2_pow(&self, m: i64) -> Result<QuotientElement> {
        let base = if m >= 0 { &self.z2 } else { &self.z2_inv };
        self.pow(base, m.unsigned_abs() as u32)
    }

    /// `z₁^{m₁} z₂^{m₂}` in normal form.
    pub fn monomial(&self, m1: i64, m2: i64) -> Result<QuotientElement> {
        self.mul(&self.z1_pow(m1), &self.z2_pow(m2)?)
    }

    /// Normal form of a Laurent polynomial in `z₁, z₂`, without the stability check.
    pub fn reduce_unchecked(&self, g: &LaurentPoly) -> Result<QuotientElement> {
        let mut z2_cache: BTreeMap<i64, QuotientElement> = BTreeMap::new();
        let mut out = QuotientElement::zero();
        for ([m1, m2], c) in g {
            if c.is_zero() {
                continue;
            }
            if !z2_cache.contains_key(m2) {
                z2_cache.insert(*m2, self.z2_pow(*m2)?);
            }
            let term = self.mul(&self.z1_pow(*m1), &z2_cache[m2])?.scale(c)?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Normal form of a Laurent polynomial in `z₁, z₂`.
    ///
    /// The result is recomputed with the working truncation raised by `cutoff`;
    /// any disagreement below `T^cutoff` is reported as [`MirrorError::CutoffExhausted`].
    pub fn reduce(&self, g: &LaurentPoly) -> Result<QuotientElement> {
        let out = self.reduce_unchecked(g)?;
        let wide = self.rebuild(self.ctx.cutoff.add(&self.cutoff))?;
        let mut gw = LaurentPoly::new();
        for (m, c) in g {
            gw.insert(*m, c.recast(&wide.ctx)?);
        }
        let hi = wide.reduce_unchecked(&gw)?;
        let back = self.recast_element(&hi)?;
        let diff = out.sub(&back)?;
        if !self.is_zero(&diff)? {
            let bad = diff.terms.keys().next().map(|c| c.label()).unwrap_or_default();
            return Err(MirrorError::CutoffExhausted(format!(
                "coefficient of {bad} changes when the working truncation is raised"
            )));
        }
        Ok(out)
    }

    /// The same curve over a context with another working truncation.
    pub fn rebuild(&self, working: Valuation) -> Result<Self> {
        let ctx = self.ctx.with_cutoff(working);
        let recast = |p: &BTreeMap<i64, Novikov>| -> Result<BTreeMap<i64, Novikov>> {
            p.iter().map(|(n, x)| Ok((*n, x.recast(&ctx)?))).collect()
        };
        let mut p = Self::from_parts(&self.name, &ctx, self.cutoff.clone(), recast(&self.a_poly)?, recast(&self.b_poly)?)?;
        p.z2_shift = self.z2_shift;
        p.constants = self.constants.iter().map(|(n, x)| Ok((n.clone(), x.recast(&ctx)?))).collect::<Result<_>>()?;
        Ok(p)
    }

    /// Reinterprets an element built over another context of the same basis.
    pub fn recast_element(&self, e: &QuotientElement) -> Result<QuotientElement> {
        let mut out = QuotientElement::zero();
        for (c, x) in &e.terms {
            out.push(*c, x.recast(&self.ctx)?);
        }
        Ok(out)
    }

    /// Whether `e` is zero modulo `T^cutoff`.
    pub fn is_zero(&self, e: &QuotientElement) -> Result<bool> {
        e.vanishes_below(&self.cutoff)
    }

    /// Whether two elements agree modulo `T^cutoff`.
    pub fn equal(&self, a: &QuotientElement, b: &QuotientElement) -> Result<bool> {
        self.is_zero(&a.sub(b)?)
    }

    /// `f` itself as a Laurent polynomial (after the monomial shift).
    pub fn f_poly(&self) -> LaurentPoly {
        let mut g = LaurentPoly::new();
        for (n, x) in &self.a_poly {
            g.insert([*n, 0], x.clone());
        }
        for (n, x) in &self.b_poly {
            g.insert([*n, 1], x.clone());
        }
        g
    }

    /// `f(z₁, z₂)` as a scalar.
    pub fn eval_f(&self, z1: &Novikov, z2: &Novikov) -> Result<Novikov> {
        let a = eval_poly(&self.a_poly, z1)?;
        let b = eval_poly(&self.b_poly, z1)?;
        Ok(a.add(&b.mul(z2)?)?)
    }

    /// The point of the curve over `z₁`.
    pub fn point_over(&self, z1: &Novikov) -> Result<[Novikov; 2]> {
        let b = eval_poly(&self.b_poly, z1)?;
        if self.negligible(&b, &self.one_scalar())? {
            return Err(MirrorError::AtPuncture("B(z1) = 0".into()));
        }
        let a = eval_poly(&self.a_poly, z1)?;
        Ok([z1.clone(), a.neg().div(&b)?])
    }

    /// Evaluates a normal-form element at a point `ρ = (z₁, z₂)` of the curve.
    pub fn evaluate(&self, g: &QuotientElement, rho: &[Novikov; 2]) -> Result<Novikov> {
        let [z1, z2] = rho;
        if z1.is_zero() {
            return Err(MirrorError::AtPuncture("z1 = 0".into()));
        }
        let fz = self.eval_f(z1, z2)?;
        let scale = eval_poly(&self.a_poly, z1)?;
        let scale = if scale.is_zero() { self.one_scalar() } else { scale };
        if !self.negligible(&fz, &scale)? {
            return Err(MirrorError::NotOnCurve);
        }
        let mut inv_cache: BTreeMap<usize, Novikov> = BTreeMap::new();
        let mut acc = Novikov::zero(&self.ctx);
        for (c, x) in &g.terms {
            let v = match c {
                Coord::Laurent(n) if *n >= 0 => z1.pow(*n as u32)?,
                Coord::Laurent(n) => z1.invert()?.pow((-n) as u32)?,
                Coord::Pole(r, j) => {
                    if !inv_cache.contains_key(r) {
                        let d = z1.sub(&self.roots[*r].value)?;
                        if self.negligible(&d, z1)? {
                            return Err(MirrorError::AtPuncture(format!("z1 = r{r}")));
                        }
                        inv_cache.insert(*r, d.invert()?);
                    }
                    inv_cache[r].pow(*j)?
                }
            };
            acc = acc.add(&v.mul(x)?)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let poly = |p: &BTreeMap<i64, Novikov>| -> Value {
            Value::Array(p.iter().map(|(n, x)| json!({ "exp": n, "coeff": x.to_json() })).collect())
        };
        json!({
            "name": self.name,
            "A": poly(&self.a_poly),
            "B": poly(&self.b_poly),
            "roots": self.roots.iter().map(|r| json!({ "of": r.of.as_str(), "value": r.value.to_json(), "display": r.value.display() })).collect::<Vec<_>>(),
            "cutoff": self.cutoff.display(&self.ctx.basis).to_string(),
            "working_cutoff": self.ctx.cutoff.display(&self.ctx.basis).to_string(),
        })
    }
}

/// `Σ c_n zⁿ` at a scalar `z`.
pub fn eval_poly(p: &BTreeMap<i64, Novikov>, z: &Novikov) -> Result<Novikov> {
    let mut acc = Novikov::zero(z.ctx());
    let mut zinv: Option<Novikov> = None;
    for (n, x) in p {
        let zp = if *n >= 0 {
            z.pow(*n as u32)?
        } else {
            if zinv.is_none() {
                zinv = Some(z.invert()?);
            }
            zinv.as_ref().expect("set above").pow((-n) as u32)?
        };
        acc = acc.add(&zp.mul(x)?)?;
    }
    Ok(acc)
}

/// Converts a curve with point-valued parameters to a presentation over `Λ`.
///
/// A coefficient `c` becomes `T^{−2π log|c|}·(c/|c|)`; the monomial factors
/// `z₁^{min m₁}` and `z₂^{min m₂}` are units and are cleared. The working
/// truncation is `2·cutoff`.
pub fn present_curve(curve: &TropCurve, cutoff: Valuation) -> Result<CurvePresentation> {
    let basis = mirror_basis();
    let working = cutoff.scale(Rational64::from_integer(2));
    let ctx = NovCtx::new(basis, working);
    let min2 = curve.terms.keys().map(|e| e[1]).min().unwrap_or(0);
    let max2 = curve.terms.keys().map(|e| e[1]).max().unwrap_or(0);
    if max2 - min2 != 1 {
        return Err(MirrorError::NotLinearInZ2);
    }
    let min1 = curve.terms.keys().map(|e| e[0]).min().unwrap_or(0);
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (e, c) in &curve.terms {
        let ln = curve.rational_value(&c.log_norm).ok_or_else(|| unbound(curve, &c.log_norm))?;
        let ph = curve.rational_value(&c.phase_pi).ok_or_else(|| unbound(curve, &c.phase_pi))?;
        let v = Valuation::generator(1, ln * Rational64::from_integer(-2));
        let x = Novikov::monomial(&ctx, v, Coeff::unit_pi(ph))?;
        let target = if e[1] == min2 { &mut a } else { &mut b };
        target.insert(e[0] - min1, x);
    }
    let mut p = CurvePresentation::from_parts(&curve.name, &ctx, cutoff, a, b)?;
    p.z2_shift = min2;
    Ok(p)
}

fn unbound(curve: &TropCurve, v: &Valuation) -> MirrorError {
    let name = v
        .terms()
        .iter()
        .filter(|(id, _)| *id != 0)
        .map(|(id, _)| curve.basis.symbol(*id).to_string())
        .find(|n| curve.param(n).and_then(|p| p.value()).is_none())
        .unwrap_or_else(|| "?".into());
    MirrorError::UnboundParameter(name)
}

/// Parses `"z1^-2 + 3/2*z1*z2 - Q*z2^2"` into a Laurent polynomial; the symbols
/// are `z1`, `z2` and the presentation's named constants.
pub fn parse_laurent(pres: &CurvePresentation, s: &str) -> Result<LaurentPoly> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(MirrorError::Parse("empty expression".into()));
    }
    let bytes = src.as_bytes();
    let mut pieces = Vec::new();
    let mut start = 0;
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            pieces.push(&src[start..i]);
            start = i;
        }
    }
    let mut out = LaurentPoly::new();
    for piece in pieces {
        let (neg, body) = match piece.as_bytes()[0] {
            b'-' => (true, &piece[1..]),
            b'+' => (false, &piece[1..]),
            _ => (false, piece),
        };
        if body.is_empty() {
            return Err(MirrorError::Parse(format!("dangling sign in {s:?}")));
        }
        let mut coeff = pres.one_scalar();
        let mut exp = [0i64; 2];
        for factor in body.split('*') {
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    (n, p.parse::<i64>().map_err(|_| MirrorError::Parse(format!("bad exponent in {factor:?}")))?)
                }
                None => (factor, 1),
            };
            match name {
                "z1" => exp[0] += power,
                "z2" => exp[1] += power,
                _ if name.starts_with(|c: char| c.is_ascii_digit()) => {
                    let r = crate::exactnum::parse_rational(name).map_err(|e| MirrorError::Parse(e.to_string()))?;
                    let x = Novikov::constant(&pres.ctx, Coeff::rational(r));
                    let x = if power >= 0 { x.pow(power as u32)? } else { x.invert()?.pow((-power) as u32)? };
                    coeff = coeff.mul(&x)?;
                }
                _ => {
                    let x = pres
                        .constant(name)
                        .ok_or_else(|| MirrorError::Parse(format!("unknown symbol {name:?}")))?
                        .clone();
                    let x = if power >= 0 { x.pow(power as u32)? } else { x.invert()?.pow((-power) as u32)? };
                    coeff = coeff.mul(&x)?;
                }
            }
        }
        if neg {
            coeff = coeff.neg();
        }
        let e = out.entry(exp).or_insert_with(|| Novikov::zero(&pres.ctx));
        *e = e.add(&coeff)?;
    }
    out.retain(|_, x| !x.is_zero());
    Ok(out)
}

/// Single-term Laurent polynomial `c·z₁^{m₁}z₂^{m₂}`.
pub fn laurent_term(c: Novikov, m1: i64, m2: i64) -> LaurentPoly {
    let mut g = LaurentPoly::new();
    if !c.is_zero() {
        g.insert([m1, m2], c);
    }
    g
}

/// Sum of `±z₁^{m₁}z₂^{m₂}` terms with integer coefficients.
pub fn laurent_from_ints(ctx: &Arc<NovCtx>, terms: &[(i64, i64, i64)]) -> LaurentPoly {
    let mut g = LaurentPoly::new();
    for &(c, m1, m2) in terms {
        let e = g.entry([m1, m2]).or_insert_with(|| Novikov::zero(ctx));
        *e = e.add(&int(ctx, c)).expect("same context");
    }
    g.retain(|_, x| !x.is_zero());
    g
}

#[cfg(test)]
mod tests;
