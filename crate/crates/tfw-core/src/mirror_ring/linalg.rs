//! Row echelon forms over `Λ` for normal-form coordinate vectors, filtered
//! monomial subspaces and basis checks.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{Coord, CurvePresentation, MirrorError, QuotientElement, Result};
use crate::exactnum::{Coeff, Novikov, Valuation};

/// A finite set of monomials `z₁^{m₁}z₂^{m₂}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    /// `−k < m₁, m₂ ≤ k`.
    HalfOpenBox { k: i64 },
    /// `|m₁|, |m₂| ≤ k`.
    Square { k: i64 },
    /// `m₁ ≥ −k`, `m₂ ≥ −k`, `m₁ + m₂ ≤ k`.
    Pants { k: i64 },
    Explicit(Vec<[i64; 2]>),
}

impl Window {
    pub fn contains(&self, m: [i64; 2]) -> bool {
        match self {
            Window::HalfOpenBox { k } => m.iter().all(|x| -k < *x && *x <= *k),
            Window::Square { k } => m.iter().all(|x| x.abs() <= *k),
            Window::Pants { k } => m[0] >= -k && m[1] >= -k && m[0] + m[1] <= *k,
            Window::Explicit(v) => v.contains(&m),
        }
    }

    pub fn k(&self) -> Option<i64> {
        match self {
            Window::HalfOpenBox { k } | Window::Square { k } | Window::Pants { k } => Some(*k),
            Window::Explicit(_) => None,
        }
    }

    /// The same family at another `k`; explicit windows are unchanged.
    pub fn with_k(&self, k: i64) -> Window {
        match self {
            Window::HalfOpenBox { .. } => Window::HalfOpenBox { k },
            Window::Square { .. } => Window::Square { k },
            Window::Pants { .. } => Window::Pants { k },
            Window::Explicit(v) => Window::Explicit(v.clone()),
        }
    }

    /// Members in basis-selection order: by `|m₂|`, then `|m₁|`, then lexicographically.
    pub fn monomials(&self) -> Vec<[i64; 2]> {
        let mut out: Vec<[i64; 2]> = match self {
            Window::Explicit(v) => v.clone(),
            _ => {
                let k = self.k().unwrap_or(0).max(0);
                let b = 2 * k + 1;
                let mut v = Vec::new();
                for m1 in -b..=b {
                    for m2 in -b..=b {
                        if self.contains([m1, m2]) {
                            v.push([m1, m2]);
                        }
                    }
                }
                v
            }
        };
        out.sort_by_key(|m| (m[1].abs(), m[0].abs(), m[0], m[1]));
        out.dedup();
        out
    }

    pub fn describe(&self) -> String {
        match self {
            Window::HalfOpenBox { k } => format!("-{k} < m1, m2 <= {k}"),
            Window::Square { k } => format!("|m1|, |m2| <= {k}"),
            Window::Pants { k } => format!("m1 >= -{k}, m2 >= -{k}, m1 + m2 <= {k}"),
            Window::Explicit(v) => format!("explicit {v:?}"),
        }
    }
}

type Vector = BTreeMap<Coord, Novikov>;

#[derive(Clone, Debug)]
struct Row {
    pivot: Coord,
    vec: Vector,
    /// Row as a combination of the normalized accepted originals.
    combo: Vec<Novikov>,
}

/// Incremental echelon form. Inputs are rescaled by a power of `T` so their
/// leading valuation is zero; an entry counts as zero when its valuation is at
/// least `cutoff` on that scale.
#[derive(Clone, Debug)]
pub struct Echelon {
    pres_cutoff: Valuation,
    rows: Vec<Row>,
    shifts: Vec<Valuation>,
}

fn leading_val(x: &Novikov) -> Option<&Valuation> {
    x.leading().map(|(v, _)| v)
}

impl Echelon {
    pub fn new(pres: &CurvePresentation) -> Self {
        Echelon { pres_cutoff: pres.cutoff.clone(), rows: Vec::new(), shifts: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<Coord> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    fn normalize(&self, pres: &CurvePresentation, e: &QuotientElement) -> Result<Option<(Vector, Valuation)>> {
        let mut min: Option<Valuation> = None;
        for x in e.terms().values() {
            if let Some(v) = leading_val(x) {
                min = match min {
                    None => Some(v.clone()),
                    Some(m) if pres.ctx.compare(v, &m)? == Ordering::Less => Some(v.clone()),
                    Some(m) => Some(m),
                };
            }
        }
        let Some(shift) = min else { return Ok(None) };
        let neg = shift.neg();
        let mut out = Vector::new();
        for (c, x) in e.terms() {
            let y = x.mul_monomial(&neg, &Coeff::one())?;
            if y.terms().len() != x.terms().len() {
                return Err(MirrorError::CutoffExhausted(format!(
                    "rescaling the coefficient of {} by T^({}) passes the working truncation",
                    c.label(),
                    neg.display(&pres.ctx.basis)
                )));
            }
            out.insert(*c, y);
        }
        Ok(Some((out, shift)))
    }

    fn negligible(&self, x: &Novikov) -> Result<bool> {
        Ok(x.vanishes_below(&self.pres_cutoff)?)
    }

    /// Reduces a normalized vector against the rows; returns the residual and
    /// the multipliers used.
    fn residual(&self, mut v: Vector) -> Result<(Vector, Vec<Novikov>)> {
        let mut mult = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let c = match v.get(&row.pivot) {
                Some(c) => c.clone(),
                None => {
                    mult.push(Novikov::zero(row.combo[0].ctx()));
                    continue;
                }
            };
            for (k, x) in &row.vec {
                let y = x.mul(&c)?;
                let cur = v.remove(k).unwrap_or_else(|| Novikov::zero(y.ctx()));
                let d = cur.sub(&y)?;
                if !d.is_zero() {
                    v.insert(*k, d);
                }
            }
            v.remove(&row.pivot);
            mult.push(c);
        }
        Ok((v, mult))
    }

    fn pick_pivot(&self, pres: &CurvePresentation, r: &Vector) -> Result<Option<Coord>> {
        let mut best: Option<(Coord, Valuation)> = None;
        for (c, x) in r {
            if self.negligible(x)? {
                continue;
            }
            let v = leading_val(x).expect("nonzero").clone();
            best = match best {
                None => Some((*c, v)),
                Some((bc, bv)) => {
                    if pres.ctx.compare(&v, &bv)? == Ordering::Less {
                        Some((*c, v))
                    } else {
                        Some((bc, bv))
                    }
                }
            };
        }
        Ok(best.map(|(c, _)| c))
    }

    /// Adds `e` if it is independent of the current rows; returns its pivot.
    pub fn insert(&mut self, pres: &CurvePresentation, e: &QuotientElement) -> Result<Option<Coord>> {
        let Some((v, shift)) = self.normalize(pres, e)? else { return Ok(None) };
        let (r, mult) = self.residual(v)?;
        let Some(p) = self.pick_pivot(pres, &r)? else { return Ok(None) };
        let s = r[&p].invert()?;
        let mut vec = Vector::new();
        for (c, x) in &r {
            if *c == p {
                continue;
            }
            let y = x.mul(&s)?;
            if !y.is_zero() {
                vec.insert(*c, y);
            }
        }
        vec.insert(p, Novikov::one(&pres.ctx));
        let n = self.shifts.len();
        let mut combo = vec![Novikov::zero(&pres.ctx); n + 1];
        combo[n] = s.clone();
        for (row, c) in self.rows.iter().zip(&mult) {
            if c.is_zero() {
                continue;
            }
            let f = c.mul(&s)?;
            for (j, m) in row.combo.iter().enumerate() {
                combo[j] = combo[j].sub(&m.mul(&f)?)?;
            }
        }
        self.rows.push(Row { pivot: p, vec, combo });
        self.shifts.push(shift);
        Ok(Some(p))
    }

    /// Coefficients of `e` in the accepted originals, or `None` outside the span.
    pub fn express(&self, pres: &CurvePresentation, e: &QuotientElement) -> Result<Option<Vec<Novikov>>> {
        let n = self.shifts.len();
        let zero = Novikov::zero(&pres.ctx);
        let Some((v, shift)) = self.normalize(pres, e)? else { return Ok(Some(vec![zero; n])) };
        let (r, mult) = self.residual(v)?;
        for x in r.values() {
            if !self.negligible(x)? {
                return Ok(None);
            }
        }
        let mut coeffs = vec![zero; n];
        for (row, c) in self.rows.iter().zip(&mult) {
            if c.is_zero() {
                continue;
            }
            for (j, m) in row.combo.iter().enumerate() {
                coeffs[j] = coeffs[j].add(&m.mul(c)?)?;
            }
        }
        let mut out = Vec::with_capacity(n);
        for (j, c) in coeffs.into_iter().enumerate() {
            let t = shift.sub(&self.shifts[j]);
            let y = c.truncate_at(&self.pres_cutoff)?.mul_monomial(&t, &Coeff::one())?;
            out.push(y);
        }
        Ok(Some(out))
    }
}

/// Dimension of the span of a monomial window with a triangular certificate.
#[derive(Clone, Debug)]
pub struct FilteredDim {
    pub window: Window,
    pub dim: usize,
    /// Monomials selected greedily, in selection order.
    pub basis: Vec<[i64; 2]>,
    /// Pivot coordinate of each selected monomial; every row vanishes on the
    /// pivots of the rows before it.
    pub pivots: Vec<Coord>,
    /// Monomials found dependent on earlier ones.
    pub dependent: Vec<[i64; 2]>,
    pub echelon: Echelon,
}

impl FilteredDim {
    pub fn to_json(&self) -> Value {
        json!({
            "window": self.window.describe(),
            "dim": self.dim,
            "basis": self.basis.iter().zip(&self.pivots).map(|(m, p)| json!({ "monomial": m, "pivot": p.label() })).collect::<Vec<_>>(),
            "dependent": self.dependent,
        })
    }
}

pub fn filtered_dim(pres: &CurvePresentation, window: &Window) -> Result<FilteredDim> {
    let mut ech = Echelon::new(pres);
    let mut basis = Vec::new();
    let mut pivots = Vec::new();
    let mut dependent = Vec::new();
    let mut z2_cache: BTreeMap<i64, QuotientElement> = BTreeMap::new();
    for m in window.monomials() {
        if !z2_cache.contains_key(&m[1]) {
            z2_cache.insert(m[1], pres.z2_pow(m[1])?);
        }
        let e = pres.mul(&pres.z1_pow(m[0]), &z2_cache[&m[1]])?;
        match ech.insert(pres, &e)? {
            Some(p) => {
                basis.push(m);
                pivots.push(p);
            }
            None => dependent.push(m),
        }
    }
    Ok(FilteredDim { window: window.clone(), dim: basis.len(), basis, pivots, dependent, echelon: ech })
}

/// Outcome of [`verify_basis`].
#[derive(Clone, Debug)]
pub struct BasisVerification {
    pub ok: bool,
    pub dim: usize,
    pub rank: usize,
    pub in_span: Vec<bool>,
    /// Row `i` expresses candidate `i` in the monomial basis of the window.
    pub transition: Vec<Option<Vec<Novikov>>>,
    pub basis: Vec<[i64; 2]>,
}

impl BasisVerification {
    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok,
            "dim": self.dim,
            "rank": self.rank,
            "in_span": self.in_span,
            "basis": self.basis,
            "transition": self.transition.iter().map(|r| match r {
                Some(row) => Value::Array(row.iter().map(|x| Value::String(x.display())).collect()),
                None => Value::Null,
            }).collect::<Vec<_>>(),
        })
    }
}

/// Whether `candidates` form a basis of the span of `window`.
pub fn verify_basis(pres: &CurvePresentation, candidates: &[QuotientElement], window: &Window) -> Result<BasisVerification> {
    let fd = filtered_dim(pres, window)?;
    if candidates.len() != fd.dim {
        return Err(MirrorError::DimensionMismatch { expected: fd.dim, got: candidates.len() });
    }
    let mut own = Echelon::new(pres);
    let mut in_span = Vec::with_capacity(candidates.len());
    let mut transition = Vec::with_capacity(candidates.len());
    for c in candidates {
        let t = fd.echelon.express(pres, c)?;
        in_span.push(t.is_some());
        transition.push(t);
        own.insert(pres, c)?;
    }
    let rank = own.rank();
    Ok(BasisVerification { ok: rank == fd.dim && in_span.iter().all(|b| *b), dim: fd.dim, rank, in_span, transition, basis: fd.basis })
}

/// Product of two monomials expanded in the greedy basis of a window.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub window: Window,
    pub product: QuotientElement,
    pub coefficients: Vec<([i64; 2], Novikov)>,
}

impl StructureConstants {
    pub fn to_json(&self) -> Value {
        json!({
            "window": self.window.describe(),
            "coefficients": self.coefficients.iter().map(|(m, c)| json!({ "monomial": m, "coeff": c.display() })).collect::<Vec<_>>(),
        })
    }
}

/// Expands `z₁^{i₁}z₂^{j₁}·z₁^{i₂}z₂^{j₂}`, enlarging `k` until the product lies in the window.
pub fn structure_constants(
    pres: &CurvePresentation,
    a: [i64; 2],
    b: [i64; 2],
    window: &Window,
) -> Result<StructureConstants> {
    let prod = [a[0] + b[0], a[1] + b[1]];
    let product = pres.monomial(prod[0], prod[1])?;
    let mut w = window.clone();
    for _ in 0..64 {
        if w.contains(prod) {
            let fd = filtered_dim(pres, &w)?;
            if let Some(coeffs) = fd.echelon.express(pres, &product)? {
                let coefficients =
                    fd.basis.iter().copied().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>();
                return Ok(StructureConstants { window: w, product, coefficients });
            }
        }
        match w.k() {
            Some(k) => w = w.with_k(k + 1),
            None => break,
        }
    }
    Err(MirrorError::CutoffExhausted(format!("product {prod:?} is not in the span of {}", w.describe())))
}
