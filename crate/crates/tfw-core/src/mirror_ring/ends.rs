//! Points of the mirror curve along a cylindrical end and the pole order of a
//! function at the puncture the end approaches.
//!
//! A fibre torus over `p ∈ ℝ²` corresponds to a point with
//! `val(ρ) = (−2πp₁, −2πp₂)`. Along an end with primitive ray direction `d`,
//! `p = p₀ + p_α d`, and the point tends to a puncture of the curve. In a local
//! parameter `t` at that puncture `val t = 2π·s·p_α + O(1)` with `s` the
//! nonzero entry of `|d|` that governs the approach.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde_json::{json, Value};

use super::{binom, powers, Coord, CurvePresentation, MirrorError, QuotientElement, Result, RootOf};
use crate::exactnum::{Coeff, Novikov, Valuation};
use crate::tropical::{EndSpec, TropCurve};

/// A puncture of the curve over the `z₁`-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Puncture {
    /// `z₁ → 0`, local parameter `t = z₁`.
    Origin,
    /// `z₁ → ∞`, local parameter `t = 1/z₁`.
    Infinity,
    /// `z₁ → ρ_r`, local parameter `t = z₁ − ρ_r`.
    Root(usize),
}

impl Puncture {
    pub fn label(&self) -> String {
        match self {
            Puncture::Origin => "z1 = 0".into(),
            Puncture::Infinity => "z1 = inf".into(),
            Puncture::Root(r) => format!("z1 = r{r}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EndParametrization {
    pub end: Option<EndSpec>,
    pub puncture: Puncture,
    /// `val t = 2π·scale·p_α`.
    pub scale: i64,
}

impl EndParametrization {
    pub fn at_puncture(puncture: Puncture, scale: i64) -> Self {
        EndParametrization { end: None, puncture, scale }
    }

    /// The point of the curve with local parameter `t = T^{2π·scale·p_α}·unit`.
    pub fn on_curve_point(&self, pres: &CurvePresentation, p_alpha: Rational64, unit: Coeff) -> Result<[Novikov; 2]> {
        let v = Valuation::generator(1, p_alpha * Rational64::from_integer(2 * self.scale));
        let t = Novikov::monomial(&pres.ctx, v, unit)?;
        let z1 = match self.puncture {
            Puncture::Origin => t,
            Puncture::Infinity => t.invert()?,
            Puncture::Root(r) => pres.roots[r].value.add(&t)?,
        };
        pres.point_over(&z1)
    }

    pub fn to_json(&self, curve: Option<&TropCurve>) -> Value {
        json!({
            "end": match (&self.end, curve) {
                (Some(e), Some(c)) => e.to_json(c),
                _ => Value::Null,
            },
            "puncture": self.puncture.label(),
            "scale": self.scale,
        })
    }
}

/// Matches a tropical end of `curve` to the puncture of `pres` it approaches.
pub fn end_parametrization(pres: &CurvePresentation, curve: &TropCurve, end: &EndSpec) -> Result<EndParametrization> {
    let d = end.ray_direction;
    let (puncture, scale) = if d[0] < 0 {
        (Puncture::Origin, -d[0])
    } else if d[0] > 0 {
        (Puncture::Infinity, d[0])
    } else {
        // z₁ stays finite: z₂ → 0 at a root of A, z₂ → ∞ at a root of B.
        let of = if d[1] < 0 { RootOf::A } else { RootOf::B };
        // α = (±1, 0) and α·p = log r fix p₁, hence val z₁ = −2πp₁.
        let p1 = curve.approx(&end.log_r) * end.alpha[0] as f64;
        let target = -2.0 * std::f64::consts::PI * p1;
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in pres.roots.iter().enumerate() {
            if r.of != of {
                continue;
            }
            let v = pres.ctx.basis.approx(&r.value.val()?);
            let dist = (v - target).abs();
            if best.map_or(true, |(_, b)| dist < b) {
                best = Some((i, dist));
            }
        }
        let (i, _) = best.ok_or_else(|| MirrorError::EndNotFound(format!("no root of {} for end {:?}", of.as_str(), end.alpha)))?;
        (Puncture::Root(i), d[1].abs())
    };
    Ok(EndParametrization { end: Some(end.clone()), puncture, scale })
}

/// Pole order of `g` at the puncture and the slope of `val g(ρ(p_α))`.
#[derive(Clone, Debug)]
pub struct PoleProfile {
    /// Order of the pole; negative for a zero.
    pub order: i64,
    /// `w` with `val g(ρ(p_α)) = −2πw·p_α + O(1)`.
    pub slope: i64,
    /// Leading coefficient of the expansion in the local parameter.
    pub leading: Novikov,
}

impl PoleProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "slope": self.slope,
            "leading": self.leading.display(),
            "leading_json": self.leading.to_json(),
        })
    }
}

/// Adds `c·tᵉ` to a series.
fn acc(series: &mut BTreeMap<i64, Novikov>, e: i64, c: Novikov) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    let cur = series.remove(&e);
    let s = match cur {
        Some(x) => x.add(&c)?,
        None => c,
    };
    if !s.is_zero() {
        series.insert(e, s);
    }
    Ok(())
}

/// Local expansion `Σ c_e tᵉ` of a normal-form element up to `t^{top}`.
fn expand(pres: &CurvePresentation, g: &QuotientElement, puncture: Puncture, top: i64) -> Result<BTreeMap<i64, Novikov>> {
    let mut series = BTreeMap::new();
    let int = |n: i64| pres.scalar(n);
    for (c, x) in g.terms() {
        match (puncture, c) {
            (Puncture::Origin, Coord::Laurent(n)) => acc(&mut series, *n, x.clone())?,
            (Puncture::Origin, Coord::Pole(r, j)) => {
                // (t − ρ)^{−j} = (−ρ)^{−j} Σ_m C(j+m−1, m) ρ^{−m} t^m
                let rho_inv = pres.roots[*r].value.invert()?;
                let base = rho_inv.neg().pow(*j)?;
                let top_m = top.max(0) as usize;
                let pw = powers(&rho_inv, top_m)?;
                for m in 0..=top_m {
                    let k = binom((*j as i64) + m as i64 - 1, m as u32);
                    acc(&mut series, m as i64, base.mul(&pw[m])?.mul(&int(k))?.mul(x)?)?;
                }
            }
            (Puncture::Infinity, Coord::Laurent(n)) => acc(&mut series, -*n, x.clone())?,
            (Puncture::Infinity, Coord::Pole(r, j)) => {
                // (1/t − ρ)^{−j} = Σ_m C(j+m−1, m) ρ^m t^{j+m}
                let jj = *j as i64;
                if top < jj {
                    continue;
                }
                let top_m = (top - jj) as usize;
                let pw = powers(&pres.roots[*r].value, top_m)?;
                for m in 0..=top_m {
                    let k = binom(jj + m as i64 - 1, m as u32);
                    acc(&mut series, jj + m as i64, pw[m].mul(&int(k))?.mul(x)?)?;
                }
            }
            (Puncture::Root(s), Coord::Laurent(n)) => {
                // (σ + t)^n = σ^n Σ_m C(n, m) σ^{−m} t^m
                let sigma = &pres.roots[s].value;
                let sinv = sigma.invert()?;
                let base = if *n >= 0 { sigma.pow(*n as u32)? } else { sinv.pow((-*n) as u32)? };
                let top_m = top.max(0) as usize;
                let pw = powers(&sinv, top_m)?;
                for m in 0..=top_m {
                    let k = binom(*n, m as u32);
                    if k == 0 {
                        continue;
                    }
                    acc(&mut series, m as i64, base.mul(&pw[m])?.mul(&int(k))?.mul(x)?)?;
                }
            }
            (Puncture::Root(s), Coord::Pole(r, j)) if *r == s => acc(&mut series, -(*j as i64), x.clone())?,
            (Puncture::Root(s), Coord::Pole(r, j)) => {
                // (t + d)^{−j} = d^{−j} Σ_m C(−j, m) d^{−m} t^m,  d = σ − ρ
                let d = pres.roots[s].value.sub(&pres.roots[*r].value)?;
                let dinv = d.invert()?;
                let base = dinv.pow(*j)?;
                let top_m = top.max(0) as usize;
                let pw = powers(&dinv, top_m)?;
                for m in 0..=top_m {
                    let k = binom(-(*j as i64), m as u32);
                    acc(&mut series, m as i64, base.mul(&pw[m])?.mul(&int(k))?.mul(x)?)?;
                }
            }
        }
    }
    Ok(series)
}

/// Total pole order of `g` over all punctures, which bounds its order of vanishing anywhere.
fn total_pole_order(g: &QuotientElement) -> i64 {
    let mut neg = 0i64;
    let mut pos = 0i64;
    let mut poles: BTreeMap<usize, i64> = BTreeMap::new();
    for c in g.terms().keys() {
        match c {
            Coord::Laurent(n) if *n < 0 => neg = neg.max(-n),
            Coord::Laurent(n) => pos = pos.max(*n),
            Coord::Pole(r, j) => {
                let e = poles.entry(*r).or_insert(0);
                *e = (*e).max(*j as i64);
            }
        }
    }
    neg + pos + poles.values().sum::<i64>()
}

pub fn pole_profile(pres: &CurvePresentation, g: &QuotientElement, ep: &EndParametrization) -> Result<PoleProfile> {
    if pres.is_zero(g)? {
        return Err(MirrorError::ZeroFunction);
    }
    let top = total_pole_order(g) + 1;
    let series = expand(pres, g, ep.puncture, top)?;
    for (e, c) in &series {
        if *e > top {
            break;
        }
        if !c.vanishes_below(&pres.cutoff)? {
            let order = -*e;
            return Ok(PoleProfile { order, slope: order * ep.scale, leading: c.clone() });
        }
    }
    Err(MirrorError::ZeroFunction)
}
