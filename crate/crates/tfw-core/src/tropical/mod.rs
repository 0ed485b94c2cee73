//! Newton polygons, tropical skeletons and cylindrical ends of a Laurent
//! polynomial `f = Σ c_α z^α` on `(ℂ*)²`.

mod curve;
mod polygon;
mod skeleton;
mod svg;

use std::cmp::Ordering;

use num_rational::Rational64;
use num_traits::One;
use serde_json::{json, Value};
use thiserror::Error;

pub use curve::{CoeffData, Exp, Param, TropCurve};
pub use polygon::{convex_hull, NewtonPolygon};
pub use skeleton::{outward_normal, skeleton, tropical_eval, Component, Edge, Point, Ray, TropicalSkeleton, Vertex};
pub use svg::{skeleton_svg, SvgOptions};

use crate::exactnum::{ExactError, Valuation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TropError {
    #[error("support is empty")]
    EmptySupport,
    #[error("exponent {0:?} appears twice")]
    DuplicateExponent(Exp),
    #[error("Newton polygon is a point or a segment")]
    DegenerateSupport,
    #[error("boundary edge {edge:?} contains the lattice point {point:?}")]
    NotSmooth { edge: (Exp, Exp), point: Exp },
    #[error("{0:?} is not an interior point of the Newton polygon")]
    NotInterior(Exp),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent subdivision: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub fn newton_polygon(curve: &TropCurve) -> Result<NewtonPolygon, TropError> {
    NewtonPolygon::of_support(&curve.support())
}

/// Whether every boundary edge of the hull has lattice length one.
pub fn check_smoothness(curve: &TropCurve) -> bool {
    let hull = convex_hull(&curve.support());
    let n = hull.len();
    if n < 2 {
        return true;
    }
    let m = if n == 2 { 1 } else { n };
    (0..m).all(|i| {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        num_integer::gcd(b[0] - a[0], b[1] - a[1]) == 1
    })
}

/// A cylindrical end `Z_{α,r}`: `α = β_{j+1} − β_j` for the counterclockwise
/// boundary edge, and `r` solves `c_{β_j} + c_{β_{j+1}} z^α = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndSpec {
    pub index: usize,
    pub alpha: [i64; 2],
    /// Outward ray direction `(α₂, −α₁)`.
    pub ray_direction: [i64; 2],
    pub log_r: Valuation,
    /// `arg r / π`; the constant part is lifted to `(−1, 1]` once and kept.
    pub arg_r_pi: Valuation,
    pub adjacent: (Exp, Exp),
    /// Skeleton vertex the ray starts from.
    pub vertex: usize,
}

impl EndSpec {
    pub fn norm2(&self) -> i64 {
        self.alpha[0] * self.alpha[0] + self.alpha[1] * self.alpha[1]
    }

    /// Whether `(α, log r, arg r)` describes this cylinder, in either orientation
    /// (`Z_{α,r} = Z_{−α,r⁻¹}`); phases compare modulo `2π`.
    pub fn is_equivalent(&self, alpha: [i64; 2], log_r: &Valuation, arg_r_pi: &Valuation) -> bool {
        let same_arg = |a: &Valuation, b: &Valuation| {
            let d = a.sub(b);
            d.as_constant().is_some_and(|c| (c / Rational64::from_integer(2)).is_integer())
        };
        (alpha == self.alpha && *log_r == self.log_r && same_arg(arg_r_pi, &self.arg_r_pi))
            || (alpha == [-self.alpha[0], -self.alpha[1]]
                && *log_r == self.log_r.neg()
                && same_arg(arg_r_pi, &self.arg_r_pi.neg()))
    }

    pub fn to_json(&self, curve: &TropCurve) -> Value {
        let b = &curve.basis;
        json!({
            "index": self.index,
            "alpha": self.alpha,
            "ray_direction": self.ray_direction,
            "log_r": self.log_r.display(b).to_string(),
            "arg_r_pi": self.arg_r_pi.display(b).to_string(),
            "adjacent": [self.adjacent.0, self.adjacent.1],
            "vertex": self.vertex,
        })
    }
}

/// Lifts the constant part of a phase into `(−1, 1]`.
pub fn lift_phase(v: &Valuation) -> Valuation {
    let c = v.constant_part();
    let two = Rational64::from_integer(2);
    let mut r = c - (c / two).floor() * two;
    if r > Rational64::one() {
        r -= two;
    }
    v.sub(&Valuation::constant(c)).add(&Valuation::constant(r))
}

/// One end per counterclockwise boundary edge of the Newton polygon.
pub fn cylindrical_ends(curve: &TropCurve) -> Result<Vec<EndSpec>, TropError> {
    let sk = skeleton(curve)?;
    Ok(ends_of(curve, &sk))
}

pub fn ends_of(curve: &TropCurve, sk: &TropicalSkeleton) -> Vec<EndSpec> {
    sk.rays
        .iter()
        .enumerate()
        .map(|(i, ray)| {
            let (bj, bk) = ray.separates;
            let alpha = [bk[0] - bj[0], bk[1] - bj[1]];
            let log_r = curve.log_norm(&bj).sub(curve.log_norm(&bk));
            let arg = curve.phase_pi(&bj).sub(curve.phase_pi(&bk)).add(&Valuation::integer(1));
            EndSpec {
                index: i,
                alpha,
                ray_direction: ray.direction,
                log_r,
                arg_r_pi: lift_phase(&arg),
                adjacent: (bj, bk),
                vertex: ray.vertex,
            }
        })
        .collect()
}

/// `(g, b)`: interior lattice points and number of ends.
pub fn genus_and_ends(curve: &TropCurve) -> Result<(i64, i64), TropError> {
    let poly = newton_polygon(curve)?;
    if let Some((a, b, p)) = poly.non_vertex_boundary_points().first() {
        return Err(TropError::NotSmooth { edge: (*a, *b), point: *p });
    }
    Ok((poly.interior_points, poly.vertices.len() as i64))
}

/// `M = max_{β₁,β₂} log|c_{β₁}/c_{β₂}|`.
pub fn coefficient_gap(curve: &TropCurve) -> Result<Valuation, TropError> {
    let mut it = curve.terms.values().map(|c| &c.log_norm);
    let first = it.next().expect("support is nonempty").clone();
    let (mut lo, mut hi) = (first.clone(), first);
    for l in it {
        if curve.basis.compare(l, &lo)? == Ordering::Less {
            lo = l.clone();
        }
        if curve.basis.compare(l, &hi)? == Ordering::Greater {
            hi = l.clone();
        }
    }
    Ok(hi.sub(&lo))
}

/// Containment data for a bounded component `C_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentBound {
    pub alpha: Exp,
    pub m: f64,
    /// Euclidean distance from `α` to the boundary of the hull.
    pub d: f64,
    /// `(M/d)·hull(A)`.
    pub scaled_hull: Vec<[f64; 2]>,
    /// `M·(hull(A) − α)°`, which always contains `C_α`.
    pub polar_bound: Vec<[f64; 2]>,
    /// Disc radius `M/d` around the origin, which always contains `C_α`.
    pub radius: f64,
    /// Vertices of `C_α` from the skeleton (empty when `C_α` does not appear).
    pub component: Vec<[f64; 2]>,
    pub scaled_hull_contains_component: bool,
}

fn contains_convex(poly: &[[f64; 2]], p: &[f64; 2], tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return poly.iter().all(|q| (q[0] - p[0]).abs() <= tol && (q[1] - p[1]).abs() <= tol);
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -tol
    })
}

/// Bounding regions for `C_α`, `α` interior.
pub fn bounded_component_bound(curve: &TropCurve, alpha: Exp) -> Result<ComponentBound, TropError> {
    let poly = newton_polygon(curve)?;
    if poly.locate(&alpha) != 1 {
        return Err(TropError::NotInterior(alpha));
    }
    let m = curve.approx(&coefficient_gap(curve)?);
    let (dn, dd) = poly.boundary_distance_sq(&alpha);
    let d = ((dn as f64) / (dd as f64)).sqrt();
    let s = if m == 0.0 { 0.0 } else { m / d };
    let scaled_hull: Vec<[f64; 2]> = poly.vertices.iter().map(|v| [s * v[0] as f64, s * v[1] as f64]).collect();
    // The polar of hull − α has one vertex per edge: the point x with (β−α)·x = M on both endpoints.
    let shifted: Vec<[f64; 2]> =
        poly.vertices.iter().map(|v| [(v[0] - alpha[0]) as f64, (v[1] - alpha[1]) as f64]).collect();
    let n = shifted.len();
    let mut polar_bound = Vec::with_capacity(n);
    for i in 0..n {
        let a = shifted[i];
        let b = shifted[(i + 1) % n];
        let det = a[0] * b[1] - a[1] * b[0];
        polar_bound.push([m * (b[1] - a[1]) / det, m * (a[0] - b[0]) / det]);
    }
    let mut component = Vec::new();
    let mut contained = true;
    if let Ok(sk) = skeleton(curve) {
        let mut pts: Vec<[f64; 2]> = (0..sk.vertices.len())
            .filter(|&i| sk.vertices[i].cell.contains(&alpha))
            .map(|i| sk.numeric_vertex(curve, i))
            .collect();
        if !pts.is_empty() {
            let cx = pts.iter().map(|p| p[0]).sum::<f64>() / pts.len() as f64;
            let cy = pts.iter().map(|p| p[1]).sum::<f64>() / pts.len() as f64;
            pts.sort_by(|p, q| (p[1] - cy).atan2(p[0] - cx).total_cmp(&(q[1] - cy).atan2(q[0] - cx)));
        }
        let tol = 1e-9 * (1.0 + m);
        contained = pts.iter().all(|p| contains_convex(&scaled_hull, p, tol));
        component = pts;
    }
    Ok(ComponentBound {
        alpha,
        m,
        d,
        scaled_hull,
        polar_bound,
        radius: s,
        component,
        scaled_hull_contains_component: contained,
    })
}
