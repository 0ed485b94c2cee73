//! The corner locus of `max_α (log|c_α| + α·x)` by exact triple tie-solving.

use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::Rational64;
use serde_json::{json, Value};

use super::curve::{Exp, TropCurve};
use super::polygon::{convex_hull, NewtonPolygon};
use super::TropError;
use crate::exactnum::{ExactError, Valuation};

/// A point of `ℝ²` with coordinates linear in the curve parameters.
pub type Point = [Valuation; 2];

/// A bounded skeleton edge between two vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Primitive direction from `from` to `to`.
    pub direction: [i64; 2],
    pub weight: i64,
    /// Exponents of the two components the edge separates.
    pub separates: (Exp, Exp),
}

/// An unbounded skeleton ray.
#[derive(Clone, Debug, PartialEq)]
pub struct Ray {
    pub vertex: usize,
    pub direction: [i64; 2],
    pub weight: i64,
    /// `(β_j, β_{j+1})`, the counterclockwise boundary edge of the Newton polygon dual to the ray.
    pub separates: (Exp, Exp),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub point: Point,
    /// Exponents attaining the maximum, the dual cell.
    pub cell: Vec<Exp>,
}

/// Component `C_α` of the complement.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub exponent: Exp,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TropicalSkeleton {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Rays in counterclockwise order of their separating components.
    pub rays: Vec<Ray>,
    pub components: Vec<Component>,
}

/// `φ(f)(x)` and its argmax.
pub fn tropical_eval(curve: &TropCurve, x: &Point) -> Result<(Valuation, Vec<Exp>), ExactError> {
    let basis = &curve.basis;
    let mut best: Option<Valuation> = None;
    let mut arg: Vec<Exp> = Vec::new();
    for (e, c) in &curve.terms {
        let val = c
            .log_norm
            .add(&x[0].scale(Rational64::from_integer(e[0])))
            .add(&x[1].scale(Rational64::from_integer(e[1])));
        match &best {
            None => {
                best = Some(val);
                arg.push(*e);
            }
            Some(b) => match basis.compare(&val, b)? {
                Ordering::Greater => {
                    best = Some(val);
                    arg.clear();
                    arg.push(*e);
                }
                Ordering::Equal => arg.push(*e),
                Ordering::Less => {}
            },
        }
    }
    Ok((best.expect("support is nonempty"), arg))
}

fn tie_point(curve: &TropCurve, a: &Exp, b: &Exp, c: &Exp) -> Option<Point> {
    let u = [b[0] - a[0], b[1] - a[1]];
    let w = [c[0] - a[0], c[1] - a[1]];
    let det = u[0] * w[1] - u[1] * w[0];
    if det == 0 {
        return None;
    }
    let la = curve.log_norm(a);
    let b1 = la.sub(curve.log_norm(b));
    let b2 = la.sub(curve.log_norm(c));
    let d = Rational64::from_integer(det);
    let r = |n: i64| Rational64::from_integer(n) / d;
    let x1 = b1.scale(r(w[1])).add(&b2.scale(r(-u[1])));
    let x2 = b1.scale(r(-w[0])).add(&b2.scale(r(u[0])));
    Some([x1, x2])
}

fn same_point(curve: &TropCurve, p: &Point, q: &Point) -> Result<bool, ExactError> {
    Ok(curve.basis.compare(&p[0], &q[0])? == Ordering::Equal && curve.basis.compare(&p[1], &q[1])? == Ordering::Equal)
}

fn primitive(v: [i64; 2]) -> ([i64; 2], i64) {
    let g = v[0].gcd(&v[1]);
    ([v[0] / g, v[1] / g], g)
}

/// Outward normal of the counterclockwise edge `p → q`, made primitive.
pub fn outward_normal(p: &Exp, q: &Exp) -> ([i64; 2], i64) {
    primitive([q[1] - p[1], -(q[0] - p[0])])
}

/// Computes the skeleton; requires a smooth Newton polygon.
pub fn skeleton(curve: &TropCurve) -> Result<TropicalSkeleton, TropError> {
    let support = curve.support();
    let poly = NewtonPolygon::of_support(&support)?;
    if let Some((a, b, p)) = poly.non_vertex_boundary_points().first() {
        return Err(TropError::NotSmooth { edge: (*a, *b), point: *p });
    }
    let n = support.len();
    let mut vertices: Vec<Vertex> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(x) = tie_point(curve, &support[i], &support[j], &support[k]) else { continue };
                let (_, arg) = tropical_eval(curve, &x)?;
                if !(arg.contains(&support[i]) && arg.contains(&support[j]) && arg.contains(&support[k])) {
                    continue;
                }
                let mut dup = false;
                for v in &vertices {
                    if same_point(curve, &v.point, &x)? {
                        dup = true;
                        break;
                    }
                }
                if !dup {
                    vertices.push(Vertex { point: x, cell: arg });
                }
            }
        }
    }
    sort_vertices(curve, &mut vertices)?;

    let hull_edges = poly.edges();
    let mut edges = Vec::new();
    let mut rays: Vec<(usize, Ray)> = Vec::new();
    let mut used = vec![false; 0];
    let mut cell_edges: Vec<(usize, Exp, Exp)> = Vec::new();
    for (vi, v) in vertices.iter().enumerate() {
        let h = convex_hull(&v.cell);
        for t in 0..h.len() {
            cell_edges.push((vi, h[t], h[(t + 1) % h.len()]));
        }
    }
    used.resize(cell_edges.len(), false);
    for idx in 0..cell_edges.len() {
        if used[idx] {
            continue;
        }
        let (vi, p, q) = cell_edges[idx];
        used[idx] = true;
        let (dir, weight) = outward_normal(&p, &q);
        if let Some(pos) = hull_edges.iter().position(|&(a, b)| a == p && b == q) {
            rays.push((pos, Ray { vertex: vi, direction: dir, weight, separates: (p, q) }));
            continue;
        }
        let partner = (0..cell_edges.len()).find(|&o| !used[o] && cell_edges[o].1 == q && cell_edges[o].2 == p);
        let Some(o) = partner else {
            return Err(TropError::Inconsistent(format!("cell edge {p:?}-{q:?} has no partner")));
        };
        used[o] = true;
        edges.push(Edge { from: vi, to: cell_edges[o].0, direction: dir, weight, separates: (p, q) });
    }
    rays.sort_by_key(|(pos, _)| *pos);
    let mut components: Vec<Component> = Vec::new();
    for v in &vertices {
        for e in &v.cell {
            if !components.iter().any(|c| c.exponent == *e) {
                components.push(Component { exponent: *e, bounded: poly.locate(e) == 1 });
            }
        }
    }
    components.sort_by_key(|c| c.exponent);
    Ok(TropicalSkeleton { vertices, edges, rays: rays.into_iter().map(|(_, r)| r).collect(), components })
}

fn sort_vertices(curve: &TropCurve, vs: &mut [Vertex]) -> Result<(), ExactError> {
    let mut err = None;
    vs.sort_by(|a, b| {
        let r = curve
            .basis
            .compare(&a.point[0], &b.point[0])
            .and_then(|o| if o == Ordering::Equal { curve.basis.compare(&a.point[1], &b.point[1]) } else { Ok(o) });
        r.unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), Err)
}

impl TropicalSkeleton {
    /// Weighted sum of outgoing directions at a vertex.
    pub fn balancing_defect(&self, v: usize) -> [i64; 2] {
        let mut s = [0i64; 2];
        for e in &self.edges {
            if e.from == v {
                s[0] += e.weight * e.direction[0];
                s[1] += e.weight * e.direction[1];
            }
            if e.to == v {
                s[0] -= e.weight * e.direction[0];
                s[1] -= e.weight * e.direction[1];
            }
        }
        for r in &self.rays {
            if r.vertex == v {
                s[0] += r.weight * r.direction[0];
                s[1] += r.weight * r.direction[1];
            }
        }
        s
    }

    pub fn numeric_vertex(&self, curve: &TropCurve, v: usize) -> [f64; 2] {
        let p = &self.vertices[v].point;
        [curve.approx(&p[0]), curve.approx(&p[1])]
    }

    /// JSON cell complex.
    pub fn to_json(&self, curve: &TropCurve) -> Value {
        let b = &curve.basis;
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let num = self.numeric_vertex(curve, i);
                json!({
                    "point": [v.point[0].display(b).to_string(), v.point[1].display(b).to_string()],
                    "numeric": num,
                    "cell": v.cell,
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                json!({
                    "from": e.from, "to": e.to, "direction": e.direction, "weight": e.weight,
                    "separates": [e.separates.0, e.separates.1],
                })
            })
            .collect();
        let rays: Vec<Value> = self
            .rays
            .iter()
            .map(|r| {
                json!({
                    "vertex": r.vertex, "direction": r.direction, "weight": r.weight,
                    "separates": [r.separates.0, r.separates.1],
                })
            })
            .collect();
        let comps: Vec<Value> =
            self.components.iter().map(|c| json!({ "exponent": c.exponent, "bounded": c.bounded })).collect();
        json!({ "vertices": vertices, "edges": edges, "rays": rays, "components": comps })
    }
}
