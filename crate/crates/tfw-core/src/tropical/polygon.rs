//! Lattice polygons: convex hull, Pick counts, boundary primitivity.

use num_integer::Integer;

use super::curve::Exp;
use super::TropError;

fn cross(o: &Exp, a: &Exp, b: &Exp) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Extreme points of the convex hull in counterclockwise order, starting from
/// the lexicographically smallest point; collinear points are dropped.
pub fn convex_hull(points: &[Exp]) -> Vec<Exp> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Exp> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Exp> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A lattice polygon with its Pick data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<Exp>,
    pub twice_area: i64,
    pub boundary_points: i64,
    pub interior_points: i64,
}

impl NewtonPolygon {
    /// Hull of a support; points and segments are rejected.
    pub fn of_support(support: &[Exp]) -> Result<Self, TropError> {
        if support.is_empty() {
            return Err(TropError::EmptySupport);
        }
        let vertices = convex_hull(support);
        if vertices.len() < 3 {
            return Err(TropError::DegenerateSupport);
        }
        let n = vertices.len();
        let mut twice_area = 0i64;
        let mut boundary_points = 0i64;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            twice_area += a[0] * b[1] - a[1] * b[0];
            boundary_points += (b[0] - a[0]).gcd(&(b[1] - a[1]));
        }
        // Pick: A = I + B/2 − 1.
        let interior_points = (twice_area - boundary_points + 2) / 2;
        Ok(NewtonPolygon { vertices, twice_area, boundary_points, interior_points })
    }

    /// Counterclockwise boundary edges `(β_j, β_{j+1})`.
    pub fn edges(&self) -> Vec<(Exp, Exp)> {
        let n = self.vertices.len();
        (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }

    /// Lattice points on the boundary that are not vertices.
    pub fn non_vertex_boundary_points(&self) -> Vec<(Exp, Exp, Exp)> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            let g = (b[0] - a[0]).gcd(&(b[1] - a[1]));
            for t in 1..g {
                let p = [a[0] + (b[0] - a[0]) / g * t, a[1] + (b[1] - a[1]) / g * t];
                out.push((a, b, p));
            }
        }
        out
    }

    /// Whether every boundary edge has lattice length one.
    pub fn is_smooth(&self) -> bool {
        self.boundary_points == self.vertices.len() as i64
    }

    /// `-1` outside, `0` on the boundary, `1` in the interior.
    pub fn locate(&self, p: &Exp) -> i32 {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            let c = cross(&a, &b, p);
            if c < 0 {
                return -1;
            }
            if c == 0 {
                on_edge = true;
            }
        }
        if on_edge {
            0
        } else {
            1
        }
    }

    /// All lattice points, sorted.
    pub fn lattice_points(&self) -> Vec<Exp> {
        let xmin = self.vertices.iter().map(|v| v[0]).min().unwrap();
        let xmax = self.vertices.iter().map(|v| v[0]).max().unwrap();
        let ymin = self.vertices.iter().map(|v| v[1]).min().unwrap();
        let ymax = self.vertices.iter().map(|v| v[1]).max().unwrap();
        let mut out = Vec::new();
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                if self.locate(&[x, y]) >= 0 {
                    out.push([x, y]);
                }
            }
        }
        out
    }

    /// Squared Euclidean distance from `p` to the boundary, as `(num, den)`.
    pub fn boundary_distance_sq(&self, p: &Exp) -> (i128, i128) {
        let mut best: Option<(i128, i128)> = None;
        for (a, b) in self.edges() {
            let c = cross(&a, &b, p);
            let e2 = ((b[0] - a[0]) as i128).pow(2) + ((b[1] - a[1]) as i128).pow(2);
            let cand = (c * c, e2);
            best = match best {
                Some((n, d)) if n * cand.1 <= cand.0 * d => Some((n, d)),
                _ => Some(cand),
            };
        }
        best.unwrap()
    }
}
