//! Line integrals of the canonical and angular 1-forms attached to a
//! cylindrical end, wrapping numbers, disk energies, action rescaling and the
//! η-integral disk obstruction.

use std::f64::consts::PI;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{Coeff, ExactError, NovCtx, Novikov, Provider, Valuation, ValuationBasis};
use crate::hamiltonian::{FloerGenerator, GenKind};
use crate::tropical::{cylindrical_ends, EndSpec, TropCurve, TropError};

/// `4π²`.
pub const FOUR_PI2: f64 = 4.0 * PI * PI;

/// Tolerance for integrality of `Δθ/2π` and for closing a loop.
pub const LOOP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("path endpoints do not project to the same point of (ℂ*)²")]
    NotALoop,
    #[error("Δθ_α/2π = {0} is not an integer")]
    NonIntegralWrap(f64),
    #[error("|α|² = {0} needs the adjusted η-integral mode")]
    DiagonalNeedsAdjustedMode(i64),
    #[error("class {class:?} is not nullhomotopic in (ℂ*)²: Σ n_α α = {sum:?}")]
    NotNullhomotopic { class: Vec<i64>, sum: [i64; 2] },
    #[error("class has {got} entries for {ends} ends")]
    ClassLength { got: usize, ends: usize },
    #[error("disk boundary data is not cyclically consistent: {0}")]
    InconsistentCycle(String),
    #[error("interior generators carry no rescaling")]
    InteriorGeneratorHasNoRescale,
    #[error("path must have at least one point")]
    EmptyPath,
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The data `(α, log|r|, arg r)` defining `λ_α` and `η_α`, with a fixed real lift of `arg r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndFrame {
    pub alpha: [i64; 2],
    pub log_r: f64,
    pub arg_r: f64,
}

impl EndFrame {
    pub fn new(alpha: [i64; 2], log_r: f64, arg_r: f64) -> Self {
        EndFrame { alpha, log_r, arg_r }
    }

    pub fn of_end(curve: &TropCurve, end: &EndSpec) -> Self {
        EndFrame { alpha: end.alpha, log_r: curve.approx(&end.log_r), arg_r: PI * curve.approx(&end.arg_r_pi) }
    }

    /// `α = (1, 0)`, `r = 1`, for which `η_α = p₁dp₂ + θ₂dθ₁`.
    pub fn reference() -> Self {
        EndFrame { alpha: [1, 0], log_r: 0.0, arg_r: 0.0 }
    }

    pub fn norm2(&self) -> i64 {
        self.alpha[0] * self.alpha[0] + self.alpha[1] * self.alpha[1]
    }

    /// `(p_α, θ_α, p_α^⊥, θ_α^⊥)` of a point `(p₁, θ₁, p₂, θ₂)`.
    pub fn end_coords(&self, x: &[f64; 4]) -> [f64; 4] {
        let (a1, a2) = (self.alpha[0] as f64, self.alpha[1] as f64);
        let n = self.norm2() as f64;
        let [p1, t1, p2, t2] = *x;
        [(a2 * p1 - a1 * p2) / n, -a2 * t1 + a1 * t2, a1 * p1 + a2 * p2, (a1 * t1 + a2 * t2) / n]
    }

    /// Inverse of [`EndFrame::end_coords`].
    pub fn from_end_coords(&self, y: &[f64; 4]) -> [f64; 4] {
        let (a1, a2) = (self.alpha[0] as f64, self.alpha[1] as f64);
        let n = self.norm2() as f64;
        let [pa, ta, pp, tp] = *y;
        [pa * a2 + pp * a1 / n, tp * a1 - ta * a2 / n, -pa * a1 + pp * a2 / n, tp * a2 + ta * a1 / n]
    }

    pub fn to_json(&self) -> Value {
        json!({ "alpha": self.alpha, "log_r": self.log_r, "arg_r": self.arg_r })
    }
}

/// A piecewise-linear path in universal-cover coordinates `(p₁, θ₁, p₂, θ₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPath {
    pub points: Vec<[f64; 4]>,
}

impl LiftedPath {
    pub fn new(points: Vec<[f64; 4]>) -> Self {
        LiftedPath { points }
    }

    pub fn start(&self) -> Option<&[f64; 4]> {
        self.points.first()
    }

    pub fn end(&self) -> Option<&[f64; 4]> {
        self.points.last()
    }

    /// Appends `other`, dropping its first point when it repeats the current end.
    pub fn extend(&mut self, other: &LiftedPath) {
        let skip = match (self.points.last(), other.points.first()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        };
        self.points.extend(other.points.iter().skip(skip as usize));
    }

    pub fn to_json(&self) -> Value {
        json!({ "points": self.points })
    }

    pub fn from_json(v: &Value) -> Result<Self, EnergyError> {
        let arr = v.get("points").and_then(Value::as_array).ok_or(EnergyError::EmptyPath)?;
        let mut points = Vec::with_capacity(arr.len());
        for p in arr {
            let c: Vec<f64> = p.as_array().map(|a| a.iter().filter_map(Value::as_f64).collect()).unwrap_or_default();
            if c.len() != 4 {
                return Err(EnergyError::Exact(ExactError::Parse("path points need four coordinates".into())));
            }
            points.push([c[0], c[1], c[2], c[3]]);
        }
        Ok(LiftedPath { points })
    }
}

fn near_integer(x: f64) -> Option<i64> {
    let n = x.round();
    ((x - n).abs() <= LOOP_TOL * x.abs().max(1.0)).then_some(n as i64)
}

/// Checks that the endpoints agree in `p` and differ by `2πℤ²` in `θ`.
pub fn check_loop(path: &LiftedPath) -> Result<(), EnergyError> {
    let (a, b) = match (path.start(), path.end()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(EnergyError::EmptyPath),
    };
    let scale = a.iter().chain(b.iter()).fold(1f64, |m, x| m.max(x.abs()));
    if (a[0] - b[0]).abs() > LOOP_TOL * scale || (a[2] - b[2]).abs() > LOOP_TOL * scale {
        return Err(EnergyError::NotALoop);
    }
    for i in [1, 3] {
        if near_integer((b[i] - a[i]) / (2.0 * PI)).is_none() {
            return Err(EnergyError::NotALoop);
        }
    }
    Ok(())
}

/// `w` with `Δθ_α = 2πw` along the lifted loop.
pub fn wrapping_number(frame: &EndFrame, path: &LiftedPath) -> Result<i64, EnergyError> {
    check_loop(path)?;
    let a = frame.end_coords(path.start().unwrap());
    let b = frame.end_coords(path.end().unwrap());
    let x = (b[1] - a[1]) / (2.0 * PI);
    near_integer(x).ok_or(EnergyError::NonIntegralWrap(x))
}

/// `∫ F dG` along each segment for the affine pair `(F, G)`; exact for linear segments.
fn segment_sum(frame: &EndFrame, path: &LiftedPath, form: impl Fn(&[f64; 4]) -> [(f64, f64); 2]) -> f64 {
    let mut total = 0.0;
    for w in path.points.windows(2) {
        let a = form(&frame.end_coords(&w[0]));
        let b = form(&frame.end_coords(&w[1]));
        for i in 0..2 {
            let (f0, g0) = a[i];
            let (f1, g1) = b[i];
            total += 0.5 * (f0 + f1) * (g1 - g0);
        }
    }
    total
}

/// `∫ λ_α` along the lift, with no base-point correction.
pub fn raw_lambda(frame: &EndFrame, path: &LiftedPath) -> f64 {
    segment_sum(frame, path, |y| [(y[1] - frame.arg_r, y[0]), (y[2] - frame.log_r, y[3])])
}

/// `∫ η_α` along the lift, with no base-point correction.
pub fn raw_eta(frame: &EndFrame, path: &LiftedPath) -> f64 {
    segment_sum(frame, path, |y| [(-(y[2] - frame.log_r), y[0]), (y[1] - frame.arg_r, y[3])])
}

/// `∫_{[γ]_α} λ_α = ∫ λ_α − 2π w p_{α,0}`.
pub fn integral_lambda(frame: &EndFrame, path: &LiftedPath) -> Result<f64, EnergyError> {
    let w = wrapping_number(frame, path)?;
    let p0 = frame.end_coords(path.start().unwrap())[0];
    Ok(raw_lambda(frame, path) - 2.0 * PI * w as f64 * p0)
}

/// Representative of `x mod 4π²` in `[0, 4π²)`.
pub fn mod_4pi2(x: f64) -> f64 {
    let r = x.rem_euclid(FOUR_PI2);
    if r >= FOUR_PI2 {
        0.0
    } else {
        r
    }
}

/// Distance between `a` and `b` in `ℝ/4π²`.
pub fn dist_mod_4pi2(a: f64, b: f64) -> f64 {
    let d = mod_4pi2(a - b);
    d.min(FOUR_PI2 - d)
}

/// Base-offset convention of the η-integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaMode {
    /// Requires `|α| = 1`; the offset is `θ_α^⊥` at the start.
    Standard,
    /// Any `|α|`: endpoints share `θ_α`, `θ_α^⊥` changes by `2πw`, and the offset is
    /// measured from the point of `Z_{α,r}⁺` with `θ_α^⊥ = reference_theta_perp`.
    Adjusted { reference_theta_perp: f64 },
}

/// `∫ η_α − 2π w θ_{α,0}^⊥` reduced into `[0, 4π²)`.
pub fn integral_eta(frame: &EndFrame, path: &LiftedPath, mode: EtaMode) -> Result<f64, EnergyError> {
    check_loop(path)?;
    let a = frame.end_coords(path.start().unwrap());
    let b = frame.end_coords(path.end().unwrap());
    let (w, offset) = match mode {
        EtaMode::Standard => {
            if frame.norm2() != 1 {
                return Err(EnergyError::DiagonalNeedsAdjustedMode(frame.norm2()));
            }
            (wrapping_number(frame, path)?, a[3])
        }
        EtaMode::Adjusted { reference_theta_perp } => {
            if (b[1] - a[1]).abs() > LOOP_TOL * a[1].abs().max(1.0) {
                return Err(EnergyError::NotALoop);
            }
            let x = (b[3] - a[3]) / (2.0 * PI);
            (near_integer(x).ok_or(EnergyError::NonIntegralWrap(x))?, a[3] - reference_theta_perp)
        }
    };
    Ok(mod_4pi2(raw_eta(frame, path) - 2.0 * PI * w as f64 * offset))
}

/// A point on the model cylinder `Z_{α,r}` with the given `p_α, θ_α^⊥` and sheet `m`
/// (`θ_α = arg r + 2πm`).
pub fn cylinder_point(frame: &EndFrame, p_alpha: f64, theta_perp: f64, m: i64) -> [f64; 4] {
    frame.from_end_coords(&[p_alpha, frame.arg_r + 2.0 * PI * m as f64, frame.log_r, theta_perp])
}

/// Verdict of the η-integral test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The η-integral is nonzero mod 4π², so no disk has this boundary class.
    NoDisk,
    /// The value depends on interval-valued phase parameters and vanishes only on a
    /// rational grid of them.
    NoDiskGeneric,
    /// The η-integral vanishes; the test says nothing.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NoDisk => "no disk with this boundary class",
            Verdict::NoDiskGeneric => "no disk with this boundary class for generic phases",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub class: Vec<i64>,
    /// Value divided by `π²`; the rational constant part is reduced into `[0, 4)`.
    pub value_pi2: Valuation,
    /// The exact value as a real number in `[0, 4π²)`.
    pub value: f64,
    /// The same quantity from the explicit piecewise-linear lasso loop.
    pub numeric: f64,
    pub verdict: Verdict,
    pub trivial_class: bool,
    /// A basis of nullhomotopic classes modulo the all-ones class.
    pub kernel: Vec<Vec<i64>>,
}

impl ObstructionReport {
    pub fn to_json(&self, curve: &TropCurve) -> Value {
        json!({
            "class": self.class,
            "value_over_pi2": self.value_pi2.to_json(&curve.basis),
            "value_over_pi2_display": self.value_pi2.display(&curve.basis).to_string(),
            "value": self.value,
            "numeric_value": self.numeric,
            "verdict": self.verdict.as_str(),
            "trivial_class": self.trivial_class,
            "kernel_basis": self.kernel,
        })
    }
}

/// Integer kernel of `n ↦ Σ n_j α_j`, normalized by `n_last = 0` to split off the all-ones class.
pub fn nullhomotopic_kernel(ends: &[EndSpec]) -> Vec<Vec<i64>> {
    let b = ends.len();
    if b < 2 {
        return Vec::new();
    }
    let m = b - 1;
    // Rational row reduction of the 2×m system.
    let mut rows: Vec<Vec<Rational64>> =
        (0..2).map(|r| (0..m).map(|j| Rational64::from_integer(ends[j].alpha[r])).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        if row == 2 {
            break;
        }
        let Some(pr) = (row..2).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, pr);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..2 {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col];
                let pivot_row = rows[row].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..m).filter(|c| !pivots.iter().any(|(_, pc)| pc == c)) {
        let mut v = vec![Rational64::zero(); b];
        v[free] = Rational64::from_integer(1);
        for &(r, c) in &pivots {
            v[c] = -rows[r][free];
        }
        let den = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        out.push(v.iter().map(|x| (x * Rational64::from_integer(den)).to_integer()).collect());
    }
    out
}

/// The lasso loop realising `Σ n_α [S¹_α]` from the base point at the origin.
pub fn lasso_loop(curve: &TropCurve, ends: &[EndSpec], class: &[i64]) -> LiftedPath {
    let mut path = LiftedPath::new(vec![[0.0; 4]]);
    let mut shift = [0.0f64; 2];
    for (end, &n) in ends.iter().zip(class) {
        if n == 0 {
            continue;
        }
        let frame = EndFrame::of_end(curve, end);
        let mut pa = cylinder_point(&frame, 1.0, 0.0, 0);
        pa[1] += shift[0];
        pa[3] += shift[1];
        let turn = 2.0 * PI * n as f64;
        let mut pb = pa;
        pb[1] += turn * end.alpha[0] as f64;
        pb[3] += turn * end.alpha[1] as f64;
        shift[0] += turn * end.alpha[0] as f64;
        shift[1] += turn * end.alpha[1] as f64;
        path.extend(&LiftedPath::new(vec![pa, pb, [0.0, shift[0], 0.0, shift[1]]]));
    }
    path
}

/// The η-integral test on `Σ n_α [S¹_α]`.
pub fn obstruction_check(curve: &TropCurve, class: &[i64]) -> Result<ObstructionReport, EnergyError> {
    let ends = cylindrical_ends(curve)?;
    if class.len() != ends.len() {
        return Err(EnergyError::ClassLength { got: class.len(), ends: ends.len() });
    }
    let sum = ends.iter().zip(class).fold([0i64; 2], |s, (e, n)| [s[0] + n * e.alpha[0], s[1] + n * e.alpha[1]]);
    let trivial_class = class.iter().all(|n| *n == class[0]);
    if sum != [0, 0] {
        return Err(EnergyError::NotNullhomotopic { class: class.to_vec(), sum });
    }
    let mut v = Valuation::zero();
    for (end, &n) in ends.iter().zip(class) {
        let per = end.arg_r_pi.add(&Valuation::integer(end.alpha[0] * end.alpha[1]));
        v = v.add(&per.scale(Rational64::from_integer(2 * n)));
    }
    let c = v.constant_part();
    let four = Rational64::from_integer(4);
    let reduced_c = c - (c / four).floor() * four;
    let value_pi2 = v.sub(&Valuation::constant(c)).add(&Valuation::constant(reduced_c));
    let value = mod_4pi2(PI * PI * curve.approx(&value_pi2));
    let numeric = integral_eta(&EndFrame::reference(), &lasso_loop(curve, &ends, class), EtaMode::Standard)?;
    let verdict = match curve.rational_value(&value_pi2) {
        Some(x) => {
            if (x - (x / four).floor() * four).is_zero() {
                Verdict::Inconclusive
            } else {
                Verdict::NoDisk
            }
        }
        None if value_pi2.as_constant().is_none() => Verdict::NoDiskGeneric,
        None => Verdict::Inconclusive,
    };
    Ok(ObstructionReport { class: class.to_vec(), value_pi2, value, numeric, verdict, trivial_class, kernel: nullhomotopic_kernel(&ends) })
}

/// `n = 1` on the antiparallel pair of ends whose normals are closest to `±(0, 1)`.
pub fn opposite_ends_class(curve: &TropCurve) -> Result<Option<Vec<i64>>, EnergyError> {
    let ends = cylindrical_ends(curve)?;
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            let (a, b) = (ends[i].alpha, ends[j].alpha);
            if a[0] == -b[0] && a[1] == -b[1] {
                let score = a[1].abs() - a[0].abs();
                if best.map_or(true, |(s, _, _)| score > s) {
                    best = Some((score, i, j));
                }
            }
        }
    }
    Ok(best.map(|(_, i, j)| {
        let mut n = vec![0; ends.len()];
        n[i] = 1;
        n[j] = 1;
        n
    }))
}

/// Forbidden `φ_α mod 2π` values `−(1/2πw)∫_{[γ]} η_α` for the supplied `(w, ∫η)` pairs.
pub fn forbidden_phis(classes: &[(i64, f64)]) -> Vec<f64> {
    classes
        .iter()
        .filter(|(w, _)| *w != 0)
        .map(|(w, eta)| (-eta / (2.0 * PI * *w as f64)).rem_euclid(2.0 * PI))
        .collect()
}

/// One boundary arc: `∫_{[γ_s]_α} λ_α` and the values of `g_s` at its two ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskArc {
    pub lambda: f64,
    pub g_start: f64,
    pub g_end: f64,
}

/// A corner `x_s` with its `p_α` value and wrapping index `j_s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskVertex {
    pub p_alpha: f64,
    pub theta_perp: f64,
    pub j: i64,
}

/// Arc `s` runs from vertex `s` to vertex `s + 1` (cyclically).
#[derive(Clone, Debug, PartialEq)]
pub struct DiskBoundaryData {
    pub arcs: Vec<DiskArc>,
    pub vertices: Vec<DiskVertex>,
}

impl DiskBoundaryData {
    /// Arcs on the graphs of `g(s)`, with `g(s)(p_α, θ_α^⊥)` evaluated at the vertices.
    pub fn from_functions(
        lambdas: &[f64],
        vertices: Vec<DiskVertex>,
        g: impl Fn(usize, f64, f64) -> f64,
    ) -> Result<Self, EnergyError> {
        if lambdas.len() != vertices.len() {
            return Err(EnergyError::InconsistentCycle(format!("{} arcs for {} vertices", lambdas.len(), vertices.len())));
        }
        let n = vertices.len();
        let arcs = (0..n)
            .map(|s| {
                let (a, b) = (vertices[s], vertices[(s + 1) % n]);
                DiskArc { lambda: lambdas[s], g_start: g(s, a.p_alpha, a.theta_perp), g_end: g(s, b.p_alpha, b.theta_perp) }
            })
            .collect();
        Ok(DiskBoundaryData { arcs, vertices })
    }

    pub fn from_json(v: &Value) -> Result<Self, EnergyError> {
        let bad = |m: &str| EnergyError::InconsistentCycle(m.to_string());
        let num = |x: &Value, k: &str| x.get(k).and_then(Value::as_f64).ok_or_else(|| bad(&format!("missing number {k:?}")));
        let arcs = v
            .get("arcs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing arcs"))?
            .iter()
            .map(|a| Ok(DiskArc { lambda: num(a, "lambda")?, g_start: num(a, "g_start")?, g_end: num(a, "g_end")? }))
            .collect::<Result<Vec<_>, EnergyError>>()?;
        let vertices = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing vertices"))?
            .iter()
            .map(|x| {
                Ok(DiskVertex {
                    p_alpha: num(x, "p_alpha")?,
                    theta_perp: x.get("theta_perp").and_then(Value::as_f64).unwrap_or(0.0),
                    j: x.get("j").and_then(Value::as_i64).ok_or_else(|| bad("missing integer j"))?,
                })
            })
            .collect::<Result<Vec<_>, EnergyError>>()?;
        Ok(DiskBoundaryData { arcs, vertices })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "arcs": self.arcs.iter().map(|a| json!({"lambda": a.lambda, "g_start": a.g_start, "g_end": a.g_end})).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|x| json!({"p_alpha": x.p_alpha, "theta_perp": x.theta_perp, "j": x.j})).collect::<Vec<_>>(),
        })
    }
}

/// `Σ ∫λ_α + Σ (g_s(x_{s+1}) − g_s(x_s)) + 2π Σ j_s p_s`.
pub fn disk_energy(data: &DiskBoundaryData) -> Result<f64, EnergyError> {
    if data.arcs.is_empty() || data.arcs.len() != data.vertices.len() {
        return Err(EnergyError::InconsistentCycle(format!(
            "{} arcs for {} vertices",
            data.arcs.len(),
            data.vertices.len()
        )));
    }
    let finite = data.arcs.iter().all(|a| a.lambda.is_finite() && a.g_start.is_finite() && a.g_end.is_finite())
        && data.vertices.iter().all(|v| v.p_alpha.is_finite());
    if !finite {
        return Err(EnergyError::InconsistentCycle("non-finite entry".into()));
    }
    let arcs: f64 = data.arcs.iter().map(|a| a.lambda + a.g_end - a.g_start).sum();
    let corners: f64 = data.vertices.iter().map(|v| 2.0 * PI * v.j as f64 * v.p_alpha).sum();
    Ok(arcs + corners)
}

/// The factor `T^{g₀(z) − g₁(z) + 2π j p_α}` of a cylindrical generator.
#[derive(Clone, Debug)]
pub struct RescaleWeight {
    pub factor: Novikov,
    pub exponent: f64,
    pub delta_g: f64,
    pub j: i64,
    pub p_alpha: f64,
}

/// A rational enclosure of `x` with denominator `2^32`.
fn fixed_interval(x: f64) -> Provider {
    let s = (1u64 << 32) as f64;
    let lo = (x * s).floor();
    let hi = (x * s).ceil();
    let den = 1i64 << 32;
    Provider::Fixed { lo: Rational64::new(lo as i64, den), hi: Rational64::new(hi as i64, den) }
}

/// Rescaling factor with valuation `2j·(π p_α) + Δg` over generators `pi_p = π·p_α` and `dg`.
pub fn rescale_weight(
    generator: &FloerGenerator,
    g0: impl Fn(f64, f64) -> f64,
    g1: impl Fn(f64, f64) -> f64,
) -> Result<RescaleWeight, EnergyError> {
    let (j, x) = match (&generator.kind, generator.coords) {
        (GenKind::Cylindrical { j, .. }, Some(x)) => (*j, x),
        _ => return Err(EnergyError::InteriorGeneratorHasNoRescale),
    };
    let delta_g = g0(x.p_alpha, x.theta_perp) - g1(x.p_alpha, x.theta_perp);
    let basis = Arc::new(ValuationBasis::new(vec![
        ("pi_p".into(), Provider::Product(Box::new(Provider::Pi), Box::new(fixed_interval(x.p_alpha)))),
        ("dg".into(), fixed_interval(delta_g)),
    ])?);
    let exponent = delta_g + 2.0 * PI * j as f64 * x.p_alpha;
    let bound = exponent.abs().ceil().to_i64().unwrap_or(i64::MAX / 4) + 1;
    let ctx = NovCtx::new(basis, Valuation::integer(bound));
    let mut terms = Vec::new();
    if j != 0 {
        terms.push((1u16, Rational64::from_integer(2 * j)));
    }
    if delta_g != 0.0 {
        terms.push((2u16, Rational64::from_integer(1)));
    }
    let factor = Novikov::monomial(&ctx, Valuation::from_pairs(terms), Coeff::one())?;
    Ok(RescaleWeight { factor, exponent, delta_g, j, p_alpha: x.p_alpha })
}

#[cfg(test)]
mod tests;
