//! Perturbation data near the cylindrical ends: bump profile, Morse angles,
//! the wrapping Hamiltonian `H_{f,R}` and the Floer generators it produces.

use std::f64::consts::PI;

use serde_json::{json, Value};
use thiserror::Error;

use crate::tropical::{coefficient_gap, cylindrical_ends, genus_and_ends, EndSpec, TropCurve, TropError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamError {
    #[error("bump interval [{0}, {1}] is empty")]
    BadInterval(f64, f64),
    #[error("level 2π·{j} is not attained on the wrapping window (h ranges over [{lo}, {hi}])")]
    OutOfRange { j: i64, lo: f64, hi: f64 },
    #[error("h − 2π·{j} changes sign {crossings} times on the sampled window")]
    NonMonotone { j: i64, crossings: usize },
    #[error("invalid perturbation config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Trop(#[from] TropError),
}

/// Named cutoff profile `χ: ℝ → [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiProfile {
    /// `σ(s)/(σ(s)+σ(1−s))` with `σ(s) = e^{−1/s}` for `s > 0`.
    Exponential,
    /// The cubic `3s² − 2s³`.
    Smoothstep,
}

impl ChiProfile {
    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        match self {
            ChiProfile::Exponential => {
                let sigma = |x: f64| (-1.0 / x).exp();
                let a = sigma(s);
                let b = sigma(1.0 - s);
                a / (a + b)
            }
            ChiProfile::Smoothstep => s * s * (3.0 - 2.0 * s),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChiProfile::Exponential => "exponential",
            ChiProfile::Smoothstep => "smoothstep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exponential" => Some(ChiProfile::Exponential),
            "smoothstep" => Some(ChiProfile::Smoothstep),
            _ => None,
        }
    }
}

/// `χ_{R1,R2}(p) = χ((p − R1)/(R2 − R1))`.
pub fn bump(profile: ChiProfile, r1: f64, r2: f64, p: f64) -> Result<f64, HamError> {
    if r1.is_nan() || r2.is_nan() || r1 >= r2 {
        return Err(HamError::BadInterval(r1, r2));
    }
    Ok(profile.eval((p - r1) / (r2 - r1)))
}

/// `μ_φ(θ) = −cos(θ − φ)`.
pub fn morse_mu(phi: f64, theta: f64) -> f64 {
    -(theta - phi).cos()
}

/// Choice of the Morse offsets `φ_α`.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiPolicy {
    /// `φ_j = 2π·frac(√p_j)` over the primes `2, 3, 5, …`.
    Auto,
    Explicit(Vec<f64>),
}

fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

pub fn auto_phis(n: usize) -> Vec<f64> {
    primes(n).into_iter().map(|p| 2.0 * PI * (p as f64).sqrt().fract()).collect()
}

/// The perturbation data `R, k, (a₁, a₂), {φ_α}, χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationConfig {
    pub r: f64,
    pub k0: i64,
    pub k1: i64,
    pub a: [f64; 2],
    pub phi: PhiPolicy,
    pub chi: ChiProfile,
    /// `R` must exceed `b·k·M`.
    pub b: f64,
    /// Denominator bound for the rational-independence check on `{φ_α}`.
    pub phi_denominator_bound: i64,
}

impl PerturbationConfig {
    pub fn new(r: f64, k: i64, a: [f64; 2]) -> Self {
        PerturbationConfig {
            r,
            k0: 0,
            k1: k,
            a,
            phi: PhiPolicy::Auto,
            chi: ChiProfile::Exponential,
            b: 10.0,
            phi_denominator_bound: 12,
        }
    }

    pub fn k(&self) -> i64 {
        self.k1 - self.k0
    }

    pub fn to_json(&self) -> Value {
        let phi = match &self.phi {
            PhiPolicy::Auto => json!("auto"),
            PhiPolicy::Explicit(v) => json!(v),
        };
        json!({
            "R": self.r, "k0": self.k0, "k1": self.k1, "a": self.a, "phi": phi,
            "chi_profile": self.chi.name(), "b": self.b, "phi_denominator_bound": self.phi_denominator_bound,
        })
    }
}

/// `a_α` and `a_α^⊥` with `a₁p₁ + a₂p₂ = a_α p_α + a_α^⊥ p_α^⊥`.
pub fn a_components(a: [f64; 2], alpha: [i64; 2]) -> (f64, f64) {
    let (x, y) = (alpha[0] as f64, alpha[1] as f64);
    let n2 = x * x + y * y;
    (a[0] * y - a[1] * x, (a[0] * x + a[1] * y) / n2)
}

fn has_small_rational_ratio(x: f64, y: f64, bound: i64) -> bool {
    if y == 0.0 {
        return x == 0.0;
    }
    let t = x / y;
    (1..=bound).any(|q| {
        let p = (t * q as f64).round();
        (t * q as f64 - p).abs() < 1e-9 * q as f64
    })
}

/// Per-end data resolved from a curve and a config.
#[derive(Clone, Debug)]
pub struct ResolvedEnd {
    pub end: EndSpec,
    pub phi: f64,
    pub a_alpha: f64,
    pub a_perp: f64,
}

/// Validates the config against the ends of a curve.
pub fn resolve(curve: &TropCurve, cfg: &PerturbationConfig) -> Result<(Vec<ResolvedEnd>, Vec<String>), HamError> {
    let ends = cylindrical_ends(curve)?;
    let mut warnings = Vec::new();
    if !(cfg.r > 0.0) {
        return Err(HamError::ConfigInvalid(format!("R = {} must be positive", cfg.r)));
    }
    if cfg.k() < 0 {
        return Err(HamError::ConfigInvalid(format!("k = {} must be nonnegative", cfg.k())));
    }
    let norm = cfg.a[0].hypot(cfg.a[1]);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(HamError::ConfigInvalid(format!("a = ({}, {}) is not a unit vector", cfg.a[0], cfg.a[1])));
    }
    let m = curve.approx(&coefficient_gap(curve)?);
    let k = cfg.k() as f64;
    if cfg.r <= cfg.b * k * m {
        return Err(HamError::ConfigInvalid(format!("R = {} must exceed b·k·M = {}", cfg.r, cfg.b * k * m)));
    }
    let phis = match &cfg.phi {
        PhiPolicy::Auto => auto_phis(ends.len()),
        PhiPolicy::Explicit(v) if v.len() == ends.len() => v.clone(),
        PhiPolicy::Explicit(v) => {
            return Err(HamError::ConfigInvalid(format!("{} phases given for {} ends", v.len(), ends.len())))
        }
    };
    for i in 0..phis.len() {
        if has_small_rational_ratio(phis[i], 2.0 * PI, cfg.phi_denominator_bound) {
            return Err(HamError::ConfigInvalid(format!("φ_{i} = {} is a small rational multiple of 2π", phis[i])));
        }
        for j in 0..i {
            if has_small_rational_ratio(phis[i], phis[j], cfg.phi_denominator_bound) {
                return Err(HamError::ConfigInvalid(format!("φ_{i} and φ_{j} are rationally dependent")));
            }
        }
    }
    let mut out = Vec::with_capacity(ends.len());
    let mut max_a = 0f64;
    for (end, phi) in ends.into_iter().zip(phis) {
        let (a_alpha, a_perp) = a_components(cfg.a, end.alpha);
        if a_alpha.abs() < 1e-12 {
            return Err(HamError::ConfigInvalid(format!("a is parallel to α = {:?}", end.alpha)));
        }
        if a_perp.abs() < 1e-12 {
            return Err(HamError::ConfigInvalid(format!("a is orthogonal to α = {:?}", end.alpha)));
        }
        max_a = max_a.max(a_alpha.abs());
        out.push(ResolvedEnd { end, phi, a_alpha, a_perp });
    }
    if k > 0.0 && 3.0 * k * max_a / cfg.r >= 2.0 * PI {
        return Err(HamError::ConfigInvalid(format!("R = {} is too small for k = {}", cfg.r, cfg.k())));
    }
    if out.iter().any(|e| e.end.norm2() > 1) {
        warnings.push("diagonal ends present: generators carry |α|² sheet labels".to_string());
    }
    Ok((out, warnings))
}

/// The wrapping window `[R² + 3R, R² + 4R]`.
pub fn window(cfg: &PerturbationConfig) -> (f64, f64) {
    let r = cfg.r;
    (r * r + 3.0 * r, r * r + 4.0 * r)
}

/// Slope `h(p_α)` of `k·H_{f,R}` along an end: it rises from `kR⁻¹a_α` to
/// `k(2π + 2R⁻¹|a_α|) + kR⁻¹a_α` across the window, following `χ`.
pub fn ham_slope(cfg: &PerturbationConfig, a_alpha: f64, p: f64) -> f64 {
    let (w0, w1) = window(cfg);
    let r = cfg.r;
    let k = cfg.k() as f64;
    let chi = cfg.chi.eval((p - w0) / (w1 - w0));
    k * ((2.0 * PI + 2.0 * a_alpha.abs() / r) * chi + a_alpha / r)
}

/// Indices `j` with `x_α^j` generators: `1..=k` if `a_α > 0`, else `0..k`.
pub fn admissible_levels(k: i64, a_alpha: f64) -> std::ops::Range<i64> {
    if a_alpha > 0.0 {
        1..k + 1
    } else {
        0..k
    }
}

/// Indices whose level `h = 2jπ` is crossed inside the window.
pub fn solvable_levels(cfg: &PerturbationConfig, a_alpha: f64) -> Vec<i64> {
    let (w0, w1) = window(cfg);
    let lo = ham_slope(cfg, a_alpha, w0);
    let hi = ham_slope(cfg, a_alpha, w1);
    let jmin = (lo / (2.0 * PI)).floor() as i64 + 1;
    let jmax = (hi / (2.0 * PI)).ceil() as i64 - 1;
    (jmin..=jmax).collect()
}

/// Number of samples in the monotonicity pre-check.
pub const MONOTONE_SAMPLES: usize = 4096;

/// The unique `p_α` in the window with `h(p_α) = 2jπ`.
pub fn solve_wrap_levels(cfg: &PerturbationConfig, a_alpha: f64, j: i64) -> Result<f64, HamError> {
    let (w0, w1) = window(cfg);
    let target = 2.0 * PI * j as f64;
    let lo = ham_slope(cfg, a_alpha, w0);
    let hi = ham_slope(cfg, a_alpha, w1);
    if !(lo < target && target < hi) {
        return Err(HamError::OutOfRange { j, lo, hi });
    }
    let mut crossings = 0;
    let mut prev = lo - target;
    let mut prev_h = lo;
    for i in 1..=MONOTONE_SAMPLES {
        let p = w0 + (w1 - w0) * i as f64 / MONOTONE_SAMPLES as f64;
        let h = ham_slope(cfg, a_alpha, p);
        if h < prev_h {
            return Err(HamError::NonMonotone { j, crossings: crossings + 2 });
        }
        let cur = h - target;
        if (prev < 0.0) != (cur < 0.0) {
            crossings += 1;
        }
        prev = cur;
        prev_h = h;
    }
    if crossings != 1 {
        return Err(HamError::NonMonotone { j, crossings });
    }
    let tol = 1e-12 * 2.0 * PI;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let h_at = |s: f64| ham_slope(cfg, a_alpha, w0 + (w1 - w0) * s);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let v = h_at(m) - target;
        if v.abs() < tol {
            return Ok(w0 + (w1 - w0) * m);
        }
        if v < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(w0 + (w1 - w0) * 0.5 * (a + b))
}

/// Cylinder coordinates `(p_α, θ_α, p_α^⊥, θ_α^⊥)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylPoint {
    pub p_alpha: f64,
    pub theta_alpha: f64,
    pub p_perp: f64,
    pub theta_perp: f64,
}

/// Time-`t` flow of `k·H_{f,R}` on the cylindrical region.
pub fn flow_point(cfg: &PerturbationConfig, a_alpha: f64, a_perp: f64, x: CylPoint, t: f64) -> CylPoint {
    let k = cfg.k() as f64;
    CylPoint {
        p_alpha: x.p_alpha,
        theta_alpha: x.theta_alpha + ham_slope(cfg, a_alpha, x.p_alpha) * t,
        p_perp: x.p_perp,
        theta_perp: x.theta_perp + k * a_perp / cfg.r * t,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenType {
    E,
    F,
}

impl GenType {
    pub fn as_str(&self) -> &'static str {
        match self {
            GenType::E => "e",
            GenType::F => "f",
        }
    }
}

/// `x_α^{j₀,j₁}`: sheet `j₀` and lift `j₁ = j₀ + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SheetLabel {
    pub j0: i64,
    pub j1: i64,
    pub gen_type: GenType,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    Interior { index: usize },
    Cylindrical { end: usize, gen_type: GenType, j: i64, sheet: i64, label: SheetLabel },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloerGenerator {
    pub kind: GenKind,
    pub degree: u8,
    /// `None` for interior generators, which are known only by count.
    pub coords: Option<CylPoint>,
}

impl FloerGenerator {
    pub fn is_interior(&self) -> bool {
        matches!(self.kind, GenKind::Interior { .. })
    }

    /// Combinatorial label independent of coordinates.
    pub fn label(&self) -> String {
        match &self.kind {
            GenKind::Interior { index } => format!("v{}", index + 1),
            GenKind::Cylindrical { end, gen_type, label, .. } => {
                format!("end{end}:x^{{{},{}}}x^{}", label.j0, label.j1, gen_type.as_str())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let coords = self.coords.map(|c| {
            json!({ "p_alpha": c.p_alpha, "theta_alpha": c.theta_alpha, "p_perp": c.p_perp, "theta_perp": c.theta_perp })
        });
        match &self.kind {
            GenKind::Interior { index } => json!({
                "kind": "interior", "index": index, "degree": self.degree, "coords": coords, "symbolic_only": true,
            }),
            GenKind::Cylindrical { end, gen_type, j, sheet, label } => json!({
                "kind": "cylindrical", "end": end, "gen_type": gen_type.as_str(), "j": j, "sheet": sheet,
                "label": { "j0": label.j0, "j1": label.j1 }, "degree": self.degree, "coords": coords,
            }),
        }
    }
}

/// Generators of `CF(L̃_{f,R}, L̃_{f,R}(−kH))`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub ends: Vec<ResolvedEnd>,
    pub generators: Vec<FloerGenerator>,
    pub warnings: Vec<String>,
}

impl GeneratorSet {
    pub fn count(&self, degree: u8) -> usize {
        self.generators.iter().filter(|g| g.degree == degree).count()
    }

    pub fn on_end(&self, end: usize) -> impl Iterator<Item = &FloerGenerator> {
        self.generators.iter().filter(move |g| matches!(g.kind, GenKind::Cylindrical { end: e, .. } if e == end))
    }
}

/// Warning emitted with every generator enumeration.
pub const INDEX_RANGE_WARNING: &str =
    "index range follows the generator count 1..k (a_α > 0) or 0..k-1 (a_α < 0); the alternative range 0..k is not used";

pub fn enumerate_generators(curve: &TropCurve, cfg: &PerturbationConfig) -> Result<GeneratorSet, HamError> {
    let (ends, mut warnings) = resolve(curve, cfg)?;
    warnings.insert(0, INDEX_RANGE_WARNING.to_string());
    let k = cfg.k();
    let mut generators = Vec::new();
    for (ei, re) in ends.iter().enumerate() {
        let n2 = re.end.norm2();
        let arg_r = PI * curve.approx(&re.end.arg_r_pi);
        let log_r = curve.approx(&re.end.log_r);
        let mut last_p = f64::NEG_INFINITY;
        for j in admissible_levels(k, re.a_alpha) {
            let p = solve_wrap_levels(cfg, re.a_alpha, j)?;
            if p <= last_p {
                return Err(HamError::NonMonotone { j, crossings: 0 });
            }
            last_p = p;
            for gen_type in [GenType::E, GenType::F] {
                let shift = if gen_type == GenType::F { PI } else { 0.0 };
                let theta_perp = re.phi + 0.5 * k as f64 * re.a_perp / cfg.r + shift;
                for sheet in 0..n2 {
                    generators.push(FloerGenerator {
                        kind: GenKind::Cylindrical {
                            end: ei,
                            gen_type,
                            j,
                            sheet,
                            label: SheetLabel { j0: sheet, j1: sheet + j, gen_type },
                        },
                        degree: if gen_type == GenType::E { 0 } else { 1 },
                        coords: Some(CylPoint {
                            p_alpha: p,
                            theta_alpha: arg_r + 2.0 * PI * sheet as f64,
                            p_perp: log_r,
                            theta_perp,
                        }),
                    });
                }
            }
        }
    }
    let (g, b) = genus_and_ends(curve)?;
    for index in 0..(2 * g + b - 2).max(0) as usize {
        generators.push(FloerGenerator { kind: GenKind::Interior { index }, degree: 1, coords: None });
    }
    Ok(GeneratorSet { ends, generators, warnings })
}

/// `g_k(p_α, θ_α^⊥)` whose differential has graph `φ^1_{kH} L̃_{f,R}` on `{p_α ≥ 3R}`;
/// `k = 0` gives `R⁻³μ_φ(θ_α^⊥)`.
pub fn g_k(cfg: &PerturbationConfig, end: &ResolvedEnd, k: i64, p: f64, theta_perp: f64) -> f64 {
    let (w0, w1) = window(cfg);
    let r = cfg.r;
    let kf = k as f64;
    let chi = cfg.chi.eval((p - w0) / (w1 - w0));
    2.0 * kf * PI * chi * p + kf * end.a_alpha * p / r + morse_mu(end.phi + kf * end.a_perp / r, theta_perp) / (r * r * r)
}

#[cfg(test)]
mod tests;
