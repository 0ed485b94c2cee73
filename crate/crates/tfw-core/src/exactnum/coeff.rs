//! Complex coefficients of Novikov series with an optional exact
//! rational-modulus, rational-phase tag.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::valuation::parse_rational;
use super::ExactError;

/// Default coefficient tolerance `ε_c`.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Exact value `modulus · e^{iπ·phase}` with `modulus > 0` and `phase ∈ [0, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactTag {
    pub modulus: Rational64,
    pub phase: Rational64,
}

impl ExactTag {
    fn normalized(modulus: Rational64, phase: Rational64) -> Option<Self> {
        if modulus.is_zero() {
            return None;
        }
        let (m, p) = if modulus.is_negative() { (-modulus, phase + Rational64::one()) } else { (modulus, phase) };
        Some(ExactTag { modulus: m, phase: reduce_mod2(p) })
    }

    fn complex(&self) -> Complex64 {
        let m = *self.modulus.numer() as f64 / *self.modulus.denom() as f64;
        let p = *self.phase.numer() as f64 / *self.phase.denom() as f64;
        phase_pi_to_complex(p) * m
    }
}

/// Reduces a rational into `[0, 2)`.
pub fn reduce_mod2(p: Rational64) -> Rational64 {
    let two = Rational64::from_integer(2);
    let q = (p / two).floor();
    p - q * two
}

/// `e^{iπp}` with exact values at multiples of one half.
pub fn phase_pi_to_complex(p: f64) -> Complex64 {
    let r = p.rem_euclid(2.0);
    for (k, z) in [(0.0, (1.0, 0.0)), (0.5, (0.0, 1.0)), (1.0, (-1.0, 0.0)), (1.5, (0.0, -1.0)), (2.0, (1.0, 0.0))] {
        if r == k {
            return Complex64::new(z.0, z.1);
        }
    }
    let a = std::f64::consts::PI * r;
    Complex64::new(a.cos(), a.sin())
}

/// A complex coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coeff {
    pub z: Complex64,
    pub exact: Option<ExactTag>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { z: Complex64::zero(), exact: None }
    }

    pub fn one() -> Self {
        Self::rational(Rational64::one())
    }

    pub fn rational(r: Rational64) -> Self {
        Self::polar_pi(r, Rational64::zero())
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational64::from_integer(n))
    }

    /// `modulus · e^{iπ·phase}` with exact bookkeeping.
    pub fn polar_pi(modulus: Rational64, phase: Rational64) -> Self {
        match ExactTag::normalized(modulus, phase) {
            Some(t) => Coeff { z: t.complex(), exact: Some(t) },
            None => Self::zero(),
        }
    }

    /// A unit `e^{iπ·phase}`.
    pub fn unit_pi(phase: Rational64) -> Self {
        Self::polar_pi(Rational64::one(), phase)
    }

    pub fn complex(z: Complex64) -> Self {
        Coeff { z, exact: None }
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        match self.exact {
            Some(_) => false,
            None => self.z.norm() <= eps,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact.is_none() && self.z == Complex64::zero()
    }

    pub fn neg(&self) -> Self {
        match self.exact {
            Some(t) => Self::polar_pi(t.modulus, t.phase + Rational64::one()),
            None => Coeff { z: -self.z, exact: None },
        }
    }

    pub fn conj(&self) -> Self {
        match self.exact {
            Some(t) => Self::polar_pi(t.modulus, -t.phase),
            None => Coeff { z: self.z.conj(), exact: None },
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self.exact, o.exact) {
            (Some(a), Some(b)) => Self::polar_pi(a.modulus * b.modulus, a.phase + b.phase),
            _ => Coeff { z: self.z * o.z, exact: None },
        }
    }

    /// Sum; results below `eps` relative to the summands collapse to zero.
    pub fn add(&self, o: &Self, eps: f64) -> Self {
        if let (Some(a), Some(b)) = (self.exact, o.exact) {
            let d = reduce_mod2(a.phase - b.phase);
            if d.is_zero() {
                return Self::polar_pi(a.modulus + b.modulus, a.phase);
            }
            if d == Rational64::one() {
                return Self::polar_pi(a.modulus - b.modulus, a.phase);
            }
        }
        let z = self.z + o.z;
        let scale = 1f64.max(self.z.norm()).max(o.z.norm());
        if z.norm() <= eps * scale {
            Self::zero()
        } else {
            Coeff { z, exact: None }
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self.exact {
            Some(t) => Some(Self::polar_pi(t.modulus.recip(), -t.phase)),
            None if self.z == Complex64::zero() => None,
            None => Some(Coeff { z: self.z.inv(), exact: None }),
        }
    }

    /// Equality up to `eps` (exact when both carry tags).
    pub fn approx_eq(&self, o: &Self, eps: f64) -> bool {
        if let (Some(a), Some(b)) = (self.exact, o.exact) {
            return a == b;
        }
        let scale = 1f64.max(self.z.norm()).max(o.z.norm());
        (self.z - o.z).norm() <= eps * scale
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "re": self.z.re, "im": self.z.im });
        if let Some(t) = self.exact {
            v["exact"] = json!({ "modulus": t.modulus.to_string(), "phase_pi": t.phase.to_string() });
        }
        v
    }

    /// Inverse of [`Coeff::to_json`]; an exact tag takes precedence over `re`/`im`.
    pub fn from_json(v: &Value) -> Result<Self, ExactError> {
        if let Some(t) = v.get("exact") {
            let m = t.get("modulus").and_then(Value::as_str).ok_or_else(|| ExactError::Parse("exact.modulus".into()))?;
            let p = t.get("phase_pi").and_then(Value::as_str).ok_or_else(|| ExactError::Parse("exact.phase_pi".into()))?;
            return Ok(Self::polar_pi(parse_rational(m)?, parse_rational(p)?));
        }
        let re = v.get("re").and_then(Value::as_f64).ok_or_else(|| ExactError::Parse("coefficient re".into()))?;
        let im = v.get("im").and_then(Value::as_f64).unwrap_or(0.0);
        Ok(Self::complex(Complex64::new(re, im)))
    }
}
