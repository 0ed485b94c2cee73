//! Certified rational enclosures of the real constants that may appear as
//! valuation generators.
//!
//! Every routine works in binary fixed point: a value `x` is returned as an
//! integer `c` and an error bound `e` with `|x·2^bits − c| ≤ e`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// A closed interval `[lo, hi]` of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn from_fixed(center: BigInt, err: BigInt, bits: u32) -> Self {
        let den = BigInt::one() << bits;
        RatInterval {
            lo: BigRational::new(&center - &err, den.clone()),
            hi: BigRational::new(center + err, den),
        }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn scale(&self, c: &BigRational) -> RatInterval {
        if c.is_negative() {
            RatInterval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            RatInterval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Outward-rounded `f64` enclosure.
    pub fn to_f64_outward(&self) -> (f64, f64) {
        let lo = rat_to_f64(&self.lo);
        let hi = rat_to_f64(&self.hi);
        (next_down(lo), next_up(hi))
    }
}

pub fn big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    // Scale so the quotient keeps 64 significant bits before conversion.
    let n = r.numer();
    let d = r.denom();
    if n.is_zero() {
        return 0.0;
    }
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 { (n << shift as usize) / d } else { n / (d << (-shift) as usize) };
    let qf = bigint_to_f64(&q);
    qf * 2f64.powi(-(shift as i32))
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let (sign, mag) = x.to_u64_digits();
    let mut v = 0f64;
    for d in mag.iter().rev() {
        v = v * 18446744073709551616.0 + *d as f64;
    }
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

pub fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let y = x + x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
    if y > x {
        y
    } else {
        f64::INFINITY
    }
}

pub fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// `atan(1/x)` in fixed point with `bits` fractional bits.
fn atan_inv(x: u64, bits: u32) -> (BigInt, BigInt) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut sum = power.clone();
    let mut n: u64 = 1;
    let mut steps: u64 = 1;
    loop {
        power = power / &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
        steps += 1;
    }
    // Each floor division loses less than one unit; the tail is below one unit.
    (sum, BigInt::from(2 * steps + 2))
}

/// Enclosure of π via Machin's formula.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    let guard = 16;
    let b = bits + guard;
    let (a5, e5) = atan_inv(5, b);
    let (a239, e239) = atan_inv(239, b);
    let center = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let err = BigInt::from(16) * e5 + BigInt::from(4) * e239;
    RatInterval::from_fixed(center, err, b)
}

/// `atanh(a/b)` in fixed point for `0 ≤ a/b ≤ 1/2`.
fn atanh_ratio(a: &BigInt, b: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let a2 = a * a;
    let b2 = b * b;
    let mut power = (a << bits) / b;
    let mut sum = power.clone();
    let mut n: u64 = 1;
    loop {
        power = power * &a2 / &b2;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * n + 1);
        n += 1;
    }
    // Geometric tail with ratio at most 1/4 adds at most one unit beyond the last
    // term; each truncation costs at most one unit.
    (sum, BigInt::from(2 * n + 4))
}

/// Enclosure of `ln(m)` for a positive integer `m`.
fn ln_int(m: &BigUint, bits: u32) -> (BigInt, BigInt) {
    let guard = 16;
    let b = bits + guard;
    if m.is_one() {
        return (BigInt::zero(), BigInt::zero());
    }
    // m = 2^e · t with t ∈ [1, 2).
    let e = m.bits() - 1;
    let (l2, l2e) = atanh_ratio(&BigInt::one(), &BigInt::from(3), b);
    let ln2 = l2 * 2;
    let ln2e = l2e * 2;
    let num = BigInt::from(m.clone()) - (BigInt::one() << e);
    let den = BigInt::from(m.clone()) + (BigInt::one() << e);
    let (t, te) = atanh_ratio(&num, &den, b);
    let center = BigInt::from(e) * ln2 + t * 2;
    let err = BigInt::from(e) * ln2e + te * 2;
    // Rescale from b to bits + guard: already at b.
    (center, err + BigInt::one())
}

/// Enclosure of `ln r` for a positive rational `r`.
pub fn ln_enclosure(r: &Rational64, bits: u32) -> RatInterval {
    let guard = 16;
    let p = BigUint::from(r.numer().unsigned_abs());
    let q = BigUint::from(r.denom().unsigned_abs());
    let (cp, ep) = ln_int(&p, bits);
    let (cq, eq) = ln_int(&q, bits);
    RatInterval::from_fixed(cp - cq, ep + eq, bits + guard)
}

/// Enclosure of `√r` for a nonnegative rational `r`.
pub fn sqrt_enclosure(r: &Rational64, bits: u32) -> RatInterval {
    let p = BigUint::from(r.numer().unsigned_abs());
    let q = BigUint::from(r.denom().unsigned_abs());
    // √(p/q) = √(p q 4^bits) / (q 2^bits)
    let n = &p * &q << (2 * bits as usize);
    let s = n.sqrt();
    let den = BigInt::from(q) << bits;
    let lo = BigRational::new(BigInt::from(s.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(s) + 1, den);
    RatInterval::new(lo, hi)
}

/// Greatest common divisor helper for `i64` vectors.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
