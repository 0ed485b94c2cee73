//! Module structure of the diagonal end of the pair of pants against a fibre
//! torus: the sheet table for `x_α^{j₀,j₁}x_α^e · e_{j₁} = g^{j₀,j₁}(ρ) e_{j₀}`,
//! the closed generators `X_α^k` and the two-coefficient solve for `(a₁, c)`.
//!
//! Sheets are labelled modulo `|α|² = 2`; the holonomy identification is
//! `ξ^{0,1} = ξ₁`, `ξ^{1,2} = ξ₂`, and the brane sign `−1` sits on odd-to-odd
//! generators of odd gap.

use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{laurent_term, CurvePresentation, LaurentPoly, MirrorError, QuotientElement, Result};
use crate::hamiltonian::{GenType, SheetLabel};

/// `sign · z₁^{m₁} z₂^{m₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedMonomial {
    pub sign: i64,
    pub m1: i64,
    pub m2: i64,
}

impl SignedMonomial {
    pub fn to_laurent(&self, pres: &CurvePresentation) -> LaurentPoly {
        laurent_term(pres.scalar(self.sign), self.m1, self.m2)
    }

    pub fn display(&self) -> String {
        let s = if self.sign < 0 { "-" } else { "" };
        format!("{s}z1^{}*z2^{}", self.m1, self.m2)
    }
}

/// `g^{j₀,j₁}` for `k = j₁ − j₀`: `z₁^l z₂^l` when `k = 2l`; for `k = 2l+1`,
/// `z₁^{l+1}z₂^l` from an even sheet and `−z₁^l z₂^{l+1}` from an odd one.
pub fn pop_module_table(j0: i64, j1: i64) -> Result<SignedMonomial> {
    if j1 < j0 {
        return Err(MirrorError::NegativeGap { j0, j1 });
    }
    let k = j1 - j0;
    let l = k / 2;
    Ok(if k % 2 == 0 {
        SignedMonomial { sign: 1, m1: l, m2: l }
    } else if j0.rem_euclid(2) == 0 {
        SignedMonomial { sign: 1, m1: l + 1, m2: l }
    } else {
        SignedMonomial { sign: -1, m1: l, m2: l + 1 }
    })
}

/// The closed element `X_α^k` with its action on `e₁ + e₂`.
#[derive(Clone, Debug)]
pub struct PopGenerator {
    pub k: i64,
    pub sheets: Vec<SheetLabel>,
    /// Coefficients of `e₀` and `e₁` in `X_α^k · (e₁ + e₂)`.
    pub components: [QuotientElement; 2],
    /// Whether both components agree, so `X_α^k` acts by a function.
    pub acts_by_function: bool,
    pub function: QuotientElement,
    /// `z₁^l z₂^l` for `k = 2l`, `z₁^{l+1}z₂^l` for `k = 2l+1`.
    pub expected: SignedMonomial,
    pub matches_expected: bool,
}

impl PopGenerator {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "sheets": self.sheets.iter().map(|s| json!([s.j0, s.j1])).collect::<Vec<_>>(),
            "acts_by_function": self.acts_by_function,
            "expected": self.expected.display(),
            "matches_expected": self.matches_expected,
        })
    }
}

/// `X_α^k`: `x^{0,k} + x^{1,k+1}` for even `k`, plus `x^{1,k}` for odd `k`.
pub fn pop_generator(pants: &CurvePresentation, k: i64) -> Result<PopGenerator> {
    if k < 0 {
        return Err(MirrorError::NegativeGap { j0: 0, j1: k });
    }
    let mut pairs = vec![(0, k), (1, k + 1)];
    if k % 2 == 1 {
        pairs.push((1, k));
    }
    let sheets: Vec<SheetLabel> = pairs.iter().map(|&(j0, j1)| SheetLabel { j0, j1, gen_type: GenType::E }).collect();
    let mut comps = [LaurentPoly::new(), LaurentPoly::new()];
    for &(j0, j1) in &pairs {
        let g = pop_module_table(j0, j1)?.to_laurent(pants);
        let target = &mut comps[j0.rem_euclid(2) as usize];
        for (m, c) in g {
            let cur = target.remove(&m);
            let s = match cur {
                Some(x) => x.add(&c)?,
                None => c,
            };
            if !s.is_zero() {
                target.insert(m, s);
            }
        }
    }
    let c0 = pants.reduce(&comps[0])?;
    let c1 = pants.reduce(&comps[1])?;
    let acts = pants.equal(&c0, &c1)?;
    let l = k / 2;
    let expected = if k % 2 == 0 { SignedMonomial { sign: 1, m1: l, m2: l } } else { SignedMonomial { sign: 1, m1: l + 1, m2: l } };
    let exp_el = pants.reduce(&expected.to_laurent(pants))?;
    let matches = acts && pants.equal(&c0, &exp_el)?;
    Ok(PopGenerator { k, sheets, components: [c0.clone(), c1], acts_by_function: acts, function: c0, expected, matches_expected: matches })
}

/// Constraint on `c = Σ_{n≥0} c_n t^{−n}` used when matching coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ansatz {
    /// `c = 1 + O(t^{−2})`.
    LeadingOne,
    /// `c = 1`.
    Exact,
}

/// Result of matching `c(−c z₂ + a₁) = b z₂ + r` with `z₂ = ξ₂ t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PopSolve {
    pub a1: Rational64,
    pub c: Rational64,
    /// Solutions of the two matched equations excluded by the ansatz, as `(c₀, a₁)`.
    pub rejected: Vec<(Rational64, Rational64)>,
    /// Whether the lower coefficients `c₂, c₃, …` came out zero for every sampled `ξ₂`.
    pub higher_terms_vanish: bool,
}

impl PopSolve {
    pub fn to_json(&self) -> Value {
        json!({
            "a1": self.a1.to_string(),
            "c": self.c.to_string(),
            "rejected": self.rejected.iter().map(|(c, a)| json!({ "c0": c.to_string(), "a1": a.to_string() })).collect::<Vec<_>>(),
            "higher_terms_vanish": self.higher_terms_vanish,
        })
    }
}

fn rational_sqrt(x: Rational64) -> Option<Rational64> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (*x.numer(), *x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (sn * sn == n && sd * sd == d).then(|| Rational64::new(sn, sd))
}

/// Number of lower-order coefficients of `c` checked.
const HIGHER_ORDERS: usize = 8;

/// Solves the two-coefficient match for the right-hand side `b z₂ + r`.
///
/// `t¹`: `−c₀² = b`; `t⁰`: `c₀a₁ − 2ξ₂c₀c₁ = r`, with `c₁ = 0` under either ansatz.
pub fn solve_pop_equation(b: Rational64, r: Rational64, ansatz: Ansatz) -> Result<PopSolve> {
    let one = Rational64::one();
    let roots: Vec<Rational64> = match ansatz {
        Ansatz::Exact => {
            if -b != one {
                return Err(MirrorError::NoAdmissibleSolution(format!("c = 1 forces the z2 coefficient -1, got {b}")));
            }
            vec![one]
        }
        Ansatz::LeadingOne => match rational_sqrt(-b) {
            Some(s) if s.is_zero() => vec![s],
            Some(s) => vec![s, -s],
            None => Vec::new(),
        },
    };
    let mut chosen = None;
    let mut rejected = Vec::new();
    for c0 in roots {
        if c0.is_zero() {
            continue;
        }
        let a1 = r / c0;
        if c0 == one {
            chosen = Some(a1);
        } else {
            rejected.push((c0, a1));
        }
    }
    let a1 = chosen.ok_or_else(|| MirrorError::NoAdmissibleSolution(format!("no root c0 = 1 of c0^2 = {}", -b)))?;
    // t^{1−n}: −ξ₂(2c₀c_n + Σ_{0<i<n} c_i c_{n−i}) + a₁c_{n−1} = 0 for n ≥ 2.
    let mut higher = true;
    for xi in [Rational64::one(), Rational64::new(-3, 2), Rational64::new(7, 5)] {
        let mut c = vec![one, Rational64::zero()];
        for n in 2..2 + HIGHER_ORDERS {
            let mut conv = Rational64::zero();
            for i in 1..n {
                conv += c[i] * c[n - i];
            }
            let cn = (a1 * c[n - 1] - xi * conv) / (Rational64::from_integer(2) * xi);
            c.push(cn);
        }
        higher &= c[2..].iter().all(|x| x.is_zero());
    }
    Ok(PopSolve { a1, c: one, rejected, higher_terms_vanish: higher })
}

/// The pair-of-pants instance `c(−c z₂ + a₁) = −z₂ + 1`.
pub fn solve_pop_coefficients() -> Result<PopSolve> {
    solve_pop_equation(-Rational64::one(), Rational64::one(), Ansatz::LeadingOne)
}
