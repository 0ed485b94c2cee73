//! The distinguished candidate sets matched to the degree-zero generators.

use super::{pop_module_table, CurvePresentation, QuotientElement, Result};
use crate::exactnum::Novikov;

/// `1`, `z₁^i + B_i` and `z₂^i + A_i` for `0 < i ≤ k`, `z₁^{−i}` and `z₂^{−i}` for `0 < i < k`.
///
/// `a` and `b` hold `A_1..A_k` and `B_1..B_k`; missing entries are zero.
pub fn hms_lq_candidates(pres: &CurvePresentation, k: i64, a: &[Novikov], b: &[Novikov]) -> Result<Vec<QuotientElement>> {
    let constant = |v: &[Novikov], i: i64| match v.get((i - 1) as usize) {
        Some(x) => pres.constant_element(x),
        None => QuotientElement::zero(),
    };
    let mut out = vec![pres.one()];
    for i in 1..=k {
        out.push(pres.z1_pow(i).add(&constant(b, i))?);
        out.push(pres.z2_pow(i)?.add(&constant(a, i))?);
    }
    for i in 1..k {
        out.push(pres.z1_pow(-i));
        out.push(pres.z2_pow(-i)?);
    }
    Ok(out)
}

/// `1`, `z₁^{−i}` and `z₂^{−i}` for `1 ≤ i ≤ k`, and the table functions `g^{0,j}` for `1 ≤ j ≤ k`.
pub fn pants_candidates(pres: &CurvePresentation, k: i64) -> Result<Vec<QuotientElement>> {
    let mut out = vec![pres.one()];
    for i in 1..=k {
        out.push(pres.z1_pow(-i));
        out.push(pres.z2_pow(-i)?);
    }
    for j in 1..=k {
        let g = pop_module_table(0, j)?;
        out.push(pres.reduce(&g.to_laurent(pres))?);
    }
    Ok(out)
}
