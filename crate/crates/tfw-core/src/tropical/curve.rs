//! Laurent polynomial input: support, log-norms and phases over declared parameters.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use serde_json::{json, Value};

use super::TropError;
use crate::exactnum::{parse_linexpr, parse_rational, Provider, Valuation, ValuationBasis};

pub type Exp = [i64; 2];

/// Coefficient `c_α` as `log|c_α|` and `arg c_α / π`, both linear in the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffData {
    pub log_norm: Valuation,
    pub phase_pi: Valuation,
}

/// A declared real parameter with a rational enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub lo: Rational64,
    pub hi: Rational64,
}

impl Param {
    pub fn point(name: &str, v: Rational64) -> Self {
        Param { name: name.to_string(), lo: v, hi: v }
    }

    pub fn value(&self) -> Option<Rational64> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

/// `f = Σ c_α z^α` with exact coefficient data.
#[derive(Clone, Debug)]
pub struct TropCurve {
    pub name: String,
    pub basis: Arc<ValuationBasis>,
    pub params: Vec<Param>,
    pub terms: BTreeMap<Exp, CoeffData>,
}

fn parse_param_value(name: &str, s: &str) -> Result<Param, TropError> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let (a, b) = inner.split_once(',').ok_or_else(|| TropError::Parse(format!("bad interval for {name}: {s}")))?;
        let lo = parse_rational(a)?;
        let hi = parse_rational(b)?;
        if lo > hi {
            return Err(TropError::Parse(format!("empty interval for {name}: {s}")));
        }
        return Ok(Param { name: name.to_string(), lo, hi });
    }
    Ok(Param::point(name, parse_rational(t)?))
}

impl TropCurve {
    /// Builds a curve; rejects empty support and repeated exponents.
    pub fn new(name: &str, params: Vec<Param>, terms: Vec<(Exp, CoeffData)>, basis: Arc<ValuationBasis>) -> Result<Self, TropError> {
        if terms.is_empty() {
            return Err(TropError::EmptySupport);
        }
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            if m.insert(e, c).is_some() {
                return Err(TropError::DuplicateExponent(e));
            }
        }
        Ok(TropCurve { name: name.to_string(), basis, params, terms: m })
    }

    pub fn basis_for(params: &[Param]) -> Result<Arc<ValuationBasis>, TropError> {
        let gens = params
            .iter()
            .map(|p| (p.name.clone(), Provider::Fixed { lo: p.lo, hi: p.hi }))
            .collect();
        Ok(Arc::new(ValuationBasis::new(gens)?))
    }

    /// Parses `{"terms":[{"exp":[m1,m2],"log_norm":"..","phase_pi":".."}],"parameters":{"s":"1"}}`.
    pub fn from_json(name: &str, v: &Value) -> Result<Self, TropError> {
        Self::from_json_with_depth(name, v, None)
    }

    pub fn from_json_with_depth(name: &str, v: &Value, depth: Option<u32>) -> Result<Self, TropError> {
        let mut params = Vec::new();
        if let Some(ps) = v.get("parameters") {
            let obj = ps.as_object().ok_or_else(|| TropError::Parse("parameters must be an object".into()))?;
            for (k, x) in obj {
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(TropError::Parse(format!("parameter {k} must be a string"))),
                };
                params.push(parse_param_value(k, &s)?);
            }
        }
        let mut basis = ValuationBasis::new(
            params.iter().map(|p| (p.name.clone(), Provider::Fixed { lo: p.lo, hi: p.hi })).collect(),
        )?;
        if let Some(d) = depth {
            basis = basis.with_depth(d);
        }
        let basis = Arc::new(basis);
        let arr = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| TropError::Parse("missing terms array".into()))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let e = t
                .get("exp")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| TropError::Parse("exp must be [m1, m2]".into()))?;
            let m1 = e[0].as_i64().ok_or_else(|| TropError::Parse("exponent must be an integer".into()))?;
            let m2 = e[1].as_i64().ok_or_else(|| TropError::Parse("exponent must be an integer".into()))?;
            let field = |key: &str| -> Result<Valuation, TropError> {
                match t.get(key) {
                    None => Ok(Valuation::zero()),
                    Some(Value::String(s)) => Ok(parse_linexpr(&basis, s)?),
                    Some(Value::Number(n)) => Ok(parse_linexpr(&basis, &n.to_string())?),
                    Some(_) => Err(TropError::Parse(format!("{key} must be a string"))),
                }
            };
            terms.push(([m1, m2], CoeffData { log_norm: field("log_norm")?, phase_pi: field("phase_pi")? }));
        }
        Self::new(name, params, terms, basis)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                json!({
                    "exp": [e[0], e[1]],
                    "log_norm": c.log_norm.display(&self.basis).to_string(),
                    "phase_pi": c.phase_pi.display(&self.basis).to_string(),
                })
            })
            .collect();
        let mut params = serde_json::Map::new();
        for p in &self.params {
            let s = if p.lo == p.hi { p.lo.to_string() } else { format!("[{}, {}]", p.lo, p.hi) };
            params.insert(p.name.clone(), Value::String(s));
        }
        json!({ "terms": terms, "parameters": params })
    }

    /// `1 − z₁ − z₂` with every `|c| = 1`.
    pub fn pants() -> Self {
        let basis = Arc::new(ValuationBasis::unit());
        let one = |ph: i64| CoeffData { log_norm: Valuation::zero(), phase_pi: Valuation::integer(ph) };
        Self::new("pants", Vec::new(), vec![([0, 0], one(0)), ([1, 0], one(1)), ([0, 1], one(1))], basis)
            .expect("pants is valid")
    }

    /// `1 − z₁ − z₂ + q⁻¹z₁z₂` with parameters `logq = log|q|` and `argq = arg q / π`.
    pub fn lq(logq: Rational64, argq_pi: Rational64) -> Self {
        let params = vec![Param::point("logq", logq), Param::point("argq", argq_pi)];
        let basis = Self::basis_for(&params).expect("lq parameters are valid");
        let one = |ph: i64| CoeffData { log_norm: Valuation::zero(), phase_pi: Valuation::integer(ph) };
        let qinv = CoeffData {
            log_norm: Valuation::generator(1, Rational64::from_integer(-1)),
            phase_pi: Valuation::generator(2, Rational64::from_integer(-1)),
        };
        Self::new("lq", params, vec![([0, 0], one(0)), ([1, 0], one(1)), ([0, 1], one(1)), ([1, 1], qinv)], basis)
            .expect("lq is valid")
    }

    pub fn support(&self) -> Vec<Exp> {
        self.terms.keys().copied().collect()
    }

    pub fn log_norm(&self, e: &Exp) -> &Valuation {
        &self.terms[e].log_norm
    }

    pub fn phase_pi(&self, e: &Exp) -> &Valuation {
        &self.terms[e].phase_pi
    }

    /// Rational value of a parameter expression when every parameter is a point.
    pub fn rational_value(&self, v: &Valuation) -> Option<Rational64> {
        let mut acc = v.constant_part();
        for (id, c) in v.terms() {
            if *id == 0 {
                continue;
            }
            acc += *c * self.params[*id as usize - 1].value()?;
        }
        Some(acc)
    }

    /// Floating value of a parameter expression.
    pub fn approx(&self, v: &Valuation) -> f64 {
        self.basis.approx(v)
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }
}
