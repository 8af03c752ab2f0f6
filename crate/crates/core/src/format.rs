//! JSON and LaTeX renderings of [`Rational`] values.
//!
//! The JSON form is the canonical stored form and round-trips exactly:
//!
//! ```json
//! {"unit":{"sign":1,"exps":{"L":-2}},
//!  "num":[{"c":1,"exps":{"L":2}},{"c":-2,"exps":{"L":1}},{"c":1,"exps":{}}],
//!  "den":[]}
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{Map, Number, Value};

use crate::error::Error;
use crate::factor::CanonFactor;
use crate::monomial::Monomial;
use crate::poly::LaurentPoly;
use crate::var::VarId;
use crate::Rational;

fn exps_to_json(m: &Monomial) -> Value {
    let mut obj = Map::new();
    for (v, e) in m.iter() {
        obj.insert(v.name(), Value::from(e));
    }
    Value::Object(obj)
}

fn bigint_to_json(c: &BigInt) -> Value {
    Value::Number(Number::from_str(&c.to_string()).expect("integer literal"))
}

pub fn to_json_value(x: &Rational) -> Value {
    let mut unit = Map::new();
    unit.insert("sign".into(), Value::from(x.sign() as i64));
    unit.insert("exps".into(), exps_to_json(x.unit()));
    let num: Vec<Value> = x
        .num()
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut t = Map::new();
            t.insert("c".into(), bigint_to_json(c));
            t.insert("exps".into(), exps_to_json(m));
            Value::Object(t)
        })
        .collect();
    let den: Vec<Value> = x
        .den()
        .iter()
        .map(|(f, &e)| {
            let mut t = Map::new();
            t.insert("exps".into(), exps_to_json(f.body()));
            t.insert("mult".into(), Value::from(e));
            Value::Object(t)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("unit".into(), Value::Object(unit));
    obj.insert("num".into(), Value::Array(num));
    obj.insert("den".into(), Value::Array(den));
    Value::Object(obj)
}

pub fn to_json(x: &Rational) -> String {
    serde_json::to_string(&to_json_value(x)).expect("json serialization")
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn exps_from_json(v: &Value) -> Result<Monomial, Error> {
    let obj = v.as_object().ok_or_else(|| perr("exps must be an object"))?;
    let mut pairs = Vec::with_capacity(obj.len());
    for (k, e) in obj {
        let var: VarId = k.parse().map_err(|_| perr(format!("unknown variable `{k}`")))?;
        let e = e
            .as_i64()
            .ok_or_else(|| perr(format!("exponent of `{k}` must be an integer")))?;
        pairs.push((var, e));
    }
    Ok(Monomial::from_pairs(pairs))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, Error> {
    obj.get(key).ok_or_else(|| perr(format!("missing field `{key}`")))
}

pub fn from_json_value(v: &Value) -> Result<Rational, Error> {
    let obj = v.as_object().ok_or_else(|| perr("expected an object"))?;
    let unit = field(obj, "unit")?
        .as_object()
        .ok_or_else(|| perr("unit must be an object"))?;
    let mut sign = match field(unit, "sign")?.as_i64() {
        Some(1) => 1i8,
        Some(-1) => -1i8,
        _ => return Err(perr("sign must be 1 or -1")),
    };
    let mut unit_m = exps_from_json(field(unit, "exps")?)?;
    let mut terms = Vec::new();
    for t in field(obj, "num")?
        .as_array()
        .ok_or_else(|| perr("num must be an array"))?
    {
        let t = t.as_object().ok_or_else(|| perr("term must be an object"))?;
        let c = match field(t, "c")? {
            Value::Number(n) => BigInt::from_str(&n.to_string())
                .map_err(|_| perr(format!("coefficient `{n}` is not an integer")))?,
            _ => return Err(perr("coefficient must be a number")),
        };
        terms.push((exps_from_json(field(t, "exps")?)?, c));
    }
    let mut den: BTreeMap<CanonFactor, u32> = BTreeMap::new();
    for d in field(obj, "den")?
        .as_array()
        .ok_or_else(|| perr("den must be an array"))?
    {
        let d = d.as_object().ok_or_else(|| perr("factor must be an object"))?;
        let body = exps_from_json(field(d, "exps")?)?;
        let mult = field(d, "mult")?
            .as_u64()
            .filter(|&m| m > 0 && m <= u32::MAX as u64)
            .ok_or_else(|| perr("mult must be a positive integer"))? as u32;
        let o = CanonFactor::orient(&body).ok_or_else(|| perr("factor body must be nonconstant"))?;
        if o.sign < 0 && mult % 2 == 1 {
            sign = -sign;
        }
        unit_m = unit_m.mul(&o.unit.inv().pow(mult as i64));
        *den.entry(o.factor).or_insert(0) += mult;
    }
    Ok(Rational::from_parts(
        sign,
        unit_m,
        LaurentPoly::from_terms(terms),
        den,
    ))
}

pub fn from_json(s: &str) -> Result<Rational, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr(e.to_string()))?;
    from_json_value(&v)
}

fn latex_poly(p: &LaurentPoly<BigInt>) -> String {
    let mut s = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if neg {
            s.push('-');
        } else if i > 0 {
            s.push('+');
        }
        if m.is_one() {
            s.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                s.push_str(&abs.to_string());
            }
            s.push_str(&m.latex());
        }
    }
    s
}

/// Display-only LaTeX. The numerator is shown expanded.
pub fn to_latex(x: &Rational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut top = String::new();
    if !x.unit().is_one() {
        top.push_str(&x.unit().latex());
    }
    if !x.num().is_one() {
        if top.is_empty() && x.den().is_empty() && x.num().len() > 1 && x.sign() > 0 {
            top.push_str(&latex_poly(x.num()));
        } else if x.num().len() > 1 {
            top.push_str(&format!("\\left({}\\right)", latex_poly(x.num())));
        } else {
            top.push_str(&latex_poly(x.num()));
        }
    }
    if top.is_empty() {
        top.push('1');
    }
    let sign = if x.sign() < 0 { "-" } else { "" };
    if x.den().is_empty() {
        return format!("{sign}{top}");
    }
    let bottom: Vec<String> = x
        .den()
        .iter()
        .map(|(f, &e)| {
            let b = format!("\\left(1-{}\\right)", f.body().latex());
            if e == 1 {
                b
            } else {
                format!("{b}^{{{e}}}")
            }
        })
        .collect();
    format!("{sign}\\frac{{{top}}}{{{}}}", bottom.join(""))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g11() -> Rational {
        Rational::var(VarId::L)
            .sub(&Rational::one())
            .pow(2)
            .unwrap()
            .mul_monomial(1, &Monomial::tl(0, -2))
    }

    #[test]
    fn canonical_json_of_base_value() {
        assert_eq!(
            to_json(&g11()),
            r#"{"unit":{"sign":1,"exps":{"L":-2}},"num":[{"c":1,"exps":{"L":2}},{"c":-2,"exps":{"L":1}},{"c":1,"exps":{}}],"den":[]}"#
        );
    }

    #[test]
    fn json_roundtrip_with_denominators() {
        let x = g11()
            .mul(&Rational::one_minus_inv(&Monomial::from_pairs([(VarId::Lam(2), 1), (VarId::L, -2)])).unwrap())
            .mul_monomial(-1, &Monomial::var(VarId::Tau));
        let s = to_json(&x);
        let back = from_json(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(to_json(&back), s);
    }

    #[test]
    fn big_coefficients_survive() {
        let big = BigInt::from(3).pow(80u32);
        let x = Rational::from_poly(LaurentPoly::term(Monomial::var(VarId::T), big.clone()) + LaurentPoly::one());
        assert_eq!(from_json(&to_json(&x)).unwrap(), x);
        assert!(to_json(&x).contains(&big.to_string()));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(from_json("{"), Err(Error::Parse(_))));
        assert!(matches!(from_json(r#"{"unit":{"sign":2,"exps":{}},"num":[],"den":[]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            from_json(r#"{"unit":{"sign":1,"exps":{"x":1}},"num":[],"den":[]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            from_json(r#"{"unit":{"sign":1,"exps":{}},"num":[{"c":1,"exps":{}}],"den":[{"exps":{},"mult":1}]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn latex_of_base_value() {
        assert_eq!(
            to_latex(&g11()),
            "\\mathbb{L}^{-2}\\left(\\mathbb{L}^{2}-2\\mathbb{L}+1\\right)"
        );
        assert_eq!(to_latex(&Rational::one()), "1");
    }
}
