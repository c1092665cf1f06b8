//! Canonical JSON renderings.
//!
//! Objects use `serde_json`'s sorted maps and every list is emitted in a fixed
//! order, so equal values always serialize to equal bytes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bilinear::QTable;
use crate::error::{Error, Result};
use crate::expansion::{build_d, ExpansionSet};
use crate::integrality::{chi_condition, IntegralityReport, Verdict, Witness};
use crate::lambda::{Monomial, Rational, LP};
use crate::semigroup::TelescopicData;
use crate::series::TSeries;
use crate::sigma::{SigmaExpansion, Tau};
use crate::useries::{factorial_product, USeries};

/// `"p/q"` with `q > 0`, also for integers.
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `[[[i, [j_1..j_m]], mult], ...]` in symbol order.
pub fn monomial(td: &TelescopicData, m: &Monomial) -> Value {
    Value::Array(
        m.0.iter()
            .map(|&(s, k)| {
                let l = &td.lambda_catalog[s as usize];
                json!([[l.eq_index, l.exponents.0], k])
            })
            .collect(),
    )
}

pub fn parse_monomial(td: &TelescopicData, v: &Value) -> Result<Monomial> {
    let bad = || Error::Parse(format!("malformed monomial {v}"));
    let mut factors = Vec::new();
    for f in v.as_array().ok_or_else(bad)? {
        let (sym, mult) = match f.as_array().map(Vec::as_slice) {
            Some([sym, mult]) => (sym, mult.as_u64().ok_or_else(bad)?),
            _ => return Err(bad()),
        };
        let (i, e) = match sym.as_array().map(Vec::as_slice) {
            Some([i, e]) => (i.as_u64().ok_or_else(bad)? as usize, e),
            _ => return Err(bad()),
        };
        let e: Vec<u32> = serde_json::from_value(e.clone()).map_err(|_| bad())?;
        let id = td.lambda_id(i, &e).ok_or_else(|| Error::Parse(format!("unknown symbol lambda^({i})_{e:?}")))?;
        let mut p = LP::symbol(id as u16);
        p = p.pow(mult as u32);
        factors.push(p);
    }
    let p = factors.iter().fold(LP::one(), |acc, f| &acc * f);
    let m = p.monomials().next().cloned().unwrap_or_else(Monomial::one);
    Ok(m)
}

/// `[{coeff: "p/q", monomial: [...]}, ...]`.
pub fn lambda_polynomial(td: &TelescopicData, p: &LP) -> Value {
    Value::Array(p.iter().map(|(m, r)| json!({ "coeff": rational(&r), "monomial": monomial(td, m) })).collect())
}

pub fn parse_lambda_polynomial(td: &TelescopicData, v: &Value) -> Result<LP> {
    let bad = || Error::Parse(format!("malformed polynomial {v}"));
    let mut p = LP::zero();
    for term in v.as_array().ok_or_else(bad)? {
        let c = parse_rational(term.get("coeff").and_then(Value::as_str).ok_or_else(bad)?)?;
        let m = parse_monomial(td, term.get("monomial").ok_or_else(bad)?)?;
        p.add_term(m, c);
    }
    Ok(p)
}

/// Hurwitz coefficients `[{n, zeta}]` of a u-series.
pub fn hurwitz_terms(td: &TelescopicData, s: &USeries) -> Value {
    Value::Array(s.hurwitz_terms().map(|(n, z)| json!({ "n": n, "zeta": lambda_polynomial(td, &z) })).collect())
}

pub fn sigma_expansion(se: &SigmaExpansion) -> Value {
    json!({
        "curve": { "a": se.curve.a },
        "b": se.b,
        "W": se.weight_bound,
        "terms": hurwitz_terms(&se.curve, &se.series),
    })
}

/// Inverse of [`sigma_expansion`]; validates the curve and the exponent shapes.
pub fn parse_sigma_expansion(v: &Value) -> Result<SigmaExpansion> {
    let bad = |what: &str| Error::Parse(format!("sigma document: {what}"));
    let a: Vec<u32> =
        serde_json::from_value(v.pointer("/curve/a").cloned().ok_or_else(|| bad("missing curve.a"))?).map_err(|_| bad("curve.a"))?;
    let td = TelescopicData::new(&a)?;
    let b: Vec<i64> = serde_json::from_value(v.get("b").cloned().ok_or_else(|| bad("missing b"))?).map_err(|_| bad("b"))?;
    let w = v.get("W").and_then(Value::as_u64).ok_or_else(|| bad("W"))? as u32;
    let mut series = USeries::zero(&td.gaps, w);
    for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
        let n: Vec<u32> = serde_json::from_value(t.get("n").cloned().ok_or_else(|| bad("term n"))?).map_err(|_| bad("term n"))?;
        if n.len() != td.genus {
            return Err(bad("exponent length differs from the genus"));
        }
        if series.weight_of(&n) > w {
            return Err(bad("term above the weight bound"));
        }
        let z = parse_lambda_polynomial(&td, t.get("zeta").ok_or_else(|| bad("term zeta"))?)?;
        series.add_term(n.clone(), &z.scale(&factorial_product(&n).recip()));
    }
    Ok(SigmaExpansion { curve: td, b, weight_bound: w, series })
}

pub fn tau(td: &TelescopicData, t: &Tau) -> Value {
    let xi: Vec<Value> =
        t.xi.iter().map(|(mu, x)| json!({ "mu": mu.0, "xi": lambda_polynomial(td, x) })).collect();
    json!({ "xi": xi, "terms": hurwitz_terms(td, &t.series) })
}

pub fn q_table(td: &TelescopicData, q: &QTable) -> Value {
    let entries: Vec<Value> = q
        .q
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&(i, j), v)| json!({ "i": i, "j": j, "q": lambda_polynomial(td, v) }))
        .collect();
    json!({ "max_index_sum": q.max_index_sum, "entries": entries })
}

fn t_series(td: &TelescopicData, s: &TSeries) -> Value {
    let coeffs: Vec<Value> =
        s.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| json!({ "k": k, "c": lambda_polynomial(td, c) })).collect();
    json!({ "valid_through": s.trunc(), "coeffs": coeffs })
}

/// `ω_i/dt` for every `i`, the `c_k`, and the coordinate coefficients `p_{i,k}`.
pub fn expansions(td: &TelescopicData, es: &ExpansionSet) -> Value {
    let omega: Vec<Value> = es.omega_series.iter().map(|s| t_series(td, s)).collect();
    let p: Vec<Value> =
        es.p.iter().map(|row| Value::Array(row.iter().map(|c| lambda_polynomial(td, c)).collect())).collect();
    json!({ "b": es.b, "omega": omega, "c": t_series(td, &es.c_series), "p": p })
}

fn witness(td: &TelescopicData, w: &Witness) -> Value {
    json!({ "n": w.exponent, "monomial": monomial(td, &w.monomial), "value": rational(&w.value) })
}

pub fn report(td: &TelescopicData, r: &IntegralityReport) -> Value {
    let mut v = json!({
        "subject": r.subject,
        "ring": r.ring.tag(),
        "verdict": r.verdict.tag(),
        "witnesses": r.witnesses.iter().map(|w| witness(td, w)).collect::<Vec<_>>(),
    });
    if let Verdict::Skipped(reason) = &r.verdict {
        v["reason"] = Value::String(reason.clone());
    }
    v
}

/// Semigroup data, λ catalog and the relation matrix `D` for a chosen `b`.
pub fn info(td: &TelescopicData, b: &[i64]) -> Result<Value> {
    let catalog: Vec<Value> = td
        .lambda_catalog
        .iter()
        .enumerate()
        .map(|(k, l)| json!({ "index": k, "i": l.eq_index, "j": l.exponents.0, "weight": l.weight }))
        .collect();
    let d = build_d(td, b)?;
    Ok(json!({
        "a": td.a,
        "d": td.d,
        "ell": td.ell,
        "genus": td.genus,
        "gaps": td.gaps,
        "mu": td.mu,
        "mu_size": td.mu_size(),
        "chi_condition": chi_condition(td),
        "lambda": catalog,
        "b": b,
        "D": { "entries": d.entries, "inverse": d.inverse, "det": d.det },
    }))
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Explicit λ values keyed by catalog index, from `{"3": "1/2", ...}`.
pub fn parse_lambda_values(td: &TelescopicData, v: &Value) -> Result<BTreeMap<usize, Rational>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("lambda must be \"symbolic\" or an object".into()))?;
    let mut out = BTreeMap::new();
    for (k, val) in obj {
        let idx: usize = k.parse().map_err(|_| Error::Parse(format!("lambda key {k:?} is not an index")))?;
        if idx >= td.lambda_catalog.len() {
            return Err(Error::Argument(format!("lambda index {idx} outside the catalog of {}", td.lambda_catalog.len())));
        }
        let r = match val {
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) => n
                .as_i64()
                .map(|n| Rational::from_integer(n.into()))
                .ok_or_else(|| Error::Parse(format!("lambda value {n} is not an integer or \"p/q\" string")))?,
            other => return Err(Error::Parse(format!("lambda value {other} is not a rational"))),
        };
        out.insert(idx, r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::rat_frac;

    #[test]
    fn rationals_round_trip() {
        for (n, d) in [(0, 1), (3, 1), (-7, 12), (5, -10)] {
            let r = rat_frac(n, d);
            assert_eq!(parse_rational(&rational(&r)).unwrap(), r);
        }
        assert_eq!(rational(&rat_frac(4, 2)), "2/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let td = TelescopicData::new(&[4, 6, 5]).unwrap();
        let a = LP::symbol(3);
        let b = LP::symbol(11);
        let p = &(&(&a * &a) * &b).scale(&rat_frac(-3, 4)) + &LP::from_int(2);
        let v = lambda_polynomial(&td, &p);
        assert_eq!(parse_lambda_polynomial(&td, &v).unwrap(), p);
        let l = &td.lambda_catalog[3];
        assert_eq!(v[1]["monomial"][0], json!([[l.eq_index, l.exponents.0], 2]));
    }
}
