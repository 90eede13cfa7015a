//! JSON encodings of the data types.
//!
//! Rationals are strings `"a/b"` (or `"a"`); integers are JSON numbers, or decimal strings
//! when they do not fit in 64 bits, and both forms are accepted on input.
//!
//! ```text
//! coset     {"ambient_rank": n, "lattice": [[λ…]…], "phi": ["a/b"…]}
//! set       {"ambient_rank": n, "cells": [{"positive": coset, "excluded": [coset…]}…]}
//!           or {"ambient_rank": n, "cosets": [coset…]} for a union of closed cosets
//! point     ["a/b"…]
//! subspace  {"ambient_rank": b, "translate": ["a/b"…], "direction": [[entry…]…]}
//! complex   {"vars": n, "ranks": [r_0…], "differentials": [matrix…], "support": [coset…]?}
//! matrix    {"rows": r, "cols": c, "entries": [[row, col, poly]…]}
//! poly      [[[e_1…e_n], coeff]…]
//! ```
//!
//! A coset's `lattice` rows may be any characters: the system `x^λ_j = e^{2πi φ_j}` is solved
//! and must have exactly one irreducible solution coset.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bridge::{parse_direction, parse_translate, BridgeError, RationalAffineSubspace};
use crate::jump::{
    JumpCertificate, JumpError, JumpLocusReport, LaurentChainComplex, LaurentMatrix, LaurentPoly, Verdict, Witness,
};
use crate::lattice::{IntMatrix, Lattice};
use crate::rational::{format_rational, parse_rational, RatMod1};
use crate::torus::{solve_character_system, AbsoluteSet, Cell, TorsionCoset, TorsionPoint, TorusError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
    #[error(transparent)]
    Jump(#[from] JumpError),
}

fn schema(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Schema { path: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        col: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn int_from_json(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema(path, format!("expected an integer, got {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| schema(path, format!("expected an integer, got {s:?}"))),
        other => Err(schema(path, format!("expected an integer, got {other}"))),
    }
}

fn usize_from_json(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| schema(path, format!("expected a non-negative integer, got {v}")))
}

fn i64_from_json(v: &Value, path: &str) -> Result<i64, FormatError> {
    int_from_json(v, path)?.to_i64().ok_or_else(|| schema(path, "integer out of range"))
}

pub fn rational_to_json(q: &BigRational) -> Value {
    json!(format_rational(q))
}

fn entry_string(v: &Value, path: &str) -> Result<String, FormatError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(schema(path, format!("expected a number or string, got {other}"))),
    }
}

fn rational_from_json(v: &Value, path: &str) -> Result<BigRational, FormatError> {
    let s = entry_string(v, path)?;
    parse_rational(&s).ok_or_else(|| schema(path, format!("expected a rational a/b, got {s:?}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| schema(path, format!("expected an array, got {}", kind(v))))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| schema(path, format!("expected an object, got {}", kind(v))))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, FormatError> {
    o.get(key).ok_or_else(|| schema(path, format!("missing field {key:?}")))
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn int_rows(v: &Value, path: &str) -> Result<Vec<Vec<BigInt>>, FormatError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{path}[{i}]");
            array(row, &p)?.iter().enumerate().map(|(j, x)| int_from_json(x, &format!("{p}[{j}]"))).collect()
        })
        .collect()
}

pub fn int_matrix_from_json(v: &Value, path: &str) -> Result<IntMatrix, FormatError> {
    let rows = int_rows(v, path)?;
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(schema(&format!("{path}[{i}]"), format!("row has {} entries, expected {cols}", rows[i].len())));
    }
    Ok(IntMatrix::from_rows(cols, &rows).expect("checked row lengths"))
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int_to_json).collect())).collect())
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    Value::Array(l.basis().iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect())
}

pub fn coset_to_json(c: &TorsionCoset) -> Value {
    json!({
        "ambient_rank": c.ambient_rank(),
        "lattice": lattice_to_json(c.lattice()),
        "phi": c.phi().iter().map(|x| json!(x.to_string())).collect::<Vec<_>>(),
    })
}

pub fn coset_from_json(v: &Value, path: &str) -> Result<TorsionCoset, FormatError> {
    let o = object(v, path)?;
    let n = usize_from_json(field(o, "ambient_rank", path)?, &format!("{path}.ambient_rank"))?;
    let lpath = format!("{path}.lattice");
    let rows = int_rows(field(o, "lattice", path)?, &lpath)?;
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(FormatError::Torus(TorusError::RankMismatch(n, r.len())));
    }
    let ppath = format!("{path}.phi");
    let phi: Vec<RatMod1> = array(field(o, "phi", path)?, &ppath)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x, &format!("{ppath}[{i}]")).map(|q| RatMod1::from_rational(&q)))
        .collect::<Result<_, _>>()?;
    if phi.len() != rows.len() {
        return Err(schema(path, format!("{} lattice rows but {} phi values", rows.len(), phi.len())));
    }
    let mut sols = solve_character_system(n, &rows, &phi)?;
    match sols.len() {
        1 => Ok(sols.pop().expect("one solution")),
        0 => Err(schema(path, "the character system has no solutions")),
        k => Err(schema(path, format!("the character system has {k} components, not one coset"))),
    }
}

pub fn point_to_json(p: &TorsionPoint) -> Value {
    Value::Array(p.coords().iter().map(|x| json!(x.to_string())).collect())
}

pub fn point_from_json(v: &Value, path: &str) -> Result<TorsionPoint, FormatError> {
    let coords = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from_json(x, &format!("{path}[{i}]")).map(|q| RatMod1::from_rational(&q)))
        .collect::<Result<_, _>>()?;
    Ok(TorsionPoint::new(coords))
}

pub fn set_to_json(s: &AbsoluteSet) -> Value {
    let cells: Vec<Value> = s
        .cells()
        .iter()
        .map(|c| {
            json!({
                "positive": coset_to_json(c.positive()),
                "excluded": c.excluded().iter().map(coset_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"ambient_rank": s.ambient_rank(), "cells": cells})
}

fn coset_of_rank(v: &Value, path: &str, n: usize) -> Result<TorsionCoset, FormatError> {
    let c = coset_from_json(v, path)?;
    if c.ambient_rank() != n {
        return Err(FormatError::Torus(TorusError::RankMismatch(n, c.ambient_rank())));
    }
    Ok(c)
}

pub fn set_from_json(v: &Value, path: &str) -> Result<AbsoluteSet, FormatError> {
    let o = object(v, path)?;
    let n = usize_from_json(field(o, "ambient_rank", path)?, &format!("{path}.ambient_rank"))?;
    if let Some(cosets) = o.get("cosets") {
        let p = format!("{path}.cosets");
        let cs = array(cosets, &p)?
            .iter()
            .enumerate()
            .map(|(i, c)| coset_of_rank(c, &format!("{p}[{i}]"), n))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(AbsoluteSet::from_cosets(n, cs)?);
    }
    let p = format!("{path}.cells");
    let mut cells = Vec::new();
    for (i, cell) in array(field(o, "cells", path)?, &p)?.iter().enumerate() {
        let cp = format!("{p}[{i}]");
        let co = object(cell, &cp)?;
        let positive = coset_of_rank(field(co, "positive", &cp)?, &format!("{cp}.positive"), n)?;
        let excluded = match co.get("excluded") {
            None => Vec::new(),
            Some(ex) => {
                let ep = format!("{cp}.excluded");
                array(ex, &ep)?
                    .iter()
                    .enumerate()
                    .map(|(j, c)| coset_of_rank(c, &format!("{ep}[{j}]"), n))
                    .collect::<Result<_, _>>()?
            }
        };
        if let Some(c) = Cell::new(positive, excluded)? {
            cells.push(c);
        }
    }
    Ok(AbsoluteSet::from_cells(n, cells)?)
}

pub fn subspace_to_json(v: &RationalAffineSubspace) -> Value {
    json!({
        "ambient_rank": v.ambient_rank(),
        "translate": v.translate().iter().map(rational_to_json).collect::<Vec<_>>(),
        "direction": lattice_to_json(v.direction()),
    })
}

pub fn subspace_from_json(v: &Value, path: &str) -> Result<RationalAffineSubspace, FormatError> {
    let o = object(v, path)?;
    let b = usize_from_json(field(o, "ambient_rank", path)?, &format!("{path}.ambient_rank"))?;
    let tp = format!("{path}.translate");
    let translate: Vec<String> = array(field(o, "translate", path)?, &tp)?
        .iter()
        .enumerate()
        .map(|(i, x)| entry_string(x, &format!("{tp}[{i}]")))
        .collect::<Result<_, _>>()?;
    if translate.len() != b {
        return Err(FormatError::Torus(TorusError::RankMismatch(b, translate.len())));
    }
    let dp = format!("{path}.direction");
    let rows: Vec<Vec<String>> = array(field(o, "direction", path)?, &dp)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = format!("{dp}[{i}]");
            array(row, &rp)?.iter().enumerate().map(|(j, x)| entry_string(x, &format!("{rp}[{j}]"))).collect()
        })
        .collect::<Result<_, _>>()?;
    if let Some(r) = rows.iter().find(|r| r.len() != b) {
        return Err(FormatError::Torus(TorusError::RankMismatch(b, r.len())));
    }
    let direction = parse_direction(b, &rows)?;
    let translate = parse_translate(&translate)?;
    Ok(RationalAffineSubspace::new(translate, &direction)?)
}

pub fn poly_to_json(p: &LaurentPoly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([e, int_to_json(c)])).collect())
}

fn poly_from_json(v: &Value, path: &str, nvars: usize) -> Result<LaurentPoly, FormatError> {
    let mut terms = Vec::new();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let pair = array(t, &tp)?;
        if pair.len() != 2 {
            return Err(schema(&tp, "a term is [exponents, coefficient]"));
        }
        let ep = format!("{tp}[0]");
        let e: Vec<i64> = array(&pair[0], &ep)?
            .iter()
            .enumerate()
            .map(|(j, x)| i64_from_json(x, &format!("{ep}[{j}]")))
            .collect::<Result<_, _>>()?;
        if e.len() != nvars {
            return Err(FormatError::Jump(JumpError::RankMismatch { expected: nvars, found: e.len() }));
        }
        terms.push((e, int_from_json(&pair[1], &format!("{tp}[1]"))?));
    }
    Ok(LaurentPoly::from_terms(nvars, terms))
}

pub fn laurent_matrix_to_json(m: &LaurentMatrix) -> Value {
    let mut entries = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let p = m.get(r, c);
            if !p.is_zero() {
                entries.push(json!([r, c, poly_to_json(p)]));
            }
        }
    }
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

fn laurent_matrix_from_json(v: &Value, path: &str, nvars: usize) -> Result<LaurentMatrix, FormatError> {
    let o = object(v, path)?;
    let rows = usize_from_json(field(o, "rows", path)?, &format!("{path}.rows"))?;
    let cols = usize_from_json(field(o, "cols", path)?, &format!("{path}.cols"))?;
    let mut m = LaurentMatrix::zeros(nvars, rows, cols);
    let ep = format!("{path}.entries");
    for (i, e) in array(field(o, "entries", path)?, &ep)?.iter().enumerate() {
        let p = format!("{ep}[{i}]");
        let t = array(e, &p)?;
        if t.len() != 3 {
            return Err(schema(&p, "an entry is [row, col, poly]"));
        }
        let (r, c) = (usize_from_json(&t[0], &p)?, usize_from_json(&t[1], &p)?);
        if r >= rows || c >= cols {
            return Err(schema(&p, format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
        }
        let poly = poly_from_json(&t[2], &format!("{p}[2]"), nvars)?;
        m.set(r, c, m.get(r, c).add(&poly));
    }
    Ok(m)
}

pub fn complex_to_json(c: &LaurentChainComplex) -> Value {
    let mut out = json!({
        "vars": c.nvars(),
        "ranks": c.ranks(),
        "differentials": c.differentials().iter().map(laurent_matrix_to_json).collect::<Vec<_>>(),
    });
    if let Some(s) = c.support() {
        out["support"] = Value::Array(s.iter().map(coset_to_json).collect());
    }
    out
}

pub fn complex_from_json(v: &Value, path: &str) -> Result<LaurentChainComplex, FormatError> {
    let o = object(v, path)?;
    let n = usize_from_json(field(o, "vars", path)?, &format!("{path}.vars"))?;
    let rp = format!("{path}.ranks");
    let ranks = array(field(o, "ranks", path)?, &rp)?
        .iter()
        .enumerate()
        .map(|(i, x)| usize_from_json(x, &format!("{rp}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let dp = format!("{path}.differentials");
    let diffs = array(field(o, "differentials", path)?, &dp)?
        .iter()
        .enumerate()
        .map(|(i, d)| laurent_matrix_from_json(d, &format!("{dp}[{i}]"), n))
        .collect::<Result<Vec<_>, _>>()?;
    let support = match o.get("support") {
        None | Some(Value::Null) => None,
        Some(s) => {
            let sp = format!("{path}.support");
            Some(
                array(s, &sp)?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| coset_from_json(c, &format!("{sp}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
    };
    Ok(LaurentChainComplex::with_support(n, ranks, diffs, support)?)
}

pub fn certificate_to_json(c: &JumpCertificate) -> Value {
    json!({
        "coset": coset_to_json(&c.coset),
        "degree": c.degree,
        "threshold": c.threshold,
        "generic_rank_out": c.rank_out,
        "generic_rank_in": c.rank_in,
        "generic_dim": c.generic_dim,
        "holds": c.holds,
    })
}

pub fn report_to_json(r: &JumpLocusReport) -> Value {
    json!({
        "degree": r.degree,
        "threshold": r.threshold,
        "search_level": r.search_level,
        "locus": set_to_json(&r.locus),
        "certificates": r.certificates.iter().map(certificate_to_json).collect::<Vec<_>>(),
        "grid_points": r.grid_points,
        "jump_points": r.jump_points,
        "completeness": r.completeness_note,
    })
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!({"verdict": "pass"}),
        Verdict::Fail(Witness::Uncertified(c)) => {
            json!({"verdict": "fail", "reason": "uncertified component", "certificate": certificate_to_json(c)})
        }
        Verdict::Fail(Witness::Point { point, dim, claimed }) => json!({
            "verdict": "fail",
            "reason": if *claimed { "claimed point does not jump" } else { "jump point missing from claim" },
            "point": point_to_json(point),
            "dim": dim,
        }),
    }
}
