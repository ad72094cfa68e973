//! JSON input and output helpers.
//!
//! Polyhedra are read either as
//! `{"dim": d, "inequalities": [{"a": [..], "b": ".."}], "equations": [..]}`
//! (meaning `<a, x> <= b`, resp. `= b`) or as
//! `{"dim": d, "vertices": [[..]], "rays": [[..]], "lines": [[..]]}`.
//! Rationals are JSON strings `"p/q"` or integers.

use std::path::Path;

use serde_json::{json, Value};

use crate::algebra::rational::{format_rational, parse_rational, primitive, QVec, Rational, ZVec};
use crate::algebra::Polynomial;
use crate::asymptotics::ExpansionTerm;
use crate::error::{Error, Result};
use crate::hyperfrac::{HyperFraction, ScalarProduct};
use crate::mu::MuFunction;
use crate::polyhedra::{Face, Polyhedron};

/// Reads a rational from a JSON string `"p/q"` or a JSON integer.
pub fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

fn json_qvec(v: &Value, dim: usize) -> Result<QVec> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))?;
    if arr.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: arr.len() });
    }
    arr.iter().map(json_rational).collect()
}

fn json_zvec(v: &Value, dim: usize) -> Result<ZVec> {
    let q = json_qvec(v, dim)?;
    // directions only matter up to positive scaling
    match primitive(&q) {
        Some((p, _)) => Ok(p),
        None => Err(Error::InvalidArgument("zero direction vector".into())),
    }
}

fn list<'a>(v: &'a Value, key: &str) -> Result<Vec<&'a Value>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(a)) => Ok(a.iter().collect()),
        Some(other) => Err(Error::Parse(format!("`{key}` must be an array, got {other}"))),
    }
}

pub fn qvec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn zvec_json(v: &[num_bigint::BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn polyhedron_from_json(v: &Value) -> Result<Polyhedron> {
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Parse("polyhedron: missing `dim`".into()))? as usize;
    let has_h = v.get("inequalities").is_some() || v.get("equations").is_some();
    let has_v = v.get("vertices").is_some();
    match (has_h, has_v) {
        (true, false) => {
            let mut ineqs: Vec<(QVec, Rational)> = Vec::new();
            for row in list(v, "inequalities")? {
                ineqs.push(read_halfspace(row, dim)?);
            }
            for row in list(v, "equations")? {
                let (a, b) = read_halfspace(row, dim)?;
                ineqs.push((a.iter().map(|x| -x).collect(), -b.clone()));
                ineqs.push((a, b));
            }
            Polyhedron::from_inequalities(dim, &ineqs)
        }
        (false, true) => {
            let vertices: Vec<QVec> = list(v, "vertices")?.into_iter().map(|x| json_qvec(x, dim)).collect::<Result<_>>()?;
            let rays: Vec<ZVec> = list(v, "rays")?.into_iter().map(|x| json_zvec(x, dim)).collect::<Result<_>>()?;
            let lines: Vec<ZVec> = list(v, "lines")?.into_iter().map(|x| json_zvec(x, dim)).collect::<Result<_>>()?;
            if vertices.is_empty() {
                return Err(Error::Empty);
            }
            Polyhedron::from_generators(dim, vertices, rays, lines)
        }
        (true, true) => Err(Error::Parse("polyhedron: give either inequalities or vertices, not both".into())),
        (false, false) => Err(Error::Parse("polyhedron: expected `inequalities` or `vertices`".into())),
    }
}

fn read_halfspace(row: &Value, dim: usize) -> Result<(QVec, Rational)> {
    let a = row.get("a").ok_or_else(|| Error::Parse(format!("half-space without `a`: {row}")))?;
    let b = row.get("b").ok_or_else(|| Error::Parse(format!("half-space without `b`: {row}")))?;
    Ok((json_qvec(a, dim)?, json_rational(b)?))
}

/// H-representation plus generators. Re-reading the output gives the same
/// facet order.
pub fn polyhedron_to_json(p: &Polyhedron) -> Value {
    let hs = |rows: &[(ZVec, Rational)]| -> Value {
        Value::Array(rows.iter().map(|(a, b)| json!({"a": zvec_json(a), "b": format_rational(b)})).collect())
    };
    json!({
        "dim": p.dim_ambient(),
        "inequalities": hs(p.inequalities()),
        "equations": hs(p.equations()),
        "generators": {
            "vertices": p.vertices().iter().map(|v| qvec_json(v)).collect::<Vec<_>>(),
            "rays": p.rays().iter().map(|r| zvec_json(r)).collect::<Vec<_>>(),
            "lines": p.lines().iter().map(|r| zvec_json(r)).collect::<Vec<_>>(),
        },
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_polyhedron(path: &Path) -> Result<Polyhedron> {
    polyhedron_from_json(&read_json(path)?)
}

pub fn read_scalar_product(path: &Path) -> Result<ScalarProduct> {
    ScalarProduct::from_json(&read_json(path)?)
}

pub fn scalar_product_to_json(q: &ScalarProduct) -> Value {
    json!({"dim": q.dim(), "matrix": q.matrix().iter().map(|r| qvec_json(r)).collect::<Vec<_>>()})
}

pub fn polynomial_json(p: &Polynomial) -> Value {
    json!({"text": p.to_string_with("d"), "polynomial": serde_json::to_value(p).expect("polynomials serialize")})
}

pub fn face_json(p: &Polyhedron, f: &Face) -> Value {
    json!({
        "active": f.active,
        "dim": f.dim,
        "vertices": f.vertices.iter().map(|&i| qvec_json(&p.vertices()[i])).collect::<Vec<_>>(),
        "rays": f.rays.iter().map(|&i| zvec_json(&p.rays()[i])).collect::<Vec<_>>(),
    })
}

pub fn term_json(p: &Polyhedron, t: &ExpansionTerm) -> Value {
    json!({
        "k": t.k,
        "m": t.m,
        "face": face_json(p, &t.face),
        "operator": polynomial_json(&t.operator),
    })
}

/// Reads terms written by [`term_json`], resolving faces by their active sets in `p`.
pub fn terms_from_json(p: &Polyhedron, v: &Value) -> Result<Vec<ExpansionTerm>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("terms must be an array".into()))?;
    let mut out = Vec::new();
    for t in arr {
        let field = |k: &str| t.get(k).ok_or_else(|| Error::Parse(format!("term without `{k}`")));
        let k = field("k")?.as_u64().ok_or_else(|| Error::Parse("`k` must be an integer".into()))? as u32;
        let m = field("m")?.as_u64().ok_or_else(|| Error::Parse("`m` must be an integer".into()))? as u32;
        let active: Vec<usize> = serde_json::from_value(field("face")?.get("active").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("face active set: {e}")))?;
        let face_index = p.faces().iter().position(|f| f.active == active).ok_or(Error::NotAFace)?;
        let op_v = field("operator")?.get("polynomial").cloned().ok_or_else(|| Error::Parse("operator without `polynomial`".into()))?;
        let operator: Polynomial = serde_json::from_value(op_v).map_err(|e| Error::Parse(format!("operator: {e}")))?;
        if operator.dim() != p.dim_ambient() {
            return Err(Error::DimensionMismatch { expected: p.dim_ambient(), got: operator.dim() });
        }
        out.push(ExpansionTerm { k, face_index, face: p.faces()[face_index].clone(), m, operator });
    }
    Ok(out)
}

pub fn mu_json(mu: &MuFunction) -> Value {
    json!({
        "order": mu.order(),
        "components": mu.components.iter().map(polynomial_json).collect::<Vec<_>>(),
    })
}

pub fn hyperfraction_json(f: &HyperFraction) -> Value {
    json!({"text": format!("{f:?}"), "fraction": serde_json::to_value(f.to_json()).expect("fractions serialize")})
}
