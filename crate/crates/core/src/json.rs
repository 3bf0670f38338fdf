//! JSON encodings of rings, modules, submodules, and results.
//!
//! Integers are written as decimal strings so that values of any size
//! survive a round trip; on input both JSON numbers and strings are accepted.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::envelope::{Certificate, ChainResult, EnvelopeResult};
use crate::error::{Error, Result};
use crate::matrix::IntMat;
use crate::module::{span_submodule, FgModule, Submodule};
use crate::ring::{RingDesc, RingElem};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(parse_err(format!("expected an integer, found {n}")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("expected an integer, found {s:?}"))),
        other => Err(parse_err(format!("expected an integer, found {other}"))),
    }
}

pub fn parse_vector(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array().ok_or_else(|| parse_err("expected an array of integers"))?.iter().map(parse_int).collect()
}

pub fn parse_rows(v: &Value, cols: usize) -> Result<IntMat> {
    let rows = v.as_array().ok_or_else(|| parse_err("expected an array of rows"))?;
    let rows = rows.iter().map(parse_vector).collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
    }
    IntMat::from_rows(cols, rows)
}

pub fn int_json(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn vector_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn rows_json(m: &IntMat) -> Value {
    Value::Array(m.row_iter().map(vector_json).collect())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

pub fn parse_ring(v: &Value) -> Result<RingDesc> {
    let kind = field(v, "type")?.as_str().ok_or_else(|| parse_err("ring type must be a string"))?;
    match kind {
        "Z" => Ok(RingDesc::Integers),
        "Zmod" => RingDesc::integers_mod(parse_int(field(v, "n")?)?),
        "monic_algebra" => RingDesc::monic_algebra(parse_vector(field(v, "modulus")?)?),
        other => Err(parse_err(format!("unknown ring type {other:?}"))),
    }
}

pub fn ring_json(r: &RingDesc) -> Value {
    match r {
        RingDesc::Integers => json!({"type": "Z"}),
        RingDesc::IntegersMod(n) => json!({"type": "Zmod", "n": int_json(n)}),
        RingDesc::MonicAlgebra(f) => json!({"type": "monic_algebra", "modulus": vector_json(f)}),
    }
}

pub fn parse_ring_elem(ring: &RingDesc, v: &Value) -> Result<RingElem> {
    match v {
        Value::Array(_) => ring.elem(&parse_vector(v)?),
        _ => Ok(ring.from_int(parse_int(v)?)),
    }
}

pub fn ring_elem_json(a: &RingElem) -> Value {
    vector_json(a.coeffs())
}

pub fn parse_module(v: &Value) -> Result<FgModule> {
    let ring = parse_ring(field(v, "ring")?)?;
    let rank = field(v, "ambient_rank")?
        .as_u64()
        .ok_or_else(|| parse_err("ambient_rank must be a non-negative integer"))? as usize;
    let relations = match v.get("relations") {
        None | Some(Value::Null) => IntMat::zeros(0, rank),
        Some(r) => parse_rows(r, rank)?,
    };
    let action = match v.get("action") {
        None | Some(Value::Null) => None,
        Some(a) => Some(parse_rows(a, rank)?),
    };
    FgModule::new(ring, rank, &relations, action)
}

/// The module with its relations in canonical Hermite form. For `Z/n` the
/// rows `n·e_i` are part of the stored relations and are written out.
pub fn module_json(m: &FgModule) -> Value {
    let mut obj = Map::new();
    obj.insert("ring".into(), ring_json(m.ring()));
    obj.insert("ambient_rank".into(), json!(m.ambient_rank()));
    obj.insert("relations".into(), rows_json(m.relations().basis()));
    obj.insert("action".into(), m.action().map_or(Value::Null, rows_json));
    Value::Object(obj)
}

/// Accepts `{"generators": …}` or an emitted result's `{"submodule_hnf": …}`.
pub fn parse_submodule(m: &FgModule, v: &Value) -> Result<Submodule> {
    let gens = v
        .get("generators")
        .or_else(|| v.get("submodule_hnf"))
        .ok_or_else(|| parse_err("submodule needs a \"generators\" field"))?;
    let rows = parse_rows(gens, m.ambient_rank())?;
    span_submodule(m, &rows.to_rows())
}

pub fn submodule_json(s: &Submodule) -> Value {
    json!({ "generators": rows_json(s.lattice().basis()) })
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "a": ring_elem_json(&c.a),
        "m": vector_json(&c.m),
        "k": c.k,
    })
}

pub fn envelope_json(r: &EnvelopeResult) -> Value {
    json!({
        "submodule_hnf": rows_json(r.submodule.lattice().basis()),
        "certified": r.certified_complete,
        "strategy": r.strategy.to_string(),
        "certificates": r.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "chain": Value::Null,
        "termination_index": Value::Null,
    })
}

/// Chain results list the distinct terms; the last one is the semiprime radical.
pub fn chain_json(c: &ChainResult) -> Value {
    let terms = c.distinct_terms();
    json!({
        "submodule_hnf": rows_json(terms.last().expect("nonempty").lattice().basis()),
        "certified": c.certified && c.terminated,
        "strategy": c.strategies.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "certificates": Vec::<Value>::new(),
        "chain": terms.iter().map(|t| rows_json(t.lattice().basis())).collect::<Vec<_>>(),
        "termination_index": c.termination_index,
        "terminated": c.terminated,
        "limit": c.limit.as_ref().map(|e| e.to_string()),
    })
}
