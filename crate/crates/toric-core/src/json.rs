//! JSON encoding of lattice data, fans and morphisms.
//!
//! Integers whose magnitude exceeds `2^53 - 1` are written as decimal strings
//! so that they survive consumers that read numbers as doubles; both forms are
//! accepted on input. Objects are emitted with sorted keys (serde_json's
//! default map ordering).

use serde_json::{json, Map, Value};

use crate::error::{CoreError, Result};
use crate::fan::{RawFan, StackyFan};
use crate::morphism::StackyMorphism;
use crate::{Int, IntMatrix, LatticeMap, Rat};

const MAX_SAFE: i64 = (1i64 << 53) - 1;

pub fn int_to_json(x: &Int) -> Value {
    match i64::try_from(x) {
        Ok(v) if (-MAX_SAFE..=MAX_SAFE).contains(&v) => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| CoreError::Parse(format!("expected an integer, found {n}"))),
        Value::String(s) => s.trim().parse::<Int>().map_err(|_| CoreError::Parse(format!("bad integer {s:?}"))),
        other => Err(CoreError::Parse(format!("expected an integer, found {other}"))),
    }
}

/// Rationals are written as integers when integral and as `"p/q"` otherwise.
pub fn rat_to_json(x: &Rat) -> Value {
    if x.is_integer() {
        int_to_json(&x.to_integer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let p: Int = p.trim().parse().map_err(|_| CoreError::Parse(format!("bad rational {s:?}")))?;
            let q: Int = q.trim().parse().map_err(|_| CoreError::Parse(format!("bad rational {s:?}")))?;
            if q == Int::from(0) {
                return Err(CoreError::Parse("zero denominator".into()));
            }
            return Ok(Rat::new(p, q));
        }
    }
    Ok(Rat::from_integer(int_from_json(v)?))
}

pub fn vec_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn vec_from_json(v: &Value) -> Result<Vec<Int>> {
    v.as_array()
        .ok_or_else(|| CoreError::Parse("expected an array of integers".into()))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn matrix_to_json(m: &LatticeMap) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| vec_to_json(r)).collect())
}

/// Reads a row list; `cols` is needed when there are no rows.
pub fn matrix_from_json(v: &Value, cols: usize) -> Result<LatticeMap> {
    let rows = v.as_array().ok_or_else(|| CoreError::Parse("expected a matrix".into()))?;
    let rows: Vec<Vec<Int>> = rows.iter().map(vec_from_json).collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CoreError::Parse(format!("matrix rows must have length {cols}")));
    }
    Ok(IntMatrix::from_rows(rows, cols))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| CoreError::Parse(format!("missing field {key:?}")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?.as_u64().map(|x| x as usize).ok_or_else(|| CoreError::Parse(format!("{key} must be a count")))
}

pub fn raw_fan_from_json(v: &Value) -> Result<RawFan> {
    let obj = v.as_object().ok_or_else(|| CoreError::Parse("fan must be an object".into()))?;
    let rank_l = usize_field(obj, "rank_L")?;
    let rank_n = usize_field(obj, "rank_N")?;
    let beta = field(obj, "beta")?
        .as_array()
        .ok_or_else(|| CoreError::Parse("beta must be a matrix".into()))?
        .iter()
        .map(vec_from_json)
        .collect::<Result<Vec<_>>>()?;
    let rays = field(obj, "rays")?
        .as_array()
        .ok_or_else(|| CoreError::Parse("rays must be a list".into()))?
        .iter()
        .map(vec_from_json)
        .collect::<Result<Vec<_>>>()?;
    let cones = field(obj, "cones")?
        .as_array()
        .ok_or_else(|| CoreError::Parse("cones must be a list".into()))?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| CoreError::Parse("cone must be a list of ray indices".into()))?
                .iter()
                .map(|i| i.as_u64().map(|x| x as usize).ok_or_else(|| CoreError::Parse("bad ray index".into())))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RawFan { rank_l, rank_n, beta, rays, cones })
}

pub fn raw_fan_to_json(raw: &RawFan) -> Value {
    json!({
        "rank_L": raw.rank_l,
        "rank_N": raw.rank_n,
        "beta": raw.beta.iter().map(|r| vec_to_json(r)).collect::<Vec<_>>(),
        "rays": raw.rays.iter().map(|r| vec_to_json(r)).collect::<Vec<_>>(),
        "cones": raw.cones,
    })
}

pub fn fan_to_json(f: &StackyFan) -> Value {
    raw_fan_to_json(&f.to_raw())
}

pub fn fan_from_json(v: &Value) -> Result<StackyFan> {
    StackyFan::from_raw(&raw_fan_from_json(v)?)
}

/// Morphism files hold `"source"` and `"target"` (each either an inline fan
/// object or a path resolved by `load`) together with `"Phi"` and `"phi"`.
pub fn morphism_from_json(
    v: &Value,
    load: &mut dyn FnMut(&str) -> Result<StackyFan>,
) -> Result<StackyMorphism> {
    let obj = v.as_object().ok_or_else(|| CoreError::Parse("morphism must be an object".into()))?;
    let mut fan = |key: &str| -> Result<StackyFan> {
        match field(obj, key)? {
            Value::String(path) => load(path),
            other => fan_from_json(other),
        }
    };
    let source = fan("source")?;
    let target = fan("target")?;
    let big_phi = matrix_from_json(field(obj, "Phi")?, source.rank_l())?;
    let phi = matrix_from_json(field(obj, "phi")?, source.rank_n())?;
    StackyMorphism::new(source, target, big_phi, phi)
}

pub fn morphism_to_json(m: &StackyMorphism) -> Value {
    json!({
        "source": fan_to_json(m.source()),
        "target": fan_to_json(m.target()),
        "Phi": matrix_to_json(m.big_phi()),
        "phi": matrix_to_json(m.phi()),
    })
}
