//! Complex files: `{"fan", "terms": {k: [divisor]}, "differential":
//! {k: [[row, col, [[coeff, exponent]]]]}, "alpha", "phi"}`.

use serde_json::{json, Map, Value};
use toric_core::json::{fan_from_json, fan_to_json, morphism_from_json, morphism_to_json, rat_from_json, rat_to_json, vec_from_json, vec_to_json};
use toric_core::{DivisorClass, PicGroup, Poly, StackyFan, StackyMorphism};
use toric_morse::{ChainComplex, SparseMatrix};

use crate::complex::{AugmentedComplex, LineBundleComplex};
use crate::error::{ResolutionError, Result};

/// A complex as stored on disk, optionally with its augmentation data.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexFile {
    pub complex: LineBundleComplex,
    pub alpha: Option<usize>,
    pub phi: Option<StackyMorphism>,
}

impl From<AugmentedComplex> for ComplexFile {
    fn from(a: AugmentedComplex) -> Self {
        ComplexFile { complex: a.complex, alpha: Some(a.alpha), phi: Some(a.target) }
    }
}

impl ComplexFile {
    pub fn augmented(&self) -> Option<AugmentedComplex> {
        Some(AugmentedComplex { complex: self.complex.clone(), alpha: self.alpha?, target: self.phi.clone()? })
    }

    /// Serializes; `fan_ref`/`phi_ref` replace the inline objects by paths.
    pub fn to_json(&self, fan_ref: Option<&str>, phi_ref: Option<&str>) -> Value {
        let c = &self.complex.complex;
        let mut terms = Map::new();
        for (k, t) in &c.terms {
            terms.insert(k.to_string(), Value::Array(t.iter().map(|d| vec_to_json(&d.coefficients)).collect()));
        }
        let mut diff = Map::new();
        for (k, m) in &c.differentials {
            let entries: Vec<Value> = m
                .entries()
                .map(|(&(r, col), p)| {
                    let monos: Vec<Value> = p.terms().map(|(e, coeff)| json!([rat_to_json(coeff), e])).collect();
                    json!([r, col, monos])
                })
                .collect();
            diff.insert(k.to_string(), Value::Array(entries));
        }
        let fan = fan_ref.map_or_else(|| fan_to_json(&self.complex.fan), |p| Value::String(p.into()));
        let phi = match (phi_ref, &self.phi) {
            (Some(p), _) => Value::String(p.into()),
            (None, Some(m)) => morphism_to_json(m),
            (None, None) => Value::Null,
        };
        json!({
            "fan": fan,
            "terms": terms,
            "differential": diff,
            "alpha": self.alpha,
            "phi": phi,
        })
    }

    /// Parses a complex file; string-valued `"fan"`/`"phi"` (and fan paths
    /// inside the morphism) are resolved through the loaders.
    pub fn from_json(
        v: &Value,
        load_fan: &mut dyn FnMut(&str) -> toric_core::Result<StackyFan>,
        load_value: &mut dyn FnMut(&str) -> toric_core::Result<Value>,
    ) -> Result<Self> {
        let bad = |s: &str| ResolutionError::Parse(s.into());
        let obj = v.as_object().ok_or_else(|| bad("complex must be an object"))?;
        let fan = match obj.get("fan").ok_or_else(|| bad("missing \"fan\""))? {
            Value::String(p) => load_fan(p)?,
            other => fan_from_json(other)?,
        };
        let nvars = fan.num_rays();
        let pic = PicGroup::of(&fan);
        let mut complex: ChainComplex<DivisorClass, Poly> = ChainComplex::new(nvars);
        for (k, t) in obj.get("terms").and_then(Value::as_object).ok_or_else(|| bad("missing \"terms\""))? {
            let k: i64 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
            let list = t.as_array().ok_or_else(|| bad("terms must be lists"))?;
            let mut out = Vec::with_capacity(list.len());
            for d in list {
                let d = vec_from_json(d)?;
                if d.len() != nvars {
                    return Err(bad("divisor length differs from the number of rays"));
                }
                out.push(pic.canonical(&d));
            }
            complex.terms.insert(k, out);
        }
        if let Some(diff) = obj.get("differential") {
            for (k, entries) in diff.as_object().ok_or_else(|| bad("differential must be an object"))? {
                let k: i64 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
                let mut m = SparseMatrix::new(complex.rank(k - 1), complex.rank(k));
                for e in entries.as_array().ok_or_else(|| bad("entries must be a list"))? {
                    let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(|| bad("entry must be [row, col, monomials]"))?;
                    let r = e[0].as_u64().ok_or_else(|| bad("row index"))? as usize;
                    let col = e[1].as_u64().ok_or_else(|| bad("column index"))? as usize;
                    if r >= m.rows || col >= m.cols {
                        return Err(bad("entry index out of range"));
                    }
                    let mut p = Poly::zero(nvars);
                    for mono in e[2].as_array().ok_or_else(|| bad("monomial list"))? {
                        let mono = mono.as_array().filter(|x| x.len() == 2).ok_or_else(|| bad("monomial must be [coeff, exponent]"))?;
                        let coeff = rat_from_json(&mono[0])?;
                        let exp: Vec<u32> = mono[1]
                            .as_array()
                            .ok_or_else(|| bad("exponent"))?
                            .iter()
                            .map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad("exponent entry")))
                            .collect::<Result<_>>()?;
                        if exp.len() != nvars {
                            return Err(bad("exponent length differs from the number of rays"));
                        }
                        p.add_term(exp, coeff);
                    }
                    m.set(r, col, p);
                }
                if !m.is_zero() {
                    complex.differentials.insert(k, m);
                }
            }
        }
        let alpha = match obj.get("alpha") {
            None | Some(Value::Null) => None,
            Some(a) => Some(a.as_u64().ok_or_else(|| bad("alpha must be an index"))? as usize),
        };
        let phi = match obj.get("phi") {
            None | Some(Value::Null) => None,
            Some(Value::String(p)) => Some(morphism_from_json(&load_value(p)?, load_fan)?),
            Some(other) => Some(morphism_from_json(other, load_fan)?),
        };
        Ok(ComplexFile { complex: LineBundleComplex::new(fan, complex), alpha, phi })
    }
}
