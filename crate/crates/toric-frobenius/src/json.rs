//! Report encodings. Classes are written both as canonical divisor vectors
//! and in the Pic coordinates in use.

use serde_json::{json, Value};
use toric_core::json::{int_to_json, morphism_to_json, vec_to_json};
use toric_core::DivisorClass;

use crate::cohomology::CohomologyReport;
use crate::decomposition::{FrobDecomposition, FrobSet};
use crate::pic::PicCoordinates;
use crate::report::GenerationReport;
use crate::zonotope::Zonotope;

pub fn class_to_json(c: &DivisorClass, coords: &PicCoordinates) -> Value {
    json!({ "divisor": vec_to_json(&c.coefficients), "pic": vec_to_json(&coords.coords(&c.coefficients)) })
}

pub fn decomposition_to_json(d: &FrobDecomposition, coords: &PicCoordinates) -> Value {
    let summands: Vec<Value> = d
        .summands
        .iter()
        .map(|(c, mu)| json!({ "class": class_to_json(c, coords), "multiplicity": mu }))
        .collect();
    json!({
        "ell": d.ell,
        "source": class_to_json(&d.source, coords),
        "summands": summands,
        "total_rank": d.total_rank(),
    })
}

pub fn frob_set_to_json(s: &FrobSet, coords: &PicCoordinates) -> Value {
    json!({
        "classes": s.classes.iter().map(|c| class_to_json(c, coords)).collect::<Vec<_>>(),
        "period": s.period,
        "horizon": s.horizon(),
        "ell_count": s.ells.len(),
        "stable": s.stable,
    })
}

pub fn zonotope_to_json(z: &Zonotope) -> Value {
    json!({
        "dim": z.dim,
        "generators": z.generators.iter().map(|g| vec_to_json(g)).collect::<Vec<_>>(),
        "vertices": z.vertices.iter().map(|v| vec_to_json(v)).collect::<Vec<_>>(),
        "facets": z.facets.iter().map(|f| json!({ "normal": vec_to_json(&f.normal), "bound": int_to_json(&f.bound) })).collect::<Vec<_>>(),
    })
}

pub fn cohomology_to_json(c: &CohomologyReport) -> Value {
    json!({
        "dims": c.dims,
        "witness": c.witness.as_ref().map(|(i, m)| json!({ "degree": i, "character": vec_to_json(m) })),
        "degree_box": { "lower": vec_to_json(&c.degree_box.lower), "upper": vec_to_json(&c.degree_box.upper) },
    })
}

pub fn generation_report_to_json(r: &GenerationReport, coords: &PicCoordinates) -> Value {
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|v| {
            json!({
                "dim": v.inclusion.rank,
                "rays": v.inclusion.rays,
                "morphism": morphism_to_json(&v.inclusion.morphism),
                "pullback": vec_to_json(&v.pulled_back),
                "cohomology": v.cohomology,
                "nonzero": v.nonzero(),
                "witness": v.witness.as_ref().map(|(i, m)| json!({ "degree": i, "character": vec_to_json(m) })),
                "multiplicity": {
                    "ell": v.multiplicity.ell,
                    "k": v.multiplicity.k,
                    "lhs": v.multiplicity.lhs,
                    "rhs": v.multiplicity.rhs,
                    "holds": v.multiplicity.holds(),
                },
            })
        })
        .collect();
    json!({
        "divisor": vec_to_json(&r.divisor),
        "class": class_to_json(&r.class, coords),
        "inclusions": verdicts,
        "obstructions": r.obstructions().map(|v| v.inclusion.rays.clone()).collect::<Vec<_>>(),
        "unobstructed": r.unobstructed(),
    })
}
