//! File loading (with paths resolved relative to the referring file) and
//! atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;
use toric_core::json::{fan_to_json, morphism_from_json, raw_fan_from_json};
use toric_core::{CoreError, RawFan, StackyFan, StackyMorphism};
use toric_resolution::ComplexFile;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| CoreError::Parse(format!("{}: {e}", path.display())).into())
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn core_read(base: &Path, rel: &str) -> toric_core::Result<Value> {
    let p = base.join(rel);
    let text = std::fs::read_to_string(&p).map_err(|e| CoreError::Parse(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| CoreError::Parse(format!("{}: {e}", p.display())))
}

fn core_fan(base: &Path, rel: &str) -> toric_core::Result<StackyFan> {
    StackyFan::from_raw(&raw_fan_from_json(&core_read(base, rel)?)?)
}

pub fn load_raw_fan(path: &Path) -> Result<RawFan> {
    Ok(raw_fan_from_json(&read_json(path)?)?)
}

pub fn load_fan(path: &Path) -> Result<StackyFan> {
    Ok(StackyFan::from_raw(&load_raw_fan(path)?)?)
}

/// A substack file is either `{"sublattice": [[..], ..]}` (a saturated
/// sublattice of `N`; the empty list is the identity point) or a morphism
/// file whose `"target"` may be omitted, in which case it is `fan`.
pub fn load_sub(path: &Path, fan: &StackyFan) -> Result<StackyMorphism> {
    let mut v = read_json(path)?;
    let obj = v.as_object_mut().ok_or_else(|| CoreError::Parse("substack file must be an object".into()))?;
    if let Some(basis) = obj.get("sublattice") {
        let basis = basis
            .as_array()
            .ok_or_else(|| CoreError::Parse("\"sublattice\" must be a list of vectors".into()))?
            .iter()
            .map(toric_core::json::vec_from_json)
            .collect::<toric_core::Result<Vec<_>>>()?;
        if basis.is_empty() {
            return Ok(StackyMorphism::identity_point(fan));
        }
        return Ok(toric_core::sublattice_immersion(fan, &basis)?);
    }
    if !obj.contains_key("target") {
        obj.insert("target".into(), fan_to_json(fan));
    }
    let base = base_dir(path);
    let phi = morphism_from_json(&v, &mut |p| core_fan(&base, p))?;
    if phi.target() != fan {
        return Err(CoreError::InvalidMorphism("the substack's target differs from --fan".into()).into());
    }
    Ok(phi)
}

pub fn load_morphism(path: &Path) -> Result<StackyMorphism> {
    let base = base_dir(path);
    Ok(morphism_from_json(&read_json(path)?, &mut |p| core_fan(&base, p))?)
}

pub fn load_complex(path: &Path) -> Result<ComplexFile> {
    let base = base_dir(path);
    let v = read_json(path)?;
    let base2 = base.clone();
    Ok(ComplexFile::from_json(&v, &mut |p| core_fan(&base, p), &mut |p| core_read(&base2, p))?)
}

/// Writes `text` to `out` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).with_context(|| format!("creating a file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
