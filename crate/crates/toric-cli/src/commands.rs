//! Subcommands. Each returns whether its checks passed; input problems are
//! errors.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use toric_core::json::vec_to_json;
use toric_core::{validate_stacky_fan, Int, PicGroup, StackyFan, StackyMorphism};
use toric_frobenius::json as fjson;
use toric_frobenius::{frob_pushforward, frob_set, generation_report, PicCoordinates, Zonotope};
use toric_resolution::{
    alternating_rank_sum, build_resolution, chart_local_model, check_d_squared, check_homogeneity, diagonal_resolution,
    fiber_exactness_check, koszul_compare, pushforward_finite_quotient_complex, restrict_to_cone, ComplexFile,
    ResolutionError,
};
use toric_strat::{thomsen_collection, Stratification, DEFAULT_CODIM_BOUND};

use crate::io::{json_text, load_complex, load_fan, load_morphism, load_raw_fan, load_sub, write_output};
use crate::render::{render_svg, RenderOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidArgument(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "toric", version, about = "Line-bundle resolutions of toric substacks and toric Frobenius analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a fan file and describe the fan.
    Validate(FanArgs),
    /// The Thomsen collection of a fan.
    Thomsen(FanArgs),
    /// The stratification of the exit torus of a substack.
    Stratify(SubArgs),
    /// The resolution of a substack.
    Resolve(SubArgs),
    /// The resolution of the diagonal.
    Diagonal(FanArgs),
    /// Restrict a resolution to the chart of a maximal cone and reduce it.
    Restrict(RestrictArgs),
    /// Push a complex forward along a finite quotient.
    Pushforward(PushforwardArgs),
    /// d² = 0, homogeneity, fiber exactness and Koszul comparison.
    Verify(VerifyArgs),
    /// Frobenius pushforward of a line bundle, or its Frob set.
    Frobenius(FrobeniusArgs),
    /// Obstructions to generation from linear inclusions.
    Genreport(GenreportArgs),
    /// Draw a stratification of codimension at most two as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct FanArgs {
    #[arg(long)]
    pub fan: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CODIM_BOUND)]
    pub codim_bound: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SubArgs {
    #[arg(long)]
    pub fan: PathBuf,
    /// Substack file; the identity point when omitted.
    #[arg(long)]
    pub sub: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CODIM_BOUND)]
    pub codim_bound: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RestrictArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Comma-separated ray indices of a maximal cone.
    #[arg(long)]
    pub cone: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PushforwardArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Morphism file of the finite quotient.
    #[arg(long)]
    pub morphism: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[arg(long)]
    pub fan: PathBuf,
    /// Either one coefficient per ray or Pic coordinates, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub divisor: String,
    /// Rays whose classes are used as Pic coordinates (default: the first
    /// basis in lexicographic order).
    #[arg(long)]
    pub basis: Option<String>,
    /// Annotates the report only; all computations are in characteristic 0.
    #[arg(long)]
    pub characteristic: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrobeniusArgs {
    #[command(flatten)]
    pub divisor: DivisorArgs,
    /// Degree of the Frobenius; the Frob set is computed when omitted.
    #[arg(long)]
    pub ell: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenreportArgs {
    #[command(flatten)]
    pub divisor: DivisorArgs,
    /// Degree used for the multiplicity check.
    #[arg(long, default_value_t = 2)]
    pub ell: u64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub fan: PathBuf,
    #[arg(long)]
    pub sub: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CODIM_BOUND)]
    pub codim_bound: usize,
    /// Output SVG file (stdout when omitted).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub no_labels: bool,
    #[arg(long)]
    pub no_hairs: bool,
}

/// `Ok(true)`: success; `Ok(false)`: a verification failed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate(a) => validate(a),
        Command::Thomsen(a) => thomsen(a),
        Command::Stratify(a) => stratify(a),
        Command::Resolve(a) => resolve(a),
        Command::Diagonal(a) => diagonal(a),
        Command::Restrict(a) => restrict(a),
        Command::Pushforward(a) => pushforward(a),
        Command::Verify(a) => verify(a),
        Command::Frobenius(a) => frobenius(a),
        Command::Genreport(a) => genreport(a),
        Command::Render(a) => render(a),
    }
}

fn header(command: &str, extra: &[(&str, Value)]) -> Value {
    let mut h = Map::new();
    h.insert("command".into(), command.into());
    h.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    for (k, v) in extra {
        h.insert((*k).into(), v.clone());
    }
    Value::Object(h)
}

fn with_header(mut v: Value, h: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("header".into(), h);
    }
    v
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::InvalidArgument(format!("cannot parse {what} entry {x:?}")).into()))
        .collect()
}

fn sub_of(fan: &StackyFan, sub: Option<&PathBuf>) -> Result<StackyMorphism> {
    match sub {
        Some(p) => load_sub(p, fan),
        None => Ok(StackyMorphism::identity_point(fan)),
    }
}

fn validate(a: FanArgs) -> Result<bool> {
    let raw = load_raw_fan(&a.fan)?;
    let report = validate_stacky_fan(&raw);
    let mut out = json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "notes": report.notes,
    });
    if report.is_valid() {
        let fan = StackyFan::from_raw(&raw)?;
        let pic = PicGroup::of(&fan).structure();
        let charts = toric_core::smooth_stacky_chart_cover(&fan);
        let m = out.as_object_mut().unwrap();
        m.insert("rays".into(), fan.num_rays().into());
        m.insert("maximal_cones".into(), fan.maximal_cones().len().into());
        m.insert("complete".into(), fan.is_complete().into());
        m.insert("variety".into(), fan.is_variety().into());
        m.insert("smoothly_covered".into(), charts.is_ok().into());
        m.insert("pic".into(), json!({ "free_rank": pic.free_rank, "torsion": vec_to_json(&pic.torsion) }));
    }
    write_output(a.out.as_deref(), &json_text(&with_header(out, header("validate", &[]))))?;
    Ok(report.is_valid())
}

fn thomsen(a: FanArgs) -> Result<bool> {
    let fan = load_fan(&a.fan)?;
    let classes = thomsen_collection(&fan, a.codim_bound)?;
    let list: Vec<Value> =
        classes.iter().map(|c| json!({ "divisor": vec_to_json(&c.coefficients), "name": c.to_string() })).collect();
    let out = json!({ "count": list.len(), "classes": list });
    write_output(a.out.as_deref(), &json_text(&with_header(out, header("thomsen", &[]))))?;
    Ok(true)
}

fn stratify(a: SubArgs) -> Result<bool> {
    let fan = load_fan(&a.fan)?;
    let phi = sub_of(&fan, a.sub.as_ref())?;
    let s = Stratification::of(&phi, a.codim_bound)?;
    write_output(a.out.as_deref(), &json_text(&with_header(s.to_json(), header("stratify", &[]))))?;
    Ok(true)
}

fn emit_complex(file: &ComplexFile, command: &str, out: Option<&std::path::Path>) -> Result<()> {
    let ranks: Vec<Value> = file.complex.ranks().iter().map(|(k, r)| json!([k, r])).collect();
    let h = header(command, &[("ranks", Value::Array(ranks))]);
    write_output(out, &json_text(&with_header(file.to_json(None, None), h)))
}

fn resolve(a: SubArgs) -> Result<bool> {
    let fan = load_fan(&a.fan)?;
    let phi = sub_of(&fan, a.sub.as_ref())?;
    let c = build_resolution(&phi, a.codim_bound)?;
    emit_complex(&c.into(), "resolve", a.out.as_deref())?;
    Ok(true)
}

fn diagonal(a: FanArgs) -> Result<bool> {
    let fan = load_fan(&a.fan)?;
    let c = diagonal_resolution(&fan, a.codim_bound)?;
    emit_complex(&c.into(), "diagonal", a.out.as_deref())?;
    Ok(true)
}

fn augmented(file: &ComplexFile) -> Result<toric_resolution::AugmentedComplex> {
    file.augmented().ok_or_else(|| {
        CliError::InvalidArgument("the complex file carries no augmentation (\"alpha\" and \"phi\")".into()).into()
    })
}

fn restrict(a: RestrictArgs) -> Result<bool> {
    let file = load_complex(&a.complex)?;
    let aug = augmented(&file)?;
    let mut cone: Vec<usize> = parse_list(&a.cone, "cone")?;
    cone.sort_unstable();
    if !aug.complex.fan.maximal_cones().contains(&cone) {
        bail!(CliError::InvalidArgument(format!("{cone:?} is not a maximal cone of the fan")));
    }
    let r = restrict_to_cone(&aug, &cone)?;
    let koszul = match koszul_compare(&r, &aug.target) {
        Ok(b) => Value::Bool(b),
        Err(ResolutionError::NoLocalModel(_)) => Value::String("no_local_model".into()),
        Err(e) => return Err(e.into()),
    };
    let reduced = ComplexFile { complex: r.reduced.clone(), alpha: Some(r.alpha), phi: None };
    let out = json!({
        "cone": cone,
        "chart_rays": r.kept,
        "reduced": reduced.to_json(None, None),
        "reduced_ranks": r.reduced.ranks().iter().map(|(k, n)| json!([k, n])).collect::<Vec<_>>(),
        "restricted_ranks": r.restricted.ranks().iter().map(|(k, n)| json!([k, n])).collect::<Vec<_>>(),
        "koszul": koszul,
    });
    write_output(a.out.as_deref(), &json_text(&with_header(out, header("restrict", &[]))))?;
    Ok(true)
}

fn pushforward(a: PushforwardArgs) -> Result<bool> {
    let file = load_complex(&a.complex)?;
    let pi = load_morphism(&a.morphism)?;
    if pi.source() != &file.complex.fan {
        bail!(CliError::InvalidArgument("the morphism's source is not the complex's fan".into()));
    }
    let comps = pushforward_finite_quotient_complex(&file.complex, &pi)?;
    let list: Vec<Value> = comps
        .into_iter()
        .map(|(label, c)| {
            let ranks: Vec<Value> = c.ranks().iter().map(|(k, n)| json!([k, n])).collect();
            json!({
                "character": vec_to_json(&label),
                "ranks": ranks,
                "complex": ComplexFile { complex: c, alpha: None, phi: None }.to_json(None, None),
            })
        })
        .collect();
    let out = json!({ "components": list });
    write_output(a.out.as_deref(), &json_text(&with_header(out, header("pushforward", &[]))))?;
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let file = load_complex(&a.complex)?;
    let c = &file.complex;
    let mut checks = Map::new();
    let d2 = check_d_squared(c);
    checks.insert("d_squared_zero".into(), d2.into());
    let homogeneous = match check_homogeneity(c) {
        Ok(()) => Value::Bool(true),
        Err(ResolutionError::Inhomogeneous { degree, row, col }) => json!({ "degree": degree, "row": row, "col": col }),
        Err(e) => return Err(e.into()),
    };
    let mut passed = d2 && homogeneous == Value::Bool(true);
    checks.insert("homogeneous".into(), homogeneous);
    if let (true, Some(aug)) = (passed, file.augmented()) {
        let codim = aug.target.codim() as i64;
        let length_ok = c.length() == codim;
        let euler_ok = codim == 0 || alternating_rank_sum(c) == 0;
        checks.insert("length_equals_codim".into(), length_ok.into());
        checks.insert("alternating_rank_sum_zero".into(), euler_ok.into());
        let fiber = fiber_exactness_check(&aug, a.trials, a.seed)?;
        checks.insert(
            "fiber".into(),
            json!({
                "trials": fiber.trials,
                "on_y": fiber.on_y_trials,
                "violations": fiber.violations.iter().map(|v| v.trial).collect::<Vec<_>>(),
                "passed": fiber.passed(),
            }),
        );
        let mut charts = Vec::new();
        let mut koszul_ok = true;
        for cone in c.fan.maximal_cones() {
            let r = restrict_to_cone(&aug, cone)?;
            let status = match chart_local_model(&r.chart_fan, &aug.target) {
                Err(ResolutionError::NoLocalModel(_)) => "no_local_model",
                Err(e) => return Err(e.into()),
                // a Koszul complex of different shape resolves a different scheme
                Ok((model, _)) if model.ranks() != r.reduced.complex.ranks() => "not_a_complete_intersection",
                Ok(_) => {
                    if koszul_compare(&r, &aug.target)? {
                        "match"
                    } else {
                        koszul_ok = false;
                        "mismatch"
                    }
                }
            };
            charts.push(json!({ "cone": cone, "koszul": status }));
        }
        checks.insert("charts".into(), Value::Array(charts));
        passed = length_ok && euler_ok && fiber.passed() && koszul_ok;
    }
    let out = json!({ "checks": checks, "passed": passed });
    let h = header("verify", &[("seed", a.seed.into()), ("trials", a.trials.into())]);
    write_output(a.out.as_deref(), &json_text(&with_header(out, h)))?;
    Ok(passed)
}

/// Pic coordinates and the divisor vector named by `--divisor`.
fn divisor_input(a: &DivisorArgs) -> Result<(StackyFan, PicCoordinates, Vec<Int>)> {
    let fan = load_fan(&a.fan)?;
    let coords = match &a.basis {
        Some(b) => PicCoordinates::with_generators(&fan, &parse_list::<usize>(b, "basis")?)?,
        None => PicCoordinates::standard(&fan)?,
    };
    let v: Vec<i64> = parse_list(&a.divisor, "divisor")?;
    let d: Vec<Int> = if v.len() == fan.num_rays() {
        v.iter().map(|&x| Int::from(x)).collect()
    } else if v.len() == coords.rank() {
        coords.class_of(&v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>()).coefficients
    } else {
        bail!(CliError::InvalidArgument(format!(
            "--divisor has {} entries; expected {} (one per ray) or {} (Pic coordinates)",
            v.len(),
            fan.num_rays(),
            coords.rank()
        )));
    };
    Ok((fan, coords, d))
}

fn characteristic_note(p: Option<u64>, ell: Option<u64>) -> Vec<(&'static str, Value)> {
    let Some(p) = p else { return vec![] };
    let power = ell.is_some_and(|l| p > 1 && {
        let mut x = l;
        while x % p == 0 {
            x /= p;
        }
        x == 1
    });
    let note = if power {
        "ell is a power of the characteristic: the decomposition also describes the absolute Frobenius; computed in characteristic 0"
    } else {
        "annotation only; computed in characteristic 0"
    };
    vec![("characteristic", p.into()), ("characteristic_note", note.into())]
}

fn frobenius(a: FrobeniusArgs) -> Result<bool> {
    let (fan, coords, d) = divisor_input(&a.divisor)?;
    let mut out = Map::new();
    out.insert("pic_generators".into(), json!(coords.generators()));
    out.insert("divisor".into(), vec_to_json(&d));
    out.insert("class".into(), fjson::class_to_json(&coords.pic().canonical(&d), &coords));
    out.insert("zonotope".into(), fjson::zonotope_to_json(&Zonotope::of(&coords)));
    let mut passed = true;
    match a.ell {
        Some(ell) => {
            let dec = frob_pushforward(&fan, &d, ell)?;
            passed = dec.total_rank() == ell.pow(fan.rank_n() as u32);
            out.insert("decomposition".into(), fjson::decomposition_to_json(&dec, &coords));
        }
        None => {
            let s = frob_set(&fan, &d, toric_frobenius::FROB_SET_ROUNDS)?;
            out.insert("frob_set".into(), fjson::frob_set_to_json(&s, &coords));
        }
    }
    let h = header("frobenius", &characteristic_note(a.divisor.characteristic, a.ell));
    write_output(a.divisor.out.as_deref(), &json_text(&with_header(Value::Object(out), h)))?;
    Ok(passed)
}

fn genreport(a: GenreportArgs) -> Result<bool> {
    let (fan, coords, d) = divisor_input(&a.divisor)?;
    let r = generation_report(&fan, &d, a.ell)?;
    let h = header("genreport", &characteristic_note(a.divisor.characteristic, Some(a.ell)));
    write_output(a.divisor.out.as_deref(), &json_text(&with_header(fjson::generation_report_to_json(&r, &coords), h)))?;
    Ok(r.multiplicities_hold())
}

fn render(a: RenderArgs) -> Result<bool> {
    let fan = load_fan(&a.fan)?;
    let phi = sub_of(&fan, a.sub.as_ref())?;
    let s = Stratification::of(&phi, a.codim_bound)?;
    let opts = RenderOptions { labels: !a.no_labels, hairs: !a.no_hairs, ..RenderOptions::default() };
    let svg = render_svg(&s, &opts)?;
    write_output(a.svg.as_deref(), &svg)?;
    Ok(true)
}

/// The stable error code of the first recognized error in the chain.
pub fn error_code(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(x) = cause.downcast_ref::<toric_core::CoreError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<toric_strat::StratError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<toric_morse::MorseError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<ResolutionError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<toric_frobenius::FrobeniusError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<crate::render::RenderError>() {
            return x.code();
        }
        if let Some(x) = cause.downcast_ref::<CliError>() {
            return x.code();
        }
    }
    "IO"
}
