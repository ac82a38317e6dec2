//! Command-line front end. Every subcommand prints one JSON document (with
//! `--json`) or a short `key: value` summary, and exits with
//! 0 for a definite verdict, 2 for bad input and 3 when a budget or
//! tolerance ran out.

mod json;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::lattes::{certify_sphere_wandering, verify_semiconjugacy, LattesError, LattesModel};
use crate::lattice::{Coord, Lattice, LatticeError};
use crate::line_orbit::{
    classify_line, line_from_point, LineError, SlopeSpec, TorusLine, Transverse,
};
use crate::numbers::{parse_complex, parse_quadratic, NumberError, QuadraticNumber};
use crate::segment::{
    certify_wandering, find_collision, normalized_iterates, GroupAction, SegmentError,
    TorusSegment, DEFAULT_CHECK_ITERATES,
};
use crate::torus_map::{AffineTorusMap, TorusMapError};

const SUBCOMMANDS: [&str; 7] = [
    "classify-map",
    "classify-line",
    "certify-segment",
    "find-collision",
    "certify-sphere",
    "verify-semiconjugacy",
    "plot-orbit",
];

#[derive(Parser, Debug)]
#[command(
    name = "lattes-wander",
    version,
    about = "Wandering segments of flat torus maps and their Lattès quotients"
)]
struct Cli {
    /// JSON file whose keys fill in flags missing from the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the full JSON document instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Output file: SVG for plot-orbit, CSV for verify-semiconjugacy, a JSON
    /// copy otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Iterate budget for searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Residual tolerance for verify-semiconjugacy.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// Multiplier `a` (complex expression).
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Translation `b` (complex expression).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: String,
    /// Lattice generator `ω` with positive imaginary part.
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    omega: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer matrix, degree and multiplier class of `z ↦ a·z + b`.
    ClassifyMap {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Orbit class of a line: Jordan curve, eventually periodic or wandering.
    ClassifyLine {
        #[command(flatten)]
        map: MapArgs,
        /// Slope `dy/dx` as an expression, or a direction "m,k".
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        /// First transverse coordinate (or the offset of a closed line).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
        /// A point "x,y" on the line, instead of alpha/beta.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta"])]
        point: Option<String>,
    },
    /// Certify that a segment (or a subsegment) wanders on the torus.
    CertifySegment {
        #[command(flatten)]
        map: MapArgs,
        /// "x,y,dir,len" with dir one of h, v, s:<slope>, d:m:k.
        #[arg(long, allow_hyphen_values = true)]
        seg: String,
        #[arg(long, default_value_t = DEFAULT_CHECK_ITERATES)]
        check_iterates: usize,
    },
    /// Search for two iterates of a segment that meet.
    FindCollision {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        seg: String,
        /// Also compare rotations of this order about `z0`.
        #[arg(long)]
        nu: Option<u32>,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
    },
    /// Certify wandering of the segment's image on the sphere.
    CertifySphere {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        seg: String,
        #[arg(long, default_value_t = 2)]
        nu: u32,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value_t = DEFAULT_CHECK_ITERATES)]
        check_iterates: usize,
    },
    /// Check numerically that `℘` carries the torus map to a rational map.
    VerifySemiconjugacy {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
    },
    /// Draw the first iterates of a segment in the fundamental domain.
    PlotOrbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        seg: String,
        #[arg(long, default_value_t = 12)]
        iterates: usize,
    },
}

/// A failure with a stable machine-readable code.
#[derive(Debug)]
struct Failure {
    code: String,
    message: String,
    exit: i32,
}

impl Failure {
    fn input(code: &str, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            message: message.into(),
            exit: 2,
        }
    }

    fn limit(code: &str, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            message: message.into(),
            exit: 3,
        }
    }
}

impl From<NumberError> for Failure {
    fn from(e: NumberError) -> Self {
        let code = match e {
            NumberError::Syntax { .. } => "ParseError",
            NumberError::MixedRadicals(..) => "MixedRadicals",
            NumberError::DivisionByZero => "DivisionByZero",
            NumberError::NotReal => "NotReal",
            NumberError::RadicandTooLarge(_) => "RadicandTooLarge",
            NumberError::NegativeRadicand => "NegativeRadicand",
        };
        Failure::input(code, e.to_string())
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Number(n) => n.into(),
            other => Failure::input("InvalidLattice", other.to_string()),
        }
    }
}

impl From<TorusMapError> for Failure {
    fn from(e: TorusMapError) -> Self {
        let code = match &e {
            TorusMapError::NotACovering(_) => "NotACovering",
            TorusMapError::DegreeTooLow(_) => "DegreeTooLow",
            TorusMapError::IncompatibleField(_) => "IncompatibleField",
        };
        Failure::input(code, e.to_string())
    }
}

impl From<LineError> for Failure {
    fn from(e: LineError) -> Self {
        let msg = e.to_string();
        match e {
            LineError::FieldClash(_) => Failure::input("FieldClash", msg),
            LineError::SlopeNotInvariant => Failure::input("SlopeNotInvariant", msg),
            LineError::NotPrimitive(..) => Failure::input("NotPrimitive", msg),
            LineError::RationalSlope(_) => Failure::input("RationalSlope", msg),
            LineError::IrrationalTranslation => Failure::input("IrrationalTranslation", msg),
            LineError::OrbitBoundExceeded(_) => Failure::limit("OrbitBoundExceeded", msg),
            LineError::Number(n) => n.into(),
        }
    }
}

impl From<SegmentError> for Failure {
    fn from(e: SegmentError) -> Self {
        let msg = e.to_string();
        match e {
            SegmentError::DegenerateSegment => Failure::input("DegenerateSegment", msg),
            SegmentError::ParameterNotRational(_) => Failure::input("ParameterNotRational", msg),
            SegmentError::UncertainAtTolerance => Failure::limit("UncertainAtTolerance", msg),
            SegmentError::BudgetExceeded(_) => Failure::limit("BudgetExceeded", msg),
            SegmentError::NoCollisionWithinBudget { .. } => {
                Failure::limit("NoCollisionWithinBudget", msg)
            }
            SegmentError::WrongLatticeForGroup { .. } => {
                Failure::input("WrongLatticeForGroup", msg)
            }
            SegmentError::CrossCheckFailed(..) => Failure::limit("CrossCheckFailed", msg),
            SegmentError::NotIntegerMultiplier => Failure::input("NotIntegerMultiplier", msg),
            SegmentError::Line(l) => l.into(),
            SegmentError::Map(m) => m.into(),
            SegmentError::Number(n) => n.into(),
        }
    }
}

impl From<LattesError> for Failure {
    fn from(e: LattesError) -> Self {
        let msg = e.to_string();
        match e {
            LattesError::NotLattesCompatible(_) => Failure::input("NotLattesCompatible", msg),
            LattesError::WrongLatticeForGroup { .. } => Failure::input("WrongLatticeForGroup", msg),
            LattesError::NeedsInvolution(_) => Failure::input("NeedsInvolution", msg),
            LattesError::OddPeriodPairing { .. } => Failure::input("OddPeriodPairing", msg),
            LattesError::NearPole => Failure::input("NearPole", msg),
            LattesError::TooFewSamples { .. } => Failure::input("TooFewSamples", msg),
            LattesError::FitIllConditioned(_) => Failure::limit("FitIllConditioned", msg),
            LattesError::ResidualExceedsTol { .. } => Failure::limit("ResidualExceedsTol", msg),
            LattesError::DuplicationCheckFailed(_) => Failure::limit("DuplicationCheckFailed", msg),
            LattesError::Segment(s) => s.into(),
            LattesError::Line(l) => l.into(),
            LattesError::Map(m) => m.into(),
        }
    }
}

fn build_map(args: &MapArgs) -> Result<AffineTorusMap, Failure> {
    let lat = Lattice::new(parse_complex(&args.omega)?)?;
    let a = parse_complex(&args.a)?;
    let b = parse_complex(&args.b)?;
    Ok(AffineTorusMap::new(a, b, lat)?)
}

fn parse_pair(text: &str, what: &str) -> Result<(String, String), Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [x, y] => Ok((x.trim().to_string(), y.trim().to_string())),
        _ => Err(Failure::input(
            "ParseError",
            format!("{what} must be \"x,y\", got {text:?}"),
        )),
    }
}

fn parse_coord(text: &str, what: &str) -> Result<Coord, Failure> {
    let (x, y) = parse_pair(text, what)?;
    Ok(Coord::new(parse_quadratic(&x)?, parse_quadratic(&y)?))
}

fn parse_int(text: &str) -> Result<BigInt, Failure> {
    parse_quadratic(text)?
        .to_integer()
        .ok_or_else(|| Failure::input("ParseError", format!("{text:?} is not an integer")))
}

/// Direction vector of a segment: `h`, `v`, `s:<slope>` or `d:m:k`.
fn parse_direction(text: &str) -> Result<Coord, Failure> {
    let one = QuadraticNumber::one;
    let zero = QuadraticNumber::zero;
    match text {
        "h" => return Ok(Coord::new(one(), zero())),
        "v" => return Ok(Coord::new(zero(), one())),
        _ => {}
    }
    if let Some(s) = text.strip_prefix("s:") {
        return Ok(Coord::new(one(), parse_quadratic(s)?));
    }
    if let Some(d) = text.strip_prefix("d:") {
        if let Some((m, k)) = d.split_once(':') {
            return Ok(Coord::new(
                QuadraticNumber::from_big(parse_int(m)?),
                QuadraticNumber::from_big(parse_int(k)?),
            ));
        }
    }
    Err(Failure::input(
        "ParseError",
        format!("direction must be h, v, s:<slope> or d:m:k, got {text:?}"),
    ))
}

/// `"x,y,dir,len"`: the segment from the anchor `(x, y)` to
/// `(x, y) + len·dir`, in lattice coordinates.
fn parse_segment(text: &str) -> Result<TorusSegment, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [x, y, dir, len] = parts.as_slice() else {
        return Err(Failure::input(
            "ParseError",
            format!("segment must be \"x,y,dir,len\", got {text:?}"),
        ));
    };
    let anchor = Coord::new(parse_quadratic(x)?, parse_quadratic(y)?);
    let len = parse_quadratic(len)?;
    let end = anchor.checked_add(&parse_direction(dir)?.checked_scale(&len)?)?;
    Ok(TorusSegment::from_endpoints(&anchor, &end)?)
}

fn parse_slope(text: &str) -> Result<SlopeSpec, Failure> {
    if text.contains(',') {
        let (m, k) = parse_pair(text, "direction")?;
        return Ok(SlopeSpec::rational(parse_int(&m)?, parse_int(&k)?)?);
    }
    let s = parse_quadratic(text)?;
    if s.is_rational() {
        // n/d becomes the primitive direction (d, n).
        return Ok(SlopeSpec::rational(
            s.denominator().clone(),
            s.numerator_rational().clone(),
        )?);
    }
    Ok(SlopeSpec::irrational(s)?)
}

fn check_budget(budget: Option<usize>) -> Result<Option<usize>, Failure> {
    match budget {
        Some(0) => Err(Failure::input("UsageError", "--budget must be at least 1")),
        b => Ok(b),
    }
}

struct Outcome {
    value: Value,
    /// Bytes for `--out` when they differ from the JSON document.
    artifact: Option<String>,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome {
            value,
            artifact: None,
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let budget = check_budget(cli.budget)?;
    match &cli.command {
        Command::ClassifyMap { map } => Ok(json::map(&build_map(map)?).into()),
        Command::ClassifyLine {
            map,
            slope,
            alpha,
            beta,
            point,
        } => {
            let map = build_map(map)?;
            let slope = parse_slope(slope)?;
            let line = match (point, &slope) {
                (Some(p), _) => line_from_point(&slope, &parse_coord(p, "--point")?)?,
                (None, SlopeSpec::RationalDirection { m, k }) => {
                    TorusLine::closed(m.clone(), k.clone(), parse_quadratic(alpha)?)?
                }
                (None, SlopeSpec::IrrationalSlope(s)) => TorusLine::irrational(
                    s.clone(),
                    Transverse::new(parse_quadratic(alpha)?, parse_quadratic(beta)?),
                )?,
            };
            let class = classify_line(&map, &line)?;
            let mut v = json::line_class(&class);
            v["line"] = json!(line.to_string());
            Ok(v.into())
        }
        Command::CertifySegment {
            map,
            seg,
            check_iterates,
        } => {
            let map = build_map(map)?;
            let seg = parse_segment(seg)?;
            let verdict = certify_wandering(&map, &seg, *check_iterates)?;
            Ok(json::wandering_verdict(&verdict).into())
        }
        Command::FindCollision { map, seg, nu, z0 } => {
            let map = build_map(map)?;
            let seg = parse_segment(seg)?;
            let group = match nu {
                Some(nu) => Some(GroupAction::new(
                    map.lattice(),
                    *nu,
                    parse_coord(z0, "--z0")?,
                )?),
                None => None,
            };
            match find_collision(&map, &seg, group.as_ref(), budget) {
                Ok(cert) => Ok(json::collision(&cert).into()),
                Err(SegmentError::NoCollisionWithinBudget { budget }) => {
                    Ok(json!({"verdict": "no-collision", "budget": budget}).into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::CertifySphere {
            map,
            seg,
            nu,
            z0,
            check_iterates,
        } => {
            let model = LattesModel::new(build_map(map)?, *nu, parse_coord(z0, "--z0")?)?;
            let seg = parse_segment(seg)?;
            let verdict = certify_sphere_wandering(&model, &seg, *check_iterates)?;
            let mut v = json::sphere_verdict(&verdict);
            v["signature"] = json!(model.signature());
            Ok(v.into())
        }
        Command::VerifySemiconjugacy { map, samples, z0 } => {
            let tol = cli.tol.unwrap_or(1e-6);
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Failure::input("UsageError", "--tol must lie in (0, 1)"));
            }
            let model = LattesModel::new(build_map(map)?, 2, parse_coord(z0, "--z0")?)?;
            let report = verify_semiconjugacy(&model, *samples, tol)?;
            Ok(Outcome {
                value: json::semiconjugacy(&report),
                artifact: Some(report.to_csv()),
            })
        }
        Command::PlotOrbit { map, seg, iterates } => {
            let Some(path) = &cli.out else {
                return Err(Failure::input(
                    "UsageError",
                    "plot-orbit needs --out <path>",
                ));
            };
            let map = build_map(map)?;
            let seg = parse_segment(seg)?;
            let chords = normalized_iterates(&map, &seg, *iterates);
            let witness = if map.integer_multiplier().is_none() && *iterates > 1 {
                find_collision(&map, &seg, None, Some(budget.unwrap_or(*iterates - 1)))
                    .ok()
                    .map(|c| c.witness)
            } else {
                None
            };
            let picture = svg::emit_orbit_svg(map.lattice(), &chords, witness)
                .map_err(|m| Failure::limit("BudgetExceeded", m))?;
            let pieces: usize = chords.iter().map(|c| svg::wrap_pieces(c).len()).sum();
            Ok(Outcome {
                value: json!({
                    "svg": path.display().to_string(),
                    "iterates": chords.len(),
                    "pieces": pieces,
                    "witness": witness.map(|(x, y)| json!([json::float(x), json::float(y)])),
                }),
                artifact: Some(picture),
            })
        }
    }
}

fn flag_present(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == flag || a.starts_with(&format!("{flag}="))
    })
}

/// Inserts the keys of the `--config` file that the command line leaves out.
fn merge_config(mut args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(i) = args
        .iter()
        .position(|a| a == "--config" || a.to_string_lossy().starts_with("--config="))
    else {
        return Ok(args);
    };
    let path: PathBuf = match args[i].to_string_lossy().strip_prefix("--config=") {
        Some(p) => p.into(),
        None => args
            .get(i + 1)
            .map(PathBuf::from)
            .ok_or_else(|| Failure::input("UsageError", "--config needs a path"))?,
    };
    let removed = if args[i] == "--config" { 2 } else { 1 };
    args.drain(i..i + removed);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::input("IoError", format!("{}: {e}", path.display())))?;
    let config: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::input("ConfigError", format!("{}: {e}", path.display())))?;
    let Value::Object(entries) = config else {
        return Err(Failure::input(
            "ConfigError",
            "config must be a JSON object",
        ));
    };
    let has_command = args
        .iter()
        .skip(1)
        .any(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    if !has_command {
        match entries.get("command") {
            Some(Value::String(c)) => args.push(c.into()),
            Some(_) => {
                return Err(Failure::input(
                    "ConfigError",
                    "\"command\" must be a string",
                ))
            }
            None => {}
        }
    }
    for (key, value) in &entries {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if flag_present(&args, &flag) {
            continue;
        }
        match value {
            Value::Bool(true) => args.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => {
                args.push(flag.into());
                args.push(s.into());
            }
            Value::Number(n) => {
                args.push(flag.into());
                args.push(n.to_string().into());
            }
            _ => {
                return Err(Failure::input(
                    "ConfigError",
                    format!("config key {key:?} must be a string, number or boolean"),
                ))
            }
        }
    }
    Ok(args)
}

fn summary(v: &Value) -> String {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        other => format!("{other}\n"),
    }
}

fn write_file(path: &Path, bytes: &str) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::input("IoError", format!("{}: {e}", path.display())))
}

fn report_failure(f: &Failure, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if as_json {
        let v = json!({"error": {"code": f.code, "message": f.message}});
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&v).unwrap_or_default()
        );
    }
    let _ = writeln!(err, "error[{}]: {}", f.code, f.message);
    f.exit
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let raw: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let wants_json = flag_present(&raw, "--json");
    let args = match merge_config(raw) {
        Ok(a) => a,
        Err(f) => return report_failure(&f, wants_json, out, err),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let f = Failure::input("UsageError", e.to_string().trim_end());
            return report_failure(&f, flag_present(&args, "--json"), out, err);
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(f) => return report_failure(&f, cli.json, out, err),
    };
    let doc = serde_json::to_string_pretty(&outcome.value).unwrap_or_default();
    if let Some(path) = &cli.out {
        let bytes = outcome.artifact.as_deref().unwrap_or(&doc);
        if let Err(f) = write_file(path, bytes) {
            return report_failure(&f, cli.json, out, err);
        }
    }
    let _ = if cli.json {
        writeln!(out, "{doc}")
    } else {
        write!(out, "{}", summary(&outcome.value))
    };
    0
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("lattes-wander").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    fn doc(args: &[&str]) -> (i32, Value) {
        let (code, text) = call(args);
        (code, serde_json::from_str(&text).unwrap())
    }

    #[test]
    fn doubling_on_the_square_torus() {
        let (code, v) = doc(&[
            "classify-map",
            "--a",
            "2",
            "--b",
            "0",
            "--omega",
            "i",
            "--json",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["degree"], json!(4));
        assert_eq!(v["multiplier"], json!("integer"));
    }

    #[test]
    fn irrational_multiplier_is_an_input_error() {
        let (code, v) = doc(&["classify-map", "--a", "sqrt(2)", "--json"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["code"], json!("NotACovering"));
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (code, _) = call(&["classify-map", "--a", "2", "--frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn segment_syntax() {
        let s = parse_segment("1/3,0,h,1/10").unwrap();
        assert!(s.line().is_closed());
        let s = parse_segment("0,0,s:sqrt(2),1/10").unwrap();
        assert!(!s.line().is_closed());
        let s = parse_segment("0,0,d:1:2,1/4").unwrap();
        assert_eq!(s.endpoints_f64().1, (0.25, 0.5));
        assert!(parse_segment("0,0,x,1").is_err());
        assert!(parse_segment("0,0,h").is_err());
        assert!(matches!(
            parse_segment("0,0,h,0"),
            Err(Failure { exit: 2, .. })
        ));
    }

    #[test]
    fn rational_slope_becomes_a_direction() {
        assert_eq!(
            parse_slope("2/3").unwrap(),
            SlopeSpec::rational(3, 2).unwrap()
        );
        assert_eq!(
            parse_slope("-1,2").unwrap(),
            SlopeSpec::rational(-1, 2).unwrap()
        );
    }

    #[test]
    fn no_collision_is_a_verdict() {
        let (code, v) = doc(&[
            "find-collision",
            "--a",
            "2",
            "--seg",
            "1/7,0,h,1/10",
            "--budget",
            "2",
            "--json",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], json!("no-collision"));
        assert_eq!(v["budget"], json!(2));
    }

    #[test]
    fn zero_budget_rejected() {
        let (code, _) = call(&[
            "find-collision",
            "--a",
            "2",
            "--seg",
            "0,0,h,1/10",
            "--budget",
            "0",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn text_summary_lists_keys() {
        let (code, text) = call(&["classify-map", "--a", "2"]);
        assert_eq!(code, 0);
        assert!(text.lines().any(|l| l == "degree: 4"));
    }
}
