//! Command-line surface: configuration, σ-family specs, command drivers and
//! the exit-code taxonomy.
//!
//! A run is configured by an optional TOML or JSON file (`--config`) whose
//! keys mirror the long flags; flags win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::elimination::{Cache, EliminantKind, PlaneCurve, MAX_DUAL_DEGREE};
use crate::energy::verify::{random_gl3, random_sl3, PsgFamily, SigmaPoint, VerificationReport, Verifier};
use crate::energy::{energies, linalg::Mat3, QuadratureGrid, C};
use crate::error::{Error, Result};
use crate::poly::{parse_rat, AnyPoly, ExactPoly, PolyFile};
use crate::polytope::{
    geometric_grid, predict_energy_slope, scaled_inclusion, symbolic_slope, ActionKind, OneParamSubgroup,
    WeightPolytope,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

/// Version string embedded in every report.
pub fn artifact_version() -> String {
    format!("{} ({})", env!("CARGO_PKG_VERSION"), option_env!("PLANEDUAL_GIT_DESCRIBE").unwrap_or("unknown"))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::NonConvergence(_) => EXIT_NUMERIC,
        Error::DegreeMismatch { .. } => EXIT_VERIFY_FAIL,
        _ => EXIT_INPUT,
    }
}

#[derive(Parser, Debug)]
#[command(name = "planedual", version, about = "Discriminants, weight polytopes and Bergman energies of plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dual-curve discriminant of a plane curve (degree <= 4).
    Discriminant(CommonArgs),
    /// Resultant of two generic binary forms.
    GenericResultant(CommonArgs),
    /// Discriminant of a generic binary form.
    GenericDiscriminant(CommonArgs),
    /// Check the energy identities and write one report per identity.
    Verify(CommonArgs),
    /// Weight polytopes and the scaled-inclusion test.
    Polytope(CommonArgs),
    /// Predicted versus measured slopes along one-parameter subgroups.
    Slope(CommonArgs),
    /// Energy functionals at each σ of a family.
    Energies(CommonArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// TOML or JSON file with defaults for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Curve polynomial file (JSON, point space, 3 variables).
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub resolution: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// σ family: `random-sl3:seed=7,count=8,spread=8`, `random-gl3:seed=3,count=10`,
    /// `diagonal:1,0,-1` or `explicit:<file.json>`. Repeatable.
    #[arg(long)]
    pub sigma: Vec<String>,
    /// Comma-separated `t` values, or `geom:<t2max>:<t2min>:<n>` in `|t|^2`.
    #[arg(long = "t-grid")]
    pub t_grid: Option<String>,
    /// Quadrature tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Form degree for the generic eliminants and generic polytopes.
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    #[arg(long, value_enum)]
    pub target: Option<Target>,
    /// Scale `c` (rational, e.g. `1/2`) for `c·N(R) ⊆ N(Δ)`.
    #[arg(long)]
    pub inclusion: Option<String>,
    /// Character signs used for the generic resultant polytope.
    #[arg(long = "resultant-action", value_enum)]
    pub resultant_action: Option<ResultantAction>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Ddbar,
    Planecurve,
    Aubin,
    Tian,
    Veronese,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Delta,
    Resultant,
    Generic,
}

/// `points` treats the resultant's folded exponents like a point polynomial
/// (weights `-(α+β)`); `dual` uses the dual-variable signs `+(α+β)`.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResultantAction {
    Points,
    Dual,
}

/// Resolved configuration for one command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub curve: Option<PathBuf>,
    pub resolution: u32,
    pub seed: u64,
    pub sigma: Vec<SigmaFamilySpec>,
    pub t_grid: Vec<f64>,
    pub tolerance: f64,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
    pub degree: Option<u32>,
    pub which: Which,
    pub target: Target,
    pub inclusion: Option<String>,
    pub resultant_action: ResultantAction,
}

/// File form of [`RunConfig`]; every key optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    curve: Option<PathBuf>,
    resolution: Option<u32>,
    seed: Option<u64>,
    sigma: Option<Vec<String>>,
    t_grid: Option<String>,
    tolerance: Option<f64>,
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
    degree: Option<u32>,
    which: Option<Which>,
    target: Option<Target>,
    inclusion: Option<String>,
    resultant_action: Option<ResultantAction>,
}

pub const DEFAULT_RESOLUTION: u32 = 512;
pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_SPREAD: f64 = 10.0;

/// Default `|t|^2` sweep: four points from `1e-2` to `1e-5`.
pub fn default_t_grid() -> Vec<f64> {
    geometric_grid(1e-2, 1e-5, 4).into_iter().map(f64::sqrt).collect()
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            None => ConfigFile::default(),
            Some(p) => {
                let s = std::fs::read_to_string(p)?;
                let is_json = p.extension().is_some_and(|e| e == "json");
                if is_json {
                    serde_json::from_str(&s)?
                } else {
                    toml::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
                }
            }
        };
        let seed = args.seed.or(file.seed).unwrap_or(1);
        let sigma_raw = if args.sigma.is_empty() { file.sigma.unwrap_or_default() } else { args.sigma.clone() };
        let sigma = sigma_raw.iter().map(|s| SigmaFamilySpec::parse(s)).collect::<Result<Vec<_>>>()?;
        let t_grid = match args.t_grid.clone().or(file.t_grid) {
            Some(s) => parse_t_grid(&s)?,
            None => default_t_grid(),
        };
        let tolerance = args.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {tolerance}")));
        }
        let resolution = args.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION);
        if resolution == 0 {
            return Err(Error::Invalid("resolution must be positive".into()));
        }
        Ok(RunConfig {
            curve: args.curve.clone().or(file.curve),
            resolution,
            seed,
            sigma,
            t_grid,
            tolerance,
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            cache: args.cache.clone().or(file.cache),
            degree: args.degree.or(file.degree),
            which: args.which.or(file.which).unwrap_or(Which::All),
            target: args.target.or(file.target).unwrap_or(Target::Delta),
            inclusion: args.inclusion.clone().or(file.inclusion),
            resultant_action: args.resultant_action.or(file.resultant_action).unwrap_or(ResultantAction::Points),
        })
    }

    fn curve(&self) -> Result<PlaneCurve> {
        let path = self.curve.as_ref().ok_or_else(|| Error::Invalid("--curve is required".into()))?;
        read_curve(path)
    }

    fn cache(&self) -> Option<Cache> {
        self.cache.as_ref().map(Cache::new)
    }

    fn degree(&self) -> Result<u32> {
        self.degree.ok_or_else(|| Error::Invalid("--degree is required".into()))
    }
}

/// Reads an exact point-space curve polynomial.
pub fn read_curve(path: &Path) -> Result<PlaneCurve> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    match AnyPoly::from_json(&s)? {
        AnyPoly::Exact(f) => PlaneCurve::new(f),
        AnyPoly::Float(_) => Err(Error::FloatCoefficients),
    }
}

/// How the σ's of a run are generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SigmaFamilySpec {
    ExplicitList { path: PathBuf },
    Diagonal1psg { m: Vec<i64> },
    RandomSl3 { seed: u64, count: usize, spread: f64 },
    RandomGl3 { seed: u64, count: usize },
}

impl SigmaFamilySpec {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed sigma spec {s:?}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let kv = |key: &str| -> Option<&str> {
            rest.split(',').filter_map(|p| p.split_once('=')).find(|(k, _)| k.trim() == key).map(|(_, v)| v.trim())
        };
        match kind {
            "random-sl3" => Ok(SigmaFamilySpec::RandomSl3 {
                seed: kv("seed").map_or(Ok(7), |v| v.parse().map_err(|_| bad()))?,
                count: kv("count").map_or(Ok(8), |v| v.parse().map_err(|_| bad()))?,
                spread: kv("spread").map_or(Ok(DEFAULT_SPREAD), |v| v.parse().map_err(|_| bad()))?,
            }),
            "random-gl3" => Ok(SigmaFamilySpec::RandomGl3 {
                seed: kv("seed").map_or(Ok(3), |v| v.parse().map_err(|_| bad()))?,
                count: kv("count").map_or(Ok(10), |v| v.parse().map_err(|_| bad()))?,
            }),
            "diagonal" => {
                let m = rest.split(',').map(|v| v.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
                OneParamSubgroup::new(m.clone())?;
                if m.len() != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, got: m.len() });
                }
                Ok(SigmaFamilySpec::Diagonal1psg { m })
            }
            "explicit" if !rest.is_empty() => Ok(SigmaFamilySpec::ExplicitList { path: PathBuf::from(rest) }),
            _ => Err(bad()),
        }
    }

    /// Group elements of a non-diagonal family.
    pub fn points(&self) -> Result<Vec<SigmaPoint>> {
        match self {
            SigmaFamilySpec::RandomSl3 { seed, count, spread } => Ok(random_sl3(*seed, *count, *spread)),
            SigmaFamilySpec::RandomGl3 { seed, count } => Ok(random_gl3(*seed, *count)),
            SigmaFamilySpec::ExplicitList { path } => read_sigma_file(path),
            SigmaFamilySpec::Diagonal1psg { .. } => Ok(vec![]),
        }
    }
}

/// A JSON list of 3×3 matrices; entries are numbers or `[re, im]`.
pub fn read_sigma_file(path: &Path) -> Result<Vec<SigmaPoint>> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Vec<Vec<Vec<serde_json::Value>>> = serde_json::from_str(&s)?;
    v.iter()
        .enumerate()
        .map(|(k, m)| {
            if m.len() != 3 || m.iter().any(|r| r.len() != 3) {
                return Err(Error::Parse(format!("matrix {k} is not 3x3")));
            }
            let mut out: Mat3 = [[C::new(0.0, 0.0); 3]; 3];
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    out[i][j] = parse_complex(e).ok_or_else(|| Error::Parse(format!("bad entry in matrix {k}")))?;
                }
            }
            if crate::energy::linalg::det(&out).norm() == 0.0 {
                return Err(Error::SingularMatrix);
            }
            Ok(SigmaPoint { id: format!("explicit[{}]", k), sigma: out })
        })
        .collect()
}

fn parse_complex(v: &serde_json::Value) -> Option<C> {
    match v {
        serde_json::Value::Number(n) => Some(C::new(n.as_f64()?, 0.0)),
        serde_json::Value::Array(a) if a.len() == 2 => Some(C::new(a[0].as_f64()?, a[1].as_f64()?)),
        _ => None,
    }
}

pub fn parse_t_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("malformed t grid {s:?}"));
    let grid = if let Some(rest) = s.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let hi: f64 = parts[0].parse().map_err(|_| bad())?;
        let lo: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        if !(hi > 0.0 && lo > 0.0) || n < 2 {
            return Err(bad());
        }
        geometric_grid(hi, lo, n).into_iter().map(f64::sqrt).collect()
    } else {
        s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
    };
    if grid.len() < 2 || grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(bad());
    }
    Ok(grid)
}

fn write_json(dir: &Path, name: &str, v: &impl Serialize) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(path)
}

fn build_grid(cfg: &RunConfig, curve: &PlaneCurve) -> Result<QuadratureGrid> {
    let mut grid = QuadratureGrid::build(curve, cfg.resolution, cfg.seed)?;
    grid.options.tolerance = cfg.tolerance;
    Ok(grid)
}

fn discriminant_of(cfg: &RunConfig, curve: &PlaneCurve) -> Result<(ExactPoly, serde_json::Value)> {
    if curve.degree() > MAX_DUAL_DEGREE {
        return Err(Error::CapExceeded { what: "dual discriminant", degree: curve.degree(), min: 2, max: MAX_DUAL_DEGREE });
    }
    let (dd, hit, key) = match cfg.cache() {
        Some(c) => {
            let (dd, hit) = c.dual_discriminant(curve)?;
            let key = Cache::key("dual-discriminant", &serde_json::to_string(&curve.f.canonical().to_file())?);
            (dd, hit, Some(key))
        }
        None => (crate::elimination::plane_dual_discriminant(curve)?, false, None),
    };
    let meta = serde_json::json!({
        "source_degree": dd.source_degree,
        "expected_degree": dd.source_degree * (dd.source_degree - 1),
        "degree": dd.delta.degree(),
        "degree_ok": dd.delta.degree() == dd.source_degree * (dd.source_degree - 1),
        "chart": dd.chart,
        "stripped_monomial": dd.stripped,
        "cache_hit": hit,
        "cache_key": key,
    });
    Ok((dd.delta, meta))
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (name, args) = match &cli.command {
        Command::Discriminant(a) => ("discriminant", a),
        Command::GenericResultant(a) => ("generic-resultant", a),
        Command::GenericDiscriminant(a) => ("generic-discriminant", a),
        Command::Verify(a) => ("verify", a),
        Command::Polytope(a) => ("polytope", a),
        Command::Slope(a) => ("slope", a),
        Command::Energies(a) => ("energies", a),
    };
    let result = RunConfig::resolve(args).and_then(|cfg| match name {
        "discriminant" => cmd_discriminant(&cfg),
        "generic-resultant" => cmd_generic(&cfg, EliminantKind::Resultant),
        "generic-discriminant" => cmd_generic(&cfg, EliminantKind::Discriminant),
        "verify" => cmd_verify(&cfg),
        "polytope" => cmd_polytope(&cfg),
        "slope" => cmd_slope(&cfg),
        _ => cmd_energies(&cfg),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("planedual {name}: {e}");
            exit_code(&e)
        }
    }
}

pub fn cmd_discriminant(cfg: &RunConfig) -> Result<i32> {
    let curve = cfg.curve()?.certified()?;
    let (delta, mut meta) = discriminant_of(cfg, &curve)?;
    meta["version"] = serde_json::json!(artifact_version());
    let p = write_json(&cfg.out, "discriminant.json", &delta.to_file())?;
    write_json(&cfg.out, "discriminant-meta.json", &meta)?;
    println!("{delta}");
    println!("wrote {}", p.display());
    Ok(if meta["degree_ok"] == serde_json::json!(true) { EXIT_PASS } else { EXIT_VERIFY_FAIL })
}

pub fn cmd_generic(cfg: &RunConfig, kind: EliminantKind) -> Result<i32> {
    let d = cfg.degree()?;
    let (g, hit) = match cfg.cache() {
        Some(c) => c.generic(kind, d)?,
        None => (
            match kind {
                EliminantKind::Resultant => crate::elimination::generic_binary_resultant(d)?,
                EliminantKind::Discriminant => crate::elimination::generic_binary_discriminant(d)?,
            },
            false,
        ),
    };
    let name = match kind {
        EliminantKind::Resultant => "generic-resultant",
        EliminantKind::Discriminant => "generic-discriminant",
    };
    let p = write_json(&cfg.out, &format!("{name}-{d}.json"), &g.poly.to_file())?;
    write_json(
        &cfg.out,
        &format!("{name}-{d}-meta.json"),
        &serde_json::json!({ "kind": g.kind, "form_degree": d, "terms": g.poly.len(), "degree": g.poly.degree(),
            "cache_hit": hit, "version": artifact_version() }),
    )?;
    println!("{name} d={d}: {} terms, wrote {}", g.poly.len(), p.display());
    Ok(EXIT_PASS)
}

/// Non-diagonal σ's and diagonal families from the specs, with defaults.
fn families(cfg: &RunConfig) -> Result<(Vec<SigmaPoint>, Vec<PsgFamily>)> {
    let mut sigmas = Vec::new();
    let mut fams = Vec::new();
    for s in &cfg.sigma {
        match s {
            SigmaFamilySpec::Diagonal1psg { m } => {
                fams.push(PsgFamily { lambda: OneParamSubgroup::new(m.clone())?, t_grid: cfg.t_grid.clone() })
            }
            other => sigmas.extend(other.points()?),
        }
    }
    if cfg.sigma.iter().all(|s| matches!(s, SigmaFamilySpec::Diagonal1psg { .. })) {
        sigmas = random_sl3(cfg.seed, 8, DEFAULT_SPREAD);
    }
    if fams.is_empty() {
        for m in [vec![1, 0, -1], vec![2, -1, -1]] {
            fams.push(PsgFamily { lambda: OneParamSubgroup::new(m)?, t_grid: cfg.t_grid.clone() });
        }
    }
    Ok((sigmas, fams))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: String,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let curve = cfg.curve()?.certified()?;
    let grid = build_grid(cfg, &curve)?;
    let (sigmas, fams) = families(cfg)?;
    let wants = |w: Which| cfg.which == w || cfg.which == Which::All;
    let needs_delta = wants(Which::Planecurve) || wants(Which::Veronese) || wants(Which::Tian);
    let mut v = Verifier::new(&curve, &grid);
    let mut delta_meta = None;
    if needs_delta && (curve.degree() <= MAX_DUAL_DEGREE || cfg.which != Which::All) {
        let (delta, meta) = discriminant_of(cfg, &curve)?;
        v = v.with_discriminant(delta);
        delta_meta = Some(meta);
    }
    let mut reports: Vec<VerificationReport> = Vec::new();
    if wants(Which::Ddbar) {
        let mut gl = random_gl3(cfg.seed, 10);
        for s in &cfg.sigma {
            if let SigmaFamilySpec::ExplicitList { .. } = s {
                gl.extend(s.points()?);
            }
        }
        reports.push(v.verify_ddbar(&gl, 100)?);
    }
    if wants(Which::Aubin) {
        reports.push(v.verify_aubin(&sigmas, &fams)?);
    }
    if wants(Which::Planecurve) && v.delta.is_some() {
        reports.push(v.verify_plane_curve(&sigmas, &fams)?);
    }
    if wants(Which::Tian) {
        reports.push(v.verify_tian(&sigmas, &fams)?);
    }
    if cfg.which == Which::Veronese || (cfg.which == Which::All && curve.degree() == 2) {
        reports.push(v.verify_veronese(&sigmas, &fams)?);
    }
    let mut all = true;
    for r in &reports {
        all &= r.pass;
        let body = serde_json::json!({ "report": r, "discriminant": delta_meta });
        write_json(&cfg.out, &format!("verify-{}.json", r.identity), &Envelope { version: artifact_version(), config: cfg, body })?;
        println!(
            "{:<11} {}  spread {:.3e}  term range {:.3e}  slopes {}/{}",
            r.identity,
            if r.pass { "PASS" } else { "FAIL" },
            r.spread,
            r.term_range,
            r.slopes.iter().filter(|s| s.pass).count(),
            r.slopes.len()
        );
    }
    Ok(if all { EXIT_PASS } else { EXIT_VERIFY_FAIL })
}

fn resultant_kind(a: ResultantAction) -> ActionKind {
    match a {
        ResultantAction::Points => ActionKind::OnPoints,
        ResultantAction::Dual => ActionKind::OnDual,
    }
}

pub fn cmd_polytope(cfg: &RunConfig) -> Result<i32> {
    let c: Option<BigRational> = match &cfg.inclusion {
        Some(s) => Some(parse_rat(s).ok_or_else(|| Error::Parse(format!("bad inclusion scale {s:?}")))?),
        None => None,
    };
    let mut out = serde_json::Map::new();
    out.insert("version".into(), serde_json::json!(artifact_version()));
    let mut code = EXIT_PASS;
    match cfg.target {
        Target::Delta | Target::Resultant => {
            let curve = cfg.curve()?;
            let (poly, kind) = if cfg.target == Target::Delta {
                (discriminant_of(cfg, &curve.clone().certified()?)?.0, ActionKind::OnDual)
            } else {
                (curve.f.clone(), ActionKind::OnPoints)
            };
            let w = WeightPolytope::of_poly_as(&poly, kind)?;
            out.insert("polytope".into(), serde_json::to_value(w.report())?);
            out.insert("traceless".into(), serde_json::to_value(w.traceless().report())?);
        }
        Target::Generic => {
            let d = cfg.degree()?;
            let (r, dl) = match cfg.cache() {
                Some(cache) => (cache.generic(EliminantKind::Resultant, d)?.0, cache.generic(EliminantKind::Discriminant, d)?.0),
                None => (
                    crate::elimination::generic_binary_resultant(d)?,
                    crate::elimination::generic_binary_discriminant(d)?,
                ),
            };
            let nr = WeightPolytope::of_eliminant(&r, resultant_kind(cfg.resultant_action))?;
            let nd = WeightPolytope::of_eliminant(&dl, ActionKind::OnDual)?;
            out.insert("resultant".into(), serde_json::to_value(nr.report())?);
            out.insert("discriminant".into(), serde_json::to_value(nd.report())?);
            out.insert("resultant_action".into(), serde_json::to_value(cfg.resultant_action)?);
            if let Some(c) = &c {
                let rep = scaled_inclusion(&nr, c, &nd)?;
                println!(
                    "d={d}: {}·N(R) ⊆ N(Δ) is {} (certificates {})",
                    crate::poly::rat_to_string(c),
                    rep.inside,
                    if rep.certificates_ok() { "verified" } else { "INVALID" }
                );
                if let Some(p) = rep.segment_parameters() {
                    println!("  segment parameters: {}", p.iter().map(crate::poly::rat_to_string).collect::<Vec<_>>().join(", "));
                }
                if !rep.certificates_ok() {
                    code = EXIT_VERIFY_FAIL;
                }
                out.insert("inclusion".into(), rep.to_json());
            }
        }
    }
    let p = write_json(&cfg.out, "polytope.json", &serde_json::Value::Object(out))?;
    println!("wrote {}", p.display());
    Ok(code)
}

pub fn cmd_slope(cfg: &RunConfig) -> Result<i32> {
    let curve = cfg.curve()?.certified()?;
    let (_, fams) = families(cfg)?;
    let delta = if curve.degree() <= MAX_DUAL_DEGREE { Some(discriminant_of(cfg, &curve)?.0) } else { None };
    let grid = build_grid(cfg, &curve)?;
    let mut v = Verifier::new(&curve, &grid);
    if let Some(d) = &delta {
        v = v.with_discriminant(d.clone());
    }
    let mut rows = Vec::new();
    let mut all = true;
    for fam in &fams {
        let wf = WeightPolytope::of_poly(&curve.f)?.weight_of(&fam.lambda)?;
        let sym = symbolic_slope(&curve.f, &fam.lambda, &fam.t_grid)?;
        rows.push(serde_json::json!({ "family": fam.lambda.m, "term": "log|sF|^2 (symbolic)",
            "predicted": crate::poly::rat_to_string(&wf), "measured": sym.slope, "fit_residual": sym.residual }));
        if let Some(d) = &delta {
            let wd = WeightPolytope::of_poly(d)?.weight_of(&fam.lambda)?;
            let sd = symbolic_slope(d, &fam.lambda, &fam.t_grid)?;
            rows.push(serde_json::json!({ "family": fam.lambda.m, "term": "log|sDelta|^2 (symbolic)",
                "predicted": crate::poly::rat_to_string(&wd), "measured": sd.slope, "fit_residual": sd.residual }));
            let pred = predict_energy_slope(&curve.f, d, &fam.lambda)?;
            rows.push(serde_json::json!({ "family": fam.lambda.m, "term": pred.tag, "predicted": crate::poly::rat_to_string(&pred.predicted) }));
        }
    }
    let one = |f: &PsgFamily| vec![f.clone()];
    for fam in &fams {
        let mut reps = vec![v.verify_aubin(&[], &one(fam))?, v.verify_tian(&[], &one(fam))?];
        if delta.is_some() {
            reps.push(v.verify_plane_curve(&[], &one(fam))?);
        }
        for r in reps {
            for s in r.slopes {
                all &= s.pass;
                rows.push(serde_json::to_value(&s)?);
            }
        }
    }
    for r in &rows {
        println!(
            "{:<12} {:<26} predicted {:>8}  measured {}",
            r["family"].to_string(),
            r["term"].as_str().unwrap_or(""),
            r["predicted"].to_string().trim_matches('"'),
            r.get("measured").map_or("-".into(), |m| format!("{:.4}", m.as_f64().unwrap_or(f64::NAN)))
        );
    }
    write_json(&cfg.out, "slopes.json", &Envelope { version: artifact_version(), config: cfg, body: serde_json::json!({ "slopes": rows }) })?;
    Ok(if all { EXIT_PASS } else { EXIT_VERIFY_FAIL })
}

pub fn cmd_energies(cfg: &RunConfig) -> Result<i32> {
    let curve = cfg.curve()?.certified()?;
    let grid = build_grid(cfg, &curve)?;
    let (mut sigmas, fams) = families(cfg)?;
    if cfg.sigma.iter().any(|s| matches!(s, SigmaFamilySpec::Diagonal1psg { .. })) {
        for f in &fams {
            sigmas.extend(f.points());
        }
    }
    let mut rows = Vec::new();
    for p in &sigmas {
        let e = energies(&grid, &p.sigma)?;
        println!(
            "{:<40} J {:>10.5} I {:>10.5} F0 {:>10.5} nu {:>10.5} E1 {:>10.5} err {:.1e}",
            p.id, e.j, e.i, e.f0, e.nu, e.e1, e.grid_error
        );
        rows.push(serde_json::json!({ "sigma_id": p.id, "energies": e }));
    }
    write_json(&cfg.out, "energies.json", &Envelope { version: artifact_version(), config: cfg, body: serde_json::json!({ "rows": rows }) })?;
    Ok(EXIT_PASS)
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_INPUT,
            }
        }
    }
}

/// Writes a polynomial file, for examples and tests.
pub fn write_poly(path: &Path, p: &ExactPoly) -> Result<()> {
    let f: PolyFile = p.to_file();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(&f)?)?;
    Ok(())
}
