//! Command-line front end. [`run`] parses arguments and returns the exit code.

pub mod curves;
pub mod verify;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::closure::{closure, replay, Context, RigidityCertificate, Verdict, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD};
use crate::error::{Error, Result};
use crate::linalg::{Angle, Field, Line, Vector};
use crate::symmetry_fit::{fit_isometry, LineMapSample, CONSISTENCY_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Radians as a decimal, or as a rational multiple of π: `pi`, `-pi/2`, `3pi/8`, `3*pi/8`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || Error::AngleLiteral(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(pos) = t.find("pi") else {
        let v: f64 = t.parse().map_err(|_| bad())?;
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let num = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match tail {
        "" => 1.0,
        d => d.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 || !num.is_finite() || !den.is_finite() {
        return Err(bad());
    }
    Ok(num * PI / den)
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    SphereReal,
    ProjReal,
    ProjComplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "angleforge", version, about = "Angle preservers on spheres and projective spaces")]
pub struct Cli {
    #[arg(long, global = true, value_parser = angle_arg, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, value_parser = angle_arg, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, value_parser = angle_arg, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub space: Option<SpaceArg>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Points per axis of the parameter grid.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Oracle sampling resolution.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for `curves`, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one lemma against its oracle.
    Verify { lemma: String },
    /// Derive a rigidity certificate from `--alpha`.
    Closure,
    /// Fit a (conjugate-)linear isometry to a sampled line map.
    Fit { input: PathBuf },
    /// Emit a data series: `curves <which> [lo hi] n`.
    Curves {
        which: String,
        /// Negative bounds go after `--`.
        #[arg(num_args = 1..=3)]
        rest: Vec<String>,
    },
}

/// Everything a command needs, after parsing.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub space: Option<SpaceArg>,
    pub dim: Option<usize>,
    pub grid: Option<usize>,
    pub resolution: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl From<&Cli> for RunConfig {
    fn from(c: &Cli) -> Self {
        RunConfig {
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
            space: c.space,
            dim: c.dim,
            grid: c.grid,
            resolution: c.resolution,
            seed: c.seed,
            tol: c.tol,
            out: c.out.clone(),
            format: c.format.unwrap_or(match c.command {
                Command::Curves { .. } => Format::Csv,
                _ => Format::Json,
            }),
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let cfg = RunConfig::from(&cli);
    let res = match &cli.command {
        Command::Verify { lemma } => cmd_verify(lemma, &cfg),
        Command::Closure => cmd_closure(&cfg),
        Command::Fit { input } => cmd_fit(input, &cfg),
        Command::Curves { which, rest } => cmd_curves(which, rest, &cfg),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Full double precision, locale-free.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cmd_verify(lemma: &str, cfg: &RunConfig) -> Result<i32> {
    let vcfg = verify::VerifyConfig {
        grid: cfg.grid,
        seed: cfg.seed,
        tol: cfg.tol,
        resolution: cfg.resolution,
        field: match cfg.space {
            Some(SpaceArg::ProjReal) => Some(Field::Real),
            Some(SpaceArg::ProjComplex) => Some(Field::Complex),
            _ => None,
        },
    };
    let Some(report) = verify::run_lemma(lemma, &vcfg) else {
        eprintln!("error: unknown lemma '{lemma}'; known: {}", verify::LEMMAS.join(", "));
        return Ok(EXIT_USAGE);
    };
    let report = report?;
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => csv_string(
            &["lemma", "params", "expected", "observed", "agree", "boundary"],
            report.checks.iter().map(|c| {
                vec![
                    report.lemma.clone(),
                    serde_json::to_string(&c.params).expect("params serialize"),
                    c.expected.clone(),
                    c.observed.clone(),
                    c.agree.to_string(),
                    c.boundary.to_string(),
                ]
            }),
        )?,
    };
    emit(cfg, &body)?;
    eprintln!(
        "{}: {} checks, {} disagreements, {} in boundary zones: {}",
        report.lemma,
        report.checks.len(),
        report.disagreements,
        report.boundary_points,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

/// `proj-complex` in dimension 2 is the qubit context.
pub fn context_for(space: SpaceArg, dim: usize) -> Context {
    match space {
        SpaceArg::SphereReal => Context::SphereReal,
        SpaceArg::ProjReal => Context::ProjReal,
        SpaceArg::ProjComplex if dim == 2 => Context::ProjComplexDim2,
        SpaceArg::ProjComplex => Context::ProjComplex,
    }
}

pub fn cmd_closure(cfg: &RunConfig) -> Result<i32> {
    let alpha = cfg.alpha.ok_or_else(|| Error::AngleLiteral("closure needs --alpha".into()))?;
    let space = cfg.space.unwrap_or(SpaceArg::SphereReal);
    let dim = cfg.dim.unwrap_or(3);
    let cert = closure(Angle(alpha), context_for(space, dim), dim, DEFAULT_MAX_STEPS, DEFAULT_TERMINAL_THRESHOLD);
    let body = match cfg.format {
        Format::Json => cert.to_json() + "\n",
        Format::Csv => certificate_csv(&cert)?,
    };
    emit(cfg, &body)?;
    let replayed = replay(&cert);
    eprintln!(
        "verdict {} after {} steps; replay {}",
        cert.verdict,
        cert.steps.len(),
        match &replayed {
            Ok(()) => "ok".to_string(),
            Err(e) => e.to_string(),
        }
    );
    Ok(if cert.verdict == Verdict::Inconclusive || replayed.is_err() { EXIT_FAIL } else { EXIT_OK })
}

fn certificate_csv(cert: &RigidityCertificate) -> Result<String> {
    let list = |xs: &[f64]| xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ");
    csv_string(
        &["step", "case", "rule", "space", "inputs", "relation", "outputs", "conditions_hold", "verdict"],
        cert.steps.iter().enumerate().map(|(i, s)| {
            vec![
                i.to_string(),
                s.case.to_string(),
                s.rule.to_string(),
                s.space.to_string(),
                list(&s.inputs),
                format!("{:?}", s.relation).to_lowercase(),
                list(&s.outputs),
                s.conditions.iter().all(|c| c.holds).to_string(),
                cert.verdict.to_string(),
            ]
        }),
    )
}

#[derive(Deserialize)]
struct SampleFile {
    field: Field,
    dim: usize,
    pairs: Vec<PairFile>,
}

#[derive(Deserialize)]
struct PairFile {
    #[serde(rename = "in")]
    input: Vec<f64>,
    out: Vec<f64>,
}

/// Parse a sample file; vectors are normalized here and zero vectors rejected.
pub fn parse_sample(text: &str) -> Result<LineMapSample> {
    let f: SampleFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let line = |xs: &[f64]| -> Result<Line> { Line::from_vector(&Vector::from_interleaved(f.field, xs)?) };
    let pairs = f.pairs.iter().map(|p| Ok((line(&p.input)?, line(&p.out)?))).collect::<Result<Vec<_>>>()?;
    for (a, b) in &pairs {
        if a.dim() != f.dim || b.dim() != f.dim {
            return Err(Error::DimensionMismatch { left: a.dim().max(b.dim()), right: f.dim });
        }
    }
    LineMapSample::new(f.field, f.dim, pairs)
}

pub fn cmd_fit(input: &Path, cfg: &RunConfig) -> Result<i32> {
    let text = fs::read_to_string(input).map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
    let sample = match parse_sample(&text) {
        Ok(s) => s,
        Err(e @ Error::Parse { .. }) => {
            eprintln!("error: {}: {e}", input.display());
            return Ok(EXIT_USAGE);
        }
        Err(e) => return Err(e),
    };
    let (defect, i, j) = sample.angle_defect();
    if defect > CONSISTENCY_TOL {
        let body = serde_json::json!({
            "consistent": false,
            "defect": defect,
            "violating_pair": [i, j],
        });
        emit(cfg, &(serde_json::to_string_pretty(&body).expect("json") + "\n"))?;
        eprintln!("sample is not angle-consistent: pairs {i} and {j} differ by {defect:.3e}");
        return Ok(EXIT_FAIL);
    }
    let fit = match fit_isometry(&sample) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("fit failed: {e}");
            return Ok(EXIT_FAIL);
        }
    };
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&fit.to_json()).expect("json") + "\n",
        Format::Csv => {
            let n = fit.matrix.nrows();
            csv_string(
                &["row", "col", "re", "im"],
                (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| {
                    let z = fit.matrix[(r, c)];
                    vec![r.to_string(), c.to_string(), fmt_f64(z.re), fmt_f64(z.im)]
                }),
            )?
        }
    };
    emit(cfg, &body)?;
    eprintln!("kind {:?}, residual {:.3e}", fit.kind, fit.residual);
    Ok(EXIT_OK)
}

pub fn cmd_curves(which: &str, rest: &[String], cfg: &RunConfig) -> Result<i32> {
    let (range, n) = match rest {
        [n] => (None, n),
        [lo, hi, n] => {
            let (lo, hi) = (parse_angle(lo)?, parse_angle(hi)?);
            if !(lo < hi) {
                eprintln!("error: empty range [{lo}, {hi}]");
                return Ok(EXIT_USAGE);
            }
            (Some((lo, hi)), n)
        }
        _ => {
            eprintln!("error: expected `curves <which> [lo hi] n`");
            return Ok(EXIT_USAGE);
        }
    };
    let n: usize = match n.parse() {
        Ok(n) if n >= 2 => n,
        _ => {
            eprintln!("error: n must be an integer >= 2, got '{n}'");
            return Ok(EXIT_USAGE);
        }
    };
    let Some(series) = curves::series(which, range, n, cfg.alpha)? else {
        eprintln!("error: unknown series '{which}'; known: {}", curves::SERIES.join(", "));
        return Ok(EXIT_USAGE);
    };
    let body = match cfg.format {
        Format::Csv => csv_string(
            &series.columns.iter().map(String::as_str).collect::<Vec<_>>(),
            series.rows.iter().map(|r| r.iter().map(|x| fmt_f64(*x)).collect()),
        )?,
        Format::Json => serde_json::to_string_pretty(&series).expect("json") + "\n",
    };
    emit(cfg, &body)?;
    Ok(EXIT_OK)
}
