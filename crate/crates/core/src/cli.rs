//! Command-line front end. [`run`] is a pure function of its arguments and
//! the files they name, which keeps it testable without spawning processes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::exactnum::{parse_rational, ExtendedExponent, Rational};
use crate::functions::CubeSpec;
use crate::search::{repro_paper, repro_table, scan, InstanceFamily, ScanSpec};
use crate::sets::{LatticeBasis, SetExpr};
use crate::verifiers::{
    hks_derived_instance, riemann_limit_demo, verify, verify_bbl, verify_bbl_on, verify_hks,
    verify_lemma_ell, BblInstance, Certificate, HksInstance, TheoremId, Verdict, VerifyError,
    VerifyRequest,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SCAN_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "discrete-bm",
    version,
    about = "Exact checks of discrete Brunn-Minkowski type inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify one instance and print its certificate.
    Verify(VerifyArgs),
    /// Run a verifier over generated instances.
    Scan(ScanArgs),
    /// Replay the worked examples.
    Repro(FormatArg),
    /// Lower Riemann sums of a box-union indicator on dyadic grids.
    DemoLimit(DemoArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    theorem: String,
    /// JSON set file for K (or A for the cardinality forms).
    #[arg(long = "K", alias = "k")]
    k: Option<PathBuf>,
    #[arg(long = "L", alias = "l")]
    l: Option<PathBuf>,
    /// JSON set file for M (lemma_ell).
    #[arg(long = "M", alias = "m")]
    m: Option<PathBuf>,
    /// JSON instance file for bbl or hks.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// JSON file with the rows of a lattice basis (bbl).
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long, default_value = "1/2")]
    lambda: String,
    #[arg(long, default_value = "inf")]
    p: String,
    /// `m,p,q` for rational_dilation.
    #[arg(long)]
    dilation: Option<String>,
    /// Cube such as `open:1`, `unit`, `interval:[-1/2,1)`.
    #[arg(long)]
    corrector: Option<String>,
    /// Drop the positivity hypothesis of half_sum.
    #[arg(long)]
    unguarded: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    window: i64,
    /// Lattice point density; ignored with `--boxes`.
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Draw box unions with at most this many boxes.
    #[arg(long)]
    boxes: Option<usize>,
    #[arg(long, default_value_t = 4)]
    denominator: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value = "1/3,1/2,2/3")]
    lambdas: String,
    #[arg(long, default_value = "inf")]
    p: String,
    #[arg(long)]
    dilation: Option<String>,
    #[arg(long)]
    corrector: Option<String>,
    #[arg(long)]
    unguarded: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// JSON set file for the box union.
    #[arg(long)]
    set: PathBuf,
    /// Window half-width.
    #[arg(long, default_value_t = 1)]
    m: i64,
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Exit code and the text for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(code: i32, stdout: String) -> Self {
        CliOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        CliOutput {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = Result<T, InputError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str, theorem: TheoremId) -> Res<&'a Path> {
    p.as_deref()
        .ok_or_else(|| InputError(format!("{theorem} needs --{flag}")))
}

fn parse_dilation(s: &str) -> Res<(u32, u32, u32)> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [m, p, q] => Ok((m, p, q)),
        _ => Err(InputError(format!("--dilation expects m,p,q, got {s:?}"))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(cert: &Certificate, format: Format) -> CliOutput {
    let code = if cert.verdict == Verdict::Violated {
        EXIT_VIOLATED
    } else {
        EXIT_HOLDS
    };
    let out = match format {
        Format::Json => to_json(cert),
        Format::Text => cert.to_text(),
    };
    CliOutput::ok(code, out)
}

fn verify_cmd(a: &VerifyArgs) -> Res<Result<Certificate, VerifyError>> {
    let theorem: TheoremId = a.theorem.parse()?;
    let lambda = parse_rational(&a.lambda)?;
    let p: ExtendedExponent = a.p.parse()?;
    Ok(match theorem {
        TheoremId::Bbl => {
            let mut inst: BblInstance = read_json(required(&a.instance, "instance", theorem)?)?;
            inst.lambda = lambda;
            inst.p = p;
            match &a.basis {
                Some(b) => {
                    let rows: Vec<Vec<String>> = read_json(b)?;
                    let rows: Vec<Vec<Rational>> = rows
                        .iter()
                        .map(|r| r.iter().map(|x| parse_rational(x)).collect())
                        .collect::<Result<_, _>>()?;
                    verify_bbl_on(&inst, &LatticeBasis::from_rows(rows)?)
                }
                None => verify_bbl(&inst),
            }
        }
        TheoremId::Hks => {
            let inst: HksInstance = match &a.instance {
                Some(path) => read_json(path)?,
                None => {
                    let k: SetExpr = read_json(required(&a.k, "K", theorem)?)?;
                    let l: SetExpr = read_json(required(&a.l, "L", theorem)?)?;
                    match hks_derived_instance(&k, &l) {
                        Ok(i) => i,
                        Err(e) => return Ok(Err(e)),
                    }
                }
            };
            verify_hks(&inst)
        }
        TheoremId::LemmaEll => {
            let k: SetExpr = read_json(required(&a.k, "K", theorem)?)?;
            let l: SetExpr = read_json(required(&a.l, "L", theorem)?)?;
            let m: SetExpr = read_json(required(&a.m, "M", theorem)?)?;
            verify_lemma_ell(&k, &l, &m, &lambda)
        }
        _ => {
            let k: SetExpr = read_json(required(&a.k, "K", theorem)?)?;
            let l: SetExpr = read_json(required(&a.l, "L", theorem)?)?;
            let mut req = VerifyRequest::new(theorem, k, l, lambda).with_p(p);
            if let Some(d) = &a.dilation {
                let (m, p, q) = parse_dilation(d)?;
                req = req.with_dilation(m, p, q);
            }
            if let Some(c) = &a.corrector {
                req = req.with_corrector(c.parse::<CubeSpec>()?);
            }
            if a.unguarded {
                req = req.unguarded();
            }
            verify(&req)
        }
    })
}

fn scan_cmd(a: &ScanArgs) -> Res<CliOutput> {
    let theorem: TheoremId = a.theorem.parse()?;
    let family = match a.boxes {
        Some(b) => InstanceFamily::box_union(a.n, a.window, b, a.denominator, a.seed),
        None => InstanceFamily::lattice_points(a.n, a.window, a.density, a.seed),
    };
    let lambdas = a
        .lambdas
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    let mut spec = ScanSpec::new(family, theorem, lambdas, a.count);
    spec.p = a.p.parse()?;
    spec.dilation = a.dilation.as_deref().map(parse_dilation).transpose()?;
    spec.corrector = a.corrector.as_deref().map(str::parse).transpose()?;
    spec.unguarded = a.unguarded;
    let report = scan(&spec)?;
    let code = if report.unexpected {
        EXIT_SCAN_VIOLATION
    } else {
        EXIT_HOLDS
    };
    let out = match a.format {
        Format::Json => to_json(&report),
        Format::Text => report.to_text(),
    };
    Ok(CliOutput::ok(code, out))
}

fn demo_cmd(a: &DemoArgs) -> Res<CliOutput> {
    let set: SetExpr = read_json(&a.set)?;
    let m = Rational::from_integer(a.m.into());
    let window = SetExpr::closed_cube(set.dim(), -m.clone(), m)?;
    let seq = riemann_limit_demo(&set, &window, a.k_max)?;
    let out = match a.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = seq
                .iter()
                .map(|(k, v)| serde_json::json!({"k": k, "lower_sum": v.to_string()}))
                .collect();
            to_json(&rows)
        }
        Format::Text => seq
            .iter()
            .map(|(k, v)| format!("{k:>3}  {v}  approx {}\n", crate::exactnum::format_sig(v, 20)))
            .collect(),
    };
    Ok(CliOutput::ok(EXIT_HOLDS, out))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_HOLDS };
            let text = e.render().to_string();
            return if code == EXIT_HOLDS {
                CliOutput::ok(code, text)
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => verify_cmd(a).map(|r| match r {
            Ok(cert) => emit(&cert, a.format),
            Err(e) => CliOutput::input_error(e),
        }),
        Command::Scan(a) => scan_cmd(a),
        Command::Repro(f) => {
            let checks = repro_paper();
            let code = if checks.iter().all(|c| c.passed) {
                EXIT_HOLDS
            } else {
                EXIT_VIOLATED
            };
            let out = match f.format {
                Format::Json => to_json(&checks),
                Format::Text => repro_table(&checks),
            };
            Ok(CliOutput::ok(code, out))
        }
        Command::DemoLimit(a) => demo_cmd(a),
    };
    result.unwrap_or_else(|InputError(m)| CliOutput::input_error(m))
}
