use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use clausen_cert::certificate::{cross_validate, evaluate, Certificate, TheoremId, Verdict};
use clausen_cert::config::ConfigOverrides;
use clausen_cert::lemma::LemmaPart;
use clausen_cert::operator::{Multipliers, OperatorParams};
use clausen_cert::scan::{format_float, run_scan, OutputFormat, ParamName, ScanRequest, Sweep};
use clausen_cert::verify::{stratified_grid, verify_identity, Identity, DEFAULT_SEED};
use clausen_cert::{Error, EvalConfig};

const EXIT_FAILS: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

const MAX_COEFFS: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "clausen-cert",
    version,
    about = "Coefficient-condition certificates for a Clausen 3F2 convolution operator"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct EvalFlags {
    /// Relative tolerance of every series summation.
    #[arg(long)]
    tol: Option<f64>,
    /// Term cap for every series summation.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one theorem at one parameter point and print its certificate.
    Check {
        #[arg(long)]
        theorem: String,
        /// Real or complex, e.g. `0.6+0.8i`; only the modulus is used.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Single-line JSON instead of pretty-printed.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        eval: EvalFlags,
    },
    /// Sweep one to three parameters (`start:stop:step`) and write a table.
    Scan {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Shorthand for `--format jsonl`.
        #[arg(long)]
        json: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        eval: EvalFlags,
    },
    /// Compare lemma closed forms with brute-force sums.
    VerifyLemma {
        /// 1, 2, 3, 4, or `dj` for the Driver-Johnston sum.
        #[arg(long)]
        part: String,
        #[arg(long, conflicts_with_all = ["a", "b", "c"])]
        default_grid: bool,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, requires_all = ["b", "c"])]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        /// Largest accepted relative error.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Print the operator multipliers `B_1..B_N` as `n,B_n`.
    Coeffs {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, short = 'n', alias = "terms")]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String, Option<TheoremId>),
    Io(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::PoleProximity { .. } => {
                Failure::Numeric(e.to_string())
            }
            _ => Failure::Usage(e.to_string(), None),
        }
    }
}

type CliResult = Result<u8, Failure>;

fn config(eval: EvalFlags) -> Result<EvalConfig, Failure> {
    let file = ConfigOverrides::from_env()?;
    let flags = ConfigOverrides {
        rel_tol: eval.tol,
        max_terms: eval.max_terms,
        ..Default::default()
    };
    Ok(EvalConfig::layered(&file, &flags)?)
}

fn theorem(s: &str) -> Result<TheoremId, Failure> {
    TheoremId::from_str(s).map_err(|e| Failure::Usage(e.to_string(), None))
}

fn modulus_param(name: &str, s: &str) -> Result<Complex64, Failure> {
    Complex64::from_str(s.trim()).map_err(|_| {
        Failure::Usage(
            format!("cannot parse --{name} {s:?} as a real or complex number"),
            None,
        )
    })
}

fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => EXIT_FAILS,
        Verdict::PreconditionViolated => EXIT_PRECONDITION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    res.map_err(Failure::Io)
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    id: &str,
    a: &str,
    b: &str,
    c: f64,
    lambda: Option<f64>,
    beta: Option<f64>,
    json: bool,
    eval: EvalFlags,
) -> CliResult {
    let id = theorem(id)?;
    let usage = |e: Error| Failure::Usage(e.to_string(), Some(id));
    if lambda.is_some() && !id.needs_lambda() {
        return Err(Failure::Usage(
            format!("{id} does not take --lambda"),
            Some(id),
        ));
    }
    if beta.is_some() && !id.needs_beta() {
        return Err(Failure::Usage(
            format!("{id} does not take --beta"),
            Some(id),
        ));
    }
    let cfg = config(eval)?;
    let (za, zb) = (modulus_param("a", a)?, modulus_param("b", b)?);
    let params = if za.im == 0.0 && zb.im == 0.0 && za.re > 0.0 && zb.re > 0.0 {
        OperatorParams::new(za.re, zb.re, c)
    } else {
        OperatorParams::from_complex(za, zb, c)
    }
    .map_err(usage)?;
    let cert: Certificate = evaluate(id, &params, lambda, beta, &cfg).map_err(usage)?;
    let cert = cross_validate(&cert, &cfg);
    let mut text = if json {
        serde_json::to_string(&cert)
    } else {
        serde_json::to_string_pretty(&cert)
    }
    .expect("certificates serialize");
    text.push('\n');
    write_output(None, &text)?;
    Ok(exit_for(cert.verdict))
}

fn scan_param(
    name: ParamName,
    s: &str,
    fixed: &mut Vec<(ParamName, f64)>,
    swept: &mut Vec<Sweep>,
) -> Result<(), Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("--{name}: cannot parse {t:?} as a number"), None))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => fixed.push((name, num(v)?)),
        [start, stop, step] => swept.push(Sweep {
            name,
            start: num(start)?,
            stop: num(stop)?,
            step: num(step)?,
        }),
        _ => {
            return Err(Failure::Usage(
                format!("--{name}: expected a value or start:stop:step, got {s:?}"),
                None,
            ))
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    id: &str,
    values: [(ParamName, Option<&str>); 5],
    out: Option<&Path>,
    format: &str,
    json: bool,
    workers: Option<usize>,
    eval: EvalFlags,
) -> CliResult {
    let id = theorem(id)?;
    let usage = |e: Error| Failure::Usage(e.to_string(), Some(id));
    let format = if json {
        OutputFormat::Jsonl
    } else {
        format.parse().map_err(usage)?
    };
    let (mut fixed, mut swept) = (Vec::new(), Vec::new());
    for (name, v) in values {
        if let Some(v) = v {
            scan_param(name, v, &mut fixed, &mut swept)?;
        }
    }
    let req = ScanRequest {
        theorem: id,
        fixed: fixed.into_iter().collect(),
        swept,
        format,
    };
    req.validate().map_err(usage)?;
    let cfg = config(eval)?;
    let result = run_scan(&req, &cfg, workers).map_err(usage)?;
    write_output(out, &result.render(format))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_lemma(
    part: &str,
    default_grid: bool,
    points: usize,
    seed: u64,
    point: Option<(f64, f64, f64)>,
    tol: f64,
    json: bool,
    max_terms: Option<usize>,
) -> CliResult {
    let ident = match part.trim().to_ascii_lowercase().as_str() {
        "dj" | "driver-johnston" | "0" => Identity::DriverJohnston,
        p => {
            let k: u8 = p
                .parse()
                .map_err(|_| Failure::Usage(format!("unknown lemma part {part:?}"), None))?;
            Identity::Lemma(LemmaPart::try_from(k)?)
        }
    };
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::Usage(
            format!("--tol must be positive, got {tol}"),
            None,
        ));
    }
    let cfg = config(EvalFlags {
        tol: None,
        max_terms,
    })?;
    let grid = match point {
        Some(p) => vec![p],
        None if default_grid || points > 0 => stratified_grid(ident, points, seed),
        None => {
            return Err(Failure::Usage(
                "give --a/--b/--c or --default-grid".into(),
                None,
            ))
        }
    };
    let report = verify_identity(ident, &grid, tol, &cfg);
    let text = if json {
        serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# {} (tolerance {:e})",
            report.identity, report.tolerance
        );
        let four = ident == Identity::Lemma(LemmaPart::Four);
        let _ = writeln!(
            s,
            "{}",
            if four {
                "a,b,c,closed,closed_proof_form,brute,tail_bound,rel_err,status"
            } else {
                "a,b,c,closed,brute,tail_bound,rel_err,status"
            }
        );
        let f = |x: Option<f64>| x.map(format_float).unwrap_or_default();
        for p in &report.points {
            let status = match (&p.skipped, p.pass) {
                (Some(why), _) => format!("skipped: {why}"),
                (None, true) => "ok".into(),
                (None, false) => "FAIL".into(),
            };
            let alt = if four {
                format!("{},", f(p.closed_proof_form))
            } else {
                String::new()
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{alt}{},{},{},\"{status}\"",
                p.a,
                p.b,
                p.c,
                f(p.closed),
                f(p.brute),
                f(p.tail_bound),
                f(p.rel_err)
            );
        }
        let _ = writeln!(
            s,
            "# evaluated {}, skipped {}",
            report.evaluated, report.skipped
        );
        if let Some(w) = &report.worst {
            let _ = writeln!(
                s,
                "# worst rel_err {:e} at a={} b={} c={}",
                w.rel_err.unwrap_or(f64::NAN),
                w.a,
                w.b,
                w.c
            );
        }
        let _ = writeln!(
            s,
            "# {}",
            if report.all_pass {
                "all points within tolerance"
            } else {
                "tolerance exceeded"
            }
        );
        s
    };
    write_output(None, &text)?;
    Ok(if report.all_pass { 0 } else { EXIT_FAILS })
}

/// Scientific notation from `ln |x|` for values outside the `f64` range.
fn format_from_log(ln_abs: f64, sign: f64) -> String {
    let e10 = ln_abs / std::f64::consts::LN_10;
    let k = e10.floor();
    let m = 10f64.powf(e10 - k);
    let (m, k) = if m >= 10.0 {
        (m / 10.0, k + 1.0)
    } else {
        (m, k)
    };
    format!("{}{m:.16}e{k}", if sign < 0.0 { "-" } else { "" })
}

fn cmd_coeffs(a: f64, b: f64, c: f64, n: usize, out: Option<&Path>, json: bool) -> CliResult {
    if n == 0 || n > MAX_COEFFS {
        return Err(Failure::Usage(
            format!("N must lie in 1..={MAX_COEFFS}, got {n}"),
            None,
        ));
    }
    let params = OperatorParams::new(a, b, c)?;
    let mut it = Multipliers::new(&params);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        if it.in_linear_range() {
            let (k, v) = it.next_value();
            rows.push((k, format_float(v)));
        } else {
            let (k, ln, sign) = it.next_log();
            rows.push((k, format_from_log(ln, sign)));
        }
    }
    let text = if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(k, s)| serde_json::json!({ "n": k, "B_n": s }))
            .collect();
        serde_json::to_string(&v).expect("rows serialize") + "\n"
    } else {
        let mut s = String::from("n,B_n\n");
        for (k, v) in &rows {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    };
    write_output(out, &text)?;
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Check {
            theorem,
            a,
            b,
            c,
            lambda,
            beta,
            json,
            eval,
        } => cmd_check(&theorem, &a, &b, c, lambda, beta, json, eval),
        Cmd::Scan {
            theorem,
            a,
            b,
            c,
            lambda,
            beta,
            out,
            format,
            json,
            workers,
            eval,
        } => {
            let values = [
                (ParamName::A, Some(a.as_str())),
                (ParamName::B, Some(b.as_str())),
                (ParamName::C, Some(c.as_str())),
                (ParamName::Lambda, lambda.as_deref()),
                (ParamName::Beta, beta.as_deref()),
            ];
            cmd_scan(
                &theorem,
                values,
                out.as_deref(),
                &format,
                json,
                workers,
                eval,
            )
        }
        Cmd::VerifyLemma {
            part,
            default_grid,
            points,
            seed,
            a,
            b,
            c,
            tol,
            json,
            max_terms,
        } => {
            let point = match (a, b, c) {
                (Some(a), Some(b), Some(c)) => Some((a, b, c)),
                _ => None,
            };
            cmd_verify_lemma(
                &part,
                default_grid,
                points,
                seed,
                point,
                tol,
                json,
                max_terms,
            )
        }
        Cmd::Coeffs {
            a,
            b,
            c,
            n,
            out,
            json,
        } => cmd_coeffs(a, b, c, n, out.as_deref(), json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg, id)) => {
            eprintln!("error: {msg}");
            if let Some(id) = id {
                eprintln!("{id} requires:");
                for row in id.precondition_table() {
                    eprintln!("  {row}");
                }
            }
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INCONCLUSIVE
        }
    };
    ExitCode::from(code)
}
