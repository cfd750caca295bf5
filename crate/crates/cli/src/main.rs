//! `ellgen`: exact elliptic genera of complete intersections and
//! Landau-Ginzburg correspondence checks from the command line.

mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ellgen::genera::{
    chi_y_ci, elliptic_genfun, elliptic_genus, euler_ci, ns_elliptic_genus, witten_sigma,
};
use ellgen::lgside::check_correspondence;
use ellgen::serial::{load_memo, parse_ratio, save_memo};
use ellgen::{BigRat, CISpec, Correspondence, Error, LGParams, C64};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use emit::Style;

const EXIT_FAILURE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_TRUNCATION: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Euler number
    Euler,
    /// Hirzebruch chi_y genus
    Chiy,
    /// Two-variable elliptic genus
    Ellgenus,
    /// Neveu-Schwarz elliptic genus
    Nsgenus,
    /// Witten genus sigma_k (needs --sigma-k)
    Witten,
    /// Generating series in t of elliptic genera for fixed degrees
    Genseries,
    /// Compare the exact genus with the LG orbifold sum at (v, tau)
    Lgcheck,
    /// Run the invariant suite
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum LgKind {
    #[default]
    Elliptic,
    Ns,
}

/// One unit of work; the fields mirror the command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(default)]
struct JobSpec {
    /// Ambient projective space is P^{N-1}
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated degrees m_1,...,m_r
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<u32>,
    /// Highest power of q computed
    #[arg(long, default_value_t = 8)]
    q_order: u32,
    /// Highest power of t for genseries
    #[arg(long, default_value_t = 8)]
    t_order: u32,
    /// Elliptic variable as "re,im", "re" or "p/q"
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    /// Modular parameter as "re,im"
    #[arg(long, default_value = "0,1.5", allow_hyphen_values = true)]
    tau: String,
    /// Which Witten genus (1, 2 or 3); for lgcheck selects a sigma correspondence
    #[arg(long)]
    sigma_k: Option<u8>,
    /// Correspondence checked by lgcheck when --sigma-k is absent
    #[arg(long, value_enum, default_value_t = LgKind::Elliptic)]
    lg_kind: LgKind,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for lgcheck agreement and its truncation budget
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Batch-file alternatives to `v` and `tau`.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    v_re: Option<f64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    v_im: Option<f64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_re: Option<f64>,
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_im: Option<f64>,
}

impl JobSpec {
    fn v_value(&self) -> ellgen::Result<Option<C64>> {
        if self.v_re.is_some() || self.v_im.is_some() {
            return Ok(Some(C64::new(self.v_re.unwrap_or(0.0), self.v_im.unwrap_or(0.0))));
        }
        self.v.as_deref().map(parse_complex).transpose()
    }

    fn tau_value(&self) -> ellgen::Result<C64> {
        if self.tau_re.is_some() || self.tau_im.is_some() {
            return Ok(C64::new(self.tau_re.unwrap_or(0.0), self.tau_im.unwrap_or(1.5)));
        }
        parse_complex(&self.tau)
    }
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            n: None,
            degrees: Vec::new(),
            q_order: 8,
            t_order: 8,
            v: None,
            tau: "0,1.5".into(),
            sigma_k: None,
            lg_kind: LgKind::Elliptic,
            format: Format::Text,
            tol: 1e-6,
            v_re: None,
            v_im: None,
            tau_re: None,
            tau_im: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BatchJob {
    command: Command,
    #[serde(flatten)]
    spec: JobSpec,
}

#[derive(Parser, Debug)]
#[command(name = "ellgen", version, about = "Elliptic genera of complete intersections")]
#[command(after_help = "Exit codes: 0 success, 1 failed check, 2 precondition or domain error, 3 truncation budget exceeded.\n\
Set ELLGEN_CACHE_DIR to keep a memo of theta-ratio expansions between runs.")]
struct Cli {
    #[arg(value_enum, required_unless_present = "jobs")]
    command: Option<Command>,
    #[command(flatten)]
    job: JobSpec,
    /// JSON file with an array of jobs ({"command": ..., flags...}); run in parallel, printed in order
    #[arg(long)]
    jobs: Option<PathBuf>,
}

struct Outcome {
    code: u8,
    output: String,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Truncation { .. } => EXIT_TRUNCATION,
        Error::Domain(_) | Error::Precondition(_) | Error::PoleCollision { .. } | Error::Rank(_) => {
            EXIT_PRECONDITION
        }
        _ => EXIT_FAILURE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Eval { .. } => "evaluation",
        Error::Prefactor(_) => "prefactor",
        Error::NotInvertible(_) => "not_invertible",
        Error::Window { .. } => "window",
        Error::Composition(_) => "composition",
        Error::Certificate(_) => "certificate",
        Error::Rank(_) => "rank",
        Error::Precondition(_) => "precondition",
        Error::PoleCollision { .. } => "pole_collision",
        Error::Io(_) => "io",
        Error::Truncation { .. } => "truncation",
    }
}

#[derive(Serialize)]
struct ErrorJson {
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
    exit_code: u8,
}

fn error_outcome(e: &Error, format: Format) -> Outcome {
    let code = exit_code(e);
    let output = match format {
        Format::Json => emit::json(&ErrorJson {
            error: ErrorBody {
                kind: error_kind(e),
                message: e.to_string(),
                exit_code: code,
            },
        }),
        _ => format!("error: {e}"),
    };
    Outcome { code, output }
}

fn parse_real(s: &str) -> ellgen::Result<f64> {
    let s = s.trim();
    if s.contains('/') {
        let r: BigRat = parse_ratio(s)?;
        return r
            .to_f64()
            .ok_or_else(|| Error::Domain(format!("'{s}' is out of range")));
    }
    s.parse()
        .map_err(|_| Error::Domain(format!("cannot parse '{s}' as a number")))
}

/// `"re,im"`, `"re"` or `"p/q"`.
fn parse_complex(s: &str) -> ellgen::Result<C64> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(C64::new(parse_real(s)?, 0.0)),
    }
}

fn ci_spec(job: &JobSpec) -> ellgen::Result<CISpec> {
    let n = job
        .n
        .ok_or_else(|| Error::Domain("--n is required".into()))?;
    CISpec::new(n, job.degrees.clone())
}

fn require_degrees(job: &JobSpec) -> ellgen::Result<()> {
    if job.degrees.is_empty() || job.degrees.contains(&0) {
        return Err(Error::Domain("--degrees must list positive integers".into()));
    }
    Ok(())
}

fn run(command: Command, job: &JobSpec) -> Outcome {
    match try_run(command, job) {
        Ok(o) => o,
        Err(e) => error_outcome(&e, job.format),
    }
}

fn done(output: String) -> ellgen::Result<Outcome> {
    Ok(Outcome { code: 0, output })
}

fn try_run(command: Command, job: &JobSpec) -> ellgen::Result<Outcome> {
    let fmt = job.format;
    match command {
        Command::Euler => {
            let spec = ci_spec(job)?;
            let value = euler_ci(&spec);
            done(match fmt {
                Format::Text => format!("chi({spec}) = {value}"),
                Format::Latex => emit::euler_latex(&spec, &value),
                Format::Json => emit::json(&emit::EulerJson {
                    kind: "euler",
                    spec: &spec,
                    value: value.to_string(),
                }),
            })
        }
        Command::Chiy => {
            let spec = ci_spec(job)?;
            let terms = emit::chi_y_terms(&chi_y_ci::<BigRat>(&spec)?);
            done(match fmt {
                Format::Text => emit::chi_y_text(&spec, &terms, Style::Text),
                Format::Latex => emit::chi_y_text(&spec, &terms, Style::Latex),
                Format::Json => emit::json(&emit::ChiYJson {
                    kind: "chi_y",
                    spec: &spec,
                    coefficients: terms
                        .iter()
                        .map(|(e, c)| (*e, ellgen::serial::ratio_string(c)))
                        .collect(),
                }),
            })
        }
        Command::Ellgenus | Command::Nsgenus => {
            let spec = ci_spec(job)?;
            let r = if command == Command::Ellgenus {
                elliptic_genus::<BigRat>(&spec, job.q_order)?
            } else {
                ns_elliptic_genus::<BigRat>(&spec, job.q_order)?
            };
            done(match fmt {
                Format::Text => emit::genus_text(&r).trim_end().to_string(),
                Format::Latex => emit::genus_latex(&r),
                Format::Json => emit::genus_json(&r),
            })
        }
        Command::Witten => {
            let spec = ci_spec(job)?;
            let k = job
                .sigma_k
                .ok_or_else(|| Error::Domain("--sigma-k is required".into()))?;
            let tau = job.tau_value()?;
            let w = witten_sigma::<BigRat>(k, &spec, job.q_order, tau)?;
            let t = [tau.re, tau.im];
            done(match fmt {
                Format::Text => emit::witten_text(&w, &spec, t, Style::Text),
                Format::Latex => emit::witten_text(&w, &spec, t, Style::Latex),
                Format::Json => emit::json(&emit::witten_json(&w, &spec, t)),
            })
        }
        Command::Genseries => {
            require_degrees(job)?;
            let g = elliptic_genfun::<BigRat>(&job.degrees, job.t_order, job.q_order)?;
            let r = job.degrees.len() as u32;
            let rows: Vec<_> = (r..=job.t_order).map(|t| (t, g.coeff(t))).collect();
            done(match fmt {
                Format::Json => emit::json(&emit::genseries_json(
                    &job.degrees,
                    job.t_order,
                    job.q_order,
                    &rows,
                )),
                Format::Text | Format::Latex => {
                    let style = if fmt == Format::Text { Style::Text } else { Style::Latex };
                    rows.iter()
                        .map(|(t, body)| {
                            let spec = CISpec::new(t + 1, job.degrees.clone())?;
                            let line = emit::series_line(body, style);
                            Ok(match style {
                                Style::Text => format!("t^{t} ({spec}): {line}"),
                                Style::Latex => format!("t^{{{t}}}: {line}"),
                            })
                        })
                        .collect::<ellgen::Result<Vec<_>>>()?
                        .join("\n")
                }
            })
        }
        Command::Lgcheck => {
            let spec = ci_spec(job)?;
            let v = match job.v_value()? {
                Some(v) => v,
                None if job.sigma_k.is_some() => C64::new(0.0, 0.0),
                None => return Err(Error::Domain("--v is required".into())),
            };
            let tau = job.tau_value()?;
            let kind = match (job.sigma_k, job.lg_kind) {
                (Some(1), _) => Correspondence::Sigma1,
                (Some(2), _) => Correspondence::Sigma2,
                (Some(3), _) => Correspondence::Sigma3,
                (Some(k), _) => {
                    return Err(Error::Domain(format!("sigma index must be 1, 2 or 3, got {k}")))
                }
                (None, LgKind::Elliptic) => Correspondence::Elliptic,
                (None, LgKind::Ns) => Correspondence::Ns,
            };
            let params = LGParams::with_tol(v, tau, job.tol)?;
            let report = check_correspondence(&spec, &params, job.q_order, kind)?;
            let agrees = report.agrees(job.tol);
            let output = match fmt {
                Format::Json => emit::json(&LgcheckJson {
                    agrees,
                    tol: job.tol,
                    report: &report,
                }),
                _ => {
                    let mut s = format!(
                        "{} correspondence for {spec} at v = {}, tau = {}\n",
                        kind.name(),
                        fmt_c(report.v),
                        fmt_c(report.tau)
                    );
                    s += &format!("  geometric  {}\n", fmt_c(report.geometric_value));
                    s += &format!("  LG sum     {}\n", fmt_c(report.lg_value));
                    s += &format!("  abs diff   {:.3e}\n", report.abs_diff);
                    s += &format!("  rel diff   {:.3e}\n", report.rel_diff);
                    s += &format!(
                        "  q-order {} (truncation bound {:.3e})\n",
                        report.q_order_used, report.truncation_bound
                    );
                    for (name, okay) in &report.preconditions {
                        s += &format!("  [{}] {name}\n", if *okay { "ok" } else { "FAILED" });
                    }
                    s += if agrees { "  agree" } else { "  DISAGREE" };
                    s
                }
            };
            Ok(Outcome {
                code: if agrees { 0 } else { EXIT_FAILURE },
                output,
            })
        }
        Command::Selftest => {
            let report = ellgen::selftest::run();
            let code = if report.all_passed() { 0 } else { EXIT_FAILURE };
            let output = match fmt {
                Format::Json => emit::json(&report),
                _ => {
                    let mut lines: Vec<String> = report
                        .checks
                        .iter()
                        .map(|c| {
                            let status = if c.passed { "PASS" } else { "FAIL" };
                            let detail = if c.detail.is_empty() {
                                String::new()
                            } else {
                                format!(" ({})", c.detail)
                            };
                            format!("{status} {}: {}{detail}", c.module, c.name)
                        })
                        .collect();
                    let failed = report.failures().count();
                    lines.push(format!(
                        "{} checks, {failed} failed",
                        report.checks.len()
                    ));
                    lines.join("\n")
                }
            };
            Ok(Outcome { code, output })
        }
    }
}

#[derive(Serialize)]
struct LgcheckJson<'a> {
    agrees: bool,
    tol: f64,
    #[serde(flatten)]
    report: &'a ellgen::CorrespondenceReport,
}

fn fmt_c(z: C64) -> String {
    format!("{} {:+}i", z.re, z.im)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("ELLGEN_CACHE_DIR")
        .filter(|d| !d.is_empty())
        .map(PathBuf::from)
}

fn run_batch(path: &PathBuf) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return error_outcome(&Error::Io(format!("{}: {e}", path.display())), Format::Text),
    };
    let jobs: Vec<BatchJob> = match serde_json::from_str(&text) {
        Ok(j) => j,
        Err(e) => return error_outcome(&Error::Domain(format!("invalid jobs file: {e}")), Format::Text),
    };
    let outcomes: Vec<Outcome> = jobs.par_iter().map(|j| run(j.command, &j.spec)).collect();
    let all_json = jobs.iter().all(|j| j.spec.format == Format::Json);
    let output = if all_json {
        let values: Vec<serde_json::Value> = outcomes
            .iter()
            .map(|o| serde_json::from_str(&o.output).unwrap_or(serde_json::Value::Null))
            .collect();
        emit::json(&values)
    } else {
        outcomes
            .iter()
            .map(|o| o.output.as_str())
            .collect::<Vec<_>>()
            .join("\n\n")
    };
    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(0);
    Outcome { code, output }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cache_dir();
    if let Some(dir) = &cache {
        if let Err(e) = load_memo::<BigRat>(dir) {
            eprintln!("warning: ignoring cache in {}: {e}", dir.display());
        }
    }
    let outcome = match (&cli.jobs, cli.command) {
        (Some(path), _) => run_batch(path),
        (None, Some(command)) => run(command, &cli.job),
        (None, None) => unreachable!("clap requires a command or --jobs"),
    };
    println!("{}", outcome.output);
    if let Some(dir) = &cache {
        if let Err(e) = save_memo::<BigRat>(dir) {
            eprintln!("warning: could not write cache to {}: {e}", dir.display());
        }
    }
    ExitCode::from(outcome.code)
}
