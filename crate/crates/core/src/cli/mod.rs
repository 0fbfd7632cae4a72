//! Command-line frontend: argument parsing, dispatch and report rendering.
//!
//! [`run`] never prints; it returns the exit code together with the report
//! and diagnostic text so the binary (and tests) decide where they go.

mod sweep;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value as Json};

pub use sweep::{sweep, SweepReport, SweepRow, SweepStatus, MAX_SWEEP_DEGREE};

use crate::betti::{assemble_resolution, Flag, Value};
use crate::cokernel::{cok_dimension, CokOptions, Method, DEFAULT_CEILING};
use crate::error::Error;
use crate::exactla::{PrimeField, DEFAULT_PRIME};
use crate::lattice::{DivisorClass, FatPointScheme};
use crate::linsys::{alpha, decompose, expected_h0, expected_h1, hilbert, Component};
use crate::splitting::{compute_splitting, forced_splitting, predict_splitting, SplitOptions};
use crate::weyl::{enumerate_exceptional, reduce};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "fatpt", version, about = "Hilbert functions and Betti numbers of fat points in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Prime modulus for all finite field computations.
    #[arg(long, global = true, env = "FATPT_PRIME", default_value_t = DEFAULT_PRIME)]
    prime: u64,

    /// Seed for random point configurations.
    #[arg(long, global = true, env = "FATPT_SEED", default_value_t = crate::DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Largest matrix (in entries) a cokernel computation may build.
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Expected Hilbert function with fixed parts.
    Hilbert {
        #[arg(long)]
        mults: FatPointScheme,
        /// Inclusive degree range "a..b"; defaults to a window around alpha.
        #[arg(long, value_parser = parse_range)]
        deg: Option<(i64, i64)>,
    },
    /// Expected graded Betti numbers of the ideal.
    Resolution {
        #[arg(long)]
        mults: FatPointScheme,
        /// Extend the table at least up to this degree.
        #[arg(long, default_value_t = 0)]
        max_degree: i64,
    },
    /// Weyl group reduction of a class.
    Reduce {
        #[arg(long)]
        class: DivisorClass,
    },
    /// Free part and exceptional fixed components of a class.
    Decompose {
        #[arg(long)]
        class: DivisorClass,
    },
    /// Splitting type of an exceptional class.
    Split {
        #[arg(long)]
        class: DivisorClass,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Predicted splitting type from the defect sum.
    PredictSplit {
        #[arg(long)]
        class: DivisorClass,
    },
    /// Cokernel dimension of the multiplication map for L + mE.
    VerifyCokernel {
        #[arg(long)]
        class: DivisorClass,
        #[arg(long)]
        m: i64,
        /// Use the direct rank computation on fat points instead.
        #[arg(long)]
        oracle: bool,
    },
    /// All exceptional classes of degree 1..=max-degree.
    EnumerateExceptional {
        #[arg(long)]
        max_degree: i64,
    },
    /// Splitting types of all exceptional classes plus cokernel checks
    /// where equality in the bound is not already known.
    Sweep {
        #[arg(long)]
        max_degree: i64,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (a, b) = t
        .split_once("..")
        .ok_or_else(|| format!("expected a range \"a..b\", got {s:?}"))?;
    let a = a.parse::<i64>().map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let b = b.parse::<i64>().map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

/// A fully validated job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub field: PrimeField,
    pub seed: u64,
    pub format: Format,
    pub ceiling: usize,
}

impl JobSpec {
    pub fn split_options(&self) -> SplitOptions {
        SplitOptions {
            field: self.field,
            seed: self.seed,
            ..SplitOptions::default()
        }
    }

    pub fn cok_options(&self) -> CokOptions {
        CokOptions {
            field: self.field,
            seed: self.seed,
            ceiling: self.ceiling,
            ..CokOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, msg: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. } | Error::RetriesExhausted { .. } | Error::Degenerate(_) | Error::CommonFactor(_) => {
            EXIT_INFEASIBLE
        }
        Error::ShghInconsistent { .. } | Error::Inconsistent(_) => EXIT_VIOLATION,
        _ => EXIT_INVALID,
    }
}

/// Parses `argv` (including the program name) into a [`JobSpec`].
pub fn parse_args<I, T>(argv: I) -> Result<JobSpec, Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return Err(if e.use_stderr() {
                Outcome::error(EXIT_INVALID, text)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            });
        }
    };
    let field = PrimeField::new(cli.prime).map_err(|e| Outcome::error(EXIT_INVALID, format!("error: {e}\n")))?;
    Ok(JobSpec {
        command: cli.command,
        field,
        seed: cli.seed,
        format: cli.format,
        ceiling: cli.ceiling,
    })
}

/// Parses and executes one command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(job) => execute(&job),
        Err(o) => o,
    }
}

/// A rendered report plus the exit code it implies.
struct Report {
    json: Json,
    tsv: String,
    code: i32,
}

fn envelope(job: &JobSpec, body: impl Serialize, provisional: bool, conjectural: bool) -> Json {
    let mut obj = match serde_json::to_value(body).expect("reports serialize") {
        Json::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("prime".into(), json!(job.field.modulus()));
    obj.insert("seed".into(), json!(job.seed));
    obj.insert("provisional".into(), json!(provisional));
    obj.insert("conjectural".into(), json!(conjectural));
    Json::Object(obj)
}

fn tsv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join("\t"));
        out.push('\n');
    }
    out
}

fn components_text(cs: &[Component]) -> String {
    cs.iter()
        .map(|c| format!("({})^{}", c.class, c.coefficient))
        .collect::<Vec<_>>()
        .join(" ")
}

fn value_text(v: &Value) -> String {
    v.to_string()
}

/// Executes a validated job.
pub fn execute(job: &JobSpec) -> Outcome {
    match dispatch(job) {
        Ok(r) => {
            let stdout = match job.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&r.json).expect("json");
                    s.push('\n');
                    s
                }
                Format::Tsv => r.tsv,
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::error(exit_code(&e), format!("error: {e}\n")),
    }
}

fn dispatch(job: &JobSpec) -> crate::Result<Report> {
    match &job.command {
        Command::Hilbert { mults, deg } => {
            let (lo, hi) = deg.unwrap_or_else(|| {
                let a = alpha(mults);
                ((a - 1).max(0), a + 3)
            });
            log::info!("hilbert function of {} points over degrees {lo}..{hi}", mults.n());
            let rep = hilbert(mults, lo..=hi);
            let tsv = tsv(
                &["t", "e(h_Z,t)", "fixed_part"],
                rep.rows
                    .iter()
                    .map(|r| vec![r.t.to_string(), r.value.to_string(), components_text(&r.fixed_part)]),
            );
            let json = envelope(job, json!({ "mults": mults.to_string(), "alpha": rep.alpha, "rows": rep.rows }), false, false);
            Ok(Report { json, tsv, code: EXIT_OK })
        }
        Command::Resolution { mults, max_degree } => {
            log::info!("resolution of {} points", mults.n());
            let table = assemble_resolution(mults, *max_degree, &job.split_options())?;
            let conjectural = table.rows.iter().any(|r| r.flag == Flag::ConjecturalExact);
            let flags: std::collections::BTreeMap<i64, Flag> = table.rows.iter().map(|r| (r.degree, r.flag)).collect();
            let body = json!({
                "mults": mults.to_string(),
                "alpha": table.alpha,
                "generators_end": table.generators_end,
                "g": table.g_map(),
                "s": table.s_map(),
                "flags": flags,
                "alpha_plus_one": table.alpha_plus_one,
                "rows": table.rows,
            });
            let tsv = tsv(
                &["degree", "hilbert", "g", "s", "flag"],
                table.rows.iter().map(|r| {
                    vec![
                        r.degree.to_string(),
                        r.hilbert.to_string(),
                        value_text(&r.g),
                        value_text(&r.s),
                        format!("{:?}", r.flag),
                    ]
                }),
            );
            Ok(Report {
                json: envelope(job, body, table.provisional, conjectural),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::Reduce { class } => {
            let red = reduce(class);
            let body = json!({
                "class": class,
                "reduced": red.reduced,
                "word": red.word,
                "status": red.status,
                "length": red.word.len(),
                "cremonas": red.word.cremona_count(),
            });
            let tsv = tsv(
                &["class", "reduced", "status", "word"],
                [vec![
                    class.to_string(),
                    red.reduced.to_string(),
                    format!("{:?}", red.status),
                    red.word.to_string(),
                ]],
            );
            Ok(Report {
                json: envelope(job, body, false, false),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::Decompose { class } => {
            let h1 = expected_h1(class)?;
            let d = decompose(class);
            let body = json!({
                "class": class,
                "in_monoid": d.is_some(),
                "h": d.as_ref().map(|d| &d.h),
                "components": d.as_ref().map(|d| &d.components),
                "boundary": d.as_ref().is_some_and(|d| d.boundary),
                "expected_h0": expected_h0(class),
                "expected_h1": h1,
            });
            let tsv = tsv(
                &["class", "h", "components", "expected_h0", "expected_h1"],
                [vec![
                    class.to_string(),
                    d.as_ref().map_or("-".into(), |d| d.h.to_string()),
                    d.as_ref().map_or(String::new(), |d| components_text(&d.components)),
                    expected_h0(class).to_string(),
                    h1.to_string(),
                ]],
            );
            Ok(Report {
                json: envelope(job, body, false, false),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::Split { class, trials } => {
            let opts = SplitOptions {
                trials: *trials,
                ..job.split_options()
            };
            let (a, b, results, agreeing, forced) = match forced_splitting(class)? {
                Some(s) => (s.a, s.b, Vec::new(), 0, true),
                None => {
                    let r = compute_splitting(class, &opts)?;
                    (r.a, r.b, r.trial_results, r.agreeing, false)
                }
            };
            let body = json!({
                "class": class,
                "a": a,
                "b": b,
                "d": class.t,
                "trials": results,
                "agreeing": agreeing,
                "forced": forced,
            });
            let tsv = tsv(
                &["class", "a", "b", "d", "forced", "agreeing"],
                [vec![
                    class.to_string(),
                    a.to_string(),
                    b.to_string(),
                    class.t.to_string(),
                    forced.to_string(),
                    agreeing.to_string(),
                ]],
            );
            Ok(Report {
                json: envelope(job, body, !forced, false),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::PredictSplit { class } => {
            let p = predict_splitting(class, &job.split_options())?;
            let tsv = tsv(
                &["a", "b", "score", "feasible", "chosen"],
                p.candidates.iter().map(|c| {
                    vec![
                        c.a.to_string(),
                        c.b.to_string(),
                        c.score.to_string(),
                        c.feasible.to_string(),
                        (c.a == p.splitting.a).to_string(),
                    ]
                }),
            );
            let provisional = !p.forced;
            Ok(Report {
                json: envelope(job, &p, provisional, !p.forced),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::VerifyCokernel { class, m, oracle } => {
            let method = if *oracle { Method::BruteForce } else { Method::Formula };
            log::info!("cokernel of L + {m}E for E = {class} ({method:?})");
            let v = cok_dimension(class, *m, &job.cok_options(), None, method)?;
            let code = if v.agrees() { EXIT_OK } else { EXIT_VIOLATION };
            if !v.agrees() {
                log::warn!("computed {} but the bound predicts {}", v.computed, v.predicted);
            }
            let tsv = tsv(
                &["class", "m", "a", "b", "computed", "predicted", "sharp_by_theorem"],
                [vec![
                    class.to_string(),
                    m.to_string(),
                    v.splitting.a.to_string(),
                    v.splitting.b.to_string(),
                    v.computed.to_string(),
                    v.predicted.to_string(),
                    v.sharp_by_theorem.to_string(),
                ]],
            );
            let mut json = envelope(job, &v, v.provisional, !v.sharp_by_theorem);
            json["agrees"] = json!(v.agrees());
            Ok(Report { json, tsv, code })
        }
        Command::EnumerateExceptional { max_degree } => {
            if *max_degree > MAX_SWEEP_DEGREE {
                return Err(Error::InvalidInput(format!(
                    "max degree {max_degree} exceeds the cap of {MAX_SWEEP_DEGREE}"
                )));
            }
            let classes = enumerate_exceptional(*max_degree);
            let tsv = tsv(
                &["d", "class"],
                classes.iter().map(|c| vec![c.t.to_string(), c.to_string()]),
            );
            let body = json!({ "max_degree": max_degree, "count": classes.len(), "classes": classes });
            Ok(Report {
                json: envelope(job, body, false, false),
                tsv,
                code: EXIT_OK,
            })
        }
        Command::Sweep { max_degree, jobs } => {
            let rep = sweep(*max_degree, &job.split_options(), &job.cok_options(), *jobs)?;
            let code = if rep.violations > 0 { EXIT_VIOLATION } else { EXIT_OK };
            let mut table = String::new();
            let _ = writeln!(table, "class\td\ta\tb\tpredicted\tcomputed\tstatus");
            for r in &rep.rows {
                let (computed, status) = match &r.status {
                    SweepStatus::Verified { computed } => (computed.to_string(), "verified".to_string()),
                    SweepStatus::Violation { computed } => (computed.to_string(), "violation".to_string()),
                    SweepStatus::Skipped { rows, cols, .. } => ("-".to_string(), format!("skipped {rows}x{cols}")),
                };
                let _ = writeln!(
                    table,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.class, r.d, r.a, r.b, r.predicted, computed, status
                );
            }
            let conjectural = rep.skipped > 0;
            Ok(Report {
                json: envelope(job, &rep, true, conjectural),
                tsv: table,
                code,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("fatpt").chain(args.iter().copied()))
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("208..211"), Ok((208, 211)));
        assert_eq!(parse_range(" 3 .. 3 "), Ok((3, 3)));
        assert!(parse_range("5..4").is_err());
        assert!(parse_range("5-6").is_err());
    }

    #[test]
    fn bad_prime_is_invalid_input() {
        let o = run_args(&["--prime", "91", "reduce", "--class", "1;1,1"]);
        assert_eq!(o.code, EXIT_INVALID);
        assert!(o.stderr.contains("91"));
    }

    #[test]
    fn bad_class_names_the_token() {
        let o = run_args(&["reduce", "--class", "3;2,x,1"]);
        assert_eq!(o.code, EXIT_INVALID);
        assert!(o.stderr.contains("\"x\""), "{}", o.stderr);
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Infeasible { rows: 1, cols: 1, ceiling: 0 }), EXIT_INFEASIBLE);
        assert_eq!(exit_code(&Error::NotExceptional("x".into())), EXIT_INVALID);
        assert_eq!(
            exit_code(&Error::ShghInconsistent { class: "x".into(), value: -1 }),
            EXIT_VIOLATION
        );
    }

    #[test]
    fn help_goes_to_stdout() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.stdout.contains("verify-cokernel"));
    }
}
