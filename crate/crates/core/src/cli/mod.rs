//! The `mrdkit` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with the rendered report, so the binary is a thin wrapper.
//! Exit codes: 0 pass, 1 impossible request or failed check, 2 usage or data
//! error, 3 enumeration cap reached.

mod report;
mod theorems;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub use report::{Entry, Format, Report, Status, EXIT_CAP, EXIT_IMPOSSIBLE, EXIT_OK, EXIT_USAGE};

use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::gabidulin::GabidulinCtx;
use crate::rankcode::{brute_equivalences, Limits, MapKind, RankMetricCode};
use crate::selfdual::{self, SelfDualCertificate, Selfdualization};

#[derive(Parser, Debug)]
#[command(
    name = "mrdkit",
    version,
    about = "Rank-metric codes, Gabidulin codes and self-dual MRD codes over finite fields"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Omit timings so identical invocations give identical output.
    #[arg(long, global = true)]
    pub canonical: bool,
    /// Bound on enumerated codewords and group elements.
    #[arg(long, global = true, env = "MRDKIT_MAX_WORK")]
    pub max_work: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the Gabidulin code G_ell in F_q^{n x n}.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Defaults to n/2 (at least 1).
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual code of a code file.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum rank distance.
    Distance {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Whether the code meets the Singleton-like bound dim = m(n - d + 1).
    IsMrd {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Whether the code equals its dual under the trace inner product.
    IsSelfdual {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Generators and order of Aut(G_ell), with an exhaustive count when feasible.
    Automorphisms {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Transport G_{n/2} to a self-dual code, or show that this is impossible.
    Selfdualize {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// All self-dual MRD codes in F_q^{2x2}.
    #[command(name = "classify2x2")]
    Classify2x2 {
        #[arg(long)]
        q: u64,
        /// Also test pairwise equivalence exhaustively.
        #[arg(long)]
        equivalence: bool,
    },
    /// Recheck every claim recorded in a self-dualization certificate.
    VerifyCertificate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run every structural check for (q, n).
    VerifyTheorems {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<usize>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let limits = cli.max_work.map(Limits::uniform).unwrap_or_default();
    let report = match execute(&cli.command, &limits) {
        Ok(r) => r,
        Err(e) => error_report(&cli.command, e),
    };
    (report.exit_code(), report.render(cli.format, cli.canonical))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct { .. } => "construct",
        Command::Dual { .. } => "dual",
        Command::Distance { .. } => "distance",
        Command::IsMrd { .. } => "is-mrd",
        Command::IsSelfdual { .. } => "is-selfdual",
        Command::Automorphisms { .. } => "automorphisms",
        Command::Selfdualize { .. } => "selfdualize",
        Command::Classify2x2 { .. } => "classify2x2",
        Command::VerifyCertificate { .. } => "verify-certificate",
        Command::VerifyTheorems { .. } => "verify-theorems",
    }
}

fn error_report(cmd: &Command, e: Error) -> Report {
    let mut r = Report::new(command_name(cmd));
    r.exit = Some(if matches!(e, Error::TooLarge { .. }) { EXIT_CAP } else { EXIT_USAGE });
    r.set("error", e.to_string());
    r
}

fn gab_ctx(q: u64, n: usize) -> Result<GabidulinCtx> {
    GabidulinCtx::new(Arc::new(FieldCtx::for_q(q, n)?))
}

fn ctx_summary(ctx: &FieldCtx) -> Value {
    json!({"q": ctx.q(), "n": ctx.n(), "field": ctx.to_json()})
}

fn default_ell(n: usize) -> usize {
    (n / 2).max(1)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A code file, or the code inside a certificate file.
fn read_code(path: &Path) -> Result<RankMetricCode> {
    let v = read_json(path)?;
    let v = v.get("code").cloned().unwrap_or(v);
    let j = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    RankMetricCode::from_json(&j)
}

fn code_value(c: &RankMetricCode) -> Value {
    serde_json::to_value(c.to_json()).expect("code serializes")
}

fn emit_code(r: &mut Report, c: &RankMetricCode, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => {
            write_json(p, &code_value(c))?;
            r.set("written", p.display().to_string());
        }
        None => r.set("code", code_value(c)),
    }
    Ok(())
}

/// Minimum distance as a report value, or the cap that prevented it.
fn distance_or_cap(r: &mut Report, c: &RankMetricCode, limits: &Limits) -> Result<Option<usize>> {
    match c.min_distance(limits) {
        Ok(d) => {
            r.set("min_distance", d);
            Ok(Some(d))
        }
        Err(Error::TooLarge { count, cap }) => {
            r.set("min_distance", format!("skipped: {count} codewords over cap {cap}"));
            Ok(None)
        }
        Err(Error::EmptyCode) => {
            r.set("min_distance", "undefined for the zero code");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn pass_if(ok: bool, why_not: &str) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail(why_not.to_string())
    }
}

fn execute(cmd: &Command, limits: &Limits) -> Result<Report> {
    let mut r = Report::new(command_name(cmd));
    match cmd {
        Command::Construct { q, n, ell, out } => {
            let g = gab_ctx(*q, *n)?;
            let ell = ell.unwrap_or(default_ell(*n));
            let c = g.code(ell)?;
            r.context = Some(ctx_summary(g.ctx()));
            r.set("ell", ell);
            r.set("dimension", c.dim());
            distance_or_cap(&mut r, &c, limits)?;
            emit_code(&mut r, &c, out)?;
        }
        Command::Dual { input, out } => {
            let c = read_code(input)?;
            let d = c.dual();
            r.context = Some(ctx_summary(c.ctx()));
            r.set("dimension", d.dim());
            emit_code(&mut r, &d, out)?;
        }
        Command::Distance { input } => {
            let c = read_code(input)?;
            r.context = Some(ctx_summary(c.ctx()));
            r.set("dimension", c.dim());
            if distance_or_cap(&mut r, &c, limits)?.is_none() && c.dim() > 0 {
                r.exit = Some(EXIT_CAP);
            }
        }
        Command::IsMrd { input } => {
            let c = read_code(input)?;
            r.context = Some(ctx_summary(c.ctx()));
            let (m, n) = c.shape();
            let mut capped = false;
            r.check("is-mrd", "dim C = m (n - d + 1)", || match c.min_distance(limits) {
                Ok(d) => (
                    pass_if(c.dim() == m * (n - d + 1), "bound not attained"),
                    Some(format!("dim {}, d = {d}", c.dim())),
                ),
                Err(e @ Error::TooLarge { .. }) => {
                    capped = true;
                    (Status::Skipped(e.to_string()), None)
                }
                Err(e) => (Status::Fail(e.to_string()), None),
            });
            if capped {
                r.exit = Some(EXIT_CAP);
            }
        }
        Command::IsSelfdual { input } => {
            let c = read_code(input)?;
            r.context = Some(ctx_summary(c.ctx()));
            r.check("is-selfdual", "C = C^⊥", || {
                (pass_if(c.is_self_dual(), "C differs from its dual"), Some(format!("dim {}", c.dim())))
            });
        }
        Command::Automorphisms { q, n, ell } => automorphisms(&mut r, *q, *n, *ell, limits)?,
        Command::Selfdualize { q, n, emit_certificate } => {
            let g = gab_ctx(*q, *n)?;
            r.context = Some(ctx_summary(g.ctx()));
            match selfdual::gabisd_selfdualize(&g, limits)? {
                Selfdualization::Certificate(cert) => {
                    let p = cert.params;
                    r.set("params", json!({"i": p.i, "h": p.h, "j": p.j}));
                    r.check("self-dual", "P G_{n/2} Q is self-dual", || {
                        (pass_if(cert.code.is_self_dual(), "not self-dual"), None)
                    });
                    r.check("distance", "d(P G_{n/2} Q) = n/2 + 1", || match cert.code.min_distance(limits) {
                        Ok(d) => (pass_if(d == n / 2 + 1, "distance too small"), Some(format!("d = {d}"))),
                        Err(e) => (Status::Skipped(e.to_string()), None),
                    });
                    match emit_certificate {
                        Some(path) => {
                            write_json(path, &cert.to_json())?;
                            r.set("certificate", path.display().to_string());
                        }
                        None => r.set("certificate", cert.to_json()),
                    }
                }
                Selfdualization::Impossible(imp) => {
                    r.set("impossible", imp.reason.clone());
                    match &imp.scan {
                        Some(s) => r.set("scan", serde_json::to_value(s).expect("scan serializes")),
                        None => r.set("scan", "not run: over cap or not applicable"),
                    }
                    r.exit = Some(EXIT_IMPOSSIBLE);
                }
            }
        }
        Command::Classify2x2 { q, equivalence } => {
            let ctx = Arc::new(FieldCtx::for_q(*q, 1)?);
            r.context = Some(ctx_summary(&ctx));
            let codes = selfdual::classify_2x2(&ctx)?;
            let solutions = selfdual::sum_of_squares_minus_one(&ctx).len();
            r.set("solutions", solutions);
            r.set("count", codes.len());
            if *equivalence && codes.len() > 1 {
                let mut found = Ok(0usize);
                r.check("pairwise-equivalent", "all self-dual MRD codes in k^{2x2} are equivalent", || {
                    for c in &codes[1..] {
                        match crate::rankcode::find_equivalence(&codes[0], c, true, limits) {
                            Ok(Some(_)) => {}
                            Ok(None) => return (Status::Fail("inequivalent pair".into()), None),
                            Err(e) => {
                                found = Err(e.clone());
                                return (Status::Skipped(e.to_string()), None);
                            }
                        }
                    }
                    (Status::Pass, Some(format!("{} codes", codes.len())))
                });
                if found.is_err() {
                    r.exit = Some(EXIT_CAP);
                }
            }
            r.set("codes", Value::Array(codes.iter().map(code_value).collect()));
        }
        Command::VerifyCertificate { input } => {
            let cert = SelfDualCertificate::from_json(&read_json(input)?)?;
            r.context = Some(ctx_summary(cert.code.ctx()));
            for (name, ok) in cert.checks()? {
                r.check(name, name, || (pass_if(ok, "does not hold"), None));
            }
        }
        Command::VerifyTheorems { q, n, ell } => {
            let ctx = Arc::new(FieldCtx::for_q(*q, *n)?);
            r.context = Some(ctx_summary(&ctx));
            theorems::verify_all(&mut r, ctx, *ell, limits);
        }
    }
    Ok(r)
}

fn automorphisms(r: &mut Report, q: u64, n: usize, ell: Option<usize>, limits: &Limits) -> Result<()> {
    let g = gab_ctx(q, n)?;
    let ell = ell.unwrap_or(default_ell(n));
    r.context = Some(ctx_summary(g.ctx()));
    let order = g.aut_order(ell)?;
    let gens = g.aut_generators(ell)?;
    r.set("ell", ell);
    r.set("order", order.to_string());
    let f = g.field();
    r.set(
        "generators",
        Value::Array(
            gens.iter()
                .map(|m| {
                    json!({
                        "kind": if m.kind == MapKind::Proper { "proper" } else { "improper" },
                        "X": m.x.to_json(),
                        "Y": m.y.to_json(),
                    })
                })
                .collect(),
        ),
    );
    let code = g.code(ell)?;
    r.check("generators", "each generator maps G_ell onto itself", || {
        let ok = gens.iter().all(|m| code.apply(m).is_ok_and(|c| c == code));
        (pass_if(ok, "a generator moves the code"), None)
    });
    r.check("exhaustive", "|Aut(G_ell)| = 2n(q^n-1)^2/(q-1)", || {
        match brute_equivalences(&code, &code, true, limits) {
            Ok(all) => {
                let contains = gens.iter().all(|m| all.contains(&m.normalized(f)));
                let ok = all.len() as u128 == order && contains;
                (
                    pass_if(ok, "count or generator membership differs"),
                    Some(format!("exhaustive count {} = formula {order}", all.len())),
                )
            }
            Err(e) => (Status::Skipped(e.to_string()), None),
        }
    });
    Ok(())
}
