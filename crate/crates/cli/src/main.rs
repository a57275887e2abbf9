//! Command-line front end: parse a colored diagram, run the invariant
//! computations, and emit JSON or CSV.
//!
//! Exit codes: 0 on success, 1 for input problems (unreadable file, bad
//! diagram, bad flags), 2 when an internal cross-check fails and the result
//! cannot be trusted. Errors are reported as one JSON object on stderr:
//! `{"error": {"kind": ..., "message": ...}}`.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use kashaev_core::corpus;
use kashaev_core::diagram::{ColoredDiagram, EdgeId, RawDiagram};
use kashaev_core::error::{Error, Result};
use kashaev_core::invariants::{conway, signature_at, signature_grid, DEFAULT_TOL_REL};
use kashaev_core::kashaev::{
    label_matrix, label_matrix_marked, tau_numeric, tau_numeric_marked, tau_symbolic,
    tau_symbolic_marked,
};
use kashaev_core::laurent::TorusPoint;
use kashaev_core::verify::{verify_diagram, VerifyReport};

#[derive(Parser)]
#[command(
    name = "kashaev",
    version,
    about = "Signature, nullity, Conway function and Alexander polynomial of colored link diagrams",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print basic facts about a diagram: crossings, regions, colors,
    /// monochromatic writhe, linking numbers.
    Info(InputArgs),

    /// Signature and nullity at one point of the torus.
    Signature {
        #[command(flatten)]
        input: InputArgs,

        /// Angles in radians, one per color, each strictly inside (0, 2*pi);
        /// comma separated or repeated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        theta: Vec<f64>,

        #[command(flatten)]
        tol: TolArg,
    },

    /// Signature and nullity on a uniform open grid, as CSV with header
    /// `theta1,...,sigma,eta,near_degenerate`.
    Grid {
        #[command(flatten)]
        input: InputArgs,

        /// Samples per axis; sample k of n sits at angle 2*pi*k/(n+1).
        #[arg(long, value_name = "N")]
        n: usize,

        /// Write the CSV to this file instead of stdout.
        #[arg(long, value_name = "PATH")]
        output: Option<String>,

        #[command(flatten)]
        tol: TolArg,
    },

    /// Conway function (up to sign) and symmetrized Alexander polynomial,
    /// computed by two independent determinant routes.
    Alexander(InputArgs),

    /// Print one of the constructed matrices as JSON.
    DumpMatrix {
        #[command(flatten)]
        input: InputArgs,

        /// Which matrix: the region matrix evaluated at --theta (tau), the
        /// symbolic region matrix (tau-sym), or the label matrix (K).
        #[arg(long, value_enum)]
        which: WhichMatrix,

        /// Evaluation angles for `--which tau`, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        theta: Option<Vec<f64>>,

        /// Delete the two regions at the marked point first.
        #[arg(long)]
        reduced: bool,
    },

    /// Run every self-check on one diagram, or on the whole built-in corpus
    /// when no input is given, and print a pass/fail table.
    Verify {
        #[command(flatten)]
        input: InputArgs,

        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,

        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Diagram file (PD text or its JSON mirror); `-` reads stdin.
    #[arg(value_name = "INPUT")]
    input: Option<String>,

    /// Inline diagram text given directly on the command line.
    #[arg(long, value_name = "TEXT", conflicts_with = "input")]
    pd: Option<String>,

    /// Move the marked point to this edge id before computing.
    #[arg(long, value_name = "EDGE")]
    mark: Option<EdgeId>,
}

#[derive(Args)]
struct TolArg {
    /// Relative eigenvalue tolerance; overrides the KASHAEV_TOL environment
    /// variable and the built-in default.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy)]
enum WhichMatrix {
    /// Region matrix evaluated numerically at --theta.
    Tau,
    /// Region matrix with exact symbolic entries.
    #[value(name = "tau-sym")]
    TauSym,
    /// Crossing-by-region matrix of corner labels.
    #[value(name = "K", alias = "k")]
    K,
}

impl InputArgs {
    /// Load and validate the diagram, applying the mark override if any.
    fn required(&self) -> Result<ColoredDiagram> {
        self.optional()?.ok_or_else(|| {
            Error::Validation(
                "no input: give a file path, `-` for stdin, or --pd TEXT".into(),
            )
        })
    }

    fn optional(&self) -> Result<Option<ColoredDiagram>> {
        let text = if let Some(t) = &self.pd {
            t.clone()
        } else if let Some(p) = &self.input {
            if p == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::Validation(format!("cannot read stdin: {}", e)))?;
                buf
            } else {
                fs::read_to_string(p)
                    .map_err(|e| Error::Validation(format!("cannot read {}: {}", p, e)))?
            }
        } else {
            return Ok(None);
        };
        let mut raw = RawDiagram::parse(&text)?;
        if let Some(m) = self.mark {
            raw.mark = Some(m);
        }
        Ok(Some(ColoredDiagram::from_raw(raw)?))
    }
}

impl TolArg {
    /// Flag beats environment beats default; the value must be positive.
    fn resolve(&self) -> Result<f64> {
        let tol = match self.tol {
            Some(t) => t,
            None => match std::env::var("KASHAEV_TOL") {
                Ok(s) => s.trim().parse::<f64>().map_err(|_| {
                    Error::Validation(format!("KASHAEV_TOL is not a number: {:?}", s))
                })?,
                Err(std::env::VarError::NotPresent) => DEFAULT_TOL_REL,
                Err(e) => return Err(Error::Validation(format!("KASHAEV_TOL: {}", e))),
            },
        };
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::Validation(format!(
                "tolerance must be positive and finite, got {}",
                tol
            )));
        }
        Ok(tol)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(
                e.kind(),
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion
            ) {
                e.exit();
            }
            emit_error("usage", &e.render().to_string());
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let payload = serde_json::json!({
        "error": { "kind": kind, "message": message.trim_end() }
    });
    let _ = writeln!(std::io::stderr().lock(), "{}", payload);
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Info(input) => info(&input.required()?),
        Command::Signature { input, theta, tol } => {
            let d = input.required()?;
            let p = TorusPoint::new(theta)?;
            let r = signature_at(&d, &p, tol.resolve()?)?;
            out_line(&pretty(&r.to_json()))
        }
        Command::Grid { input, n, output, tol } => {
            grid(&input.required()?, n, output.as_deref(), tol.resolve()?)
        }
        Command::Alexander(input) => alexander(&input.required()?),
        Command::DumpMatrix { input, which, theta, reduced } => {
            dump_matrix(&input.required()?, which, theta, reduced)
        }
        Command::Verify { input, json, tol } => {
            verify(input.optional()?, json, tol.resolve()?)
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON serialization cannot fail")
}

/// Print a line to stdout. A closed pipe (for example `kashaev ... | head`)
/// ends the process quietly instead of panicking.
fn out_line(s: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{}", s) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::Validation(format!("cannot write stdout: {}", e))),
    }
}

fn info(d: &ColoredDiagram) -> Result<()> {
    let mu = d.num_colors();
    let mut linking = Vec::new();
    for c1 in 1..=mu {
        for c2 in (c1 + 1)..=mu {
            linking.push(serde_json::json!({
                "color_a": c1,
                "color_b": c2,
                "lk": d.linking_between_colors(c1, c2)?,
            }));
        }
    }
    let v = serde_json::json!({
        "crossings": d.num_crossings(),
        "regions": d.num_regions(),
        "colors": mu,
        "link_components": d.num_link_components(),
        "diagram_components": d.num_diagram_components(),
        "connected": d.is_connected(),
        "mark": d.mark(),
        "w_m": d.monochromatic_writhe(),
        "linking": linking,
    });
    out_line(&pretty(&v))
}

fn grid(d: &ColoredDiagram, n: usize, output: Option<&str>, tol: f64) -> Result<()> {
    let results = signature_grid(d, n, tol)?;
    let mu = d.num_colors();
    let mut csv = String::new();
    for i in 1..=mu {
        csv.push_str(&format!("theta{},", i));
    }
    csv.push_str("sigma,eta,near_degenerate\n");
    for r in &results {
        for &t in &r.thetas {
            csv.push_str(&format!("{},", t));
        }
        csv.push_str(&format!("{},{},{}\n", r.sigma, r.eta, r.near_degenerate()));
    }
    match output {
        Some(path) => fs::write(path, csv)
            .map_err(|e| Error::Validation(format!("cannot write {}: {}", path, e)))?,
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|e| Error::Validation(format!("cannot write stdout: {}", e)))?;
        }
    }
    Ok(())
}

fn alexander(d: &ColoredDiagram) -> Result<()> {
    let r = conway(d)?;
    // The square of the Conway function is stored as an unreduced fraction;
    // print the polynomial form when the division happens to be exact.
    let nabla_sq = match r.nabla_sq.to_poly_exact() {
        Ok(p) => p.to_string(),
        Err(_) => r.nabla_sq.to_string(),
    };
    let v = serde_json::json!({
        "nabla_up_to_sign": r.nabla_up_to_sign.to_string(),
        "nabla_sq": nabla_sq,
        "alexander": r.alexander.to_string(),
        "consistency_ok": r.consistency_ok,
    });
    out_line(&pretty(&v))?;
    if !r.consistency_ok {
        return Err(Error::Inconsistency(
            "the two determinant routes disagree; the printed values cannot be trusted".into(),
        ));
    }
    Ok(())
}

fn dump_matrix(
    d: &ColoredDiagram,
    which: WhichMatrix,
    theta: Option<Vec<f64>>,
    reduced: bool,
) -> Result<()> {
    let v = match which {
        WhichMatrix::Tau => {
            let thetas = theta.ok_or_else(|| {
                Error::Validation("--which tau needs evaluation angles: --theta a,b,...".into())
            })?;
            let p = TorusPoint::new(thetas)?;
            if reduced {
                tau_numeric_marked(d, &p)?.to_json()
            } else {
                tau_numeric(d, &p)?.to_json()
            }
        }
        WhichMatrix::TauSym => {
            if reduced {
                tau_symbolic_marked(d)?.to_json()
            } else {
                tau_symbolic(d).to_json()
            }
        }
        WhichMatrix::K => {
            if reduced {
                label_matrix_marked(d)?.to_json()
            } else {
                label_matrix(d).to_json()
            }
        }
    };
    out_line(&pretty(&v))
}

fn verify(d: Option<ColoredDiagram>, json: bool, tol: f64) -> Result<()> {
    let reports: Vec<(String, VerifyReport)> = match d {
        Some(d) => vec![("input".to_string(), verify_diagram(&d, tol)?)],
        None => {
            let mut out = Vec::new();
            for (name, src) in corpus::ALL {
                let d = ColoredDiagram::parse(src)?;
                out.push((name.to_string(), verify_diagram(&d, tol)?));
            }
            out
        }
    };
    let mut failed = 0usize;
    if json {
        let v = serde_json::json!({
            "all_passed": reports.iter().all(|(_, r)| r.all_passed()),
            "diagrams": reports
                .iter()
                .map(|(name, r)| serde_json::json!({ "name": name, "report": r.to_json() }))
                .collect::<Vec<_>>(),
        });
        out_line(&pretty(&v))?;
        failed = reports
            .iter()
            .flat_map(|(_, r)| &r.checks)
            .filter(|c| !c.passed)
            .count();
    } else {
        for (name, report) in &reports {
            out_line(&format!("== {} ==", name))?;
            out_line(&format!("{:<22} {:<6} DETAIL", "CHECK", "STATUS"))?;
            for c in &report.checks {
                let status = if c.skipped {
                    "SKIP"
                } else if c.passed {
                    "PASS"
                } else {
                    failed += 1;
                    "FAIL"
                };
                out_line(&format!("{:<22} {:<6} {}", c.name, status, c.detail))?;
            }
        }
    }
    if failed > 0 {
        return Err(Error::Inconsistency(format!(
            "{} self-check(s) failed",
            failed
        )));
    }
    Ok(())
}
