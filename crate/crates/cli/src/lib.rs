//! `contact-tensor`: reports, sweeps and catalog exports for frame-defined
//! almost contact metric manifolds.
//!
//! Exit codes: 0 success, 1 usage or manifest error, 2 validation failure
//! (axiom violations under `--strict`, or a structure that is not almost
//! contact metric), 3 failed internal self-check.

pub mod locate;
pub mod manifest;
pub mod report;
pub mod sweep;
pub mod text;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use contact_tensor::catalog;
use serde::Serialize;

use manifest::{IngestError, Manifest, Violation};
use text::Style;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_SELF_CHECK: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "contact-tensor",
    version,
    about = "Curvature and classification of frame-defined contact metric manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReportOpts {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with status 2 if any structural axiom fails.
    #[arg(long)]
    pub strict: bool,
    /// Only validate and list every axiom violation.
    #[arg(long)]
    pub lint: bool,
    /// Substitute a parameter, e.g. `--set lambda=1/2`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for a manifest file.
    Report {
        file: PathBuf,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Classify a template over a (lambda, mu) grid.
    Sweep {
        file: PathBuf,
        /// Comma-separated rationals [default: 1/4,1/2,1,3/2].
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Comma-separated rationals [default: -1,0,1,2].
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Report for a built-in catalog entry.
    Demo {
        id: String,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Write a catalog entry as a manifest.
    Export {
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let style = Style::from_env();
    let result = match cli.command {
        Command::Report { file, opts } => match manifest::read(&file) {
            Ok((m, map)) => Ok(report(&m, Some(&map), &opts, &style, out, err)),
            Err(e) => Err(e.to_string()),
        },
        Command::Demo { id, opts } => match catalog::entry(&id) {
            Ok(entry) => Ok(report(
                &manifest::export(&entry),
                None,
                &opts,
                &style,
                out,
                err,
            )),
            Err(e) => Err(e.to_string()),
        },
        Command::Export { id, output } => export(&id, output, out),
        Command::Sweep {
            file,
            lambda,
            mu,
            format,
        } => sweep_cmd(&file, lambda, mu, format, out, err),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[derive(Serialize)]
struct LintOutput<'a> {
    name: &'a str,
    violations: &'a [Violation],
}

/// The report pipeline shared by `report` and `demo`.
pub fn report(
    m: &Manifest,
    map: Option<&locate::SourceMap>,
    opts: &ReportOpts,
    style: &Style,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let loaded = match manifest::parse_bindings(&opts.set).and_then(|b| manifest::load(m, map, &b))
    {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let strict_fail = opts.strict && !loaded.violations.is_empty();
    if opts.lint {
        let _ = match opts.format {
            Format::Json => {
                let v = LintOutput {
                    name: &m.name,
                    violations: &loaded.violations,
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("lint output serializes")
                )
            }
            Format::Text if loaded.violations.is_empty() => {
                writeln!(out, "{}: no violations", m.name)
            }
            Format::Text => loaded
                .violations
                .iter()
                .try_for_each(|v| writeln!(out, "{v}")),
        };
        return if strict_fail {
            EXIT_VALIDATION
        } else {
            EXIT_OK
        };
    }
    let analysis = match report::analyze(&loaded) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let r = &analysis.report;
    let _ = match opts.format {
        Format::Json => out.write_all(r.to_json().as_bytes()),
        Format::Text => out.write_all(text::render(r, style).as_bytes()),
    };
    if !r.self_checks.passed {
        let _ = writeln!(
            err,
            "error: {} internal self-check(s) failed",
            r.self_checks.failures.len()
        );
        return EXIT_SELF_CHECK;
    }
    if strict_fail {
        for v in &loaded.violations {
            let _ = writeln!(err, "{v}");
        }
        return EXIT_VALIDATION;
    }
    EXIT_OK
}

fn export(id: &str, output: Option<PathBuf>, out: &mut dyn Write) -> Result<u8, String> {
    let entry = catalog::entry(id).map_err(|e| e.to_string())?;
    let json = manifest::export(&entry).to_json();
    match output {
        Some(path) => std::fs::write(&path, json)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => out.write_all(json.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(EXIT_OK)
}

fn sweep_cmd(
    file: &std::path::Path,
    lambda: Option<String>,
    mu: Option<String>,
    format: TableFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, String> {
    let grid = |flag: &str, raw: Option<String>, default: &[&str]| {
        sweep::parse_grid(flag, &raw.unwrap_or_else(|| default.join(",")))
    };
    let rows = (|| -> Result<_, IngestError> {
        let (template, _) = manifest::read(file)?;
        let l = grid("--lambda", lambda, &sweep::DEFAULT_LAMBDA)?;
        let m = grid("--mu", mu, &sweep::DEFAULT_MU)?;
        sweep::run(&template, &l, &m)
    })()
    .map_err(|e| e.to_string())?;
    let text = match format {
        TableFormat::Csv => sweep::to_csv(&rows),
        TableFormat::Json => sweep::to_json(&rows),
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    let failed = rows
        .iter()
        .filter(|r| r.self_checks_passed == Some(false))
        .count();
    if failed > 0 {
        let _ = writeln!(err, "error: self-checks failed on {failed} grid point(s)");
        return Ok(EXIT_SELF_CHECK);
    }
    Ok(EXIT_OK)
}
