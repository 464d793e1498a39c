//! Command-line front end. Exit codes: 0 all checks pass, 1 input error,
//! 2 property violation, 3 internal error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::classicwh::{self, LaurentSymbol};
use crate::conemetric::MetricConfig;
use crate::curvedcones::{lorentz_as_siegel, siegel_is_extreme};
use crate::document::{parse_cone_file, ConeKind};
use crate::report::{self, AnalysisError, AnalysisOptions, AnalysisReport, Sections};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "conestrat", version, about = "Boundary stratifications, index complexes and metrics of convex cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Target number of sphere samples for the metric.
    #[arg(long, global = true)]
    pub metric_samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 5e-3)]
    pub metric_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full analysis of a cone document.
    Analyze {
        cone: PathBuf,
        /// Include the metric suite.
        #[arg(long)]
        metric: bool,
        /// Directions sampled on the sphere of rays of a Lorentz cone.
        #[arg(long, default_value_t = 720)]
        lorentz_samples: usize,
    },
    /// Strata and incidence spaces.
    Stratify { cone: PathBuf },
    /// Augmented cellular complex and its homology.
    Complex { cone: PathBuf },
    /// Local smoothness verdict.
    Smooth { cone: PathBuf },
    /// Distance between two polyhedral cones and the polarity check.
    Metric { a: PathBuf, b: PathBuf },
    /// Winding number and Toeplitz index of a Laurent polynomial symbol.
    Classical {
        /// Terms `k=re` or `k=re,im`, e.g. `--term 0=1 --term 1=0.5`.
        #[arg(long = "term", required = true, allow_hyphen_values = true, value_parser = parse_term)]
        terms: Vec<(i64, Complex64)>,
        /// Columns of the truncation; defaults to the smallest admissible size.
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Siegel cone checks: a document, or the Lorentz identification for `--m`.
    Siegel {
        cone: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

fn parse_term(s: &str) -> Result<(i64, Complex64), String> {
    let (k, c) = s.split_once('=').ok_or("expected k=re or k=re,im")?;
    let k: i64 = k.trim().parse().map_err(|e| format!("degree: {e}"))?;
    let mut parts = c.split(',');
    let re: f64 = parts.next().unwrap_or("").trim().parse().map_err(|e| format!("real part: {e}"))?;
    let im: f64 = match parts.next() {
        Some(x) => x.trim().parse().map_err(|e| format!("imaginary part: {e}"))?,
        None => 0.0,
    };
    Ok((k, Complex64::new(re, im)))
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = if e.is_input_error() { EXIT_INPUT } else { EXIT_INTERNAL };
        Failure { code, message: e.to_string() }
    }
}

fn load(path: &Path) -> Result<crate::document::ConeDocument, Failure> {
    parse_cone_file(path).map_err(Failure::input)
}

/// Runs a parsed command and returns the report.
pub fn execute(cli: &Cli) -> Result<AnalysisReport, Failure> {
    let common = &cli.common;
    let metric =
        MetricConfig { sphere_samples_per_dim: common.metric_samples, tolerance: common.metric_tol, ..Default::default() };
    let options = |sections: Sections, lorentz_samples: usize| AnalysisOptions {
        sections,
        metric: metric.clone(),
        seed: common.seed,
        lorentz_samples,
    };
    match &cli.command {
        Command::Analyze { cone, metric: with_metric, lorentz_samples } => {
            let sections = Sections { metric: *with_metric, ..Sections::ALL_BUT_METRIC };
            Ok(report::analyze(&load(cone)?, &options(sections, *lorentz_samples))?)
        }
        Command::Stratify { cone } => Ok(report::analyze(&load(cone)?, &options(Sections::STRATIFY, 720))?),
        Command::Complex { cone } => Ok(report::analyze(&load(cone)?, &options(Sections::COMPLEX, 720))?),
        Command::Smooth { cone } => Ok(report::analyze(&load(cone)?, &options(Sections::SMOOTH, 720))?),
        Command::Metric { a, b } => Ok(report::metric_report(&load(a)?, &load(b)?, &metric)?),
        Command::Classical { terms, truncation } => {
            let symbol = LaurentSymbol::new(terms.iter().copied());
            let w = classicwh::winding_number(&symbol, classicwh::min_grid(&symbol).max(256)).map_err(Failure::input)?;
            let n = truncation.unwrap_or_else(|| classicwh::min_truncation(&symbol, w.winding));
            let check = classicwh::index_theorem_check(&symbol, n).map_err(Failure::input)?;
            Ok(report::classical_report(check))
        }
        Command::Siegel { cone, m, samples } => match (cone, m) {
            (Some(path), None) => {
                let doc = load(path)?;
                if !matches!(doc.kind, ConeKind::Siegel(_)) {
                    return Err(Failure::input(format!("{} is not a Siegel cone document", path.display())));
                }
                Ok(report::analyze(&doc, &options(Sections::ALL_BUT_METRIC, 720))?)
            }
            (None, Some(m)) if *m >= 1 => Ok(lorentz_identification_report(*m, *samples, common.seed)),
            _ => Err(Failure::input("pass either a Siegel cone document or --m with m ≥ 1")),
        },
    }
}

/// Membership agreement across the identification with the Lorentz cone, and the
/// extreme classifier on boundary and interior points.
pub fn lorentz_identification_report(m: usize, samples: usize, seed: u64) -> AnalysisReport {
    let id = lorentz_as_siegel(m);
    let (agree, total) = id.membership_agreement(samples, seed, 1e-9);
    let mut section = report::siegel_section(&id.cone, 100);
    // (0, 1, 0) spans the extreme ray with t = 0
    let mut axis = vec![0.0; m];
    axis.extend([1.0, 0.0]);
    let axis_ok = siegel_is_extreme(&axis, &id.cone, 1e-12).unwrap_or(false);
    section.boundary_samples += 1;
    section.classifier_agreements += usize::from(axis_ok);
    let mut r = AnalysisReport::new(&format!("siegel_lorentz_m{m}"), "siegel", m + 2);
    r.notes.push(format!("membership agreement with the Lorentz cone: {agree}/{total} at tolerance 1e-9"));
    r.check("membership agreement ≥ 99%", agree * 100 >= total * 99, total, true);
    let classified = section.classifier_agreements == section.boundary_samples;
    r.check("extreme classifier", classified, section.boundary_samples, true);
    r.siegel = Some(section);
    r.finish()
}

pub fn render(r: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Markdown => report::to_markdown(r),
    }
}

/// Entry point used by the binary; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return EXIT_INTERNAL;
        }
    }
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    let text = render(&report, cli.common.format);
    match &cli.common.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INTERNAL;
            }
        }
        None => print!("{text}"),
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "{} check failed: {} ({} instances)",
            if c.enforced { "enforced" } else { "informational" },
            c.name,
            c.instances
        );
    }
    if report.all_passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}
