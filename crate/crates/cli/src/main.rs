use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dp2_delta::ade::AdeType;
use dp2_delta::catalog::{self, CheckStatus, LemmaReport, LemmaStatus};
use dp2_delta::delta::{self, DeltaCertificate};
use dp2_delta::rational::fmt_q;
use dp2_delta::report::{self, RowStatus};
use dp2_delta::strategy;
use dp2_delta::surface::{build_surface_cached, SingularitySpec, SurfaceError, SurfaceModel};
use dp2_delta::table;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable naming a directory for the embedding cache.
const CACHE_ENV: &str = "DP2_CACHE_DIR";

#[derive(Parser)]
#[command(name = "dp2", version, about = "Exact delta certificates for degree-2 Du Val del Pezzo surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the classification table.
    Table {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify delta for one surface type.
    Compute {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the certificate JSON to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a catalog lemma (or `all`) against exact recomputation.
    Verify {
        lemma: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export the dual graph of negative curves in DOT format.
    Graph {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export the piecewise Zariski data of the flag on one curve as JSON.
    Family {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Curve label, as printed by `graph`.
        #[arg(long)]
        curve: String,
    },
    /// Print the lemma assignment of every table surface.
    Strategy {
        /// Compare with the embedded assignment instead of printing it.
        #[arg(long)]
        check: bool,
    },
}

#[derive(clap::Args)]
struct SurfaceArgs {
    /// Singularity type such as `A5`, `2A3+A1` or `smooth`.
    #[arg(long = "type", value_parser = parse_ade)]
    ade: AdeType,
    /// Number of lines, required when the type has several models.
    #[arg(long)]
    lines: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

fn parse_ade(s: &str) -> Result<AdeType, String> {
    AdeType::parse(s).map_err(|e| e.to_string())
}

/// Outcome of a command that ran to completion.
enum Outcome {
    AllMatch,
    Mismatch,
}

/// Failures that count as misuse rather than a mathematical mismatch.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn model(args: &SurfaceArgs, cache: Option<&Path>) -> Result<SurfaceModel> {
    build_surface_cached(&SingularitySpec::new(args.ade.clone(), args.lines), cache).map_err(|e| match e {
        SurfaceError::UnknownType(_) | SurfaceError::AmbiguousType { .. } | SurfaceError::NoSuchLineCount { .. } => {
            UsageError(e.to_string()).into()
        }
        other => anyhow::Error::new(other),
    })
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_table(format: Format) -> Result<Outcome> {
    let rows = report::table_report(cache_dir().as_deref());
    emit(&match format {
        Format::Text => report::render_text(&rows),
        Format::Csv => report::render_csv(&rows),
        Format::Json => report::render_json(&rows),
    })?;
    Ok(if rows.iter().all(|r| r.status == RowStatus::Match) {
        Outcome::AllMatch
    } else {
        Outcome::Mismatch
    })
}

fn certificate_text(c: &DeltaCertificate) -> String {
    let mut s = format!("delta({}, {} lines) = {}\n", c.ade, c.lines, c.delta);
    for st in &c.strata {
        let upper = st.upper.map(|u| u.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "  {:<28} lower {:<6} upper {:<6} {}", st.name, st.lower.to_string(), upper, st.lemma);
    }
    for a in &c.axioms {
        let _ = writeln!(s, "  axiom {a}");
    }
    s
}

fn cmd_compute(args: &SurfaceArgs, format: Format, output: Option<&Path>) -> Result<Outcome> {
    if format == Format::Csv {
        bail!(UsageError("compute supports --format text or json".into()));
    }
    let m = model(args, cache_dir().as_deref())?;
    let cert = match delta::delta_global(&m) {
        Ok(c) => c,
        Err(e @ delta::DeltaError::UncertifiedStratum { .. }) => {
            eprintln!("{} ({} lines): {e}", m.ade, m.line_count);
            return Ok(Outcome::Mismatch);
        }
        Err(e) => return Err(e.into()),
    };
    let mut json = serde_json::to_string_pretty(&cert)?;
    json.push('\n');
    if let Some(path) = output {
        write_file(path, &json)?;
    }
    emit(&match format {
        Format::Json => json,
        _ => certificate_text(&cert),
    })?;
    // Surfaces in the table must reproduce its delta.
    let published = table::rows()
        .iter()
        .find(|r| r.ade == m.ade && r.expected_model_lines() == m.line_count);
    match published {
        Some(r) if r.delta != cert.delta_q() => {
            eprintln!("published delta is {}", fmt_q(&r.delta));
            Ok(Outcome::Mismatch)
        }
        _ => Ok(Outcome::AllMatch),
    }
}

fn check_status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::NotApplicable => "n/a",
        CheckStatus::Erratum => "erratum",
    }
}

fn lemma_text(r: &LemmaReport) -> String {
    let mut s = format!("{}: {}\n", r.id, r.status);
    if let Some(n) = &r.note {
        let _ = writeln!(s, "  note: {n}");
    }
    if !r.checks.is_empty() {
        let w_name = r.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0).max(5);
        let w_stated = r.checks.iter().map(|c| c.stated.chars().count()).max().unwrap_or(0).max(6);
        let w_comp = r.checks.iter().map(|c| c.computed.chars().count()).max().unwrap_or(0).max(8);
        let _ = writeln!(s, "  {:<w_name$}  {:<w_stated$}  {:<w_comp$}  status", "check", "stated", "computed");
        for c in &r.checks {
            let _ = writeln!(
                s,
                "  {:<w_name$}  {:<w_stated$}  {:<w_comp$}  {}",
                c.name,
                c.stated,
                c.computed,
                check_status(c.status)
            );
            if let (Some(n), true) = (&c.note, c.status != CheckStatus::Pass) {
                let _ = writeln!(s, "      {n}");
            }
        }
    }
    if let Some(first) = r.realizations.first() {
        let _ = writeln!(
            s,
            "  realized by {} flag(s), first on {} of {}",
            r.realizations.len(),
            first.carrier,
            first.surface
        );
    }
    for m in &r.near_misses {
        let _ = writeln!(s, "  near miss: {m}");
    }
    s
}

fn lemma_ok(r: &LemmaReport) -> bool {
    matches!(r.status, LemmaStatus::Match | LemmaStatus::AxiomImported)
}

fn cmd_verify(name: &str, format: Format) -> Result<Outcome> {
    if format == Format::Csv {
        bail!(UsageError("verify supports --format text or json".into()));
    }
    let reports = if name == "all" {
        catalog::verify_all()
    } else {
        let l = catalog::lemma(name).map_err(|e| UsageError(e.to_string()))?;
        vec![catalog::verify_lemma(l, catalog::Atlas::get())]
    };
    let text = match format {
        Format::Json => {
            let mut j = if name == "all" {
                serde_json::to_string_pretty(&reports)?
            } else {
                serde_json::to_string_pretty(&reports[0])?
            };
            j.push('\n');
            j
        }
        _ => {
            let mut s: String = reports.iter().map(lemma_text).collect::<Vec<_>>().join("\n");
            if reports.len() > 1 {
                let count = |st: LemmaStatus| reports.iter().filter(|r| r.status == st).count();
                let _ = writeln!(
                    s,
                    "\n{} lemmas: {} match, {} erratum, {} mismatch, {} axiom-imported",
                    reports.len(),
                    count(LemmaStatus::Match),
                    count(LemmaStatus::Erratum),
                    count(LemmaStatus::Mismatch),
                    count(LemmaStatus::AxiomImported)
                );
            }
            s
        }
    };
    emit(&text)?;
    Ok(if reports.iter().all(lemma_ok) {
        Outcome::AllMatch
    } else {
        Outcome::Mismatch
    })
}

fn cmd_graph(args: &SurfaceArgs, output: Option<&Path>) -> Result<Outcome> {
    let dot = model(args, cache_dir().as_deref())?.to_dot();
    match output {
        Some(p) => write_file(p, &dot)?,
        None => emit(&dot)?,
    }
    Ok(Outcome::AllMatch)
}

fn cmd_family(args: &SurfaceArgs, curve: &str) -> Result<Outcome> {
    let m = model(args, cache_dir().as_deref())?;
    let c = m
        .curve_by_label(curve)
        .ok_or_else(|| UsageError(format!("{} ({} lines) has no curve {curve}", m.ade, m.line_count)))?;
    let flag = delta::curve_flag(&m, c)?;
    let mut j = serde_json::to_string_pretty(&flag.family.to_json())?;
    j.push('\n');
    emit(&j)?;
    Ok(Outcome::AllMatch)
}

fn cmd_strategy(check: bool) -> Result<Outcome> {
    let derived = table::rows()
        .iter()
        .map(|r| strategy::derive(&report::row_model(r, cache_dir().as_deref())))
        .collect::<Result<Vec<_>, _>>()?;
    if !check {
        emit(&strategy::render(&derived))?;
        return Ok(Outcome::AllMatch);
    }
    let frozen = strategy::frozen();
    let mut ok = derived.len() == frozen.len();
    for (d, f) in derived.iter().zip(frozen) {
        if d != f {
            ok = false;
            println!("{} ({} lines): embedded assignment is out of date", d.ade, d.lines);
        }
    }
    if ok {
        println!("strategy: {} surfaces agree", derived.len());
    }
    Ok(if ok { Outcome::AllMatch } else { Outcome::Mismatch })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Table { format } => cmd_table(format),
        Command::Compute { surface, format, output } => cmd_compute(&surface, format, output.as_deref()),
        Command::Verify { lemma, format } => cmd_verify(&lemma, format),
        Command::Graph { surface, output } => cmd_graph(&surface, output.as_deref()),
        Command::Family { surface, curve } => cmd_family(&surface, &curve),
        Command::Strategy { check } => cmd_strategy(check),
    }
}

fn main() -> ExitCode {
    // Clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::AllMatch) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
