//! `cpkit`: analyze consistent operator subspaces and classify their
//! assignment and dynamical maps.
//!
//! Exit code 0 means every requested check completed (whatever the
//! verdicts were); nonzero signals operational failures such as parse
//! errors or checks that crashed.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cpkit_core::consistency::SemigroupSpec;
use cpkit_core::error::{Error, Result};
use cpkit_core::linalg::CMatrix;
use cpkit_core::report::{
    run_analyze, run_gallery, AnalysisReport, AnalysisRequest, CheckKind, CheckStatus,
    SubspaceJson, SubspaceSource, DEFAULT_SAMPLES, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "cpkit", version, about = "Consistent subspaces, assignment maps, and complete positivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks against a subspace from a file or the gallery.
    Analyze(AnalyzeArgs),
    /// Work with the built-in example gallery.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// List the available cases and their parameters.
    List,
    /// Build one case and run the analysis pipeline on it.
    Run(GalleryRunArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Subspace source: a JSON file path or `gallery:<name>`.
    #[arg(long)]
    input: String,
    /// Gallery parameter `key=value`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Semigroup: `full`, `local`, or a JSON file describing it.
    #[arg(long)]
    semigroup: Option<String>,
    /// JSON file holding a distinguished unitary.
    #[arg(long)]
    unitary: Option<String>,
    /// Comma-separated checks or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", value_name = "K=V")]
    tolerances: Vec<String>,
    /// Random seed (falls back to CPKIT_SEED, then a fixed default).
    #[arg(long)]
    seed: Option<u64>,
    /// Haar samples for "for all U" spot checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["json", "text"])]
    format: String,
}

#[derive(Args)]
struct GalleryRunArgs {
    /// Case name from `gallery list`.
    name: String,
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value = "text", value_parser = ["json", "text"])]
    format: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => {
            let report = analyze(&args)?;
            emit(&report, &args.format);
            Ok(exit_code(&report))
        }
        Command::Gallery { command } => match command {
            GalleryCommand::List => {
                for info in cpkit_core::gallery::list_cases() {
                    let params: Vec<String> = info
                        .parameters
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    println!(
                        "{:32} {}{}",
                        info.name,
                        info.summary,
                        if params.is_empty() {
                            String::new()
                        } else {
                            format!("  [{}]", params.join(", "))
                        }
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
            GalleryCommand::Run(args) => {
                let params = parse_params(&args.params)?;
                let checks = parse_checks(&args.checks)?;
                let report = run_gallery(
                    &args.name,
                    &params,
                    resolve_seed(args.seed),
                    args.samples.unwrap_or(DEFAULT_SAMPLES),
                    Some(checks),
                )?;
                emit(&report, &args.format);
                Ok(exit_code(&report))
            }
        },
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<AnalysisReport> {
    let params = parse_params(&args.params)?;
    let source = if let Some(name) = args.input.strip_prefix("gallery:") {
        SubspaceSource::Gallery {
            name: name.to_string(),
            params,
        }
    } else {
        let text = std::fs::read_to_string(&args.input)?;
        let json: SubspaceJson = serde_json::from_str(&text)?;
        SubspaceSource::Inline(json)
    };

    let semigroup = match args.semigroup.as_deref() {
        None => None,
        Some("full") => Some(SemigroupSpec::Full),
        Some("local") => Some(SemigroupSpec::Local),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Some(serde_json::from_str(&text)?)
        }
    };

    let unitary: Option<CMatrix> = match &args.unitary {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Some(serde_json::from_str(&text)?)
        }
    };

    run_analyze(AnalysisRequest {
        source,
        semigroup,
        unitary,
        checks: parse_checks(&args.checks)?,
        seed: resolve_seed(args.seed),
        samples: args.samples.unwrap_or(DEFAULT_SAMPLES),
        tolerances: parse_params(&args.tolerances)?,
    })
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("CPKIT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_SEED)
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("expected key=value, got `{item}`"))
        })?;
        let parsed: f64 = value.parse().map_err(|_| {
            Error::InvalidParameter(format!("`{value}` is not a number in `{item}`"))
        })?;
        out.insert(key.to_string(), parsed);
    }
    Ok(out)
}

fn parse_checks(spec: &str) -> Result<Vec<CheckKind>> {
    if spec == "all" {
        return Ok(CheckKind::ALL.to_vec());
    }
    spec.split(',')
        .map(|s| CheckKind::parse(s.trim()))
        .collect()
}

fn exit_code(report: &AnalysisReport) -> ExitCode {
    if report.operational_failures() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn emit(report: &AnalysisReport, format: &str) {
    if format == "json" {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
    } else {
        print_text(report);
    }
}

fn print_text(report: &AnalysisReport) {
    println!("cpkit v{}  seed {}", report.tool_version, report.seed);
    println!("{:-<72}", "");
    for result in &report.results {
        match result.status {
            CheckStatus::Completed => {
                println!("{:16} completed", result.check);
                print_outcome(result.check, &result.outcome);
            }
            CheckStatus::Skipped => {
                println!(
                    "{:16} skipped   ({})",
                    result.check,
                    result.reason.as_deref().unwrap_or("")
                );
            }
            CheckStatus::Failed => {
                println!(
                    "{:16} FAILED    ({})",
                    result.check,
                    result.reason.as_deref().unwrap_or("")
                );
            }
        }
    }
    if !report.expectation_mismatches.is_empty() {
        println!("{:-<72}", "");
        println!("expectation mismatches:");
        for m in &report.expectation_mismatches {
            println!("  - {m}");
        }
    }
}

fn print_outcome(check: &str, outcome: &serde_json::Value) {
    match check {
        "consistency" => {
            println!(
                "                 consistent: {}  (closure dim {})",
                outcome["consistent"], outcome["closure_dim"]
            );
            if let Some(w) = outcome.get("witness").filter(|w| !w.is_null()) {
                println!(
                    "                 witness escape norm: {}",
                    w["escape_norm"]
                );
            }
        }
        "state_spanned" => {
            println!(
                "                 status: {}  ({} states over dim {})",
                outcome["status"], outcome["statesFound"], outcome["dimension"]
            );
        }
        "assignment" => {
            println!(
                "                 dim V = {}, dim V0 = {}, domain dim = {}",
                outcome["dimV"], outcome["dimV0"], outcome["dimDomain"]
            );
        }
        "positive" | "cp" | "cpte" | "cpze" => {
            print!("                 assignment: {}", outcome["assignment"]);
            if let Some(maps) = outcome["dynamicalMaps"].as_array() {
                let yes = maps
                    .iter()
                    .filter(|m| m["verdict"] == "yes")
                    .count();
                print!("   dynamical maps: {}/{} yes", yes, maps.len());
            }
            println!();
        }
        "dynmap" => {
            if let Some(maps) = outcome["maps"].as_array() {
                if let Some(first) = maps.first() {
                    println!(
                        "                 {} maps; first Choi min eigenvalue {}",
                        maps.len(),
                        first["choiMinEigenvalue"]
                    );
                }
            }
        }
        "domain" => {
            if let Some(probes) = outcome["probes"].as_array() {
                for p in probes {
                    println!(
                        "                 {}: {}",
                        p["probe"].as_str().unwrap_or("probe"),
                        p["verdict"]
                    );
                }
            }
        }
        "osr" => {
            println!(
                "                 assignment min coefficient: {}",
                outcome["assignment"]["minCoefficient"]
            );
        }
        _ => {}
    }
}
