use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use stsdelay::config::parse_models;
use stsdelay::{emit_outputs, load_config, load_dataset, run_scenario, ExperimentConfig, HarnessError, Scenario};

/// Delay-versus-frequency sweeps for a microwave pulse crossing a narrowed waveguide.
#[derive(Parser)]
#[command(name = "stsdelay", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the models, compare with data and write curves.csv, residues.csv and figure.svg.
    Run(RunArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["scenario", "config"])))]
struct RunArgs {
    /// Built-in preset.
    #[arg(long, value_parser = |s: &str| s.parse::<Scenario>())]
    scenario: Option<Scenario>,
    /// Configuration file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Measured delays, CSV with header `nu_ghz,delay_ns,run`.
    #[arg(long, value_name = "PATH")]
    data: Option<PathBuf>,
    /// Output directory (overrides the configuration).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated subset of sts,pt,bl.
    #[arg(long, value_name = "LIST")]
    models: Option<String>,
    /// Launch distance before the narrowing, in m.
    #[arg(long = "ell-m", value_name = "X")]
    ell_m: Option<f64>,
}

fn configure(args: &RunArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match (&args.config, args.scenario) {
        (Some(path), _) => load_config(path)?,
        (None, Some(s)) => ExperimentConfig::preset(s),
        (None, None) => unreachable!("clap requires one input"),
    };
    if let Some(list) = &args.models {
        let models = parse_models(list).map_err(|m| HarnessError::Validation(format!("--models: {m}")))?;
        cfg.set_models(&models)?;
    }
    if let Some(ell) = args.ell_m {
        cfg.ell = ell;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &RunArgs) -> Result<(), HarnessError> {
    let cfg = configure(args)?;
    let data = match &args.data {
        Some(path) => {
            let d = load_dataset(path)?;
            if d.is_empty() {
                eprintln!("warning: {} has no data points; residues are skipped", path.display());
            }
            Some(d)
        }
        None => None,
    };

    let cut = cfg.cutoffs();
    println!(
        "geometry: L = {:.3} m, b = {:.2} mm, b' = {:.2} mm; source: lambda = {:.1} MHz, ell = {} m",
        cfg.geometry.length,
        cfg.geometry.b * 1e3,
        cfg.geometry.b_prime * 1e3,
        cfg.lambda / 1e6,
        cfg.ell
    );
    println!("cutoffs: nu_out = {:.4} GHz, nu_in = {:.4} GHz", cut.nu_out / 1e9, cut.nu_in / 1e9);
    println!(
        "sweep: {:.4} .. {:.4} GHz, step {:.1} MHz, {} points; models {}",
        cfg.sweep.start / 1e9,
        cfg.sweep.stop / 1e9,
        cfg.sweep.step / 1e6,
        cfg.sweep.len(),
        cfg.models.iter().map(|m| m.label()).collect::<Vec<_>>().join(",")
    );

    let result = run_scenario(&cfg, data.as_ref())?;
    for report in &result.residues {
        println!(
            "residues, run '{}' ({} points used, {} skipped):",
            report.run, report.points_used, report.points_skipped
        );
        for e in &report.entries {
            let norm = e.delta_normalized.map_or("undefined".to_string(), |d| format!("{d:.4}"));
            println!("  {:<3} delta = {:.4} ns  normalized = {norm}", e.model.label(), e.delta_raw * 1e9);
        }
        if report.is_degenerate() {
            println!("  all residues vanish; normalization undefined");
        } else {
            let ranking: Vec<&str> = report.ranking().iter().map(|m| m.label()).collect();
            println!("  ranking (best first): {}", ranking.join(" < "));
        }
    }

    let paths = emit_outputs(&result, data.as_ref(), &cfg.out_dir)?;
    println!("wrote {}", paths.curves.display());
    if let Some(p) = &paths.residues {
        println!("wrote {}", p.display());
    }
    println!("wrote {}", paths.figure.display());

    let failures = result.failures();
    if !failures.is_empty() {
        for (model, nu, e) in &failures {
            eprintln!("{model} at {:.6} GHz: {e}", nu / 1e9);
        }
        return Err(HarnessError::NumericFailures {
            failed: failures.len(),
            total: result.evaluations(),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
