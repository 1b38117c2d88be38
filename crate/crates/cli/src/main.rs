use std::path::PathBuf;
use std::process::ExitCode;

use adaptqp::harness::{
    benchmark_primal_vs_dual, emit_report, mean_accuracy, run_setting, BenchConfig, DataSource, ExperimentConfig,
    ReportFormat, ReportRow, Setting,
};
use adaptqp::oracle::run_audit_suite;
use adaptqp::{Error, FeatureFormat, HyperParams};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "adaptqp", version, about = "Max-margin domain transfer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Paired k-fold cross-validation of one or more settings.
    Run(RunArgs),
    /// Primal versus dual W-step timing.
    Bench(BenchArgs),
    /// Brute-force oracle checks on random small instances.
    Audit(AuditArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Synthetic {
    Shifted,
    Toy,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Comma-separated: baseline, source-only, not-transfer, mmdt, mmdtl2.
    #[arg(long, value_delimiter = ',', required = true)]
    setting: Vec<Setting>,
    #[arg(long, requires = "target", conflicts_with = "synthetic")]
    source: Option<PathBuf>,
    #[arg(long, requires = "source")]
    target: Option<PathBuf>,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long)]
    format: Option<FeatureFormat>,
    #[arg(long)]
    synthetic: Option<Synthetic>,
    /// Feature dimensions for `--synthetic shifted`.
    #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    cs: f64,
    #[arg(long, default_value_t = 1.0)]
    ct: f64,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 5)]
    max_outer: usize,
    /// Force the augmented (true) or plain (false) transform for mmdt/mmdtl2.
    #[arg(long)]
    augmented: Option<bool>,
    /// Sweep C ∈ {0.1, 1, 10} (both domains) × D ∈ {0.01, 0.1, 1, 10}.
    #[arg(long)]
    grid: bool,
    /// Report path; `.csv` writes CSV, anything else JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 90)]
    n_target: usize,
    #[arg(long, default_value_t = 200)]
    n_source: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    ct: f64,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Larger dimensions skip the primal path.
    #[arg(long, default_value_t = 64)]
    primal_max_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Writes the per-instance reports as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Audit(args) => cmd_audit(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Error> {
    let sources: Vec<DataSource> = match (&args.source, &args.target, args.synthetic) {
        (Some(s), Some(t), None) => vec![DataSource::Files {
            source: s.clone(),
            target: t.clone(),
            format: args.format,
        }],
        (None, None, Some(Synthetic::Toy)) => vec![DataSource::Toy],
        (None, None, Some(Synthetic::Shifted)) => {
            if args.dims.is_empty() || args.dims.contains(&0) {
                return Err(Error::InvalidArgument("--dims must list positive integers".into()));
            }
            args.dims.iter().map(|&dim| DataSource::Shifted { dim }).collect()
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give either --source and --target, or --synthetic".into(),
            ))
        }
    };
    let grid: Vec<(f64, f64, f64)> = if args.grid {
        [0.1, 1.0, 10.0]
            .iter()
            .flat_map(|&c| [0.01, 0.1, 1.0, 10.0].map(|d| (c, c, d)))
            .collect()
    } else {
        vec![(args.cs, args.ct, args.d)]
    };

    let mut rows: Vec<ReportRow> = Vec::new();
    println!("{:<13} {:>5} {:>6} {:>6} {:>6} {:>9}", "setting", "dim", "cs", "ct", "d", "accuracy");
    for data in &sources {
        for &setting in &args.setting {
            for &(cs, ct, d) in &grid {
                let cfg = ExperimentConfig {
                    folds: args.folds,
                    hyperparams: HyperParams {
                        c_source: cs,
                        c_target: ct,
                        d_weight: d,
                        max_outer_iters: args.max_outer,
                        ..HyperParams::default()
                    },
                    augmented: args.augmented,
                    ..ExperimentConfig::new(setting, data.clone(), args.seed)
                };
                let fold_rows = run_setting(&cfg)?;
                println!(
                    "{:<13} {:>5} {:>6} {:>6} {:>6} {:>9.4}",
                    setting.as_str(),
                    fold_rows[0].dimension,
                    cs,
                    ct,
                    d,
                    mean_accuracy(&fold_rows)
                );
                rows.extend(fold_rows);
            }
        }
    }
    if let Some(out) = &args.out {
        emit_report(&rows, ReportFormat::from_path(out), out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let cfg = BenchConfig {
        dims: args.dims,
        n_target: args.n_target,
        n_source: args.n_source,
        seed: args.seed,
        repeats: args.repeats,
        hyperparams: HyperParams {
            c_target: args.ct,
            d_weight: args.d,
            ..HyperParams::default()
        },
        primal_max_dim: args.primal_max_dim,
    };
    if cfg.dims.is_empty() || cfg.dims.contains(&0) {
        return Err(Error::InvalidArgument("--dims must list positive integers".into()));
    }
    let rows = benchmark_primal_vs_dual(&cfg)?;
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |s| format!("{s:.4}"));
    println!("{:>5} {:<7} {:>10} {:>12} {:>11} {:>10}", "dim", "path", "setup", "optimization", "calculation", "total");
    for r in &rows {
        if r.skipped {
            println!("{:>5} {:<7} skipped", r.dimension, "primal");
            continue;
        }
        let path = serde_json::to_value(r.path)?;
        println!(
            "{:>5} {:<7} {:>10} {:>12} {:>11} {:>10}",
            r.dimension,
            path.as_str().unwrap_or_default(),
            fmt(r.setup_seconds),
            fmt(r.optimization_seconds),
            fmt(r.calculation_seconds),
            fmt(r.total_seconds)
        );
    }
    if let Some(out) = &args.out {
        emit_report(&rows, ReportFormat::from_path(out), out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit(args: AuditArgs) -> Result<ExitCode, Error> {
    if args.count == 0 {
        return Err(Error::InvalidArgument("--count must be positive".into()));
    }
    let audits = run_audit_suite(args.seed, args.count)?;
    let mut failed = 0;
    for a in &audits {
        if !a.passed {
            failed += 1;
        }
        println!(
            "instance {:>3} M_S={} M_T={} n_T={:>2} K={} D={:<4} w_agreement={:.2e} gap={:.2e} kkt={:.2e} {}",
            a.index,
            a.source_dim,
            a.target_dim,
            a.n_target,
            a.n_classes,
            a.d_weight,
            a.w_agreement,
            a.audit.duality_gap,
            a.audit.kkt_residual,
            if a.passed { "ok" } else { "FAILED" }
        );
    }
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&audits)?)?;
    }
    println!("{} of {} instances passed", audits.len() - failed, audits.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
