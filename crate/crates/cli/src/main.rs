mod config;
mod figures;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use relay_switching::montecarlo::{analytic_values, compare_worst_case, run_experiment, sweep};
use relay_switching::{ExperimentConfig, Scheme, SweepAxis};

use config::{CliConfigFile, ConfigError, SeedSpec};
use report::{report_rows, write_csv, Row};

/// Relay switching rates of opportunistic relaying and DSSC-B: closed
/// forms, Monte-Carlo checks and figure data.
#[derive(Parser)]
#[command(name = "relay-switching", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form switching rate, activation times and occupancies.
    Analytic(RunArgs),
    /// Replicated simulation compared against the closed forms.
    Simulate(RunArgs),
    /// DSSC-B at its worst-case threshold next to OR.
    Compare(RunArgs),
    /// One simulation per value of a swept parameter.
    Sweep(SweepArgs),
    /// Normalized curves of the five figures, one CSV per curve.
    Figures(FigureArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Base seed (`auto` draws one from OS entropy).
    #[arg(long)]
    seed: Option<SeedSpec>,
    /// Overrides the replication count of the file.
    #[arg(long)]
    replications: Option<usize>,
    /// Directory for the CSV output (also printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// doppler_ratio, L, threshold or gamma; overrides the file.
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated values (linear units).
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number; repeat for several. All five when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    figure: Vec<u8>,
    #[arg(long, default_value = "figures")]
    out: PathBuf,
    /// Add Monte-Carlo columns next to the closed forms.
    #[arg(long)]
    simulate: bool,
    #[arg(long, default_value_t = 10)]
    replications: usize,
    /// Simulated seconds per replication.
    #[arg(long, default_value_t = 10.0)]
    duration: f64,
    #[arg(long, default_value = "1")]
    seed: SeedSpec,
}

struct Loaded {
    file: CliConfigFile,
    seed: u64,
}

impl RunArgs {
    /// Reads the file and applies the command-line overrides.
    fn load(&self) -> Result<Loaded> {
        let mut file = CliConfigFile::load(&self.config)?;
        if let Some(r) = self.replications {
            file.replications = r;
        }
        let seed = self.seed.unwrap_or(file.seed).resolve();
        file.seed = SeedSpec::Fixed(seed);
        if let Some(out) = &self.out {
            file.out_dir = Some(out.display().to_string());
        }
        Ok(Loaded { file, seed })
    }
}

impl Loaded {
    /// Prints the resolved file when requested; true means "stop here".
    fn dump(&self, requested: bool) -> Result<bool> {
        if requested {
            println!("{}", serde_json::to_string_pretty(&self.file)?);
        }
        Ok(requested)
    }

    fn experiment(&self) -> Result<ExperimentConfig> {
        self.file.experiment(self.seed)
    }

    fn out_dir(&self) -> Option<PathBuf> {
        self.file.out_dir.as_ref().map(PathBuf::from)
    }
}

fn emit(out_dir: Option<&Path>, file_name: &str, comments: &[String], rows: &[Row]) -> Result<()> {
    write_csv(io::stdout().lock(), comments, rows)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(file_name);
        let file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = io::BufWriter::new(file);
        write_csv(&mut w, comments, rows)?;
        w.flush()?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Parameter column for single-experiment commands.
fn experiment_param(cfg: &ExperimentConfig) -> (&'static str, f64) {
    match cfg.threshold {
        Some(t) => ("threshold", t.value()),
        None => ("L", cfg.topology.len() as f64),
    }
}

fn cmd_analytic(args: &RunArgs) -> Result<()> {
    let loaded = args.load()?;
    if loaded.dump(args.dump_config)? {
        return Ok(());
    }
    let cfg = loaded.experiment()?;
    let a = analytic_values(&cfg)?;
    let scheme = cfg.scheme.name();
    let param = experiment_param(&cfg);
    let mut values = vec![
        ("switch_rate_hz".to_string(), a.switch_rate),
        ("activation_time_s".to_string(), a.activation_time),
    ];
    for (i, v) in a.relay_activation_time.iter().enumerate() {
        values.push((format!("activation_time_s_relay{}", i + 1), *v));
    }
    for (i, v) in a.occupancy.iter().enumerate() {
        values.push((format!("occupancy_relay{}", i + 1), *v));
    }
    let rows: Vec<Row> = values
        .into_iter()
        .map(|(q, v)| Row {
            analytic: v,
            ..Row::analytic(scheme, &q, param, 0.0)
        })
        .collect();
    emit(loaded.out_dir().as_deref(), "analytic.csv", &[], &rows)
}

fn cmd_simulate(args: &RunArgs) -> Result<()> {
    let loaded = args.load()?;
    if loaded.dump(args.dump_config)? {
        return Ok(());
    }
    let cfg = loaded.experiment()?;
    let report = run_experiment(&cfg)?;
    let mut comments = Vec::new();
    if report.low_power {
        comments.push("low power: no switch events were observed".into());
    }
    let rows = report_rows(&report, experiment_param(&cfg));
    emit(
        loaded.out_dir().as_deref(),
        "simulate.csv",
        &comments,
        &rows,
    )
}

fn cmd_compare(args: &RunArgs) -> Result<()> {
    let mut loaded = args.load()?;
    if loaded.dump(args.dump_config)? {
        return Ok(());
    }
    // The template only supplies topology, sampling and seeds.
    loaded.file.scheme = Scheme::Or;
    loaded.file.threshold = None;
    let cmp = compare_worst_case(&loaded.experiment()?)?;
    let param = ("threshold", cmp.threshold.value());
    let mut rows = report_rows(&cmp.dssc, param);
    rows.extend(report_rows(&cmp.or, param));
    let comments = vec![
        format!("worst-case threshold T* = {:e}", cmp.threshold.value()),
        format!(
            "DSSC-B below OR: analytic {}, simulated {}",
            cmp.analytic_ordering_holds, cmp.simulated_ordering_holds
        ),
    ];
    emit(loaded.out_dir().as_deref(), "compare.csv", &comments, &rows)?;
    if !cmp.analytic_ordering_holds {
        anyhow::bail!("analytic DSSC-B rate at T* is not below the OR rate");
    }
    if !cmp.simulated_ordering_holds {
        eprintln!("warning: simulated DSSC-B rate at T* is not below the simulated OR rate");
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let mut loaded = args.run.load()?;
    if let (Some(axis), Some(values)) = (&args.axis, &args.values) {
        loaded.file.sweep = Some(config::SweepSpec {
            axis: axis.clone(),
            values: values.clone(),
        });
    } else if args.axis.is_some() || args.values.is_some() {
        return Err(ConfigError("--axis and --values must be given together".into()).into());
    }
    if loaded.dump(args.run.dump_config)? {
        return Ok(());
    }
    let (axis, values): (SweepAxis, Vec<f64>) = loaded
        .file
        .sweep_axis()?
        .ok_or_else(|| ConfigError("no sweep: add a `sweep` section or --axis/--values".into()))?;
    let template = loaded.experiment()?;
    let rows: Vec<Row> = sweep(&template, axis, &values)?
        .iter()
        .flat_map(|row| report_rows(&row.report, (axis.name(), row.value)))
        .collect();
    emit(loaded.out_dir().as_deref(), "sweep.csv", &[], &rows)
}

fn cmd_figures(args: &FigureArgs) -> Result<()> {
    let figures = if args.figure.is_empty() {
        vec![1, 2, 3, 4, 5]
    } else {
        args.figure.clone()
    };
    let sim = figures::SimSettings {
        simulate: args.simulate,
        replications: args.replications,
        duration_s: args.duration,
        seed: args.seed.resolve(),
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    for n in figures {
        for curve in figures::figure(n, &sim)? {
            let path = args.out.join(&curve.file_name);
            let mut w = io::BufWriter::new(
                fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?,
            );
            write_csv(&mut w, &curve.comments, &curve.rows)?;
            w.flush()?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

/// 2 for bad input, 3 for failures while running.
fn exit_code(err: &anyhow::Error) -> u8 {
    let config = err.chain().any(|e| {
        e.is::<ConfigError>()
            || matches!(
                e.downcast_ref::<relay_switching::Error>(),
                Some(
                    relay_switching::Error::Config(_)
                        | relay_switching::Error::Resolution { .. }
                        | relay_switching::Error::UnsupportedTopology { .. }
                )
            )
    });
    if config {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analytic(a) => cmd_analytic(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figures(a) => cmd_figures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
