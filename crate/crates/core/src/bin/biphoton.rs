use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use biphoton::experiment::{self, ConfigError, ExperimentConfig, Preset, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "biphoton", version, about = "Biphoton interferometry simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file or a preset.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Output directory.
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
        /// Seed for Poisson counting noise; implies --monte-carlo.
        #[arg(long, value_parser = clap::value_parser!(u64).range(..=experiment::MAX_SEED))]
        seed: Option<u64>,
        /// Draw Poisson counts for every sample (seed defaults to 0).
        #[arg(long)]
        monte_carlo: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the config files behind a preset.
    ShowPreset { preset: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

enum Failure {
    Config(String),
    Numerical(String),
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> Result<Vec<ExperimentConfig>, Failure> {
    let cfgs = match (config, preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            vec![ExperimentConfig::parse(&text).map_err(|e| Failure::Config(e.to_string()))?]
        }
        (None, Some(name)) => name
            .parse::<Preset>()
            .map_err(|e: ConfigError| Failure::Config(e.to_string()))?
            .configs(),
        (None, None) => unreachable!("clap requires one of --config/--preset"),
    };
    Ok(cfgs)
}

fn run(
    config: Option<PathBuf>,
    preset: Option<String>,
    out: PathBuf,
    seed: Option<u64>,
    monte_carlo: bool,
) -> Result<(), Failure> {
    let mut cfgs = load(config, preset)?;
    if monte_carlo || seed.is_some() {
        let seed = seed.unwrap_or(0);
        cfgs = cfgs.into_iter().map(|c| c.with_poisson(seed)).collect();
    }
    for cfg in &cfgs {
        cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    }
    for cfg in &cfgs {
        let output = experiment::run(cfg).map_err(|e| Failure::Numerical(format!("{}: {e}", cfg.stem())))?;
        let (csv, report) = experiment::write_outputs(&out, &output)
            .map_err(|e| Failure::Config(format!("cannot write to {}: {e}", out.display())))?;
        let r = &output.report;
        let summary = match (&r.fringe, &r.dip, &r.oracle) {
            (Some(f), _, _) => format!("period {:.2} nm, visibility {:.4}", f.period, f.visibility),
            (_, Some(d), _) => format!("dip visibility {:.4}, centre {:.3} um", d.visibility, d.center * 1e-3),
            (_, _, Some(t)) => format!("max oracle deviation {:.3e}", t.max_deviation()),
            _ => String::new(),
        };
        eprintln!(
            "{}: {summary} ({:.2} s) -> {}, {}",
            cfg.stem(),
            r.wall_time.as_secs_f64(),
            csv.display(),
            report.display()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run {
            config,
            preset,
            out,
            seed,
            monte_carlo,
            format: Format::Csv,
        } => run(config, preset, out, seed, monte_carlo),
        Command::ShowPreset { preset } => match preset.parse::<Preset>() {
            Ok(p) => {
                for cfg in p.configs() {
                    println!("# {}\n{}", cfg.stem(), cfg.to_text());
                }
                Ok(())
            }
            Err(e) => Err(Failure::Config(e.to_string())),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
