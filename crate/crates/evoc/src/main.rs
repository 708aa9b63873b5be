use clap::{Parser, Subcommand};
use evoc::config::ConfigFile;
use evoc::experiments::{self, derive_seeds};
use evoc::fitness::{chain_optimum_dp, eval_ref6x3, global_optimum_enumerate, DEFAULT_CHAIN_BETA};
use evoc::output;
use evoc::plot;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "evoc", about = "Cultural evolution simulator: invention vs. imitation on a grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write timeseries.csv + run_meta.json
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the (C, p) grid sweep from the config's `sweep` block
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Paired runs with and without self-regulation
    SrCompare {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the replicate count in the config's `sr_compare` block
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the exact global optimum of a fitness landscape
    Oracle {
        #[arg(long)]
        fitness: String,
        /// Steps per action for the chained landscape
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Render CSV columns as an SVG line chart
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated column names
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
    },
}

/// Exit codes: 0 success, 2 usage/config error, 3 I/O error.
enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) => m,
        }
    }
}

fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    ConfigFile::from_json(&text).map_err(|e| CliError::Config(e.to_string()))
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_run(config: &Path, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    let file = load_config(config)?;
    let mut cfg = file.resolve().map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let result = experiments::run_sim(&cfg, cfg.seed).map_err(|e| CliError::Config(e.to_string()))?;
    write_out(out, "timeseries.csv", &output::timeseries_csv(&result))?;
    write_out(out, "run_meta.json", &output::run_meta_json(&cfg, cfg.seed))
}

fn cmd_sweep(config: &Path, out: &Path) -> Result<(), CliError> {
    let file = load_config(config)?;
    let cfg = file.resolve().map_err(|e| CliError::Config(e.to_string()))?;
    let block = file
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("config has no `sweep` block".to_string()))?;
    if block.c_grid.is_empty() || block.p_grid.is_empty() || block.replicates == 0 {
        return Err(CliError::Config("sweep grids must be non-empty and replicates >= 1".into()));
    }
    let cells = experiments::sweep(&cfg, &block.c_grid, &block.p_grid, block.replicates)
        .map_err(|e| CliError::Config(e.to_string()))?;
    write_out(out, "sweep.csv", &output::sweep_csv(&cells))
}

fn cmd_sr_compare(config: &Path, replicates: Option<usize>, out: &Path) -> Result<(), CliError> {
    let file = load_config(config)?;
    let cfg = file.resolve().map_err(|e| CliError::Config(e.to_string()))?;
    let replicates = replicates
        .or_else(|| file.sr_compare.as_ref().map(|b| b.replicates))
        .ok_or_else(|| {
            CliError::Config("need --replicates or an `sr_compare` block in the config".to_string())
        })?;
    if replicates == 0 {
        return Err(CliError::Config("replicates must be >= 1".into()));
    }
    let seeds = derive_seeds(cfg.seed, replicates);
    let (pairs, summary) =
        experiments::sr_compare(&cfg, &seeds).map_err(|e| CliError::Config(e.to_string()))?;
    write_out(out, "sr_pairs.csv", &output::sr_pairs_csv(&pairs))?;
    write_out(out, "sr_summary.csv", &output::sr_summary_csv(&summary))
}

fn cmd_oracle(fitness: &str, steps: usize) -> Result<(), CliError> {
    match fitness {
        "ref6x3" => {
            let (max, count) = global_optimum_enumerate(eval_ref6x3, 6, 3)
                .map_err(|e| CliError::Config(e.to_string()))?;
            println!("max={max} optima_count={count}");
            Ok(())
        }
        "chain6x3" => {
            if steps == 0 {
                return Err(CliError::Config("--steps must be >= 1".into()));
            }
            let max = chain_optimum_dp(steps, DEFAULT_CHAIN_BETA);
            println!("max={max}");
            Ok(())
        }
        other => Err(CliError::Config(format!("unknown fitness function `{other}`"))),
    }
}

fn cmd_plot(input: &Path, out: &Path, columns: &[String]) -> Result<(), CliError> {
    if columns.is_empty() {
        return Err(CliError::Config("--columns must name at least one column".into()));
    }
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.display())))?;
    let svg = plot::render_csv_columns(&text, columns).map_err(|e| CliError::Config(e.to_string()))?;
    std::fs::write(out, svg).map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, seed, out } => cmd_run(config, *seed, out),
        Command::Sweep { config, out } => cmd_sweep(config, out),
        Command::SrCompare { config, replicates, out } => cmd_sr_compare(config, *replicates, out),
        Command::Oracle { fitness, steps } => cmd_oracle(fitness, *steps),
        Command::Plot { input, out, columns } => cmd_plot(input, out, columns),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
