use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ddlink::harness::{
    exit_code, loading_tables, optimize_knob, parse_config, rows_exit_code, run_experiment, summary_table,
    write_csv, write_csv_file, ExperimentConfig, Knob, Sweep, SweepRow,
};
use ddlink::{Error, Result};

#[derive(Parser)]
#[command(name = "ddlink", version, about = "Direct-detection PAM4/DMT WDM link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output path (CSV, or the loading table for `loadtable`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replicate seeds per point; overrides the config file.
    #[arg(long, global = true)]
    seeds: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true, env = "DDLINK_THREADS")]
    threads: Option<usize>,
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured link once per seed (any sweep is ignored).
    Run { config: PathBuf },
    /// Run the configured sweep.
    Sweep { config: PathBuf },
    /// Grid-search one knob: level_adjust (a:b:c:d), vsb_offset (Hz) or tdcm (ps/nm).
    Optimize {
        config: PathBuf,
        #[arg(long)]
        knob: String,
        /// Comma-separated grid values.
        #[arg(long)]
        grid: String,
    },
    /// Probe a DMT link and emit its bit-loading tables.
    Loadtable { config: PathBuf },
}

fn load(cli: &Cli, path: &Path) -> Result<ExperimentConfig> {
    let mut cfg = parse_config(path)?;
    if let Some(n) = cli.seeds {
        if n == 0 {
            return Err(Error::validation("seeds", "must be at least 1"));
        }
        cfg.replicate_seeds = n;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.clone());
    }
    Ok(cfg)
}

fn emit(rows: &[SweepRow], cfg: &ExperimentConfig) -> Result<()> {
    match &cfg.output_path {
        Some(p) => write_csv_file(rows, p)?,
        None => write_csv(rows, std::io::stdout().lock())?,
    }
    eprint!("{}", summary_table(rows));
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Run { config } => {
            let mut cfg = load(cli, config)?;
            cfg.sweep = Sweep::default();
            let rows = run_experiment(&cfg)?;
            emit(&rows, &cfg)?;
            Ok(rows_exit_code(&rows))
        }
        Command::Sweep { config } => {
            let cfg = load(cli, config)?;
            let rows = run_experiment(&cfg)?;
            emit(&rows, &cfg)?;
            Ok(rows_exit_code(&rows))
        }
        Command::Optimize { config, knob, grid } => {
            let cfg = load(cli, config)?;
            let knob: Knob = knob.parse()?;
            let grid = knob.parse_grid(grid)?;
            let o = optimize_knob(&cfg, knob, &grid)?;
            emit(&o.rows, &cfg)?;
            for (v, m) in &o.medians {
                eprintln!("{} = {v}: median BER {m:.3e}", knob.name());
            }
            println!("best {} = {} (median BER {:.3e})", knob.name(), o.best, o.best_median_ber);
            Ok(rows_exit_code(&o.rows))
        }
        Command::Loadtable { config } => {
            let cfg = load(cli, config)?;
            let tables = loading_tables(&cfg)?;
            let mut text = String::new();
            for (i, t) in tables.iter().enumerate() {
                match t {
                    Ok(t) => {
                        text.push_str(&format!("# channel {i} bits_per_symbol {}\n", t.total_bits()));
                        text.push_str(&t.to_text());
                    }
                    Err(e) => text.push_str(&format!("# channel {i} failed: {e}\n")),
                }
            }
            match &cli.out {
                Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            Ok(if tables.iter().any(|t| t.is_ok()) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .format_target(false)
        .init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    let code = execute(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    });
    ExitCode::from(code as u8)
}
