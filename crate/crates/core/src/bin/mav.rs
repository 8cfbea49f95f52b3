use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mav_core::fitness::allele_fitness;
use mav_core::harness::config::{parse_config, parse_experiment};
use mav_core::harness::preset::run_preset;
use mav_core::harness::sweep::{sweep, SweepReport};
use mav_core::harness::timeseries::{render_timeseries, write_timeseries};
use mav_core::idea::enumerate_idea_space;
use mav_core::{optimal_set, run, FitnessParams, MavError, Result, SocietyConfig};

#[derive(Parser)]
#[command(
    name = "mav",
    version,
    about = "Agent-based simulator of cultural evolution by invention and imitation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one society and write its time series.
    Run(RunArgs),
    /// Run a named experiment plan.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = mav_core::harness::config::DEFAULT_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the sweep described by an experiment file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the file's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the fitness of every action and the optimal set.
    Oracle,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    p_create: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    no_mental_simulation: bool,
    #[arg(long)]
    no_imitation: bool,
    #[arg(long)]
    no_knowledge_ops: bool,
    /// Grid size as ROWSxCOLS, e.g. 10x10.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{s}` is not ROWSxCOLS"))?;
    let r: usize = r
        .trim()
        .parse()
        .map_err(|_| format!("bad row count `{r}`"))?;
    let c: usize = c
        .trim()
        .parse()
        .map_err(|_| format!("bad column count `{c}`"))?;
    Ok((r, c))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| MavError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run_config(args: &RunArgs) -> Result<SocietyConfig> {
    let mut config = match &args.config {
        Some(path) => parse_config(&read(path)?)?,
        None => SocietyConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(n) = args.iterations {
        config.iterations = n;
    }
    if let Some(p) = args.p_create {
        config.p_create = p;
    }
    if let Some(r) = args.mutation_rate {
        config.mutation_rate = r;
    }
    if args.no_mental_simulation {
        config.mental_simulation = false;
    }
    if args.no_imitation {
        config.imitation_enabled = false;
    }
    if args.no_knowledge_ops {
        config.knowledge_ops = false;
    }
    if let Some((rows, cols)) = args.grid {
        config.rows = rows;
        config.cols = cols;
    }
    config.validate()?;
    Ok(config)
}

fn report(r: &SweepReport) {
    let runs: usize = r.results.iter().map(|c| c.runs.len()).sum();
    eprintln!(
        "{} cells, {runs} runs, {} files written",
        r.results.len(),
        r.files.len()
    );
}

fn oracle() -> Result<()> {
    let params = FitnessParams::default();
    let optima = optimal_set(&params);
    let mut out = String::from("idea,fitness,optimal\n");
    for idea in enumerate_idea_space() {
        let f = allele_fitness(idea, &params).get();
        out.push_str(&format!("{idea},{f:.6},{}\n", optima.contains(&idea)));
    }
    out.push_str(&format!(
        "# optima: {} at fitness {:.6}\n",
        optima.len(),
        params.max_fitness()
    ));
    for o in &optima {
        out.push_str(&format!("# {o}\n"));
    }
    emit(&out)
}

fn emit(text: &str) -> Result<()> {
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|source| MavError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let config = run_config(&args)?;
            let records = run(&config)?;
            match &args.out {
                Some(path) => write_timeseries(&records, &config, path),
                None => emit(&render_timeseries(&records, &config)),
            }
        }
        Command::Preset {
            name,
            out,
            replicates,
            seed,
        } => {
            report(&run_preset(&name, seed, replicates, &out)?);
            Ok(())
        }
        Command::Sweep { config, out } => {
            let spec = parse_experiment(&read(&config)?)?;
            report(&sweep(&spec, out.as_deref())?);
            Ok(())
        }
        Command::Oracle => oracle(),
    }
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
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mav: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
