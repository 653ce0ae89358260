use clap::{Args, Parser, Subcommand};
use perclab_cli::config::{parse_ladder, Experiment, ExperimentConfig};
use perclab_cli::plot::{emit_plot, PlotKind};
use perclab_cli::recipes::{self, Limit, Report};
use perclab_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "perclab", version, about = "Last-passage percolation experiments and Fredholm determinants")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report path; stdout if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the check tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate last-passage times, or Monte Carlo estimates on a grid.
    Simulate,
    /// Fredholm gap probabilities on a threshold grid.
    Gap,
    /// Kernel values at configured points.
    KernelEval,
    /// Convergence ladder towards a limit kernel.
    Converge {
        /// 2.2, 2.3, 2.4, 2.5 or critical, hard-edge, truncated-hard-edge, hard-to-soft.
        #[arg(long)]
        theorem: Option<String>,
        /// e.g. 16,32,64 or 2:8:64,3:16:256
        #[arg(long)]
        ladder: Option<String>,
    },
    /// RSK shape against last-passage times on random arrays.
    RskCheck {
        #[arg(long)]
        arrays: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Uniform entries in 0..=max instead of geometric ones.
        #[arg(long)]
        max_entry: Option<u64>,
    },
    /// Schur-process normalization and limit-density mass.
    SchurCheck,
    /// Render a report CSV as SVG.
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        input: PathBuf,
    },
}

fn load(common: &Common, experiment: Experiment, required: bool) -> Result<ExperimentConfig, CliError> {
    let Some(path) = &common.config else {
        return if required {
            Err(CliError::Usage("this subcommand needs --config".into()))
        } else {
            Ok(ExperimentConfig::empty(experiment))
        };
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let c = ExperimentConfig::parse(&text)?;
    if c.experiment != experiment {
        return Err(CliError::Usage(format!("config is for {:?}, not this subcommand", c.experiment)));
    }
    Ok(c)
}

fn write(common: &Common, config_out: Option<&str>, text: &str) -> Result<(), CliError> {
    match common.out.clone().or(config_out.map(PathBuf::from)) {
        Some(p) => std::fs::write(&p, text).map_err(|e| CliError::Failed(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let common = &cli.common;
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("threads: {e}")))?;
    }
    let report: (Report, Option<String>) = match &cli.command {
        Command::Simulate => {
            let c = load(common, Experiment::Simulate, true)?;
            let seed = common.seed.or(c.seed).unwrap_or(0);
            (recipes::simulate(&c, seed)?, c.output.clone())
        }
        Command::Gap => {
            let c = load(common, Experiment::Gap, true)?;
            let seed = common.seed.or(c.seed).unwrap_or(0);
            (recipes::gap(&c, seed, common.tol)?, c.output.clone())
        }
        Command::KernelEval => {
            let c = load(common, Experiment::KernelEval, true)?;
            (recipes::kernel_eval(&c, common.tol)?, c.output.clone())
        }
        Command::Converge { theorem, ladder } => {
            let mut c = load(common, Experiment::Converge, false)?;
            let name = theorem
                .clone()
                .or(c.ladder.theorem.clone())
                .ok_or_else(|| CliError::Usage("converge needs --theorem".into()))?;
            if let Some(l) = ladder {
                c.ladder.rungs = parse_ladder(l)?;
            }
            (recipes::converge(&c, Limit::parse(&name)?, common.tol)?, c.output.clone())
        }
        Command::RskCheck { arrays, rows, cols, max_entry } => {
            let c = load(common, Experiment::RskCheck, false)?;
            let seed = common.seed.or(c.seed).unwrap_or(0);
            let r = recipes::rsk_check(
                arrays.or(c.rsk.arrays).unwrap_or(1000),
                rows.or(c.rsk.rows).unwrap_or(3),
                cols.or(c.rsk.cols).unwrap_or(5),
                max_entry.or(c.rsk.max_entry),
                seed,
            )?;
            (r, c.output.clone())
        }
        Command::SchurCheck => {
            let c = load(common, Experiment::SchurCheck, false)?;
            (recipes::schur_check(&c, common.tol)?, c.output.clone())
        }
        Command::Plot { kind, input } => {
            let text =
                std::fs::read_to_string(input).map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
            let svg = emit_plot(&text, *kind)?;
            write(common, None, &svg)?;
            return Ok(true);
        }
    };
    let (rep, out) = report;
    write(common, out.as_deref(), &rep.to_csv())?;
    eprintln!("{}", if rep.pass { "PASS" } else { "FAIL" });
    Ok(rep.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
