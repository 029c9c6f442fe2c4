use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use queens_bench::harness::{
    published_choice, read_results, render_report, run_final_phase, run_tuning_phase, run_validation_phase,
    summarize, write_results, ExperimentPlan, HarnessError, Manifest, Phase, MANIFEST_JSON,
};
use queens_bench::solver::Algorithm;
use queens_bench::verify::run_checks;

#[derive(Parser)]
#[command(name = "queens-bench", version, about = "N-Queens metaheuristic workbench")]
struct Cli {
    /// Log every run to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choose a configuration per (algorithm, size) with a Taguchi design and TOPSIS.
    Tune {
        #[command(flatten)]
        common: Common,
        /// Install the published configurations instead of searching.
        #[arg(long)]
        published: bool,
    },
    /// Validation and final runs of the chosen configurations.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Min/avg/max tables from the final runs.
    Report {
        #[arg(long, env = "QUEENS_BENCH_OUT", default_value = "results")]
        out: PathBuf,
    },
    /// Built-in self checks.
    Verify,
}

#[derive(Args)]
struct Common {
    /// Plan file (TOML); the shipped default plan when omitted.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, env = "QUEENS_BENCH_OUT", default_value = "results")]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Overrides the plan's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the plan's TOPSIS weights for (cost, NFE).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    weights: Option<Vec<f64>>,
    /// Restrict to these algorithms (comma separated).
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Restrict to these sizes (comma separated).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
}

impl Common {
    /// The full plan with overrides applied, and the cells to work on.
    fn plans(&self) -> Result<(ExperimentPlan, ExperimentPlan), HarnessError> {
        let mut plan = match &self.plan {
            Some(p) => ExperimentPlan::load(p)?,
            None => ExperimentPlan::default(),
        };
        if let Some(seed) = self.seed {
            plan.master_seed = seed;
        }
        if let Some(w) = &self.weights {
            plan.weights = [w[0], w[1]];
        }
        plan.check()?;
        let cells = plan.filtered(self.algorithms.as_deref(), self.sizes.as_deref())?;
        Ok((plan, cells))
    }
}

fn tune(common: &Common, published: bool) -> Result<(), HarnessError> {
    let (plan, selection) = common.plans()?;
    let cells = selection.cells();
    if cells.is_empty() {
        log::warn!("nothing to tune: the selection is empty");
        return Ok(());
    }
    let mut manifest = Manifest::open_or_new(&common.out, &plan)?;
    for (algorithm, n) in cells {
        let (report, rows) = if published {
            (published_choice(algorithm, n)?, Vec::new())
        } else {
            run_tuning_phase(&plan, algorithm, n, common.workers)?
        };
        manifest.set_tuning(report, rows);
        write_results(&common.out, &manifest)?;
    }
    for &n in &selection.sizes {
        println!("N = {n}");
        for &a in &selection.algorithms {
            if let Some(t) = manifest.choice(a, n) {
                println!("  {:<6} {}", a.label(), t.chosen.describe());
            }
        }
    }
    Ok(())
}

fn run(common: &Common) -> Result<(), HarnessError> {
    let (plan, selection) = common.plans()?;
    let cells = selection.cells();
    if cells.is_empty() {
        log::warn!("nothing to run: the selection is empty");
        return Ok(());
    }
    let mut manifest = Manifest::open_or_new(&common.out, &plan)?;
    for (algorithm, n) in cells {
        let choice = manifest.choice(algorithm, n).cloned().ok_or(HarnessError::MissingTunedConfig { algorithm, n })?;
        let (mut rows, _) = run_validation_phase(&plan, &choice, common.workers)?;
        let (finals, summary) = run_final_phase(&plan, &choice, common.workers)?;
        log::info!("{algorithm} at n={n}: mean cost {:.2}, mean NFE {:.0}", summary[0].avg, summary[1].avg);
        rows.extend(finals);
        manifest.set_results(algorithm, n, rows);
        write_results(&common.out, &manifest)?;
    }
    Ok(())
}

fn report(out: &Path) -> Result<(), HarnessError> {
    if !out.is_dir() {
        return Err(HarnessError::Io {
            path: out.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such results directory"),
        });
    }
    let records = if out.join(MANIFEST_JSON).exists() {
        read_results(out)?.1
    } else {
        log::warn!("{} has no {MANIFEST_JSON}; the report is empty", out.display());
        Vec::new()
    };
    let report = render_report(&summarize(&records, Phase::Final));
    for w in &report.warnings {
        log::warn!("{w}");
    }
    for (name, body) in [("report.txt", &report.text), ("report.csv", &report.csv)] {
        let path = out.join(name);
        std::fs::write(&path, body).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
    }
    print!("{}", report.text);
    Ok(())
}

fn verify() -> bool {
    let checks = run_checks();
    for c in &checks {
        match &c.outcome {
            Ok(()) => println!("ok    {}", c.name),
            Err(e) => println!("FAIL  {}: {e}", c.name),
        }
    }
    checks.iter().all(|c| c.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let outcome = match &cli.command {
        Command::Tune { common, published } => tune(common, *published),
        Command::Run { common } => run(common),
        Command::Report { out } => report(out),
        Command::Verify => {
            return if verify() { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
