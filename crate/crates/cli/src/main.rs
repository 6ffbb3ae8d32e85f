use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use diffeo::report::Status;
use diffeo::suite::{run, Golden, ModeChoice, Suite, SuiteParams};

#[derive(Parser, Debug)]
#[command(name = "diffeo", version, about = "Exact verification suites for field-diffeomorphed scalar theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and report every case.
    Run(RunArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Bell,
    Bn,
    Vanish,
    Offshell,
    Gluing,
    Interacting,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Bell => Suite::Bell,
            SuiteArg::Bn => Suite::Bn,
            SuiteArg::Vanish => Suite::Vanish,
            SuiteArg::Offshell => Suite::Offshell,
            SuiteArg::Gluing => Suite::Gluing,
            SuiteArg::Interacting => Suite::Interacting,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Symbolic,
    Random,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Single size to check.
    #[arg(long)]
    n: Option<usize>,
    /// Largest size to check.
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    /// Force symbolic or random evaluation; default picks per size.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Random points per randomized check.
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// First seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// a-grading cutoff for the off-shell decomposition.
    #[arg(long = "grading-cutoff")]
    grading_cutoff: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Rewrite the golden files before running.
    #[arg(long = "regen-golden")]
    regen_golden: bool,
    /// Directory holding bn.txt and census.txt.
    #[arg(long = "golden-dir", default_value = "golden")]
    golden_dir: PathBuf,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn regen(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let bn = Golden::render_bn().map_err(|e| e.to_string())?;
    let census = Golden::render_census().map_err(|e| e.to_string())?;
    for (name, text) in [("bn.txt", bn), ("census.txt", census)] {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn load_golden(dir: &Path) -> Result<Option<Golden>, String> {
    let (bn, census) = (dir.join("bn.txt"), dir.join("census.txt"));
    if !bn.exists() || !census.exists() {
        return Ok(None);
    }
    let read = |p: &Path| fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    Golden::parse(&read(&bn)?, &read(&census)?).map(Some).map_err(|e| e.to_string())
}

fn run_command(args: RunArgs) -> ExitCode {
    let suite = Suite::from(args.suite);
    let params = SuiteParams {
        n: args.n,
        max_n: args.max_n,
        mode: args.mode.map(|m| match m {
            ModeArg::Symbolic => ModeChoice::Symbolic,
            ModeArg::Random => ModeChoice::Random,
        }),
        seeds: args.seeds,
        seed: args.seed,
        grading_cutoff: args.grading_cutoff,
    };
    if let Err(e) = params.validate(suite) {
        return usage_error(e);
    }
    if args.regen_golden {
        if let Err(e) = regen(&args.golden_dir) {
            return usage_error(e);
        }
    }
    let golden = match load_golden(&args.golden_dir) {
        Ok(Some(g)) => Some(g),
        Ok(None) => {
            eprintln!("note: no golden files in {}", args.golden_dir.display());
            None
        }
        Err(e) => return usage_error(e),
    };
    let start = Instant::now();
    let report = run(suite, &params, golden.as_ref());
    let elapsed = start.elapsed();
    for case in &report.cases {
        println!("{case}");
    }
    println!(
        "suite {}: {} pass, {} fail, {} skipped in {:.2}s",
        report.suite,
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped),
        elapsed.as_secs_f64()
    );
    if let Some(path) = &args.json {
        if let Err(e) = fs::write(path, report.to_json()) {
            return usage_error(format!("{}: {e}", path.display()));
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(args),
    }
}
