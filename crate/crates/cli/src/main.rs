use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperlab_cli::output::emit;
use hyperlab_cli::{run, CliError, CommandKind, ExperimentConfig, Params};

#[derive(Parser)]
#[command(name = "hyperlab", version, about = "Random hypergraph matching and cover experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample H_r(n, p) and write it as an edge list or JSON.
    Gen(Args),
    /// Greedy (r-1)-matching density over random graphs.
    MatchingMc(Args),
    /// Cover density of a construction over random graphs.
    CoverMc(Args),
    /// Survival probability of the decreasing tree against its closed form.
    SurvivalMc(Args),
    /// Exact tau/nu on small random graphs.
    OracleCompare(Args),
    /// The minimax bound on tau / (r nu) for a range of r
    /// (`bounds-table 6 12` is short for `--r-lo 6 --r-hi 12`).
    BoundsTable(RangeArgs),
    /// Run the acceptance criteria.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

#[derive(clap::Args)]
struct RangeArgs {
    /// First r of the table.
    #[arg(value_name = "R_LO")]
    lo: Option<usize>,
    /// Last r of the table; defaults to the first.
    #[arg(value_name = "R_HI", requires = "lo")]
    hi: Option<usize>,
    #[command(flatten)]
    args: Args,
}

impl RangeArgs {
    fn into_args(mut self) -> Result<Args, CliError> {
        if let Some(lo) = self.lo {
            let p = &mut self.args.params;
            if p.r_lo.is_some() || p.r_hi.is_some() {
                return Err(CliError::config("give the range either positionally or with --r-lo/--r-hi"));
            }
            p.r_lo = Some(lo);
            p.r_hi = Some(self.hi.unwrap_or(lo));
        }
        Ok(self.args)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Gen(a) => (CommandKind::Gen, a),
        Command::MatchingMc(a) => (CommandKind::MatchingMc, a),
        Command::CoverMc(a) => (CommandKind::CoverMc, a),
        Command::SurvivalMc(a) => (CommandKind::SurvivalMc, a),
        Command::OracleCompare(a) => (CommandKind::OracleCompare, a),
        Command::BoundsTable(a) => match a.into_args() {
            Ok(a) => (CommandKind::BoundsTable, a),
            Err(e) => {
                eprintln!("hyperlab bounds-table: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        },
        Command::Verify(a) => (CommandKind::Verify, a),
    };
    match execute(kind, &args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hyperlab {}: {e}", kind.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(kind: CommandKind, args: &Args) -> Result<bool, CliError> {
    let params = match &args.config {
        Some(path) => args.params.over(&Params::load(path)?),
        None => args.params.clone(),
    };
    let cfg = ExperimentConfig::resolve(kind, &params)?;
    let out = run(&cfg)?;
    emit(&out.text, cfg.out.as_deref())?;
    Ok(out.ok)
}
