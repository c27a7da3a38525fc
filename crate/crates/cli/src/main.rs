use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use amgm_cli::{
    cmd_eval, cmd_extremal, cmd_sweep, cmd_verify, execution, CliError, SweepSpec, Suite,
    VerifyOptions,
};
use amgm_core::verify::{CampaignConfig, Side};
use amgm_core::ExtReal;

/// Exact bounds on the AM-GM gap of nonnegative discrete distributions.
#[derive(Parser)]
#[command(name = "amgm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moments, gap and bounds of a distribution (file, inline JSON, or - for stdin).
    Eval {
        input: String,
    },
    /// The two-point law attaining the bound for (V, E) or (V, F).
    Extremal {
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        e: Option<f64>,
        /// Number or INF.
        #[arg(long)]
        f: Option<ExtReal>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c: f64,
    },
    /// Run falsification campaigns.
    Verify(VerifyArgs),
    /// Tabulate one bound over a grid of parameters into a CSV file.
    Sweep {
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long, value_delimiter = ',', required = true)]
        v: Vec<f64>,
        /// E values (side hi) or F values (side lo); INF allowed.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<ExtReal>,
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 8)]
    max_atoms: usize,
    #[arg(long, default_value_t = 100.0)]
    value_cap: f64,
    #[arg(long, default_value_t = 0.2)]
    zero_atom_prob: f64,
    /// Equal weights on every atom of the random laws.
    #[arg(long)]
    equal_probs: bool,
    #[arg(long, default_value_t = 1.0)]
    v: f64,
    #[arg(long, default_value_t = 4.0)]
    e: f64,
    /// Number or INF.
    #[arg(long, default_value = "2")]
    f: ExtReal,
    #[arg(long, value_parser = parse_side, default_value = "hi")]
    side: Side,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Reproducible mode: requires --seed.
    #[arg(long, requires = "seed")]
    ci: bool,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn print(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON output");
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval { input } => {
            print(&cmd_eval(&input)?);
            Ok(0)
        }
        Command::Extremal { side, v, e, f, u, c } => {
            let param = match side {
                Side::Hi => e.map(ExtReal::Finite).ok_or_else(|| CliError::Usage("--side hi needs --e".into()))?,
                Side::Lo => f.ok_or_else(|| CliError::Usage("--side lo needs --f".into()))?,
            };
            print(&cmd_extremal(side, v, param, u, c)?);
            Ok(0)
        }
        Command::Verify(a) => {
            let opts = VerifyOptions {
                campaign: CampaignConfig {
                    trials: a.trials,
                    max_atoms: a.max_atoms,
                    value_cap: a.value_cap,
                    zero_atom_prob: a.zero_atom_prob,
                    seed: a.seed.unwrap_or(0),
                    equal_probs: a.equal_probs,
                    execution: execution(a.sequential),
                },
                v: a.v,
                e: a.e,
                f: a.f,
                side: a.side,
                grid: a.grid,
            };
            let outcome = cmd_verify(a.suite, &opts)?;
            print(&outcome.to_json());
            Ok(outcome.exit_code())
        }
        Command::Sweep { side, v, values, output } => {
            let rows = cmd_sweep(&SweepSpec { v_values: v, params: values, side, output })?;
            eprintln!("wrote {} rows", rows.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
