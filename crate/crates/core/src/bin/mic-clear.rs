use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mic_clearing::io::{self, Format};
use mic_clearing::milp::{self, MilpError};
use mic_clearing::oracle::{self, OracleError};
use mic_clearing::rational::{parse_rational, Rational};
use mic_clearing::strategy::{self, StrategyError};
use mic_clearing::{MarketInstance, ObjectiveVariant};

#[derive(Parser)]
#[command(
    name = "mic-clear",
    version,
    about = "Exact clearing of two-sided auctions with MIC orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Hourly,
    Mic,
}

impl From<Objective> for ObjectiveVariant {
    fn from(o: Objective) -> Self {
        match o {
            Objective::Hourly => ObjectiveVariant::HourlyTsw,
            Objective::Mic => ObjectiveVariant::MicCostTsw,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Human => Format::Human,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clear a bid set.
    Clear {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "hourly")]
        objective: Objective,
        /// Also solve by exhaustive enumeration and compare.
        #[arg(long)]
        oracle_check: bool,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// Sweep the submitted fixed term of one MIC order.
    SweepFt {
        file: PathBuf,
        #[arg(long)]
        order: String,
        #[arg(long, value_parser = rational)]
        from: Rational,
        #[arg(long, value_parser = rational)]
        to: Rational,
        #[arg(long, value_enum, default_value = "hourly")]
        objective: Objective,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// Built-in scenarios.
    Scenarios {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// List every activation vector reaching the optimum.
    Optima {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "hourly")]
        objective: Objective,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    /// Supply and demand step curves of one period as csv.
    Curves {
        file: PathBuf,
        #[arg(long)]
        period: usize,
        /// Clear first and drop the bids of deactivated MIC orders.
        #[arg(long)]
        with_result: bool,
        #[arg(long, value_enum, default_value = "hourly")]
        objective: Objective,
    },
    /// Clear under both objectives and compare.
    Compare {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run one scenario by name, or `all`.
    Run {
        name: String,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
    List,
    /// Print a scenario's bid set.
    Export {
        name: String,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

const INVALID: u8 = 2;
const INFEASIBLE: u8 = 3;

impl From<MilpError> for Failure {
    fn from(e: MilpError) -> Self {
        let code = match e {
            MilpError::InvalidInstance(_) | MilpError::BoundBelowPrice { .. } => INVALID,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Milp(m) => m.into(),
            other => Failure::new(1, other.to_string()),
        }
    }
}

impl From<StrategyError> for Failure {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Milp(m) => m.into(),
            StrategyError::Oracle(o) => o.into(),
            StrategyError::InfeasibleAt(_) => Failure::new(INFEASIBLE, e.to_string()),
            StrategyError::UnknownOrder(_) | StrategyError::InvalidRange { .. } => {
                Failure::new(INVALID, e.to_string())
            }
            other => Failure::new(1, other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<MarketInstance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    io::parse_bidset(&text).map_err(|e| Failure::new(INVALID, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Clear {
            file,
            objective,
            oracle_check,
            format,
        } => {
            let instance = load(&file)?;
            let (result, _) = milp::clear(&instance, objective.into())?;
            print!("{}", io::emit_result(&result, &instance, format.into()));
            let mut code = if result.is_optimal() { 0 } else { INFEASIBLE };
            if oracle_check {
                let report = oracle::oracle_check(&instance)?;
                let text = io::emit_oracle_report(&report);
                match format {
                    OutputFormat::Human => print!("{text}"),
                    _ => eprint!("{text}"),
                }
                if !report.all_agree() {
                    code = 1;
                }
            }
            Ok(code)
        }
        Command::SweepFt {
            file,
            order,
            from,
            to,
            objective,
            format,
        } => {
            let instance = load(&file)?;
            let report = strategy::ft_sweep(&instance, &order, &from, &to, objective.into())?;
            print!("{}", io::emit_sweep(&report, format.into()));
            Ok(0)
        }
        Command::Scenarios { action } => match action {
            ScenarioAction::List => {
                for s in strategy::builtin_scenarios() {
                    println!("{:<10} {:<7} {}", s.name, s.variant.name(), s.notes);
                }
                Ok(0)
            }
            ScenarioAction::Export { name } => {
                let s = strategy::scenario_by_name(&name)?;
                print!("{}", io::serialize_bidset(&s.instance));
                Ok(0)
            }
            ScenarioAction::Run { name, format } => {
                let scenarios = if name == "all" {
                    strategy::builtin_scenarios()
                } else {
                    vec![strategy::scenario_by_name(&name)?]
                };
                let mut runs = Vec::new();
                for s in scenarios {
                    let (result, analysis) = strategy::run_scenario(&s)?;
                    runs.push((s, result, analysis));
                }
                print!("{}", io::emit_scenarios(&runs, format.into()));
                Ok(0)
            }
        },
        Command::Optima {
            file,
            objective,
            format,
        } => {
            let instance = load(&file)?;
            let optima = strategy::enumerate_optimal_activations(&instance, objective.into())?;
            print!(
                "{}",
                io::emit_optima(&optima, objective.into(), format.into())
            );
            Ok(if optima.is_empty() { INFEASIBLE } else { 0 })
        }
        Command::Curves {
            file,
            period,
            with_result,
            objective,
        } => {
            let instance = load(&file)?;
            if period == 0 || period > instance.period_count {
                return Err(Failure::new(
                    INVALID,
                    format!("period {period} outside 1..={}", instance.period_count),
                ));
            }
            let result = if with_result {
                let (r, _) = milp::clear(&instance, objective.into())?;
                if !r.is_optimal() {
                    return Err(Failure::new(INFEASIBLE, "no feasible clearing"));
                }
                Some(r)
            } else {
                None
            };
            print!("{}", io::emit_curves(&instance, period, result.as_ref()));
            Ok(0)
        }
        Command::Compare { file, format } => {
            let instance = load(&file)?;
            let cmp = strategy::compare_objectives(&instance)?;
            print!("{}", io::emit_comparison(&instance, &cmp, format.into()));
            Ok(if cmp.hourly.is_optimal() && cmp.mic.is_optimal() {
                0
            } else {
                INFEASIBLE
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("mic-clear: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
