use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use macroreal::catalog::{enumerate, evaluate, family_max, Family};
use macroreal::oracle::{joint_feasible, nsit_check, NsitCondition};
use serde_json::json;

use macroreal_cli::config::{Grid, OutputFormat, ScanConfig, StateSpec};
use macroreal_cli::format::{
    behavior_from_json, eval_to_json, instance_to_json, nsit_to_json, verdict_to_json,
};
use macroreal_cli::output::{to_csv, to_json};
use macroreal_cli::scan::{nsit_columns, scan};
use macroreal_cli::search::{maximize_chsh, maximize_family, FreeParam};
use macroreal_cli::{CliError, Result};

/// Sequential-measurement inequality toolkit: evaluate, scan, maximize.
#[derive(Parser)]
#[command(name = "macroreal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct StateArgs {
    /// Named initial state: zero, plus or mixed.
    #[arg(long)]
    state: Option<String>,
    /// Polar angle of an explicit pure initial state.
    #[arg(long)]
    theta: Option<f64>,
    /// Azimuthal angle of an explicit pure initial state.
    #[arg(long)]
    phi: Option<f64>,
}

impl StateArgs {
    fn spec(&self) -> StateSpec {
        StateSpec { state: self.state.clone(), theta: self.theta, phi: self.phi }
    }

    fn is_empty(&self) -> bool {
        self.state.is_none() && self.theta.is_none() && self.phi.is_none()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every instance of one family on a behavior file.
    Eval {
        /// Path to a behavior JSON file.
        #[arg(long)]
        behavior: PathBuf,
        #[arg(long)]
        family: String,
    },
    /// Sweep the phase gap and evaluate families, oracle and equalities.
    Scan {
        /// JSON config file; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        state: StateArgs,
        /// Phase grid as start:stop:step.
        #[arg(long)]
        grid: Option<String>,
        /// Family to evaluate (repeatable).
        #[arg(long = "family")]
        families: Vec<String>,
        #[arg(long)]
        format: Option<String>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize a family's best LHS over chosen free parameters.
    Maximize {
        #[arg(long)]
        family: String,
        /// Free parameter: theta, phi or phase (repeatable).
        #[arg(long = "free", required = true)]
        free: Vec<String>,
        #[command(flatten)]
        state: StateArgs,
        /// Fixed phase gap when phase is not free.
        #[arg(long)]
        phase: Option<f64>,
    },
    /// Decide whether a global joint distribution reproduces a behavior.
    Oracle {
        #[arg(long)]
        behavior: PathBuf,
    },
    /// Report every marginal-equality residual of a behavior.
    Nsit {
        #[arg(long)]
        behavior: PathBuf,
    },
    /// Two-party baseline: CHSH for the singlet.
    Bell {
        /// Four measurement directions a1:a2:b1:b2 as polar angles in the
        /// x-z plane; searched automatically when omitted.
        #[arg(long)]
        angles: Option<String>,
    },
    /// Preset sweep: phase in (0, pi/2] step 0.005, WIGNER3 and VNEW.
    Fig1 {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_behavior(path: &PathBuf) -> Result<macroreal::behavior::Behavior> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    behavior_from_json(&value)
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(CliError::from)?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn parse_family(name: &str) -> Result<Family> {
    name.parse::<Family>()
        .map_err(|_| CliError::input(format!("unknown family {name:?}")))
}

fn run_scan(config: ScanConfig) -> Result<()> {
    config.grid.validate()?;
    let families = config.resolved_families()?;
    let state = config.state.resolve()?;
    let records = scan(&state, config.n_times, &config.grid.points(), &families)?;
    let nsit_cols = nsit_columns(config.n_times);
    let text = match config.format {
        OutputFormat::Csv => to_csv(&records, &families, &nsit_cols),
        OutputFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(&to_json(&records, &families, &nsit_cols))?;
            s.push('\n');
            s
        }
    };
    write_output(&text, &config.out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval { behavior, family } => {
            let b = load_behavior(&behavior)?;
            let fam = parse_family(&family)?;
            let instances = enumerate(fam, b.n_times())?;
            let results = instances
                .iter()
                .map(|inst| evaluate(inst, &b))
                .collect::<macroreal::Result<Vec<_>>>()?;
            let (max, best) = family_max(fam, &b)?;
            let doc = json!({
                "family": fam.name(),
                "max_lhs": max,
                "max_instance": instance_to_json(&best),
                "instances": results.iter().map(eval_to_json).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Scan { config, state, grid, families, format, out } => {
            let mut cfg = match config {
                Some(path) => ScanConfig::from_file(&path)?,
                None => ScanConfig {
                    state: StateSpec::default(),
                    n_times: 3,
                    grid: Grid::parse(grid.as_deref().ok_or_else(|| {
                        CliError::input("either --config or --grid is required")
                    })?)?,
                    families: Vec::new(),
                    format: OutputFormat::Csv,
                    out: None,
                },
            };
            if !state.is_empty() {
                cfg.state = state.spec();
            }
            if let Some(g) = grid {
                cfg.grid = Grid::parse(&g)?;
            }
            if !families.is_empty() {
                cfg.families = families;
            }
            if let Some(f) = format {
                cfg.format = f.parse()?;
            }
            if out.is_some() {
                cfg.out = out;
            }
            run_scan(cfg)?;
        }
        Command::Maximize { family, free, state, phase } => {
            let fam = parse_family(&family)?;
            let free: Vec<FreeParam> =
                free.iter().map(|f| f.parse()).collect::<Result<_>>()?;
            let named_state = match &state.state {
                Some(_) => Some(state.spec().resolve()?),
                None => None,
            };
            let max = maximize_family(
                fam,
                &free,
                named_state,
                state.theta.unwrap_or(0.0),
                state.phi.unwrap_or(0.0),
                phase.unwrap_or(std::f64::consts::FRAC_PI_4),
            )?;
            let args: serde_json::Map<String, serde_json::Value> = free
                .iter()
                .zip(&max.argmax)
                .map(|(p, v)| {
                    let name = match p {
                        FreeParam::Theta => "theta",
                        FreeParam::PhiState => "phi",
                        FreeParam::Phase => "phase",
                    };
                    (String::from(name), json!(v))
                })
                .collect();
            let doc = json!({ "family": fam.name(), "value": max.value, "argmax": args });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Oracle { behavior } => {
            let b = load_behavior(&behavior)?;
            let verdict = joint_feasible(&b)?;
            println!("{}", serde_json::to_string_pretty(&verdict_to_json(&verdict))?);
        }
        Command::Nsit { behavior } => {
            let b = load_behavior(&behavior)?;
            let reports = NsitCondition::all(b.n_times())
                .into_iter()
                .map(|c| nsit_check(&b, c))
                .collect::<macroreal::Result<Vec<_>>>()?;
            println!("{}", serde_json::to_string_pretty(&nsit_to_json(&reports))?);
        }
        Command::Bell { angles } => {
            let doc = match angles {
                Some(text) => {
                    let parts: Vec<f64> = text
                        .split(':')
                        .map(|p| {
                            p.parse::<f64>()
                                .map_err(|_| CliError::input(format!("bad angle {p:?}")))
                        })
                        .collect::<Result<_>>()?;
                    if parts.len() != 4 {
                        return Err(CliError::input("expected four angles a1:a2:b1:b2"));
                    }
                    let dir = |alpha: f64| [alpha.sin(), 0.0, alpha.cos()];
                    let b = macroreal::bell::quantum_bell_behavior(
                        &macroreal::bell::singlet(),
                        [dir(parts[0]), dir(parts[1])],
                        [dir(parts[2]), dir(parts[3])],
                    )?;
                    json!({
                        "chsh_max": macroreal::bell::chsh_max(&b),
                        "form_reduction_gap": macroreal::bell::form_equivalence(&b)?,
                    })
                }
                None => {
                    let max = maximize_chsh()?;
                    json!({ "chsh_max": max.value, "angles": max.argmax })
                }
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Fig1 { state, format, out } => {
            let spec = if state.is_empty() {
                StateSpec { state: Some(String::from("plus")), theta: None, phi: None }
            } else {
                state.spec()
            };
            let cfg = ScanConfig {
                state: spec,
                n_times: 3,
                grid: Grid {
                    start: 0.005,
                    stop: std::f64::consts::FRAC_PI_2,
                    step: 0.005,
                },
                families: vec![String::from("WIGNER3"), String::from("VNEW")],
                format: match format {
                    Some(f) => f.parse()?,
                    None => OutputFormat::Csv,
                },
                out,
            };
            run_scan(cfg)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
