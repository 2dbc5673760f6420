use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use chaincomplexity::complexity::compare_with_inference;
use chaincomplexity::market::{
    bifurcation_scan, classify_regime, iterate, lyapunov, write_scan_csv, MapKind, MapSpec, MapState, ScanSettings,
    DEFAULT_BURN_IN, DEFAULT_ITERATIONS,
};
use chaincomplexity::pow::{
    collision_horizon, collision_probability, difficulty_to_target, leading_zero_target, merkle_root, mine_parallel,
    Block, Chain, DifficultyTarget, Hash256, MineOutcome, MiningJob, NonceMode, PowError,
};
use chaincomplexity::report::{format_sci, published_report, ReportOptions};
use chaincomplexity::symbolic::{
    infer_causal_states, statistical_complexity, InferenceConfig, SymbolStream, SymbolicError,
};
use chaincomplexity::Machine;

#[derive(Parser)]
#[command(
    name = "chaincx",
    version,
    about = "Statistical complexity, proof-of-work and chaotic-map toolkit"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print numbers with every significant digit.
    #[arg(long, global = true)]
    full_precision: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct causal states from a symbol stream file.
    Infer(InferArgs),
    /// Recompute the published figures and check them against their quoted precision.
    Report {
        /// Use this tolerance for every row.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Search for a nonce.
    Mine(MineArgs),
    /// Mine a chain of blocks, or replay one from JSON.
    Chain(ChainArgs),
    /// Logistic and delayed-logistic map diagnostics.
    Chaos(ChaosArgs),
    /// Birthday-bound collision figures.
    Collision {
        #[arg(long, default_value_t = 431_616)]
        blocks: u64,
        /// Minutes between blocks.
        #[arg(long, default_value_t = 10.0)]
        interval: f64,
    },
    /// Sample a symbol stream from a reference process.
    Generate {
        #[arg(long, value_enum)]
        process: Process,
        #[arg(long, default_value_t = 10_000)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-state mining model next to inference on a simulated attempt stream.
    Compare {
        #[arg(long, default_value_t = 1)]
        zeros: u32,
        #[arg(long, default_value_t = 1_000_000)]
        attempts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InferArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_history: usize,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[arg(long, default_value_t = 10)]
    min_count: u64,
}

#[derive(Args)]
struct TargetArgs {
    /// Toy target: hashes need this many leading hex zeros.
    #[arg(long, conflicts_with = "difficulty")]
    zeros: Option<u32>,
    /// Target = max_target / difficulty.
    #[arg(long)]
    difficulty: Option<f64>,
}

impl TargetArgs {
    fn target(&self) -> Result<DifficultyTarget, PowError> {
        match (self.zeros, self.difficulty) {
            (_, Some(d)) => difficulty_to_target(d),
            (Some(k), None) => leading_zero_target(k),
            (None, None) => leading_zero_target(1),
        }
    }
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Sequential)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    nonce_start: u32,
    #[arg(long, default_value_t = u32::MAX as u64 + 1)]
    max_attempts: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Parent hash, 64 lowercase hex characters.
    #[arg(long, default_value_t = Hash256::ZERO)]
    parent: Hash256,
    /// Transaction payloads committed through the Merkle root.
    #[arg(long = "payload", default_values_t = vec!["coinbase".to_string()])]
    payloads: Vec<String>,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Blocks to mine on top of genesis.
    #[arg(long, default_value_t = 10)]
    blocks: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replay and validate a chain JSON file instead of mining.
    #[arg(long)]
    load: Option<PathBuf>,
}

#[derive(Args)]
struct ChaosArgs {
    #[arg(long, default_value = "logistic")]
    map: String,
    #[arg(long, default_value_t = 4.0)]
    r: f64,
    #[arg(long, default_value_t = 0.3)]
    x0: f64,
    /// Print the Lyapunov exponent and regime.
    #[arg(long)]
    lyapunov: bool,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: usize,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    /// Retained orbit samples.
    #[arg(long, default_value_t = 16)]
    keep: usize,
    /// Regime band half-width.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Bifurcation scan lower bound; requires --r-max.
    #[arg(long, requires = "r_max")]
    r_min: Option<f64>,
    #[arg(long, requires = "r_min")]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    steps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sequential,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Process {
    Crystal,
    FairCoin,
    TickTock,
    GoldenMean,
}

/// Exit status and message.
struct Failure(u8, String);

const USAGE: u8 = 2;
const DATA: u8 = 3;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure(USAGE, e.to_string())
}

fn symbolic_failure(e: SymbolicError) -> Failure {
    match e {
        SymbolicError::InsufficientData(_) => Failure(DATA, e.to_string()),
        SymbolicError::Parse(_) | SymbolicError::InvalidConfig(_) | SymbolicError::InvalidAlphabet(_) => usage(e),
        other => Failure(DATA, other.to_string()),
    }
}

struct Output {
    text: String,
    code: u8,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn sci(cli: &Cli, v: f64) -> String {
    format_sci(v, cli.full_precision)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Infer(args) => {
            let text = fs::read_to_string(&args.file).map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
            let stream: SymbolStream = text.parse().map_err(symbolic_failure)?;
            let config = InferenceConfig {
                max_history_length: args.max_history,
                merge_tolerance: args.tolerance,
                min_history_count: args.min_count,
            };
            let machine = infer_causal_states(&stream, &config).map_err(symbolic_failure)?;
            let c_mu = statistical_complexity(&machine).map_err(symbolic_failure)?;
            Ok(match cli.format {
                Format::Json => pretty(&json!({
                    "states": machine.state_count(),
                    "c_mu": c_mu,
                    "machine": machine,
                })),
                _ => format!(
                    "states: {}, C_mu: {c_mu:.6}\n{}\n",
                    machine.state_count(),
                    machine.to_json()
                ),
            }
            .into())
        }
        Command::Report { tolerance } => {
            let report = published_report(ReportOptions {
                tolerance_override: *tolerance,
                full_precision: cli.full_precision,
            });
            let text = match cli.format {
                Format::Json => report.to_json() + "\n",
                _ => report.to_text(),
            };
            Ok(Output {
                text,
                code: if report.all_pass { 0 } else { 1 },
            })
        }
        Command::Mine(args) => {
            let target = args.target.target().map_err(usage)?;
            let root = merkle_root(&args.payloads).map_err(usage)?;
            let job = MiningJob {
                parent_hash: args.parent,
                merkle_root: root,
                target,
                nonce_start: args.nonce_start,
                mode: match args.mode {
                    Mode::Sequential => NonceMode::Sequential,
                    Mode::Random => NonceMode::Random,
                },
                seed: args.seed,
                max_attempts: args.max_attempts.max(1),
            };
            let outcome = mine_parallel(&job, args.workers);
            let text = match cli.format {
                Format::Json => pretty(&json!({
                    "parent_hash": job.parent_hash,
                    "merkle_root": job.merkle_root,
                    "target": target.target(),
                    "outcome": outcome,
                })),
                _ => match outcome {
                    MineOutcome::Found { nonce, hash, attempts } => format!(
                        "target: {}\nmerkle_root: {root}\nnonce: {nonce}\nhash: {hash}\nattempts: {attempts}\n",
                        target.target()
                    ),
                    MineOutcome::Exhausted { attempts } => format!("exhausted after {attempts} attempts\n"),
                },
            };
            Ok(text.into())
        }
        Command::Chain(args) => {
            let target = args.target.target().map_err(usage)?;
            let chain = match &args.load {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    Chain::from_json(&text, &target).map_err(|e| Failure(DATA, e.to_string()))?
                }
                None => mine_chain(args.blocks, &target, args.seed).map_err(|e| Failure(DATA, e.to_string()))?,
            };
            Ok(match cli.format {
                Format::Json => chain.to_json() + "\n",
                _ => format!(
                    "blocks: {}\nheight: {}\ntips: {}\nactive_tip: {}\n",
                    chain.len(),
                    chain.height(),
                    chain.tips().len(),
                    chain.active_tip()
                ),
            }
            .into())
        }
        Command::Chaos(args) => chaos(cli, args),
        Command::Collision { blocks, interval } => {
            let p = collision_probability(*blocks);
            let horizon = collision_horizon(*interval).map_err(usage)?;
            Ok(match cli.format {
                Format::Json => pretty(&json!({
                    "blocks": blocks,
                    "probability": p,
                    "expected_blocks": horizon.expected_blocks,
                    "years": horizon.years,
                })),
                _ => format!(
                    "{}\nexpected_blocks: {}\nyears: {}\n",
                    sci(cli, p),
                    sci(cli, horizon.expected_blocks),
                    sci(cli, horizon.years)
                ),
            }
            .into())
        }
        Command::Generate { process, length, seed } => {
            let machine = match process {
                Process::Crystal => Machine::crystal(),
                Process::FairCoin => Machine::fair_coin(),
                Process::TickTock => Machine::tick_tock(),
                Process::GoldenMean => Machine::golden_mean(),
            };
            let stream = machine.generate(*length, *seed).map_err(usage)?;
            Ok(stream.to_string().into())
        }
        Command::Compare { zeros, attempts, seed } => {
            let target = leading_zero_target(*zeros).map_err(usage)?;
            let cmp = compare_with_inference(&target, *attempts, *seed, &InferenceConfig::default())
                .map_err(symbolic_failure)?;
            Ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(cmp).expect("serializable")),
                _ => format!(
                    "attempts: {}\nsuccess_rate: {}\ntwo-state model: states {}, C_mu {}\ninferred: states {}, C_mu {}\n",
                    cmp.attempts,
                    sci(cli, cmp.empirical_success_rate),
                    cmp.model_states,
                    sci(cli, cmp.model_c_mu),
                    cmp.inferred_states,
                    sci(cli, cmp.inferred_c_mu)
                ),
            }
            .into())
        }
    }
}

/// Mines `blocks` blocks on the active tip, one payload each, random nonces.
fn mine_chain(blocks: u64, target: &DifficultyTarget, seed: u64) -> Result<Chain, PowError> {
    let mut chain = Chain::new();
    for height in 1..=blocks {
        let parent = chain.active_tip();
        let template = Block::new(parent, vec![format!("block-{height}").into_bytes()], 0, height)?;
        let job = MiningJob {
            parent_hash: parent,
            merkle_root: template.header.merkle_root,
            target: *target,
            nonce_start: 0,
            mode: NonceMode::Random,
            seed: seed.wrapping_add(height),
            max_attempts: u32::MAX as u64 + 1,
        };
        let (nonce, _) = chaincomplexity::pow::mine(&job)
            .found()
            .ok_or_else(|| PowError::Malformed(format!("no nonce found for block {height}")))?;
        chain.extend(template.with_nonce(nonce), target)?;
    }
    Ok(chain)
}

fn chaos(cli: &Cli, args: &ChaosArgs) -> Result<Output, Failure> {
    let kind: MapKind = args.map.parse().map_err(usage)?;
    if let (Some(r_min), Some(r_max)) = (args.r_min, args.r_max) {
        let settings = ScanSettings {
            burn_in: args.burn_in,
            keep: args.keep,
            initial: args.x0,
            lyapunov_iterations: args.iterations,
            regime_tolerance: args.tol,
            ..ScanSettings::new(kind, r_min, r_max, args.steps)
        };
        let rows = bifurcation_scan(&settings).map_err(usage)?;
        return Ok(match cli.format {
            Format::Json => pretty(&serde_json::to_value(&rows).expect("serializable")),
            _ => {
                let mut buf = Vec::new();
                write_scan_csv(&rows, &mut buf).map_err(usage)?;
                String::from_utf8(buf).expect("csv is utf-8")
            }
        }
        .into());
    }
    let spec = MapSpec::new(kind, args.r).map_err(usage)?;
    let start = MapState::for_kind(kind, args.x0);
    let orbit = iterate(&spec, start, args.burn_in, args.keep).map_err(|e| Failure(DATA, e.to_string()))?;
    let exponent = if args.lyapunov {
        let est = lyapunov(&spec, start, args.burn_in, args.iterations).map_err(usage)?;
        Some((est, classify_regime(est.exponent, args.tol).map_err(usage)?))
    } else {
        None
    };
    Ok(match cli.format {
        Format::Json => pretty(&json!({
            "map": kind,
            "r": args.r,
            "samples": orbit.samples,
            "lyapunov": exponent.map(|(e, _)| e),
            "regime": exponent.map(|(_, r)| r),
        })),
        Format::Csv => {
            let mut s = String::from("n,x\n");
            for (i, x) in orbit.samples.iter().enumerate() {
                s.push_str(&format!("{},{x}\n", args.burn_in + i + 1));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Some((est, regime)) = exponent {
                s.push_str(&format!("lyapunov: {}\nregime: {regime}\n", sci(cli, est.exponent)));
                if est.clamped {
                    s.push_str("warning: zero derivative clamped\n");
                }
            }
            let samples: Vec<String> = orbit.samples.iter().map(|x| sci(cli, *x)).collect();
            s.push_str(&format!("samples: {}\n", samples.join(" ")));
            s
        }
    }
    .into())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(USAGE)
                }
            }
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
