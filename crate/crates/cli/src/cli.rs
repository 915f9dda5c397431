use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use ghz_distill::decoder::{self, SyndromeTable};
use ghz_distill::diagclifford;
use ghz_distill::induce::Placement;
use ghz_distill::protocol::{self, ChannelModel, ProtocolConfig, ProtocolKind, Topology};
use ghz_distill::StabilizerCode;
use ghz_oracle::checks::core_multiply;

use crate::error::CliError;
use crate::replay;
use crate::sweep::{parse_levels, Row, CSV_HEADER};

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "GHZDISTILL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ghzdistill", version, about = "Stabilizer-code distillation of Bell pairs and GHZ states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct CodeArg {
    /// Built-in code name or path to a file with one signed Pauli string per line.
    #[arg(long, default_value = "five_qubit")]
    pub code: String,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Comma separated list, or start:stop:count for log spacing.
    #[arg(long, default_value = "0.01,0.02,0.03,0.05")]
    pub p: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; stdout when omitted or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; falls back to the environment, then to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Ghz,
    Bell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    None,
    Alice,
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Chain,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Table1,
    Table2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the logical Z and X operators of a code.
    LogicalPaulis(CodeArg),
    /// Monte Carlo failure rates of the distillation protocol.
    Distill {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long, value_enum, default_value = "ghz")]
        protocol: ProtocolArg,
        #[arg(long, value_enum, default_value = "bob")]
        placement: PlacementArg,
        #[arg(long, value_enum, default_value = "chain")]
        topology: TopologyArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Failure rate of plain error correction of one code block.
    Baseline {
        #[command(flatten)]
        code: CodeArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Replay one of the two worked examples step by step.
    Replay {
        #[arg(value_enum)]
        table: TableArg,
    },
    /// Run the dense-matrix identity suite.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Solve for the diagonal Clifford of a code.
    SolveClifford(CodeArg),
    /// Describe a code as JSON.
    CodeInfo(CodeArg),
    /// Dump the syndrome table of a code.
    DecoderTable {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        max_weight: Option<usize>,
    },
}

pub fn load_code(source: &str) -> Result<StabilizerCode, CliError> {
    if let Some(code) = StabilizerCode::by_name(source) {
        return Ok(code);
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "unknown code {source:?}: not a built-in ({}) and no such file",
            StabilizerCode::builtin_names().join(", ")
        )));
    }
    Ok(StabilizerCode::from_file(path)?)
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("thread count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Failed(format!("cannot start worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn emit(run: &RunArgs, csv: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match run.out.as_deref() {
        Some(path) if path != Path::new("-") => std::fs::write(path, csv)?,
        _ => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn placement_of(p: PlacementArg) -> Placement {
    match p {
        PlacementArg::None => Placement::NoClifford,
        PlacementArg::Alice => Placement::AliceApplies,
        PlacementArg::Bob => Placement::BobApplies,
    }
}

pub fn distill_csv(
    code: &StabilizerCode,
    protocol: ProtocolArg,
    placement: PlacementArg,
    topology: TopologyArg,
    run: &RunArgs,
) -> Result<String, CliError> {
    let levels = parse_levels(&run.p)?;
    let topology = match topology {
        TopologyArg::Chain => Topology::Chain,
        TopologyArg::Split => Topology::SplitAtSource,
    };
    if protocol == ProtocolArg::Bell && topology == Topology::SplitAtSource {
        return Err(CliError::Usage("--topology split only applies to --protocol ghz".into()));
    }
    let threads = thread_count(run.threads)?;
    let mut csv = format!("{CSV_HEADER}\n");
    for p in levels {
        let channel = ChannelModel::depolarizing(p)?;
        let config = match protocol {
            ProtocolArg::Ghz => ProtocolConfig::ghz(code.clone(), placement_of(placement), topology, channel),
            ProtocolArg::Bell => ProtocolConfig::bell(code.clone(), channel),
        }
        .with_trials(run.trials, run.seed);
        let report = with_pool(threads, || protocol::estimate(&config))??;
        let (placement_text, topology_text) = match config.protocol {
            ProtocolKind::Ghz => (config.placement.as_str(), config.topology.as_str()),
            ProtocolKind::Bell => ("-", "-"),
        };
        Row {
            protocol: config.protocol.as_str(),
            code: code.name(),
            placement: placement_text,
            topology: topology_text,
            p,
            seed: run.seed,
            report: &report,
        }
        .write(&mut csv);
    }
    Ok(csv)
}

pub fn baseline_csv(code: &StabilizerCode, run: &RunArgs) -> Result<String, CliError> {
    let levels = parse_levels(&run.p)?;
    let threads = thread_count(run.threads)?;
    let mut csv = format!("{CSV_HEADER}\n");
    for p in levels {
        let channel = ChannelModel::depolarizing(p)?;
        let report = with_pool(threads, || protocol::qec_baseline(code, &channel, run.trials, run.seed))??;
        Row { protocol: "baseline", code: code.name(), placement: "-", topology: "-", p, seed: run.seed, report: &report }
            .write(&mut csv);
    }
    Ok(csv)
}

/// Runs one command, writing its normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::LogicalPaulis(c) => {
            let code = load_code(&c.code)?;
            let l = code.logicals()?;
            for (j, (z, x)) in l.zbar.iter().zip(&l.xbar).enumerate() {
                writeln!(out, "zbar[{j}] {z}")?;
                writeln!(out, "xbar[{j}] {x}")?;
            }
        }
        Command::Distill { code, protocol, placement, topology, run } => {
            let code = load_code(&code.code)?;
            let csv = distill_csv(&code, protocol, placement, topology, &run)?;
            emit(&run, &csv, out)?;
        }
        Command::Baseline { code, run } => {
            let code = load_code(&code.code)?;
            let csv = baseline_csv(&code, &run)?;
            emit(&run, &csv, out)?;
        }
        Command::Replay { table } => {
            let r = match table {
                TableArg::Table1 => replay::table1()?,
                TableArg::Table2 => replay::table2()?,
            };
            out.write_all(r.transcript.as_bytes())?;
            if !r.all_hold() {
                return Err(CliError::Failed("replay ended without the expected rows".into()));
            }
        }
        Command::Verify { seed } => {
            let results = ghz_oracle::run_suite(seed, core_multiply)?;
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::Failed(format!("{failed} of {} checks failed", results.len())));
            }
            writeln!(out, "all {} checks passed", results.len())?;
        }
        Command::SolveClifford(c) => {
            let code = load_code(&c.code)?;
            let problem = diagclifford::required_targets(&code)?;
            let r = diagclifford::solve(&problem)?;
            writeln!(out, "R =\n{r}")?;
            writeln!(out, "phase gates on qubits: {:?}", r.phase_qubits())?;
            writeln!(out, "CZ on pairs: {:?}", r.cz_pairs())?;
            writeln!(out, "A R = B: {}", if problem.is_solved_by(&r) { "ok" } else { "FAILED" })?;
            writeln!(out, "signs: {:?}", diagclifford::sign_fixups(&problem, &r))?;
            if !problem.is_solved_by(&r) {
                return Err(CliError::Failed("solution does not satisfy A R = B".into()));
            }
        }
        Command::CodeInfo(c) => {
            let code = load_code(&c.code)?;
            let mut json = serde_json::to_value(code.summary()?).map_err(|e| CliError::Failed(e.to_string()))?;
            json["distance"] = serde_json::json!(decoder::min_distance(&code)?);
            writeln!(out, "{}", serde_json::to_string_pretty(&json).map_err(|e| CliError::Failed(e.to_string()))?)?;
        }
        Command::DecoderTable { code, max_weight } => {
            let code = load_code(&code.code)?;
            let table = SyndromeTable::build(&code, max_weight)?;
            out.write_all(table.dump().as_bytes())?;
        }
    }
    Ok(())
}
