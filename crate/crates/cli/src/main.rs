//! `qconv` command-line front end.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on usage, config or
//! I/O errors.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use qconv::channel::trial_rng;
use qconv::circuits::{
    build_decoding_circuit, build_encoding_circuit, encoder_contract_holds,
    verify_layer_commutation, NUM_LAYERS,
};
use qconv::decoder::brute_force_table;
use qconv::sim::{sweep_channels, to_csv_string, to_json_string};
use qconv::{
    build_code, verify_code, ChannelConfig, StabilizerTableau, Syndrome, TieMode,
    ViterbiDecoder,
};

use crate::config::{SimulateConfig, SweepConfig};

/// Seed used by randomized commands when none is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "qconv", version, about = "Rate-1/5 quantum convolutional code toolkit")]
struct Cli {
    /// Worker threads for parallel trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the code, its logical operators and the encoding circuit.
    Verify {
        #[arg(long)]
        blocks: usize,
    },
    /// Most likely error for a syndrome.
    Decode(DecodeArgs),
    /// Compare the trellis decoder with exhaustive search (N <= 2).
    OracleCheck(OracleArgs),
    /// Monte Carlo logical error rate for one configuration.
    Simulate(SimArgs),
    /// Monte Carlo over every (N, channel) pair of a sweep config.
    Sweep(SimArgs),
    /// Write the layered encoding or decoding circuit.
    ExportCircuit {
        #[arg(long)]
        blocks: usize,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the code's operators as JSON.
    Describe {
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Encode,
    Decode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lexicographic,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    blocks: usize,
    /// Bits for M_0, M_1, ..., M_4N, M_inf.
    #[arg(long)]
    syndrome: String,
    /// Channel config file.
    #[arg(long)]
    channel: PathBuf,
    #[arg(long, value_enum, default_value = "lexicographic")]
    tie: Tie,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    blocks: usize,
    #[arg(long)]
    channel: PathBuf,
    #[arg(long, conflicts_with = "samples")]
    all_syndromes: bool,
    #[arg(long, required_unless_present = "all_syndromes")]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Fill the elapsed_s column.
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Check(String),
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(usage),
    }
}

fn read_channel(path: &Path) -> Result<ChannelConfig, Failure> {
    ChannelConfig::from_json(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn code_for(blocks: usize) -> Result<qconv::ConvolutionalCode, Failure> {
    build_code(blocks).map_err(usage)
}

fn verify(blocks: usize) -> CmdResult {
    let code = code_for(blocks)?;
    let report = verify_code(&code);
    let enc = build_encoding_circuit(blocks).map_err(usage)?;
    let dec = build_decoding_circuit(blocks).map_err(usage)?;

    let mut inputs: Vec<Vec<bool>> = vec![vec![false; blocks], vec![true; blocks]];
    inputs.push((0..blocks).map(|i| i % 2 == 0).collect());
    if blocks <= 6 {
        inputs = (0u32..1 << blocks)
            .map(|m| (0..blocks).map(|i| (m >> i) & 1 == 1).collect())
            .collect();
    } else {
        let mut rng = trial_rng(DEFAULT_SEED, 0);
        inputs.extend((0..8).map(|_| (0..blocks).map(|_| rng.random::<bool>()).collect()));
    }
    let contract = inputs
        .iter()
        .all(|c| encoder_contract_holds(&code, &enc, c).unwrap_or(false));

    let n = code.num_qubits();
    let start = StabilizerTableau::from_bits(
        &(0..n).map(|q| q % 5 == 0).collect::<Vec<_>>(),
        n,
    )
    .map_err(usage)?;
    let mut t = start.clone();
    let round_trip = enc.apply_to(&mut t).is_ok() && dec.apply_to(&mut t).is_ok() && t == start;

    let logical = &report.logical_conditions;
    let checks = [
        ("generators commute", report.generator_commutation),
        ("generators independent", report.generators_independent()),
        ("encoded dimension", report.encoded_dimension_exponent == blocks),
        (
            "logicals in normalizer, outside stabilizer",
            logical.operators.iter().all(|o| o.passed()),
        ),
        ("logical commutation relations", logical.pairs.iter().all(|p| p.passed())),
        (
            "six layers",
            enc.num_layers() == NUM_LAYERS && dec.num_layers() == NUM_LAYERS,
        ),
        (
            "gates commute within layers",
            verify_layer_commutation(&enc) && verify_layer_commutation(&dec),
        ),
        ("encoder stabilizer contract", contract),
        ("decoder inverts encoder", round_trip),
    ];
    println!(
        "N={blocks} n={} generators={} rank={}",
        n, report.num_generators, report.generator_rank
    );
    let mut failed = Vec::new();
    for (name, ok) in checks {
        println!("{:<4} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn decode(args: DecodeArgs) -> CmdResult {
    let code = code_for(args.blocks)?;
    let expected = code.num_generators();
    let syn: Syndrome = args.syndrome.parse().map_err(usage)?;
    if syn.len() != expected {
        return Err(usage(format!(
            "syndrome has {} bits, expected {expected} for N={}",
            syn.len(),
            args.blocks
        )));
    }
    let schedule = read_channel(&args.channel)?
        .schedule(code.num_qubits())
        .map_err(usage)?;
    let tie = match args.tie {
        Tie::Lexicographic => TieMode::Lexicographic,
        Tie::Random => TieMode::Random { seed: args.seed },
    };
    let decoder = ViterbiDecoder::new(&code).map_err(usage)?;
    match decoder.decode(&schedule, &syn, tie) {
        Ok(r) => emit(None, &(serde_json::to_string_pretty(&r).map_err(usage)? + "\n")),
        Err(qconv::Error::InfeasibleSyndrome) => Err(Failure::Check(
            "syndrome is infeasible under this channel".into(),
        )),
        Err(e) => Err(usage(e)),
    }
}

#[derive(Serialize)]
struct OracleReport {
    blocks: usize,
    syndromes: usize,
    mismatches: usize,
    max_abs_delta_ll: f64,
}

fn oracle_check(args: OracleArgs) -> CmdResult {
    if args.blocks > 2 {
        return Err(usage(format!(
            "oracle-check enumerates 4^n errors and is limited to N <= 2, got N={}",
            args.blocks
        )));
    }
    let code = code_for(args.blocks)?;
    let schedule = read_channel(&args.channel)?
        .schedule(code.num_qubits())
        .map_err(usage)?;
    let table = brute_force_table(&code, &schedule).map_err(usage)?;
    let decoder = ViterbiDecoder::new(&code).map_err(usage)?;
    let indices: Vec<usize> = match args.samples {
        Some(k) if !args.all_syndromes => {
            let mut rng = trial_rng(args.seed, 0);
            (0..k).map(|_| rng.random_range(0..table.len())).collect()
        }
        _ => (0..table.len()).collect(),
    };
    let len = code.num_generators();
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for &idx in &indices {
        let syn = Syndrome::from_index(idx as u64, len);
        let fast = decoder.decode(&schedule, &syn, TieMode::Lexicographic);
        match (&table[idx], fast) {
            (Some(o), Ok(r)) => {
                let d = (o.log_likelihood - r.log_likelihood).abs();
                worst = worst.max(d);
                let consistent = code.syndrome_of(&r.error).map(|s| s == syn).unwrap_or(false);
                if d > 1e-9 || !consistent {
                    mismatches += 1;
                }
            }
            (None, Err(qconv::Error::InfeasibleSyndrome)) => {}
            _ => mismatches += 1,
        }
    }
    let report = OracleReport {
        blocks: args.blocks,
        syndromes: indices.len(),
        mismatches,
        max_abs_delta_ll: worst,
    };
    emit(None, &(serde_json::to_string_pretty(&report).map_err(usage)? + "\n"))?;
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{mismatches} mismatching syndromes")))
    }
}

fn write_rows(rows: &[qconv::SimStats], args: &SimArgs) -> CmdResult {
    let text = match args.format {
        Format::Csv => to_csv_string(rows, args.timing),
        Format::Json => to_json_string(rows, args.timing),
    };
    emit(args.out.as_deref(), &text)
}

fn simulate(args: SimArgs) -> CmdResult {
    let cfg: SimulateConfig = config::parse(&read_file(&args.config)?, &args.config)?;
    let rows = sweep_channels(
        &[cfg.blocks],
        std::slice::from_ref(&cfg.channel),
        cfg.trials,
        cfg.seed,
        cfg.tie_mode(),
    )
    .map_err(usage)?;
    write_rows(&rows, &args)
}

fn sweep(args: SimArgs) -> CmdResult {
    let cfg: SweepConfig = config::parse(&read_file(&args.config)?, &args.config)?;
    let channels = cfg.channels().map_err(usage)?;
    let rows = sweep_channels(&cfg.blocks, &channels, cfg.trials, cfg.seed, cfg.tie_mode())
        .map_err(usage)?;
    write_rows(&rows, &args)
}

fn export_circuit(blocks: usize, which: Which, out: Option<&Path>) -> CmdResult {
    let circuit = match which {
        Which::Encode => build_encoding_circuit(blocks),
        Which::Decode => build_decoding_circuit(blocks),
    }
    .map_err(usage)?;
    emit(out, &circuit.to_text())
}

fn describe(blocks: usize, out: Option<&Path>) -> CmdResult {
    let code = code_for(blocks)?;
    let json = serde_json::to_string_pretty(&code.description()).map_err(usage)?;
    emit(out, &(json + "\n"))
}

fn run(cli: Cli) -> CmdResult {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(usage)?;
    }
    match cli.command {
        Command::Verify { blocks } => verify(blocks),
        Command::Decode(a) => decode(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::ExportCircuit { blocks, which, out } => export_circuit(blocks, which, out.as_deref()),
        Command::Describe { blocks, out } => describe(blocks, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("qconv: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("qconv: {msg}");
            ExitCode::from(2)
        }
    }
}
