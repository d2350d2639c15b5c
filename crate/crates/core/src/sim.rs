//! Monte Carlo logical error rates.
//!
//! Each trial samples a channel error from its own generator
//! ([`trial_rng`]), decodes the syndrome and classifies the residual
//! `sampled · decoded`. Trials run on the current rayon pool; counts are
//! summed, so results do not depend on the number of workers.

use std::io::Write;
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitVector;
use crate::channel::{trial_rng, ChannelConfig, ChannelSchedule};
use crate::code::{build_code, ConvolutionalCode, Syndrome};
use crate::decoder::{DecodeResult, TieMode, ViterbiDecoder};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

pub const CSV_HEADER: [&str; 10] = [
    "N",
    "n",
    "p_or_schedule_id",
    "trials",
    "logical_errors",
    "rate",
    "ci_low",
    "ci_high",
    "seed",
    "elapsed_s",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualClass {
    Success,
    /// Logical action bits `[Xbar_1, Zbar_1, …]` of the residual.
    LogicalError(BitVector),
}

impl ResidualClass {
    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub sampled_error: Pauli,
    pub decoded_error: Pauli,
    pub residual_class: ResidualClass,
}

pub fn classify_residual(
    code: &ConvolutionalCode,
    sampled: &Pauli,
    decoded: &Pauli,
) -> Result<ResidualClass> {
    let residual = sampled.multiply(decoded)?;
    if !code.syndrome_of(&residual)?.is_trivial() {
        return Err(Error::Precondition(
            "decoded error does not reproduce the sampled syndrome".into(),
        ));
    }
    let action = code.logical_action_unchecked(&residual);
    Ok(if action.is_zero() {
        ResidualClass::Success
    } else {
        ResidualClass::LogicalError(action)
    })
}

/// One trial with an arbitrary decoder. The decoder may consume the
/// trial generator after the error has been drawn.
pub fn run_trial<F>(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    master_seed: u64,
    trial: u64,
    decode: F,
) -> Result<TrialOutcome>
where
    F: FnOnce(&Syndrome, &mut dyn RngCore) -> Result<DecodeResult>,
{
    let mut rng = trial_rng(master_seed, trial);
    let sampled = schedule.sample_error(&mut rng);
    let syn = code.syndrome_of(&sampled)?;
    let decoded = decode(&syn, &mut rng)?.error;
    let residual_class = classify_residual(code, &sampled, &decoded)?;
    Ok(TrialOutcome {
        sampled_error: sampled,
        decoded_error: decoded,
        residual_class,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimStats {
    pub blocks: usize,
    pub n: usize,
    pub label: String,
    pub trials: u64,
    pub logical_errors: u64,
    /// Trials whose syndrome no allowed error explains.
    pub infeasible: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
    pub elapsed_s: f64,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0).min(p) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0).max(p) };
    (lo, hi)
}

#[derive(Default, Clone, Copy)]
struct Counts {
    errors: u64,
    infeasible: u64,
}

/// Runs `trials` trials of the trellis decoder. Infeasible syndromes are
/// counted, not raised; any other failure aborts the run.
pub fn run_trials(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    trials: u64,
    master_seed: u64,
    tie_mode: TieMode,
) -> Result<SimStats> {
    run_labeled(code, schedule, "schedule", trials, master_seed, tie_mode)
}

fn run_labeled(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    label: &str,
    trials: u64,
    master_seed: u64,
    tie_mode: TieMode,
) -> Result<SimStats> {
    if trials < 1 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    if schedule.num_qubits() != code.num_qubits() {
        return Err(Error::Dimension {
            expected: code.num_qubits(),
            found: schedule.num_qubits(),
        });
    }
    let decoder = ViterbiDecoder::new(code)?;
    let start = Instant::now();
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let outcome = run_trial(code, schedule, master_seed, t, |syn, rng| {
                let tie = match tie_mode {
                    TieMode::Lexicographic => TieMode::Lexicographic,
                    TieMode::Random { seed } => TieMode::Random {
                        seed: seed ^ rng.next_u64(),
                    },
                };
                decoder.decode(schedule, syn, tie)
            });
            match outcome {
                Ok(o) => Ok(Counts {
                    errors: (!o.residual_class.is_success()) as u64,
                    infeasible: 0,
                }),
                Err(Error::InfeasibleSyndrome) => Ok(Counts {
                    errors: 0,
                    infeasible: 1,
                }),
                Err(e) => Err(e),
            }
        })
        .try_reduce(Counts::default, |a, b| {
            Ok(Counts {
                errors: a.errors + b.errors,
                infeasible: a.infeasible + b.infeasible,
            })
        })?;
    let elapsed_s = start.elapsed().as_secs_f64();
    let (ci_low, ci_high) = wilson_interval(counts.errors, trials);
    Ok(SimStats {
        blocks: code.blocks(),
        n: code.num_qubits(),
        label: label.to_string(),
        trials,
        logical_errors: counts.errors,
        infeasible: counts.infeasible,
        rate: counts.errors as f64 / trials as f64,
        ci_low,
        ci_high,
        master_seed,
        elapsed_s,
    })
}

/// One row per `(N, channel)`, `N` outermost. Every row uses `master_seed`.
pub fn sweep_channels(
    blocks: &[usize],
    channels: &[ChannelConfig],
    trials: u64,
    master_seed: u64,
    tie_mode: TieMode,
) -> Result<Vec<SimStats>> {
    let mut rows = Vec::with_capacity(blocks.len() * channels.len());
    for &b in blocks {
        let code = build_code(b)?;
        for c in channels {
            let schedule = c.schedule(code.num_qubits())?;
            rows.push(run_labeled(
                &code,
                &schedule,
                &c.label(),
                trials,
                master_seed,
                tie_mode,
            )?);
        }
    }
    Ok(rows)
}

/// Depolarizing sweep over the cross product of `blocks` and `ps`.
pub fn sweep(blocks: &[usize], ps: &[f64], trials: u64, master_seed: u64) -> Result<Vec<SimStats>> {
    let channels: Vec<ChannelConfig> = ps.iter().map(|&p| ChannelConfig::Depolarizing { p }).collect();
    sweep_channels(blocks, &channels, trials, master_seed, TieMode::Lexicographic)
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Format(format!("write failed: {e}"))
}

/// CSV rows under [`CSV_HEADER`]. `elapsed_s` is left empty unless
/// `with_timing`, which keeps repeated runs byte-identical.
pub fn write_csv<W: Write>(rows: &[SimStats], out: W, with_timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_error)?;
    for r in rows {
        let elapsed = if with_timing {
            r.elapsed_s.to_string()
        } else {
            String::new()
        };
        w.write_record([
            r.blocks.to_string(),
            r.n.to_string(),
            r.label.clone(),
            r.trials.to_string(),
            r.logical_errors.to_string(),
            r.rate.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            r.master_seed.to_string(),
            elapsed,
        ])
        .map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

pub fn to_csv_string(rows: &[SimStats], with_timing: bool) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf, with_timing).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(rename = "N")]
    blocks: usize,
    n: usize,
    p_or_schedule_id: &'a str,
    trials: u64,
    logical_errors: u64,
    infeasible: u64,
    rate: f64,
    ci_low: f64,
    ci_high: f64,
    seed: u64,
    elapsed_s: Option<f64>,
}

/// The CSV columns as a JSON array of objects, plus the infeasible count.
pub fn to_json_string(rows: &[SimStats], with_timing: bool) -> String {
    let rows: Vec<JsonRow> = rows
        .iter()
        .map(|r| JsonRow {
            blocks: r.blocks,
            n: r.n,
            p_or_schedule_id: &r.label,
            trials: r.trials,
            logical_errors: r.logical_errors,
            infeasible: r.infeasible,
            rate: r.rate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            seed: r.master_seed,
            elapsed_s: with_timing.then_some(r.elapsed_s),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}
