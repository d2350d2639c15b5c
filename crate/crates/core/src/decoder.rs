//! Maximum-likelihood error estimation on the code trellis.
//!
//! Stage `i` (0..=N) keeps 16 candidates indexed by the Pauli pair on
//! qubits `(5i+1, 5i+2)`: `state = code(P_{5i+1}) + 4·code(P_{5i+2})`, with
//! `code` from [`SingleQubitPauli::code`] (I=0, X=1, Z=2, Y=3). A move
//! from stage `i` to `i+1` fixes the middle triple `(a, b, c)` on
//! `5i+3..5i+5`, indexed `m = code(a) + 4·code(b) + 16·code(c)`, and the
//! next pair. Only
//! `M_{4i+1}..M_{4i+4}` see that seven-qubit window, and they see nothing
//! else of the error.
//!
//! Scores are log-probabilities in fixed point, integer multiples of
//! `2^-60`. Integer sums do not depend on the order of the terms, so two
//! errors built from the same factors always tie exactly, here and in the
//! exhaustive decoder alike.
//!
//! Ties are broken toward the smallest `16·m + j` at each move and the
//! smallest final state. Among all optimal errors this returns the one
//! minimizing `Σ_q code(E_q)·4^(q-1)`: errors are compared from the last
//! qubit backwards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::ChannelSchedule;
use crate::code::{ConvolutionalCode, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, SingleQubitPauli};

pub const NUM_STATES: usize = 16;
pub const NUM_MIDDLES: usize = 64;
/// Largest qubit count the exhaustive decoder accepts.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieMode {
    #[default]
    Lexicographic,
    /// Uniform choice among tied candidates at every decision.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeResult {
    pub error: Pauli,
    pub log_likelihood: f64,
    pub tie_broken: bool,
}

fn pair_paulis(state: usize) -> [SingleQubitPauli; 2] {
    [
        SingleQubitPauli::from_code(state & 3),
        SingleQubitPauli::from_code(state >> 2),
    ]
}

fn middle_paulis(m: usize) -> [SingleQubitPauli; 3] {
    [
        SingleQubitPauli::from_code(m & 3),
        SingleQubitPauli::from_code((m >> 2) & 3),
        SingleQubitPauli::from_code(m >> 4),
    ]
}

fn anticommutes(a: &[SingleQubitPauli], b: &[SingleQubitPauli]) -> bool {
    a.iter().zip(b).filter(|(x, y)| x.anticommutes(**y)).count() % 2 == 1
}

fn local_paulis(p: &Pauli, start: usize, len: usize) -> Vec<SingleQubitPauli> {
    (start..start + len).map(|q| p.get(q).expect("in range")).collect()
}

/// Precomputed trellis moves for a code. Shared read-only between decodes.
#[derive(Clone, Debug)]
pub struct ViterbiDecoder {
    blocks: usize,
    n: usize,
    // states allowed at stage 0, per M_0 syndrome bit
    first: [Vec<usize>; 2],
    // states allowed at the end, per M∞ syndrome bit
    last: [Vec<usize>; 2],
    // moves[16 * k + signature] = (j, m) packed as 16 m + j, ascending
    moves: Vec<Vec<u16>>,
}

impl ViterbiDecoder {
    /// Builds the move tables from the code's own generators: `M_0` on
    /// qubits 1–2, `M_1..M_4` on the window 1–7 and `M∞` on the last two
    /// qubits. Every block is assumed to repeat block 0 shifted by five.
    pub fn new(code: &ConvolutionalCode) -> Result<Self> {
        let n = code.num_qubits();
        let gens = code.generators();
        let m0 = local_paulis(&gens[0], 1, 2);
        let minf = local_paulis(&gens[gens.len() - 1], n - 1, 2);
        let window: Vec<Vec<SingleQubitPauli>> =
            gens[1..5].iter().map(|g| local_paulis(g, 1, 7)).collect();
        for (k, g) in gens.iter().enumerate() {
            let outside = match k {
                0 => g.support().iter().any(|&q| q > 2),
                _ if k == gens.len() - 1 => g.support().iter().any(|&q| q < n - 1),
                _ => {
                    let i = (k - 1) / 4;
                    g.support().iter().any(|&q| q <= 5 * i || q > 5 * i + 7)
                        || local_paulis(g, 5 * i + 1, 7) != window[(k - 1) % 4]
                }
            };
            if outside {
                return Err(Error::Precondition(format!(
                    "generator {k} does not fit the trellis layout"
                )));
            }
        }

        let split = |pattern: &[SingleQubitPauli]| {
            let mut out = [Vec::new(), Vec::new()];
            for s in 0..NUM_STATES {
                out[anticommutes(&pair_paulis(s), pattern) as usize].push(s);
            }
            out
        };

        let mut moves = vec![Vec::new(); NUM_STATES * 16];
        let mut w = Vec::with_capacity(7);
        for m in 0..NUM_MIDDLES {
            for j in 0..NUM_STATES {
                for k in 0..NUM_STATES {
                    w.clear();
                    w.extend(pair_paulis(j));
                    w.extend(middle_paulis(m));
                    w.extend(pair_paulis(k));
                    let sig = window
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (t, g)| acc | ((anticommutes(&w, g) as usize) << t));
                    moves[16 * k + sig].push((16 * m + j) as u16);
                }
            }
        }

        Ok(Self {
            blocks: code.blocks(),
            n,
            first: split(&m0),
            last: split(&minf),
            moves,
        })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    fn check(&self, schedule: &ChannelSchedule, syn: &Syndrome) -> Result<()> {
        if schedule.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: schedule.num_qubits(),
            });
        }
        if syn.len() != 4 * self.blocks + 2 {
            return Err(Error::Dimension {
                expected: 4 * self.blocks + 2,
                found: syn.len(),
            });
        }
        Ok(())
    }

    fn signature(syn: &Syndrome, stage: usize) -> usize {
        (0..4).fold(0, |acc, t| acc | ((syn.get(4 * stage + 1 + t) as usize) << t))
    }

    /// Moves `(j, m)` into state `k` compatible with the four syndrome bits
    /// `signature` (bit `t` = `M_{4i+1+t}`), packed as `16 m + j`.
    pub fn moves_into(&self, k: usize, signature: usize) -> &[u16] {
        &self.moves[16 * k + signature]
    }

    pub fn decode(
        &self,
        schedule: &ChannelSchedule,
        syn: &Syndrome,
        tie: TieMode,
    ) -> Result<DecodeResult> {
        self.check(schedule, syn)?;
        let trellis = self.forward(schedule, syn, tie)?;
        Ok(trellis.finish(self))
    }

    fn forward(&self, schedule: &ChannelSchedule, syn: &Syndrome, tie: TieMode) -> Result<Trellis> {
        let logs = score_table(schedule);
        let mut picker = TiePicker::new(tie);
        let mut metrics = [DEAD; NUM_STATES];
        for &s in &self.first[syn.get(0) as usize] {
            metrics[s] = pair_score(&logs, 0, s);
        }
        if metrics.iter().all(|v| *v == DEAD) {
            return Err(Error::InfeasibleSyndrome);
        }

        let mut back = Vec::with_capacity(self.blocks);
        let mut tied = Vec::with_capacity(self.blocks);
        let mut ll_m = [DEAD; NUM_MIDDLES];
        let mut ll_k = [DEAD; NUM_STATES];
        for i in 0..self.blocks {
            let base = 5 * i;
            for (m, slot) in ll_m.iter_mut().enumerate() {
                *slot = middle_score(&logs, base + 2, m);
            }
            for (k, slot) in ll_k.iter_mut().enumerate() {
                *slot = pair_score(&logs, base + 5, k);
            }
            let sig = Self::signature(syn, i);
            let mut next = [DEAD; NUM_STATES];
            let mut bp = [u16::MAX; NUM_STATES];
            let mut tie_here = [false; NUM_STATES];
            for k in 0..NUM_STATES {
                if ll_k[k] == DEAD {
                    continue;
                }
                let mut best = DEAD;
                let mut arg = u16::MAX;
                picker.reset();
                for &packed in &self.moves[16 * k + sig] {
                    let (mj, mm) = (metrics[(packed & 15) as usize], ll_m[(packed >> 4) as usize]);
                    if mj == DEAD || mm == DEAD {
                        continue;
                    }
                    let v = mj + mm + ll_k[k];
                    if v > best {
                        best = v;
                        arg = packed;
                        picker.first();
                    } else if v == best && picker.another() {
                        arg = packed;
                    }
                }
                next[k] = best;
                bp[k] = arg;
                tie_here[k] = picker.count > 1;
            }
            if next.iter().all(|v| *v == DEAD) {
                return Err(Error::InfeasibleSyndrome);
            }
            metrics = next;
            back.push(bp);
            tied.push(tie_here);
        }

        let mut best = DEAD;
        let mut end = usize::MAX;
        picker.reset();
        for &s in &self.last[syn.get(4 * self.blocks + 1) as usize] {
            let v = metrics[s];
            if v > best {
                best = v;
                end = s;
                picker.first();
            } else if v == best && v != DEAD && picker.another() {
                end = s;
            }
        }
        if end == usize::MAX {
            return Err(Error::InfeasibleSyndrome);
        }
        Ok(Trellis {
            back,
            tied,
            end,
            end_tied: picker.count > 1,
            best,
        })
    }

    /// For every stage `t` in `1..=N`, the number of stages one has to go
    /// back before all live survivors at `t` share their history; `None`
    /// when they still differ at stage 0. Survivors agreeing at stage `t - lag` agree
    /// on every qubit up to `5(t - lag) + 2`.
    pub fn survivor_merge_lags(
        &self,
        schedule: &ChannelSchedule,
        syn: &Syndrome,
    ) -> Result<Vec<Option<usize>>> {
        self.check(schedule, syn)?;
        let t = self.forward(schedule, syn, TieMode::Lexicographic)?;
        let mut live_after = Vec::with_capacity(self.blocks);
        // live states at stage s + 1 are those with a backpointer
        for bp in &t.back {
            live_after.push(
                (0..NUM_STATES)
                    .filter(|&k| bp[k] != u16::MAX)
                    .collect::<Vec<_>>(),
            );
        }
        let mut lags = Vec::with_capacity(self.blocks);
        for stage in 1..=self.blocks {
            let mut set = live_after[stage - 1].clone();
            let mut s = stage;
            while set.len() > 1 && s > 0 {
                let bp = &t.back[s - 1];
                set = set.iter().map(|&k| (bp[k] & 15) as usize).collect();
                set.sort_unstable();
                set.dedup();
                s -= 1;
            }
            lags.push((set.len() <= 1).then_some(stage - s));
        }
        Ok(lags)
    }
}

type Score = i128;

/// Score of a zero-probability factor.
const DEAD: Score = Score::MIN;
const SCORE_UNIT: f64 = (1u64 << 60) as f64;

fn score_table(schedule: &ChannelSchedule) -> Vec<[Score; 4]> {
    schedule
        .log_table()
        .iter()
        .map(|row| {
            row.map(|l| {
                if l == f64::NEG_INFINITY {
                    DEAD
                } else {
                    (l * SCORE_UNIT).round() as Score
                }
            })
        })
        .collect()
}

fn plus(a: Score, b: Score) -> Score {
    if a == DEAD || b == DEAD {
        DEAD
    } else {
        a + b
    }
}

fn score_to_ll(s: Score) -> f64 {
    s as f64 / SCORE_UNIT
}

fn pair_score(logs: &[[Score; 4]], q0: usize, state: usize) -> Score {
    plus(logs[q0][state & 3], logs[q0 + 1][state >> 2])
}

fn middle_score(logs: &[[Score; 4]], q0: usize, m: usize) -> Score {
    plus(
        plus(logs[q0][m & 3], logs[q0 + 1][(m >> 2) & 3]),
        logs[q0 + 2][m >> 4],
    )
}

struct Trellis {
    back: Vec<[u16; NUM_STATES]>,
    tied: Vec<[bool; NUM_STATES]>,
    end: usize,
    end_tied: bool,
    best: Score,
}

impl Trellis {
    fn finish(self, dec: &ViterbiDecoder) -> DecodeResult {
        let mut e = Pauli::identity(dec.n);
        let mut tie = self.end_tied;
        let mut k = self.end;
        for i in (0..dec.blocks).rev() {
            let base = 5 * i;
            let [d, f] = pair_paulis(k);
            e.put(base + 5, d);
            e.put(base + 6, f);
            tie |= self.tied[i][k];
            let packed = self.back[i][k] as usize;
            for (off, p) in middle_paulis(packed >> 4).into_iter().enumerate() {
                e.put(base + 2 + off, p);
            }
            k = packed & 15;
        }
        let [a, b] = pair_paulis(k);
        e.put(0, a);
        e.put(1, b);
        DecodeResult {
            error: e,
            log_likelihood: score_to_ll(self.best),
            tie_broken: tie,
        }
    }
}

struct TiePicker {
    rng: Option<ChaCha8Rng>,
    count: u64,
}

impl TiePicker {
    fn new(mode: TieMode) -> Self {
        let rng = match mode {
            TieMode::Lexicographic => None,
            TieMode::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Self { rng, count: 0 }
    }

    fn reset(&mut self) {
        self.count = 0;
    }

    fn first(&mut self) {
        self.count = 1;
    }

    /// Registers another tied candidate; true if it should replace the
    /// current choice (reservoir sampling, never in lexicographic mode).
    fn another(&mut self) -> bool {
        self.count += 1;
        match &mut self.rng {
            None => false,
            Some(rng) => rng.random_range(0..self.count) == 0,
        }
    }
}

/// Decode with the lexicographic tie rule.
pub fn viterbi_decode(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    syn: &Syndrome,
) -> Result<DecodeResult> {
    ViterbiDecoder::new(code)?.decode(schedule, syn, TieMode::Lexicographic)
}

/// Number of windows `(j, m, k)` at stage `i` that reproduce the four
/// syndrome bits `signature` and have nonzero probability.
pub fn transition_live_count(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    stage: usize,
    signature: usize,
) -> Result<usize> {
    if stage >= code.blocks() || signature >= 16 {
        return Err(Error::Domain(format!(
            "stage {stage} / signature {signature} out of range"
        )));
    }
    let dec = ViterbiDecoder::new(code)?;
    let logs = score_table(schedule);
    let base = 5 * stage;
    let live_pair = |q0: usize, s: usize| pair_score(&logs, q0, s) != DEAD;
    let live_mid = |m: usize| middle_score(&logs, base + 2, m) != DEAD;
    let mut count = 0;
    for k in 0..NUM_STATES {
        if !live_pair(base + 5, k) {
            continue;
        }
        count += dec
            .moves_into(k, signature)
            .iter()
            .filter(|&&p| live_pair(base, (p & 15) as usize) && live_mid((p >> 4) as usize))
            .count();
    }
    Ok(count)
}

/// Stage-0 states compatible with the `M_0` bit and of nonzero probability.
pub fn initial_live_count(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    m0_bit: bool,
) -> Result<usize> {
    let dec = ViterbiDecoder::new(code)?;
    let logs = score_table(schedule);
    Ok(dec.first[m0_bit as usize]
        .iter()
        .filter(|&&s| pair_score(&logs, 0, s) != DEAD)
        .count())
}

/// Exhaustive enumeration of every error.
struct Enumerator {
    blocks: usize,
    logs: Vec<[Score; 4]>,
    // masks[q][code] = syndrome index of that single-qubit Pauli
    masks: Vec<[u64; 4]>,
}

impl Enumerator {
    fn new(code: &ConvolutionalCode, schedule: &ChannelSchedule) -> Result<Self> {
        let n = code.num_qubits();
        if n > BRUTE_FORCE_MAX_QUBITS {
            return Err(Error::TooLarge {
                n,
                limit: BRUTE_FORCE_MAX_QUBITS,
            });
        }
        if schedule.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                found: schedule.num_qubits(),
            });
        }
        let mut masks = Vec::with_capacity(n);
        for q in 1..=n {
            let mut row = [0u64; 4];
            for p in SingleQubitPauli::ALL {
                row[p.code()] = code.syndrome_of(&Pauli::single(n, q, p)?)?.to_index();
            }
            masks.push(row);
        }
        Ok(Self {
            blocks: code.blocks(),
            logs: score_table(schedule),
            masks,
        })
    }

    fn pair_mask(&self, q0: usize, s: usize) -> u64 {
        self.masks[q0][s & 3] ^ self.masks[q0 + 1][s >> 2]
    }

    fn mid_mask(&self, q0: usize, m: usize) -> u64 {
        self.masks[q0][m & 3] ^ self.masks[q0 + 1][(m >> 2) & 3] ^ self.masks[q0 + 2][m >> 4]
    }

    /// Calls `visit(syndrome_index, score, key)` for every error of finite
    /// score, with `key = Σ_q code(E_q)·4^(q-1)`.
    fn run(&self, visit: &mut impl FnMut(u64, Score, u64)) {
        for s in 0..NUM_STATES {
            let v = pair_score(&self.logs, 0, s);
            if v == DEAD {
                continue;
            }
            self.stage(0, v, self.pair_mask(0, s), s as u64, visit);
        }
    }

    fn stage(&self, i: usize, v: Score, syn: u64, key: u64, visit: &mut impl FnMut(u64, Score, u64)) {
        if i == self.blocks {
            visit(syn, v, key);
            return;
        }
        let base = 5 * i;
        for m in 0..NUM_MIDDLES {
            let vm = plus(v, middle_score(&self.logs, base + 2, m));
            if vm == DEAD {
                continue;
            }
            let sm = syn ^ self.mid_mask(base + 2, m);
            let km = key | ((m as u64) << (10 * i + 4));
            for k in 0..NUM_STATES {
                let vk = plus(vm, pair_score(&self.logs, base + 5, k));
                if vk == DEAD {
                    continue;
                }
                let kk = km | ((k as u64) << (10 * (i + 1)));
                self.stage(i + 1, vk, sm ^ self.pair_mask(base + 5, k), kk, visit);
            }
        }
    }

    fn error_from_key(&self, key: u64) -> Pauli {
        let n = 5 * self.blocks + 2;
        let mut e = Pauli::identity(n);
        for q in 0..n {
            e.put(q, SingleQubitPauli::from_code(((key >> (2 * q)) & 3) as usize));
        }
        e
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: Score,
    key: u64,
    count: u64,
}

impl Best {
    fn offer(slot: &mut Option<Best>, value: Score, key: u64) {
        match slot {
            None => {
                *slot = Some(Best {
                    value,
                    key,
                    count: 1,
                })
            }
            Some(b) => {
                if value > b.value {
                    *b = Best {
                        value,
                        key,
                        count: 1,
                    };
                } else if value == b.value {
                    b.count += 1;
                    b.key = b.key.min(key);
                }
            }
        }
    }
}

/// Most likely error with syndrome `syn`, by enumerating all `4^n` Paulis.
/// Refuses codes with more than [`BRUTE_FORCE_MAX_QUBITS`] qubits.
pub fn brute_force_ml(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
    syn: &Syndrome,
) -> Result<DecodeResult> {
    let en = Enumerator::new(code, schedule)?;
    if syn.len() != code.num_generators() {
        return Err(Error::Dimension {
            expected: code.num_generators(),
            found: syn.len(),
        });
    }
    let target = syn.to_index();
    let mut best = None;
    en.run(&mut |s, v, key| {
        if s == target {
            Best::offer(&mut best, v, key);
        }
    });
    let b = best.ok_or(Error::InfeasibleSyndrome)?;
    Ok(DecodeResult {
        error: en.error_from_key(b.key),
        log_likelihood: score_to_ll(b.value),
        tie_broken: b.count > 1,
    })
}

/// [`brute_force_ml`] for every syndrome at once, indexed by
/// [`Syndrome::to_index`]; `None` marks syndromes no possible error has.
pub fn brute_force_table(
    code: &ConvolutionalCode,
    schedule: &ChannelSchedule,
) -> Result<Vec<Option<DecodeResult>>> {
    let en = Enumerator::new(code, schedule)?;
    let mut best: Vec<Option<Best>> = vec![None; 1 << code.num_generators()];
    en.run(&mut |s, v, key| Best::offer(&mut best[s as usize], v, key));
    Ok(best
        .into_iter()
        .map(|b| {
            b.map(|b| DecodeResult {
                error: en.error_from_key(b.key),
                log_likelihood: score_to_ll(b.value),
                tie_broken: b.count > 1,
            })
        })
        .collect())
}
