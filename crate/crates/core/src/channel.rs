//! Memoryless Pauli channels.
//!
//! A schedule gives every qubit its own `(p_I, p_X, p_Y, p_Z)`; position
//! doubles as time for a streamed code. Sampling uses ChaCha8. Trial `t`
//! of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `t`, so a trial's
//! randomness never depends on which worker runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, SingleQubitPauli};

pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Per-qubit error probabilities, stored in `(I, X, Y, Z)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSchedule {
    probs: Vec<[f64; 4]>,
    // log probabilities indexed by `SingleQubitPauli::code`
    logs: Vec<[f64; 4]>,
}

fn check_quadruple(q: usize, p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Channel(format!(
            "qubit {q}: probabilities must be finite and nonnegative, got {p:?}"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::Channel(format!(
            "qubit {q}: probabilities sum to {sum}, not 1"
        )));
    }
    Ok(())
}

impl ChannelSchedule {
    pub fn from_probs(probs: Vec<[f64; 4]>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Channel("schedule covers no qubits".into()));
        }
        for (i, p) in probs.iter().enumerate() {
            check_quadruple(i + 1, p)?;
        }
        let logs = probs
            .iter()
            .map(|p| {
                let mut l = [0.0; 4];
                for s in SingleQubitPauli::ALL {
                    l[s.code()] = p[prob_slot(s)].ln();
                }
                l
            })
            .collect();
        Ok(Self { probs, logs })
    }

    /// `(1 - p, p/3, p/3, p/3)` on every qubit.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Channel(format!("depolarizing p={p} outside [0, 1]")));
        }
        let q = p / 3.0;
        Self::from_probs(vec![[1.0 - p, q, q, q]; n])
    }

    pub fn num_qubits(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[[f64; 4]] {
        &self.probs
    }

    /// Probability of `p` on 1-based qubit `q`.
    pub fn prob(&self, q: usize, p: SingleQubitPauli) -> f64 {
        self.probs[q - 1][prob_slot(p)]
    }

    pub fn log_prob(&self, q: usize, p: SingleQubitPauli) -> f64 {
        self.logs[q - 1][p.code()]
    }

    /// Log probabilities per qubit (0-based), indexed by `SingleQubitPauli::code`.
    pub fn log_table(&self) -> &[[f64; 4]] {
        &self.logs
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.probs.len() {
            return Err(Error::Dimension {
                expected: self.probs.len(),
                found: n,
            });
        }
        Ok(())
    }

    /// `Σ_q log probs[q][e_q]`, `-inf` when some factor is impossible.
    pub fn log_likelihood(&self, e: &Pauli) -> Result<f64> {
        self.check_len(e.num_qubits())?;
        Ok(e.iter().zip(&self.logs).map(|(p, l)| l[p.code()]).sum())
    }

    pub fn sample_error<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let mut e = Pauli::identity(self.probs.len());
        for (q, p) in self.probs.iter().enumerate() {
            let u: f64 = rng.random();
            let s = if u < p[0] {
                SingleQubitPauli::I
            } else if u < p[0] + p[1] {
                SingleQubitPauli::X
            } else if u < p[0] + p[1] + p[2] {
                SingleQubitPauli::Y
            } else if p[3] > 0.0 {
                SingleQubitPauli::Z
            } else {
                // rounding pushed u past the last nonzero bucket
                last_possible(p)
            };
            if s != SingleQubitPauli::I {
                e.put(q, s);
            }
        }
        e
    }

    /// Quadruples with X and Z swapped on every qubit.
    pub fn swap_x_z(&self) -> Self {
        let probs = self.probs.iter().map(|p| [p[0], p[3], p[2], p[1]]).collect();
        Self::from_probs(probs).expect("permuted schedule stays valid")
    }

    /// Qubit order reversed.
    pub fn reversed(&self) -> Self {
        Self::from_probs(self.probs.iter().rev().copied().collect())
            .expect("reversed schedule stays valid")
    }
}

fn prob_slot(p: SingleQubitPauli) -> usize {
    match p {
        SingleQubitPauli::I => 0,
        SingleQubitPauli::X => 1,
        SingleQubitPauli::Y => 2,
        SingleQubitPauli::Z => 3,
    }
}

fn last_possible(p: &[f64; 4]) -> SingleQubitPauli {
    [
        SingleQubitPauli::Z,
        SingleQubitPauli::Y,
        SingleQubitPauli::X,
        SingleQubitPauli::I,
    ]
    .into_iter()
    .find(|&s| p[prob_slot(s)] > 0.0)
    .unwrap_or(SingleQubitPauli::I)
}

/// Generator for trial `trial` of a run seeded with `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Channel config file contents.
///
/// ```json
/// {"type": "depolarizing", "p": 0.01}
/// {"type": "schedule", "probs": [[0.97, 0.01, 0.01, 0.01], ...]}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelConfig {
    Depolarizing {
        p: f64,
    },
    Schedule {
        probs: Vec<[f64; 4]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
}

impl ChannelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("channel config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Schedule for an `n`-qubit code.
    pub fn schedule(&self, n: usize) -> Result<ChannelSchedule> {
        match self {
            Self::Depolarizing { p } => ChannelSchedule::depolarizing(n, *p),
            Self::Schedule { probs, .. } => {
                if probs.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: probs.len(),
                    });
                }
                ChannelSchedule::from_probs(probs.clone())
            }
        }
    }

    /// Label for the `p_or_schedule_id` output column.
    pub fn label(&self) -> String {
        match self {
            Self::Depolarizing { p } => p.to_string(),
            Self::Schedule { id, .. } => id.clone().unwrap_or_else(|| "schedule".into()),
        }
    }
}

impl From<&ChannelSchedule> for ChannelConfig {
    fn from(s: &ChannelSchedule) -> Self {
        Self::Schedule {
            probs: s.probs.clone(),
            id: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn depolarizing_quadruples() {
        let s = ChannelSchedule::depolarizing(4, 0.0).unwrap();
        assert!(s.probs().iter().all(|p| *p == [1.0, 0.0, 0.0, 0.0]));
        let s = ChannelSchedule::depolarizing(12, 0.03).unwrap();
        assert_eq!(s.num_qubits(), 12);
        for p in s.probs() {
            assert!((p[0] - 0.97).abs() < 1e-15);
            for v in &p[1..] {
                assert!((v - 0.01).abs() < 1e-15);
            }
        }
        let s = ChannelSchedule::depolarizing(2, 1.0).unwrap();
        assert_eq!(s.probs()[1], [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert!(ChannelSchedule::depolarizing(2, 1.5).is_err());
        assert!(ChannelSchedule::depolarizing(2, -0.1).is_err());
    }

    #[test]
    fn bad_schedules_rejected() {
        assert!(ChannelSchedule::from_probs(vec![[0.5, 0.5, 0.1, 0.0]]).is_err());
        assert!(ChannelSchedule::from_probs(vec![[1.1, -0.1, 0.0, 0.0]]).is_err());
        assert!(ChannelSchedule::from_probs(vec![[f64::NAN, 0.0, 0.0, 1.0]]).is_err());
        assert!(ChannelSchedule::from_probs(vec![]).is_err());
        assert!(ChannelSchedule::from_probs(vec![[1.0 - 1e-13, 0.0, 0.0, 0.0]]).is_ok());
    }

    #[test]
    fn likelihood_examples() {
        let p = 0.03;
        let s = ChannelSchedule::depolarizing(7, p).unwrap();
        let id = Pauli::identity(7);
        let ll = s.log_likelihood(&id).unwrap();
        assert!((ll - 7.0 * (0.97f64).ln()).abs() < 1e-12);
        let x: Pauli = "XIIIIII".parse().unwrap();
        let ll = s.log_likelihood(&x).unwrap();
        assert!((ll - (6.0 * (0.97f64).ln() + (0.01f64).ln())).abs() < 1e-12);
        assert!(s.log_likelihood(&Pauli::identity(6)).is_err());

        let no_y = ChannelSchedule::from_probs(vec![[0.9, 0.05, 0.0, 0.05]; 3]).unwrap();
        let y: Pauli = "IYI".parse().unwrap();
        assert_eq!(no_y.log_likelihood(&y).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn noiseless_sampling_is_identity() {
        let s = ChannelSchedule::depolarizing(50, 0.0).unwrap();
        let mut rng = trial_rng(3, 0);
        for _ in 0..100 {
            assert!(s.sample_error(&mut rng).is_identity());
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = ChannelSchedule::depolarizing(200, 0.2).unwrap();
        let a = s.sample_error(&mut trial_rng(17, 4));
        let b = s.sample_error(&mut trial_rng(17, 4));
        let c = s.sample_error(&mut trial_rng(17, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn non_identity_fraction_within_three_sigma() {
        let n = 10_000;
        let p = 0.1;
        let s = ChannelSchedule::depolarizing(n, p).unwrap();
        let e = s.sample_error(&mut trial_rng(2024, 0));
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let dev = (e.weight() as f64 - n as f64 * p).abs();
        assert!(dev < 3.0 * sigma, "weight {} vs {}", e.weight(), n as f64 * p);
    }

    #[test]
    fn sampling_frequencies_chi_square() {
        // Asymmetric quadruple; 3 degrees of freedom, 0.1% critical value 16.27.
        let quad = [0.55, 0.25, 0.05, 0.15];
        let n = 40_000;
        let s = ChannelSchedule::from_probs(vec![quad; n]).unwrap();
        let e = s.sample_error(&mut trial_rng(99, 1));
        let mut counts = [0usize; 4];
        for p in e.iter() {
            counts[prob_slot(p)] += 1;
        }
        let chi2: f64 = counts
            .iter()
            .zip(quad)
            .map(|(&c, p)| {
                let expected = p * n as f64;
                (c as f64 - expected).powi(2) / expected
            })
            .sum();
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts {counts:?}");
    }

    #[test]
    fn forbidden_paulis_never_sampled() {
        let s = ChannelSchedule::from_probs(vec![[0.0, 0.5, 0.0, 0.5]; 2000]).unwrap();
        let e = s.sample_error(&mut trial_rng(5, 0));
        assert!(e.iter().all(|p| p == SingleQubitPauli::X || p == SingleQubitPauli::Z));
    }

    #[test]
    fn config_parsing() {
        let c = ChannelConfig::from_json(r#"{"type":"depolarizing","p":0.01}"#).unwrap();
        assert_eq!(c, ChannelConfig::Depolarizing { p: 0.01 });
        assert_eq!(c.schedule(7).unwrap().num_qubits(), 7);
        let c = ChannelConfig::from_json(
            r#"{"type":"schedule","probs":[[0.9,0.1,0,0],[1,0,0,0]]}"#,
        )
        .unwrap();
        assert!(c.schedule(2).is_ok());
        assert!(matches!(c.schedule(3), Err(Error::Dimension { .. })));
        let err = ChannelConfig::from_json(r#"{"type":"depolarizing","p":0.01,"q":1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains('q'), "{err}");
        assert!(ChannelConfig::from_json(r#"{"type":"erasure","p":0.1}"#).is_err());
        assert!(ChannelConfig::from_json(r#"{"p":0.1}"#).is_err());
        assert!(ChannelConfig::Depolarizing { p: 2.0 }.schedule(3).is_err());
    }

    fn arb_quadruple() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(0.0f64..1.0).prop_filter_map("nonzero", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| {
                let mut q = w.map(|v| v / s);
                q[0] = 1.0 - q[1] - q[2] - q[3];
                q
            })
        })
        .prop_filter("valid", |q| q[0] >= 0.0)
    }

    proptest! {
        #[test]
        fn schedule_round_trips_through_config(probs in prop::collection::vec(arb_quadruple(), 1..20)) {
            let s = ChannelSchedule::from_probs(probs).unwrap();
            let text = ChannelConfig::from(&s).to_json();
            let back = ChannelConfig::from_json(&text).unwrap().schedule(s.num_qubits()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn likelihood_additive_on_disjoint_supports(
            probs in prop::collection::vec(arb_quadruple(), 8),
            codes in prop::collection::vec(0usize..4, 8),
            split in 0usize..8,
        ) {
            let s = ChannelSchedule::from_probs(probs).unwrap();
            let mut a = Pauli::identity(8);
            let mut b = Pauli::identity(8);
            for (q, &c) in codes.iter().enumerate() {
                let target = if q < split { &mut a } else { &mut b };
                target.put(q, SingleQubitPauli::from_code(c));
            }
            let id = s.log_likelihood(&Pauli::identity(8)).unwrap();
            prop_assume!(id.is_finite());
            let ab = a.multiply(&b).unwrap();
            let lhs = s.log_likelihood(&ab).unwrap();
            let rhs = s.log_likelihood(&a).unwrap() + s.log_likelihood(&b).unwrap() - id;
            if lhs.is_finite() && rhs.is_finite() {
                prop_assert!((lhs - rhs).abs() < 1e-9);
            } else {
                prop_assert_eq!(lhs, f64::NEG_INFINITY);
            }
        }
    }
}
