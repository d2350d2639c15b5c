//! Run config files for `simulate` and `sweep`.
//!
//! ```json
//! {"blocks": 2, "channel": {"type": "depolarizing", "p": 0.001}, "trials": 100000, "seed": 7}
//! {"blocks": [2, 4], "p": [0.001, 0.002], "trials": 10000, "seed": 7, "tie": "random", "tie_seed": 3}
//! ```
//!
//! A sweep lists either depolarizing strengths under `p` or full channel
//! configs under `channels`. Unknown keys are rejected.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use qconv::{ChannelConfig, Error, TieMode};

use crate::{Failure, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum TieName {
    #[default]
    Lexicographic,
    Random,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub blocks: usize,
    pub channel: ChannelConfig,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tie: TieName,
    #[serde(default)]
    pub tie_seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    #[serde(default)]
    pub channels: Option<Vec<ChannelConfig>>,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tie: TieName,
    #[serde(default)]
    pub tie_seed: u64,
}

fn tie_mode(tie: TieName, seed: u64) -> TieMode {
    match tie {
        TieName::Lexicographic => TieMode::Lexicographic,
        TieName::Random => TieMode::Random { seed },
    }
}

impl SimulateConfig {
    pub fn tie_mode(&self) -> TieMode {
        tie_mode(self.tie, self.tie_seed)
    }
}

impl SweepConfig {
    pub fn tie_mode(&self) -> TieMode {
        tie_mode(self.tie, self.tie_seed)
    }

    pub fn channels(&self) -> Result<Vec<ChannelConfig>, Error> {
        match (&self.p, &self.channels) {
            (Some(ps), None) => Ok(ps.iter().map(|&p| ChannelConfig::Depolarizing { p }).collect()),
            (None, Some(c)) => Ok(c.clone()),
            _ => Err(Error::Format(
                "sweep config needs exactly one of `p` and `channels`".into(),
            )),
        }
    }
}

pub fn parse<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(text: &str) -> Result<SimulateConfig, Failure> {
        parse(text, Path::new("sim.json"))
    }

    fn message(r: Result<impl std::fmt::Debug, Failure>) -> String {
        match r {
            Err(Failure::Usage(m)) | Err(Failure::Check(m)) => m,
            Ok(v) => panic!("expected an error, got {v:?}"),
        }
    }

    #[test]
    fn simulate_defaults() {
        let c = sim(r#"{"blocks":2,"channel":{"type":"depolarizing","p":0.01},"trials":5}"#)
            .ok()
            .unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.tie_mode(), TieMode::Lexicographic);
    }

    #[test]
    fn unknown_keys_are_named() {
        let m = message(sim(
            r#"{"blocks":2,"channel":{"type":"depolarizing","p":0.01},"trials":5,"trails":4}"#,
        ));
        assert!(m.contains("trails") && m.contains("sim.json"), "{m}");
        let m = message(sim(r#"{"blocks":2,"trials":5}"#));
        assert!(m.contains("channel"), "{m}");
    }

    #[test]
    fn sweep_needs_one_channel_list() {
        let both: SweepConfig = parse(
            r#"{"blocks":[1],"p":[0.1],"channels":[{"type":"depolarizing","p":0.1}],"trials":1}"#,
            Path::new("s.json"),
        )
        .ok()
        .unwrap();
        assert!(both.channels().is_err());
        let ps: SweepConfig = parse(
            r#"{"blocks":[1,2],"p":[0.1,0.2],"trials":1,"tie":"random","tie_seed":4}"#,
            Path::new("s.json"),
        )
        .ok()
        .unwrap();
        assert_eq!(ps.channels().unwrap().len(), 2);
        assert_eq!(ps.tie_mode(), TieMode::Random { seed: 4 });
    }
}
