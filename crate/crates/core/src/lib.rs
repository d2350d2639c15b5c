//! Rate-1/5 quantum convolutional code.
//!
//! * [`pauli`]: phase-free Pauli algebra on packed bit vectors.
//! * [`code`]: the finite-length stabilizer code, its logical operators
//!   and algebraic verification.
//! * [`tableau`]: signed stabilizer tableaux for Clifford circuits.
//! * [`circuits`]: the six-layer encoder, its inverse, and error
//!   propagation through them.
//! * [`channel`]: memoryless Pauli channels.
//! * [`decoder`]: trellis (Viterbi) maximum-likelihood error estimation
//!   plus an exhaustive reference decoder.
//! * [`sim`]: Monte Carlo logical error rates.

pub mod bits;
pub mod channel;
pub mod circuits;
pub mod code;
pub mod decoder;
pub mod error;
pub mod pauli;
pub mod sim;
pub mod tableau;

pub use channel::{ChannelConfig, ChannelSchedule};
pub use circuits::{CliffordGate, LayeredCircuit};
pub use code::{build_code, verify_code, CodeReport, ConvolutionalCode, Syndrome};
pub use decoder::{brute_force_ml, viterbi_decode, DecodeResult, TieMode, ViterbiDecoder};
pub use error::{Error, Result};
pub use pauli::{Pauli, SingleQubitPauli};
pub use sim::{run_trials, sweep, SimStats};
pub use tableau::{Measurement, SignedPauli, StabilizerTableau};
