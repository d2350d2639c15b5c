//! Layered ("pearl-necklace") encoding and decoding circuits.
//!
//! The encoder has six layers for every `N`. Layer 0 puts every ancilla in
//! the `|+⟩` state; layers 1–5 apply controlled-Pauli gates, each split into
//! CX/CZ gates sharing one control. With `b` the 0-based block index and
//! `n = 5N + 2`:
//!
//! ```text
//! 0: H 1, H 5b+2 .. 5b+5, H n
//! 1: C(n)->Z(n-1),            C(5b+7)->Z(5b+5)             (b < N-1)
//! 2: C(5b+5)->X(5b+6) Z(5b+7)
//! 3: C(5b+4)->X(5b+5) Z(5b+6)
//! 4: C(5b+3)->X(5b+4) Z(5b+5)
//! 5: C(5b+2)->Z(5b+1) X(5b+3) Z(5b+4)
//! ```
//!
//! The data qubit of block `b` sits at `5(b+1)+1` and needs no gate of its
//! own. Gates inside a layer commute and touch qubits at most two apart, so
//! both directions can run online. The decoder is the encoder run
//! backwards; all gates are involutions.

use std::fmt;

use crate::code::{ConvolutionalCode, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, SingleQubitPauli};
use crate::tableau::{Measurement, SignedPauli, StabilizerTableau};

pub use crate::tableau::CliffordGate;

/// Number of layers in the encoder and decoder, independent of `N`.
pub const NUM_LAYERS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    n: usize,
    layers: Vec<Vec<CliffordGate>>,
}

impl LayeredCircuit {
    pub fn new(n: usize, layers: Vec<Vec<CliffordGate>>) -> Result<Self> {
        for g in layers.iter().flatten() {
            g.validate(n)?;
        }
        Ok(Self { n, layers })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, layers: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<CliffordGate>] {
        &self.layers
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &CliffordGate> {
        self.layers.iter().flatten()
    }

    pub fn num_gates(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Layer order reversed. Gate order inside each layer is kept; the
    /// gates of a layer commute, so this is the inverse circuit whenever
    /// every gate is an involution.
    pub fn reversed(&self) -> Self {
        Self {
            n: self.n,
            layers: self.layers.iter().rev().cloned().collect(),
        }
    }

    pub fn apply_to(&self, t: &mut StabilizerTableau) -> Result<()> {
        t.apply_gates(self.gates())
    }

    /// Largest `|a - b|` over two-qubit gates; 0 for circuits without any.
    pub fn max_gate_span(&self) -> usize {
        self.gates()
            .filter_map(|g| match *g {
                CliffordGate::CX { control, target } | CliffordGate::CZ { control, target } => {
                    Some(control.abs_diff(target))
                }
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Text export: one gate per line, layers separated by a blank line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for g in layer {
                out.push_str(&g.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(n: usize, text: &str) -> Result<Self> {
        let mut layers = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                if !current.is_empty() {
                    layers.push(std::mem::take(&mut current));
                }
                continue;
            }
            current.push(line.parse::<CliffordGate>()?);
        }
        if !current.is_empty() {
            layers.push(current);
        }
        Self::new(n, layers)
    }
}

impl fmt::Display for LayeredCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn cz(control: usize, target: usize) -> CliffordGate {
    CliffordGate::CZ { control, target }
}

fn cx(control: usize, target: usize) -> CliffordGate {
    CliffordGate::CX { control, target }
}

pub fn build_encoding_circuit(blocks: usize) -> Result<LayeredCircuit> {
    if blocks < 1 {
        return Err(Error::Domain("number of blocks must be at least 1".into()));
    }
    let n = 5 * blocks + 2;
    let mut layers: Vec<Vec<CliffordGate>> = vec![Vec::new(); NUM_LAYERS];

    layers[0].push(CliffordGate::H(1));
    for b in 0..blocks {
        layers[0].extend((5 * b + 2..=5 * b + 5).map(CliffordGate::H));
    }
    layers[0].push(CliffordGate::H(n));

    for b in 0..blocks - 1 {
        layers[1].push(cz(5 * b + 7, 5 * b + 5));
    }
    layers[1].push(cz(n, n - 1));

    for b in 0..blocks {
        let o = 5 * b;
        layers[2].extend([cx(o + 5, o + 6), cz(o + 5, o + 7)]);
        layers[3].extend([cx(o + 4, o + 5), cz(o + 4, o + 6)]);
        layers[4].extend([cx(o + 3, o + 4), cz(o + 3, o + 5)]);
        layers[5].extend([cz(o + 2, o + 1), cx(o + 2, o + 3), cz(o + 2, o + 4)]);
    }
    LayeredCircuit::new(n, layers)
}

pub fn build_decoding_circuit(blocks: usize) -> Result<LayeredCircuit> {
    Ok(build_encoding_circuit(blocks)?.reversed())
}

/// Run the encoder on `|0…0 c_1 0000 c_2 …⟩` with `c_i` at `5i + 1`.
pub fn encode_basis_state(code: &ConvolutionalCode, bits: &[bool]) -> Result<StabilizerTableau> {
    let circuit = build_encoding_circuit(code.blocks())?;
    encode_with(code, &circuit, bits)
}

fn encode_with(
    code: &ConvolutionalCode,
    circuit: &LayeredCircuit,
    bits: &[bool],
) -> Result<StabilizerTableau> {
    if bits.len() != code.blocks() {
        return Err(Error::Dimension {
            expected: code.blocks(),
            found: bits.len(),
        });
    }
    let n = code.num_qubits();
    let mut input = vec![false; n];
    for (&pos, &b) in code.info_positions().iter().zip(bits) {
        input[pos - 1] = b;
    }
    let mut t = StabilizerTableau::from_bits(&input, n)?;
    circuit.apply_to(&mut t)?;
    Ok(t)
}

/// The encoded state is stabilized by `+M_k` for every generator and by
/// `(-1)^{c_i} Zbar_i` for every logical qubit.
pub fn encoder_contract_holds(
    code: &ConvolutionalCode,
    circuit: &LayeredCircuit,
    bits: &[bool],
) -> Result<bool> {
    let t = encode_with(code, circuit, bits)?;
    for g in code.generators() {
        if !t.stabilizes(&SignedPauli::positive(g.clone()))? {
            return Ok(false);
        }
    }
    for (z, &b) in code.logical_z().iter().zip(bits) {
        if !t.stabilizes(&SignedPauli::new(z.clone(), b))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Syndrome of `E|ψ⟩` read by measuring every generator, where `encoded`
/// holds a codeword `|ψ⟩`. Bit `k` is 1 when `M_k` yields eigenvalue -1.
pub fn measured_syndrome(
    code: &ConvolutionalCode,
    encoded: &StabilizerTableau,
    e: &Pauli,
) -> Result<Syndrome> {
    let mut t = encoded.clone();
    t.apply_pauli(e)?;
    let mut syn = Syndrome::zeros(code.num_generators());
    for (k, g) in code.generators().iter().enumerate() {
        match t.measure(g)? {
            Measurement::Deterministic(bit) => syn.set(k, bit),
            Measurement::Random => {
                return Err(Error::Precondition(format!(
                    "generator {k} is not fixed by the encoded state"
                )))
            }
        }
    }
    Ok(syn)
}

fn gates_commute(a: &CliffordGate, b: &CliffordGate, n: usize) -> bool {
    let qa = a.qubits();
    let qb = b.qubits();
    if !qa.iter().any(|q| qb.contains(q)) {
        return true;
    }
    let mut union = qa;
    union.extend(qb);
    union.sort_unstable();
    union.dedup();
    // Same conjugation action on every X_q, Z_q (signs included) means the
    // two orders agree up to a global phase.
    union.iter().all(|&q| {
        [SingleQubitPauli::X, SingleQubitPauli::Z].iter().all(|&p| {
            let start = SignedPauli::positive(Pauli::single(n, q, p).expect("qubit in range"));
            let mut ab = start.clone();
            ab.conjugate(a);
            ab.conjugate(b);
            let mut ba = start;
            ba.conjugate(b);
            ba.conjugate(a);
            ab == ba
        })
    })
}

/// Every pair of gates inside each layer commutes.
pub fn verify_layer_commutation(c: &LayeredCircuit) -> bool {
    c.layers().iter().all(|layer| {
        layer
            .iter()
            .enumerate()
            .all(|(i, a)| layer[i + 1..].iter().all(|b| gates_commute(a, b, c.num_qubits())))
    })
}

/// Push a phase-free error inserted just before layer `from_layer` through
/// the rest of the circuit. `from_layer == num_layers()` means after the
/// last layer.
pub fn propagate_error(c: &LayeredCircuit, e: &Pauli, from_layer: usize) -> Result<Pauli> {
    if e.num_qubits() != c.num_qubits() {
        return Err(Error::Dimension {
            expected: c.num_qubits(),
            found: e.num_qubits(),
        });
    }
    if from_layer > c.num_layers() {
        return Err(Error::Domain(format!(
            "insertion layer {from_layer} beyond {} layers",
            c.num_layers()
        )));
    }
    let mut sp = SignedPauli::positive(e.clone());
    for g in c.layers()[from_layer..].iter().flatten() {
        sp.conjugate(g);
    }
    Ok(sp.pauli)
}

/// Largest output weight over every single-qubit error at every qubit and
/// every insertion point.
pub fn max_error_spread(c: &LayeredCircuit) -> usize {
    let n = c.num_qubits();
    let mut worst = if n > 0 { 1 } else { 0 };
    for layer in 0..c.num_layers() {
        for q in 1..=n {
            for p in SingleQubitPauli::NON_IDENTITY {
                let e = Pauli::single(n, q, p).expect("qubit in range");
                let out = propagate_error(c, &e, layer).expect("valid inputs");
                worst = worst.max(out.weight());
            }
        }
    }
    worst
}
