//! Signed stabilizer tableaux (Aaronson–Gottesman style, with destabilizers).
//!
//! A row is `(-1)^sign · ⊗_q i^{x_q z_q} X^{x_q} Z^{z_q}`, i.e. the
//! single-qubit factor `(1,1)` is `Y = iXZ`, the usual Hermitian `σ_y`.
//! Conjugation rules under this convention (sign flips marked):
//!
//! | gate     | rule                                                     |
//! |----------|----------------------------------------------------------|
//! | `H a`    | `X_a <-> Z_a`, `Y_a -> -Y_a`                             |
//! | `CX c t` | `X_c -> X_c X_t`, `Z_t -> Z_c Z_t`; flip on `x_c z_t (x_t ⊕ z_c ⊕ 1)` |
//! | `CZ a b` | `X_a -> X_a Z_b`, `X_b -> Z_a X_b`; flip on `x_a x_b (z_a ⊕ z_b)` |
//! | `X q`    | flip on `z_q`                                            |
//! | `Z q`    | flip on `x_q`                                            |
//!
//! Syndrome extraction with an ancilla (H, controlled-`M`, H, measure) gives
//! the same outcome distribution as measuring `M` on the data directly,
//! which is what [`StabilizerTableau::measure`] reports.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitVector, EchelonBasis};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Clifford gates used by the encoder. Qubits are 1-based.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    CX { control: usize, target: usize },
    CZ { control: usize, target: usize },
    PauliX(usize),
    PauliZ(usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Self::H(q) | Self::PauliX(q) | Self::PauliZ(q) => vec![q],
            Self::CX { control, target } | Self::CZ { control, target } => vec![control, target],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q == 0 || q > n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Domain(format!("gate {self} acts twice on qubit {}", qs[0])));
        }
        Ok(())
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::H(q) => write!(f, "H {q}"),
            Self::CX { control, target } => write!(f, "CX {control} {target}"),
            Self::CZ { control, target } => write!(f, "CZ {control} {target}"),
            Self::PauliX(q) => write!(f, "X {q}"),
            Self::PauliZ(q) => write!(f, "Z {q}"),
        }
    }
}

impl FromStr for CliffordGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Format(format!("bad qubit index {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["H", q] => Ok(Self::H(num(q)?)),
            ["X", q] => Ok(Self::PauliX(num(q)?)),
            ["Z", q] => Ok(Self::PauliZ(num(q)?)),
            ["CX", c, t] => Ok(Self::CX {
                control: num(c)?,
                target: num(t)?,
            }),
            ["CZ", c, t] => Ok(Self::CZ {
                control: num(c)?,
                target: num(t)?,
            }),
            _ => Err(Error::Format(format!("unrecognised gate line {s:?}"))),
        }
    }
}

/// Pauli operator with a ±1 sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub pauli: Pauli,
    pub negative: bool,
}

impl SignedPauli {
    pub fn positive(pauli: Pauli) -> Self {
        Self {
            pauli,
            negative: false,
        }
    }

    pub fn new(pauli: Pauli, negative: bool) -> Self {
        Self { pauli, negative }
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }

    /// Conjugate by a gate, `P -> U P U†`. The gate must already be valid
    /// for this width.
    pub fn conjugate(&mut self, gate: &CliffordGate) {
        match *gate {
            CliffordGate::H(q) => {
                let a = q - 1;
                let (x, z) = (self.pauli.x_bits().get(a), self.pauli.z_bits().get(a));
                self.negative ^= x & z;
                self.pauli.x_mut().set(a, z);
                self.pauli.z_mut().set(a, x);
            }
            CliffordGate::CX { control, target } => {
                let (c, t) = (control - 1, target - 1);
                let (xc, zc) = (self.pauli.x_bits().get(c), self.pauli.z_bits().get(c));
                let (xt, zt) = (self.pauli.x_bits().get(t), self.pauli.z_bits().get(t));
                self.negative ^= xc & zt & !(xt ^ zc);
                self.pauli.x_mut().set(t, xt ^ xc);
                self.pauli.z_mut().set(c, zc ^ zt);
            }
            CliffordGate::CZ { control, target } => {
                let (a, b) = (control - 1, target - 1);
                let (xa, za) = (self.pauli.x_bits().get(a), self.pauli.z_bits().get(a));
                let (xb, zb) = (self.pauli.x_bits().get(b), self.pauli.z_bits().get(b));
                self.negative ^= xa & xb & (za ^ zb);
                self.pauli.z_mut().set(a, za ^ xb);
                self.pauli.z_mut().set(b, zb ^ xa);
            }
            CliffordGate::PauliX(q) => self.negative ^= self.pauli.z_bits().get(q - 1),
            CliffordGate::PauliZ(q) => self.negative ^= self.pauli.x_bits().get(q - 1),
        }
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { '-' } else { '+' }, self.pauli)
    }
}

impl fmt::Debug for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPauli({self})")
    }
}

impl FromStr for SignedPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        Ok(Self {
            pauli: body.parse()?,
            negative,
        })
    }
}

/// Exponent `k` (mod 4) in `P·Q = i^k R` for Hermitian Pauli strings
/// under the `Y = iXZ` convention, computed word-parallel.
fn product_phase(px: &BitVector, pz: &BitVector, qx: &BitVector, qz: &BitVector) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    let words = px.words().iter().zip(pz.words()).zip(qx.words().iter().zip(qz.words()));
    for ((&ax, &az), (&bx, &bz)) in words {
        let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
        let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
        // XY = iZ, YZ = iX, ZX = iY and the reverses give -i.
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        minus += ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones();
    }
    (plus + 3 * minus) % 4
}

/// Outcome of measuring a Pauli observable on a stabilizer state.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Measurement {
    /// Deterministic eigenvalue `(-1)^bit`.
    Deterministic(bool),
    /// The observable anticommutes with the state; both outcomes occur.
    Random,
}

/// Pure stabilizer state on `n` qubits: `n` destabilizer rows followed by
/// `n` stabilizer rows.
#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<SignedPauli>,
}

impl StabilizerTableau {
    /// Computational basis state `|b_1 … b_n⟩`: stabilizers `(-1)^{b_q} Z_q`.
    pub fn from_bits(bits: &[bool], n: usize) -> Result<Self> {
        if bits.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: bits.len(),
            });
        }
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            let mut x = BitVector::zeros(n);
            x.set(q, true);
            rows.push(SignedPauli::positive(Pauli::from_parts(x, BitVector::zeros(n))?));
        }
        for (q, &b) in bits.iter().enumerate() {
            let mut z = BitVector::zeros(n);
            z.set(q, true);
            rows.push(SignedPauli::new(Pauli::from_parts(BitVector::zeros(n), z)?, b));
        }
        Ok(Self { n, rows })
    }

    pub fn zero_state(n: usize) -> Self {
        Self::from_bits(&vec![false; n], n).expect("lengths agree")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[SignedPauli] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[SignedPauli] {
        &self.rows[..self.n]
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        for row in &mut self.rows {
            row.conjugate(gate);
        }
        Ok(())
    }

    pub fn apply_gates<'a>(&mut self, gates: impl IntoIterator<Item = &'a CliffordGate>) -> Result<()> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Replace the state `|ψ⟩` by `E|ψ⟩`: rows anticommuting with `E` flip sign.
    pub fn apply_pauli(&mut self, e: &Pauli) -> Result<()> {
        self.check_len(e)?;
        for row in &mut self.rows {
            row.negative ^= row.pauli.anticommutes_unchecked(e);
        }
        Ok(())
    }

    fn check_len(&self, p: &Pauli) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        Ok(())
    }

    /// Express `p` (which must commute with every stabilizer) as a signed
    /// product of stabilizer rows. Returns the sign of that product
    /// relative to `p`.
    fn decompose_sign(&self, p: &Pauli) -> bool {
        let mut acc_x = BitVector::zeros(self.n);
        let mut acc_z = BitVector::zeros(self.n);
        let mut phase = 0u32;
        for (d, s) in self.destabilizers().iter().zip(self.stabilizers()) {
            if d.pauli.anticommutes_unchecked(p) {
                let sx = s.pauli.x_bits();
                let sz = s.pauli.z_bits();
                phase += product_phase(&acc_x, &acc_z, sx, sz) + 2 * s.negative as u32;
                acc_x.xor_assign(sx);
                acc_z.xor_assign(sz);
            }
        }
        debug_assert!(&acc_x == p.x_bits() && &acc_z == p.z_bits());
        debug_assert!(phase % 2 == 0, "product of commuting Hermitian rows is Hermitian");
        phase % 4 == 2
    }

    /// True iff the state is a +1 eigenvector of the signed operator.
    pub fn stabilizes(&self, sp: &SignedPauli) -> Result<bool> {
        self.check_len(&sp.pauli)?;
        if self
            .stabilizers()
            .iter()
            .any(|s| s.pauli.anticommutes_unchecked(&sp.pauli))
        {
            return Ok(false);
        }
        Ok(self.decompose_sign(&sp.pauli) == sp.negative)
    }

    /// Outcome of measuring `observable` without disturbing the tableau.
    pub fn measure(&self, observable: &Pauli) -> Result<Measurement> {
        self.check_len(observable)?;
        if self
            .stabilizers()
            .iter()
            .any(|s| s.pauli.anticommutes_unchecked(observable))
        {
            return Ok(Measurement::Random);
        }
        Ok(Measurement::Deterministic(self.decompose_sign(observable)))
    }

    /// Stabilizers pairwise commute, destabilizers pair off with them, and
    /// the stabilizer rows are independent.
    pub fn is_valid(&self) -> bool {
        let stabs = self.stabilizers();
        let destabs = self.destabilizers();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > i && stabs[i].pauli.anticommutes_unchecked(&stabs[j].pauli) {
                    return false;
                }
                if destabs[i].pauli.anticommutes_unchecked(&stabs[j].pauli) != (i == j) {
                    return false;
                }
            }
        }
        let mut basis = EchelonBasis::new(2 * self.n);
        stabs.iter().all(|s| basis.insert(&s.pauli.interleaved()))
    }

    /// Sign-prefixed stabilizer strings, one per row.
    pub fn dump(&self) -> Vec<String> {
        self.stabilizers().iter().map(ToString::to_string).collect()
    }
}

impl fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.dump()).finish()
    }
}
