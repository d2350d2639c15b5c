//! Phase-free Pauli operators in the binary symplectic representation.
//!
//! An n-qubit Pauli is a pair of packed bit vectors `(x, z)`; qubit `q`
//! carries `I=(0,0)`, `X=(1,0)`, `Z=(0,1)`, `Y=(1,1)`. Global phases are
//! not represented, so `P`, `-P` and `±iP` are the same value and the
//! product is plain XOR. Signed operators live in [`crate::tableau`].
//!
//! Text form is one uppercase letter per qubit, qubit 1 leftmost.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SingleQubitPauli {
    I,
    X,
    Y,
    Z,
}

impl SingleQubitPauli {
    pub const ALL: [SingleQubitPauli; 4] = [Self::I, Self::X, Self::Y, Self::Z];
    pub const NON_IDENTITY: [SingleQubitPauli; 3] = [Self::X, Self::Y, Self::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Self::I,
            (true, false) => Self::X,
            (false, true) => Self::Z,
            (true, true) => Self::Y,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::X => (true, false),
            Self::Z => (false, true),
            Self::Y => (true, true),
        }
    }

    /// Two-bit code `x + 2z`: I=0, X=1, Z=2, Y=3. This is the ordering
    /// used for trellis state and window indices.
    #[inline]
    pub fn code(self) -> usize {
        let (x, z) = self.bits();
        x as usize | (z as usize) << 1
    }

    #[inline]
    pub fn from_code(code: usize) -> Self {
        Self::from_bits(code & 1 == 1, code & 2 == 2)
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    #[inline]
    pub fn anticommutes(self, other: Self) -> bool {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        (ax & bz) ^ (az & bx)
    }
}

impl fmt::Display for SingleQubitPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Phase-free n-qubit Pauli operator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    x: BitVector,
    z: BitVector,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn from_parts(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    /// `p` on the 1-based qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: SingleQubitPauli) -> Result<Self> {
        let mut out = Self::identity(n);
        out.set(q, p)?;
        Ok(out)
    }

    /// Build from `(qubit, pauli)` pairs with 1-based qubits.
    pub fn from_sparse(n: usize, terms: &[(usize, SingleQubitPauli)]) -> Result<Self> {
        let mut out = Self::identity(n);
        for &(q, p) in terms {
            out.set(q, p)?;
        }
        Ok(out)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVector {
        &self.z
    }

    /// Pauli on 0-based qubit `q`. Internal fast path, no range check in release.
    #[inline]
    pub(crate) fn at(&self, q: usize) -> SingleQubitPauli {
        SingleQubitPauli::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub(crate) fn put(&mut self, q: usize, p: SingleQubitPauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    #[inline]
    pub(crate) fn x_mut(&mut self) -> &mut BitVector {
        &mut self.x
    }

    #[inline]
    pub(crate) fn z_mut(&mut self) -> &mut BitVector {
        &mut self.z
    }

    /// Pauli on the 1-based qubit `q`.
    pub fn get(&self, q: usize) -> Result<SingleQubitPauli> {
        self.check_qubit(q)?;
        Ok(self.at(q - 1))
    }

    pub fn set(&mut self, q: usize, p: SingleQubitPauli) -> Result<()> {
        self.check_qubit(q)?;
        self.put(q - 1, p);
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                n: self.num_qubits(),
            });
        }
        Ok(())
    }

    fn check_same_len(&self, other: &Pauli) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// 1-based positions of the non-identity factors.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, (x, z)) in self.x.words().iter().zip(self.z.words()).enumerate() {
            let mut w = x | z;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize + 1);
                w &= w - 1;
            }
        }
        out
    }

    /// Symplectic form `sum_q x_a z_b + z_a x_b (mod 2)`: `true` iff the
    /// operators anticommute.
    pub fn symplectic_product(&self, other: &Pauli) -> Result<bool> {
        self.check_same_len(other)?;
        Ok(self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &Pauli) -> bool {
        let mut acc = 0u32;
        let xs = self.x.words().iter().zip(self.z.words());
        let ys = other.x.words().iter().zip(other.z.words());
        for ((ax, az), (bx, bz)) in xs.zip(ys) {
            acc ^= ((ax & bz) ^ (az & bx)).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes_with(&self, other: &Pauli) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    /// Product up to global phase.
    pub fn multiply(&self, other: &Pauli) -> Result<Pauli> {
        self.check_same_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn mul_assign_unchecked(&mut self, other: &Pauli) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Embed `self` into an identity string of length `n_total`, starting
    /// after `offset` identity factors.
    pub fn shift(&self, offset: usize, n_total: usize) -> Result<Pauli> {
        if offset + self.num_qubits() > n_total {
            return Err(Error::Domain(format!(
                "cannot place {} qubits at offset {offset} inside {n_total}",
                self.num_qubits()
            )));
        }
        let mut out = Pauli::identity(n_total);
        for q in 0..self.num_qubits() {
            out.put(offset + q, self.at(q));
        }
        Ok(out)
    }

    /// Restriction to the 1-based inclusive window `start..=end`.
    pub fn window(&self, start: usize, end: usize) -> Result<Pauli> {
        if start == 0 || start > end || end > self.num_qubits() {
            return Err(Error::Domain(format!(
                "window {start}..={end} outside 1..={}",
                self.num_qubits()
            )));
        }
        let mut out = Pauli::identity(end - start + 1);
        for q in start - 1..end {
            out.put(q + 1 - start, self.at(q));
        }
        Ok(out)
    }

    /// Symplectic vector with columns interleaved as `(x_1, z_1, x_2, z_2, …)`.
    /// Banded operators stay banded, which keeps elimination local.
    pub fn interleaved(&self) -> BitVector {
        let n = self.num_qubits();
        let mut v = BitVector::zeros(2 * n);
        for q in self.x.iter_ones() {
            v.set(2 * q, true);
        }
        for q in self.z.iter_ones() {
            v.set(2 * q + 1, true);
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = SingleQubitPauli> + '_ {
        (0..self.num_qubits()).map(move |q| self.at(q))
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let chars: Vec<char> = s.chars().collect();
        let mut out = Pauli::identity(chars.len());
        for (i, &c) in chars.iter().enumerate() {
            let p = SingleQubitPauli::from_char(c).ok_or(Error::InvalidPauliChar {
                position: i + 1,
                found: c,
            })?;
            out.put(i, p);
        }
        Ok(out)
    }
}

/// Parse the `I/X/Y/Z` row notation.
pub fn pauli_from_string(s: &str) -> Result<Pauli> {
    s.parse()
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl Serialize for Pauli {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pauli {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
