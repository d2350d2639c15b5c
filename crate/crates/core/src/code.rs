//! The rate-1/5 convolutional stabilizer code, truncated to `N` blocks.
//!
//! Layout (1-based qubits, `n = 5N + 2`):
//!
//! ```text
//! M_0        X Z at 1, 2
//! M_{4i+j}   Z X X Z at 5i+j .. 5i+j+3      (0 <= i < N, 1 <= j <= 4)
//! M_inf      Z X at 5N+1, 5N+2
//! Xbar_i     I Z I X I Z at 5(i-1)+1 .. 5(i-1)+6
//! Zbar_i     I Z Z Z Z Z at the same window
//! ```
//!
//! Logical qubit `i` is read in at position `5i + 1`, the rightmost qubit
//! of the `Zbar_i` support.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, EchelonBasis};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, SingleQubitPauli};

/// Local generator pattern repeated in every block.
pub const BLOCK_PATTERN: &str = "ZXXZ";
pub const FIRST_BOUNDARY: &str = "XZ";
pub const LAST_BOUNDARY: &str = "ZX";
pub const LOGICAL_X_PATTERN: &str = "IZIXIZ";
pub const LOGICAL_Z_PATTERN: &str = "IZZZZZ";

/// Non-identity factors of an operator with small support, 0-based.
type Sparse = Vec<(usize, SingleQubitPauli)>;

fn sparse_of(p: &Pauli) -> Sparse {
    p.support().into_iter().map(|q| (q - 1, p.at(q - 1))).collect()
}

#[inline]
fn sparse_anticommutes(e: &Pauli, terms: &Sparse) -> bool {
    terms
        .iter()
        .fold(false, |acc, &(q, p)| acc ^ e.at(q).anticommutes(p))
}

/// Syndrome bits ordered `[s(M_0), s(M_1), …, s(M_4N), s(M_inf)]`.
/// A set bit means the measured eigenvalue was -1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: BitVector,
}

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: BitVector::zeros(len),
        }
    }

    pub fn from_bits(bits: BitVector) -> Self {
        Self { bits }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self {
            bits: BitVector::from_bools(bits),
        }
    }

    /// Bit `k` of the syndrome is bit `k` of `index` (little-endian).
    /// Only meaningful for syndromes of at most 64 bits.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut bits = BitVector::zeros(len);
        for k in 0..len {
            bits.set(k, (index >> k) & 1 == 1);
        }
        Self { bits }
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits
            .iter_ones()
            .fold(0u64, |acc, k| acc | 1u64 << k)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        self.bits.get(k)
    }

    pub fn set(&mut self, k: usize, value: bool) {
        self.bits.set(k, value);
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        let mut bits = self.bits.clone();
        bits.xor_assign(&other.bits);
        Syndrome { bits }
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bools = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidSyndromeChar {
                    position: i + 1,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bools))
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({self})")
    }
}

/// Finite truncation of the code with `blocks` logical qubits.
#[derive(Clone)]
pub struct ConvolutionalCode {
    blocks: usize,
    n: usize,
    generators: Vec<Pauli>,
    logical_x: Vec<Pauli>,
    logical_z: Vec<Pauli>,
    generator_terms: Vec<Sparse>,
    logical_terms: Vec<Sparse>,
    stabilizer_basis: OnceLock<EchelonBasis>,
}

impl fmt::Debug for ConvolutionalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvolutionalCode")
            .field("blocks", &self.blocks)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl ConvolutionalCode {
    pub fn new(blocks: usize) -> Result<Self> {
        if blocks < 1 {
            return Err(Error::Domain("number of blocks must be at least 1".into()));
        }
        let n = 5 * blocks + 2;
        let block: Pauli = BLOCK_PATTERN.parse()?;
        let lx: Pauli = LOGICAL_X_PATTERN.parse()?;
        let lz: Pauli = LOGICAL_Z_PATTERN.parse()?;

        let mut generators = Vec::with_capacity(4 * blocks + 2);
        generators.push(FIRST_BOUNDARY.parse::<Pauli>()?.shift(0, n)?);
        for i in 0..blocks {
            for j in 0..4 {
                generators.push(block.shift(5 * i + j, n)?);
            }
        }
        generators.push(LAST_BOUNDARY.parse::<Pauli>()?.shift(n - 2, n)?);

        let logical_x = (0..blocks)
            .map(|i| lx.shift(5 * i, n))
            .collect::<Result<Vec<_>>>()?;
        let logical_z = (0..blocks)
            .map(|i| lz.shift(5 * i, n))
            .collect::<Result<Vec<_>>>()?;

        Self::from_parts(blocks, generators, logical_x, logical_z)
    }

    /// Assemble a code object from explicit operators. Only shapes are
    /// checked; [`verify_code`] reports on the algebra.
    pub fn from_parts(
        blocks: usize,
        generators: Vec<Pauli>,
        logical_x: Vec<Pauli>,
        logical_z: Vec<Pauli>,
    ) -> Result<Self> {
        if blocks < 1 {
            return Err(Error::Domain("number of blocks must be at least 1".into()));
        }
        let n = 5 * blocks + 2;
        let expect = |what: &str, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::Format(format!(
                    "{what}: expected {expected}, found {found}"
                )))
            }
        };
        expect("generator count", 4 * blocks + 2, generators.len())?;
        expect("logical X count", blocks, logical_x.len())?;
        expect("logical Z count", blocks, logical_z.len())?;
        for p in generators.iter().chain(&logical_x).chain(&logical_z) {
            if p.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: p.num_qubits(),
                });
            }
        }
        let generator_terms = generators.iter().map(sparse_of).collect();
        let logical_terms = logical_x
            .iter()
            .zip(&logical_z)
            .flat_map(|(x, z)| [sparse_of(x), sparse_of(z)])
            .collect();
        Ok(Self {
            blocks,
            n,
            generators,
            logical_x,
            logical_z,
            generator_terms,
            logical_terms,
            stabilizer_basis: OnceLock::new(),
        })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[Pauli] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[Pauli] {
        &self.logical_z
    }

    /// 1-based positions `5i + 1` where logical qubit `i` enters the encoder.
    pub fn info_positions(&self) -> Vec<usize> {
        (1..=self.blocks).map(|i| 5 * i + 1).collect()
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

    /// `bits[k] = symplectic_product(e, M_k)`. Linear in `n`: every
    /// generator has at most four non-identity factors.
    pub fn syndrome_of(&self, e: &Pauli) -> Result<Syndrome> {
        self.check_len(e)?;
        let mut bits = BitVector::zeros(self.generators.len());
        for (k, terms) in self.generator_terms.iter().enumerate() {
            if sparse_anticommutes(e, terms) {
                bits.set(k, true);
            }
        }
        Ok(Syndrome { bits })
    }

    fn basis(&self) -> &EchelonBasis {
        self.stabilizer_basis.get_or_init(|| {
            let mut basis = EchelonBasis::new(2 * self.n);
            for g in &self.generators {
                basis.insert(&g.interleaved());
            }
            basis
        })
    }

    /// Rank of the generator matrix over GF(2).
    pub fn generator_rank(&self) -> usize {
        self.basis().rank()
    }

    /// Phase-free membership in the stabilizer group.
    pub fn in_stabilizer(&self, p: &Pauli) -> Result<bool> {
        self.check_len(p)?;
        Ok(self.basis().contains(&p.interleaved()))
    }

    /// `[sp(p, Xbar_1), sp(p, Zbar_1), …, sp(p, Xbar_N), sp(p, Zbar_N)]`
    /// for an operator with trivial syndrome.
    pub fn logical_action(&self, p: &Pauli) -> Result<BitVector> {
        if !self.syndrome_of(p)?.is_trivial() {
            return Err(Error::Precondition(
                "logical action is only defined for operators with trivial syndrome".into(),
            ));
        }
        Ok(self.logical_action_unchecked(p))
    }

    pub(crate) fn logical_action_unchecked(&self, p: &Pauli) -> BitVector {
        let mut bits = BitVector::zeros(2 * self.blocks);
        for (k, terms) in self.logical_terms.iter().enumerate() {
            if sparse_anticommutes(p, terms) {
                bits.set(k, true);
            }
        }
        bits
    }

    /// Smallest weight `w <= max_weight` of an operator with trivial
    /// syndrome and nontrivial logical action, by exhaustive search.
    pub fn min_logical_weight_probe(&self, max_weight: usize) -> Option<usize> {
        (1..=max_weight.min(self.n)).find(|&w| self.has_logical_of_weight(w))
    }

    fn has_logical_of_weight(&self, w: usize) -> bool {
        let mut positions: Vec<usize> = (0..w).collect();
        let mut e = Pauli::identity(self.n);
        loop {
            // All 3^w non-identity assignments on the chosen positions.
            for mut code in 0..3usize.pow(w as u32) {
                for &q in &positions {
                    e.put(q, SingleQubitPauli::NON_IDENTITY[code % 3]);
                    code /= 3;
                }
                if self.generator_terms.iter().all(|t| !sparse_anticommutes(&e, t))
                    && !self.logical_action_unchecked(&e).is_zero()
                {
                    return true;
                }
            }
            for &q in &positions {
                e.put(q, SingleQubitPauli::I);
            }
            if !next_combination(&mut positions, self.n) {
                return false;
            }
        }
    }

    /// Structured description of the code's operators.
    pub fn description(&self) -> CodeDescription {
        CodeDescription {
            blocks: self.blocks,
            n: self.n,
            generators: self.generators.iter().map(ToString::to_string).collect(),
            logical_x: self.logical_x.iter().map(ToString::to_string).collect(),
            logical_z: self.logical_z.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_description(d: &CodeDescription) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| s.parse()).collect::<Result<Vec<Pauli>>>();
        let code = Self::from_parts(
            d.blocks,
            parse(&d.generators)?,
            parse(&d.logical_x)?,
            parse(&d.logical_z)?,
        )?;
        if code.n != d.n {
            return Err(Error::Dimension {
                expected: code.n,
                found: d.n,
            });
        }
        Ok(code)
    }
}

/// Advance `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Build the `N`-block code.
pub fn build_code(blocks: usize) -> Result<ConvolutionalCode> {
    ConvolutionalCode::new(blocks)
}

/// JSON-friendly listing of the code's operators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDescription {
    pub blocks: usize,
    pub n: usize,
    pub generators: Vec<String>,
    pub logical_x: Vec<String>,
    pub logical_z: Vec<String>,
}

/// Commutation requirements between logical operator pairs `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalPairCheck {
    pub i: usize,
    pub j: usize,
    /// `[Xbar_i, Xbar_j] = 0`
    pub xx_commute: bool,
    /// `[Zbar_i, Zbar_j] = 0`
    pub zz_commute: bool,
    /// `[Xbar_i, Zbar_j] = 0` when `i != j`, anticommuting when `i == j`.
    pub xz_as_required: bool,
}

impl LogicalPairCheck {
    pub fn passed(&self) -> bool {
        self.xx_commute && self.zz_commute && self.xz_as_required
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalOperatorCheck {
    pub index: usize,
    pub x_in_normalizer: bool,
    pub z_in_normalizer: bool,
    pub x_outside_stabilizer: bool,
    pub z_outside_stabilizer: bool,
}

impl LogicalOperatorCheck {
    pub fn passed(&self) -> bool {
        self.x_in_normalizer
            && self.z_in_normalizer
            && self.x_outside_stabilizer
            && self.z_outside_stabilizer
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalConditions {
    pub operators: Vec<LogicalOperatorCheck>,
    pub pairs: Vec<LogicalPairCheck>,
}

impl LogicalConditions {
    pub fn passed(&self) -> bool {
        self.operators.iter().all(LogicalOperatorCheck::passed)
            && self.pairs.iter().all(LogicalPairCheck::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub blocks: usize,
    pub num_qubits: usize,
    pub num_generators: usize,
    pub generator_commutation: bool,
    pub generator_rank: usize,
    pub logical_conditions: LogicalConditions,
    pub encoded_dimension_exponent: usize,
}

impl CodeReport {
    pub fn generators_independent(&self) -> bool {
        self.generator_rank == self.num_generators
    }

    pub fn passed(&self) -> bool {
        self.generator_commutation
            && self.generators_independent()
            && self.encoded_dimension_exponent == self.blocks
            && self.logical_conditions.passed()
    }
}

/// Exhaustive algebraic checks of a code object.
pub fn verify_code(code: &ConvolutionalCode) -> CodeReport {
    let gens = code.generators();
    let generator_commutation = gens
        .iter()
        .enumerate()
        .all(|(a, ga)| gens[a + 1..].iter().all(|gb| !ga.anticommutes_unchecked(gb)));
    let rank = code.generator_rank();

    let in_normalizer = |p: &Pauli| gens.iter().all(|g| !p.anticommutes_unchecked(g));
    let operators = (0..code.blocks())
        .map(|i| {
            let x = &code.logical_x()[i];
            let z = &code.logical_z()[i];
            LogicalOperatorCheck {
                index: i + 1,
                x_in_normalizer: in_normalizer(x),
                z_in_normalizer: in_normalizer(z),
                x_outside_stabilizer: !code.basis().contains(&x.interleaved()),
                z_outside_stabilizer: !code.basis().contains(&z.interleaved()),
            }
        })
        .collect();

    let mut pairs = Vec::with_capacity(code.blocks() * code.blocks());
    for i in 0..code.blocks() {
        for j in 0..code.blocks() {
            let (xi, zi) = (&code.logical_x()[i], &code.logical_z()[i]);
            let (xj, zj) = (&code.logical_x()[j], &code.logical_z()[j]);
            pairs.push(LogicalPairCheck {
                i: i + 1,
                j: j + 1,
                xx_commute: !xi.anticommutes_unchecked(xj),
                zz_commute: !zi.anticommutes_unchecked(zj),
                xz_as_required: xi.anticommutes_unchecked(zj) == (i == j),
            });
        }
    }

    CodeReport {
        blocks: code.blocks(),
        num_qubits: code.num_qubits(),
        num_generators: gens.len(),
        generator_commutation,
        generator_rank: rank,
        logical_conditions: LogicalConditions { operators, pairs },
        encoded_dimension_exponent: code.num_qubits() - rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn one_block_matches_the_generator_table() {
        let code = build_code(1).unwrap();
        assert_eq!(code.num_qubits(), 7);
        let gens: Vec<String> = code.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(
            gens,
            ["XZIIIII", "ZXXZIII", "IZXXZII", "IIZXXZI", "IIIZXXZ", "IIIIIZX"]
        );
        assert_eq!(code.logical_x()[0], p("IZIXIZI"));
        assert_eq!(code.logical_z()[0], p("IZZZZZI"));
        assert_eq!(code.info_positions(), vec![6]);
    }

    #[test]
    fn counts_scale_with_blocks() {
        let code = build_code(3).unwrap();
        assert_eq!(code.num_generators(), 14);
        assert_eq!(code.num_qubits(), 17);
        assert_eq!(code.logical_x().len(), 3);
        assert_eq!(code.generator_rank(), 14);
        assert_eq!(code.info_positions(), vec![6, 11, 16]);
        assert_eq!(code.logical_z()[2], p("IIIIIIIIIIIZZZZZI"));
    }

    #[test]
    fn zero_blocks_is_rejected() {
        assert!(matches!(build_code(0), Err(Error::Domain(_))));
    }

    #[test]
    fn verify_small_and_forty_blocks() {
        let r1 = verify_code(&build_code(1).unwrap());
        assert!(r1.passed());
        assert_eq!(r1.generator_rank, 6);
        assert_eq!(r1.encoded_dimension_exponent, 1);

        let r40 = verify_code(&build_code(40).unwrap());
        assert!(r40.passed());
        assert_eq!(r40.generator_rank, 162);
        assert_eq!(r40.encoded_dimension_exponent, 40);
    }

    #[test]
    fn mutated_generator_breaks_commutation() {
        let code = build_code(1).unwrap();
        let mut gens = code.generators().to_vec();
        // M_2 = IZXXZII; flip the z bit of qubit 3, making it IZYXZII.
        gens[2].z_mut().flip(2);
        let bad = ConvolutionalCode::from_parts(
            1,
            gens,
            code.logical_x().to_vec(),
            code.logical_z().to_vec(),
        )
        .unwrap();
        let report = verify_code(&bad);
        assert!(!report.generator_commutation);
        assert!(!report.passed());
    }

    #[test]
    fn syndrome_examples() {
        let code = build_code(1).unwrap();
        assert!(code.syndrome_of(&Pauli::identity(7)).unwrap().is_trivial());
        assert_eq!(code.syndrome_of(&p("XIIIIII")).unwrap().to_string(), "010000");
        assert_eq!(code.syndrome_of(&p("YIIIIII")).unwrap().to_string(), "110000");
        assert!(code.syndrome_of(&p("XX")).is_err());
    }

    #[test]
    fn stabilizer_membership() {
        let code = build_code(1).unwrap();
        for g in code.generators() {
            assert!(code.in_stabilizer(g).unwrap());
        }
        assert!(!code.in_stabilizer(&code.logical_x()[0]).unwrap());
        let m1m3 = code.generators()[1].multiply(&code.generators()[3]).unwrap();
        assert!(code.in_stabilizer(&m1m3).unwrap());
    }

    #[test]
    fn logical_action_examples() {
        let code = build_code(2).unwrap();
        assert!(code.logical_action(&code.generators()[2]).unwrap().is_zero());
        let zbar = code.logical_action(&code.logical_z()[0]).unwrap();
        assert_eq!(zbar.iter_ones().collect::<Vec<_>>(), vec![0]);
        let xbar = code.logical_action(&code.logical_x()[0]).unwrap();
        assert_eq!(xbar.iter_ones().collect::<Vec<_>>(), vec![1]);
        let bad = Pauli::single(12, 1, SingleQubitPauli::X).unwrap();
        assert!(matches!(code.logical_action(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn weight_probe() {
        assert_eq!(build_code(2).unwrap().min_logical_weight_probe(3), Some(3));
        assert_eq!(build_code(1).unwrap().min_logical_weight_probe(1), None);
        assert_eq!(build_code(3).unwrap().min_logical_weight_probe(0), None);
    }

    #[test]
    fn description_round_trip() {
        let code = build_code(3).unwrap();
        let text = serde_json::to_string(&code.description()).unwrap();
        let back: CodeDescription = serde_json::from_str(&text).unwrap();
        let rebuilt = ConvolutionalCode::from_description(&back).unwrap();
        assert_eq!(rebuilt.generators(), code.generators());
        assert_eq!(rebuilt.logical_z(), code.logical_z());
    }

    #[test]
    fn every_block_touches_the_past_only_through_two_qubits() {
        for blocks in [1, 2, 5, 9] {
            let code = build_code(blocks).unwrap();
            for i in 0..blocks {
                for j in 1..=4 {
                    let g = &code.generators()[4 * i + j];
                    let support = g.support();
                    assert!(support.iter().all(|&q| q >= 5 * i + 1 && q <= 5 * i + 7));
                    // Overlap with qubits 1..=5i+2 lies inside {5i+1, 5i+2}.
                    assert!(support
                        .iter()
                        .filter(|&&q| q <= 5 * i + 2)
                        .all(|&q| q == 5 * i + 1 || q == 5 * i + 2));
                }
            }
        }
    }

    #[test]
    fn syndrome_bit_parsing() {
        assert_eq!("0101".parse::<Syndrome>().unwrap().to_index(), 0b1010);
        assert_eq!(
            "01a".parse::<Syndrome>(),
            Err(Error::InvalidSyndromeChar {
                position: 3,
                found: 'a'
            })
        );
        let s = Syndrome::from_index(37, 10);
        assert_eq!(s.to_index(), 37);
    }

    fn arb_error(n: usize) -> impl Strategy<Value = Pauli> {
        proptest::collection::vec(0usize..4, n).prop_map(|codes| {
            let mut e = Pauli::identity(codes.len());
            for (q, c) in codes.into_iter().enumerate() {
                e.put(q, SingleQubitPauli::from_code(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn syndrome_is_linear(
            (blocks, a, b) in (1usize..6).prop_flat_map(|b| (Just(b), arb_error(5 * b + 2), arb_error(5 * b + 2)))
        ) {
            let code = build_code(blocks).unwrap();
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(
                code.syndrome_of(&ab).unwrap(),
                code.syndrome_of(&a).unwrap().xor(&code.syndrome_of(&b).unwrap())
            );
        }

        #[test]
        fn generator_products_are_stabilizers(
            blocks in 1usize..6,
            mask in proptest::collection::vec(any::<bool>(), 26),
            logical in 0usize..12,
        ) {
            let code = build_code(blocks).unwrap();
            let mut prod = Pauli::identity(code.num_qubits());
            for (g, &take) in code.generators().iter().zip(&mask) {
                if take {
                    prod = prod.multiply(g).unwrap();
                }
            }
            prop_assert!(code.in_stabilizer(&prod).unwrap());
            let l = logical % (2 * blocks);
            let op = if l % 2 == 0 { &code.logical_x()[l / 2] } else { &code.logical_z()[l / 2] };
            prop_assert!(!code.in_stabilizer(&prod.multiply(op).unwrap()).unwrap());
        }
    }
}
