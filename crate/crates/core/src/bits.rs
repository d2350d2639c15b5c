//! Packed GF(2) vectors and incremental row-echelon bases.
//!
//! Everything above this module speaks in qubits; here it is only words.

use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length bit vector packed into `u64` words.
///
/// Bits past `len` in the last word are always zero, so XOR, AND and
/// popcount can run word-at-a-time without masking.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR. Lengths must match.
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    /// Index of the lowest set bit at or above `start`.
    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / WORD_BITS;
        let mut word = self.words[w] & (!0u64 << (start % WORD_BITS));
        loop {
            if word != 0 {
                return Some(w * WORD_BITS + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

/// Row-echelon basis of a GF(2) row space, built one row at a time.
///
/// Each stored row has a distinct pivot (its lowest set bit) and no
/// other stored row has a lower pivot set, so reduction is a single
/// forward sweep.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    width: usize,
    // Indexed by pivot column.
    rows: Vec<Option<BitVector>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: vec![None; width],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduce `v` against the basis; returns the residue.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        let mut from = 0;
        while let Some(c) = r.first_one_from(from) {
            if let Some(row) = &self.rows[c] {
                r.xor_assign(row);
            }
            from = c + 1;
        }
        r
    }

    /// Insert `v`; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.width, "row width mismatch");
        let mut r = v.clone();
        let mut from = 0;
        while let Some(c) = r.first_one_from(from) {
            match &self.rows[c] {
                Some(row) => {
                    r.xor_assign(row);
                    from = c + 1;
                }
                None => {
                    self.rows[c] = Some(r);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip_count() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(64));
        assert_eq!(v.count_ones(), 3);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
        assert_eq!(v.first_one_from(1), Some(129));
        assert_eq!(v.first_one_from(130), None);
    }

    #[test]
    fn dot_is_parity_of_and() {
        let a = BitVector::from_bools(&[true, true, false, true]);
        let b = BitVector::from_bools(&[true, false, true, true]);
        assert!(!a.dot(&b));
        let c = BitVector::from_bools(&[true, false, false, false]);
        assert!(a.dot(&c));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let rows = [
            [true, true, false, false],
            [false, true, true, false],
            [true, false, true, false],
        ];
        let mut basis = EchelonBasis::new(4);
        let inserted: Vec<bool> = rows
            .iter()
            .map(|r| basis.insert(&BitVector::from_bools(r)))
            .collect();
        assert_eq!(inserted, vec![true, true, false]);
        assert_eq!(basis.rank(), 2);
        assert!(basis.contains(&BitVector::from_bools(&[true, false, true, false])));
        assert!(!basis.contains(&BitVector::from_bools(&[false, false, false, true])));
    }
}
