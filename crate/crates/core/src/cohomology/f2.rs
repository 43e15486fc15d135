//! Packed F₂ vectors and incremental row reduction.

use std::fmt;

const WORD: usize = 64;

/// A vector over F₂ stored as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut row = Self::zeros(len);
        row.set(index);
        row
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.toggle(i);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// Set indices in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + bit)
            })
        })
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

/// Row-echelon basis grown one vector at a time. Each stored row has a
/// distinct pivot (its lowest set bit) that no other row has set below it.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<BitRow>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            pivot_row: vec![None; len],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; zero iff `v` lies in their span.
    pub fn reduce(&self, mut v: BitRow) -> BitRow {
        while let Some(p) = v.first_one() {
            match self.pivot_row[p] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => break,
            }
        }
        // the loop stops at the first unmatched pivot; finish clearing higher pivots
        let mut start = match v.first_one() {
            Some(p) => p + 1,
            None => return v,
        };
        while let Some(p) = next_one_from(&v, start) {
            if let Some(r) = self.pivot_row[p] {
                v.xor_assign(&self.rows[r]);
            }
            start = p + 1;
        }
        v
    }

    /// Adds `v` to the span; returns `true` if it was independent.
    pub fn insert(&mut self, v: BitRow) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v;
        while let Some(p) = v.first_one() {
            match self.pivot_row[p] {
                Some(r) => v.xor_assign(&self.rows[r]),
                None => {
                    self.pivot_row[p] = Some(self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

fn next_one_from(v: &BitRow, start: usize) -> Option<usize> {
    if start >= v.len() {
        return None;
    }
    let mut k = start / WORD;
    let mut w = v.words[k] & (!0u64 << (start % WORD));
    loop {
        if w != 0 {
            return Some(k * WORD + w.trailing_zeros() as usize);
        }
        k += 1;
        if k >= v.words.len() {
            return None;
        }
        w = v.words[k];
    }
}

/// Nullspace of the linear map sending basis vector `c` to `images[c]`.
/// Returned vectors live in the source space (length `images.len()`).
pub fn kernel(images: &[BitRow], target_len: usize) -> Vec<BitRow> {
    let n = images.len();
    let mut pivot_row: Vec<Option<usize>> = vec![None; target_len];
    let mut rows: Vec<(BitRow, BitRow)> = Vec::new();
    let mut out = Vec::new();
    for (c, img) in images.iter().enumerate() {
        let mut img = img.clone();
        let mut combo = BitRow::unit(n, c);
        loop {
            match img.first_one() {
                None => {
                    out.push(combo);
                    break;
                }
                Some(p) => match pivot_row[p] {
                    Some(r) => {
                        img.xor_assign(&rows[r].0);
                        combo.xor_assign(&rows[r].1);
                    }
                    None => {
                        pivot_row[p] = Some(rows.len());
                        rows.push((img, combo));
                        break;
                    }
                },
            }
        }
    }
    out
}

/// Parity of the binomial coefficient `C(n, k)` (Lucas' theorem at p = 2).
pub fn binomial_is_odd(n: usize, k: usize) -> bool {
    k <= n && (k & n) == k
}
