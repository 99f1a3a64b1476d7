//! Bit-packed vectors and dense matrices over GF(2).
//!
//! Bit `i` of a [`BitVector`] lives in word `i / 64` at position `i % 64`.
//! Bits at positions `>= len` are always zero, so word-level equality,
//! hashing and popcounts never see padding.
//!
//! Matrices are row-major sequences of packed rows. Rank, solving and
//! inversion run Gaussian elimination on copies; inputs are never mutated.

use std::fmt;

use crate::error::{Error, Result};

/// Largest column count accepted by [`GF2Matrix`].
pub const MAX_DENSE_COLS: usize = 1 << 16;

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the low `len` bits of `value` (bit `i` = `value >> i & 1`).
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits, got {len}");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = value & mask;
        }
        v
    }

    /// Builds a vector with the given positions set. Repeated indices toggle.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    /// Builds a vector from raw words, clearing padding bits.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(word_count(len), 0);
        let mut v = Self { len, words };
        v.clear_padding();
        v
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
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

    /// The low 64 bits as an integer.
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    /// Copy of the coordinates listed in `indices`, in that order.
    pub fn gather(&self, indices: &[usize]) -> Self {
        let mut out = Self::zeros(indices.len());
        for (dst, &src) in indices.iter().enumerate() {
            if self.get(src) {
                out.set(dst, true);
            }
        }
        out
    }

    /// Hex of the integer `sum_i bit_i * 2^i`, zero-padded to `ceil(len/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nibble = 0u32;
            for b in 0..4 {
                let i = d * 4 + b;
                if i < self.len && self.get(i) {
                    nibble |= 1 << b;
                }
            }
            s.push(char::from_digit(nibble, 16).unwrap());
        }
        s
    }

    /// Parses the output of [`BitVector::to_hex`].
    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let mut v = Self::zeros(len);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Parse {
                position: hex.len() - 1 - d,
                message: format!("invalid hex digit {c:?}"),
            })?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return Err(Error::IndexOutOfRange { index: i, len });
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    /// One-based set notation, e.g. `{1,3}`.
    pub fn to_set_string(&self) -> String {
        let items: Vec<String> = self.ones().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Result of [`GF2Matrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: BitVector,
    pub nullspace: Vec<BitVector>,
}

/// Result of [`systematic_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicForm {
    /// `permutation[c]` is the original column placed at position `c`;
    /// pivot columns come first, in order.
    pub permutation: Vec<usize>,
    /// Pivot column of each basis row, in original coordinates.
    pub pivots: Vec<usize>,
    /// Reduced basis in original coordinates.
    pub basis: Vec<BitVector>,
}

fn check_width(cols: usize) -> Result<()> {
    if cols > MAX_DENSE_COLS {
        return Err(Error::TooWide {
            cols,
            limit: MAX_DENSE_COLS,
        });
    }
    Ok(())
}

/// In-place reduced row echelon form. Row operations are mirrored onto
/// `companion`. Returns the pivot column of each of the first `rank` rows.
fn rref(rows: &mut [BitVector], companion: &mut [BitVector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        if !companion.is_empty() {
            companion.swap(next, found);
        }
        let (pivot_row, pivot_comp) = (rows[next].clone(), companion.get(next).cloned());
        for r in 0..rows.len() {
            if r != next && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                if let Some(pc) = &pivot_comp {
                    companion[r].xor_assign(pc);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_width(cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        })
    }

    /// Builds a matrix from rows that all have length `cols`.
    pub fn from_rows(cols: usize, data: Vec<BitVector>) -> Result<Self> {
        check_width(cols)?;
        if let Some(bad) = data.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor from a 0/1 table.
    pub fn from_table(cols: usize, table: &[&[u8]]) -> Result<Self> {
        let rows = table
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::DimensionMismatch {
                        expected: cols,
                        found: r.len(),
                    });
                }
                Ok(BitVector::from_bits(
                    &r.iter().map(|&b| b != 0).collect::<Vec<_>>(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.weight() == 1 && r.get(i))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self {
            rows: self.cols,
            cols: self.rows,
            data: vec![BitVector::zeros(self.rows); self.cols],
        };
        for (i, row) in self.data.iter().enumerate() {
            for j in row.ones() {
                out.data[j].set(i, true);
            }
        }
        out
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `x^T M`, i.e. the XOR of the rows selected by `x`.
    pub fn left_mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in x.ones() {
            out.xor_assign(&self.data[i]);
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| other.left_mul_vec(row))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(other.cols, data)
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        rref(&mut rows, &mut [], self.cols).len()
    }

    /// Solves `M x = b`. Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut rows = self.data.clone();
        let mut rhs: Vec<BitVector> = (0..self.rows)
            .map(|i| BitVector::from_bits(&[b.get(i)]))
            .collect();
        let pivots = rref(&mut rows, &mut rhs, self.cols);
        if rhs[pivots.len()..].iter().any(|r| r.get(0)) {
            return Ok(None);
        }
        let mut particular = BitVector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if rhs[r].get(0) {
                particular.set(c, true);
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let nullspace = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut z = BitVector::unit(self.cols, f);
                for (r, &c) in pivots.iter().enumerate() {
                    if rows[r].get(f) {
                        z.set(c, true);
                    }
                }
                z
            })
            .collect();
        Ok(Some(Solution {
            particular,
            nullspace,
        }))
    }

    /// Inverse of a square matrix.
    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut rows = self.data.clone();
        let mut inv: Vec<BitVector> = (0..n).map(|i| BitVector::unit(n, i)).collect();
        let pivots = rref(&mut rows, &mut inv, n);
        if pivots.len() < n {
            return Err(Error::Singular {
                rank: pivots.len(),
                size: n,
            });
        }
        Self::from_rows(n, inv)
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", u8::from(row.get(j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Reduces an independent set of vectors to systematic form: after the
/// returned column permutation, row `i` has its leading one in column `i`
/// and zeros in every other pivot column.
pub fn systematic_form(basis: &[BitVector]) -> Result<SystematicForm> {
    let Some(first) = basis.first() else {
        return Ok(SystematicForm {
            permutation: Vec::new(),
            pivots: Vec::new(),
            basis: Vec::new(),
        });
    };
    let n = first.len();
    if let Some(bad) = basis.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let mut rows = basis.to_vec();
    let pivots = rref(&mut rows, &mut [], n);
    if pivots.len() < basis.len() {
        return Err(Error::Dependent {
            rank: pivots.len(),
            count: basis.len(),
        });
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let permutation = pivots
        .iter()
        .copied()
        .chain((0..n).filter(|&c| !is_pivot[c]))
        .collect();
    Ok(SystematicForm {
        permutation,
        pivots,
        basis: rows,
    })
}
