//! Gray-code walk over an affine subspace `offset + span(basis)`.
//!
//! Consecutive Gray codes differ in one bit, so each step is a single
//! vector XOR followed by a popcount. The index range can be split into
//! prefix blocks and walked in parallel; each block starts from the element
//! for its first Gray code and keeps a private histogram.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Default log2 cap on the number of enumerated elements.
pub const DEFAULT_CAP_LOG2: usize = 28;

/// Limits and parallelism for enumeration kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkOptions {
    /// Largest allowed log2 of the element count.
    pub cap_log2: usize,
    /// Worker threads; 1 walks on the calling thread.
    pub workers: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            cap_log2: DEFAULT_CAP_LOG2,
            workers: 1,
        }
    }
}

impl WalkOptions {
    pub fn check(&self, dimension: usize) -> Result<()> {
        if dimension > self.cap_log2 || dimension >= 63 {
            return Err(Error::CapExceeded {
                log2_size: dimension,
                cap: self.cap_log2,
            });
        }
        Ok(())
    }
}

fn check_lengths(offset: &BitVector, basis: &[BitVector]) {
    for b in basis {
        assert_eq!(b.len(), offset.len(), "basis vector length mismatch");
    }
}

/// Histogram of Hamming weights over `offset + span(basis)`, indexed by
/// weight `0..=len`. Basis vectors are assumed independent.
pub fn weight_counts(
    offset: &BitVector,
    basis: &[BitVector],
    options: &WalkOptions,
) -> Result<Vec<u64>> {
    options.check(basis.len())?;
    check_lengths(offset, basis);
    let h = basis.len();
    let len = offset.len();
    let chunk_bits = if options.workers > 1 {
        let target = (options.workers * 8).next_power_of_two().trailing_zeros() as usize;
        target.min(h)
    } else {
        0
    };
    let block = 1u64 << (h - chunk_bits);
    let run = |c: u64| -> Vec<u64> {
        let start = c * block;
        if offset.words().len() <= 1 {
            walk_single(offset, basis, start, start + block, len)
        } else {
            walk_multi(offset, basis, start, start + block, len)
        }
    };
    if chunk_bits == 0 {
        return Ok(run(0));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        (0..1u64 << chunk_bits).into_par_iter().map(run).reduce(
            || vec![0; len + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
    }))
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

fn walk_single(
    offset: &BitVector,
    basis: &[BitVector],
    start: u64,
    end: u64,
    len: usize,
) -> Vec<u64> {
    let words: Vec<u64> = basis.iter().map(BitVector::to_u64).collect();
    let mut counts = vec![0u64; len + 1];
    let mut cur = offset.to_u64();
    let g = gray(start);
    for (j, w) in words.iter().enumerate() {
        if g >> j & 1 == 1 {
            cur ^= w;
        }
    }
    counts[cur.count_ones() as usize] += 1;
    for i in start + 1..end {
        cur ^= words[i.trailing_zeros() as usize];
        counts[cur.count_ones() as usize] += 1;
    }
    counts
}

fn walk_multi(
    offset: &BitVector,
    basis: &[BitVector],
    start: u64,
    end: u64,
    len: usize,
) -> Vec<u64> {
    let mut counts = vec![0u64; len + 1];
    let mut cur = offset.clone();
    let g = gray(start);
    for (j, b) in basis.iter().enumerate() {
        if g >> j & 1 == 1 {
            cur.xor_assign(b);
        }
    }
    counts[cur.weight()] += 1;
    for i in start + 1..end {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        counts[cur.weight()] += 1;
    }
    counts
}

/// Calls `visit` on every element of `offset + span(basis)` in Gray order.
pub fn for_each_element<F: FnMut(&BitVector)>(
    offset: &BitVector,
    basis: &[BitVector],
    options: &WalkOptions,
    mut visit: F,
) -> Result<()> {
    options.check(basis.len())?;
    check_lengths(offset, basis);
    let mut cur = offset.clone();
    visit(&cur);
    for i in 1u64..(1u64 << basis.len()) {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        visit(&cur);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(offset: &BitVector, basis: &[BitVector]) -> Vec<u64> {
        let mut counts = vec![0u64; offset.len() + 1];
        for mask in 0u64..(1 << basis.len()) {
            let mut v = offset.clone();
            for (j, b) in basis.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            counts[v.weight()] += 1;
        }
        counts
    }

    #[test]
    fn matches_naive_enumeration_single_and_multi_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in [5usize, 64, 130] {
            let h = 9;
            let offset = BitVector::from_words(len, (0..3).map(|_| rng.gen()).collect());
            let basis: Vec<BitVector> = (0..h)
                .map(|_| BitVector::from_words(len, (0..3).map(|_| rng.gen()).collect()))
                .collect();
            let expect = naive(&offset, &basis);
            for workers in [1, 3, 8] {
                let got = weight_counts(
                    &offset,
                    &basis,
                    &WalkOptions {
                        cap_log2: 28,
                        workers,
                    },
                )
                .unwrap();
                assert_eq!(got, expect, "len {len} workers {workers}");
            }
        }
    }

    #[test]
    fn visits_every_element_once() {
        let basis = vec![BitVector::unit(3, 0), BitVector::unit(3, 2)];
        let mut seen = Vec::new();
        for_each_element(
            &BitVector::unit(3, 1),
            &basis,
            &WalkOptions::default(),
            |v| seen.push(v.to_u64()),
        )
        .unwrap();
        seen.sort();
        assert_eq!(seen, vec![2, 3, 6, 7]);
    }

    #[test]
    fn cap_is_enforced() {
        let basis = vec![BitVector::zeros(4); 5];
        let opts = WalkOptions {
            cap_log2: 4,
            workers: 1,
        };
        assert_eq!(
            weight_counts(&BitVector::zeros(4), &basis, &opts),
            Err(Error::CapExceeded {
                log2_size: 5,
                cap: 4
            })
        );
    }
}
