//! Counting vectors of a given Hamming weight in affine subspaces of F_2^n.

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{systematic_form, BitVector, GF2Matrix};
use crate::walk::{self, WalkOptions};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `offset + span(basis)` inside F_2^n, with independent basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    n: usize,
    offset: BitVector,
    basis: Vec<BitVector>,
}

impl AffineSubspace {
    pub fn new(offset: BitVector, basis: Vec<BitVector>) -> Result<Self> {
        let n = offset.len();
        if let Some(bad) = basis.iter().find(|b| b.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if !basis.is_empty() {
            let rank = GF2Matrix::from_rows(n, basis.clone())?.rank();
            if rank < basis.len() {
                return Err(Error::Dependent {
                    rank,
                    count: basis.len(),
                });
            }
        }
        Ok(Self { n, offset, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn offset(&self) -> &BitVector {
        &self.offset
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        let diff = v.xor(&self.offset);
        if self.basis.is_empty() {
            return Ok(diff.is_zero());
        }
        let m = GF2Matrix::from_rows(self.n, self.basis.clone())?.transpose();
        Ok(m.solve(&diff)?.is_some())
    }

    /// The same set with a systematic basis and the offset cleared on
    /// every pivot column.
    pub fn normalized(&self) -> Result<Self> {
        let form = systematic_form(&self.basis)?;
        let mut offset = self.offset.clone();
        for (row, &p) in form.basis.iter().zip(&form.pivots) {
            if offset.get(p) {
                offset.xor_assign(row);
            }
        }
        Ok(Self {
            n: self.n,
            offset,
            basis: form.basis,
        })
    }

    /// True when the basis is in reduced echelon form and the offset
    /// vanishes on its pivot columns.
    pub fn is_normalized(&self) -> Result<bool> {
        Ok(self.normalized()? == *self)
    }
}

/// Counts of elements per Hamming weight, indexed `0..=n`.
pub fn weight_distribution(w: &AffineSubspace, options: &WalkOptions) -> Result<Vec<BigUint>> {
    Ok(walk::weight_counts(&w.offset, &w.basis, options)?
        .into_iter()
        .map(BigUint::from)
        .collect())
}

pub fn count_weight_k(w: &AffineSubspace, k: usize, options: &WalkOptions) -> Result<BigUint> {
    let dist = weight_distribution(w, options)?;
    Ok(dist.get(k).cloned().unwrap_or_default())
}

/// A weight at which the count exceeds `C(h+1, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightExcess {
    pub k: usize,
    pub count: BigUint,
    pub bound: BigUint,
}

/// Outcome of comparing every weight count of `W` with `C(h+1, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBoundReport {
    pub h: usize,
    pub counts: Vec<BigUint>,
    pub violations: Vec<WeightExcess>,
}

impl WeightBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when some `k` has `count == C(h+1, k) > 0`.
    pub fn attains_equality_at(&self, k: usize) -> bool {
        self.counts
            .get(k)
            .is_some_and(|c| *c == binomial(self.h + 1, k))
    }
}

/// Compares `count_weight_k(W, k)` with `C(h+1, k)` for every `0 <= k <= n`.
/// Violations are reported, not asserted.
pub fn weight_bound_holds(w: &AffineSubspace, options: &WalkOptions) -> Result<WeightBoundReport> {
    let h = w.dimension();
    let counts = weight_distribution(w, options)?;
    let violations = counts
        .iter()
        .enumerate()
        .filter_map(|(k, c)| {
            let bound = binomial(h + 1, k);
            (*c > bound).then(|| WeightExcess {
                k,
                count: c.clone(),
                bound,
            })
        })
        .collect();
    Ok(WeightBoundReport {
        h,
        counts,
        violations,
    })
}

/// `{x in F_2^n : sum x_i = k mod 2}`, of dimension `n - 1`.
pub fn extremal_parity_subspace(n: usize, k: usize) -> Result<AffineSubspace> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "parity subspace needs 1 <= n and k <= n, got n={n}, k={k}"
        )));
    }
    let last = n - 1;
    let basis = (0..last)
        .map(|i| BitVector::from_indices(n, [i, last]))
        .collect();
    let offset = if k % 2 == 1 {
        BitVector::unit(n, last)
    } else {
        BitVector::zeros(n)
    };
    AffineSubspace::new(offset, basis)
}

/// A uniformly drawn pivot set, random bits right of each pivot in free
/// columns and a random offset supported off the pivots: an affine subspace
/// already in normalized (reduced echelon) form.
pub fn random_normalized<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    h: usize,
) -> Result<AffineSubspace> {
    if h > n {
        return Err(Error::InvalidArgument(format!(
            "dimension {h} exceeds ambient {n}"
        )));
    }
    let mut pivots = sample(rng, n, h).into_vec();
    pivots.sort_unstable();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let basis = pivots
        .iter()
        .map(|&p| {
            let mut v = BitVector::unit(n, p);
            for &c in free.iter().filter(|&&c| c > p) {
                if rng.gen() {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    let mut offset = BitVector::zeros(n);
    for &c in &free {
        if rng.gen() {
            offset.set(c, true);
        }
    }
    AffineSubspace::new(offset, basis)
}
