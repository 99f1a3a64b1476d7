//! Brute-force ground truth over the full truth table.
//!
//! Index convention: bit `i` of a table index is `x_i` (zero-based), and the
//! same convention indexes characters `A`, so `wht(t)[a] = 2^n * f^(A)`.

use num_bigint::BigInt;

use crate::anf::{AnfPolynomial, QuadraticForm};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Default largest `n` for which a truth table is materialized.
pub const DEFAULT_TABLE_LIMIT: usize = 24;

/// Anything that can be tabulated as a GF(2)-valued function of `n` bits.
pub trait PhaseSource {
    fn variables(&self) -> usize;

    /// Values `p(x)` for `x = 0 .. 2^n`, with `n <= 63`.
    fn values(&self) -> Vec<bool>;
}

impl PhaseSource for QuadraticForm {
    fn variables(&self) -> usize {
        self.n()
    }

    fn values(&self) -> Vec<bool> {
        let n = self.n();
        // lower-index neighbours of each variable, as bit masks
        let mut below = vec![0u64; n];
        for (i, j) in self.pairs() {
            below[j] |= 1 << i;
        }
        let mut out = vec![false; 1 << n];
        out[0] = self.constant();
        for x in 1usize..(1 << n) {
            let top = usize::BITS as usize - 1 - x.leading_zeros() as usize;
            let rest = x ^ (1 << top);
            let cross = (below[top] & rest as u64).count_ones() & 1 == 1;
            out[x] = out[rest] ^ self.linear().get(top) ^ cross;
        }
        out
    }
}

impl PhaseSource for AnfPolynomial {
    fn variables(&self) -> usize {
        self.n()
    }

    fn values(&self) -> Vec<bool> {
        let masks: Vec<u64> = self
            .monomials()
            .iter()
            .map(|m| m.iter().fold(0u64, |acc, &i| acc | 1 << i))
            .collect();
        (0u64..(1 << self.n()))
            .map(|x| masks.iter().filter(|&&m| x & m == m).count() % 2 == 1)
            .collect()
    }
}

/// The ±1 table of `(-1)^{p(x)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    n: usize,
    values: Vec<i8>,
}

impl SignTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }
}

pub fn truth_table<P: PhaseSource + ?Sized>(p: &P) -> Result<SignTable> {
    truth_table_with_limit(p, DEFAULT_TABLE_LIMIT)
}

pub fn truth_table_with_limit<P: PhaseSource + ?Sized>(p: &P, limit: usize) -> Result<SignTable> {
    let n = p.variables();
    if n > limit.min(40) {
        return Err(Error::TooManyVariables { n, limit });
    }
    Ok(SignTable {
        n,
        values: p
            .values()
            .into_iter()
            .map(|b| if b { -1 } else { 1 })
            .collect(),
    })
}

/// In-place unnormalized Walsh–Hadamard butterfly.
pub fn wht_in_place(data: &mut [i64]) {
    let len = data.len();
    assert!(
        len.is_power_of_two(),
        "WHT length {len} is not a power of two"
    );
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `2^n f^(A)` for every character `A`.
pub fn wht(t: &SignTable) -> Vec<i64> {
    let mut data: Vec<i64> = t.values.iter().map(|&v| v as i64).collect();
    wht_in_place(&mut data);
    data
}

/// Spectrum of `(-1)^{p(x)}` as exact dyadics.
pub fn spectrum_bruteforce<P: PhaseSource + ?Sized>(p: &P) -> Result<Vec<Dyadic>> {
    let t = truth_table(p)?;
    let n = t.n as u64;
    Ok(wht(&t).into_iter().map(|w| Dyadic::new(w, n)).collect())
}

/// Level weights `sum_{|A|=k} |f^(A)|` for `k = 0..=n`.
pub fn level_weights_bruteforce<P: PhaseSource + ?Sized>(p: &P) -> Result<Vec<Dyadic>> {
    let t = truth_table(p)?;
    let n = t.n;
    let mut sums = vec![0i64; n + 1];
    for (a, w) in wht(&t).into_iter().enumerate() {
        sums[a.count_ones() as usize] += w.abs();
    }
    Ok(sums
        .into_iter()
        .map(|s| Dyadic::new(BigInt::from(s), n as u64))
        .collect())
}

/// `sum_{|A|=k} |f^(A)|`; zero for `k > n`.
pub fn level_weight_bruteforce<P: PhaseSource + ?Sized>(p: &P, k: usize) -> Result<Dyadic> {
    let weights = level_weights_bruteforce(p)?;
    Ok(weights.get(k).cloned().unwrap_or_else(Dyadic::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVector;
    use proptest::prelude::*;

    fn q(text: &str) -> QuadraticForm {
        QuadraticForm::parse(text, None).unwrap()
    }

    #[test]
    fn truth_table_examples() {
        let zero = QuadraticForm::zero(1);
        assert_eq!(truth_table(&zero).unwrap().values(), &[1, 1]);
        assert_eq!(truth_table(&q("x1")).unwrap().values(), &[1, -1]);
        assert_eq!(truth_table(&q("x1*x2")).unwrap().values(), &[1, 1, 1, -1]);
        assert!(matches!(
            truth_table(&QuadraticForm::zero(25)),
            Err(Error::TooManyVariables { n: 25, .. })
        ));
        assert!(truth_table_with_limit(&QuadraticForm::zero(5), 4).is_err());
    }

    #[test]
    fn wht_examples() {
        assert_eq!(
            wht(&truth_table(&QuadraticForm::zero(1)).unwrap()),
            vec![2, 0]
        );
        assert_eq!(wht(&truth_table(&q("x1*x2")).unwrap()), vec![2, 2, 2, -2]);
        let s = spectrum_bruteforce(&q("x1*x2")).unwrap();
        assert_eq!(s[3], Dyadic::new(-1, 1));
    }

    #[test]
    fn level_weight_examples() {
        assert_eq!(
            level_weight_bruteforce(&q("x1*x2"), 1).unwrap(),
            Dyadic::new(1, 0)
        );
        assert_eq!(
            level_weight_bruteforce(&q("x1 + x2"), 2).unwrap(),
            Dyadic::new(1, 0)
        );
        let f = q("x1*x2 + x2*x3 + x1");
        let s = spectrum_bruteforce(&f).unwrap();
        assert_eq!(level_weight_bruteforce(&f, 0).unwrap(), s[0].abs());
        assert_eq!(level_weight_bruteforce(&f, 9).unwrap(), Dyadic::zero());
    }

    #[test]
    fn anf_and_quadratic_tables_agree() {
        let f = q("x1*x2 + x2*x4 + x3 + 1");
        assert_eq!(f.values(), f.to_anf().values());
        let cubic = AnfPolynomial::parse("x1*x2*x3", None).unwrap();
        assert_eq!(truth_table(&cubic).unwrap().values()[7], -1);
    }

    proptest! {
        #[test]
        fn involution_and_parseval(n in 0usize..=8, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut f = QuadraticForm::zero(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen() { f.toggle_pair(i, j); }
                }
                if rng.gen() { f.toggle_linear(i); }
            }
            let t = truth_table(&f).unwrap();
            let w = wht(&t);
            let energy: i64 = w.iter().map(|x| x * x).sum();
            prop_assert_eq!(energy, 1i64 << (2 * n));
            let mut back = w.clone();
            wht_in_place(&mut back);
            for (b, &v) in back.iter().zip(t.values()) {
                prop_assert_eq!(*b, (v as i64) << n);
            }
            for x in 0u64..(1 << n) {
                let expect = f.evaluate(&BitVector::from_u64(n, x)).unwrap();
                prop_assert_eq!(t.values()[x as usize] == -1, expect);
            }
        }
    }
}
