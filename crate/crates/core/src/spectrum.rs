//! Exact Fourier coefficients and level-k weights of `(-1)^{q(x)}` read off
//! a [`DicksonForm`], at a cost independent of `2^n`.
//!
//! With `x = T^-1 y`, `q(x) + (S, x) = sum y_{2j} y_{2j+1} + (v, y) + b` where
//! `v = L + T^{-T} S`. Averaging each hyperbolic pair gives
//! `E (-1)^{y1 y2 + a y1 + c y2} = (-1)^{ac} / 2`, and every free coordinate
//! averages to zero unless `v` vanishes there. Hence
//!
//! ```text
//! f^(S) = (-1)^{b + sum_j v_{2j} v_{2j+1}} 2^-m   if v_a = 0 for all a >= 2m
//!       = 0                                       otherwise
//! ```

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::dickson::DicksonForm;
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::gf2::{BitVector, GF2Matrix};
use crate::walk::{self, WalkOptions};

/// `sign * 2^-m`; the exponent is irrelevant when `sign == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourierCoefficient {
    pub sign: i8,
    pub scale_exponent: usize,
}

impl FourierCoefficient {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            scale_exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> Dyadic {
        Dyadic::new(self.sign as i64, self.scale_exponent as u64)
    }
}

pub fn fourier_coefficient(d: &DicksonForm, character: &BitVector) -> Result<FourierCoefficient> {
    let mut v = d.dual_apply(character)?;
    v.xor_assign(d.linear());
    let m = d.m();
    if v.ones().any(|a| a >= 2 * m) {
        return Ok(FourierCoefficient::zero());
    }
    let mut parity = d.constant();
    for j in 0..m {
        parity ^= v.get(2 * j) & v.get(2 * j + 1);
    }
    Ok(FourierCoefficient {
        sign: if parity { -1 } else { 1 },
        scale_exponent: m,
    })
}

/// The affine set of characters with nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCoset {
    n: usize,
    offset: BitVector,
    basis: Vec<BitVector>,
    /// x-indices of the quadratic support; the only coordinates the basis touches.
    support: Vec<usize>,
    forced_weight: usize,
}

impl SupportCoset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> &BitVector {
        &self.offset
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Weight the offset carries outside the quadratic support; every
    /// element of the coset has exactly these bits there.
    pub fn forced_weight(&self) -> usize {
        self.forced_weight
    }

    /// Offset and basis restricted to the support coordinates.
    pub fn local(&self) -> (BitVector, Vec<BitVector>) {
        (
            self.offset.gather(&self.support),
            self.basis.iter().map(|b| b.gather(&self.support)).collect(),
        )
    }

    pub fn contains(&self, u: &BitVector) -> Result<bool> {
        let diff = u.xor(&self.offset);
        if self.basis.is_empty() {
            return Ok(diff.is_zero());
        }
        let m = GF2Matrix::from_rows(self.n, self.basis.clone())?.transpose();
        Ok(m.solve(&diff)?.is_some())
    }
}

pub fn support(d: &DicksonForm) -> Result<SupportCoset> {
    let n = d.n();
    let m = d.m();
    let sup = d.support().to_vec();
    let s = sup.len();
    // Characters S with (T^{-T} S)_a = L_a for every radical coordinate a.
    let constraints: Vec<BitVector> = (2 * m..s).map(|a| d.basis_column(a).clone()).collect();
    let rhs = BitVector::from_bits(&(2 * m..s).map(|a| d.linear().get(a)).collect::<Vec<_>>());
    let system = GF2Matrix::from_rows(s, constraints)?;
    let solution = system
        .solve(&rhs)?
        .expect("radical constraints are independent and always consistent");
    debug_assert_eq!(solution.nullspace.len(), 2 * m);

    let mut offset = BitVector::zeros(n);
    for a in solution.particular.ones() {
        offset.set(sup[a], true);
    }
    let mut forced_weight = 0;
    for (t, &i) in d.outside().iter().enumerate() {
        if d.linear().get(s + t) {
            offset.set(i, true);
            forced_weight += 1;
        }
    }
    let basis = (0..2 * m).map(|a| d.t_row(a)).collect();
    Ok(SupportCoset {
        n,
        offset,
        basis,
        support: sup,
        forced_weight,
    })
}

/// Exact counts of support characters per Hamming weight, scale `2^-m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightHistogram {
    counts: BTreeMap<usize, BigUint>,
    scale_exponent: usize,
}

impl WeightHistogram {
    pub fn from_counts(counts: BTreeMap<usize, BigUint>, scale_exponent: usize) -> Self {
        Self {
            counts: counts.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            scale_exponent,
        }
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(&k).cloned().unwrap_or_default()
    }

    pub fn scale_exponent(&self) -> usize {
        self.scale_exponent
    }

    /// Nonzero `(k, count)` entries in increasing `k`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().map(|(&k, c)| (k, c))
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `count(k) * 2^-m`.
    pub fn level_weight(&self, k: usize) -> Dyadic {
        Dyadic::from_count(&self.count(k), self.scale_exponent as u64)
    }

    /// Same histogram with every weight moved by `delta`.
    pub fn shifted(&self, delta: isize) -> Self {
        Self {
            counts: self
                .counts
                .iter()
                .map(|(&k, c)| ((k as isize + delta) as usize, c.clone()))
                .collect(),
            scale_exponent: self.scale_exponent,
        }
    }
}

pub fn weight_histogram(d: &DicksonForm, options: &WalkOptions) -> Result<WeightHistogram> {
    options.check(2 * d.m())?;
    let coset = support(d)?;
    let (offset, basis) = coset.local();
    let counts = walk::weight_counts(&offset, &basis, options)?;
    let map = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(w, c)| (w + coset.forced_weight, BigUint::from(c)))
        .collect();
    Ok(WeightHistogram::from_counts(map, d.m()))
}

pub fn level_weight(d: &DicksonForm, k: usize, options: &WalkOptions) -> Result<Dyadic> {
    if k > d.n() {
        options.check(2 * d.m())?;
        return Ok(Dyadic::zero());
    }
    Ok(weight_histogram(d, options)?.level_weight(k))
}

/// Every nonzero coefficient, in Gray-walk order.
pub fn nonzero_coefficients(
    d: &DicksonForm,
    options: &WalkOptions,
) -> Result<Vec<(BitVector, FourierCoefficient)>> {
    let coset = support(d)?;
    let mut out = Vec::with_capacity(1usize << (2 * d.m()).min(24));
    let mut failure = None;
    walk::for_each_element(coset.offset(), coset.basis(), options, |u| {
        if failure.is_some() {
            return;
        }
        match fourier_coefficient(d, u) {
            Ok(c) => out.push((u.clone(), c)),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anf::QuadraticForm;
    use crate::dickson::dickson_reduce;
    use crate::oracle::{level_weights_bruteforce, spectrum_bruteforce};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reduce(text: &str) -> DicksonForm {
        dickson_reduce(&QuadraticForm::parse(text, None).unwrap()).unwrap()
    }

    fn coeff(d: &DicksonForm, bits: &[usize]) -> Dyadic {
        fourier_coefficient(d, &BitVector::from_indices(d.n(), bits.iter().copied()))
            .unwrap()
            .value()
    }

    #[test]
    fn coefficient_examples() {
        let d = dickson_reduce(&QuadraticForm::zero(3)).unwrap();
        assert_eq!(coeff(&d, &[]), Dyadic::new(1, 0));
        assert_eq!(coeff(&d, &[1]), Dyadic::zero());

        let d = reduce("x1*x2");
        let half = Dyadic::new(1, 1);
        assert_eq!(coeff(&d, &[]), half);
        assert_eq!(coeff(&d, &[0]), half);
        assert_eq!(coeff(&d, &[1]), half);
        assert_eq!(coeff(&d, &[0, 1]), Dyadic::new(-1, 1));

        let d = reduce("x1 + x2 + x3 + x4");
        assert_eq!(coeff(&d, &[0, 1, 2, 3]), Dyadic::new(1, 0));
        assert_eq!(coeff(&d, &[0, 1, 2]), Dyadic::zero());
    }

    #[test]
    fn support_examples() {
        let c = support(&reduce("x1*x2")).unwrap();
        assert_eq!(c.dimension(), 2);
        assert!(c.offset().is_zero());

        let c = support(&reduce("x1*x2 + x3")).unwrap();
        assert_eq!(c.offset(), &BitVector::unit(3, 2));
        assert_eq!(c.forced_weight(), 1);
        for u in 0u64..8 {
            let u = BitVector::from_u64(3, u);
            assert_eq!(c.contains(&u).unwrap(), u.get(2));
        }

        let c = support(&reduce("x1")).unwrap();
        assert_eq!(c.dimension(), 0);
        assert_eq!(c.offset(), &BitVector::unit(1, 0));
    }

    #[test]
    fn histogram_examples() {
        let opts = WalkOptions::default();
        let h = weight_histogram(&reduce("x1*x2"), &opts).unwrap();
        assert_eq!(
            (0..3).map(|k| h.count(k)).collect::<Vec<_>>(),
            vec![1u32.into(), 2u32.into(), 1u32.into()]
        );
        assert_eq!(h.scale_exponent(), 1);
        assert_eq!(h.level_weight(0), Dyadic::new(1, 1));
        assert_eq!(h.level_weight(1), Dyadic::new(1, 0));

        let h = weight_histogram(&reduce("x1*x2 + x3*x4"), &opts).unwrap();
        let binom = [1u32, 4, 6, 4, 1];
        for k in 0..5 {
            assert_eq!(h.count(k), BigUint::from(binom[k]));
        }
        assert_eq!(h.level_weight(2), Dyadic::new(3, 1));

        let h = weight_histogram(&dickson_reduce(&QuadraticForm::zero(4)).unwrap(), &opts).unwrap();
        assert_eq!(
            h.entries().collect::<Vec<_>>(),
            vec![(0, &BigUint::from(1u8))]
        );
        assert_eq!(h.scale_exponent(), 0);
    }

    #[test]
    fn level_weight_examples() {
        let opts = WalkOptions::default();
        let d = reduce("x1*x2");
        assert_eq!(level_weight(&d, 1, &opts).unwrap(), Dyadic::new(1, 0));
        assert_eq!(level_weight(&d, 3, &opts).unwrap(), Dyadic::zero());
        let w = level_weight(&reduce("x1*x2 + x3*x4"), 2, &opts).unwrap();
        assert_eq!(w, Dyadic::new(3, 1));
        assert!(w.to_f64() <= (1.0 + 2f64.sqrt()).powi(2));
    }

    #[test]
    fn cap_error_is_reported() {
        let d = reduce("x1*x2 + x3*x4 + x5*x6");
        let opts = WalkOptions {
            cap_log2: 4,
            workers: 1,
        };
        assert!(weight_histogram(&d, &opts).is_err());
    }

    fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> QuadraticForm {
        let density: f64 = rng.gen();
        let mut f = QuadraticForm::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    f.toggle_pair(i, j);
                }
            }
            if rng.gen() {
                f.toggle_linear(i);
            }
        }
        f.set_constant(rng.gen());
        f
    }

    #[test]
    fn signed_spectrum_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let n = rng.gen_range(0..=9);
            let f = random_quadratic(&mut rng, n);
            let d = dickson_reduce(&f).unwrap();
            let oracle = spectrum_bruteforce(&f).unwrap();
            let coset = support(&d).unwrap();
            for (s, expect) in oracle.iter().enumerate() {
                let u = BitVector::from_u64(n, s as u64);
                let got = fourier_coefficient(&d, &u).unwrap();
                assert_eq!(&got.value(), expect, "{f:?} at {u:?}");
                assert_eq!(coset.contains(&u).unwrap(), !got.is_zero());
            }
            let h = weight_histogram(&d, &WalkOptions::default()).unwrap();
            assert_eq!(h.total(), BigUint::from(1u8) << (2 * d.m()));
            let brute = level_weights_bruteforce(&f).unwrap();
            for (k, w) in brute.iter().enumerate() {
                assert_eq!(&h.level_weight(k), w);
                assert!(w.to_f64() <= (1.0 + 2f64.sqrt()).powi(k as i32) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn nonzero_listing_has_parseval_mass() {
        let d = reduce("x1*x2 + x2*x3 + x4*x5 + x1");
        let list = nonzero_coefficients(&d, &WalkOptions::default()).unwrap();
        assert_eq!(list.len(), 1 << (2 * d.m()));
        let energy: Dyadic = list
            .iter()
            .map(|(_, c)| {
                let v = c.value();
                Dyadic::new(v.numerator() * v.numerator(), 2 * v.exponent())
            })
            .sum();
        assert_eq!(energy, Dyadic::new(1, 0));
    }

    #[test]
    fn embedding_leaves_histogram_unchanged() {
        let f = QuadraticForm::parse("x1*x2 + x2*x3 + x3*x4 + x2", None).unwrap();
        let d = dickson_reduce(&f).unwrap();
        let g = f.embed(40, &[3, 17, 20, 39]).unwrap();
        let e = dickson_reduce(&g).unwrap();
        let opts = WalkOptions::default();
        assert_eq!(
            weight_histogram(&d, &opts).unwrap(),
            weight_histogram(&e, &opts).unwrap()
        );
    }
}
