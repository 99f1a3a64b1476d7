//! Exact dyadic rationals `numerator / 2^exponent`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// An exact value `numerator * 2^-exponent`, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Self {
        let mut numerator = numerator.into();
        let mut exponent = exponent;
        if numerator.is_zero() {
            return Self::zero();
        }
        let twos = numerator.trailing_zeros().unwrap_or(0).min(exponent);
        if twos > 0 {
            numerator >>= twos;
            exponent -= twos;
        }
        Self {
            numerator,
            exponent,
        }
    }

    pub fn zero() -> Self {
        Self {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    /// `count * 2^-m`.
    pub fn from_count(count: &BigUint, m: u64) -> Self {
        Self::new(BigInt::from_biguint(Sign::Plus, count.clone()), m)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self {
            numerator: self.numerator.abs(),
            exponent: self.exponent,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.numerator.is_negative() {
            -1.0
        } else {
            1.0
        };
        if self.numerator.bits() <= 53 && self.exponent <= 1000 {
            let n = self.numerator.to_f64().unwrap_or(f64::NAN);
            return n * 2f64.powi(-(self.exponent as i32));
        }
        sign * (self.ln_abs()).exp()
    }

    /// Natural log of `|self|`; `-inf` for zero. Accurate for huge numerators.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_biguint(self.numerator.magnitude()) - self.exponent as f64 * std::f64::consts::LN_2
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Self::new(a - b, e)
    }

    /// Multiplies by `2^-k`.
    pub fn halve(&self, k: u64) -> Self {
        Self::new(self.numerator.clone(), self.exponent + k)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc.add(&x))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

/// Natural logarithm of a positive big integer from its top 64 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
