//! Polynomials over GF(2) in algebraic normal form, and the degree-2
//! specialisation [`QuadraticForm`] used by everything downstream.
//!
//! Text uses one-based variables (`x1*x2 + x3 + 1`); internally variable
//! `xk` is index `k - 1`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, GF2Matrix};

/// A polynomial as a set of monomials; the empty monomial is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnfPolynomial {
    n: usize,
    monomials: BTreeSet<Vec<usize>>,
}

fn monomial_order(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn format_monomial(m: &[usize]) -> String {
    if m.is_empty() {
        return "1".to_string();
    }
    m.iter()
        .map(|i| format!("x{}", i + 1))
        .collect::<Vec<_>>()
        .join("*")
}

impl AnfPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            monomials: BTreeSet::new(),
        }
    }

    /// Builds a polynomial from monomials given as index lists. Repeated
    /// indices inside a monomial collapse (`x*x = x`); repeated monomials cancel.
    pub fn from_monomials<I, M>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: IntoIterator<Item = usize>,
    {
        let mut p = Self::zero(n);
        for m in monomials {
            let set: BTreeSet<usize> = m.into_iter().collect();
            if let Some(&bad) = set.iter().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: bad, len: n });
            }
            p.toggle(set.into_iter().collect());
        }
        Ok(p)
    }

    fn toggle(&mut self, monomial: Vec<usize>) {
        if !self.monomials.remove(&monomial) {
            self.monomials.insert(monomial);
        }
    }

    /// Parses the ANF text grammar:
    ///
    /// ```text
    /// poly := term (ws '+' ws term)* | '0'
    /// term := '1' | var (ws '*' ws var)*
    /// var  := 'x' [1-9][0-9]*
    /// ```
    ///
    /// When `n` is `None` the variable count is the largest index used.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let mut raw: Vec<Vec<usize>> = Vec::new();
        parser.skip_ws();
        if parser.peek() == Some(b'0') {
            parser.pos += 1;
            parser.skip_ws();
            if parser.pos != parser.bytes.len() {
                return Err(parser.error("unexpected input after '0'"));
            }
        } else {
            loop {
                raw.push(parser.term()?);
                parser.skip_ws();
                match parser.peek() {
                    None => break,
                    Some(b'+') => {
                        parser.pos += 1;
                        parser.skip_ws();
                    }
                    Some(c) => {
                        return Err(parser.error(&format!("expected '+', found {:?}", c as char)))
                    }
                }
            }
        }
        let max_used = raw.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        let n = match n {
            Some(n) if n < max_used => {
                return Err(Error::IndexOutOfRange {
                    index: max_used - 1,
                    len: n,
                })
            }
            Some(n) => n,
            None => max_used,
        };
        Self::from_monomials(n, raw)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Monomials in serialization order: by degree, then lexicographically.
    pub fn monomials(&self) -> Vec<&[usize]> {
        let mut out: Vec<&[usize]> = self.monomials.iter().map(Vec::as_slice).collect();
        out.sort_by(|a, b| monomial_order(a, b));
        out
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &BitVector) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self
            .monomials
            .iter()
            .filter(|m| m.iter().all(|&i| x.get(i)))
            .count()
            % 2
            == 1)
    }

    /// Converts to a [`QuadraticForm`]; fails on degree > 2.
    pub fn to_quadratic(&self) -> Result<QuadraticForm> {
        let mut q = QuadraticForm::zero(self.n);
        for m in &self.monomials {
            match m.as_slice() {
                [] => q.constant ^= true,
                [i] => q.linear.flip(*i),
                [i, j] => q.toggle_pair(*i, *j),
                _ => {
                    return Err(Error::DegreeTooHigh {
                        degree: m.len(),
                        monomial: format_monomial(m),
                    })
                }
            }
        }
        Ok(q)
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.monomials().into_iter().map(format_monomial).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfPolynomial(n={}, {})", self.n, self)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn term(&mut self) -> Result<Vec<usize>> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(b'x') => {
                let mut vars = vec![self.var()?];
                loop {
                    let save = self.pos;
                    self.skip_ws();
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                        self.skip_ws();
                        vars.push(self.var()?);
                    } else {
                        self.pos = save;
                        return Ok(vars);
                    }
                }
            }
            Some(c) => Err(self.error(&format!("expected a term, found {:?}", c as char))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn var(&mut self) -> Result<usize> {
        if self.peek() != Some(b'x') {
            return Err(self.error("expected a variable 'x<index>'"));
        }
        let start = self.pos;
        self.pos += 1;
        match self.peek() {
            Some(b'1'..=b'9') => {}
            Some(b'0') => {
                return Err(Error::Parse {
                    position: self.pos,
                    message: "variable indices start at 1 and have no leading zeros".into(),
                })
            }
            _ => return Err(self.error("expected a digit after 'x'")),
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap();
        let index: usize = digits.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("variable index x{digits} is too large"),
        })?;
        Ok(index - 1)
    }
}

/// An affine form `(alpha, x) + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub linear: BitVector,
    pub constant: bool,
}

impl AffineForm {
    pub fn zero(n: usize) -> Self {
        Self {
            linear: BitVector::zeros(n),
            constant: false,
        }
    }
}

/// `q(x) = sum_{(i,j) in pairs} x_i x_j + (linear, x) + constant`, pairs with `i < j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
    linear: BitVector,
    constant: bool,
}

/// The four quadratics obtained by splitting off two variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `q1 = p0 + p1 p2`, `q2 = q1 + p2`, `q3 = q1 + p1`, `q4 = q1 + p1 + p2`.
    pub forms: [QuadraticForm; 4],
    /// `kept[t]` is the original index of new variable `t`.
    pub kept: Vec<usize>,
}

impl QuadraticForm {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            pairs: BTreeSet::new(),
            linear: BitVector::zeros(n),
            constant: false,
        }
    }

    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        AnfPolynomial::parse(text, n)?.to_quadratic()
    }

    /// Builds a form from its parts. Pairs toggle, so duplicates cancel;
    /// a pair `(i, i)` folds into the linear part.
    pub fn from_parts<I>(n: usize, pairs: I, linear: BitVector, constant: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if linear.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: linear.len(),
            });
        }
        let mut q = Self {
            n,
            pairs: BTreeSet::new(),
            linear,
            constant,
        };
        for (i, j) in pairs {
            let bad = i.max(j);
            if bad >= n {
                return Err(Error::IndexOutOfRange { index: bad, len: n });
            }
            q.toggle_pair(i, j);
        }
        Ok(q)
    }

    /// `sum_{j<m} x_{2j} x_{2j+1}` over `n >= 2m` variables.
    pub fn inner_product(m: usize, n: usize) -> Result<Self> {
        if n < 2 * m {
            return Err(Error::InvalidArgument(format!(
                "inner product of rank {m} needs at least {} variables, got {n}",
                2 * m
            )));
        }
        Self::from_parts(
            n,
            (0..m).map(|j| (2 * j, 2 * j + 1)),
            BitVector::zeros(n),
            false,
        )
    }

    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "pair ({i},{j}) out of range");
        if i == j {
            self.linear.flip(i);
            return;
        }
        let key = (i.min(j), i.max(j));
        if !self.pairs.remove(&key) {
            self.pairs.insert(key);
        }
    }

    pub fn toggle_linear(&mut self, i: usize) {
        self.linear.flip(i);
    }

    pub fn set_constant(&mut self, c: bool) {
        self.constant = c;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn has_pair(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn linear(&self) -> &BitVector {
        &self.linear
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn is_affine(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sorted indices that occur in some pair.
    pub fn quadratic_support(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        set.into_iter().collect()
    }

    pub fn evaluate(&self, x: &BitVector) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut acc = self.constant ^ self.linear.dot(x);
        for &(i, j) in &self.pairs {
            acc ^= x.get(i) & x.get(j);
        }
        Ok(acc)
    }

    pub fn to_anf(&self) -> AnfPolynomial {
        let mut p = AnfPolynomial::zero(self.n);
        if self.constant {
            p.toggle(Vec::new());
        }
        for i in self.linear.ones() {
            p.toggle(vec![i]);
        }
        for &(i, j) in &self.pairs {
            p.toggle(vec![i, j]);
        }
        p
    }

    /// Adds an affine form.
    pub fn add_affine(&mut self, a: &AffineForm) {
        self.linear.xor_assign(&a.linear);
        self.constant ^= a.constant;
    }

    /// Adds the product of two affine forms; the result stays degree <= 2.
    pub fn add_product(&mut self, a: &AffineForm, b: &AffineForm) {
        for k in a.linear.ones() {
            for l in b.linear.ones() {
                self.toggle_pair(k, l);
            }
        }
        if a.constant {
            self.linear.xor_assign(&b.linear);
        }
        if b.constant {
            self.linear.xor_assign(&a.linear);
        }
        self.constant ^= a.constant & b.constant;
    }

    /// `x -> q(S x)` for an `n x n'` matrix `S`; the result has `n'` variables.
    pub fn substitute(&self, s: &GF2Matrix) -> Result<Self> {
        if s.rows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: s.rows(),
            });
        }
        let np = s.cols();
        let form = |i: usize| AffineForm {
            linear: s.row(i).clone(),
            constant: false,
        };
        let mut out = Self::zero(np);
        out.constant = self.constant;
        for i in self.linear.ones() {
            out.add_affine(&form(i));
        }
        for &(i, j) in &self.pairs {
            out.add_product(&form(i), &form(j));
        }
        Ok(out)
    }

    /// Relabels variable `i` as `positions[i]` in an ambient space of `n` variables.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: positions.len(),
            });
        }
        let distinct: BTreeSet<usize> = positions.iter().copied().collect();
        if distinct.len() != positions.len() {
            return Err(Error::InvalidArgument("embedding positions repeat".into()));
        }
        let mut linear = BitVector::zeros(n);
        for i in self.linear.ones() {
            let p = positions[i];
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, len: n });
            }
            linear.set(p, true);
        }
        Self::from_parts(
            n,
            self.pairs
                .iter()
                .map(|&(i, j)| (positions[i], positions[j])),
            linear,
            self.constant,
        )
    }

    /// Splits `q = p0 + x_i p1 + x_j p2 + x_i x_j` and returns the four
    /// quadratics on the remaining `n - 2` variables (order preserved).
    pub fn decompose(&self, i: usize, j: usize) -> Result<Decomposition> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    len: self.n,
                });
            }
        }
        if i == j || !self.has_pair(i, j) {
            return Err(Error::MissingCrossTerm { i: i + 1, j: j + 1 });
        }
        let kept: Vec<usize> = (0..self.n).filter(|&k| k != i && k != j).collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (t, &k) in kept.iter().enumerate() {
            new_index[k] = t;
        }
        let m = kept.len();
        let mut p0 = Self::zero(m);
        let mut p1 = AffineForm::zero(m);
        let mut p2 = AffineForm::zero(m);
        p0.constant = self.constant;
        p1.constant = self.linear.get(i);
        p2.constant = self.linear.get(j);
        for k in self.linear.ones().filter(|&k| k != i && k != j) {
            p0.linear.flip(new_index[k]);
        }
        for &(a, b) in &self.pairs {
            match ((a == i || a == j), (b == i || b == j)) {
                (true, true) => {}
                (false, false) => p0.toggle_pair(new_index[a], new_index[b]),
                _ => {
                    let (split, other) = if a == i || a == j { (a, b) } else { (b, a) };
                    let target = if split == i { &mut p1 } else { &mut p2 };
                    target.linear.flip(new_index[other]);
                }
            }
        }
        let mut q1 = p0;
        q1.add_product(&p1, &p2);
        let mut q2 = q1.clone();
        q2.add_affine(&p2);
        let mut q3 = q1.clone();
        q3.add_affine(&p1);
        let mut q4 = q3.clone();
        q4.add_affine(&p2);
        Ok(Decomposition {
            forms: [q1, q2, q3, q4],
            kept,
        })
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_anf())
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm(n={}, {})", self.n, self.to_anf())
    }
}

fn sign(bit: bool) -> i32 {
    if bit {
        -1
    } else {
        1
    }
}

/// Checks the four sign identities
/// `1 +- (-1)^p1 +- (-1)^p2 +- (-1)^(p1+p2) = +-2 (-1)^(p1 p2 + ...)`
/// used to collapse the sum over the two split-off variables. Only the last
/// one has the negative right-hand side.
pub fn sign_identity_check(p1: bool, p2: bool) -> bool {
    let (a, b, ab) = (sign(p1), sign(p2), sign(p1 ^ p2));
    let base = p1 & p2;
    1 + a + b - ab == 2 * sign(base)
        && 1 - a + b + ab == 2 * sign(base ^ p2)
        && 1 + a - b + ab == 2 * sign(base ^ p1)
        && 1 - a - b - ab == -2 * sign(base ^ p1 ^ p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(text: &str) -> QuadraticForm {
        QuadraticForm::parse(text, None).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = AnfPolynomial::parse("x1*x2 + x3 + 1", None).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.monomials(), vec![&[][..], &[2][..], &[0, 1][..]]);
        assert!(AnfPolynomial::parse("x1 + x1", None).unwrap().is_zero());
        let p = AnfPolynomial::parse("x2*x1", None).unwrap();
        assert_eq!(p.monomials(), vec![&[0, 1][..]]);
        assert_eq!(
            AnfPolynomial::parse("0", Some(4)).unwrap(),
            AnfPolynomial::zero(4)
        );
        assert_eq!(
            AnfPolynomial::parse(" \tx1 *x2+1 ", None)
                .unwrap()
                .to_string(),
            "1 + x1*x2"
        );
        assert_eq!(
            AnfPolynomial::parse("x1*x1", None).unwrap().to_string(),
            "x1"
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let cases = [
            ("x0", 1),
            ("x1 + x01", 6),
            ("x1 + ", 5),
            ("x1 x2", 3),
            ("y1", 0),
            ("x1 * 1", 5),
            ("0 + x1", 2),
            ("", 0),
        ];
        for (text, pos) in cases {
            match AnfPolynomial::parse(text, None) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
        assert!(matches!(
            AnfPolynomial::parse("x5", Some(3)),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        ));
    }

    #[test]
    fn to_quadratic_examples() {
        let z = AnfPolynomial::zero(3).to_quadratic().unwrap();
        assert!(z.is_affine() && z.linear().is_zero() && !z.constant());

        let f = q("x1*x2 + x2 + 1");
        assert_eq!(f.pairs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(f.linear(), &BitVector::unit(2, 1));
        assert!(f.constant());

        match QuadraticForm::parse("x1*x2*x3", None) {
            Err(Error::DegreeTooHigh {
                degree: 3,
                monomial,
            }) => assert_eq!(monomial, "x1*x2*x3"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn evaluate_examples() {
        let f = q("x1*x2");
        assert!(f.evaluate(&BitVector::from_bits(&[true, true])).unwrap());
        assert!(!f.evaluate(&BitVector::from_bits(&[true, false])).unwrap());
        let g = q("x1*x2 + x2 + 1");
        assert!(!g.evaluate(&BitVector::from_bits(&[false, true])).unwrap());
        assert!(g.evaluate(&BitVector::zeros(3)).is_err());
    }

    #[test]
    fn decompose_examples() {
        let d = q("x1*x2").decompose(0, 1).unwrap();
        for f in &d.forms {
            assert_eq!(f, &QuadraticForm::zero(0));
        }

        let d = q("x1*x2 + x3").decompose(0, 1).unwrap();
        assert_eq!(d.kept, vec![2]);
        for f in &d.forms {
            assert_eq!(f, &QuadraticForm::parse("x1", Some(1)).unwrap());
        }

        let d = q("x1*x2 + x1*x3").decompose(0, 1).unwrap();
        let zero = QuadraticForm::zero(1);
        let x = QuadraticForm::parse("x1", Some(1)).unwrap();
        assert_eq!(d.forms, [zero.clone(), zero, x.clone(), x]);

        assert!(matches!(
            q("x1*x2 + x3").decompose(0, 2),
            Err(Error::MissingCrossTerm { i: 1, j: 3 })
        ));
    }

    #[test]
    fn sign_identities_hold_on_all_four_inputs() {
        for p1 in [false, true] {
            for p2 in [false, true] {
                assert!(sign_identity_check(p1, p2), "({p1},{p2})");
            }
        }
        // the last identity needs the minus sign: at (0,0) its left side is 1 - 1 - 1 - 1
        assert_eq!(1 - 1 - 1 - 1, -2 * sign(false));
    }

    #[test]
    fn substitute_by_identity_is_noop() {
        let f = q("x1*x2 + x2*x3 + x1 + 1");
        assert_eq!(f.substitute(&GF2Matrix::identity(3).unwrap()).unwrap(), f);
    }

    fn arb_poly() -> impl Strategy<Value = AnfPolynomial> {
        (0usize..=6).prop_flat_map(|n| {
            let mono = proptest::collection::btree_set(0..n.max(1), 0..=3.min(n));
            proptest::collection::vec(mono, 0..8).prop_map(move |ms| {
                AnfPolynomial::from_monomials(
                    n,
                    ms.into_iter().map(|s| s.into_iter().filter(|&i| i < n)),
                )
                .unwrap()
            })
        })
    }

    fn arb_quadratic(max_n: usize) -> impl Strategy<Value = QuadraticForm> {
        (0..=max_n).prop_flat_map(|n| {
            (
                proptest::collection::vec((0..n.max(1), 0..n.max(1)), 0..12),
                proptest::collection::vec(any::<bool>(), n),
                any::<bool>(),
            )
                .prop_map(move |(pairs, lin, c)| {
                    let pairs = pairs.into_iter().filter(|&(i, j)| i < n && j < n);
                    QuadraticForm::from_parts(n, pairs, BitVector::from_bits(&lin), c).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(p in arb_poly()) {
            let text = p.to_string();
            prop_assert_eq!(AnfPolynomial::parse(&text, Some(p.n())).unwrap(), p);
        }

        #[test]
        fn quadratic_agrees_with_anf(f in arb_quadratic(10)) {
            let p = f.to_anf();
            prop_assert_eq!(p.to_quadratic().unwrap(), f.clone());
            for x in 0u64..(1 << f.n()) {
                let x = BitVector::from_u64(f.n(), x);
                prop_assert_eq!(f.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
            }
            prop_assert!(f.quadratic_support().len() <= 2 * f.pairs().len());
        }

        #[test]
        fn substitute_matches_composition(f in arb_quadratic(6), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let n = f.n();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s = GF2Matrix::from_rows(
                n,
                (0..n).map(|_| BitVector::from_u64(n, rng.gen())).collect(),
            )
            .unwrap();
            let g = f.substitute(&s).unwrap();
            for x in 0u64..(1 << n) {
                let x = BitVector::from_u64(n, x);
                prop_assert_eq!(g.evaluate(&x).unwrap(), f.evaluate(&s.mul_vec(&x).unwrap()).unwrap());
            }
        }
    }
}
