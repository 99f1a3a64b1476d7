//! Constructive Dickson reduction of quadratic forms over GF(2).
//!
//! For `q(x) = x^T A x + (l, x) + c` we build an invertible `T` with
//!
//! ```text
//! q(T^-1 y) = sum_{j<m} y_{2j} y_{2j+1} + (L, y) + b
//! ```
//!
//! where `2m = rank(A + A^T)`. Only the quadratic support (the `s`
//! variables that occur in some product) is touched: `T` acts as a dense
//! `s x s` block there and as a relabelling everywhere else, so `n` can be
//! far larger than anything a dense `n x n` matrix could hold.
//!
//! y-coordinates are ordered: hyperbolic pairs `0..2m`, then the radical of
//! the support block `2m..s`, then the untouched variables `s..n` in
//! increasing x-index order.

use crate::anf::QuadraticForm;
use crate::error::{Error, Result};
use crate::gf2::{BitVector, GF2Matrix, MAX_DENSE_COLS};

/// Certificate of a Dickson reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicksonForm {
    n: usize,
    m: usize,
    support: Vec<usize>,
    outside: Vec<usize>,
    /// `y_local = t_local * x_local` on the support block.
    t_local: GF2Matrix,
    t_inv_local: GF2Matrix,
    /// Columns of `t_inv_local`: the symplectic basis, in y order.
    basis_columns: Vec<BitVector>,
    l: BitVector,
    b: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DicksonKind {
    /// Affinely equivalent to `sum z_{2j} z_{2j+1} + d`.
    PureQuadratic { d: bool },
    /// A linear term survives outside the symplectic block.
    QuadraticPlusLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DicksonClass {
    pub kind: DicksonKind,
    pub m: usize,
}

struct SupportBlock {
    support: Vec<usize>,
    /// Symmetric `B = A + A^T` on the support, local indices.
    gram: Vec<BitVector>,
    /// Strictly upper part of `A` on the support, local indices.
    upper: Vec<BitVector>,
}

fn support_block(q: &QuadraticForm) -> Result<SupportBlock> {
    let support = q.quadratic_support();
    let s = support.len();
    if s > MAX_DENSE_COLS {
        return Err(Error::TooWide {
            cols: s,
            limit: MAX_DENSE_COLS,
        });
    }
    let mut gram = vec![BitVector::zeros(s); s];
    let mut upper = vec![BitVector::zeros(s); s];
    for (i, j) in q.pairs() {
        let a = support.binary_search(&i).unwrap();
        let b = support.binary_search(&j).unwrap();
        gram[a].flip(b);
        gram[b].flip(a);
        upper[a].flip(b);
    }
    Ok(SupportBlock {
        support,
        gram,
        upper,
    })
}

/// Half the rank of `A + A^T`, computed on the quadratic support.
pub fn symplectic_rank(q: &QuadraticForm) -> Result<usize> {
    let block = support_block(q)?;
    let s = block.support.len();
    let rank = GF2Matrix::from_rows(s, block.gram)?.rank();
    debug_assert!(rank % 2 == 0, "alternating matrix with odd rank {rank}");
    Ok(rank / 2)
}

/// Reduces `q` to Dickson normal form.
pub fn dickson_reduce(q: &QuadraticForm) -> Result<DicksonForm> {
    let n = q.n();
    let SupportBlock {
        support,
        gram,
        upper,
    } = support_block(q)?;
    let s = support.len();

    // Symplectic Gram-Schmidt. `vecs[k]` is a working vector, `images[k]`
    // is `B * vecs[k]`, so `B(v_k, v_r) = images[k] . vecs[r]`.
    let mut vecs: Vec<BitVector> = (0..s).map(|k| BitVector::unit(s, k)).collect();
    let mut images = gram;
    let mut remaining: Vec<usize> = (0..s).collect();
    let mut hyperbolic: Vec<usize> = Vec::new();
    // A remaining vector orthogonal to all extracted pairs has a partner
    // among the remaining ones iff its image is nonzero.
    while let Some(pu) = remaining.iter().position(|&k| !images[k].is_zero()) {
        let u = remaining[pu];
        let pw = remaining
            .iter()
            .position(|&k| images[u].dot(&vecs[k]))
            .expect("nonzero image must pair with some remaining vector");
        let w = remaining[pw];
        remaining.retain(|&k| k != u && k != w);
        let (zu, zw, bu, bw) = (
            vecs[u].clone(),
            vecs[w].clone(),
            images[u].clone(),
            images[w].clone(),
        );
        for &r in &remaining {
            let with_w = images[r].dot(&zw);
            let with_u = images[r].dot(&zu);
            if with_w {
                vecs[r].xor_assign(&zu);
                images[r].xor_assign(&bu);
            }
            if with_u {
                vecs[r].xor_assign(&zw);
                images[r].xor_assign(&bw);
            }
        }
        hyperbolic.push(u);
        hyperbolic.push(w);
    }
    let m = hyperbolic.len() / 2;
    let basis_columns: Vec<BitVector> = hyperbolic
        .iter()
        .chain(remaining.iter())
        .map(|&k| vecs[k].clone())
        .collect();
    let t_inv_local = GF2Matrix::from_rows(s, basis_columns.clone())?.transpose();
    let t_local = t_inv_local.invert()?;

    let mut l = BitVector::zeros(n);
    let local_linear = q.linear().gather(&support);
    for (a, col) in basis_columns.iter().enumerate() {
        // q(P_a) - q(0) = P_a^T A P_a + (l, P_a)
        let mut quad = false;
        for i in col.ones() {
            quad ^= upper[i].dot(col);
        }
        if quad ^ local_linear.dot(col) {
            l.set(a, true);
        }
    }
    let mut in_support = vec![false; n];
    for &i in &support {
        in_support[i] = true;
    }
    let outside: Vec<usize> = (0..n).filter(|&i| !in_support[i]).collect();
    for (t, &i) in outside.iter().enumerate() {
        if q.linear().get(i) {
            l.set(s + t, true);
        }
    }
    Ok(DicksonForm {
        n,
        m,
        support,
        outside,
        t_local,
        t_inv_local,
        basis_columns,
        l,
        b: q.constant(),
    })
}

impl DicksonForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Symplectic rank.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted x-indices of the quadratic support.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// x-index of y-coordinate `s + t` for `t` in `0..n-s`.
    pub fn outside(&self) -> &[usize] {
        &self.outside
    }

    /// Residual linear part in y-coordinates.
    pub fn linear(&self) -> &BitVector {
        &self.l
    }

    pub fn constant(&self) -> bool {
        self.b
    }

    pub fn t_local(&self) -> &GF2Matrix {
        &self.t_local
    }

    pub fn t_inv_local(&self) -> &GF2Matrix {
        &self.t_inv_local
    }

    /// Column `a` of `T^-1` restricted to the support, for `a < s`.
    pub fn basis_column(&self, a: usize) -> &BitVector {
        &self.basis_columns[a]
    }

    fn check_len(&self, v: &BitVector) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `y = T x`.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        self.check_len(x)?;
        let s = self.support.len();
        let local = self.t_local.mul_vec(&x.gather(&self.support))?;
        let mut y = BitVector::zeros(self.n);
        for a in local.ones() {
            y.set(a, true);
        }
        for (t, &i) in self.outside.iter().enumerate() {
            if x.get(i) {
                y.set(s + t, true);
            }
        }
        Ok(y)
    }

    /// `x = T^-1 y`.
    pub fn apply_inverse(&self, y: &BitVector) -> Result<BitVector> {
        self.check_len(y)?;
        let s = self.support.len();
        let head: Vec<usize> = (0..s).collect();
        let local = self.t_inv_local.mul_vec(&y.gather(&head))?;
        let mut x = BitVector::zeros(self.n);
        for a in local.ones() {
            x.set(self.support[a], true);
        }
        for (t, &i) in self.outside.iter().enumerate() {
            if y.get(s + t) {
                x.set(i, true);
            }
        }
        Ok(x)
    }

    /// `T^{-T} S`, the character `S` expressed in y-coordinates.
    pub fn dual_apply(&self, character: &BitVector) -> Result<BitVector> {
        self.check_len(character)?;
        let s = self.support.len();
        let local = character.gather(&self.support);
        let mut v = BitVector::zeros(self.n);
        for (a, col) in self.basis_columns.iter().enumerate() {
            if local.dot(col) {
                v.set(a, true);
            }
        }
        for (t, &i) in self.outside.iter().enumerate() {
            if character.get(i) {
                v.set(s + t, true);
            }
        }
        Ok(v)
    }

    /// Row `a` of `T` as an x-space vector.
    pub fn t_row(&self, a: usize) -> BitVector {
        let s = self.support.len();
        if a < s {
            let row = self.t_local.row(a);
            BitVector::from_indices(self.n, row.ones().map(|c| self.support[c]))
        } else {
            BitVector::unit(self.n, self.outside[a - s])
        }
    }

    /// The normal form `sum_{j<m} y_{2j} y_{2j+1} + (L, y) + b`.
    pub fn evaluate_normal(&self, y: &BitVector) -> Result<bool> {
        self.check_len(y)?;
        let mut acc = self.b ^ self.l.dot(y);
        for j in 0..self.m {
            acc ^= y.get(2 * j) & y.get(2 * j + 1);
        }
        Ok(acc)
    }

    /// Checks `q(x) = normal(T x)` at one point.
    pub fn certifies_at(&self, q: &QuadraticForm, x: &BitVector) -> Result<bool> {
        Ok(q.evaluate(x)? == self.evaluate_normal(&self.apply(x)?)?)
    }

    /// Dense `n x n` matrix of `T`.
    pub fn t_matrix(&self) -> Result<GF2Matrix> {
        GF2Matrix::from_rows(self.n, (0..self.n).map(|a| self.t_row(a)).collect())
    }

    /// Dense `n x n` matrix of `T^-1`.
    pub fn t_inv_matrix(&self) -> Result<GF2Matrix> {
        let cols = (0..self.n)
            .map(|a| self.apply_inverse(&BitVector::unit(self.n, a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GF2Matrix::from_rows(self.n, cols)?.transpose())
    }

    /// Affine normalisation: absorbs the in-block part of `L` through
    /// `y_{2j} -> y_{2j} + L_{2j+1}`, `y_{2j+1} -> y_{2j+1} + L_{2j}`.
    pub fn classify(&self) -> DicksonClass {
        let outside_block = self.l.ones().any(|a| a >= 2 * self.m);
        let kind = if outside_block {
            DicksonKind::QuadraticPlusLinear
        } else {
            let shift = (0..self.m)
                .filter(|&j| self.l.get(2 * j) && self.l.get(2 * j + 1))
                .count()
                % 2
                == 1;
            DicksonKind::PureQuadratic { d: self.b ^ shift }
        };
        DicksonClass { kind, m: self.m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::spectrum_bruteforce;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(text: &str) -> QuadraticForm {
        QuadraticForm::parse(text, None).unwrap()
    }

    fn exhaustive_certificate(f: &QuadraticForm, d: &DicksonForm) {
        let n = f.n();
        for x in 0u64..(1 << n) {
            let x = BitVector::from_u64(n, x);
            assert!(d.certifies_at(f, &x).unwrap(), "{f:?} fails at {x:?}");
            assert_eq!(d.apply_inverse(&d.apply(&x).unwrap()).unwrap(), x);
        }
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
    fn symplectic_rank_examples() {
        assert_eq!(symplectic_rank(&q("x1 + x3 + 1")).unwrap(), 0);
        assert_eq!(symplectic_rank(&q("x1*x2 + x2*x3")).unwrap(), 1);
        for m in 0..6 {
            let f = QuadraticForm::inner_product(m, 2 * m + 1).unwrap();
            assert_eq!(symplectic_rank(&f).unwrap(), m);
        }
    }

    #[test]
    fn reduce_examples() {
        let f = q("x1*x2");
        let d = dickson_reduce(&f).unwrap();
        assert_eq!(d.m(), 1);
        assert!(d.t_matrix().unwrap().is_identity());
        assert!(d.linear().is_zero());
        assert!(!d.constant());

        let f = q("x1*x2 + x1*x3");
        let d = dickson_reduce(&f).unwrap();
        assert_eq!(d.m(), 1);
        assert!(d.linear().is_zero());
        assert!(!d.constant());
        exhaustive_certificate(&f, &d);
        // the deterministic tie-break reproduces y1 = x1, y2 = x2 + x3, y3 = x3
        let expected = GF2Matrix::from_table(3, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]).unwrap();
        assert_eq!(d.t_matrix().unwrap(), expected);

        let f = q("x1*x2 + x2 + 1");
        let d = dickson_reduce(&f).unwrap();
        assert_eq!(d.m(), 1);
        assert_eq!(d.linear(), &BitVector::unit(2, 1));
        assert!(d.constant());
        exhaustive_certificate(&f, &d);
    }

    #[test]
    fn dense_matrices_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(0..=10);
            let f = random_quadratic(&mut rng, n);
            let d = dickson_reduce(&f).unwrap();
            let prod = d
                .t_matrix()
                .unwrap()
                .mul(&d.t_inv_matrix().unwrap())
                .unwrap();
            assert!(prod.is_identity());
            assert!(2 * d.m() <= n);
        }
    }

    #[test]
    fn classify_examples() {
        let c = dickson_reduce(&q("x1*x2")).unwrap().classify();
        assert_eq!(
            c,
            DicksonClass {
                kind: DicksonKind::PureQuadratic { d: false },
                m: 1
            }
        );

        let f = q("x1*x2 + x1 + x2");
        let c = dickson_reduce(&f).unwrap().classify();
        assert_eq!(c.kind, DicksonKind::PureQuadratic { d: true });
        // same magnitudes as x1*x2 + 1; signs differ by the character shift
        let g = q("x1*x2 + 1");
        let sf = spectrum_bruteforce(&f).unwrap();
        let sg = spectrum_bruteforce(&g).unwrap();
        let abs = |v: &Vec<crate::dyadic::Dyadic>| v.iter().map(|x| x.abs()).collect::<Vec<_>>();
        assert_eq!(abs(&sf), abs(&sg));
        // (x1+1)(x2+1) + 1 = f, so f^_f(0) = f^_{x1x2+1}(0) after the shift
        assert_eq!(sf[0], sg[0]);

        let c = dickson_reduce(&q("x1*x2 + x3")).unwrap().classify();
        assert_eq!(c.kind, DicksonKind::QuadraticPlusLinear);
    }

    #[test]
    fn certificate_holds_for_500_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(0..=12);
            let f = random_quadratic(&mut rng, n);
            let d = dickson_reduce(&f).unwrap();
            assert_eq!(d.m(), symplectic_rank(&f).unwrap());
            exhaustive_certificate(&f, &d);
        }
    }

    #[test]
    fn pure_quadratic_class_has_constant_sign_pattern() {
        // PureQuadratic(d): the support contains 0 and f^(0) = (-1)^d 2^-m
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let f = random_quadratic(&mut rng, n);
            let d = dickson_reduce(&f).unwrap();
            let spec = spectrum_bruteforce(&f).unwrap();
            let nonzero = spec.iter().filter(|v| !v.is_zero()).count();
            assert_eq!(nonzero, 1 << (2 * d.m()));
            match d.classify().kind {
                DicksonKind::PureQuadratic { d: bit } => {
                    let expected =
                        crate::dyadic::Dyadic::new(if bit { -1 } else { 1 }, d.m() as u64);
                    assert_eq!(spec[0], expected);
                }
                DicksonKind::QuadraticPlusLinear => assert!(spec[0].is_zero()),
            }
        }
    }

    #[test]
    fn large_sparse_form_stays_sparse() {
        let n = 100_000;
        let mut f = QuadraticForm::zero(n);
        for j in 0..10 {
            f.toggle_pair(5_000 * j + 7, 5_000 * j + 2_000);
        }
        f.toggle_linear(99_999);
        let d = dickson_reduce(&f).unwrap();
        assert_eq!(d.m(), 10);
        assert_eq!(d.support().len(), 20);
        let mut x = BitVector::zeros(n);
        for i in [7, 2_000, 5_007, 99_999, 42] {
            x.set(i, true);
        }
        assert!(d.certifies_at(&f, &x).unwrap());
        assert!(matches!(d.t_matrix(), Err(Error::TooWide { .. })));
    }

    proptest! {
        #[test]
        fn rank_is_invariant_under_substitution(seed in any::<u64>(), n in 1usize..=9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_quadratic(&mut rng, n);
            let s = loop {
                let cand = GF2Matrix::from_rows(
                    n,
                    (0..n).map(|_| BitVector::from_u64(n, rng.gen())).collect(),
                ).unwrap();
                if cand.rank() == n { break cand; }
            };
            let g = f.substitute(&s).unwrap();
            prop_assert_eq!(symplectic_rank(&g).unwrap(), symplectic_rank(&f).unwrap());
        }
    }
}
