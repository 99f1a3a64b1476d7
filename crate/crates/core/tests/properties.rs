use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadgrowth::dickson::{dickson_reduce, symplectic_rank};
use quadgrowth::dyadic::Dyadic;
use quadgrowth::gf2::BitVector;
use quadgrowth::harness::{decomposition_identity, oracle_agrees, random_anf, random_nonaffine};
use quadgrowth::oracle::level_weights_bruteforce;
use quadgrowth::spectrum::{support, weight_histogram};
use quadgrowth::walk::WalkOptions;
use quadgrowth::weightcount::{binomial, weight_distribution, AffineSubspace};
use quadgrowth::QuadraticForm;

fn opts() -> WalkOptions {
    WalkOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structure_spectrum_equals_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=10);
        let p = random_anf(&mut rng, n);
        prop_assert_eq!(oracle_agrees(&p).unwrap(), None);
    }

    #[test]
    fn total_weight_is_two_to_the_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=10);
        let q = random_anf(&mut rng, n).to_quadratic().unwrap();
        let m = symplectic_rank(&q).unwrap();
        let total: Dyadic = level_weights_bruteforce(&q).unwrap().into_iter().sum();
        prop_assert_eq!(total, Dyadic::new(1i64 << m, 0));
    }

    #[test]
    fn split_relations_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=9);
        let q = random_nonaffine(&mut rng, n);
        for (i, j) in q.pairs().collect::<Vec<_>>() {
            prop_assert_eq!(decomposition_identity(&q, i, j).unwrap(), None);
        }
    }

    #[test]
    fn embedding_does_not_change_the_histogram(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=10);
        let q = random_anf(&mut rng, n).to_quadratic().unwrap();
        let big = rng.gen_range(n..=300);
        let mut positions = sample(&mut rng, big, n).into_vec();
        positions.sort_unstable();
        let e = q.embed(big, &positions).unwrap();
        let h = weight_histogram(&dickson_reduce(&q).unwrap(), &opts()).unwrap();
        let g = weight_histogram(&dickson_reduce(&e).unwrap(), &opts()).unwrap();
        prop_assert_eq!(h, g);
    }

    #[test]
    fn support_coset_counts_agree_with_subspace_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=40);
        let mut q = QuadraticForm::zero(n);
        for _ in 0..rng.gen_range(0..=12) {
            let (i, j) = (rng.gen_range(0..n.max(1)), rng.gen_range(0..n.max(1)));
            if i != j && i < n && j < n {
                q.toggle_pair(i.min(j), i.max(j));
            }
        }
        for i in 0..n {
            if rng.gen_bool(0.2) {
                q.toggle_linear(i);
            }
        }
        let d = dickson_reduce(&q).unwrap();
        let coset = support(&d).unwrap();
        let w = AffineSubspace::new(coset.offset().clone(), coset.basis().to_vec()).unwrap();
        let dist = weight_distribution(&w, &opts()).unwrap();
        let h = weight_histogram(&d, &opts()).unwrap();
        for (k, c) in dist.iter().enumerate() {
            prop_assert_eq!(c, &h.count(k));
        }
    }
}

#[test]
fn inner_product_histogram_is_a_binomial_row() {
    for m in 0..=8 {
        let q = QuadraticForm::inner_product(m, 2 * m).unwrap();
        let h = weight_histogram(&dickson_reduce(&q).unwrap(), &opts()).unwrap();
        let full = AffineSubspace::new(
            BitVector::zeros(2 * m),
            (0..2 * m).map(|i| BitVector::unit(2 * m, i)).collect(),
        )
        .unwrap();
        let dist = weight_distribution(&full, &opts()).unwrap();
        for k in 0..=2 * m {
            assert_eq!(h.count(k), binomial(2 * m, k));
            assert_eq!(dist[k], h.count(k));
        }
        assert_eq!(h.total(), BigUint::from(1u8) << (2 * m));
    }
}

#[test]
fn parallel_and_sequential_histograms_agree() {
    let q = QuadraticForm::inner_product(9, 40).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = quadgrowth::bounds::random_invertible(&mut rng, 40).unwrap();
    let q = q.substitute(&s).unwrap();
    let d = dickson_reduce(&q).unwrap();
    let one = weight_histogram(&d, &opts()).unwrap();
    let many = weight_histogram(
        &d,
        &WalkOptions {
            workers: 4,
            ..opts()
        },
    )
    .unwrap();
    assert_eq!(one, many);
}
