//! Seeded verification suites tying the structure path to the oracle and the
//! analytic checks. Used by the `verify` command and the acceptance tests.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anf::{AnfPolynomial, QuadraticForm};
use crate::bounds::{self, BoundReport};
use crate::dickson::dickson_reduce;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::oracle::spectrum_bruteforce;
use crate::spectrum::{fourier_coefficient, weight_histogram, WeightHistogram};
use crate::walk::WalkOptions;
use crate::weightcount::{extremal_parity_subspace, random_normalized, weight_bound_holds};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Oracle,
    Decomposition,
    Envelope,
    Recurrence,
    Lemma,
    Alpha,
    Binomial,
    Stirling,
    Sharpness,
    Performance,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Oracle,
        Suite::Decomposition,
        Suite::Envelope,
        Suite::Recurrence,
        Suite::Lemma,
        Suite::Alpha,
        Suite::Binomial,
        Suite::Stirling,
        Suite::Sharpness,
        Suite::Performance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Decomposition => "decomposition",
            Suite::Envelope => "envelope",
            Suite::Recurrence => "recurrence",
            Suite::Lemma => "lemma",
            Suite::Alpha => "alpha",
            Suite::Binomial => "binomial",
            Suite::Stirling => "stirling",
            Suite::Sharpness => "sharpness",
            Suite::Performance => "performance",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown suite `{s}`; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Sizes and limits of every suite. The defaults are the acceptance settings.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub walk: WalkOptions,
    pub oracle_count: usize,
    pub oracle_n_max: usize,
    pub decomposition_count: usize,
    pub decomposition_n_max: usize,
    pub envelope_exhaustive_n: usize,
    pub class_n_max: usize,
    pub class_substitutions: usize,
    pub recurrence_n_max: usize,
    pub lemma_count: usize,
    pub lemma_n_max: usize,
    pub lemma_h_max: usize,
    pub extremal_n_max: usize,
    pub alpha_step: f64,
    pub binomial_m_max: usize,
    pub stirling_direct_max: usize,
    pub stirling_log_max: usize,
    pub sharpness_m: (usize, usize),
    pub performance_n: usize,
    pub performance_m: usize,
    pub performance_embedded_n: usize,
    pub performance_budget: Duration,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            walk: WalkOptions::default(),
            oracle_count: 1000,
            oracle_n_max: 12,
            decomposition_count: 300,
            decomposition_n_max: 10,
            envelope_exhaustive_n: 5,
            class_n_max: 12,
            class_substitutions: 20,
            recurrence_n_max: 6,
            lemma_count: 2000,
            lemma_n_max: 20,
            lemma_h_max: 12,
            extremal_n_max: 16,
            alpha_step: 1e-4,
            binomial_m_max: 200,
            stirling_direct_max: 170,
            stirling_log_max: 10_000,
            sharpness_m: (5, 14),
            performance_n: 100_000,
            performance_m: 10,
            performance_embedded_n: 32,
            performance_budget: Duration::from_secs(2),
        }
    }
}

/// One named pass/fail line inside a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_bound(r: &BoundReport) -> Self {
        Self {
            name: r.name.clone(),
            passed: r.passed,
            detail: format!(
                "{}; {} points; max violation {:.3e} at {}",
                r.parameters, r.checked, r.max_violation, r.witness
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A random polynomial of degree at most 2 in ANF, with a random density.
pub fn random_anf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AnfPolynomial {
    let density: f64 = rng.gen();
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    if rng.gen() {
        monomials.push(vec![]);
    }
    for i in 0..n {
        if rng.gen() {
            monomials.push(vec![i]);
        }
        for j in i + 1..n {
            if rng.gen_bool(density) {
                monomials.push(vec![i, j]);
            }
        }
    }
    AnfPolynomial::from_monomials(n, monomials).expect("indices are in range")
}

/// A random quadratic form with at least one cross term.
pub fn random_nonaffine<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuadraticForm {
    assert!(n >= 2, "a cross term needs two variables");
    loop {
        let q = random_anf(rng, n).to_quadratic().expect("degree at most 2");
        if !q.is_affine() {
            return q;
        }
    }
}

/// Structure-path coefficients equal the oracle at every character.
pub fn oracle_agrees(p: &AnfPolynomial) -> Result<Option<BitVector>> {
    let q = p.to_quadratic()?;
    let d = dickson_reduce(&q)?;
    let oracle = spectrum_bruteforce(p)?;
    for (s, expect) in oracle.iter().enumerate() {
        let u = BitVector::from_u64(p.n(), s as u64);
        if fourier_coefficient(&d, &u)?.value() != *expect {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// The four relations `f_q(A + T) = +-1/2 f_{q_T}(A)` between the spectrum
/// of `q` and those of its split at `(i, j)`, all against the oracle.
/// Returns the first failing character, if any.
pub fn decomposition_identity(q: &QuadraticForm, i: usize, j: usize) -> Result<Option<BitVector>> {
    let n = q.n();
    let dec = q.decompose(i, j)?;
    let full = spectrum_bruteforce(q)?;
    let parts = dec
        .forms
        .iter()
        .map(spectrum_bruteforce)
        .collect::<Result<Vec<_>>>()?;
    let extras = [(false, false), (true, false), (false, true), (true, true)];
    for a in 0usize..(1 << (n - 2)) {
        let mut base = 0usize;
        for (t, &orig) in dec.kept.iter().enumerate() {
            if a >> t & 1 == 1 {
                base |= 1 << orig;
            }
        }
        for (idx, (&(with_i, with_j), part)) in extras.iter().zip(&parts).enumerate() {
            let s = base | (with_i as usize) << i | (with_j as usize) << j;
            let half = part[a].halve(1);
            let expect = if idx == 3 {
                Dyadic::zero().sub(&half)
            } else {
                half
            };
            if full[s] != expect {
                return Ok(Some(BitVector::from_u64(n, s as u64)));
            }
        }
    }
    Ok(None)
}

fn timed<F: FnOnce() -> Result<Vec<Check>>>(suite: Suite, seed: u64, f: F) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = f()?;
    Ok(SuiteReport {
        suite,
        seed,
        checks,
        elapsed: start.elapsed(),
    })
}

fn oracle_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failure = None;
    for t in 0..cfg.oracle_count {
        let n = rng.gen_range(0..=cfg.oracle_n_max);
        let p = random_anf(&mut rng, n);
        if let Some(u) = oracle_agrees(&p)? {
            failure = Some(format!("sample {t}: {p} at S={}", u.to_set_string()));
            break;
        }
    }
    Ok(vec![Check {
        name: "signed-spectrum".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| {
            format!(
                "{} polynomials, n <= {}, all characters exact",
                cfg.oracle_count, cfg.oracle_n_max
            )
        }),
    }])
}

fn decomposition_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xdec0);
    let mut failure = None;
    for t in 0..cfg.decomposition_count {
        let n = rng.gen_range(2..=cfg.decomposition_n_max.max(2));
        let q = random_nonaffine(&mut rng, n);
        let pairs: Vec<_> = q.pairs().collect();
        let (i, j) = pairs[rng.gen_range(0..pairs.len())];
        if let Some(u) = decomposition_identity(&q, i, j)? {
            failure = Some(format!(
                "sample {t}: {q} split at x{},x{}, S={}",
                i + 1,
                j + 1,
                u.to_set_string()
            ));
            break;
        }
    }
    Ok(vec![Check {
        name: "four-relations".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| {
            format!(
                "{} non-affine quadratics, n <= {}",
                cfg.decomposition_count, cfg.decomposition_n_max
            )
        }),
    }])
}

fn envelope_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let tables = bounds::exhaustive_tables(cfg.envelope_exhaustive_n)?;
    let exhaustive = bounds::envelope_report("envelope-exhaustive", &tables);
    let classes = bounds::class_search(
        cfg.class_n_max,
        cfg.class_substitutions,
        cfg.seed,
        &cfg.walk,
    )?;
    Ok(vec![
        Check::from_bound(&exhaustive),
        Check::from_bound(&classes),
    ])
}

fn recurrence_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    Ok(bounds::recurrence_check(cfg.recurrence_n_max)?
        .iter()
        .map(Check::from_bound)
        .collect())
}

fn lemma_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1e33a);
    let mut violating = 0usize;
    let mut first = None;
    for t in 0..cfg.lemma_count {
        let n = rng.gen_range(1..=cfg.lemma_n_max);
        let h = rng.gen_range(0..=n.min(cfg.lemma_h_max));
        let w = random_normalized(&mut rng, n, h)?;
        let r = weight_bound_holds(&w, &cfg.walk)?;
        if let Some(v) = r.violations.first() {
            violating += 1;
            if first.is_none() {
                first = Some(format!(
                    "sample {t}: n={n}, h={h}, offset={}, k={}: count {} > C(h+1,k) = {}",
                    w.offset().to_set_string(),
                    v.k,
                    v.count,
                    v.bound
                ));
            }
        }
    }
    let random = Check {
        name: "random-normalized".into(),
        passed: violating == 0,
        detail: match first {
            None => format!(
                "{} subspaces, n <= {}, h <= {}",
                cfg.lemma_count, cfg.lemma_n_max, cfg.lemma_h_max
            ),
            Some(w) => format!(
                "{violating} of {} subspaces exceed the bound; first {w}",
                cfg.lemma_count
            ),
        },
    };
    let mut missed = None;
    'outer: for n in 1..=cfg.extremal_n_max {
        for k in 0..=n {
            let r = weight_bound_holds(&extremal_parity_subspace(n, k)?, &cfg.walk)?;
            if !r.attains_equality_at(k) || !r.holds() {
                missed = Some(format!("n={n}, k={k}"));
                break 'outer;
            }
        }
    }
    let extremal = Check {
        name: "parity-equality".into(),
        passed: missed.is_none(),
        detail: missed.unwrap_or_else(|| format!("all n <= {}, all k", cfg.extremal_n_max)),
    };
    Ok(vec![random, extremal])
}

fn sharpness_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let (lo, hi) = cfg.sharpness_m;
    let (report, _) = bounds::sharpness_check(lo..=hi, &cfg.walk)?;
    Ok(vec![Check::from_bound(&report)])
}

/// The large sparse form and its small embedded twin used by the
/// performance suite: a rank-`m` form on `2m` scattered variables plus
/// linear terms on `forced` variables outside its support.
pub fn performance_pair(
    cfg: &VerifyConfig,
    forced: usize,
) -> Result<(QuadraticForm, QuadraticForm)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e3f);
    let s = 2 * cfg.performance_m;
    let core = QuadraticForm::inner_product(cfg.performance_m, s)?
        .substitute(&bounds::random_invertible(&mut rng, s)?)?;
    let mut core = core;
    for i in 0..s {
        if rng.gen() {
            core.toggle_linear(i);
        }
    }
    let n = cfg.performance_n;
    if n < s + forced || cfg.performance_embedded_n < s {
        return Err(Error::InvalidArgument("performance sizes too small".into()));
    }
    let chosen = sample(&mut rng, n, s + forced).into_vec();
    let mut big = core.embed(n, &chosen[..s])?;
    for &i in &chosen[s..] {
        big.toggle_linear(i);
    }
    let small_positions: Vec<usize> = (0..s).collect();
    let small = core.embed(cfg.performance_embedded_n, &small_positions)?;
    Ok((big, small))
}

fn performance_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let forced = 7;
    let (big, small) = performance_pair(cfg, forced)?;
    let single = WalkOptions {
        workers: 1,
        ..cfg.walk
    };
    let start = Instant::now();
    let d = dickson_reduce(&big)?;
    let h = weight_histogram(&d, &single)?;
    let elapsed = start.elapsed();
    let twin = weight_histogram(&dickson_reduce(&small)?, &single)?.shifted(forced as isize);
    Ok(vec![
        Check {
            name: "large-sparse-time".into(),
            passed: elapsed <= cfg.performance_budget && d.m() == cfg.performance_m,
            detail: format!(
                "n={}, s={}, m={}: {:.3} s (budget {:.1} s)",
                cfg.performance_n,
                d.support().len(),
                d.m(),
                elapsed.as_secs_f64(),
                cfg.performance_budget.as_secs_f64()
            ),
        },
        Check {
            name: "embedded-twin".into(),
            passed: h == twin,
            detail: format!(
                "histogram equals the n={} embedding shifted by {forced}",
                cfg.performance_embedded_n
            ),
        },
    ])
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let seed = cfg.seed;
    timed(suite, seed, || match suite {
        Suite::Oracle => oracle_suite(cfg),
        Suite::Decomposition => decomposition_suite(cfg),
        Suite::Envelope => envelope_suite(cfg),
        Suite::Recurrence => recurrence_suite(cfg),
        Suite::Lemma => lemma_suite(cfg),
        Suite::Alpha => Ok(bounds::alpha_grid(cfg.alpha_step)?
            .iter()
            .map(Check::from_bound)
            .collect()),
        Suite::Binomial => Ok(vec![Check::from_bound(&bounds::binomial_grid(
            cfg.binomial_m_max,
        ))]),
        Suite::Stirling => Ok(
            bounds::stirling_grid(cfg.stirling_direct_max, cfg.stirling_log_max)
                .iter()
                .map(Check::from_bound)
                .collect(),
        ),
        Suite::Sharpness => sharpness_suite(cfg),
        Suite::Performance => performance_suite(cfg),
    })
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

/// Full level histogram of the inner-product form of rank `m` on `2m`
/// variables; `m = 0` is the constant function.
pub fn inner_product_histogram(m: usize, options: &WalkOptions) -> Result<WeightHistogram> {
    let q = QuadraticForm::inner_product(m, 2 * m)?;
    weight_histogram(&dickson_reduce(&q)?, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            oracle_count: 60,
            oracle_n_max: 8,
            decomposition_count: 40,
            decomposition_n_max: 8,
            envelope_exhaustive_n: 4,
            class_n_max: 6,
            class_substitutions: 2,
            recurrence_n_max: 5,
            lemma_count: 100,
            lemma_n_max: 10,
            lemma_h_max: 6,
            extremal_n_max: 8,
            alpha_step: 1e-2,
            binomial_m_max: 20,
            stirling_log_max: 500,
            sharpness_m: (5, 8),
            performance_n: 2000,
            performance_budget: Duration::from_secs(30),
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass_except_the_lemma() {
        let cfg = small();
        for s in Suite::ALL {
            let r = run_suite(s, &cfg).unwrap();
            if s == Suite::Lemma {
                let random = &r.checks[0];
                assert!(!random.passed, "expected counterexamples: {random:?}");
                assert!(r.checks[1].passed);
            } else {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn decomposition_identity_on_examples() {
        let q = QuadraticForm::parse("x1*x2 + x1*x3", None).unwrap();
        assert_eq!(decomposition_identity(&q, 0, 1).unwrap(), None);
        let q = QuadraticForm::parse("x1*x2 + x2*x3 + x3*x4 + x1 + x4 + 1", None).unwrap();
        assert_eq!(decomposition_identity(&q, 1, 2).unwrap(), None);
    }

    #[test]
    fn reports_are_deterministic_in_the_seed() {
        let cfg = small();
        let a = run_suite(Suite::Lemma, &cfg).unwrap();
        let b = run_suite(Suite::Lemma, &cfg).unwrap();
        assert_eq!(a.checks, b.checks);
    }
}
