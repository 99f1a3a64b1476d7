//! Numeric checks of the analytic inequalities behind the level-k bounds,
//! plus certified extremal tables `W(2,k,n)` for small `n`.
//!
//! Strict inequalities are compared in the log domain with absolute slack
//! [`STRICT_TOLERANCE`]; equality points get [`EQUALITY_TOLERANCE`].

use std::collections::HashSet;
use std::f64::consts::{E, LN_2, PI, SQRT_2};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anf::QuadraticForm;
use crate::dickson::dickson_reduce;
use crate::dyadic::{ln_biguint, Dyadic};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, GF2Matrix};
use crate::oracle::wht_in_place;
use crate::spectrum::weight_histogram;
use crate::walk::WalkOptions;
use crate::weightcount::binomial;

pub const STRICT_TOLERANCE: f64 = 1e-12;
pub const EQUALITY_TOLERANCE: f64 = 1e-9;

/// Largest `n` for which [`exhaustive_table`] enumerates every quadratic.
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// `ln(1 + sqrt 2)`.
pub fn ln_chhl_base() -> f64 {
    (1.0 + SQRT_2).ln()
}

/// `e^3 / sqrt(2 pi)`, the constant produced by the binomial estimate.
pub fn default_sharp_constant() -> f64 {
    E.powi(3) / (2.0 * PI).sqrt()
}

/// Outcome of checking one inequality over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub parameters: String,
    pub checked: usize,
    /// Largest signed violation; the check passes when this is at most
    /// `tolerance`.
    pub max_violation: f64,
    pub witness: String,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {} points, max violation {:.3e} at {} (tol {:.0e}): {}",
            self.name,
            self.parameters,
            self.checked,
            self.max_violation,
            self.witness,
            self.tolerance,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// Running maximum of violations; the first point attaining the maximum
/// is kept as witness, so grid order fixes ties.
struct Tracker {
    name: String,
    parameters: String,
    tolerance: f64,
    checked: usize,
    worst: f64,
    witness: String,
}

impl Tracker {
    fn new(name: &str, parameters: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            parameters: parameters.into(),
            tolerance,
            checked: 0,
            worst: f64::NEG_INFINITY,
            witness: "none".to_string(),
        }
    }

    fn observe(&mut self, violation: f64, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if violation > self.worst || violation.is_nan() && !self.worst.is_nan() {
            self.worst = violation;
            self.witness = witness();
        }
    }

    fn finish(self) -> BoundReport {
        BoundReport {
            passed: self.worst <= self.tolerance,
            name: self.name,
            parameters: self.parameters,
            checked: self.checked,
            max_violation: self.worst,
            witness: self.witness,
            tolerance: self.tolerance,
        }
    }
}

/// `(1 + sqrt 2)^k`.
pub fn chhl_bound(k: usize) -> f64 {
    (k as f64 * ln_chhl_base()).exp()
}

/// `C k^{-1/2} (1 + sqrt 2)^k`.
pub fn sharp_bound(k: usize, c: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("sharp bound needs k >= 1".into()));
    }
    Ok(c * (k as f64).powf(-0.5) * chhl_bound(k))
}

fn ln_sharp(k: usize, ln_c: f64) -> f64 {
    ln_c - 0.5 * (k as f64).ln() + k as f64 * ln_chhl_base()
}

/// `x ln x` with the continuous extension `0` at `x = 0`.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `alpha^alpha (2-alpha)^(2-alpha) - 2 (sqrt2 - 1)^alpha`.
pub fn alpha_margin(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    let lhs = (xlnx(alpha) + xlnx(2.0 - alpha)).exp();
    let rhs = 2.0 * (SQRT_2 - 1.0).powf(alpha);
    Ok(lhs - rhs)
}

pub fn alpha_inequality(alpha: f64) -> Result<BoundReport> {
    let margin = alpha_margin(alpha)?;
    let mut t = Tracker::new("alpha", format!("alpha={alpha}"), STRICT_TOLERANCE);
    t.observe(-margin, || format!("alpha={alpha}"));
    Ok(t.finish())
}

/// The inequality on the grid `0, step, 2 step, ..., 1`, and the equality at
/// `alpha = 2 - sqrt 2`.
pub fn alpha_grid(step: f64) -> Result<Vec<BoundReport>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid step {step} must lie in (0, 1]"
        )));
    }
    let points = (1.0 / step).round() as usize;
    let mut grid = Tracker::new(
        "alpha-grid",
        format!("alpha in [0,1], step {step}"),
        STRICT_TOLERANCE,
    );
    for i in 0..=points {
        let alpha = (i as f64 * step).min(1.0);
        let margin = alpha_margin(alpha)?;
        grid.observe(-margin, || format!("alpha={alpha:.6}"));
    }
    let star = 2.0 - SQRT_2;
    let mut eq = Tracker::new("alpha-equality", "alpha = 2 - sqrt2", EQUALITY_TOLERANCE);
    let margin = alpha_margin(star)?;
    eq.observe(margin.abs(), || format!("alpha={star:.12}"));
    Ok(vec![grid.finish(), eq.finish()])
}

fn binomial_violation(m: usize, k: usize, ln_row_k: f64, ln_row_l: f64, ln_c: f64) -> f64 {
    let ln_scale = -(m as f64) * LN_2;
    if k == 0 {
        return ln_scale;
    }
    let direct = ln_scale + ln_row_k - ln_sharp(k, ln_c);
    if k <= m {
        return direct;
    }
    // reflect to l = 2m+1-k, bound there, then climb to k by monotonicity
    let l = 2 * m + 1 - k;
    let at_l = if l == 0 {
        ln_scale
    } else {
        ln_scale + ln_row_l - ln_sharp(l, ln_c)
    };
    let climb = if l == 0 {
        f64::NEG_INFINITY
    } else {
        ln_sharp(l, 0.0) - ln_sharp(k, 0.0)
    };
    direct.max(at_l).max(climb)
}

/// `2^-m C(2m+1, k) <= e^3 / sqrt(2 pi k) (1 + sqrt 2)^k` for one `(m, k)`.
pub fn binomial_bound_check(m: usize, k: usize) -> Result<BoundReport> {
    if m == 0 || k > 2 * m + 1 {
        return Err(Error::InvalidArgument(format!(
            "binomial check needs m >= 1 and k <= 2m+1, got m={m}, k={k}"
        )));
    }
    let ln_c = default_sharp_constant().ln();
    let row = |j: usize| ln_biguint(&binomial(2 * m + 1, j));
    let mut t = Tracker::new("binomial", format!("m={m}, k={k}"), STRICT_TOLERANCE);
    let v = binomial_violation(m, k, row(k), row(2 * m + 1 - k), ln_c);
    t.observe(v, || format!("m={m}, k={k}"));
    Ok(t.finish())
}

/// Every `(m, k)` with `1 <= m <= m_max`, `0 <= k <= 2m+1`.
pub fn binomial_grid(m_max: usize) -> BoundReport {
    let ln_c = default_sharp_constant().ln();
    let mut t = Tracker::new(
        "binomial",
        format!("1 <= m <= {m_max}, 0 <= k <= 2m+1"),
        STRICT_TOLERANCE,
    );
    for m in 1..=m_max {
        let top = 2 * m + 1;
        let mut c = BigUint::from(1u8);
        let mut ln_row = Vec::with_capacity(top + 1);
        for j in 0..=top {
            ln_row.push(ln_biguint(&c));
            c = c * (top - j) / (j + 1);
        }
        for k in 0..=top {
            let v = binomial_violation(m, k, ln_row[k], ln_row[top - k], ln_c);
            t.observe(v, || format!("m={m}, k={k}"));
        }
    }
    t.finish()
}

fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::from(1u8), |acc, i| acc * i)
}

/// Stirling remainders `R(n) = ln n! - (n + 1/2) ln n + n - ln sqrt(2 pi)`
/// for `n = 1..=n_max`, index 0 unused.
///
/// Uses `R(j) - R(j+1) = sum_i t^{2i} / (2i+1)` with `t = 1/(2j+1)` and
/// compensated summation, so no large logarithms cancel.
pub fn stirling_remainders(n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if n_max == 0 {
        return out;
    }
    let r1 = 1.0 - 0.5 * (2.0 * PI).ln();
    out[1] = r1;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for j in 1..n_max {
        let t2 = (1.0 / (2 * j + 1) as f64).powi(2);
        let mut terms = Vec::new();
        let mut p = t2;
        let mut i = 1;
        while p > 1e-40 {
            terms.push(p / (2 * i + 1) as f64);
            p *= t2;
            i += 1;
        }
        let d: f64 = terms.iter().rev().sum();
        let y = d;
        let s = sum + y;
        comp += if sum.abs() >= y.abs() {
            (sum - s) + y
        } else {
            (y - s) + sum
        };
        sum = s;
        out[j + 1] = r1 - (sum + comp);
    }
    out
}

fn stirling_direct_violation(n: usize) -> f64 {
    let fact = factorial(n).to_f64().unwrap_or(f64::INFINITY);
    let nf = n as f64;
    let base = (2.0 * PI * nf).sqrt() * (nf / E).powf(nf);
    let lower = base * (1.0 / (12.0 * nf) - 1.0 / (360.0 * nf.powi(3))).exp();
    let upper = base * (1.0 / (12.0 * nf)).exp();
    ((lower - fact) / fact).max((fact - upper) / fact)
}

fn stirling_log_violation(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    let lower = 1.0 / (12.0 * nf) - 1.0 / (360.0 * nf.powi(3));
    let upper = 1.0 / (12.0 * nf);
    (lower - r).max(r - upper)
}

/// The factorial sandwich at one `n`: relative comparison against the exact
/// factorial for `n <= 170`, log-domain comparison beyond.
pub fn stirling_sandwich(n: usize) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Stirling sandwich needs n >= 1".into(),
        ));
    }
    let mut t = Tracker::new("stirling", format!("n={n}"), STRICT_TOLERANCE);
    let v = if n <= 170 {
        stirling_direct_violation(n)
    } else {
        stirling_log_violation(n, stirling_remainders(n)[n])
    };
    t.observe(v, || format!("n={n}"));
    Ok(t.finish())
}

/// Direct check for `1..=direct_max` and log-domain check for `1..=log_max`.
pub fn stirling_grid(direct_max: usize, log_max: usize) -> Vec<BoundReport> {
    let mut direct = Tracker::new(
        "stirling-direct",
        format!("1 <= n <= {direct_max}"),
        STRICT_TOLERANCE,
    );
    for n in 1..=direct_max.min(170) {
        direct.observe(stirling_direct_violation(n), || format!("n={n}"));
    }
    let r = stirling_remainders(log_max);
    let mut log = Tracker::new(
        "stirling-log",
        format!("1 <= n <= {log_max}"),
        STRICT_TOLERANCE,
    );
    for (n, &rn) in r.iter().enumerate().skip(1) {
        log.observe(stirling_log_violation(n, rn), || format!("n={n}"));
    }
    vec![direct.finish(), log.finish()]
}

/// `W(2,k,n)` for `k = 0..=n`: the largest level-k weight over every
/// polynomial of degree at most 2 in `n` variables.
///
/// One transform per quadratic part suffices: adding a linear form `l`
/// permutes the spectrum, `|f^_{q+l}(S)| = |f^_q(S+l)|`, and the constant
/// only flips signs.
pub fn exhaustive_table(n: usize) -> Result<Vec<Dyadic>> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::Budget(format!(
            "exhaustive tables stop at n = {EXHAUSTIVE_LIMIT}, asked for {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let size = 1usize << n;
    let mut seen = HashSet::new();
    let mut best = vec![Dyadic::zero(); n + 1];
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut data = vec![0i64; size];
        for (x, slot) in data.iter_mut().enumerate() {
            let odd = pairs
                .iter()
                .enumerate()
                .filter(|&(b, &(i, j))| mask >> b & 1 == 1 && x >> i & 1 == 1 && x >> j & 1 == 1)
                .count()
                % 2
                == 1;
            *slot = if odd { -1 } else { 1 };
        }
        wht_in_place(&mut data);
        let support: Vec<usize> = (0..size).filter(|&s| data[s] != 0).collect();
        let key: Vec<u64> = {
            let mut k = vec![0u64; size.div_ceil(64)];
            for &s in &support {
                k[s / 64] |= 1 << (s % 64);
            }
            k
        };
        if !seen.insert(key) {
            continue;
        }
        // |support| = 4^m and every nonzero entry is 2^(n-m) / 2^n = 2^-m
        let m = support.len().trailing_zeros() as u64 / 2;
        for shift in 0..size {
            let mut counts = vec![0u64; n + 1];
            for &s in &support {
                counts[(s ^ shift).count_ones() as usize] += 1;
            }
            for (k, &c) in counts.iter().enumerate() {
                let w = Dyadic::new(c as i64, m);
                if w > best[k] {
                    best[k] = w;
                }
            }
        }
    }
    Ok(best)
}

/// Certified `W(2,k,n)` for every `n <= n_max`; row `n` has `n + 1` entries.
pub fn exhaustive_tables(n_max: usize) -> Result<Vec<Vec<Dyadic>>> {
    (0..=n_max).map(exhaustive_table).collect()
}

fn table_entry(tables: &[Vec<Dyadic>], k: isize, n: usize) -> Dyadic {
    if k < 0 {
        return Dyadic::zero();
    }
    tables[n]
        .get(k as usize)
        .cloned()
        .unwrap_or_else(Dyadic::zero)
}

/// Checks `W(2,k,n) <= 1/2 W(2,k,n-2) + W(2,k-1,n-2) + 1/2 W(2,k-2,n-2)`
/// for `1 <= k`, `k + 1 <= n <= n_max`, together with
/// `W(2,k,n) <= (1 + sqrt 2)^k` for every table entry.
///
/// For `n <= k` the maximizer may be affine and the recurrence does not
/// apply; those entries are covered by the envelope check only.
pub fn recurrence_check(n_max: usize) -> Result<Vec<BoundReport>> {
    let tables = exhaustive_tables(n_max)?;
    Ok(recurrence_reports(&tables))
}

pub fn recurrence_reports(tables: &[Vec<Dyadic>]) -> Vec<BoundReport> {
    let n_max = tables.len().saturating_sub(1);
    // both sides are exact dyadics, so no slack
    let mut rec = Tracker::new("recurrence", format!("1 <= k, k+1 <= n <= {n_max}"), 0.0);
    for n in 2..=n_max {
        for k in 1..n {
            let lhs = table_entry(tables, k as isize, n);
            let rhs = table_entry(tables, k as isize, n - 2)
                .halve(1)
                .add(&table_entry(tables, k as isize - 1, n - 2))
                .add(&table_entry(tables, k as isize - 2, n - 2).halve(1));
            let v = lhs.sub(&rhs).to_f64();
            rec.observe(v, || format!("n={n}, k={k}: W={lhs}, rhs={rhs}"));
        }
    }
    vec![rec.finish(), envelope_report("envelope-exhaustive", tables)]
}

/// `W(2,k,n) <= (1 + sqrt 2)^k` over a table, in the log domain.
pub fn envelope_report(name: &str, tables: &[Vec<Dyadic>]) -> BoundReport {
    let n_max = tables.len().saturating_sub(1);
    let mut t = Tracker::new(name, format!("n <= {n_max}, all k"), STRICT_TOLERANCE);
    for (n, row) in tables.iter().enumerate() {
        for (k, w) in row.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let v = w.ln_abs() - k as f64 * ln_chhl_base();
            t.observe(v, || format!("n={n}, k={k}, W={w}"));
        }
    }
    t.finish()
}

/// A uniformly random invertible `n x n` matrix.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<GF2Matrix> {
    loop {
        let rows = (0..n)
            .map(|_| BitVector::from_words(n, (0..n.div_ceil(64)).map(|_| rng.gen()).collect()))
            .collect();
        let m = GF2Matrix::from_rows(n, rows)?;
        if m.rank() == n {
            return Ok(m);
        }
    }
}

/// Canonical representative of the class `(m, f)` on `n` variables: the
/// inner product of rank `m` plus `f` linear terms on the next coordinates.
pub fn class_representative(n: usize, m: usize, f: usize) -> Result<QuadraticForm> {
    if 2 * m + f > n {
        return Err(Error::InvalidArgument(format!(
            "class (m={m}, f={f}) does not fit in {n} variables"
        )));
    }
    let mut q = QuadraticForm::inner_product(m, n)?;
    for t in 0..f {
        q.toggle_linear(2 * m + t);
    }
    Ok(q)
}

/// Level weights of sampled members of every class `(m, f)` for
/// `1 <= n <= n_max` against `(1 + sqrt 2)^k`: the representative itself
/// and `substitutions` seeded random invertible changes of variables of it.
pub fn class_search(
    n_max: usize,
    substitutions: usize,
    seed: u64,
    options: &WalkOptions,
) -> Result<BoundReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tracker::new(
        "envelope-classes",
        format!("n <= {n_max}, {substitutions} substitutions per class, seed {seed}"),
        STRICT_TOLERANCE,
    );
    for n in 1..=n_max {
        for m in 0..=n / 2 {
            for f in 0..=n - 2 * m {
                let rep = class_representative(n, m, f)?;
                for s in 0..=substitutions {
                    let q = if s == 0 {
                        rep.clone()
                    } else {
                        rep.substitute(&random_invertible(&mut rng, n)?)?
                    };
                    let h = weight_histogram(&dickson_reduce(&q)?, options)?;
                    for (k, c) in h.entries() {
                        let v = ln_biguint(c)
                            - h.scale_exponent() as f64 * LN_2
                            - k as f64 * ln_chhl_base();
                        t.observe(v, || format!("n={n}, m={m}, f={f}, sample {s}, k={k}: {q}"));
                    }
                }
            }
        }
    }
    Ok(t.finish())
}

/// `round((2 - sqrt 2) m)` with ties to even.
pub fn k_star(m: usize) -> usize {
    ((2.0 - SQRT_2) * m as f64).round_ties_even() as usize
}

/// One row of the sharpness table for the inner-product form of rank `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRow {
    pub m: usize,
    pub k: usize,
    pub count: BigUint,
    pub weight: f64,
    /// `weight / (k^{-1/2} (1 + sqrt 2)^k)`.
    pub ratio: f64,
}

pub const SHARPNESS_CORRIDOR: (f64, f64) = (0.1, 8.02);

/// Level weight of `sum_j x_{2j} x_{2j+1}` on `2m` variables at `k = k*(m)`,
/// computed through the structure path.
pub fn sharpness_row(m: usize, options: &WalkOptions) -> Result<SharpnessRow> {
    let q = QuadraticForm::inner_product(m, 2 * m)?;
    let h = weight_histogram(&dickson_reduce(&q)?, options)?;
    let k = k_star(m);
    let count = h.count(k);
    let weight = h.level_weight(k).to_f64();
    let ratio = if k == 0 {
        f64::NAN
    } else {
        (ln_biguint(&count) - m as f64 * LN_2 - ln_sharp(k, 0.0)).exp()
    };
    Ok(SharpnessRow {
        m,
        k,
        count,
        weight,
        ratio,
    })
}

/// Ratios for every `m` in the range must lie in [`SHARPNESS_CORRIDOR`].
pub fn sharpness_check(
    ms: std::ops::RangeInclusive<usize>,
    options: &WalkOptions,
) -> Result<(BoundReport, Vec<SharpnessRow>)> {
    let (lo, hi) = SHARPNESS_CORRIDOR;
    let mut t = Tracker::new(
        "sharpness",
        format!("m in {}..={}, ratio in [{lo}, {hi}]", ms.start(), ms.end()),
        STRICT_TOLERANCE,
    );
    let mut rows = Vec::new();
    for m in ms {
        let row = sharpness_row(m, options)?;
        let v = if row.ratio.is_nan() {
            f64::INFINITY
        } else {
            (lo - row.ratio).max(row.ratio - hi)
        };
        t.observe(v, || format!("m={m}, k={}, ratio={:.6}", row.k, row.ratio));
        rows.push(row);
    }
    Ok((t.finish(), rows))
}
