//! Seeded identity suites over random rational instances. Each suite
//! compares two independent computations of the same quantity exactly.

use num::traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::reduction::{brute_force_d, d};
use crate::scalar::{int, Rational};
use crate::symmetric::{coefficients_from_power_sums, coefficients_from_roots, discriminants, power_sums, subset_vandermonde_sum, sylvester_exact};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing instance, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Instance counts per suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSizes {
    pub newton: usize,
    pub discriminant: usize,
    pub sylvester: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { newton: 200, discriminant: 200, sylvester: 100 }
    }
}

fn small_rational(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into())
}

fn tally(name: &'static str, cases: usize, mut check: impl FnMut(usize) -> Option<String>) -> SuiteResult {
    let mut failures = 0;
    let mut example = None;
    for i in 0..cases {
        if let Some(e) = check(i) {
            failures += 1;
            example.get_or_insert(e);
        }
    }
    SuiteResult { name, cases, failures, example }
}

/// `σ -> s -> σ` on random rational coefficients, degree `1..=n_max`.
pub fn newton_round_trip(n_max: usize, cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    tally("newton-round-trip", cases, |_| {
        let n = rng.gen_range(1..=n_max.max(1));
        let a: Vec<Rational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        let s = power_sums(&a, &int(1), n + 1);
        let back = coefficients_from_power_sums(&s[1..], &int(1));
        (back != a).then(|| format!("a = {a:?}"))
    })
}

/// `det B_k` against the subset Vandermonde sum for random root
/// multisets, degree `1..=n_max`.
pub fn discriminant_identity(n_max: usize, cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    tally("discriminant-identity", cases, |_| {
        let n = rng.gen_range(1..=n_max.max(1));
        let mut roots: Vec<Rational> = Vec::with_capacity(n);
        for _ in 0..n {
            // repeated roots a third of the time
            if !roots.is_empty() && rng.gen_range(0..3) == 0 {
                let r = roots[rng.gen_range(0..roots.len())].clone();
                roots.push(r);
            } else {
                roots.push(small_rational(&mut rng));
            }
        }
        let a = coefficients_from_roots(&roots, &int(1));
        let dk = discriminants(&a, &int(1));
        (1..=n)
            .find(|&k| dk[k - 1] != subset_vandermonde_sum(&roots, k, &int(1)))
            .map(|k| format!("roots = {roots:?}, k = {k}"))
    })
}

/// Ascending product of monic factors given by ascending coefficients.
fn multiply(factors: &[Vec<Rational>]) -> Vec<Rational> {
    let mut acc = vec![Rational::one()];
    for f in factors {
        let mut next = vec![Rational::zero(); acc.len() + f.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in f.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    acc
}

/// Sylvester rank and signature on polynomials built from chosen distinct
/// real roots, conjugate pairs and multiplicities, degree `<= n_max`.
pub fn sylvester_counts(n_max: usize, cases: usize, seed: u64) -> SuiteResult {
    let mut rng = StdRng::seed_from_u64(seed);
    tally("sylvester-counts", cases, |_| {
        let budget = rng.gen_range(1..=n_max.max(1));
        let mut factors = Vec::new();
        let mut reals: Vec<Rational> = Vec::new();
        let mut pairs: Vec<(Rational, Rational)> = Vec::new();
        let mut used = 0;
        while used < budget {
            let room = budget - used;
            if room >= 2 && rng.gen_bool(0.3) {
                let (re, im) = (small_rational(&mut rng), Rational::new(rng.gen_range(1..=6).into(), rng.gen_range(1..=3).into()));
                if pairs.contains(&(re.clone(), im.clone())) {
                    continue;
                }
                // x^2 - 2 re x + re^2 + im^2
                factors.push(vec![&re * &re + &im * &im, -(&re * int(2)), Rational::one()]);
                pairs.push((re, im));
                used += 2;
            } else {
                let r = if !reals.is_empty() && rng.gen_bool(0.3) {
                    reals[rng.gen_range(0..reals.len())].clone()
                } else {
                    let r = small_rational(&mut rng);
                    if !reals.contains(&r) {
                        reals.push(r.clone());
                    }
                    r
                };
                factors.push(vec![-r, Rational::one()]);
                used += 1;
            }
        }
        let asc = multiply(&factors);
        let n = asc.len() - 1;
        // a_j = (-1)^j c_{n-j}
        let a: Vec<Rational> = (1..=n).map(|j| if j % 2 == 0 { asc[n - j].clone() } else { -asc[n - j].clone() }).collect();
        let v = sylvester_exact(&a);
        let want = (reals.len() + 2 * pairs.len(), reals.len());
        ((v.distinct_roots, v.distinct_real_roots) != want || v.hyperbolic != pairs.is_empty())
            .then(|| format!("reals = {reals:?}, pairs = {pairs:?}, got {v:?}"))
    })
}

/// Closed form `d(n)` against exhaustive search over trees, `n = 1..=n_max`.
pub fn tree_formula(n_max: usize) -> SuiteResult {
    tally("tree-formula", n_max, |i| {
        let n = i as u64 + 1;
        match brute_force_d(n) {
            Ok(b) if b == d(n) => None,
            Ok(b) => Some(format!("n = {n}: closed form {}, search {b}", d(n))),
            Err(e) => Some(format!("n = {n}: {e}")),
        }
    })
}

pub fn run_all(n_max: usize, sizes: SuiteSizes, seed: u64) -> Vec<SuiteResult> {
    vec![
        newton_round_trip(n_max, sizes.newton, seed),
        discriminant_identity(n_max, sizes.discriminant, seed.wrapping_add(1)),
        sylvester_counts(n_max, sizes.sylvester, seed.wrapping_add(2)),
        tree_formula(n_max),
    ]
}
