//! Newton identities, the Bezoutiant, the discriminant sequence and
//! Sylvester's signature test.
//!
//! Everything is written over [`Ring`] so the same code runs on rational
//! numbers, floats, generalized polynomials (curve-wise discriminants) and
//! truncated germs.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::traits::{Signed, Zero};
use serde::Serialize;

use crate::config::Config;
use crate::curves::{GenPoly, MonicCurve, PiecewiseGermFunction};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, Rational, Ring, Scalar};

/// Power sums `s_0..s_{count-1}` of the roots, from `a_j = σ_j`.
pub fn power_sums<R: Ring>(a: &[R], one: &R, count: usize) -> Vec<R> {
    let n = a.len();
    let mut s: Vec<R> = Vec::with_capacity(count);
    if count == 0 {
        return s;
    }
    s.push(one.scaled(&int(n as i64)));
    for k in 1..count {
        let mut acc = one.zero_like();
        for i in 1..k.min(n + 1) {
            let term = a[i - 1].times(&s[k - i]);
            acc = if i % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        if k <= n {
            let term = a[k - 1].scaled(&int(k as i64));
            acc = if k % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        s.push(acc);
    }
    s
}

/// `s_0..s_{2n-2}`, the entries of the Bezoutiant.
pub fn power_sums_from_coefficients<R: Ring>(a: &[R], one: &R) -> Vec<R> {
    power_sums(a, one, 2 * a.len().max(1) - 1)
}

/// Inverse Newton identities: `σ_1..σ_n` from `s_1..s_n`.
pub fn coefficients_from_power_sums<R: Ring>(s: &[R], one: &R) -> Vec<R> {
    let n = s.len();
    let mut sigma: Vec<R> = Vec::with_capacity(n + 1);
    sigma.push(one.clone());
    for k in 1..=n {
        let mut acc = one.zero_like();
        for i in 1..=k {
            let term = sigma[k - i].times(&s[i - 1]);
            acc = if i % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        sigma.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
    }
    sigma.remove(0);
    sigma
}

/// Elementary symmetric functions of the given roots.
pub fn coefficients_from_roots<R: Ring>(roots: &[R], one: &R) -> Vec<R> {
    let mut e = vec![one.clone()];
    for r in roots {
        let mut next = e.clone();
        next.push(one.zero_like());
        for k in 1..next.len() {
            next[k] = e.get(k).cloned().unwrap_or_else(|| one.zero_like()).plus(&e[k - 1].times(r));
        }
        e = next;
    }
    e.remove(0);
    e
}

/// Hankel matrix `B[i][j] = s_{i+j}` (0-based).
pub fn bezoutiant<R: Ring>(a: &[R], one: &R) -> Vec<Vec<R>> {
    let n = a.len();
    let s = power_sums_from_coefficients(a, one);
    (0..n).map(|i| (0..n).map(|j| s[i + j].clone()).collect()).collect()
}

/// Determinants of the leading `k×k` minors, `k = 1..=kmax`, by memoized
/// Laplace expansion along the last row.
pub fn leading_minors<R: Ring>(b: &[Vec<R>], kmax: usize, one: &R) -> Vec<R> {
    let kmax = kmax.min(b.len());
    let mut memo: HashMap<u32, R> = HashMap::new();
    memo.insert(0, one.clone());
    fn det<R: Ring>(b: &[Vec<R>], mask: u32, memo: &mut HashMap<u32, R>, one: &R) -> R {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let row = mask.count_ones() as usize - 1;
        let mut acc = one.zero_like();
        let mut pos = 0usize;
        let mut sign_pos = Vec::new();
        for j in 0..32 {
            if mask & (1 << j) != 0 {
                sign_pos.push((j, pos));
                pos += 1;
            }
        }
        let last = sign_pos.len() - 1;
        for (j, p) in sign_pos {
            let minor = det(b, mask & !(1 << j), memo, one);
            let term = b[row][j].times(&minor);
            // cofactor sign of (row, p) with row = last
            acc = if (last + p) % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
        }
        memo.insert(mask, acc.clone());
        acc
    }
    (1..=kmax).map(|k| det(b, (1u32 << k) - 1, &mut memo, one)).collect()
}

/// `Δ̃_1..Δ̃_n` as polynomial expressions in the coefficients.
pub fn discriminants<R: Ring>(a: &[R], one: &R) -> Vec<R> {
    let b = bezoutiant(a, one);
    leading_minors(&b, a.len(), one)
}

/// `Σ over k-subsets of Π_{i<j} (λ_i - λ_j)^2`.
pub fn subset_vandermonde_sum<R: Ring>(roots: &[R], k: usize, one: &R) -> R {
    fn go<R: Ring>(roots: &[R], start: usize, k: usize, chosen: &mut Vec<usize>, one: &R, acc: &mut R) {
        if chosen.len() == k {
            let mut prod = one.clone();
            for (x, &i) in chosen.iter().enumerate() {
                for &j in &chosen[x + 1..] {
                    let d = roots[i].minus(&roots[j]);
                    prod = prod.times(&d.times(&d));
                }
            }
            *acc = acc.plus(&prod);
            return;
        }
        for i in start..roots.len() {
            chosen.push(i);
            go(roots, i + 1, k, chosen, one, acc);
            chosen.pop();
        }
    }
    let mut acc = one.zero_like();
    go(roots, 0, k, &mut Vec::with_capacity(k), one, &mut acc);
    acc
}

/// Pointwise discriminant sequence of a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantSequence<S: Scalar> {
    /// Exact values when the coefficients evaluate exactly.
    pub exact: Option<Vec<S>>,
    pub numeric: Vec<S::Numeric>,
}

pub fn discriminant_sequence<S: Scalar>(p: &MonicCurve<S>, t: &Rational) -> Result<DiscriminantSequence<S>> {
    if let Some(a) = p.coeffs_exact(t)? {
        let d = discriminants(&a, &S::one());
        let numeric = d.iter().map(|v| v.to_numeric()).collect();
        return Ok(DiscriminantSequence { exact: Some(d), numeric });
    }
    let a = p.coeffs_numeric(crate::scalar::to_f64(t))?;
    let numeric = discriminants(&a, &<S::Numeric as num::One>::one());
    Ok(DiscriminantSequence { exact: None, numeric })
}

/// `Δ̃_1..Δ̃_n` as exact piecewise functions.
pub fn discriminant_curves<S: Scalar>(p: &MonicCurve<S>) -> Result<Vec<PiecewiseGermFunction<S>>> {
    let refs: Vec<&PiecewiseGermFunction<S>> = p.coeffs().iter().collect();
    let al = PiecewiseGermFunction::align(&refs)?;
    let one = GenPoly::constant(S::one());
    let per: Vec<Vec<GenPoly<S>>> = al.polys.iter().map(|row| discriminants(row, &one)).collect();
    (0..p.degree())
        .map(|k| {
            let polys = per.iter().map(|r| r[k].clone()).collect();
            PiecewiseGermFunction::from_aligned(p.domain().clone(), &al.breakpoints, &al.frames, polys)
        })
        .collect()
}

/// Largest `k` with `Δ̃_k ≠ 0` (exact data).
pub fn count_distinct_exact<S: Scalar>(a: &[S]) -> usize {
    let d = discriminants(a, &S::one());
    d.iter().rposition(|v| !v.is_zero()).map_or(0, |i| i + 1)
}

/// Largest `k` with `|Δ̃_k|` above `tau` relative to the matching power of
/// the root scale.
pub fn count_distinct_numeric<S: Scalar>(a: &[S], tau: f64) -> usize {
    let an: Vec<S::Numeric> = a.iter().map(|v| v.to_numeric()).collect();
    let d = discriminants(&an, &<S::Numeric as num::One>::one());
    let scale = root_scale(&an);
    d.iter()
        .enumerate()
        .rposition(|(k, v)| {
            let k = k + 1;
            // Δ̃_k is homogeneous of degree k(k-1) in the roots
            let unit = (k as f64) * scale.powi((k * (k - 1)) as i32).max(f64::MIN_POSITIVE);
            v.magnitude() > tau * unit
        })
        .map_or(0, |i| i + 1)
}

/// Cauchy-type bound on the root magnitudes, at least 1.
pub fn root_scale<S: Scalar>(a: &[S]) -> f64 {
    a.iter()
        .enumerate()
        .map(|(j, c)| c.magnitude().powf(1.0 / (j + 1) as f64))
        .fold(1.0, f64::max)
        * 2.0
}

pub fn count_distinct_roots<S: Scalar>(p: &MonicCurve<S>, t: &Rational, cfg: &Config) -> Result<usize> {
    Ok(match p.coeffs_exact(t)? {
        Some(a) => count_distinct_exact(&a),
        None => count_distinct_numeric(&p.coeffs_numeric(crate::scalar::to_f64(t))?, cfg.tau_disc),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SylvesterVerdict {
    pub hyperbolic: bool,
    pub distinct_roots: usize,
    pub distinct_real_roots: usize,
}

/// Inertia `(positive, negative)` of a rational symmetric matrix by
/// congruence with 1×1 and 2×2 pivots.
pub fn inertia(m: &[Vec<Rational>]) -> (usize, usize) {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut alive: Vec<usize> = (0..a.len()).collect();
    let (mut pos, mut neg) = (0, 0);
    while !alive.is_empty() {
        if let Some(&i) = alive.iter().find(|&&i| !a[i][i].is_zero()) {
            let piv = a[i][i].clone();
            if piv.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.retain(|&x| x != i);
            for &k in &alive {
                for &l in &alive {
                    let delta = &a[k][i] * &a[i][l] / &piv;
                    a[k][l] -= delta;
                }
            }
            continue;
        }
        let pair = alive
            .iter()
            .flat_map(|&i| alive.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i < j && !a[i][j].is_zero());
        let Some((i, j)) = pair else { break };
        // [[0, b], [b, 0]] has one positive and one negative eigenvalue
        pos += 1;
        neg += 1;
        let b = a[i][j].clone();
        alive.retain(|&x| x != i && x != j);
        for &k in &alive {
            for &l in &alive {
                let delta = (&a[k][i] * &a[j][l] + &a[k][j] * &a[i][l]) / &b;
                a[k][l] -= delta;
            }
        }
    }
    (pos, neg)
}

/// Exact Sylvester test: rank is the number of distinct roots, signature
/// the number of distinct real roots.
pub fn sylvester_exact(a: &[Rational]) -> SylvesterVerdict {
    let b = bezoutiant(a, &int(1));
    let (pos, neg) = inertia(&b);
    SylvesterVerdict { hyperbolic: neg == 0, distinct_roots: pos + neg, distinct_real_roots: pos - neg }
}

/// Floating Sylvester test; eigenvalues inside the tolerance band give
/// [`Error::Indeterminate`].
pub fn sylvester_numeric(a: &[f64], tau: f64) -> Result<SylvesterVerdict> {
    let b = bezoutiant(a, &1.0);
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| b[i][j]);
    let scale = m.iter().fold(0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let eig = m.symmetric_eigen();
    let (mut pos, mut neg) = (0, 0);
    for &l in eig.eigenvalues.iter() {
        let r = l.abs() / scale;
        if r <= tau {
            continue;
        }
        if r <= tau * 1024.0 {
            return Err(Error::Indeterminate(format!("Bezoutiant eigenvalue {l:e} inside the zero band")));
        }
        if l > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok(SylvesterVerdict { hyperbolic: neg == 0, distinct_roots: pos + neg, distinct_real_roots: pos - neg })
}

pub fn sylvester_test(p: &MonicCurve<Rational>, t: &Rational, cfg: &Config) -> Result<SylvesterVerdict> {
    match p.coeffs_exact(t)? {
        Some(a) => Ok(sylvester_exact(&a)),
        None => sylvester_numeric(&p.coeffs_numeric(crate::scalar::to_f64(t))?, cfg.tau_disc),
    }
}

/// Human-readable rendering of a rational discriminant sequence.
pub fn format_sequence(d: &[Rational]) -> String {
    d.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}
