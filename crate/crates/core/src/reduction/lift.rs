//! Splitting a curve germ into factors whose roots at `t0` are distinct.
//!
//! With `u = σ^(1/D)` every coefficient becomes a power series in `u`.
//! Starting from `P(t0) = Π_C (x - c_C)^(m_C)`, the coprime factorization
//! is lifted one `u`-order at a time: the correction at order `k` solves
//! `Σ_C δF_C · Π_{C'≠C} g_C' = R_k` with `deg δF_C < m_C`, a linear system
//! whose matrix does not depend on `k`.

use num::complex::Complex64;
use num::integer::Integer;
use num::traits::Zero;

use crate::arrangement::roots::solve_monic;
use crate::config::Config;
use crate::curves::{GenPoly, PowerTerm, SeriesGerm};
use crate::error::{Error, Result};
use crate::scalar::{reconstruct_rational, Rational, Scalar};
use crate::upoly::UPoly;

use super::local::LocalCurve;

/// One factor of the splitting.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<C: Scalar> {
    /// Common value of the cluster's roots at `t0`.
    pub center: C,
    pub size: usize,
    pub factor: LocalCurve<C>,
}

/// Factors in the input scalar type, or in its floating counterpart
/// when some cluster value is not rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Factors<C: Scalar> {
    Exact(Vec<Cluster<C>>),
    Numeric(Vec<Cluster<C::Numeric>>),
}

impl<C: Scalar> Factors<C> {
    pub fn len(&self) -> usize {
        match self {
            Factors::Exact(v) => v.len(),
            Factors::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sizes(&self) -> Vec<usize> {
        match self {
            Factors::Exact(v) => v.iter().map(|c| c.size).collect(),
            Factors::Numeric(v) => v.iter().map(|c| c.size).collect(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Factors::Exact(_))
    }
}

/// Relative coefficient noise assumed for floating germs when widening
/// the cluster radius of a multiple root.
const NUMERIC_NOISE: f64 = 1e-12;

/// Clusters the roots of `P(t0)` and lifts the factorization to order
/// `truncation` in `σ`.
pub fn split_clusters<C: Scalar>(c: &LocalCurve<C>, truncation: &Rational, cfg: &Config) -> Result<Factors<C>> {
    let vals = c.values_at_zero();
    if c.degree() < 2 {
        return Err(Error::Invalid("splitting needs degree ≥ 2".into()));
    }
    if let Some(exact) = vals.iter().map(Scalar::to_rational).collect::<Option<Vec<_>>>() {
        let groups = exact_groups(&exact, cfg)?;
        if groups.len() < 2 {
            return Err(Error::Invalid("all roots coincide at t0; nothing to split".into()));
        }
        if let Some(centers) = groups.iter().map(|(z, _, q)| q.clone().map(|q| (q, *z))).collect::<Option<Vec<_>>>() {
            let real = centers.iter().all(|(_, z)| z.im == 0.0);
            if real {
                let cs: Vec<(C, usize)> =
                    centers.iter().zip(&groups).map(|((q, _), g)| (C::from_rational(q), g.1)).collect();
                return Ok(Factors::Exact(lift(c, &cs, truncation, cfg)?));
            }
        }
        let cs: Vec<(C::Numeric, usize)> = groups.iter().map(|(z, m, _)| (C::Numeric::from_c64(*z), *m)).collect();
        return Ok(Factors::Numeric(lift(&c.to_numeric(), &cs, truncation, cfg)?));
    }
    let groups = numeric_groups(&vals, cfg)?;
    if groups.len() < 2 {
        return Err(Error::Invalid("all roots coincide at t0; nothing to split".into()));
    }
    let cs: Vec<(C::Numeric, usize)> = groups.iter().map(|(z, m)| (C::Numeric::from_c64(*z), *m)).collect();
    Ok(Factors::Numeric(lift(&c.to_numeric(), &cs, truncation, cfg)?))
}

/// Ascending coefficients of `P(t0)` from signed values.
fn ascending<C: Scalar>(vals: &[C]) -> Vec<C> {
    let m = vals.len();
    let mut out = vec![C::zero(); m + 1];
    out[m] = C::one();
    for (j, a) in vals.iter().enumerate() {
        let k = j + 1;
        out[m - k] = if k % 2 == 1 { -a.clone() } else { a.clone() };
    }
    out
}

fn order_key(z: &Complex64) -> (i64, i64) {
    // total order on centers: real part, then imaginary part, at 1e-9
    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
}

/// Distinct roots with exact multiplicities via the squarefree
/// decomposition; rational roots are recovered exactly.
fn exact_groups(vals: &[Rational], cfg: &Config) -> Result<Vec<(Complex64, usize, Option<Rational>)>> {
    let p = UPoly::new(ascending(vals));
    let mut out = Vec::new();
    for (f, mult) in p.squarefree_decomposition() {
        let c = f.to_f64();
        let lead = *c.last().expect("nonzero");
        let desc: Vec<Complex64> = c.iter().rev().map(|x| Complex64::new(x / lead, 0.0)).collect();
        let (roots, _) = solve_monic(&desc, cfg.tau_root.max(1e-9))?;
        for z in roots {
            // roots of a squarefree factor are simple: polish to full precision
            let z = refine_center(&desc, z, 1);
            let z = if z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) { Complex64::new(z.re, 0.0) } else { z };
            let q = if z.im == 0.0 {
                reconstruct_rational(z.re, 1 << 20, 1e-9 * (1.0 + z.re.abs())).filter(|q| f.eval(q).is_zero())
            } else {
                None
            };
            out.push((z, mult as usize, q));
        }
    }
    out.sort_by_key(|g| order_key(&g.0));
    Ok(out)
}

/// Single-linkage clustering of floating roots. The radius is
/// `eps_cluster·(1 + max|λ|)`, widened to the spread `noise^(1/m)` that an
/// `m`-fold root shows under coefficient noise.
fn numeric_groups<C: Scalar>(vals: &[C], cfg: &Config) -> Result<Vec<(Complex64, usize)>> {
    let asc = ascending(vals);
    let desc: Vec<Complex64> = asc.iter().rev().map(Scalar::to_c64).collect();
    let (roots, _) = solve_monic(&desc, 1e-6)?;
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let base = cfg.eps_cluster * scale;
    let n = roots.len();
    let link = |eps: f64| -> Vec<usize> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if (roots[i] - roots[j]).norm() <= eps {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    };
    // the largest k whose radius noise^(1/k) yields a cluster of size ≥ k
    let mut eps = base;
    let mut labels = link(eps);
    for k in 2..=n {
        let e = base.max(NUMERIC_NOISE.powf(1.0 / k as f64) * scale);
        let l = link(e);
        let biggest = (0..n).map(|i| l.iter().filter(|&&x| x == l[i]).count()).max().unwrap_or(1);
        if biggest >= k {
            eps = e;
            labels = l;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = (roots[i] - roots[j]).norm();
            if labels[i] != labels[j] && gap >= eps && gap <= 4.0 * eps {
                return Err(Error::AmbiguousClustering { gap, eps, band: 4.0 * eps });
            }
        }
    }
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        if seen.contains(&labels[i]) {
            continue;
        }
        seen.push(labels[i]);
        let members: Vec<Complex64> = (0..n).filter(|&j| labels[j] == labels[i]).map(|j| roots[j]).collect();
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        groups.push((refine_center(&desc, mean, members.len()), members.len()));
    }
    groups.sort_by_key(|g| order_key(&g.0));
    Ok(groups)
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold cluster has a
/// simple root.
fn refine_center(desc: &[Complex64], z0: Complex64, m: usize) -> Complex64 {
    let n = desc.len() - 1;
    // ascending coefficients of the (m-1)-th derivative
    let asc: Vec<Complex64> = desc.iter().rev().cloned().collect();
    let deriv = |c: &[Complex64]| -> Vec<Complex64> { c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect() };
    let mut d = asc;
    for _ in 1..m {
        d = deriv(&d);
    }
    if n < m || d.len() < 2 {
        return z0;
    }
    let d1 = deriv(&d);
    let eval = |c: &[Complex64], z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, v| acc * z + v);
    let mut z = z0;
    for _ in 0..20 {
        let den = eval(&d1, z);
        if den.norm() == 0.0 {
            break;
        }
        let step = eval(&d, z) / den;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - z0).norm() <= 1e-3 * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

/// Dense `[x power][u power]` array.
type Xu<C> = Vec<Vec<C>>;

fn xu_mul<C: Scalar>(a: &Xu<C>, b: &Xu<C>, nu: usize) -> Xu<C> {
    let mut out = vec![vec![C::zero(); nu]; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            for (k, x) in ai.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for l in 0..nu - k {
                    if !bj[l].is_zero() {
                        out[i + j][k + l] = out[i + j][k + l].clone() + x.clone() * bj[l].clone();
                    }
                }
            }
        }
    }
    out
}

fn poly_mul<C: Scalar>(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `(x - c)^m`, ascending.
fn linear_power<C: Scalar>(c: &C, m: usize) -> Vec<C> {
    let mut p = vec![C::one()];
    for _ in 0..m {
        p = poly_mul(&p, &[-c.clone(), C::one()]);
    }
    p
}

/// Gaussian elimination with partial pivoting by magnitude.
pub fn solve_linear<C: Scalar>(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Result<Vec<C>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude()))
            .expect("nonempty");
        if a[piv][col].is_zero() || a[piv][col].magnitude() == 0.0 {
            return Err(Error::Internal("singular splitting system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone() / a[col][col].clone();
            for k in col..n {
                a[row][k] = a[row][k].clone() - f.clone() * a[col][k].clone();
            }
            b[row] = b[row].clone() - f * b[col].clone();
        }
    }
    let mut x = vec![C::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s = s - a[row][k].clone() * x[k].clone();
        }
        x[row] = s / a[row][row].clone();
    }
    Ok(x)
}

/// `P` as ascending `x` coefficients of `u`-series, truncated below `u^nu`.
fn xu_of<C: Scalar>(c: &LocalCurve<C>, dq: &Rational, nu: usize) -> Result<Xu<C>> {
    let m = c.degree();
    let mut p: Xu<C> = vec![vec![C::zero(); nu]; m + 1];
    p[m][0] = C::one();
    for (j, g) in c.a.iter().enumerate() {
        let k = j + 1;
        for t in g.poly.terms() {
            let e = (&t.alpha * dq).to_integer();
            let e: usize = e.try_into().map_err(|_| Error::Internal("exponent overflow".into()))?;
            if e < nu {
                let v = if k % 2 == 1 { -t.coeff.clone() } else { t.coeff.clone() };
                p[m - k][e] = p[m - k][e].clone() + v;
            }
        }
    }
    Ok(p)
}

/// Whether the lifted factors, read as polynomials in `u`, multiply to the
/// untruncated input exactly. Then they are exact germs, which lets a
/// factor of identical roots close with `a_2 ≡ 0`.
fn exact_factorization<C: Scalar>(c: &LocalCurve<C>, f: &[Xu<C>], dq: &Rational) -> Result<bool> {
    if !C::EXACT || c.order().is_some() {
        return Ok(false);
    }
    let top = |x: &Xu<C>| x.iter().filter_map(|s| s.iter().rposition(|v| !v.is_zero())).max().unwrap_or(0);
    let e_in = c.a.iter().filter_map(|g| g.poly.max_exponent()).map(|a| (a * dq).to_integer()).max();
    let e_in: usize = e_in.unwrap_or_default().try_into().map_err(|_| Error::Internal("exponent overflow".into()))?;
    let width = e_in.max(f.iter().map(top).sum()) + 1;
    let mut prod: Xu<C> = vec![vec![C::one(); 1]];
    for fc in f {
        let padded: Xu<C> = fc.iter().map(|s| (0..width).map(|k| s.get(k).cloned().unwrap_or_else(C::zero)).collect()).collect();
        prod = xu_mul(&prod, &padded, width);
    }
    Ok(prod == xu_of(c, dq, width)?)
}

fn lift<C: Scalar>(c: &LocalCurve<C>, centers: &[(C, usize)], truncation: &Rational, cfg: &Config) -> Result<Vec<Cluster<C>>> {
    let m = c.degree();
    let k_eff = match c.order() {
        Some(o) if o < *truncation => o,
        _ => truncation.clone(),
    };
    let den = c
        .a
        .iter()
        .map(|g| g.poly.exponent_denominator())
        .fold(1u64, |acc, d| acc.lcm(&d))
        .max(1);
    let dq = Rational::from_integer(den.into());
    let nu_r = (&k_eff * &dq).ceil();
    let nu: usize = nu_r.to_integer().try_into().unwrap_or(0).max(1);
    let p = xu_of(c, &dq, nu)?;
    let g: Vec<Vec<C>> = centers.iter().map(|(cc, mc)| linear_power(cc, *mc)).collect();
    // system matrix: columns x^j · Π_{C'≠C} g_C'
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(m);
    for (ci, (_, mc)) in centers.iter().enumerate() {
        let mut others = vec![C::one()];
        for (cj, gj) in g.iter().enumerate() {
            if cj != ci {
                others = poly_mul(&others, gj);
            }
        }
        for j in 0..*mc {
            let mut col = vec![C::zero(); m];
            for (i, v) in others.iter().enumerate() {
                if i + j < m {
                    col[i + j] = v.clone();
                }
            }
            cols.push(col);
        }
    }
    let mat: Vec<Vec<C>> = (0..m).map(|row| cols.iter().map(|col| col[row].clone()).collect()).collect();
    let mut f: Vec<Xu<C>> = g
        .iter()
        .map(|gc| {
            gc.iter()
                .map(|v| {
                    let mut s = vec![C::zero(); nu];
                    s[0] = v.clone();
                    s
                })
                .collect()
        })
        .collect();
    for k in 1..nu {
        let mut prod: Xu<C> = vec![vec![C::one()]];
        for fc in &f {
            prod = xu_mul(&prod, &fc.iter().map(|s| s[..=k].to_vec()).collect::<Vec<_>>(), k + 1);
        }
        let rhs: Vec<C> = (0..m).map(|i| p[i][k].clone() - prod[i][k].clone()).collect();
        if rhs.iter().all(|v| v.is_zero()) {
            continue;
        }
        let sol = solve_linear(mat.clone(), rhs)?;
        let mut off = 0;
        for (ci, (_, mc)) in centers.iter().enumerate() {
            for j in 0..*mc {
                f[ci][j][k] = sol[off + j].clone();
            }
            off += mc;
        }
    }
    // residual certificate, relative per entry to the product of the
    // factors' absolute values (lifted series may grow geometrically)
    let mut prod: Xu<C> = vec![vec![C::one(); 1]];
    let mut bound: Xu<f64> = vec![vec![1.0]];
    for fc in &f {
        prod = xu_mul(&prod, fc, nu);
        let fa: Xu<f64> = fc.iter().map(|s| s.iter().map(Scalar::magnitude).collect()).collect();
        bound = xu_mul(&bound, &fa, nu);
    }
    let mut resid = 0.0f64;
    for i in 0..=m {
        for k in 0..nu {
            let pv = prod.get(i).and_then(|r| r.get(k)).cloned().unwrap_or_else(C::zero);
            let d = pv - p[i][k].clone();
            if C::EXACT && !d.is_zero() {
                return Err(Error::LiftDidNotConverge(d.magnitude()));
            }
            let b = bound.get(i).and_then(|r| r.get(k)).copied().unwrap_or(0.0);
            resid = resid.max(d.magnitude() / (1.0 + b + p[i][k].magnitude()));
        }
    }
    if resid > cfg.tau_lift {
        return Err(Error::LiftDidNotConverge(resid));
    }
    let order = if exact_factorization(c, &f, &dq)? { None } else { Some(Rational::new(nu.into(), den.into())) };
    let mut out = Vec::with_capacity(centers.len());
    for (ci, (cc, mc)) in centers.iter().enumerate() {
        let a: Vec<SeriesGerm<C>> = (1..=*mc)
            .map(|j| {
                let row = &f[ci][mc - j];
                let terms = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(e, v)| {
                        let v = if j % 2 == 1 { -v.clone() } else { v.clone() };
                        PowerTerm::new(v, Rational::new(e.into(), den.into()))
                    })
                    .collect();
                SeriesGerm::new(c.side, c.anchor.clone(), GenPoly::from_terms(terms), order.clone())
            })
            .collect();
        out.push(Cluster { center: cc.clone(), size: *mc, factor: LocalCurve::new(c.side, c.anchor.clone(), a) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Mode, MonicCurve, PiecewiseGermFunction, Side};
    use crate::scalar::int;

    fn dom() -> (Rational, Rational) {
        (int(-2), int(2))
    }

    fn poly(c: &[i64]) -> PiecewiseGermFunction {
        PiecewiseGermFunction::from_poly(dom(), GenPoly::from_coeffs(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())).unwrap()
    }

    fn product_matches<C: Scalar>(orig: &LocalCurve<C>, cl: &[Cluster<C>], tol: f64) {
        let mut acc: Vec<SeriesGerm<C>> = Vec::new();
        let one = SeriesGerm::one(orig.side, orig.anchor.clone());
        // multiply monic factors in ascending form through the signed identity
        let mut asc: Vec<SeriesGerm<C>> = vec![one.clone()];
        for c in cl {
            let m = c.factor.degree();
            let mut f = vec![one.zero_like(); m + 1];
            f[m] = one.clone();
            for (j, a) in c.factor.a.iter().enumerate() {
                let k = j + 1;
                f[m - k] = if k % 2 == 1 { a.neg() } else { a.clone() };
            }
            let mut out = vec![one.zero_like(); asc.len() + m];
            for (i, x) in asc.iter().enumerate() {
                for (j, y) in f.iter().enumerate() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
            asc = out;
        }
        let n = orig.degree();
        for k in 1..=n {
            let v = if k % 2 == 1 { asc[n - k].neg() } else { asc[n - k].clone() };
            acc.push(v);
        }
        for (x, y) in acc.iter().zip(&orig.a) {
            let d = match &x.order {
                Some(o) => x.sub(&y.truncate(o)),
                None => x.sub(y),
            };
            assert!(d.poly.terms().iter().all(|t| t.coeff.magnitude() <= tol), "{d:?}");
        }
    }

    use crate::scalar::Ring;

    #[test]
    fn constant_curve() {
        let p = MonicCurve::new(vec![poly(&[0]), poly(&[-1])], Mode::Hyperbolic).unwrap();
        let c = LocalCurve::from_curve(&p, &int(0), Side::Right, 8).unwrap();
        let f = split_clusters(&c, &int(8), &Config::default()).unwrap();
        let Factors::Exact(cl) = f else { panic!("exact expected") };
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].center, int(-1));
        assert!(cl[0].factor.a[0].poly.terms().len() == 1);
        product_matches(&c, &cl, 0.0);
    }

    #[test]
    fn polynomial_factors_are_exact() {
        // (x - t)^2 (x + 2t): the double factor is exactly (x - t)^2
        let p = MonicCurve::new(vec![poly(&[0]), poly(&[0, 0, -3]), poly(&[0, 0, 0, -2])], Mode::Hyperbolic).unwrap();
        let c = LocalCurve::from_curve(&p, &int(0), Side::Right, 8).unwrap();
        let (r, q) = crate::reduction::reduce_side(&c, 0.0).unwrap();
        assert_eq!(r, crate::multiplicity::Mult::Finite(1));
        let Factors::Exact(cl) = split_clusters(&q.unwrap(), &int(8), &Config::default()).unwrap() else { panic!() };
        assert!(cl.iter().all(|c| c.factor.order().is_none()));
        let t = crate::reduction::tree::build_side_tree(&p, &int(0), Side::Right, &Config::default()).unwrap();
        assert!(t.root.children.iter().any(|c| c.identically_equal), "{}", t.render_ascii());
    }

    #[test]
    fn three_lines_at_one() {
        // x^3 - t^2 x at t0 = 1
        let p = MonicCurve::new(vec![poly(&[0]), poly(&[0, 0, -1]), poly(&[0])], Mode::Hyperbolic).unwrap();
        for side in Side::BOTH {
            let c = LocalCurve::from_curve(&p, &int(1), side, 8).unwrap();
            let Factors::Exact(cl) = split_clusters(&c, &int(10), &Config::default()).unwrap() else { panic!() };
            assert_eq!(cl.iter().map(|c| c.center.clone()).collect::<Vec<_>>(), vec![int(-1), int(0), int(1)]);
            product_matches(&c, &cl, 0.0);
        }
    }

    #[test]
    fn irrational_centres_lift_numerically() {
        // (x^2 - 2 - t)(x - t)
        let p = MonicCurve::new(vec![poly(&[0, 1]), poly(&[-2, -1, -1]), poly(&[0, -2, -1])], Mode::Hyperbolic).unwrap();
        let c = LocalCurve::from_curve(&p, &int(0), Side::Right, 8).unwrap();
        let f = split_clusters(&c, &int(12), &Config::default()).unwrap();
        let Factors::Numeric(cl) = f else { panic!("numeric expected") };
        assert_eq!(cl.len(), 3);
        assert!((cl[0].center + 2f64.sqrt()).abs() < 1e-12);
        product_matches(&c.to_numeric(), &cl, 1e-10);
    }

    #[test]
    fn multiple_cluster_with_noise() {
        // (x - 1/3)^3 (x + 1) in floating point
        let c3 = 1.0 / 3.0;
        // signed coefficients of (x - c)^3 (x + 1)
        let a1 = 3.0 * c3 - 1.0;
        let a2 = 3.0 * c3 * c3 - 3.0 * c3;
        let a3 = c3 * c3 * c3 - 3.0 * c3 * c3;
        let a4 = -c3 * c3 * c3;
        let germs: Vec<SeriesGerm<f64>> =
            [a1, a2, a3, a4].iter().map(|&v| SeriesGerm::exact(Side::Right, int(0), GenPoly::constant(v))).collect();
        let c = LocalCurve::new(Side::Right, int(0), germs);
        let f = split_clusters(&c, &int(4), &Config::default()).unwrap();
        assert_eq!(f.sizes(), vec![1, 3]);
    }

    #[test]
    fn linear_solver() {
        let a = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert_eq!(solve_linear(a, vec![int(3), int(4)]).unwrap(), vec![int(2), int(3)]);
    }
}
