//! Numeric smoothness probe. On each side of `t0` the branch is
//! interpolated at `t0 ± i·h` (`i = 1..=M+1`, degree `M = q_max + 2`) for
//! a geometric ladder of `h`, giving one-sided Taylor coefficient
//! estimates per order. Order `q` is accepted when the estimates of every
//! order up to `q` converge along the ladder on both sides and the two
//! limits agree.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::traits::{One, Zero};
use num::Complex;
use serde::Serialize;

use crate::config::Config;
use crate::curves::{MonicCurve, Side};
use crate::error::{Error, Result};
use crate::scalar::{from_f64, int, to_f64, CRational, Rational, Scalar};

use super::precise::{precise_noise, precise_roots};
use super::roots::roots_at_f64;

/// Relative noise assumed for binary64 root values.
pub const BINARY64_NOISE: f64 = 1e-13;

/// How a source's values are put into a consistent branch order on one
/// side of the probed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// Values already come in branch order.
    AsGiven,
    /// Sorted by real part, then imaginary part.
    Sorted,
    /// Continued from the farthest node inward by nearest values.
    Tracked,
}

/// A family of branch values that can be evaluated at rational points.
pub trait BranchSource {
    fn count(&self) -> usize;
    /// Values at `t` with their relative noise level.
    fn values(&self, t: &Rational) -> Result<(Vec<CRational>, f64)>;
    fn ordering(&self) -> Ordering;
}

/// A single real branch given by a closure.
pub struct FnBranch<F>(pub F);

impl<F: Fn(&Rational) -> Result<Rational>> BranchSource for FnBranch<F> {
    fn count(&self) -> usize {
        1
    }
    fn values(&self, t: &Rational) -> Result<(Vec<CRational>, f64)> {
        Ok((vec![Complex::new((self.0)(t)?, Rational::zero())], precise_noise()))
    }
    fn ordering(&self) -> Ordering {
        Ordering::AsGiven
    }
}

/// All roots of a curve, refined in rational arithmetic when the
/// coefficients are exact at the sample and solved in binary64 otherwise.
pub struct CurveRoots<'a, S: Scalar> {
    pub curve: &'a MonicCurve<S>,
    pub cfg: &'a Config,
}

impl<S: Scalar> BranchSource for CurveRoots<'_, S> {
    fn count(&self) -> usize {
        self.curve.degree()
    }
    fn values(&self, t: &Rational) -> Result<(Vec<CRational>, f64)> {
        if let Some(r) = precise_roots(self.curve, t)? {
            return Ok((r, precise_noise()));
        }
        let s = roots_at_f64(self.curve, to_f64(t), self.cfg)?;
        Ok((s.roots.iter().map(|z| Complex::new(from_f64(z.re), from_f64(z.im))).collect(), BINARY64_NOISE))
    }
    fn ordering(&self) -> Ordering {
        match self.curve.mode() {
            crate::curves::Mode::Hyperbolic => Ordering::Sorted,
            crate::curves::Mode::Complex => Ordering::Tracked,
        }
    }
}

/// Ladder and decision parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSettings {
    pub q_max: usize,
    /// First step; the outermost node sits at `(q_max + 3)·h0`.
    pub h0: f64,
    pub rho: f64,
    pub len: usize,
    pub tau: f64,
}

impl ProbeSettings {
    /// Settings from the configuration whose nodes stay within `radius`
    /// of the probed point.
    pub fn new(cfg: &Config, q_max: usize, radius: f64) -> Self {
        let reach = (q_max + 3) as f64;
        let mut h0 = cfg.probe_h0;
        while h0 * reach > radius && h0 > 0.0 {
            h0 *= 0.5;
        }
        ProbeSettings { q_max, h0, rho: cfg.probe_rho, len: cfg.probe_len, tau: cfg.tau_probe }
    }

    fn degree(&self) -> usize {
        self.q_max + 2
    }
}

/// Exact inverse Vandermonde matrix for nodes `1..=M+1` with row sums of
/// absolute values (the noise amplification per coefficient).
struct Stencil {
    inv: Vec<Vec<Rational>>,
    gain: Vec<f64>,
}

impl Stencil {
    fn new(m: usize) -> Self {
        let k = m + 1;
        let mut a: Vec<Vec<Rational>> = (1..=k)
            .map(|x| {
                let mut row: Vec<Rational> = (0..k).map(|j| int(x as i64).pow(j as i32)).collect();
                row.extend((0..k).map(|j| if j + 1 == x { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for c in 0..k {
            let piv = (c..k).find(|&r| !a[r][c].is_zero()).expect("Vandermonde is invertible");
            a.swap(c, piv);
            let p = a[c][c].clone();
            for v in a[c].iter_mut() {
                *v /= &p;
            }
            for r in 0..k {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..2 * k {
                        let d = &f * &a[c][j];
                        a[r][j] -= d;
                    }
                }
            }
        }
        let inv: Vec<Vec<Rational>> = a.into_iter().map(|row| row[k..].to_vec()).collect();
        let gain = inv.iter().map(|row| row.iter().map(|v| to_f64(v).abs()).sum()).collect();
        Stencil { inv, gain }
    }
}

/// Estimates of one Taylor coefficient along the ladder on one side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideSeries {
    pub h: Vec<f64>,
    /// `[re, im]` per usable rung.
    pub estimates: Vec<[f64; 2]>,
    pub limit: [f64; 2],
    pub defect: f64,
    pub tolerance: f64,
    pub converged: bool,
}

impl SideSeries {
    pub fn limit_c(&self) -> Complex64 {
        Complex64::new(self.limit[0], self.limit[1])
    }
}

/// One side of a probe: `series[branch][order]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideData {
    pub side: Side,
    pub scale: f64,
    pub noise: f64,
    pub series: Vec<Vec<SideSeries>>,
}

/// Collects and orders branch values at the ladder nodes of one side and
/// reduces them to coefficient series.
pub fn side_data(src: &dyn BranchSource, t0: &Rational, side: Side, st: &ProbeSettings) -> Result<SideData> {
    let m = st.degree();
    let stencil = Stencil::new(m);
    let sign = match side {
        Side::Left => -1,
        Side::Right => 1,
    };
    let hs: Vec<Rational> = (0..st.len).map(|k| from_f64(st.h0 * st.rho.powi(k as i32))).collect();
    // node offsets in units of the smallest step are shared across rungs
    let mut cache: BTreeMap<Rational, Vec<CRational>> = BTreeMap::new();
    let mut noise: f64 = 0.0;
    for h in &hs {
        for i in 1..=m + 1 {
            let d = h * int(i as i64);
            if cache.contains_key(&d) {
                continue;
            }
            let t = t0 + &d * int(sign);
            let (v, nz) = src.values(&t)?;
            if v.len() != src.count() {
                return Err(Error::Internal("branch source changed its count".into()));
            }
            noise = noise.max(nz);
            cache.insert(d, v);
        }
    }
    order_nodes(&mut cache, src.ordering());
    let scale = cache
        .values()
        .flat_map(|v| v.iter().map(|z| Complex64::new(to_f64(&z.re), to_f64(&z.im)).norm()))
        .fold(0.0, f64::max);
    let reach = to_f64(&hs[0]) * (m + 1) as f64;
    let n = src.count();
    let sgn = Rational::from_integer(sign.into());
    // raw[k][b][l]
    let mut raw: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(hs.len());
    for h in &hs {
        let ys: Vec<&Vec<CRational>> = (1..=m + 1).map(|i| &cache[&(h * int(i as i64))]).collect();
        let sh = h * &sgn;
        let mut per_branch = Vec::with_capacity(n);
        for b in 0..n {
            let mut coeffs = Vec::with_capacity(m + 1);
            let mut pw = Rational::one();
            for l in 0..=m {
                let mut acc = CRational::zero();
                for (i, y) in ys.iter().enumerate() {
                    acc = acc + &y[b] * &stencil.inv[l][i];
                }
                let c = Complex::new(&acc.re / &pw, &acc.im / &pw);
                coeffs.push(Complex64::new(to_f64(&c.re), to_f64(&c.im)));
                pw *= &sh;
            }
            per_branch.push(coeffs);
        }
        raw.push(per_branch);
    }
    let series = (0..n)
        .map(|b| {
            (0..=st.q_max)
                .map(|l| {
                    let natural = scale / reach.powi(l as i32);
                    let mut h = Vec::new();
                    let mut est = Vec::new();
                    for (k, hk) in hs.iter().enumerate() {
                        let hk = to_f64(hk);
                        let amp = stencil.gain[l] * noise * scale / hk.powi(l as i32);
                        if amp > 1e-2 * st.tau * natural.max(f64::MIN_POSITIVE) {
                            break;
                        }
                        h.push(hk);
                        est.push(raw[k][b][l]);
                    }
                    finish_series(h, est, natural, st.tau)
                })
                .collect()
        })
        .collect();
    Ok(SideData { side, scale, noise, series })
}

fn finish_series(h: Vec<f64>, est: Vec<Complex64>, natural: f64, tau: f64) -> SideSeries {
    let last = est.last().copied().unwrap_or_default();
    let tolerance = tau * (natural + last.norm());
    let defects: Vec<f64> = est.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let converged = defects.len() >= 2 && defects[defects.len() - 2..].iter().all(|&d| d <= tolerance);
    SideSeries {
        h,
        estimates: est.iter().map(|z| [z.re, z.im]).collect(),
        limit: [last.re, last.im],
        defect: defects.last().copied().unwrap_or(f64::INFINITY),
        tolerance,
        converged,
    }
}

fn order_nodes(cache: &mut BTreeMap<Rational, Vec<CRational>>, ordering: Ordering) {
    match ordering {
        Ordering::AsGiven => {}
        Ordering::Sorted => {
            for v in cache.values_mut() {
                v.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
            }
        }
        Ordering::Tracked => {
            let keys: Vec<Rational> = cache.keys().rev().cloned().collect();
            let c64 = |z: &CRational| Complex64::new(to_f64(&z.re), to_f64(&z.im));
            let mut prev: Option<Vec<Complex64>> = None;
            for k in keys {
                let v = cache.get_mut(&k).expect("key");
                match &prev {
                    None => v.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))),
                    Some(p) => {
                        let vals: Vec<Complex64> = v.iter().map(c64).collect();
                        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
                        for (i, a) in p.iter().enumerate() {
                            for (j, b) in vals.iter().enumerate() {
                                pairs.push(((a - b).norm(), i, j));
                            }
                        }
                        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                        let n = p.len();
                        let mut slot: Vec<Option<usize>> = vec![None; n];
                        let mut used = vec![false; n];
                        for (_, i, j) in pairs {
                            if slot[i].is_none() && !used[j] {
                                slot[i] = Some(j);
                                used[j] = true;
                            }
                        }
                        let old = v.clone();
                        for (i, s) in slot.into_iter().enumerate() {
                            v[i] = old[s.expect("complete assignment")].clone();
                        }
                    }
                }
                prev = Some(v.iter().map(c64).collect());
            }
        }
    }
}

/// Why a probe stopped.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbeVerdict {
    /// Every order up to `q_max` converged and matched.
    Smooth,
    /// One-sided limits of this order differ.
    Mismatch { order: usize, jump: f64 },
    /// Estimates of this order do not settle on the given side.
    Divergent { order: usize, side: Side },
    /// Too few noise-free rungs to decide this order.
    Indeterminate { order: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderCheck {
    pub order: usize,
    pub left: [f64; 2],
    pub right: [f64; 2],
    pub jump: f64,
    pub matched: bool,
    pub converged_left: bool,
    pub converged_right: bool,
}

/// Outcome for one branch: `q_hat` is `None` when the branch is not even
/// continuous at the point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchProbe {
    pub q_hat: Option<usize>,
    pub q_max: usize,
    pub verdict: ProbeVerdict,
    pub orders: Vec<OrderCheck>,
}

impl BranchProbe {
    pub fn differentiable(&self) -> bool {
        self.q_hat.is_some_and(|q| q >= 1)
    }

    /// True when order `q` was positively rejected (as opposed to never
    /// reached or left undecided).
    pub fn rejects(&self, q: usize) -> bool {
        match self.verdict {
            ProbeVerdict::Mismatch { order, .. } | ProbeVerdict::Divergent { order, .. } => order <= q,
            _ => false,
        }
    }
}

/// Jump tolerance between one-sided limits at one order.
pub fn match_tolerance(l: &SideSeries, r: &SideSeries) -> f64 {
    l.tolerance.max(r.tolerance).max(4.0 * (l.defect + r.defect))
}

/// Combines left series `lb` with right series `rb` into a verdict.
pub fn judge(left: &[SideSeries], right: &[SideSeries], q_max: usize) -> BranchProbe {
    let mut orders = Vec::new();
    for l in 0..=q_max {
        let (a, b) = (&left[l], &right[l]);
        let jump = (b.limit_c() - a.limit_c()).norm();
        let matched = jump <= match_tolerance(a, b);
        orders.push(OrderCheck {
            order: l,
            left: a.limit,
            right: b.limit,
            jump,
            matched,
            converged_left: a.converged,
            converged_right: b.converged,
        });
        let verdict = if !a.converged || !b.converged {
            let (s, side) = if !a.converged { (a, Side::Left) } else { (b, Side::Right) };
            Some(if s.estimates.len() < 3 {
                ProbeVerdict::Indeterminate { order: l }
            } else {
                ProbeVerdict::Divergent { order: l, side }
            })
        } else if !matched {
            Some(ProbeVerdict::Mismatch { order: l, jump })
        } else {
            None
        };
        if let Some(v) = verdict {
            return BranchProbe { q_hat: l.checked_sub(1), q_max, verdict: v, orders };
        }
    }
    BranchProbe { q_hat: Some(q_max), q_max, verdict: ProbeVerdict::Smooth, orders }
}

/// Probes every branch of `src` at `t0`, with left branch `j` glued to
/// right branch `tau[j]`.
pub fn probe_glued(left: &SideData, right: &SideData, tau: &[usize], q_max: usize) -> Vec<BranchProbe> {
    tau.iter().enumerate().map(|(j, &k)| judge(&left.series[j], &right.series[k], q_max)).collect()
}

/// Probe of a single real branch given by a closure; nodes stay within
/// `radius` of `t0`.
pub fn smoothness_probe(
    branch: impl Fn(&Rational) -> Result<Rational>,
    t0: &Rational,
    q_max: usize,
    radius: f64,
    cfg: &Config,
) -> Result<BranchProbe> {
    let st = ProbeSettings::new(cfg, q_max, radius);
    let src = FnBranch(branch);
    let l = side_data(&src, t0, Side::Left, &st)?;
    let r = side_data(&src, t0, Side::Right, &st)?;
    Ok(judge(&l.series[0], &r.series[0], q_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::Signed;

    fn probe(f: impl Fn(&Rational) -> Rational, q_max: usize) -> BranchProbe {
        smoothness_probe(|t| Ok(f(t)), &int(0), q_max, 1.0, &Config::default()).unwrap()
    }

    #[test]
    fn textbook_branches() {
        assert_eq!(probe(|t| t.abs(), 4).q_hat, Some(0));
        assert_eq!(probe(|t| t * t.abs(), 4).q_hat, Some(1));
        let p = probe(|t| t * t, 4);
        assert_eq!(p.q_hat, Some(4));
        assert_eq!(p.verdict, ProbeVerdict::Smooth);
        // t^2 |t|^3 is C^4 but not C^5
        let p = probe(|t| t * t * t.abs().pow(3), 6);
        assert_eq!(p.q_hat, Some(4));
        assert!(p.rejects(5));
        // a jump is not even continuous
        assert_eq!(probe(|t| if t.is_positive() { int(1) } else { int(0) }, 2).q_hat, None);
    }

    #[test]
    fn stencil_inverts() {
        let s = Stencil::new(3);
        // the cubic 1 + 2u + 3u^2 + 4u^3 sampled at 1..4
        let y: Vec<Rational> = (1..=4).map(|u| int(1 + 2 * u + 3 * u * u + 4 * u * u * u)).collect();
        let c: Vec<Rational> = (0..4).map(|l| (0..4).map(|i| &s.inv[l][i] * &y[i]).sum()).collect();
        assert_eq!(c, vec![int(1), int(2), int(3), int(4)]);
    }
}
