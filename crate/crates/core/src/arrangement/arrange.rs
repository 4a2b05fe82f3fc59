//! Global arrangements of the roots on a sampling grid: sorted, or smooth
//! by gluing one-sided branches across each critical point with the
//! permutation that keeps the most one-sided Taylor coefficients equal.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Config, Precision};
use crate::critical::CriticalPoint;
use crate::curves::{MonicCurve, Mode, Side};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, from_f64, to_f64, Rational, Scalar};

use super::precise::precise_roots;
use super::probe::{match_tolerance, probe_glued, side_data, BranchProbe, CurveRoots, ProbeSettings, SideData};
use super::roots::roots_at;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Sorted,
    Smooth,
}

/// Gluing permutation at one critical point: left sorted index `j`
/// continues as right sorted index `tau[j]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matching {
    pub t0: String,
    pub tau: Vec<usize>,
    /// Another permutation with different right-hand germs fit equally well.
    pub tie: bool,
    /// Normalized worst jump per order for the chosen permutation.
    pub jumps: Vec<f64>,
    pub probes: Vec<BranchProbe>,
    /// Some glued branch is not differentiable here.
    pub non_differentiable: bool,
}

impl Matching {
    pub fn q_hats(&self) -> Vec<Option<usize>> {
        self.probes.iter().map(|p| p.q_hat).collect()
    }
}

/// Per-order normalized jumps of gluing `tau`.
fn jumps(left: &SideData, right: &SideData, tau: &[usize], q_max: usize) -> Vec<f64> {
    (0..=q_max)
        .map(|l| {
            tau.iter()
                .enumerate()
                .map(|(j, &k)| {
                    let (a, b) = (&left.series[j][l], &right.series[k][l]);
                    let tol = match_tolerance(a, b).max(f64::MIN_POSITIVE);
                    (b.limit_c() - a.limit_c()).norm() / tol
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

fn permutations(n: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn go(j: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], allowed: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
        if j == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..n {
            if !used[k] && allowed(j, k) {
                used[k] = true;
                cur.push(k);
                go(j + 1, n, cur, used, allowed, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut vec![false; n], allowed, &mut out);
    out
}

/// Chooses the gluing permutation at `t0` from one-sided data. Candidates
/// are compared order by order; at each order those within the tie band
/// of the best survive. Remaining ties go to the lexicographically
/// smallest permutation.
pub fn choose_tau(left: &SideData, right: &SideData, q_max: usize, tie_tol: f64) -> (Vec<usize>, bool, Vec<f64>) {
    let n = left.series.len();
    let zero_ok = |j: usize, k: usize| {
        let (a, b) = (&left.series[j][0], &right.series[k][0]);
        (b.limit_c() - a.limit_c()).norm() <= match_tolerance(a, b)
    };
    let mut cands = permutations(n, &zero_ok);
    if cands.is_empty() {
        cands = permutations(n, &|_, _| true);
    }
    let scored: Vec<(Vec<usize>, Vec<f64>)> = cands.into_iter().map(|t| {
        let j = jumps(left, right, &t, q_max);
        (t, j)
    }).collect();
    let mut alive: Vec<usize> = (0..scored.len()).collect();
    for l in 0..=q_max {
        let best = alive.iter().map(|&i| scored[i].1[l]).fold(f64::INFINITY, f64::min);
        let band = 1f64.max(best * (1.0 + tie_tol));
        alive.retain(|&i| scored[i].1[l] <= band);
    }
    alive.sort_by(|&a, &b| scored[a].0.cmp(&scored[b].0));
    let pick = alive[0];
    let tau = scored[pick].0.clone();
    // a tie matters only when some alternative glues to a different germ
    let same_germ = |k: usize, k2: usize| {
        (0..=q_max).all(|l| {
            let (a, b) = (&right.series[k][l], &right.series[k2][l]);
            (b.limit_c() - a.limit_c()).norm() <= match_tolerance(a, b)
        })
    };
    let tie = alive[1..].iter().any(|&i| scored[i].0.iter().zip(&tau).any(|(&k2, &k)| !same_germ(k, k2)));
    (tau, tie, scored[pick].1.clone())
}

/// Distance from `t0` to the nearest other critical point or domain end.
pub fn local_radius(p: &MonicCurve<impl Scalar>, t0: f64, crit: &[CriticalPoint]) -> f64 {
    let (lo, hi) = p.domain();
    let mut r = (t0 - to_f64(lo)).min(to_f64(hi) - t0);
    for c in crit {
        let d = (c.approx() - t0).abs();
        if d > 0.0 {
            r = r.min(d);
        }
    }
    r
}

/// Smooth gluing at one critical point, with per-branch probes of the
/// glued branches.
pub fn local_matching<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, radius: f64, q_max: usize, cfg: &Config) -> Result<Matching> {
    let st = ProbeSettings::new(cfg, q_max, 0.5 * radius);
    let src = CurveRoots { curve: p, cfg };
    let left = side_data(&src, t0, Side::Left, &st)?;
    let right = side_data(&src, t0, Side::Right, &st)?;
    let (tau, tie, jumps) = choose_tau(&left, &right, q_max, cfg.tie_tol);
    let probes = probe_glued(&left, &right, &tau, q_max);
    let non_differentiable = probes.iter().any(|b| !b.differentiable());
    Ok(Matching { t0: format_rational(t0), tau, tie, jumps, probes, non_differentiable })
}

/// Sampled root branches.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootTrajectories {
    pub strategy: Strategy,
    pub grid: Vec<f64>,
    /// `branches[b][i]` is branch `b` at `grid[i]`.
    pub branches: Vec<Vec<f64>>,
    /// `perm[i][b]`: sorted index taken by branch `b` at `grid[i]`.
    pub perm: Vec<Vec<usize>>,
    pub matchings: Vec<Matching>,
}

/// One-line image notation, 1-based; indices are dot-separated beyond 9.
pub fn perm_string(p: &[usize]) -> String {
    if p.len() <= 9 {
        p.iter().map(|i| char::from(b'1' + *i as u8)).collect()
    } else {
        p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

impl RootTrajectories {
    pub fn to_csv(&self) -> String {
        let n = self.branches.len();
        let mut s = String::from("t");
        for b in 1..=n {
            let _ = write!(s, ",branch_{b}");
        }
        s.push_str(",perm\n");
        for (i, t) in self.grid.iter().enumerate() {
            let _ = write!(s, "{t:?}");
            for b in 0..n {
                let _ = write!(s, ",{:?}", self.branches[b][i]);
            }
            let _ = writeln!(s, ",{}", perm_string(&self.perm[i]));
        }
        s
    }

    /// Static SVG with one polyline per branch and vertical marks at
    /// critical points.
    pub fn to_svg(&self, width: u32, height: u32) -> String {
        let (w, h) = (width as f64, height as f64);
        let t0 = self.grid.first().copied().unwrap_or(0.0);
        let t1 = self.grid.last().copied().unwrap_or(1.0);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in self.branches.iter().flatten() {
            y0 = y0.min(*v);
            y1 = y1.max(*v);
        }
        if !(y1 > y0) {
            y0 -= 1.0;
            y1 += 1.0;
        }
        let sx = |t: f64| 20.0 + (w - 40.0) * (t - t0) / (t1 - t0).max(f64::MIN_POSITIVE);
        let sy = |y: f64| h - 20.0 - (h - 40.0) * (y - y0) / (y1 - y0);
        let colors = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50", "#16a085", "#7f8c8d"];
        let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n");
        for m in &self.matchings {
            if let Ok(t) = crate::scalar::parse_rational(&m.t0) {
                let x = sx(to_f64(&t));
                let _ = writeln!(s, "<line x1=\"{x:.3}\" y1=\"10\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>", h - 10.0);
            }
        }
        for (b, br) in self.branches.iter().enumerate() {
            let pts: Vec<String> = self.grid.iter().zip(br).map(|(t, y)| format!("{:.3},{:.3}", sx(*t), sy(*y))).collect();
            let _ = writeln!(
                s,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                colors[b % colors.len()],
                pts.join(" ")
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Sorted real parts of the roots at `t`.
fn sorted_sample<S: Scalar>(p: &MonicCurve<S>, t: f64, cfg: &Config) -> Result<Vec<f64>> {
    let tr = from_f64(t);
    if cfg.precision == Precision::Extended {
        if let Some(r) = precise_roots(p, &tr)? {
            let mut v: Vec<f64> = r.iter().map(|z| to_f64(&z.re)).collect();
            v.sort_by(f64::total_cmp);
            return Ok(v);
        }
    }
    Ok(roots_at(p, &tr, cfg)?.sorted_real())
}

/// Uniform grid on `[lo, hi]` with geometric points inserted within
/// `2^-6` of every critical point.
pub fn default_grid(lo: f64, hi: f64, count: usize, crit: &[CriticalPoint]) -> Vec<f64> {
    let count = count.max(2);
    let mut g: Vec<f64> = (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect();
    for c in crit {
        let t0 = c.approx();
        for k in 0..12 {
            let d = 2f64.powi(-6 - k);
            for t in [t0 - d, t0 + d] {
                if t > lo && t < hi {
                    g.push(t);
                }
            }
        }
    }
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Branches of a hyperbolic curve on `grid` (sorted, inside the domain).
pub fn arrange<S: Scalar>(
    p: &MonicCurve<S>,
    grid: &[f64],
    strategy: Strategy,
    crit: &[CriticalPoint],
    cfg: &Config,
) -> Result<RootTrajectories> {
    if p.mode() != Mode::Hyperbolic {
        return Err(Error::Invalid("arrangements need a hyperbolic curve".into()));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid("grid must be sorted".into()));
    }
    let n = p.degree();
    let samples: Vec<Vec<f64>> = grid.iter().map(|&t| sorted_sample(p, t, cfg)).collect::<Result<_>>()?;
    let mut perm_now: Vec<usize> = (0..n).collect();
    let mut perm = Vec::with_capacity(grid.len());
    let mut matchings = Vec::new();
    let inner: Vec<&CriticalPoint> = match (strategy, grid.first(), grid.last()) {
        (Strategy::Smooth, Some(&a), Some(&b)) => crit.iter().filter(|c| c.approx() > a && c.approx() < b).collect(),
        _ => Vec::new(),
    };
    let mut next = 0;
    for &t in grid {
        while next < inner.len() && t > inner[next].approx() {
            let c = inner[next];
            let m = local_matching(p, &c.proxy, local_radius(p, c.approx(), crit), cfg.q_max, cfg)?;
            for b in perm_now.iter_mut() {
                *b = m.tau[*b];
            }
            matchings.push(m);
            next += 1;
        }
        perm.push(perm_now.clone());
    }
    let branches = (0..n).map(|b| samples.iter().zip(&perm).map(|(s, pm)| s[pm[b]]).collect()).collect();
    Ok(RootTrajectories { strategy, grid: grid.to_vec(), branches, perm, matchings })
}

/// Convenience wrapper: `t0` given as a float proxy.
pub fn matching_at<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, crit: &[CriticalPoint], cfg: &Config) -> Result<Matching> {
    local_matching(p, t0, local_radius(p, to_f64(t0), crit), cfg.q_max, cfg)
}
