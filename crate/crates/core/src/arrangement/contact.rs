//! Numeric contact orders between root branches at a point, for the
//! arrangement glued by [`local_matching`].

use crate::config::Config;
use crate::curves::{MonicCurve, Side};
use crate::error::{Error, Result};
use crate::multiplicity::{estimate_order, integerize_fits, ladder, max_finite, ContactProfile, OrderFit, PairContact};
use crate::scalar::{from_f64, to_f64, Rational, Scalar};

use super::arrange::local_matching;
use super::probe::{BranchSource, CurveRoots};

/// Relative tolerance when comparing fitted one-sided coefficients.
const COEFF_REL: f64 = 0.05;

fn side_values<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, hs: &[f64], cfg: &Config) -> Result<Vec<Vec<f64>>> {
    let src = CurveRoots { curve: p, cfg };
    hs.iter()
        .map(|&h| {
            let t = match side {
                Side::Left => t0 - from_f64(h),
                Side::Right => t0 + from_f64(h),
            };
            let (v, _) = src.values(&t)?;
            let mut re: Vec<f64> = v.iter().map(|z| to_f64(&z.re)).collect();
            re.sort_by(f64::total_cmp);
            Ok(re)
        })
        .collect()
}

fn fit(samples: &[(f64, f64)], n: usize, guard: f64, cfg: &Config) -> Result<(OrderFit, f64)> {
    let f = estimate_order(samples, n as u64, guard, cfg.tau_fit)?;
    let sign = samples.iter().rev().find(|(_, v)| v.abs() > guard).map_or(1.0, |(_, v)| v.signum());
    let c = match &f {
        OrderFit::Finite { coefficient, .. } => sign * coefficient,
        OrderFit::Infinite => 0.0,
    };
    Ok((f, c))
}

/// Pairwise orders `m_{t0}(λ_i - λ_j)` for the smooth gluing at `t0` of a
/// hyperbolic curve; `radius` bounds the ladder.
pub fn contact_profile<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, radius: f64, cfg: &Config) -> Result<ContactProfile> {
    let n = p.degree();
    let m = local_matching(p, t0, radius, cfg.q_max, cfg)?;
    let h0 = cfg.ladder_h0.min(0.5 * radius);
    let hs = ladder(h0, cfg.ladder_rho, cfg.ladder_len);
    let left = side_values(p, t0, Side::Left, &hs, cfg)?;
    let right = side_values(p, t0, Side::Right, &hs, cfg)?;
    let scale = left.iter().chain(&right).flatten().fold(1.0f64, |a, v| a.max(v.abs()));
    let guard = cfg.underflow_guard * scale;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dl: Vec<(f64, f64)> = hs.iter().zip(&left).map(|(&h, v)| (h, v[i] - v[j])).collect();
            let (ri, rj) = (m.tau[i], m.tau[j]);
            let dr: Vec<(f64, f64)> = hs.iter().zip(&right).map(|(&h, v)| (h, v[ri] - v[rj])).collect();
            let tag = |e: Error| match e {
                Error::UnresolvedOrder(s) => Error::UnresolvedOrder(format!("pair ({}, {}): {s}", i + 1, j + 1)),
                e => e,
            };
            let (fl, cl) = fit(&dl, n, guard, cfg).map_err(tag)?;
            let (fr, cr) = fit(&dr, n, guard, cfg).map_err(tag)?;
            let order = integerize_fits(&fl, cl, &fr, cr, COEFF_REL);
            pairs.push(PairContact { i, j, order, left: Some(fl), right: Some(fr) });
        }
    }
    let mbar = max_finite(pairs.iter().map(|p| p.order));
    Ok(ContactProfile { t0: t0.clone(), pairs, mbar })
}
