//! Integrability probe for the derivative of a sampled branch: total
//! variation and Riemann sums of `|Δλ/Δt|^p` on nested uniform grids
//! refined by a factor of four.

use serde::Serialize;

use crate::error::{Error, Result};

pub const BASE_CELLS: usize = 64;
pub const REFINEMENTS: usize = 4;
const FACTOR: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevReport {
    pub p: f64,
    pub interval: [f64; 2],
    pub cells: Vec<usize>,
    pub variation: Vec<f64>,
    pub sums: Vec<f64>,
    /// `sums[k+1] / sums[k]`.
    pub growth: Vec<f64>,
    pub absolutely_continuous: bool,
    pub derivative_in_lp: bool,
    /// Extrapolated `∫|λ'|^p` when finite.
    pub estimate: Option<f64>,
}

/// Probes `branch` on `[lo, hi]` with `BASE_CELLS·4^k` cells,
/// `k = 0..=REFINEMENTS`.
pub fn sobolev_probe(branch: impl Fn(f64) -> Result<f64>, p: f64, lo: f64, hi: f64) -> Result<SobolevReport> {
    if !(p > 1.0) || !(hi > lo) {
        return Err(Error::Invalid("sobolev probe needs p > 1 and a nonempty interval".into()));
    }
    let finest = BASE_CELLS * FACTOR.pow(REFINEMENTS as u32);
    let vals: Vec<f64> = (0..=finest)
        .map(|i| branch(lo + (hi - lo) * i as f64 / finest as f64))
        .collect::<Result<_>>()?;
    let mut cells = Vec::new();
    let mut variation = Vec::new();
    let mut sums = Vec::new();
    let mut max_jump = Vec::new();
    for k in 0..=REFINEMENTS {
        let n = BASE_CELLS * FACTOR.pow(k as u32);
        let stride = finest / n;
        let dt = (hi - lo) / n as f64;
        let (mut tv, mut s, mut mj) = (0.0, 0.0, 0.0f64);
        for i in 0..n {
            let d = (vals[(i + 1) * stride] - vals[i * stride]).abs();
            tv += d;
            s += (d / dt).powf(p) * dt;
            mj = mj.max(d);
        }
        cells.push(n);
        variation.push(tv);
        sums.push(s);
        max_jump.push(mj);
    }
    let growth: Vec<f64> = sums.windows(2).map(|w| w[1] / w[0]).collect();
    // bounded variation that settles, with shrinking jumps
    let tv_last = variation[REFINEMENTS];
    let tv_settled = (tv_last - variation[REFINEMENTS - 1]).abs() <= 1e-2 * tv_last.max(f64::MIN_POSITIVE);
    let jumps_shrink = max_jump.windows(2).all(|w| w[1] <= w[0] * 0.9 || w[1] == 0.0);
    let absolutely_continuous = tv_settled && jumps_shrink;
    let inc: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let k = inc.len();
    let ratio = if inc[k - 2].abs() > 0.0 { inc[k - 1] / inc[k - 2] } else { 0.0 };
    let derivative_in_lp = ratio.abs() < 0.9 && growth.last().is_some_and(|&g| g < 1.5);
    let estimate = derivative_in_lp.then(|| {
        let (d1, d2) = (inc[k - 2], inc[k - 1]);
        if (d2 - d1).abs() > 0.0 {
            sums[REFINEMENTS] - d2 * d2 / (d2 - d1)
        } else {
            sums[REFINEMENTS]
        }
    });
    Ok(SobolevReport {
        p,
        interval: [lo, hi],
        cells,
        variation,
        sums,
        growth,
        absolutely_continuous,
        derivative_in_lp,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_branch() {
        let r = sobolev_probe(|t| Ok(t), 3.0, 0.0, 1.0).unwrap();
        assert!(r.absolutely_continuous && r.derivative_in_lp);
        assert!((r.estimate.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_root_diverges_in_l2() {
        let r = sobolev_probe(|t| Ok(t.cbrt()), 2.0, 0.0, 1.0).unwrap();
        assert!(r.absolutely_continuous);
        assert!(!r.derivative_in_lp);
        assert!(r.growth.iter().all(|&g| g >= 1.5), "{:?}", r.growth);
    }

    #[test]
    fn square_root_in_l_three_halves() {
        let r = sobolev_probe(|t| Ok(t.sqrt()), 1.5, 0.0, 1.0).unwrap();
        let exact = 0.5f64.powf(1.5) * 4.0;
        assert!(r.derivative_in_lp);
        assert!((r.estimate.unwrap() - exact).abs() < 0.05 * exact, "{r:?}");
    }
}
