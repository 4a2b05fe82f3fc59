//! Desingularization exponents for curves with complex roots: the
//! Newton-polygon recursion that finds `N` such that every root branch of
//! `s ↦ P(t0 ± s^N)` has integer-exponent germs.

use num::integer::Integer;
use num::traits::Zero;
use serde::Serialize;

use crate::config::Config;
use crate::curves::{MonicCurve, SeriesGerm, Side};
use crate::error::{Error, Result};
use crate::multiplicity::ser_rational;
use crate::reduction::{split_clusters, Factors, LocalCurve};
use crate::scalar::{format_rational, int, Rational, Scalar};

const RETRIES: u32 = 3;

/// One level of the recursion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeData {
    pub depth: usize,
    /// `min_k m(a_k)/k` after the shift.
    #[serde(serialize_with = "ser_rational")]
    pub r_star: Rational,
    /// Index achieving the minimum.
    pub k: usize,
    /// Denominator of `r_star`, the substitution exponent at this level.
    pub n_level: u64,
}

/// Result for one side of one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideDesing {
    pub side: Side,
    pub n: u64,
    pub levels: Vec<SlopeData>,
    /// All roots coincide identically (every shifted coefficient is zero).
    pub identically_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesingReport {
    pub t0: String,
    pub n_left: u64,
    pub n_right: u64,
    pub left: SideDesing,
    pub right: SideDesing,
}

/// Slope of the shifted local curve, or `None` when every coefficient
/// from the second on is identically zero.
fn slope<C: Scalar>(c: &LocalCurve<C>, depth: usize) -> Result<Option<SlopeData>> {
    let mut best: Option<(Rational, usize)> = None;
    let mut hidden: Option<Rational> = None;
    for (i, g) in c.a.iter().enumerate().skip(1) {
        let k = i + 1;
        let kq = int(k as i64);
        match g.valuation() {
            Some(v) => {
                let r = v / &kq;
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, k));
                }
            }
            None => {
                if let Some(o) = &g.order {
                    let r = o / &kq;
                    if hidden.as_ref().is_none_or(|h| r < *h) {
                        hidden = Some(r);
                    }
                }
            }
        }
    }
    match (best, hidden) {
        (None, None) => Ok(None),
        (None, Some(_)) => Err(Error::NoConvergence("all coefficients vanish to the truncation order".into())),
        (Some((r, _)), Some(h)) if h <= r => Err(Error::NoConvergence("slope not resolved at the truncation order".into())),
        (Some((r, k)), _) => {
            let n_level: u64 = r.denom().try_into().map_err(|_| Error::Internal("slope denominator overflow".into()))?;
            Ok(Some(SlopeData { depth, r_star: r, k, n_level }))
        }
    }
}

fn substitute<C: Scalar>(g: &SeriesGerm<C>, n: u32) -> SeriesGerm<C> {
    let nq = int(n as i64);
    SeriesGerm { poly: g.poly.compose_power(n), order: g.order.as_ref().map(|o| o * &nq), ..g.clone() }
}

struct Walk<'a> {
    cfg: &'a Config,
    cap: usize,
    /// Lifting order at every level, in that level's variable.
    order: u32,
    tol: f64,
    levels: Vec<SlopeData>,
    identically_equal: bool,
}

impl Walk<'_> {
    fn go<C: Scalar>(&mut self, c: &LocalCurve<C>, depth: usize) -> Result<u64> {
        let c = if C::EXACT { c.clone() } else { c.pruned(self.tol) };
        let d_shift = c.a.first().map_or(1, |g| g.poly.exponent_denominator());
        if c.degree() <= 1 {
            return Ok(d_shift);
        }
        if depth >= self.cap {
            return Err(Error::DepthExceeded(self.cap));
        }
        let (sh, _) = c.shifted();
        let sh = if C::EXACT { sh } else { sh.pruned(self.tol) };
        let Some(s) = slope(&sh, depth)? else {
            if depth == 0 {
                self.identically_equal = true;
            }
            return Ok(d_shift);
        };
        let nl = s.n_level;
        let reduced = if s.r_star.is_zero() {
            sh
        } else {
            let a = sh
                .a
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let e = &s.r_star * int(((i + 1) as u64 * nl) as i64);
                    substitute(g, nl as u32).shift(&-e)
                })
                .collect();
            LocalCurve::new(sh.side, sh.anchor.clone(), a)
        };
        self.levels.push(s);
        let budget = int(self.order as i64);
        let trunc = reduced.order().map_or(budget.clone(), |o| o.min(budget));
        let children = match split_clusters(&reduced, &trunc, self.cfg)? {
            Factors::Exact(v) => v.iter().map(|cl| self.go(&cl.factor, depth + 1)).collect::<Result<Vec<_>>>()?,
            Factors::Numeric(v) => v.iter().map(|cl| self.go(&cl.factor, depth + 1)).collect::<Result<Vec<_>>>()?,
        };
        let below = children.into_iter().fold(1u64, |a, b| a.lcm(&b));
        Ok(d_shift.lcm(&(nl * below)))
    }
}

fn default_order(n: usize) -> u32 {
    (4 * n as u32).max(12)
}

/// `N` for one side of `t0`, with the slope of each level.
pub fn desing_exponent<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, cfg: &Config) -> Result<SideDesing> {
    let n = p.degree();
    let mut order = cfg.truncation.unwrap_or_else(|| default_order(n));
    let mut last = None;
    for _ in 0..=RETRIES {
        let mut w = Walk { cfg, cap: n + 1, order, tol: cfg.tau_lift, levels: Vec::new(), identically_equal: false };
        let res = match p.germs_at(t0, side, order) {
            Ok(g) => w.go(&LocalCurve::new(side, t0.clone(), g), 0),
            Err(Error::Unsupported(_)) => {
                let g = p.germs_at_numeric(t0, side, order)?;
                w.go(&LocalCurve::new(side, t0.clone(), g), 0)
            }
            Err(e) => return Err(e),
        };
        match res {
            Ok(n) => return Ok(SideDesing { side, n, levels: w.levels, identically_equal: w.identically_equal }),
            Err(e @ (Error::NoConvergence(_) | Error::LiftDidNotConverge(_))) => {
                last = Some(e);
                order *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// First-level slope at `t0` on `side` (`None` when all roots coincide
/// identically).
pub fn newton_slope<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, cfg: &Config) -> Result<Option<SlopeData>> {
    let order = cfg.truncation.unwrap_or_else(|| default_order(p.degree()));
    let g = p.germs_at(t0, side, order)?;
    let (sh, _) = LocalCurve::new(side, t0.clone(), g).shifted();
    slope(&sh, 0)
}

/// Both sides of `t0`.
pub fn desing_at<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, cfg: &Config) -> Result<DesingReport> {
    let left = desing_exponent(p, t0, Side::Left, cfg)?;
    let right = desing_exponent(p, t0, Side::Right, cfg)?;
    Ok(DesingReport { t0: format_rational(t0), n_left: left.n, n_right: right.n, left, right })
}

/// `s ↦ P(t0 + side·s^N)`.
pub fn compose_power<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, n: u32) -> Result<MonicCurve<S>> {
    if n == 0 {
        return Err(Error::Invalid("substitution exponent must be positive".into()));
    }
    p.compose_power(t0, side, n)
}

/// The composed curve needs no further substitution: every level slope
/// is an integer.
pub fn integrality_holds<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, n: u32, cfg: &Config) -> Result<bool> {
    let q = compose_power(p, t0, side, n)?;
    let d = desing_exponent(&q, &Rational::zero(), Side::Right, cfg)?;
    Ok(d.n == 1 && d.levels.iter().all(|l| l.r_star.is_integer()))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// For each prime `q | N`, substituting with `N/q` leaves a non-integer
/// first-level slope.
pub fn minimality_holds<S: Scalar>(p: &MonicCurve<S>, t0: &Rational, side: Side, n: u64, cfg: &Config) -> Result<bool> {
    for q in prime_factors(n) {
        let c = compose_power(p, t0, side, (n / q) as u32)?;
        match newton_slope(&c, &Rational::zero(), Side::Right, cfg)? {
            Some(s) if s.r_star.is_integer() => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GenPoly, Mode, PiecewiseGermFunction};
    use crate::scalar::{rat, CRational};
    use num::Complex;

    fn dom() -> (Rational, Rational) {
        (int(-1), int(1))
    }

    fn cpoly(c: &[i64]) -> PiecewiseGermFunction<CRational> {
        let cs: Vec<CRational> = c.iter().map(|&x| Complex::new(int(x), Rational::zero())).collect();
        PiecewiseGermFunction::from_poly(dom(), GenPoly::from_coeffs(&cs)).unwrap()
    }

    /// `z^n - t` in the signed convention.
    fn zn_minus_t(n: usize) -> MonicCurve<CRational> {
        let mut a: Vec<PiecewiseGermFunction<CRational>> = (1..n).map(|_| cpoly(&[0])).collect();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        a.push(cpoly(&[0, sign]));
        MonicCurve::new(a, Mode::Complex).unwrap()
    }

    #[test]
    fn slopes() {
        let cfg = Config::default();
        let s = newton_slope(&zn_minus_t(2), &int(0), Side::Right, &cfg).unwrap().unwrap();
        assert_eq!(s.r_star, rat(1, 2));
        let s = newton_slope(&zn_minus_t(3), &int(0), Side::Right, &cfg).unwrap().unwrap();
        assert_eq!(s.r_star, rat(1, 3));
        let sq = MonicCurve::new(vec![cpoly(&[0]), cpoly(&[0, 0, -1])], Mode::Complex).unwrap();
        assert_eq!(newton_slope(&sq, &int(0), Side::Right, &cfg).unwrap().unwrap().r_star, int(1));
    }

    #[test]
    fn exponents() {
        let cfg = Config::default();
        for n in 2..=6 {
            let p = zn_minus_t(n);
            let d = desing_exponent(&p, &int(0), Side::Right, &cfg).unwrap();
            assert_eq!(d.n, n as u64);
            assert!(integrality_holds(&p, &int(0), Side::Right, n as u32, &cfg).unwrap());
            assert!(minimality_holds(&p, &int(0), Side::Right, n as u64, &cfg).unwrap());
        }
        let sq = MonicCurve::new(vec![cpoly(&[0]), cpoly(&[0, 0, -1])], Mode::Complex).unwrap();
        assert_eq!(desing_exponent(&sq, &int(0), Side::Right, &cfg).unwrap().n, 1);
        // z^4 - t^2
        let z4 = MonicCurve::new(vec![cpoly(&[0]), cpoly(&[0]), cpoly(&[0]), cpoly(&[0, 0, -1])], Mode::Complex).unwrap();
        assert_eq!(desing_exponent(&z4, &int(0), Side::Right, &cfg).unwrap().n, 2);
    }

    #[test]
    fn nested_denominators() {
        // (z^2 - t)^2 - 4 t^(5/2) on t ≥ 0 has roots ±t^(1/2)(1 ± 2t^(1/4))^(1/2)
        let cfg = Config::default();
        let real = |c: &[i64]| PiecewiseGermFunction::from_poly(dom(), GenPoly::from_coeffs(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())).unwrap();
        let f = PiecewiseGermFunction::one_sided_power(dom(), int(0), Side::Right, int(4), rat(5, 2)).unwrap();
        let a = vec![real(&[0]), real(&[0, -2]), real(&[0]), real(&[0, 0, 1]).sub(&f).unwrap()];
        let to_c = |q: &Rational| Complex::new(q.clone(), Rational::zero());
        let p = MonicCurve::new(a.iter().map(|g| g.map(to_c)).collect(), Mode::Complex).unwrap();
        let d = desing_exponent(&p, &int(0), Side::Right, &cfg).unwrap();
        assert_eq!(d.n, 4);
        assert_eq!(d.levels[0].r_star, rat(1, 2));
    }

    #[test]
    fn identical_roots() {
        let cfg = Config::default();
        let p = MonicCurve::new(vec![cpoly(&[0, 2]), cpoly(&[0, 0, 1])], Mode::Complex).unwrap();
        let d = desing_exponent(&p, &int(0), Side::Left, &cfg).unwrap();
        assert!(d.identically_equal);
        assert_eq!(d.n, 1);
    }

    #[test]
    fn composed_branches_are_smooth() {
        let cfg = Config::default();
        for n in [2usize, 3, 5] {
            let q = compose_power(&zn_minus_t(n), &int(0), Side::Right, n as u32).unwrap();
            let m = crate::arrangement::local_matching(&q, &int(0), 1.0, 6, &cfg).unwrap();
            assert!(m.probes.iter().all(|b| b.q_hat == Some(6)), "n = {n}: {:?}", m.q_hats());
        }
    }
}
