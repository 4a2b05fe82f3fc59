//! Exact multiplicities of coefficient functions, numeric order estimates
//! on geometric ladders, contact orders of root branches, and detection of
//! points where the relevant discriminant vanishes to infinite order.

use std::fmt;

use num::traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::curves::{MonicCurve, PiecewiseGermFunction, SeriesGerm, Side};
use crate::error::{Error, Result};
use crate::scalar::{floor_i64, format_rational, int, nearest_fraction, Rational, Scalar};
use crate::symmetric::discriminant_curves;

/// Germ expansion order used for multiplicity computations.
pub const GERM_ORDER: u32 = 32;

/// A non-negative integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    Finite(u32),
    Infinite,
}

impl Mult {
    pub fn finite(self) -> Option<u32> {
        match self {
            Mult::Finite(m) => Some(m),
            Mult::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Mult::Infinite
    }

    /// At least `k`.
    pub fn at_least(self, k: u64) -> bool {
        match self {
            Mult::Finite(m) => m as u64 >= k,
            Mult::Infinite => true,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(m) => write!(f, "{m}"),
            Mult::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Mult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mult::Finite(m) => s.serialize_u32(*m),
            Mult::Infinite => s.serialize_str("inf"),
        }
    }
}

pub(crate) fn ser_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_str("inf"),
    }
}

/// Leading exponent (`None` = zero germ) and coefficient on one side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideData {
    #[serde(serialize_with = "ser_opt_rational")]
    pub exponent: Option<Rational>,
    pub leading: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Multiplicity {
    pub value: Mult,
    pub left: SideData,
    pub right: SideData,
}

/// The two-sided germ rule. With `v = min(v_L, v_R)`: a fractional `v`
/// gives `floor(v)`; an integer `v` gives `v` when the one-sided limits of
/// `f/(t - t0)^v` agree and `v - 1` otherwise.
pub fn germ_rule<C: Scalar>(vl: Option<&Rational>, cl: Option<&C>, vr: Option<&Rational>, cr: Option<&C>, tol: f64) -> Mult {
    let v = match (vl, vr) {
        (None, None) => return Mult::Infinite,
        (Some(a), None) => a.clone(),
        (None, Some(b)) => b.clone(),
        (Some(a), Some(b)) => a.min(b).clone(),
    };
    let fl = floor_i64(&v).max(0) as u32;
    if !v.is_integer() {
        return Mult::Finite(fl);
    }
    let lim_r = if vr == Some(&v) { cr.cloned().unwrap_or_else(C::zero) } else { C::zero() };
    let mut lim_l = if vl == Some(&v) { cl.cloned().unwrap_or_else(C::zero) } else { C::zero() };
    if fl % 2 == 1 {
        lim_l = -lim_l;
    }
    let scale = 1.0 + lim_r.magnitude().max(lim_l.magnitude());
    if lim_r.approx_eq(&lim_l, tol * scale) {
        Mult::Finite(fl)
    } else {
        Mult::Finite(fl.saturating_sub(1))
    }
}

/// One-sided multiplicity: `v` for integer `v`, else `floor(v)`.
pub fn one_sided_mult<C: Scalar>(g: &SeriesGerm<C>) -> Mult {
    match g.valuation_bound() {
        None => Mult::Infinite,
        Some(v) => Mult::Finite(floor_i64(&v).max(0) as u32),
    }
}

/// Two-sided multiplicity from the two one-sided germs.
pub fn mult_from_germs<C: Scalar>(left: &SeriesGerm<C>, right: &SeriesGerm<C>, tol: f64) -> Mult {
    germ_rule(
        left.valuation_bound().as_ref(),
        left.leading_coeff(),
        right.valuation_bound().as_ref(),
        right.leading_coeff(),
        tol,
    )
}

fn side_data<C: Scalar>(g: &SeriesGerm<C>) -> SideData {
    SideData {
        exponent: g.valuation_bound(),
        leading: g.leading_coeff().map(Scalar::render),
    }
}

fn side_data_exact(g: &SeriesGerm<Rational>) -> SideData {
    SideData { exponent: g.valuation_bound(), leading: g.leading_coeff().map(format_rational) }
}

/// `m_{t0}(f)` for `t0` interior to the domain.
pub fn mult_at(f: &PiecewiseGermFunction, t0: &Rational) -> Result<Multiplicity> {
    match (f.germ_at(t0, Side::Left, GERM_ORDER), f.germ_at(t0, Side::Right, GERM_ORDER)) {
        (Ok(l), Ok(r)) => Ok(Multiplicity {
            value: mult_from_germs(&l, &r, 0.0),
            left: side_data_exact(&l),
            right: side_data_exact(&r),
        }),
        (Err(Error::Unsupported(_)), _) | (_, Err(Error::Unsupported(_))) => {
            let l = f.germ_at_numeric(t0, Side::Left, GERM_ORDER)?.prune(1e-13);
            let r = f.germ_at_numeric(t0, Side::Right, GERM_ORDER)?.prune(1e-13);
            Ok(Multiplicity { value: mult_from_germs(&l, &r, 1e-10), left: side_data(&l), right: side_data(&r) })
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// `m̄(f) = ⌊sup_t m_t(f) / 2⌋` over the finite multiplicities of a
/// non-negative `f` at interior points of `[lo, hi]`.
pub fn mbar_of_function(f: &PiecewiseGermFunction, lo: &Rational, hi: &Rational, cfg: &Config) -> Result<u32> {
    if !f.is_nonnegative(4096) {
        return Err(Error::Invalid("function takes negative values on the interval".into()));
    }
    let mut best = 0u32;
    for b in f.breakpoints().iter().filter(|b| *b > lo && *b < hi) {
        if let Mult::Finite(m) = mult_at(f, b)?.value {
            best = best.max(m);
        }
    }
    for z in crate::locate::zeros(f, lo, hi, cfg.tau_loc)? {
        let m = match &z.exact {
            Some(t) => mult_at(f, t)?.value,
            None => Mult::Finite(z.order),
        };
        if let Mult::Finite(m) = m {
            best = best.max(m);
        }
    }
    Ok(best / 2)
}

/// Result of fitting `|f(h)| ≈ c·h^α` on a ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrderFit {
    Finite {
        #[serde(serialize_with = "crate::multiplicity::ser_rational")]
        exponent: Rational,
        slope: f64,
        coefficient: f64,
        fit_residual: f64,
        points: usize,
    },
    /// Every sample is below the underflow guard.
    Infinite,
}

pub(crate) fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

impl OrderFit {
    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            OrderFit::Finite { exponent, .. } => Some(exponent),
            OrderFit::Infinite => None,
        }
    }
}

/// Least-squares slope of `log|f|` against `log h`, snapped to a fraction
/// with denominator at most `max_den`. Coarse levels are dropped while
/// the fit residual exceeds `tau_fit` and at least six points remain.
pub fn estimate_order(samples: &[(f64, f64)], max_den: u64, guard: f64, tau_fit: f64) -> Result<OrderFit> {
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(h, v)| *h > 0.0 && v.abs() > guard && v.is_finite())
        .map(|(h, v)| (h.ln(), v.abs().ln()))
        .collect();
    if pts.is_empty() {
        return Ok(OrderFit::Infinite);
    }
    // keep the coarse-to-fine order: largest h first
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pts.len() < 6 {
        return Err(Error::UnresolvedOrder(format!(
            "only {} ladder values above the underflow guard",
            pts.len()
        )));
    }
    loop {
        let (slope, icpt, resid) = linfit(&pts);
        if resid <= tau_fit || pts.len() <= 6 {
            if resid > tau_fit {
                return Err(Error::UnresolvedOrder(format!("log-log residual {resid:.3} (slope {slope:.4})")));
            }
            let exponent = nearest_fraction(slope, max_den.max(1));
            let a = crate::scalar::to_f64(&exponent);
            // coefficient from the finest points at the snapped exponent
            let fine = &pts[pts.len().saturating_sub(3)..];
            let mut cs: Vec<f64> = fine.iter().map(|(lh, lv)| (lv - a * lh).exp()).collect();
            cs.sort_by(|x, y| x.total_cmp(y));
            let _ = icpt;
            return Ok(OrderFit::Finite {
                exponent,
                slope,
                coefficient: cs[cs.len() / 2],
                fit_residual: resid,
                points: pts.len(),
            });
        }
        pts.remove(0);
    }
}

fn linfit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let icpt = my - slope * mx;
    let resid = pts.iter().map(|p| (p.1 - icpt - slope * p.0).abs()).fold(0.0, f64::max);
    (slope, icpt, resid)
}

/// Geometric ladder `h_k = h0·ρ^k`.
pub fn ladder(h0: f64, rho: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| h0 * rho.powi(k as i32)).collect()
}

/// Whether `a_1` vanishes identically on both sides of `t0`.
fn centred_at(p: &MonicCurve, t0: &Rational) -> Result<bool> {
    let a1 = p.a(1);
    Ok(a1.germ_at(t0, Side::Left, 1)?.is_zero() && a1.germ_at(t0, Side::Right, 1)?.is_zero())
}

/// The three equivalent conditions: `m(a_k) ≥ kr` for all `k`,
/// `m(Δ̃_k) ≥ k(k-1)r` for all `k`, and `m(a_2) ≥ 2r`.
pub fn verify_multiplicity_lemma(p: &MonicCurve, t0: &Rational, r: u32) -> Result<(bool, bool, bool)> {
    if !centred_at(p, t0)? {
        return Err(Error::Invalid("the multiplicity conditions need a_1 = 0 near t0".into()));
    }
    let n = p.degree();
    let r = r as u64;
    let mut c1 = true;
    for k in 1..=n {
        c1 &= mult_at(p.a(k), t0)?.value.at_least(k as u64 * r);
    }
    let discs = discriminant_curves(p)?;
    let mut c2 = true;
    for (i, d) in discs.iter().enumerate() {
        let k = i as u64 + 1;
        c2 &= mult_at(d, t0)?.value.at_least(k * (k - 1) * r);
    }
    let c3 = if n >= 2 { mult_at(p.a(2), t0)?.value.at_least(2 * r) } else { true };
    Ok((c1, c2, c3))
}

/// Condition (#) data at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EInfinityRecord {
    #[serde(serialize_with = "ser_rational")]
    pub t0: Rational,
    /// Largest `k` whose `Δ̃_k` germ is nonzero, per side.
    pub s_left: usize,
    pub s_right: usize,
    /// One-sided multiplicity of that germ, per side.
    pub mult_left: Mult,
    pub mult_right: Mult,
    /// Two-sided multiplicity of `Δ̃_s` for each side's `s`.
    pub two_sided_left: Mult,
    pub two_sided_right: Mult,
    pub flagged: bool,
}

/// Evaluates condition (#) at `t0` from the discriminant curves. Both
/// one-sided choices of `s` are computed; the point is flagged if either
/// gives an infinite two-sided multiplicity.
pub fn e_infinity_at(discs: &[PiecewiseGermFunction], t0: &Rational) -> Result<EInfinityRecord> {
    let mut s = [1usize; 2];
    let mut one = [Mult::Infinite; 2];
    for (idx, side) in Side::BOTH.iter().enumerate() {
        for (k, d) in discs.iter().enumerate().rev() {
            let g = d.germ_at(t0, *side, GERM_ORDER).or_else(|_| {
                d.germ_at_numeric(t0, *side, GERM_ORDER)
                    .map(|g| g.prune(1e-13).map(|c| crate::scalar::from_f64(*c)))
            })?;
            if !g.looks_zero() {
                s[idx] = k + 1;
                one[idx] = one_sided_mult(&g);
                break;
            }
        }
    }
    let two_l = mult_at(&discs[s[0] - 1], t0)?.value;
    let two_r = mult_at(&discs[s[1] - 1], t0)?.value;
    Ok(EInfinityRecord {
        t0: t0.clone(),
        s_left: s[0],
        s_right: s[1],
        mult_left: one[0],
        mult_right: one[1],
        two_sided_left: two_l,
        two_sided_right: two_r,
        flagged: two_l.is_infinite() || two_r.is_infinite(),
    })
}

/// Generic rank: largest `k` with `Δ̃_k` not identically zero.
pub fn generic_rank(discs: &[PiecewiseGermFunction]) -> usize {
    discs.iter().rposition(|d| !d.is_zero()).map_or(1, |i| i + 1)
}

/// Points of `[lo, hi]`'s interior in `E^(∞)`: candidates are breakpoints
/// and exact zeros of the generic-rank discriminant. (Irrational zeros lie
/// inside polynomial pieces, where germs are analytic and nonzero.)
pub fn detect_e_infinity(p: &MonicCurve, lo: &Rational, hi: &Rational, cfg: &Config) -> Result<Vec<EInfinityRecord>> {
    let discs = discriminant_curves(p)?;
    let s = generic_rank(&discs);
    let mut cands: Vec<Rational> = p.breakpoints().into_iter().filter(|b| b > lo && b < hi).collect();
    for z in crate::locate::zeros(&discs[s - 1], lo, hi, cfg.tau_loc)? {
        if let Some(t) = z.exact {
            cands.push(t);
        }
    }
    cands.sort();
    cands.dedup();
    let mut out = Vec::new();
    for t in cands {
        let rec = e_infinity_at(&discs, &t)?;
        if rec.flagged {
            out.push(rec);
        }
    }
    Ok(out)
}

/// Pairwise contact order of two root functions given exactly.
pub fn contact_exact(a: &PiecewiseGermFunction, b: &PiecewiseGermFunction, t0: &Rational) -> Result<Mult> {
    Ok(mult_at(&a.sub(b)?, t0)?.value)
}

/// Maximum of the finite entries (0 if none).
pub fn max_finite(orders: impl IntoIterator<Item = Mult>) -> u32 {
    orders.into_iter().filter_map(Mult::finite).max().unwrap_or(0)
}

/// Pairwise contact orders and `m̄_{t0}` from exactly known root functions.
pub fn contact_profile_exact(roots: &[PiecewiseGermFunction], t0: &Rational) -> Result<ContactProfile> {
    let n = roots.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(PairContact {
                i,
                j,
                order: contact_exact(&roots[i], &roots[j], t0)?,
                left: None,
                right: None,
            });
        }
    }
    let mbar = max_finite(pairs.iter().map(|p| p.order));
    Ok(ContactProfile { t0: t0.clone(), pairs, mbar })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairContact {
    pub i: usize,
    pub j: usize,
    pub order: Mult,
    pub left: Option<OrderFit>,
    pub right: Option<OrderFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactProfile {
    #[serde(serialize_with = "ser_rational")]
    pub t0: Rational,
    pub pairs: Vec<PairContact>,
    pub mbar: u32,
}

/// Two-sided integerization of fitted pair orders. Signed coefficients on
/// each side are compared as in [`germ_rule`], with relative tolerance
/// `rel` on magnitudes.
pub fn integerize_fits(left: &OrderFit, cl_signed: f64, right: &OrderFit, cr_signed: f64, rel: f64) -> Mult {
    let vl = left.exponent();
    let vr = right.exponent();
    let cl = vl.map(|_| cl_signed);
    let cr = vr.map(|_| cr_signed);
    let scale = cl.unwrap_or(0.0).abs().max(cr.unwrap_or(0.0).abs());
    germ_rule(vl, cl.as_ref(), vr, cr.as_ref(), rel * scale.max(f64::MIN_POSITIVE) / (1.0 + scale))
}

/// `(t - t0)^m` as a piecewise function on `domain`.
pub fn power_function(domain: (Rational, Rational), t0: &Rational, m: u32) -> PiecewiseGermFunction {
    let p = crate::curves::GenPoly::monomial(int(1), int(m as i64));
    let piece = crate::curves::Piece::new(t0.clone(), crate::curves::Orientation::Forward, p);
    PiecewiseGermFunction::new(domain, vec![], vec![piece]).expect("polynomial piece")
}

/// Sign helper used when pairing fitted coefficients.
pub fn signum(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl ContactProfile {
    pub fn is_trivial(&self) -> bool {
        self.pairs.iter().all(|p| p.order.is_infinite() || p.order == Mult::Finite(0))
    }
}

/// Zero helper for optional rationals.
pub fn is_zero_opt(q: &Option<Rational>) -> bool {
    q.as_ref().is_none_or(|q| q.is_zero())
}
