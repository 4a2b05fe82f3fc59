//! Critical points of a curve: coefficient breakpoints and isolated zeros
//! of the generic-rank discriminant, with the per-side data of condition
//! (#) at each.

use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::curves::MonicCurve;
use crate::error::Result;
use crate::locate::zeros;
use crate::multiplicity::{e_infinity_at, generic_rank, Mult};
use crate::scalar::{format_rational, int, to_f64, Rational};
use crate::symmetric::discriminant_curves;

/// Width below which irrational zeros are refined before local analysis.
pub const FINE_WIDTH: f64 = 7.888609052210118e-31; // 2^-100

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalSource {
    Breakpoint,
    DiscriminantZero,
    BreakpointAndZero,
    Declared,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    /// Exact location, when rational.
    pub exact: Option<Rational>,
    /// Certified enclosure (degenerate when exact).
    pub lo: Rational,
    pub hi: Rational,
    /// Rational proxy: the exact point, or the midpoint of a `2^-100`
    /// enclosure.
    pub proxy: Rational,
    pub source: CriticalSource,
    pub s_left: usize,
    pub s_right: usize,
    /// One-sided multiplicities of `Δ̃_s`.
    pub mult_left: Mult,
    pub mult_right: Mult,
    pub e_infinity: bool,
    pub certified: bool,
}

impl CriticalPoint {
    pub fn label(&self) -> String {
        match &self.exact {
            Some(t) => format_rational(t),
            None => format!("{:.12}", to_f64(&self.proxy)),
        }
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.proxy)
    }
}

impl Serialize for CriticalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CriticalPoint", 10)?;
        st.serialize_field("t", &self.exact.as_ref().map(format_rational))?;
        st.serialize_field("approx", &to_f64(&self.proxy))?;
        st.serialize_field("enclosure", &[to_f64(&self.lo), to_f64(&self.hi)])?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("s_left", &self.s_left)?;
        st.serialize_field("s_right", &self.s_right)?;
        st.serialize_field("mult_left", &self.mult_left)?;
        st.serialize_field("mult_right", &self.mult_right)?;
        st.serialize_field("e_infinity", &self.e_infinity)?;
        st.serialize_field("certified", &self.certified)?;
        st.end()
    }
}

/// Breakpoints in `(lo, hi)` and zeros of `Δ̃_s` there, sorted, plus any
/// `declared` points.
pub fn locate_critical_points(
    p: &MonicCurve,
    lo: &Rational,
    hi: &Rational,
    declared: &[Rational],
    cfg: &Config,
) -> Result<Vec<CriticalPoint>> {
    let discs = discriminant_curves(p)?;
    let s = generic_rank(&discs);
    let mut out: Vec<CriticalPoint> = Vec::new();
    let push_exact = |t: Rational, src: CriticalSource, out: &mut Vec<CriticalPoint>| -> Result<()> {
        if let Some(existing) = out.iter_mut().find(|c| c.exact.as_ref() == Some(&t)) {
            if existing.source != src {
                existing.source = match (existing.source, src) {
                    (CriticalSource::Declared, x) | (x, CriticalSource::Declared) => x,
                    _ => CriticalSource::BreakpointAndZero,
                };
            }
            return Ok(());
        }
        let rec = e_infinity_at(&discs, &t)?;
        let vanishes = |m: &Mult| !matches!(m, Mult::Finite(0));
        let src = if src == CriticalSource::Breakpoint && (vanishes(&rec.mult_left) || vanishes(&rec.mult_right)) {
            CriticalSource::BreakpointAndZero
        } else {
            src
        };
        out.push(CriticalPoint {
            exact: Some(t.clone()),
            lo: t.clone(),
            hi: t.clone(),
            proxy: t,
            source: src,
            s_left: rec.s_left,
            s_right: rec.s_right,
            mult_left: rec.mult_left,
            mult_right: rec.mult_right,
            e_infinity: rec.flagged,
            certified: true,
        });
        Ok(())
    };
    for b in p.breakpoints().into_iter().filter(|b| b > lo && b < hi) {
        push_exact(b, CriticalSource::Breakpoint, &mut out)?;
    }
    let fine = zeros(&discs[s - 1], lo, hi, FINE_WIDTH)?;
    for z in fine {
        match z.exact.clone() {
            Some(t) => push_exact(t, CriticalSource::DiscriminantZero, &mut out)?,
            None => {
                let proxy = z.point();
                // report an enclosure of width ≤ tau_loc around the fine one
                let pad = crate::scalar::from_f64(cfg.tau_loc / 4.0);
                out.push(CriticalPoint {
                    exact: None,
                    lo: &z.lo - &pad,
                    hi: &z.hi + &pad,
                    proxy,
                    source: CriticalSource::DiscriminantZero,
                    s_left: s,
                    s_right: s,
                    mult_left: Mult::Finite(z.order),
                    mult_right: Mult::Finite(z.order),
                    e_infinity: false,
                    certified: z.certified,
                });
            }
        }
    }
    for d in declared.iter().filter(|d| *d > lo && *d < hi) {
        push_exact(d.clone(), CriticalSource::Declared, &mut out)?;
    }
    out.sort_by(|a, b| a.proxy.cmp(&b.proxy));
    Ok(out)
}

/// The default open analysis interval: the curve's domain.
pub fn domain_interval(p: &MonicCurve) -> (Rational, Rational) {
    p.domain().clone()
}

/// Midpoints between consecutive critical points and the interval ends.
pub fn segment_midpoints(lo: &Rational, hi: &Rational, crit: &[CriticalPoint]) -> Vec<Rational> {
    let mut cuts = vec![lo.clone()];
    cuts.extend(crit.iter().map(|c| c.proxy.clone()));
    cuts.push(hi.clone());
    cuts.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GenPoly, Mode, PiecewiseGermFunction, Side};
    use crate::scalar::rat;

    fn dom() -> (Rational, Rational) {
        (int(-1), int(1))
    }

    fn poly(c: &[i64]) -> PiecewiseGermFunction {
        PiecewiseGermFunction::from_poly(dom(), GenPoly::from_coeffs(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())).unwrap()
    }

    #[test]
    fn square_difference() {
        let p = MonicCurve::new(vec![poly(&[0]), poly(&[0, 0, -1])], Mode::Hyperbolic).unwrap();
        let c = locate_critical_points(&p, &int(-1), &int(1), &[], &Config::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].exact, Some(int(0)));
        assert_eq!(c[0].source, CriticalSource::DiscriminantZero);
    }

    #[test]
    fn pp_breakpoint_and_zero() {
        let f = PiecewiseGermFunction::one_sided_power(dom(), int(0), Side::Right, int(1), int(6)).unwrap();
        let a2 = f.scale(&int(2)).sub(&poly(&[0, 0, 1])).unwrap();
        let p = MonicCurve::new(vec![f.clone(), a2, f], Mode::Hyperbolic).unwrap();
        let c = locate_critical_points(&p, &rat(-1, 2), &rat(1, 2), &[], &Config::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].source, CriticalSource::BreakpointAndZero);
        assert!(!c[0].e_infinity);
    }

    #[test]
    fn constant_and_irrational() {
        let p = MonicCurve::new(vec![poly(&[0]), poly(&[-1])], Mode::Hyperbolic).unwrap();
        assert!(locate_critical_points(&p, &int(-1), &int(1), &[], &Config::default()).unwrap().is_empty());
        // x^2 - (t^2 - 1/2)^2 has double roots at ±1/√2
        let q = MonicCurve::new(vec![poly(&[0]), poly(&[0, 0, -1]).mul(&poly(&[0, 0, 1])).unwrap()
            .add(&poly(&[0, 0, 1])).unwrap().add(&PiecewiseGermFunction::constant(dom(), rat(-1, 4))).unwrap()], Mode::Hyperbolic).unwrap();
        let c = locate_critical_points(&q, &int(-1), &int(1), &[], &Config::default()).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[1].exact.is_none());
        assert!((c[1].approx() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(to_f64(&(&c[1].hi - &c[1].lo)) < Config::default().tau_loc);
        assert_eq!(c[1].mult_right, Mult::Finite(2));
    }
}
