//! One-sided curve germs and the reduction step `P ↦ P_(r)`.

use num::traits::Zero;

use crate::curves::{shift_signed, GenPoly, MonicCurve, SeriesGerm, Side};
use crate::error::{Error, Result};
use crate::multiplicity::{mult_at, Mult};
use crate::scalar::{format_rational, int, Rational, Scalar};

/// Monic polynomial whose signed coefficients `a_j` are one-sided germs
/// in `σ = |t - t0|`, i.e. `x^m + Σ (-1)^j a_j(σ) x^(m-j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCurve<C: Scalar = Rational> {
    pub side: Side,
    pub anchor: Rational,
    pub a: Vec<SeriesGerm<C>>,
}

impl<C: Scalar> LocalCurve<C> {
    pub fn new(side: Side, anchor: Rational, a: Vec<SeriesGerm<C>>) -> Self {
        LocalCurve { side, anchor, a }
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// Smallest truncation order among the coefficients (`None` = exact).
    pub fn order(&self) -> Option<Rational> {
        self.a.iter().filter_map(|g| g.order.clone()).min()
    }

    /// Coefficients of `P(t0)` in the signed convention.
    pub fn values_at_zero(&self) -> Vec<C> {
        self.a.iter().map(SeriesGerm::value_at_zero).collect()
    }

    pub fn to_numeric(&self) -> LocalCurve<C::Numeric> {
        LocalCurve::new(self.side, self.anchor.clone(), self.a.iter().map(SeriesGerm::to_numeric).collect())
    }

    /// Drops coefficients below `tol` times the largest one per germ.
    pub fn pruned(&self, tol: f64) -> Self {
        if C::EXACT {
            return self.clone();
        }
        let a = self
            .a
            .iter()
            .map(|g| {
                let scale = g.poly.terms().iter().map(|t| t.coeff.magnitude()).fold(0.0, f64::max);
                g.prune(tol * scale.max(1.0))
            })
            .collect();
        LocalCurve::new(self.side, self.anchor.clone(), a)
    }

    /// Translates `x ↦ x + a_1/m` so that the new `a_1` vanishes. Returns
    /// the shifted curve and the translation value at `σ = 0`.
    pub fn shifted(&self) -> (Self, C) {
        let m = self.degree();
        if m == 0 || self.a[0].looks_zero() {
            return (self.clone(), C::zero());
        }
        let h = self.a[0].scale(&C::from_rational(&Rational::new(1.into(), (m as i64).into())));
        let one = SeriesGerm::one(self.side, self.anchor.clone());
        let mut a = shift_signed(&self.a, &h, &one, |x, y| x.add(y), |x, y| x.mul(y), |x, q| x.scale(&C::from_rational(q)));
        a[0] = SeriesGerm::new(self.side, self.anchor.clone(), GenPoly::zero(), self.a[0].order.clone());
        (LocalCurve::new(self.side, self.anchor.clone(), a), h.value_at_zero())
    }

    /// Whether every root of `P(t0)` is zero (all `a_j(0)` vanish).
    pub fn roots_coincide_at_zero(&self, tol: f64) -> bool {
        self.values_at_zero().iter().all(|v| v.is_negligible(tol))
    }
}

impl LocalCurve<Rational> {
    pub fn from_curve(p: &MonicCurve, t0: &Rational, side: Side, order: u32) -> Result<Self> {
        Ok(LocalCurve::new(side, t0.clone(), p.germs_at(t0, side, order)?))
    }
}

impl LocalCurve<f64> {
    pub fn from_curve_numeric(p: &MonicCurve, t0: &Rational, side: Side, order: u32) -> Result<Self> {
        Ok(LocalCurve::new(side, t0.clone(), p.germs_at_numeric(t0, side, order)?))
    }
}

/// One-sided reduction of a curve with `a_1 ≡ 0` and all roots at zero:
/// `r = v(a_2)/2` and `a_(r),k = a_k / (t - t0)^(kr)`.
///
/// Returns `(Mult::Infinite, None)` when `a_2` is identically zero.
pub fn reduce_side<C: Scalar>(c: &LocalCurve<C>, tol: f64) -> Result<(Mult, Option<LocalCurve<C>>)> {
    let c = c.pruned(tol);
    let a2 = &c.a[1];
    if a2.looks_zero() {
        if a2.is_zero() {
            return Ok((Mult::Infinite, None));
        }
        return Err(Error::NoConvergence(format!(
            "a_2 vanishes to the truncation order {}; raise the truncation",
            format_rational(a2.order.as_ref().expect("truncated"))
        )));
    }
    let v = a2.valuation().expect("nonzero").clone();
    if !v.is_integer() || v.to_integer() % 2u8 != 0.into() {
        return Err(Error::InsufficientSmoothness {
            t0: format_rational(&c.anchor),
            detail: format!("{}-sided order of a_2 is {}, not even", c.side.name(), format_rational(&v)),
        });
    }
    let r = &v / int(2);
    let r_u: u32 = r.to_integer().try_into().map_err(|_| Error::Internal("reduction order overflow".into()))?;
    let mut a = Vec::with_capacity(c.degree());
    for (j, g) in c.a.iter().enumerate() {
        let k = j as i64 + 1;
        let e = &r * int(k);
        if g.valuation_bound().is_some_and(|vb| vb < e) {
            // impossible for hyperbolic curves
            return Err(Error::InsufficientSmoothness {
                t0: format_rational(&c.anchor),
                detail: format!(
                    "a_{k} is not divisible by (t - t0)^{} on the {} side; the curve is not hyperbolic near t0",
                    format_rational(&e),
                    c.side.name()
                ),
            });
        }
        let mut q = g.shift(&-&e);
        if c.side == Side::Left && (r_u as i64 * k) % 2 == 1 {
            q = q.neg();
        }
        a.push(q);
    }
    Ok((Mult::Finite(r_u), Some(LocalCurve::new(c.side, c.anchor.clone(), a))))
}

/// Result of the two-sided reduction step.
#[derive(Clone, Debug, PartialEq)]
pub struct ReduceOutcome {
    pub r: Mult,
    /// `P_(r)` per side (`None` when `r` is infinite).
    pub left: Option<LocalCurve>,
    pub right: Option<LocalCurve>,
    /// Coefficients of `P_(r)(t0)`.
    pub at_t0: Vec<Rational>,
}

/// Two-sided reduction at `t0`. The curve is first shifted so that
/// `a_1 ≡ 0`; all roots of `P(t0)` must then vanish. `r` is half the
/// multiplicity of `ā_2`; the quotient germs must agree at `t0` and
/// `a_(r),2(t0)` must be nonzero.
pub fn reduce_once(p: &MonicCurve, t0: &Rational, order: u32) -> Result<ReduceOutcome> {
    if p.degree() < 2 {
        return Err(Error::Invalid("reduction needs degree ≥ 2".into()));
    }
    let sh = p.shift_abscissa()?;
    let left = LocalCurve::from_curve(&sh, t0, Side::Left, order)?;
    let right = LocalCurve::from_curve(&sh, t0, Side::Right, order)?;
    if !left.roots_coincide_at_zero(0.0) || !right.roots_coincide_at_zero(0.0) {
        return Err(Error::Invalid(format!("the roots of P({}) do not all coincide", format_rational(t0))));
    }
    let m2 = mult_at(sh.a(2), t0)?.value;
    let r = match m2 {
        Mult::Infinite => return Ok(ReduceOutcome { r: Mult::Infinite, left: None, right: None, at_t0: vec![Rational::zero(); p.degree()] }),
        Mult::Finite(m) if m % 2 == 1 => {
            return Err(Error::InsufficientSmoothness {
                t0: format_rational(t0),
                detail: format!("multiplicity of the shifted a_2 is {m}, which is odd"),
            })
        }
        Mult::Finite(m) => m / 2,
    };
    let divide = |c: &LocalCurve| -> Result<LocalCurve> {
        let mut a = Vec::with_capacity(c.degree());
        for (j, g) in c.a.iter().enumerate() {
            let k = j as i64 + 1;
            let e = int(r as i64 * k);
            if g.valuation_bound().is_some_and(|vb| vb < e) {
                return Err(Error::InsufficientSmoothness {
                    t0: format_rational(t0),
                    detail: format!("a_{k} is not divisible by (t - t0)^{e}; the curve is not hyperbolic near t0"),
                });
            }
            let q = g.shift(&-&e);
            a.push(if c.side == Side::Left && (r as i64 * k) % 2 == 1 { q.neg() } else { q });
        }
        Ok(LocalCurve::new(c.side, c.anchor.clone(), a))
    };
    let (ql, qr) = (divide(&left)?, divide(&right)?);
    let (vl, vr) = (ql.values_at_zero(), qr.values_at_zero());
    if vl != vr {
        return Err(Error::InsufficientSmoothness {
            t0: format_rational(t0),
            detail: format!("reduced coefficients differ across t0: left {} vs right {}", render_list(&vl), render_list(&vr)),
        });
    }
    if vr[1].is_zero() {
        return Err(Error::InsufficientSmoothness {
            t0: format_rational(t0),
            detail: format!("a_2/(t - t0)^{} vanishes at t0, so the one-sided orders of a_2 exceed {}", 2 * r, 2 * r),
        });
    }
    Ok(ReduceOutcome { r: Mult::Finite(r), left: Some(ql), right: Some(qr), at_t0: vr })
}

fn render_list<C: Scalar>(v: &[C]) -> String {
    format!("[{}]", v.iter().map(Scalar::render).collect::<Vec<_>>().join(", "))
}
