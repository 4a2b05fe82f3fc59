use serde::{Deserialize, Serialize};

use super::function::{Evaluation, PiecewiseGermFunction};
use super::poly::GenPoly;
use super::series::{SeriesGerm, Side};
use crate::error::{Error, Result};
use crate::scalar::{binomial, int, Rational, Scalar};

/// Whether roots are expected real (hyperbolic) or arbitrary complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Hyperbolic,
    Complex,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Hyperbolic => "hyperbolic",
            Mode::Complex => "complex",
        }
    }
}

/// `P(t)(x) = x^n + Σ_j (-1)^j a_j(t) x^(n-j)`; `a_j` are the elementary
/// symmetric functions of the roots.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicCurve<S = Rational> {
    coeffs: Vec<PiecewiseGermFunction<S>>,
    mode: Mode,
}

/// Coefficients `(1, c_1, .., c_n)` of `x^n + c_1 x^(n-1) + .. + c_n` from
/// the signed `a_j`.
pub fn standard_from_signed<S: Scalar>(a: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.push(S::one());
    for (j, aj) in a.iter().enumerate() {
        out.push(if j % 2 == 0 { -aj.clone() } else { aj.clone() });
    }
    out
}

/// Substitutes `x ↦ x + shift` in the signed convention: returns the `a_j`
/// of `P(x + shift)` given the `a_j` of `P`. Works for any coefficient ring
/// built from `mul`, `add` and rational scaling.
pub fn shift_signed<T: Clone>(
    a: &[T],
    shift: &T,
    one: &T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    scale: impl Fn(&T, &Rational) -> T,
) -> Vec<T> {
    // standard coefficients c_k of x^(n-k), c_0 = 1
    let n = a.len();
    let mut c: Vec<T> = Vec::with_capacity(n + 1);
    c.push(one.clone());
    for (j, aj) in a.iter().enumerate() {
        c.push(if j % 2 == 0 { scale(aj, &int(-1)) } else { aj.clone() });
    }
    // P(x + h) = Σ_k c_k (x + h)^(n-k); new coefficient of x^(n-m)
    let mut powers = vec![one.clone()];
    for i in 1..=n {
        let next = mul(&powers[i - 1], shift);
        powers.push(next);
    }
    let mut out = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc: Option<T> = None;
        for k in 0..=m {
            // c_k (x+h)^(n-k) contributes binom(n-k, m-k) h^(m-k) to x^(n-m)
            let b = binomial(&int((n - k) as i64), (m - k) as u32);
            let term = scale(&mul(&c[k], &powers[m - k]), &b);
            acc = Some(match acc {
                None => term,
                Some(v) => add(&v, &term),
            });
        }
        let cm = acc.expect("nonempty sum");
        out.push(if m % 2 == 1 { scale(&cm, &int(-1)) } else { cm });
    }
    out
}

impl<S: Scalar> MonicCurve<S> {
    /// Checks that domains coincide and that the coefficients can be
    /// combined (fractional pieces share frames).
    pub fn new(coeffs: Vec<PiecewiseGermFunction<S>>, mode: Mode) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("degree must be positive".into()));
        }
        let refs: Vec<&PiecewiseGermFunction<S>> = coeffs.iter().collect();
        PiecewiseGermFunction::align(&refs)?;
        Ok(MonicCurve { coeffs, mode })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn coeffs(&self) -> &[PiecewiseGermFunction<S>] {
        &self.coeffs
    }

    /// `a_j`, 1-based.
    pub fn a(&self, j: usize) -> &PiecewiseGermFunction<S> {
        &self.coeffs[j - 1]
    }

    pub fn domain(&self) -> &(Rational, Rational) {
        self.coeffs[0].domain()
    }

    /// Union of coefficient breakpoints.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut b: Vec<Rational> = self.coeffs.iter().flat_map(|c| c.breakpoints().iter().cloned()).collect();
        b.sort();
        b.dedup();
        b
    }

    /// Exact coefficient values `a_j(t)` when available.
    pub fn coeffs_exact(&self, t: &Rational) -> Result<Option<Vec<S>>> {
        let mut out = Vec::with_capacity(self.degree());
        for c in &self.coeffs {
            match c.evaluate(t)? {
                Evaluation::Exact(v) => out.push(v),
                Evaluation::Numeric(_) => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn coeffs_numeric(&self, t: f64) -> Result<Vec<S::Numeric>> {
        self.coeffs.iter().map(|c| c.evaluate_f64(t)).collect()
    }

    pub fn germs_at(&self, t0: &Rational, side: Side, order: u32) -> Result<Vec<SeriesGerm<S>>> {
        self.coeffs.iter().map(|c| c.germ_at(t0, side, order)).collect()
    }

    pub fn germs_at_numeric(&self, t0: &Rational, side: Side, order: u32) -> Result<Vec<SeriesGerm<S::Numeric>>> {
        self.coeffs.iter().map(|c| c.germ_at_numeric(t0, side, order)).collect()
    }

    /// The curve with `x ↦ x + a_1/n`, so that the roots are translated by
    /// `-a_1/n` and the new `a_1` vanishes identically.
    pub fn shift_abscissa(&self) -> Result<Self> {
        let n = self.degree();
        if self.coeffs[0].is_zero() {
            return Ok(self.clone());
        }
        let refs: Vec<&PiecewiseGermFunction<S>> = self.coeffs.iter().collect();
        let al = PiecewiseGermFunction::align(&refs)?;
        let mut per_interval: Vec<Vec<GenPoly<S>>> = Vec::with_capacity(al.polys.len());
        let inv_n = Rational::new(1.into(), (n as i64).into());
        for row in &al.polys {
            let h = row[0].scale(&S::from_rational(&inv_n));
            per_interval.push(shift_signed(
                row,
                &h,
                &GenPoly::constant(S::one()),
                |x, y| x.add(y),
                |x, y| x.mul(y),
                |x, q| x.scale(&S::from_rational(q)),
            ));
        }
        let mut coeffs = Vec::with_capacity(n);
        for j in 0..n {
            let polys = per_interval.iter().map(|r| r[j].clone()).collect();
            coeffs.push(PiecewiseGermFunction::from_aligned(
                self.domain().clone(),
                &al.breakpoints,
                &al.frames,
                polys,
            )?);
        }
        MonicCurve::new(coeffs, self.mode)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> MonicCurve<T> {
        MonicCurve { coeffs: self.coeffs.iter().map(|c| c.map(f)).collect(), mode: self.mode }
    }

    /// `s ↦ P(t0 + side·s^n)` on `[-δ, δ]`.
    pub fn compose_power(&self, t0: &Rational, side: Side, n: u32) -> Result<Self> {
        let delta = self
            .coeffs
            .iter()
            .map(|c| c.compose_radius(t0, n))
            .min()
            .expect("nonempty");
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.compose_power(t0, side, n, &delta))
            .collect::<Result<Vec<_>>>()?;
        MonicCurve::new(coeffs, self.mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn dom() -> (Rational, Rational) {
        (int(-1), int(1))
    }

    fn poly_fn(c: &[Rational]) -> PiecewiseGermFunction {
        PiecewiseGermFunction::from_poly(dom(), GenPoly::from_coeffs(c)).unwrap()
    }

    #[test]
    fn shift_perfect_square() {
        // x^2 - 2t x + t^2: a1 = 2t, a2 = t^2
        let p = MonicCurve::new(
            vec![poly_fn(&[int(0), int(2)]), poly_fn(&[int(0), int(0), int(1)])],
            Mode::Hyperbolic,
        )
        .unwrap();
        let q = p.shift_abscissa().unwrap();
        assert!(q.a(1).is_zero());
        assert!(q.a(2).is_zero());
    }

    #[test]
    fn shift_pp() {
        let f = PiecewiseGermFunction::one_sided_power(dom(), int(0), Side::Right, int(1), int(6)).unwrap();
        let t2 = poly_fn(&[int(0), int(0), int(1)]);
        let a2 = f.scale(&int(2)).sub(&t2).unwrap();
        let p = MonicCurve::new(vec![f.clone(), a2.clone(), f.clone()], Mode::Hyperbolic).unwrap();
        let q = p.shift_abscissa().unwrap();
        assert!(q.a(1).is_zero());
        let expect = a2.sub(&f.pow(2).unwrap().scale(&rat(1, 3))).unwrap();
        for t in [rat(-1, 2), rat(1, 3), rat(3, 4)] {
            assert_eq!(q.a(2).exact_at(&t), expect.exact_at(&t));
        }
        // centered curve is returned unchanged
        assert_eq!(q.shift_abscissa().unwrap(), q);
    }

    #[test]
    fn shift_signed_scalars() {
        // roots 1, 2, 3 shifted by h = 2 become -1, 0, 1: a = (0, -1, 0)
        let a = [int(6), int(11), int(6)];
        let out = shift_signed(&a, &int(2), &int(1), |x, y| x + y, |x, y| x * y, |x, q| x * q);
        assert_eq!(out, vec![int(0), int(-1), int(0)]);
    }

    #[test]
    fn rejects_mismatched_domains() {
        let other = PiecewiseGermFunction::constant((int(0), int(1)), int(1));
        assert!(MonicCurve::new(vec![poly_fn(&[int(1)]), other], Mode::Hyperbolic).is_err());
    }
}
