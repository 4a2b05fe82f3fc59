//! Roots refined far beyond binary64 by Newton steps in wide fixed-point
//! arithmetic, for curves whose coefficients are exact at the sample.
//! Multiple roots are separated first with an exact squarefree
//! decomposition so every refined root is simple.

use num::complex::Complex64;
use num::traits::{One, ToPrimitive, Zero};
use num::{BigInt, Complex, Integer};

use crate::curves::curve::standard_from_signed;
use crate::curves::MonicCurve;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, from_f64, to_f64, CRational, Rational, Scalar};
use crate::upoly::UPoly;

use super::roots::solve_monic;

/// Relative accuracy of refined roots, in bits.
pub const PRECISE_BITS: i32 = 110;

/// Relative accuracy of refined roots as a float.
pub fn precise_noise() -> f64 {
    2f64.powi(-PRECISE_BITS + 4)
}

/// Roots of `P(t)` to about `2^-110` relative accuracy, or `None` when the
/// coefficients are not exact at `t`.
pub fn precise_roots<S: Scalar>(p: &MonicCurve<S>, t: &Rational) -> Result<Option<Vec<CRational>>> {
    let Some(a) = p.coeffs_exact(t)? else {
        return Ok(None);
    };
    let Some(desc) = standard_from_signed(&a).iter().map(|c| c.to_crational()).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let factors: Vec<(Vec<CRational>, u32)> = if desc.iter().all(|c| c.im.is_zero()) {
        let asc: Vec<Rational> = desc.iter().rev().map(|c| c.re.clone()).collect();
        UPoly::new(asc)
            .squarefree_decomposition()
            .into_iter()
            .map(|(f, m)| (f.coeffs().iter().map(|c| Complex::new(c.clone(), Rational::zero())).collect(), m))
            .collect()
    } else {
        vec![(desc.into_iter().rev().collect(), 1)]
    };
    let mut out = Vec::with_capacity(p.degree());
    for (f, m) in factors {
        for z in simple_roots(&f).map_err(|e| match e {
            Error::NoConvergence(s) => Error::NoConvergence(format!("t = {}: {s}", format_rational(t))),
            e => e,
        })? {
            for _ in 0..m {
                out.push(z.clone());
            }
        }
    }
    if out.len() != p.degree() {
        return Err(Error::Internal(format!("refined {} roots for degree {}", out.len(), p.degree())));
    }
    Ok(Some(out))
}

/// Working scale of the fixed-point Newton iteration, in bits.
const FIXED_BITS: usize = 400;

/// Complex number stored as integers scaled by `2^FIXED_BITS`.
#[derive(Clone)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn from_rational(z: &CRational) -> Self {
        let f = |q: &Rational| (q.numer() << FIXED_BITS).div_floor(q.denom());
        Fixed { re: f(&z.re), im: f(&z.im) }
    }

    fn from_f64(z: Complex64) -> Self {
        Fixed::from_rational(&Complex::new(from_f64(z.re), from_f64(z.im)))
    }

    fn mul(&self, o: &Fixed) -> Fixed {
        Fixed {
            re: (&self.re * &o.re - &self.im * &o.im) >> FIXED_BITS,
            im: (&self.re * &o.im + &self.im * &o.re) >> FIXED_BITS,
        }
    }

    fn div(&self, o: &Fixed) -> Option<Fixed> {
        let d = (&o.re * &o.re + &o.im * &o.im) >> FIXED_BITS;
        if d.is_zero() {
            return None;
        }
        Some(Fixed {
            re: (&self.re * &o.re + &self.im * &o.im).div_floor(&d),
            im: (&self.im * &o.re - &self.re * &o.im).div_floor(&d),
        })
    }

    fn abs(&self) -> f64 {
        let s = 2f64.powi(-(FIXED_BITS as i32));
        Complex64::new(self.re.to_f64().unwrap_or(f64::INFINITY) * s, self.im.to_f64().unwrap_or(f64::INFINITY) * s).norm()
    }

    /// Exact value rounded to a multiple of `2^-e`, `e <= FIXED_BITS`.
    fn to_rational(&self, e: usize) -> CRational {
        let shift = FIXED_BITS - e;
        let half = if shift > 0 { BigInt::one() << (shift - 1) } else { BigInt::zero() };
        let den = BigInt::one() << e;
        let r = |x: &BigInt| Rational::new((x + &half) >> shift, den.clone());
        Complex::new(r(&self.re), r(&self.im))
    }
}

fn horner(asc: &[Fixed], z: &Fixed) -> Fixed {
    let mut acc = Fixed { re: BigInt::zero(), im: BigInt::zero() };
    for c in asc.iter().rev() {
        acc = acc.mul(z);
        acc.re += &c.re;
        acc.im += &c.im;
    }
    acc
}

fn c_abs(z: &CRational) -> f64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im)).norm()
}

/// Roots of a squarefree polynomial given by ascending coefficients.
fn simple_roots(asc: &[CRational]) -> Result<Vec<CRational>> {
    let n = asc.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = asc[n].clone();
    let asc: Vec<CRational> = asc.iter().map(|c| c / &lead).collect();
    if n == 1 {
        return Ok(vec![-asc[0].clone()]);
    }
    let desc: Vec<Complex64> = asc.iter().rev().map(|c| Complex64::new(to_f64(&c.re), to_f64(&c.im))).collect();
    let (approx, _) = solve_monic(&desc, 1e-6)?;
    let fx: Vec<Fixed> = asc.iter().map(Fixed::from_rational).collect();
    let d: Vec<Fixed> = (1..=n).map(|k| Fixed::from_rational(&(&asc[k] * Rational::from_integer(k.into())))).collect();
    let mut out: Vec<CRational> = Vec::with_capacity(n);
    for z0 in approx {
        let mut z = Fixed::from_f64(z0);
        let mut done = false;
        for _ in 0..60 {
            let Some(dz) = horner(&fx, &z).div(&horner(&d, &z)) else {
                break;
            };
            let (step, mag) = (dz.abs(), z.abs());
            z.re -= &dz.re;
            z.im -= &dz.im;
            if step <= mag.max(f64::MIN_POSITIVE) * 2f64.powi(-PRECISE_BITS) {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence("Newton refinement".into()));
        }
        let mag = z.abs().max(f64::MIN_POSITIVE);
        let e = (PRECISE_BITS + 8 - mag.log2().floor() as i32).clamp(0, FIXED_BITS as i32) as usize;
        out.push(z.to_rational(e));
    }
    for i in 0..n {
        for j in 0..i {
            let gap = c_abs(&(&out[i] - &out[j]));
            if gap <= 2f64.powi(-PRECISE_BITS + 16) * (c_abs(&out[i]) + c_abs(&out[j])) {
                return Err(Error::NoConvergence("refinement merged two simple roots".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GenPoly, Mode, PiecewiseGermFunction};
    use crate::scalar::{int, rat};

    #[test]
    fn refined_square_roots() {
        let dom = (int(-1), int(1));
        let a2 = PiecewiseGermFunction::from_poly(dom.clone(), GenPoly::from_coeffs(&[int(-2)])).unwrap();
        let a1 = PiecewiseGermFunction::from_poly(dom, GenPoly::from_coeffs(&[int(0)])).unwrap();
        let p = MonicCurve::new(vec![a1, a2], Mode::Hyperbolic).unwrap();
        let r = precise_roots(&p, &rat(1, 3)).unwrap().unwrap();
        for z in r {
            let err = &z.re * &z.re - int(2);
            assert!(to_f64(&err).abs() < 1e-30);
            assert!(z.im.is_zero());
        }
    }

    #[test]
    fn multiple_roots_are_exact() {
        // (x - 1)^2 (x + 1/3): a1 = 5/3, a2 = 1/3, a3 = -1/3
        let dom = (int(-1), int(1));
        let c = |q: Rational| PiecewiseGermFunction::from_poly(dom.clone(), GenPoly::from_coeffs(&[q])).unwrap();
        let p = MonicCurve::new(vec![c(rat(5, 3)), c(rat(1, 3)), c(rat(-1, 3))], Mode::Hyperbolic).unwrap();
        let mut r: Vec<Rational> = precise_roots(&p, &int(0)).unwrap().unwrap().into_iter().map(|z| z.re).collect();
        r.sort();
        assert_eq!(r, vec![rat(-1, 3), int(1), int(1)]);
    }
}
