//! Exact and floating scalar types shared by every module.
//!
//! Exact data lives in [`Rational`] (or [`CRational`] for complex curves);
//! numeric fallbacks use `f64` and [`Complex64`]. The [`Scalar`] trait lets
//! germ arithmetic, lifting, and the symmetric-function identities run on
//! either representation.

use std::fmt::Debug;
use std::ops::Neg;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use num::Complex;

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type CRational = Complex<BigRational>;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(p))
    }
}

/// Canonical string form, `"p/q"` or `"p"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn floor_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// Exact `base^alpha` for `base ≥ 0`, when the result is rational.
pub fn exact_pow(base: &Rational, alpha: &Rational) -> Option<Rational> {
    if base.is_negative() {
        return None;
    }
    if base.is_zero() {
        return if alpha.is_zero() {
            Some(Rational::one())
        } else if alpha.is_positive() {
            Some(Rational::zero())
        } else {
            None
        };
    }
    let q = alpha.denom().to_u32()?;
    let p = alpha.numer().to_i32()?;
    let num_root = exact_integer_root(base.numer(), q)?;
    let den_root = exact_integer_root(base.denom(), q)?;
    let root = Rational::new(num_root, den_root);
    Some(num::pow::Pow::pow(&root, p))
}

fn exact_integer_root(x: &BigInt, k: u32) -> Option<BigInt> {
    if k == 1 {
        return Some(x.clone());
    }
    let r = x.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Binomial coefficient `alpha choose k` for rational `alpha`.
pub fn binomial(alpha: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (alpha - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Nearest fraction `p/q` with `1 ≤ q ≤ max_den`.
pub fn nearest_fraction(x: f64, max_den: u64) -> Rational {
    let mut best = from_f64(x.round());
    let mut best_err = (x - x.round()).abs();
    for q in 2..=max_den.max(1) {
        let p = (x * q as f64).round();
        let err = (x - p / q as f64).abs();
        if err + 1e-15 < best_err {
            best_err = err;
            best = Rational::new(BigInt::from_f64(p).unwrap_or_default(), BigInt::from(q));
        }
    }
    best
}

/// Continued-fraction reconstruction of a small-denominator rational near `x`.
pub fn reconstruct_rational(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 as u64 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = y - a;
        if frac.abs() < 1e-300 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

fn render_f64(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn render_complex(re: &str, im_abs: &str, im_zero: bool, im_neg: bool) -> String {
    if im_zero {
        return re.to_string();
    }
    let im_abs = im_abs.trim_start_matches('-');
    format!("{re}{}{im_abs}i", if im_neg { "-" } else { "+" })
}

/// Coefficient types usable in germ arithmetic, lifting, and identities.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Ring + Send + Sync + 'static {
    /// Floating counterpart used when exact evaluation is impossible.
    type Numeric: Scalar<Numeric = Self::Numeric>;
    /// Whether equality of values is exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;
    fn from_c64(z: Complex64) -> Self;
    fn to_numeric(&self) -> Self::Numeric;
    fn to_c64(&self) -> Complex64;
    fn magnitude(&self) -> f64;
    /// Short human-readable form.
    fn render(&self) -> String;
    /// The value as a rational, when it is one exactly.
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    /// The value as a complex rational, when it is one exactly.
    fn to_crational(&self) -> Option<CRational> {
        self.to_rational().map(|r| Complex::new(r, Rational::zero()))
    }

    fn from_f64(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }

    /// Zero test; exact types ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(tol)
    }
}

impl Scalar for Rational {
    type Numeric = f64;
    const EXACT: bool = true;
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_c64(z: Complex64) -> Self {
        from_f64(z.re)
    }
    fn to_numeric(&self) -> f64 {
        to_f64(self)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
    fn magnitude(&self) -> f64 {
        to_f64(self).abs()
    }
    fn render(&self) -> String {
        format_rational(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for CRational {
    type Numeric = Complex64;
    const EXACT: bool = true;
    fn from_rational(q: &Rational) -> Self {
        Complex::new(q.clone(), Rational::zero())
    }
    fn from_c64(z: Complex64) -> Self {
        Complex::new(from_f64(z.re), from_f64(z.im))
    }
    fn to_numeric(&self) -> Complex64 {
        self.to_c64()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }
    fn to_crational(&self) -> Option<CRational> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        render_complex(&format_rational(&self.re), &format_rational(&self.im), self.im.is_zero(), self.im.is_negative())
    }
}

impl Scalar for f64 {
    type Numeric = f64;
    const EXACT: bool = false;
    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    fn to_numeric(&self) -> f64 {
        *self
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn render(&self) -> String {
        render_f64(*self)
    }
}

impl Scalar for Complex64 {
    type Numeric = Complex64;
    const EXACT: bool = false;
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(to_f64(q), 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_numeric(&self) -> Complex64 {
        *self
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn render(&self) -> String {
        render_complex(&render_f64(self.re), &render_f64(self.im.abs()), self.im == 0.0, self.im < 0.0)
    }
}

/// Commutative-ring operations over which the symmetric-function
/// identities are written; implemented for scalars, generalized
/// polynomials, and truncated germs.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &Rational) -> Self;
}

macro_rules! scalar_ring {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            fn zero_like(&self) -> Self { <$t as Zero>::zero() }
            fn one_like(&self) -> Self { <$t as One>::one() }
            fn plus(&self, other: &Self) -> Self { self.clone() + other.clone() }
            fn minus(&self, other: &Self) -> Self { self.clone() - other.clone() }
            fn times(&self, other: &Self) -> Self { self.clone() * other.clone() }
            fn negated(&self) -> Self { -self.clone() }
            fn scaled(&self, q: &Rational) -> Self { self.clone() * <$t as Scalar>::from_rational(q) }
        }
    )*};
}

scalar_ring!(Rational, CRational, f64, Complex64);
