use num::traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::GenPoly;
use crate::scalar::{Rational, Ring, Scalar};

/// Side of a one-sided germ: `t = t0 + sign·σ` with `σ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> i8 {
        match self {
            Side::Left => -1,
            Side::Right => 1,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn from_sign(s: i8) -> Side {
        if s < 0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

/// One-sided expansion `Σ c·σ^α + O(σ^order)` at `anchor`.
///
/// `order = None` means the expansion is exact (a finite sum).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesGerm<C = Rational> {
    pub side: Side,
    pub anchor: Rational,
    pub poly: GenPoly<C>,
    pub order: Option<Rational>,
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Scalar> SeriesGerm<C> {
    pub fn new(side: Side, anchor: Rational, poly: GenPoly<C>, order: Option<Rational>) -> Self {
        let poly = match &order {
            Some(o) => poly.truncate(o),
            None => poly,
        };
        SeriesGerm { side, anchor, poly, order }
    }

    pub fn exact(side: Side, anchor: Rational, poly: GenPoly<C>) -> Self {
        Self::new(side, anchor, poly, None)
    }

    /// Leading exponent; `None` for a germ known to be identically zero.
    /// A truncated germ with no visible terms reports its truncation order
    /// as a lower bound through [`SeriesGerm::valuation_bound`].
    pub fn valuation(&self) -> Option<&Rational> {
        self.poly.valuation()
    }

    /// Lower bound for the valuation (`None` = infinite).
    pub fn valuation_bound(&self) -> Option<Rational> {
        self.poly.valuation().cloned().or_else(|| self.order.clone())
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.poly.leading().map(|t| &t.coeff)
    }

    /// True when the germ is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.order.is_none()
    }

    /// True when no term is visible below the truncation order.
    pub fn looks_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn value_at_zero(&self) -> C {
        self.poly.coeff_at(&Rational::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.side,
            self.anchor.clone(),
            self.poly.add(&other.poly),
            min_opt(self.order.clone(), other.order.clone()),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SeriesGerm { poly: self.poly.neg(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let oa = self.order.as_ref().zip(other.valuation_bound()).map(|(o, v)| o + v);
        let ob = other.order.as_ref().zip(self.valuation_bound()).map(|(o, v)| o + v);
        let order = min_opt(oa, ob);
        let poly = self.poly.mul_truncated(&other.poly, order.as_ref());
        SeriesGerm { side: self.side, anchor: self.anchor.clone(), poly, order }
    }

    pub fn scale(&self, c: &C) -> Self {
        SeriesGerm { poly: self.poly.scale(c), ..self.clone() }
    }

    /// Multiplies by `σ^e` (negative `e` divides).
    pub fn shift(&self, e: &Rational) -> Self {
        SeriesGerm {
            poly: self.poly.shift(e),
            order: self.order.as_ref().map(|o| o + e),
            ..self.clone()
        }
    }

    pub fn truncate(&self, order: &Rational) -> Self {
        let order = min_opt(self.order.clone(), Some(order.clone()));
        Self::new(self.side, self.anchor.clone(), self.poly.clone(), order)
    }

    pub fn prune(&self, tol: f64) -> Self {
        SeriesGerm { poly: self.poly.prune(tol), ..self.clone() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&C) -> T) -> SeriesGerm<T> {
        SeriesGerm {
            side: self.side,
            anchor: self.anchor.clone(),
            poly: self.poly.map(f),
            order: self.order.clone(),
        }
    }

    pub fn to_numeric(&self) -> SeriesGerm<C::Numeric> {
        self.map(|c| c.to_numeric())
    }

    pub fn constant_like(&self, c: C) -> Self {
        SeriesGerm::exact(self.side, self.anchor.clone(), GenPoly::constant(c))
    }

    /// Numeric value at `σ` (ignores the remainder).
    pub fn eval(&self, sigma: f64) -> C::Numeric {
        self.poly.eval_numeric(sigma)
    }
}

impl<C: Scalar> Ring for SeriesGerm<C> {
    fn zero_like(&self) -> Self {
        SeriesGerm::exact(self.side, self.anchor.clone(), GenPoly::zero())
    }
    fn one_like(&self) -> Self {
        self.constant_like(C::one())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale(&C::from_rational(q))
    }
}

impl<C: Scalar> SeriesGerm<C> {
    pub fn one(side: Side, anchor: Rational) -> Self {
        SeriesGerm::exact(side, anchor, GenPoly::constant(C::one()))
    }
}
