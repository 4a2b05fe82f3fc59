use std::cmp::Ordering;

use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::scalar::{binomial, exact_pow, int, to_f64, Rational, Ring, Scalar};

/// One term `coeff · s^alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerTerm<S = Rational> {
    pub coeff: S,
    pub alpha: Rational,
}

impl<S> PowerTerm<S> {
    pub fn new(coeff: S, alpha: Rational) -> Self {
        PowerTerm { coeff, alpha }
    }
}

/// A finite sum of power terms with rational exponents, kept sorted by
/// strictly increasing exponent with no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GenPoly<S = Rational> {
    terms: Vec<PowerTerm<S>>,
}

impl<S: Scalar> Default for GenPoly<S> {
    fn default() -> Self {
        GenPoly::zero()
    }
}

impl<S: Scalar> GenPoly<S> {
    pub fn zero() -> Self {
        GenPoly { terms: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, Rational::zero())
    }

    pub fn monomial(c: S, alpha: Rational) -> Self {
        Self::from_terms(vec![PowerTerm::new(c, alpha)])
    }

    /// Sorts, merges equal exponents, and drops exact zeros.
    pub fn from_terms(mut terms: Vec<PowerTerm<S>>) -> Self {
        terms.sort_by(|a, b| a.alpha.cmp(&b.alpha));
        let mut out: Vec<PowerTerm<S>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.alpha == t.alpha => {
                    last.coeff = last.coeff.clone() + t.coeff;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        GenPoly { terms: out }
    }

    /// Integer-exponent polynomial from ascending coefficients.
    pub fn from_coeffs(coeffs: &[S]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| PowerTerm::new(c.clone(), int(i as i64)))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[PowerTerm<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.alpha)
    }

    pub fn leading(&self) -> Option<&PowerTerm<S>> {
        self.terms.first()
    }

    pub fn max_exponent(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.alpha)
    }

    pub fn coeff_at(&self, alpha: &Rational) -> S {
        self.terms
            .iter()
            .find(|t| &t.alpha == alpha)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn has_fractional(&self) -> bool {
        self.terms.iter().any(|t| !t.alpha.is_integer())
    }

    /// Lcm of all exponent denominators (1 for a polynomial).
    pub fn exponent_denominator(&self) -> u64 {
        self.terms.iter().fold(1u64, |acc, t| {
            let d: u64 = t.alpha.denom().try_into().unwrap_or(1);
            acc.lcm(&d)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.alpha.cmp(&b.alpha),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].coeff.clone() + other.terms[j].coeff.clone();
                    if !c.is_zero() {
                        out.push(PowerTerm::new(c, self.terms[i].alpha.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GenPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        GenPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm::new(-t.coeff.clone(), t.alpha.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, None)
    }

    /// Product keeping only exponents strictly below `order`.
    pub fn mul_truncated(&self, other: &Self, order: Option<&Rational>) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let alpha = &a.alpha + &b.alpha;
                if order.is_some_and(|o| alpha >= *o) {
                    continue;
                }
                terms.push(PowerTerm::new(a.coeff.clone() * b.coeff.clone(), alpha));
            }
        }
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PowerTerm::new(t.coeff.clone() * c.clone(), t.alpha.clone()))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `s^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        GenPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm::new(t.coeff.clone(), &t.alpha + e))
                .collect(),
        }
    }

    pub fn truncate(&self, order: &Rational) -> Self {
        GenPoly {
            terms: self
                .terms
                .iter()
                .filter(|t| t.alpha < *order)
                .cloned()
                .collect(),
        }
    }

    /// Drops coefficients that are negligible at tolerance `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        GenPoly {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.coeff.is_negligible(tol))
                .cloned()
                .collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GenPoly<T> {
        GenPoly::from_terms(
            self.terms
                .iter()
                .map(|t| PowerTerm::new(f(&t.coeff), t.alpha.clone()))
                .collect(),
        )
    }

    pub fn to_numeric(&self) -> GenPoly<S::Numeric> {
        self.map(|c| c.to_numeric())
    }

    /// Substitutes `s ↦ s^n` (exponents scale by `n`).
    pub fn compose_power(&self, n: u32) -> Self {
        let n = int(n as i64);
        GenPoly {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm::new(t.coeff.clone(), &t.alpha * &n))
                .collect(),
        }
    }

    /// Exact value at `s`, when every power is rational.
    pub fn eval_exact(&self, s: &Rational) -> Option<S> {
        let mut acc = S::zero();
        for t in &self.terms {
            let p = if t.alpha.is_integer() {
                let k: i32 = t.alpha.to_integer().try_into().ok()?;
                if s.is_zero() && k < 0 {
                    return None;
                }
                num::pow::Pow::pow(s, k)
            } else {
                exact_pow(s, &t.alpha)?
            };
            acc = acc + t.coeff.clone() * S::from_rational(&p);
        }
        Some(acc)
    }

    pub fn eval_numeric(&self, s: f64) -> S::Numeric {
        let mut acc = S::Numeric::zero();
        for t in &self.terms {
            let p = if t.alpha.is_integer() {
                s.powi(t.alpha.to_integer().try_into().unwrap_or(i32::MAX))
            } else {
                s.powf(to_f64(&t.alpha))
            };
            acc = acc + t.coeff.to_numeric() * <S::Numeric as Scalar>::from_f64(p);
        }
        acc
    }

    /// Exact substitution `s = d + e·σ` (`e = ±1`); `None` when a
    /// fractional exponent would need an infinite expansion.
    pub fn substitute_affine(&self, d: &Rational, e: i8) -> Option<Self> {
        if d.is_zero() {
            if e > 0 {
                return Some(self.clone());
            }
            if self.has_fractional() {
                return None;
            }
            return Some(Self::from_terms(
                self.terms
                    .iter()
                    .map(|t| {
                        let odd = t.alpha.to_integer().is_odd();
                        let c = if odd { -t.coeff.clone() } else { t.coeff.clone() };
                        PowerTerm::new(c, t.alpha.clone())
                    })
                    .collect(),
            ));
        }
        if self.has_fractional() {
            return None;
        }
        let mut out = Vec::new();
        for t in &self.terms {
            let k: u32 = t.alpha.to_integer().try_into().ok()?;
            for i in 0..=k {
                let mut c = binomial(&int(k as i64), i) * num::pow::Pow::pow(d, (k - i) as i32);
                if e < 0 && i % 2 == 1 {
                    c = -c;
                }
                out.push(PowerTerm::new(
                    t.coeff.clone() * S::from_rational(&c),
                    int(i as i64),
                ));
            }
        }
        Some(Self::from_terms(out))
    }

    /// Truncated expansion of `s = d + e·σ`, `d > 0`, to exponents below
    /// `order` (integer steps). Exact when every `d^alpha` is rational.
    pub fn expand_at_positive(&self, d: &Rational, e: i8, order: u32) -> Option<Self> {
        debug_assert!(d.is_positive());
        let mut out = Vec::new();
        for t in &self.terms {
            let base = exact_pow(d, &t.alpha)?;
            let inv_d = d.recip();
            let mut dk = Rational::one();
            for k in 0..order {
                let mut c = &base * binomial(&t.alpha, k) * &dk;
                if e < 0 && k % 2 == 1 {
                    c = -c;
                }
                out.push(PowerTerm::new(
                    t.coeff.clone() * S::from_rational(&c),
                    int(k as i64),
                ));
                dk *= &inv_d;
            }
        }
        Some(Self::from_terms(out))
    }

    /// Numeric counterpart of [`GenPoly::expand_at_positive`].
    pub fn expand_at_positive_numeric(&self, d: f64, e: i8, order: u32) -> GenPoly<S::Numeric> {
        let mut out = Vec::new();
        for t in &self.terms {
            let alpha = to_f64(&t.alpha);
            let mut c = d.powf(alpha);
            for k in 0..order {
                let signed = if e < 0 && k % 2 == 1 { -c } else { c };
                out.push(PowerTerm::new(
                    t.coeff.to_numeric() * <S::Numeric as Scalar>::from_f64(signed),
                    int(k as i64),
                ));
                c *= (alpha - k as f64) / ((k + 1) as f64) / d;
            }
        }
        GenPoly::from_terms(out)
    }
}

impl<S: Scalar> Ring for GenPoly<S> {
    fn zero_like(&self) -> Self {
        GenPoly::zero()
    }
    fn one_like(&self) -> Self {
        GenPoly::constant(S::one())
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
        self.scale(&S::from_rational(q))
    }
}
