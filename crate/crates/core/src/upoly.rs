//! Dense univariate polynomials over the rationals, for exact gcd and
//! squarefree computations on polynomial pieces.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::curves::GenPoly;
use crate::scalar::{int, to_f64, Rational};

/// Ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Rewrites `Σ c s^α` as a polynomial in `u = s^(1/den)`; `None` if
    /// some `α·den` is not an integer.
    pub fn from_genpoly(p: &GenPoly<Rational>, den: u64) -> Option<Self> {
        let d = int(den as i64);
        let mut c: Vec<Rational> = Vec::new();
        for t in p.terms() {
            let e = &t.alpha * &d;
            if !e.is_integer() {
                return None;
            }
            let e: usize = e.to_integer().try_into().ok()?;
            if c.len() <= e {
                c.resize(e + 1, Rational::zero());
            }
            c[e] += &t.coeff;
        }
        Some(UPoly::new(c))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::new(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient (same roots).
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().expect("nonzero").is_negative() { -BigInt::one() } else { BigInt::one() };
        UPoly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g * &sign)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    /// Yun's decomposition: squarefree, pairwise coprime `f_i` with
    /// `self = const · Π f_i^i`. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d0 = self.derivative();
        let b = self.gcd(&d0);
        let mut c = self.div_rem(&b).0;
        let mut d = d0.div_rem(&b).0.sub(&c.derivative());
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            c = c.div_rem(&a).0;
            d = d.div_rem(&a).0.sub(&c.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.primitive(), i));
            }
            i += 1;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let f = p(&[2, -3, 0, 1]);
        assert_eq!(f.squarefree(), p(&[-2, 1, 1]));
        assert_eq!(f.gcd(&f.derivative()), p(&[-1, 1]));
        let (q, r) = f.div_rem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[-2, 1, 1]));
        assert_eq!(p(&[0, 0, 0, 0, 0, 0, 4]).squarefree(), p(&[0, 1]));
        assert_eq!(f.squarefree_decomposition(), vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        // x^3 (x - 1)^5
        let g = p(&[0, 0, 0, -1, 5, -10, 10, -5, 1]);
        assert_eq!(g.squarefree_decomposition(), vec![(p(&[0, 1]), 3), (p(&[-1, 1]), 5)]);
    }
}
