//! Isolated zeros of piecewise generalized-power functions.
//!
//! Each piece becomes an integer polynomial in `u = s^(1/D)`. Its exact
//! squarefree part has simple roots only; candidates from the numeric
//! solver are either reconstructed as rationals and verified exactly, or
//! enclosed by bisection on exact sign evaluations.

use num::complex::Complex64;
use num::traits::{Signed, Zero};
use serde::Serialize;

use crate::arrangement::roots::solve_monic;
use crate::curves::PiecewiseGermFunction;
use crate::error::Result;
use crate::scalar::{from_f64, int, reconstruct_rational, to_f64, Rational};
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroLocation {
    /// Exact location when it is rational and verified.
    #[serde(skip)]
    pub exact: Option<Rational>,
    #[serde(skip)]
    pub lo: Rational,
    #[serde(skip)]
    pub hi: Rational,
    /// False when bisection could not confirm a sign change.
    pub certified: bool,
    /// Order of the zero within its piece.
    pub order: u32,
}

impl ZeroLocation {
    pub fn point(&self) -> Rational {
        self.exact.clone().unwrap_or_else(|| (&self.lo + &self.hi) / int(2))
    }

    pub fn width(&self) -> f64 {
        to_f64(&(&self.hi - &self.lo))
    }
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Zeros strictly inside `(lo, hi)` of every piece that is not identically
/// zero. Zeros on breakpoints are reported once when found.
pub fn zeros(f: &PiecewiseGermFunction, lo: &Rational, hi: &Rational, tau_loc: f64) -> Result<Vec<ZeroLocation>> {
    let mut out: Vec<ZeroLocation> = Vec::new();
    for (i, piece) in f.pieces().iter().enumerate() {
        if piece.poly.is_zero() {
            continue;
        }
        let (a, b) = f.interval(i);
        let a = if a < *lo { lo.clone() } else { a };
        let b = if b > *hi { hi.clone() } else { b };
        if a >= b {
            continue;
        }
        let den = piece.poly.exponent_denominator();
        let q = UPoly::from_genpoly(&piece.poly, den).expect("denominator clears exponents");
        let sq = q.squarefree();
        if sq.degree().unwrap_or(0) == 0 {
            continue;
        }
        let o = piece.orientation.sign();
        let to_t = |u: &Rational| -> Rational {
            let s = if den == 1 { u.clone() } else { num::pow::Pow::pow(u, den as i32) };
            if o > 0 {
                &piece.anchor + s
            } else {
                &piece.anchor - s
            }
        };
        // u-range of the piece
        let sa = piece.local(&a);
        let sb = piece.local(&b);
        let (smin, smax) = if sa < sb { (sa, sb) } else { (sb, sa) };
        let (umin, umax) = if den == 1 {
            (to_f64(&smin), to_f64(&smax))
        } else {
            let e = 1.0 / den as f64;
            (to_f64(&smin).max(0.0).powf(e), to_f64(&smax).powf(e))
        };
        let c = sq.to_f64();
        let lead = *c.last().expect("nonzero");
        let monic: Vec<Complex64> = c.iter().rev().map(|x| Complex64::new(x / lead, 0.0)).collect();
        let Ok((cands, _)) = solve_monic(&monic, 1e-6) else {
            continue;
        };
        for z in cands {
            let uf = z.re;
            if z.im.abs() > 1e-7 * (1.0 + uf.abs()) || uf.is_nan() {
                continue;
            }
            let margin = 1e-12 * (1.0 + uf.abs());
            if uf < umin - margin || uf > umax + margin || (den > 1 && uf < 0.0) {
                continue;
            }
            let (mut loc, ulo, uhi) = locate_one(&sq, uf, tau_loc, den, &to_t);
            loc.order = zero_order(&q, &ulo, &uhi);
            let t = loc.point();
            if t <= a || t >= b {
                continue;
            }
            if !out.iter().any(|x| x.lo <= t && t <= x.hi) {
                out.push(loc);
            }
        }
    }
    out.sort_by(|x, y| x.point().cmp(&y.point()));
    Ok(out)
}

/// Number of successive `gcd(G, G')` iterates of `q` that still vanish
/// in `[ulo, uhi]`.
fn zero_order(q: &UPoly, ulo: &Rational, uhi: &Rational) -> u32 {
    let vanishes = |g: &UPoly| -> bool {
        if ulo == uhi {
            return g.eval(ulo).is_zero();
        }
        let h = g.squarefree();
        let (a, b) = (sign(&h.eval(ulo)), sign(&h.eval(uhi)));
        a == 0 || b == 0 || a != b
    };
    let mut g = q.clone();
    let mut k = 0;
    while g.degree().unwrap_or(0) > 0 && vanishes(&g) {
        k += 1;
        g = g.gcd(&g.derivative());
    }
    k.max(1)
}

type Located = (ZeroLocation, Rational, Rational);

fn exact_at(t: Rational, u: Rational) -> Located {
    (ZeroLocation { exact: Some(t.clone()), lo: t.clone(), hi: t, certified: true, order: 1 }, u.clone(), u)
}

fn locate_one(sq: &UPoly, uf: f64, tau_loc: f64, den: u64, to_t: &dyn Fn(&Rational) -> Rational) -> Located {
    if let Some(r) = reconstruct_rational(uf, 1 << 20, 1e-9 * (1.0 + uf.abs())) {
        if sq.eval(&r).is_zero() && (den == 1 || !r.is_negative()) {
            return exact_at(to_t(&r), r);
        }
    }
    let mut delta = 1e-10 * (1.0 + uf.abs());
    for _ in 0..8 {
        let mut lo = from_f64(uf - delta);
        let mut hi = from_f64(uf + delta);
        if den > 1 && lo.is_negative() {
            lo = Rational::zero();
        }
        let (sl, sh) = (sign(&sq.eval(&lo)), sign(&sq.eval(&hi)));
        if sl != 0 && sh != 0 && sl != sh {
            loop {
                let (tl, th) = (to_t(&lo), to_t(&hi));
                if to_f64(&(&th - &tl).abs()) < tau_loc {
                    let (tl, th) = if tl < th { (tl, th) } else { (th, tl) };
                    return (ZeroLocation { exact: None, lo: tl, hi: th, certified: true, order: 1 }, lo, hi);
                }
                let mid = (&lo + &hi) / int(2);
                // round the midpoint to keep rationals small
                let mid = from_f64(to_f64(&mid)).max(lo.clone()).min(hi.clone());
                let mid = if mid == lo || mid == hi { (&lo + &hi) / int(2) } else { mid };
                let sm = sign(&sq.eval(&mid));
                if sm == 0 {
                    return exact_at(to_t(&mid), mid);
                }
                if sm == sl {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        delta *= 16.0;
    }
    let u = from_f64(uf);
    let t = to_t(&u);
    let w = from_f64(delta);
    (ZeroLocation { exact: None, lo: &t - &w, hi: &t + &w, certified: false, order: 1 }, &u - &w, &u + &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GenPoly, PowerTerm};
    use crate::scalar::rat;

    #[test]
    fn exact_and_irrational_zeros() {
        let dom = (int(-2), int(2));
        // (t - 1/3)^2 (t^2 - 2)
        let p = GenPoly::from_coeffs(&[rat(1, 9), rat(-2, 3), int(1)])
            .mul(&GenPoly::from_coeffs(&[int(-2), int(0), int(1)]));
        let f = PiecewiseGermFunction::from_poly(dom.clone(), p).unwrap();
        let z = zeros(&f, &dom.0, &dom.1, 2f64.powi(-40)).unwrap();
        assert_eq!(z.len(), 3);
        assert_eq!(z[1].exact, Some(rat(1, 3)));
        assert_eq!(z.iter().map(|z| z.order).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert!(z[0].exact.is_none() && z[0].width() < 2f64.powi(-40));
        assert!((to_f64(&z[2].point()) - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn fractional_piece_zero() {
        // t^(1/2) - 1/2 on t ≥ 0 vanishes at 1/4
        let dom = (int(0), int(1));
        let poly = GenPoly::from_terms(vec![
            PowerTerm::new(int(1), rat(1, 2)),
            PowerTerm::new(rat(-1, 2), int(0)),
        ]);
        let f = PiecewiseGermFunction::from_poly(dom.clone(), poly).unwrap();
        let z = zeros(&f, &dom.0, &dom.1, 1e-12).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].exact, Some(rat(1, 4)));
    }
}
