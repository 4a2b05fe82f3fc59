use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{GenPoly, PowerTerm};
use super::series::{SeriesGerm, Side};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, to_f64, Rational, Scalar};

/// Highest Taylor order available for fractional terms expanded away
/// from their anchor.
pub const MAX_NUMERIC_TAYLOR_ORDER: u32 = 64;

/// Direction of a piece's local coordinate: `s = t - anchor` (forward) or
/// `s = anchor - t` (reflected).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Forward,
    Reflected,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Forward => 1,
            Orientation::Reflected => -1,
        }
    }
}

/// One interval's defining expression, a [`GenPoly`] in the local
/// coordinate of its frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<S = Rational> {
    pub anchor: Rational,
    pub orientation: Orientation,
    pub poly: GenPoly<S>,
}

fn signed(q: Rational, sign: i8) -> Rational {
    if sign < 0 {
        -q
    } else {
        q
    }
}

impl<S: Scalar> Piece<S> {
    pub fn new(anchor: Rational, orientation: Orientation, poly: GenPoly<S>) -> Self {
        Piece { anchor, orientation, poly }
    }

    /// Polynomial in `t` itself.
    pub fn plain(poly: GenPoly<S>) -> Self {
        Piece::new(Rational::zero(), Orientation::Forward, poly)
    }

    pub fn local(&self, t: &Rational) -> Rational {
        signed(t - &self.anchor, self.orientation.sign())
    }

    pub fn eval_exact(&self, t: &Rational) -> Option<S> {
        self.poly.eval_exact(&self.local(t))
    }

    pub fn eval_numeric(&self, t: f64) -> S::Numeric {
        let s = (t - to_f64(&self.anchor)) * self.orientation.sign() as f64;
        self.poly.eval_numeric(s)
    }

    /// Same function expressed in another frame; `None` when the piece
    /// has fractional exponents and the frames differ.
    pub fn reframe(&self, anchor: &Rational, orientation: Orientation) -> Option<Self> {
        if *anchor == self.anchor && orientation == self.orientation {
            return Some(self.clone());
        }
        let o = self.orientation.sign();
        let d = signed(anchor - &self.anchor, o);
        let e = o * orientation.sign();
        let poly = self.poly.substitute_affine(&d, e)?;
        Some(Piece::new(anchor.clone(), orientation, poly))
    }

    fn same_frame(&self, other: &Self) -> bool {
        self.anchor == other.anchor && self.orientation == other.orientation
    }

    /// One-sided germ at `t0` in `σ ≥ 0`, `t = t0 + side·σ`.
    fn germ_exact(&self, t0: &Rational, side: Side, order: u32) -> Result<SeriesGerm<S>> {
        let d = self.local(t0);
        let e = self.orientation.sign() * side.sign();
        if let Some(poly) = self.poly.substitute_affine(&d, e) {
            return Ok(SeriesGerm::exact(side, t0.clone(), poly));
        }
        if !d.is_positive() {
            return Err(Error::Internal(format!(
                "fractional term evaluated at negative local coordinate near {}",
                format_rational(t0)
            )));
        }
        // integer part is exact and finite; only fractional terms truncate
        let (ints, fracs): (Vec<_>, Vec<_>) =
            self.poly.terms().iter().cloned().partition(|t| t.alpha.is_integer());
        let ints = GenPoly::from_terms(ints).substitute_affine(&d, e).expect("integer exponents");
        let fracs = GenPoly::from_terms(fracs)
            .expand_at_positive(&d, e, order)
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "irrational Taylor coefficients at {}; use the numeric germ",
                    format_rational(t0)
                ))
            })?;
        Ok(SeriesGerm::new(side, t0.clone(), ints.add(&fracs), Some(int(order as i64))))
    }

    fn germ_numeric(&self, t0: &Rational, side: Side, order: u32) -> Result<SeriesGerm<S::Numeric>> {
        match self.germ_exact(t0, side, order) {
            Ok(g) => Ok(g.to_numeric()),
            Err(Error::Unsupported(_)) => {
                if order > MAX_NUMERIC_TAYLOR_ORDER {
                    return Err(Error::Unsupported(format!(
                        "numeric Taylor order {order} exceeds {MAX_NUMERIC_TAYLOR_ORDER}"
                    )));
                }
                let d = self.local(t0);
                let e = self.orientation.sign() * side.sign();
                let (ints, fracs): (Vec<_>, Vec<_>) =
                    self.poly.terms().iter().cloned().partition(|t| t.alpha.is_integer());
                let ints = GenPoly::from_terms(ints)
                    .substitute_affine(&d, e)
                    .expect("integer exponents")
                    .to_numeric();
                let fracs = GenPoly::from_terms(fracs).expand_at_positive_numeric(to_f64(&d), e, order);
                Ok(SeriesGerm::new(side, t0.clone(), ints.add(&fracs), Some(int(order as i64))))
            }
            Err(e) => Err(e),
        }
    }
}

/// Value of a coefficient function at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluation<S: Scalar> {
    Exact(S),
    Numeric(S::Numeric),
}

impl<S: Scalar> Evaluation<S> {
    pub fn to_numeric(&self) -> S::Numeric {
        match self {
            Evaluation::Exact(v) => v.to_numeric(),
            Evaluation::Numeric(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&S> {
        match self {
            Evaluation::Exact(v) => Some(v),
            Evaluation::Numeric(_) => None,
        }
    }
}

/// Continuous function on a closed rational interval given by finitely
/// many pieces of generalized powers.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseGermFunction<S = Rational> {
    domain: (Rational, Rational),
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece<S>>,
}

/// Pieces of several functions over a common refinement, each interval
/// expressed in one shared frame.
pub struct Aligned<S> {
    pub breakpoints: Vec<Rational>,
    pub frames: Vec<(Rational, Orientation)>,
    /// `polys[j][i]` is function `i` on interval `j`.
    pub polys: Vec<Vec<GenPoly<S>>>,
}

impl<S: Scalar> PiecewiseGermFunction<S> {
    /// Validates ordering, exponent signs, fractional-term domains, and
    /// continuity at breakpoints.
    pub fn new(domain: (Rational, Rational), breakpoints: Vec<Rational>, pieces: Vec<Piece<S>>) -> Result<Self> {
        let f = Self::new_unchecked(domain, breakpoints, pieces)?;
        f.check_continuity()?;
        Ok(f)
    }

    fn new_unchecked(domain: (Rational, Rational), breakpoints: Vec<Rational>, pieces: Vec<Piece<S>>) -> Result<Self> {
        let (lo, hi) = &domain;
        if lo >= hi {
            return Err(Error::Invalid("domain must satisfy lo < hi".into()));
        }
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::Invalid(format!(
                "{} pieces for {} breakpoints",
                pieces.len(),
                breakpoints.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
            }
        }
        if let (Some(first), Some(last)) = (breakpoints.first(), breakpoints.last()) {
            if first <= lo || last >= hi {
                return Err(Error::Invalid("breakpoints must lie inside the domain".into()));
            }
        }
        let f = PiecewiseGermFunction { domain, breakpoints, pieces };
        for (i, p) in f.pieces.iter().enumerate() {
            if p.poly.terms().iter().any(|t| t.alpha.is_negative()) {
                return Err(Error::Invalid("exponents must be non-negative".into()));
            }
            if p.poly.has_fractional() {
                let (a, b) = f.interval(i);
                let ok = match p.orientation {
                    Orientation::Forward => p.anchor <= a,
                    Orientation::Reflected => p.anchor >= b,
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "piece {i} has fractional exponents but its local coordinate is negative on [{}, {}]",
                        format_rational(&a),
                        format_rational(&b)
                    )));
                }
            }
        }
        Ok(f)
    }

    fn check_continuity(&self) -> Result<()> {
        for (i, b) in self.breakpoints.iter().enumerate() {
            let (l, r) = (&self.pieces[i], &self.pieces[i + 1]);
            let ok = match (l.eval_exact(b), r.eval_exact(b)) {
                (Some(x), Some(y)) => x == y,
                _ => {
                    let x = l.eval_numeric(to_f64(b));
                    let y = r.eval_numeric(to_f64(b));
                    let scale = 1.0 + x.magnitude().max(y.magnitude());
                    (x - y).magnitude() <= 1e-9 * scale
                }
            };
            if !ok {
                return Err(Error::Discontinuous(format_rational(b)));
            }
        }
        Ok(())
    }

    pub fn from_poly(domain: (Rational, Rational), poly: GenPoly<S>) -> Result<Self> {
        Self::new(domain, Vec::new(), vec![Piece::plain(poly)])
    }

    pub fn constant(domain: (Rational, Rational), c: S) -> Self {
        Self::new_unchecked(domain, Vec::new(), vec![Piece::plain(GenPoly::constant(c))])
            .expect("valid constant")
    }

    pub fn zero(domain: (Rational, Rational)) -> Self {
        Self::constant(domain, S::zero())
    }

    pub fn domain(&self) -> &(Rational, Rational) {
        &self.domain
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    /// Closed interval covered by piece `i`.
    pub fn interval(&self, i: usize) -> (Rational, Rational) {
        let a = if i == 0 { self.domain.0.clone() } else { self.breakpoints[i - 1].clone() };
        let b = self.breakpoints.get(i).cloned().unwrap_or_else(|| self.domain.1.clone());
        (a, b)
    }

    pub fn contains(&self, t: &Rational) -> bool {
        *t >= self.domain.0 && *t <= self.domain.1
    }

    fn check_in_domain(&self, t: &Rational) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format_rational(t)))
        }
    }

    /// Index of the piece governing the one-sided neighborhood of `t`.
    pub fn piece_index(&self, t: &Rational, side: Side) -> usize {
        match side {
            Side::Right => self.breakpoints.iter().filter(|b| *b <= t).count(),
            Side::Left => self.breakpoints.iter().filter(|b| *b < t).count(),
        }
    }

    fn piece_index_f64(&self, t: f64) -> usize {
        self.breakpoints.iter().filter(|b| to_f64(b) <= t).count()
    }

    pub fn is_polynomial(&self) -> bool {
        self.pieces.iter().all(|p| !p.poly.has_fractional())
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.poly.is_zero())
    }

    /// Lcm of exponent denominators over all pieces.
    pub fn exponent_denominator(&self) -> u64 {
        use num::Integer;
        self.pieces.iter().fold(1, |acc, p| acc.lcm(&p.poly.exponent_denominator()))
    }

    pub fn evaluate(&self, t: &Rational) -> Result<Evaluation<S>> {
        self.check_in_domain(t)?;
        let side = if *t == self.domain.1 { Side::Left } else { Side::Right };
        let p = &self.pieces[self.piece_index(t, side)];
        Ok(match p.eval_exact(t) {
            Some(v) => Evaluation::Exact(v),
            None => Evaluation::Numeric(p.eval_numeric(to_f64(t))),
        })
    }

    pub fn evaluate_f64(&self, t: f64) -> Result<S::Numeric> {
        let (lo, hi) = (to_f64(&self.domain.0), to_f64(&self.domain.1));
        if !(t >= lo && t <= hi) {
            return Err(Error::OutsideDomain(t.to_string()));
        }
        let i = self.piece_index_f64(t).min(self.pieces.len() - 1);
        Ok(self.pieces[i].eval_numeric(t))
    }

    fn check_side(&self, t0: &Rational, side: Side) -> Result<()> {
        self.check_in_domain(t0)?;
        let at_edge = match side {
            Side::Left => *t0 == self.domain.0,
            Side::Right => *t0 == self.domain.1,
        };
        if at_edge {
            return Err(Error::OutsideDomain(format!(
                "{} ({} germ at a domain end)",
                format_rational(t0),
                side.name()
            )));
        }
        Ok(())
    }

    /// Exact one-sided germ; fractional terms anchored away from `t0`
    /// are expanded to `order` and must have rational Taylor coefficients.
    pub fn germ_at(&self, t0: &Rational, side: Side, order: u32) -> Result<SeriesGerm<S>> {
        self.check_side(t0, side)?;
        self.pieces[self.piece_index(t0, side)].germ_exact(t0, side, order)
    }

    /// Floating germ, available for every piece up to
    /// [`MAX_NUMERIC_TAYLOR_ORDER`].
    pub fn germ_at_numeric(&self, t0: &Rational, side: Side, order: u32) -> Result<SeriesGerm<S::Numeric>> {
        self.check_side(t0, side)?;
        self.pieces[self.piece_index(t0, side)].germ_numeric(t0, side, order)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PiecewiseGermFunction<T> {
        PiecewiseGermFunction {
            domain: self.domain.clone(),
            breakpoints: self.breakpoints.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(p.anchor.clone(), p.orientation, p.poly.map(&f)))
                .collect(),
        }
    }

    /// Expresses several functions on a common refinement with one frame
    /// per interval. Fails when two fractional pieces on the same interval
    /// use different frames.
    pub fn align(fs: &[&Self]) -> Result<Aligned<S>> {
        let first = fs.first().ok_or_else(|| Error::Invalid("nothing to align".into()))?;
        if fs.iter().any(|f| f.domain != first.domain) {
            return Err(Error::Invalid("coefficient domains differ".into()));
        }
        let mut bps: Vec<Rational> = fs.iter().flat_map(|f| f.breakpoints.iter().cloned()).collect();
        bps.sort();
        bps.dedup();
        let mut frames = Vec::with_capacity(bps.len() + 1);
        let mut polys = Vec::with_capacity(bps.len() + 1);
        for j in 0..=bps.len() {
            let lo = if j == 0 { &first.domain.0 } else { &bps[j - 1] };
            let hi = bps.get(j).unwrap_or(&first.domain.1);
            let mid = (lo + hi) / int(2);
            let here: Vec<&Piece<S>> = fs.iter().map(|f| &f.pieces[f.piece_index(&mid, Side::Right)]).collect();
            let target = here
                .iter()
                .find(|p| p.poly.has_fractional())
                .copied()
                .unwrap_or(here[0]);
            let mut row = Vec::with_capacity(here.len());
            for p in &here {
                let q = if p.same_frame(target) {
                    (*p).clone()
                } else {
                    p.reframe(&target.anchor, target.orientation).ok_or_else(|| {
                        Error::Unsupported(format!(
                            "fractional pieces with different anchors on [{}, {}]",
                            format_rational(lo),
                            format_rational(hi)
                        ))
                    })?
                };
                row.push(q.poly);
            }
            frames.push((target.anchor.clone(), target.orientation));
            polys.push(row);
        }
        Ok(Aligned { breakpoints: bps, frames, polys })
    }

    /// Builds a function from per-interval results of an aligned
    /// computation, merging neighbours that agree.
    pub fn from_aligned(
        domain: (Rational, Rational),
        breakpoints: &[Rational],
        frames: &[(Rational, Orientation)],
        polys: Vec<GenPoly<S>>,
    ) -> Result<Self> {
        let mut out_bps: Vec<Rational> = Vec::new();
        let mut out_pieces: Vec<Piece<S>> = Vec::new();
        for (j, poly) in polys.into_iter().enumerate() {
            let (a, o) = &frames[j];
            let mut piece = Piece::new(a.clone(), *o, poly);
            if !piece.poly.has_fractional() && !piece.same_frame(&Piece::plain(GenPoly::<S>::zero())) {
                // integer pieces are stored in the plain frame for stable output
                if let Some(p) = piece.reframe(&Rational::zero(), Orientation::Forward) {
                    piece = p;
                }
            }
            if let Some(last) = out_pieces.last() {
                let same = if last.same_frame(&piece) {
                    last.poly == piece.poly
                } else {
                    piece.reframe(&last.anchor, last.orientation).is_some_and(|p| p.poly == last.poly)
                };
                if same {
                    continue;
                }
                out_bps.push(breakpoints[j - 1].clone());
            }
            out_pieces.push(piece);
        }
        Self::new_unchecked(domain, out_bps, out_pieces)
    }

    /// Applies `op` to the aligned pieces of `fs` interval by interval.
    pub fn combine(fs: &[&Self], op: impl Fn(&[GenPoly<S>]) -> GenPoly<S>) -> Result<Self> {
        let al = Self::align(fs)?;
        let polys = al.polys.iter().map(|row| op(row)).collect();
        Self::from_aligned(fs[0].domain.clone(), &al.breakpoints, &al.frames, polys)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::combine(&[self, other], |p| p[0].add(&p[1]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::combine(&[self, other], |p| p[0].sub(&p[1]))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::combine(&[self, other], |p| p[0].mul(&p[1]))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        Self::combine(&[self], |p| p[0].pow(k))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::combine(&[self], |p| p[0].scale(c)).expect("single function aligns")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// The function `s ↦ f(t0 + side·s^n)` on `[-δ, δ]`. For `s < 0` the
    /// argument lies on side `side·(-1)^n`. Requires finite germs.
    pub fn compose_power(&self, t0: &Rational, side: Side, n: u32, delta: &Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("substitution exponent must be positive".into()));
        }
        let neg_side = if n % 2 == 0 { side } else { side.flip() };
        let finite = |side: Side| -> Result<GenPoly<S>> {
            let g = self.germ_at(t0, side, 1)?;
            if g.order.is_some() {
                return Err(Error::Unsupported(format!(
                    "germ at {} has an infinite expansion",
                    format_rational(t0)
                )));
            }
            Ok(g.poly.compose_power(n))
        };
        let right = finite(side)?;
        let left = finite(neg_side)?;
        let domain = (-delta.clone(), delta.clone());
        let zero = Rational::zero();
        let pieces = vec![
            Piece::new(zero.clone(), Orientation::Reflected, left),
            Piece::new(zero.clone(), Orientation::Forward, right),
        ];
        let f = Self::new_unchecked(domain.clone(), vec![zero], pieces)?;
        // collapse to one piece when both halves agree
        let al = Self::align(&[&f]);
        match al {
            Ok(al) => Self::from_aligned(domain, &al.breakpoints, &al.frames, al.polys.into_iter().map(|mut r| r.remove(0)).collect()),
            Err(_) => Ok(f),
        }
    }

    /// Largest `δ = 2^-k ≤ 1` such that `[t0 - δ^n, t0 + δ^n]` stays
    /// inside the pieces adjacent to `t0` (one-sided at domain ends).
    pub fn compose_radius(&self, t0: &Rational, n: u32) -> Rational {
        let mut reach = int(1);
        for b in self.breakpoints.iter().chain([&self.domain.0, &self.domain.1]) {
            let d = (b - t0).abs();
            if d.is_positive() && d < reach {
                reach = d;
            }
        }
        let mut delta = int(1);
        while num::pow::Pow::pow(&delta, n as i32) > reach {
            delta /= int(2);
        }
        delta
    }

    /// Exact value `f(t0)` if available.
    pub fn exact_at(&self, t: &Rational) -> Option<S> {
        self.evaluate(t).ok().and_then(|e| e.exact().cloned())
    }
}

impl PiecewiseGermFunction<Rational> {
    /// Sign check by dense sampling plus exact breakpoint values.
    pub fn is_nonnegative(&self, samples: usize) -> bool {
        let (lo, hi) = (to_f64(&self.domain.0), to_f64(&self.domain.1));
        for k in 0..=samples {
            let t = lo + (hi - lo) * k as f64 / samples as f64;
            if self.evaluate_f64(t).map_or(true, |v| v < -1e-12 * (1.0 + v.abs())) {
                return false;
            }
        }
        self.breakpoints
            .iter()
            .all(|b| self.exact_at(b).map_or(true, |v| !v.is_negative()))
    }

    /// Convenience constructor for a one-sided power: `c·(t - a)^alpha`
    /// for `t ≥ a` and `0` for `t < a` (or mirrored).
    pub fn one_sided_power(domain: (Rational, Rational), at: Rational, side: Side, c: Rational, alpha: Rational) -> Result<Self> {
        let term = GenPoly::from_terms(vec![PowerTerm::new(c, alpha)]);
        let pieces = match side {
            Side::Right => vec![
                Piece::plain(GenPoly::zero()),
                Piece::new(at.clone(), Orientation::Forward, term),
            ],
            Side::Left => vec![
                Piece::new(at.clone(), Orientation::Reflected, term),
                Piece::plain(GenPoly::zero()),
            ],
        };
        Self::new(domain, vec![at], pieces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn dom() -> (Rational, Rational) {
        (int(-1), int(1))
    }

    pub(crate) fn f_p(p: i64) -> PiecewiseGermFunction {
        PiecewiseGermFunction::one_sided_power(dom(), int(0), Side::Right, int(1), int(p + 1)).unwrap()
    }

    fn poly(c: &[i64]) -> GenPoly {
        GenPoly::from_coeffs(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn evaluates_f3() {
        let f = f_p(3);
        assert_eq!(f.evaluate(&rat(1, 2)).unwrap(), Evaluation::Exact(rat(1, 16)));
        assert_eq!(f.evaluate(&int(-1)).unwrap(), Evaluation::Exact(int(0)));
        assert!(f.evaluate(&int(2)).is_err());
    }

    #[test]
    fn evaluates_fractional_power_exactly() {
        let f = PiecewiseGermFunction::one_sided_power((int(-1), int(9)), int(0), Side::Right, int(1), rat(10, 3)).unwrap();
        assert_eq!(f.evaluate(&int(8)).unwrap(), Evaluation::Exact(int(1024)));
        match f.evaluate(&int(2)).unwrap() {
            Evaluation::Numeric(v) => assert!((v - 2f64.powf(10.0 / 3.0)).abs() < 1e-12),
            e => panic!("expected numeric, got {e:?}"),
        }
    }

    #[test]
    fn rejects_discontinuity() {
        let pieces = vec![Piece::plain(poly(&[0])), Piece::plain(poly(&[1]))];
        assert!(matches!(
            PiecewiseGermFunction::new(dom(), vec![int(0)], pieces),
            Err(Error::Discontinuous(_))
        ));
    }

    #[test]
    fn rejects_fractional_on_negative_side() {
        let frac = GenPoly::monomial(int(1), rat(1, 2));
        let pieces = vec![Piece::plain(frac.clone()), Piece::plain(frac)];
        assert!(PiecewiseGermFunction::new(dom(), vec![int(0)], pieces).is_err());
    }

    #[test]
    fn germ_examples() {
        // a2 = 2 f_p - t^2 at 0 from the right, p = 5
        let t2 = PiecewiseGermFunction::from_poly(dom(), poly(&[0, 0, 1])).unwrap();
        let a2 = f_p(5).scale(&int(2)).sub(&t2).unwrap();
        let g = a2.germ_at(&int(0), Side::Right, 3).unwrap();
        assert_eq!(g.poly.coeff_at(&int(2)), int(-1));
        assert_eq!(g.poly.coeff_at(&int(6)), int(2));
        assert_eq!(g.poly.terms().len(), 2);
        let gl = a2.germ_at(&int(0), Side::Left, 3).unwrap();
        assert_eq!(gl.poly, GenPoly::monomial(int(-1), int(2)));

        let five = PiecewiseGermFunction::constant(dom(), int(5));
        let g = five.germ_at(&rat(1, 3), Side::Left, 3).unwrap();
        assert_eq!(g.poly, GenPoly::constant(int(5)));

        let sq = PiecewiseGermFunction::from_poly(dom(), poly(&[1, -2, 1])).unwrap();
        let g = sq.germ_at(&int(0), Side::Right, 3).unwrap();
        assert_eq!(g.poly, poly(&[1, -2, 1]));
    }

    #[test]
    fn fractional_germ_away_from_anchor() {
        let f = PiecewiseGermFunction::one_sided_power((int(-1), int(9)), int(0), Side::Right, int(1), rat(1, 2)).unwrap();
        let g = f.germ_at(&int(4), Side::Right, 3).unwrap();
        assert_eq!(g.order, Some(int(3)));
        assert_eq!(g.value_at_zero(), int(2));
        assert!(matches!(f.germ_at(&int(2), Side::Right, 3), Err(Error::Unsupported(_))));
        let g = f.germ_at_numeric(&int(2), Side::Left, 4).unwrap();
        assert!((g.value_at_zero() - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.poly.coeff_at(&int(1)) + 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!(f.germ_at_numeric(&int(2), Side::Left, 100).is_err());
    }

    #[test]
    fn ring_ops_and_merging() {
        let f = f_p(2);
        let sum = f.add(&f.neg()).unwrap();
        assert!(sum.is_zero());
        assert!(sum.breakpoints().is_empty());
        let sq = f.mul(&f).unwrap();
        assert_eq!(sq.evaluate(&rat(1, 2)).unwrap(), Evaluation::Exact(rat(1, 64)));
        let cube = f.pow(3).unwrap();
        assert_eq!(cube.evaluate(&rat(1, 2)).unwrap(), Evaluation::Exact(rat(1, 512)));
    }

    #[test]
    fn compose_power_square() {
        // t on [-1, 1] composed with t = s^2 gives s^2 on both halves
        let t = PiecewiseGermFunction::from_poly(dom(), poly(&[0, 1])).unwrap();
        let c = t.compose_power(&int(0), Side::Right, 2, &rat(1, 2)).unwrap();
        assert!(c.breakpoints().is_empty());
        assert_eq!(c.evaluate(&rat(-1, 2)).unwrap(), Evaluation::Exact(rat(1, 4)));
        let c = t.compose_power(&int(0), Side::Right, 3, &rat(1, 2)).unwrap();
        assert_eq!(c.evaluate(&rat(-1, 2)).unwrap(), Evaluation::Exact(rat(-1, 8)));
    }
}
