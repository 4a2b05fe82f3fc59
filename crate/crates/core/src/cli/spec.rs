//! The JSON curve description read by the command-line tool.
//!
//! Rationals are strings (`"3"`, `"-7/2"`); plain JSON integers are also
//! accepted. A term is `{"c": .., "alpha": ..}` or the pair `[c, alpha]`,
//! and `c` may be complex as `{"re": .., "im": ..}`. Pieces are written
//! in `t` unless they carry an `anchor` (then in `t - anchor`, or in
//! `anchor - t` when `reflected`).

use std::fmt;
use std::path::Path;

use num::traits::Zero;
use num::Complex;
use serde::{Deserialize, Serialize};

use crate::config::{Config, Precision};
use crate::curves::{GenPoly, Mode, MonicCurve, Orientation, Piece, PiecewiseGermFunction, PowerTerm};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, CRational, Rational, Scalar};

/// Exact rational, serialized as a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QRepr", into = "String")]
pub struct Q(pub Rational);

#[derive(Deserialize)]
#[serde(untagged)]
enum QRepr {
    Str(String),
    Int(i64),
}

impl TryFrom<QRepr> for Q {
    type Error = String;

    fn try_from(v: QRepr) -> std::result::Result<Self, String> {
        match v {
            QRepr::Int(i) => Ok(Q(Rational::from_integer(i.into()))),
            QRepr::Str(s) => parse_rational(&s).map(Q).map_err(|e| e.to_string()),
        }
    }
}

impl From<Q> for String {
    fn from(q: Q) -> String {
        format_rational(&q.0)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Real(Q),
    Complex { re: Q, im: Q },
}

impl CoeffSpec {
    fn value(&self) -> CRational {
        match self {
            CoeffSpec::Real(q) => Complex::new(q.0.clone(), Rational::zero()),
            CoeffSpec::Complex { re, im } => Complex::new(re.0.clone(), im.0.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermSpec {
    Object { c: CoeffSpec, alpha: Q },
    Pair(CoeffSpec, Q),
}

impl TermSpec {
    fn parts(&self) -> (&CoeffSpec, &Q) {
        match self {
            TermSpec::Object { c, alpha } | TermSpec::Pair(c, alpha) => (c, alpha),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Q>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub reflected: bool,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(default)]
    pub breakpoints: Vec<Q>,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub degree: usize,
    pub mode: Mode,
    pub domain: [Q; 2],
    /// `a_1..a_n` in `x^n + Σ (-1)^j a_j x^(n-j)`.
    pub coefficients: Vec<CoefficientSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Map<String, serde_json::Value>>,
}

/// A loaded curve: real coefficients stay in `Rational`.
#[derive(Clone, Debug)]
pub enum Curve {
    Real(MonicCurve<Rational>),
    Complex(MonicCurve<CRational>),
}

impl Curve {
    pub fn mode(&self) -> Mode {
        match self {
            Curve::Real(p) => p.mode(),
            Curve::Complex(p) => p.mode(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Curve::Real(p) => p.degree(),
            Curve::Complex(p) => p.degree(),
        }
    }

    pub fn domain(&self) -> &(Rational, Rational) {
        match self {
            Curve::Real(p) => p.domain(),
            Curve::Complex(p) => p.domain(),
        }
    }

    /// The curve over complex rationals; root clusters of real curves
    /// may be complex.
    pub fn complexified(&self) -> MonicCurve<CRational> {
        match self {
            Curve::Real(p) => p.map(|q| Complex::new(q.clone(), Rational::zero())),
            Curve::Complex(p) => p.clone(),
        }
    }

    pub fn real(&self) -> Result<&MonicCurve<Rational>> {
        match self {
            Curve::Real(p) => Ok(p),
            Curve::Complex(_) => Err(Error::Unsupported("this command needs real coefficients".into())),
        }
    }
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("curve spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve spec serializes")
    }

    fn is_real(&self) -> bool {
        self.coefficients
            .iter()
            .flat_map(|c| &c.pieces)
            .flat_map(|p| &p.terms)
            .all(|t| t.parts().0.value().im.is_zero())
    }

    fn function<S: Scalar>(&self, j: usize, conv: impl Fn(CRational) -> S) -> Result<PiecewiseGermFunction<S>> {
        let c = &self.coefficients[j];
        let at = |m: String| Error::Parse(format!("coefficients[{j}]: {m}"));
        if c.pieces.len() != c.breakpoints.len() + 1 {
            return Err(at(format!("{} pieces for {} breakpoints", c.pieces.len(), c.breakpoints.len())));
        }
        let pieces = c
            .pieces
            .iter()
            .map(|p| {
                let terms = p.terms.iter().map(|t| {
                    let (c, alpha) = t.parts();
                    PowerTerm::new(conv(c.value()), alpha.0.clone())
                });
                let poly = GenPoly::from_terms(terms.collect());
                let orientation = if p.reflected { Orientation::Reflected } else { Orientation::Forward };
                Piece::new(p.anchor.as_ref().map_or_else(Rational::zero, |q| q.0.clone()), orientation, poly)
            })
            .collect();
        let domain = (self.domain[0].0.clone(), self.domain[1].0.clone());
        let bps = c.breakpoints.iter().map(|q| q.0.clone()).collect();
        PiecewiseGermFunction::new(domain, bps, pieces).map_err(|e| at(e.to_string()))
    }

    /// Validates the spec and builds the curve.
    pub fn curve(&self) -> Result<Curve> {
        if self.degree == 0 || self.coefficients.len() != self.degree {
            return Err(Error::Parse(format!("degree {} with {} coefficients", self.degree, self.coefficients.len())));
        }
        if self.domain[0].0 >= self.domain[1].0 {
            return Err(Error::Parse("domain: lower end must be below the upper end".into()));
        }
        if self.is_real() {
            let a = (0..self.degree).map(|j| self.function(j, |z| z.re)).collect::<Result<_>>()?;
            Ok(Curve::Real(MonicCurve::new(a, self.mode)?))
        } else {
            if self.mode == Mode::Hyperbolic {
                return Err(Error::ModeMismatch("complex coefficients in a hyperbolic spec".into()));
            }
            let a = (0..self.degree).map(|j| self.function(j, |z| z)).collect::<Result<_>>()?;
            Ok(Curve::Complex(MonicCurve::new(a, self.mode)?))
        }
    }

    /// Defaults, then `HYPROOTS_PRECISION`, then the spec's overrides.
    pub fn config(&self) -> Result<Config> {
        let mut base = serde_json::to_value(Config::default())?;
        let map = base.as_object_mut().expect("config is an object");
        map.insert("precision".into(), serde_json::to_value(Precision::from_env())?);
        if let Some(o) = &self.config {
            for (k, v) in o {
                if !map.contains_key(k) {
                    return Err(Error::Parse(format!("config: unknown field `{k}`")));
                }
                map.insert(k.clone(), v.clone());
            }
        }
        serde_json::from_value(base).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn declared_points(&self) -> Vec<Rational> {
        self.points.iter().map(|q| q.0.clone()).collect()
    }
}
