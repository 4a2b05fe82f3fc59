//! Simultaneous root finding (Aberth–Ehrlich) with backward-error
//! certificates.

use num::complex::Complex64;
use num::traits::Zero;
use serde::Serialize;

use crate::config::{Config, Precision};
use crate::curves::curve::{shift_signed, standard_from_signed};
use crate::curves::MonicCurve;
use crate::error::{Error, Result};
use crate::scalar::{to_f64, Rational, Scalar};

const MAX_ITER: usize = 600;

/// Roots at one parameter value with per-root relative backward errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSample {
    pub t: f64,
    #[serde(serialize_with = "ser_c64")]
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
}

fn ser_c64<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl RootSample {
    pub fn real_parts(&self) -> Vec<f64> {
        self.roots.iter().map(|z| z.re).collect()
    }

    /// Real parts in increasing order.
    pub fn sorted_real(&self) -> Vec<f64> {
        let mut v = self.real_parts();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

/// Normwise backward error `|p(z)| / (max |c_i| · Σ |z|^i)` for descending
/// coefficients. The componentwise variant is useless near multiple roots
/// at zero, where vanishing coefficients admit no relative perturbation.
pub fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    let mut v = Complex64::zero();
    let mut w = 0.0;
    let az = z.norm();
    for ci in c {
        v = v * z + ci;
        w = w * az + 1.0;
    }
    let scale = c.iter().fold(0.0f64, |m, ci| m.max(ci.norm())) * w;
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

/// Compensated Horner evaluation (error-free transformations), used by the
/// extended precision tier.
pub fn comp_horner(c: &[f64], x: f64) -> f64 {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let z = s - a;
        (s, (a - (s - z)) + (b - z))
    }
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }
    let mut s = c[0];
    let mut err = 0.0;
    for &ci in &c[1..] {
        let (p, pe) = two_prod(s, x);
        let (ns, se) = two_sum(p, ci);
        s = ns;
        err = err * x + (pe + se);
    }
    s + err
}

/// All roots of the monic polynomial with descending coefficients
/// `c[0] = 1, c[1], .., c[n]`.
pub fn solve_monic(c: &[Complex64], tol: f64) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let n = c.len() - 1;
    // exact zero roots first
    let mut zeros = 0;
    while zeros < n && c[n - zeros] == Complex64::zero() {
        zeros += 1;
    }
    let core = &c[..c.len() - zeros];
    let m = core.len() - 1;
    let mut roots = vec![Complex64::zero(); zeros];
    if m > 0 {
        roots.extend(aberth(core)?);
    }
    let residuals = roots.iter().map(|&z| backward_error(c, z)).collect::<Vec<_>>();
    if let Some(bad) = residuals.iter().find(|&&r| r > tol) {
        return Err(Error::NoConvergence(format!("backward error {bad:e}")));
    }
    Ok((roots, residuals))
}

fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 1 {
        return Ok(vec![-c[1] / c[0]]);
    }
    let lead = c[0];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Fujiwara bound for the initial circle
    let radius = (1..=n)
        .map(|i| {
            let r = c[i].norm().powf(1.0 / i as f64);
            if i == n {
                (r / 2f64.powf(1.0 / n as f64)) * 2.0
            } else {
                2.0 * r
            }
        })
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();
    let dc: Vec<Complex64> = (0..n).map(|i| c[i] * (n - i) as f64).collect();
    let eval = |p: &[Complex64], x: Complex64| p.iter().fold(Complex64::zero(), |acc, ci| acc * x + ci);
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let pv = eval(&c, z[k]);
            if pv == Complex64::zero() {
                converged[k] = true;
                continue;
            }
            let w = pv / eval(&dc, z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == Complex64::zero() {
                        Complex64::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let corr = if denom.norm() == 0.0 || !denom.is_finite() { w } else { w / denom };
            if !corr.is_finite() {
                continue;
            }
            z[k] -= corr;
            if corr.norm() <= 4.0 * f64::EPSILON * z[k].norm().max(f64::MIN_POSITIVE) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // multiple roots converge linearly; the backward error is the certificate
    Ok(z)
}

/// Roots of `P(t)` at an exact parameter value. The polynomial is centred
/// exactly at the mean root before solving when coefficients are exact.
pub fn roots_at<S: Scalar>(p: &MonicCurve<S>, t: &Rational, cfg: &Config) -> Result<RootSample> {
    let n = p.degree();
    let tf = to_f64(t);
    let Some(a) = p.coeffs_exact(t)? else {
        return roots_at_f64(p, tf, cfg);
    };
    let h = a[0].clone() * S::from_rational(&Rational::new(1.into(), (n as i64).into()));
    let b = shift_signed(&a, &h, &S::one(), |x, y| x.clone() + y.clone(), |x, y| x.clone() * y.clone(), |x, q| {
        x.clone() * S::from_rational(q)
    });
    let centred: Vec<Complex64> = standard_from_signed(&b).iter().map(|v| v.to_c64()).collect();
    let (mut roots, _) = solve_monic(&centred, cfg.tau_root)
        .map_err(|_| Error::NoConvergence(crate::scalar::format_rational(t)))?;
    let shift = h.to_c64();
    for z in roots.iter_mut() {
        *z += shift;
    }
    let original: Vec<Complex64> = standard_from_signed(&a).iter().map(|v| v.to_c64()).collect();
    if cfg.precision == Precision::Extended && p.mode() == crate::curves::Mode::Hyperbolic {
        let std: Vec<f64> = original.iter().map(|v| v.re).collect();
        polish_real(&std, &mut roots);
    }
    let residuals: Vec<f64> = roots.iter().map(|&z| backward_error(&original, z)).collect();
    if let Some(bad) = residuals.iter().find(|&&r| r > cfg.tau_root) {
        return Err(Error::NoConvergence(format!("{} (backward error {bad:e})", crate::scalar::format_rational(t))));
    }
    Ok(RootSample { t: tf, roots, residuals })
}

/// Roots at a floating parameter value.
pub fn roots_at_f64<S: Scalar>(p: &MonicCurve<S>, t: f64, cfg: &Config) -> Result<RootSample> {
    let n = p.degree();
    let a: Vec<Complex64> = p.coeffs_numeric(t)?.iter().map(|v| v.to_c64()).collect();
    let h = a[0] / n as f64;
    let b = shift_signed(&a, &h, &Complex64::new(1.0, 0.0), |x, y| x + y, |x, y| x * y, |x, q| x * to_f64(q));
    let centred = standard_from_signed(&b);
    let (mut roots, _) = solve_monic(&centred, cfg.tau_root).map_err(|_| Error::NoConvergence(t.to_string()))?;
    for z in roots.iter_mut() {
        *z += h;
    }
    let original = standard_from_signed(&a);
    if cfg.precision == Precision::Extended && p.mode() == crate::curves::Mode::Hyperbolic {
        let std: Vec<f64> = original.iter().map(|v| v.re).collect();
        polish_real(&std, &mut roots);
    }
    let residuals: Vec<f64> = roots.iter().map(|&z| backward_error(&original, z)).collect();
    if let Some(bad) = residuals.iter().find(|&&r| r > cfg.tau_root) {
        return Err(Error::NoConvergence(format!("{t} (backward error {bad:e})")));
    }
    Ok(RootSample { t, roots, residuals })
}

/// Newton polish of nearly-real roots using compensated evaluation; a step
/// is kept only if it lowers the compensated residual.
fn polish_real(c: &[f64], roots: &mut [Complex64]) {
    let n = c.len() - 1;
    let dc: Vec<f64> = (0..n).map(|i| c[i] * (n - i) as f64).collect();
    for z in roots.iter_mut() {
        if z.im.abs() > 1e-8 * (1.0 + z.re.abs()) {
            continue;
        }
        let mut x = z.re;
        let mut best = comp_horner(c, x).abs();
        for _ in 0..4 {
            let d = comp_horner(&dc, x);
            if d == 0.0 {
                break;
            }
            let nx = x - comp_horner(c, x) / d;
            let r = comp_horner(c, nx).abs();
            if r < best {
                best = r;
                x = nx;
            } else {
                break;
            }
        }
        *z = Complex64::new(x, 0.0);
    }
}

/// Roots at `t` for the standard rational data used by tests.
pub fn roots_of_coeffs(a: &[Rational], cfg: &Config) -> Result<Vec<Complex64>> {
    let std: Vec<Complex64> = standard_from_signed(a).iter().map(|v| v.to_c64()).collect();
    Ok(solve_monic(&std, cfg.tau_root)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GenPoly, Mode, PiecewiseGermFunction};
    use crate::scalar::int;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn simple_roots() {
        let cfg = Config::default();
        let one = Complex64::new(1.0, 0.0);
        let (r, _) = solve_monic(&[one, Complex64::zero(), -one], 1e-12).unwrap();
        let re = sorted(r.iter().map(|z| z.re).collect());
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
        let r = roots_of_coeffs(&[int(0), int(0), int(0)], &cfg).unwrap();
        assert!(r.iter().all(|z| z.norm() == 0.0));
        let r = roots_of_coeffs(&[int(6), int(11), int(6)], &cfg).unwrap();
        let re = sorted(r.iter().map(|z| z.re).collect());
        for (x, e) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn multiple_root_certificate() {
        // (x - 1)^4 converges only to ~eps^(1/4) but its backward error is tiny
        let r = roots_of_coeffs(&[int(4), int(6), int(4), int(1)], &Config::default()).unwrap();
        for z in r {
            assert!((z - 1.0).norm() < 1e-3);
        }
    }

    #[test]
    fn curve_roots_exact_centering() {
        let dom = (int(-1), int(1));
        let a1 = PiecewiseGermFunction::from_poly(dom.clone(), GenPoly::from_coeffs(&[int(0), int(2)])).unwrap();
        let a2 = PiecewiseGermFunction::from_poly(dom, GenPoly::from_coeffs(&[int(0), int(0), int(1)])).unwrap();
        let p = MonicCurve::new(vec![a1, a2], Mode::Hyperbolic).unwrap();
        let s = roots_at(&p, &Rational::new(1.into(), 3.into()), &Config::default()).unwrap();
        for z in &s.roots {
            assert!((z.re - 1.0 / 3.0).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn compensated_horner_matches() {
        let c = [1.0, -3.0, 3.0, -1.0];
        assert_eq!(comp_horner(&c, 2.0), 1.0);
    }
}
