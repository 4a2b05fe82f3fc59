//! Property tests for the structural invariants of each module.

use num::complex::Complex64;
use num::integer::Integer;
use num::traits::{Signed, Zero};
use num::Complex;
use proptest::prelude::*;

use hyproots::arrangement::roots::solve_monic;
use hyproots::arrangement::{arrange, roots_at_f64, Strategy as Arrangement};
use hyproots::cli::CurveSpec;
use hyproots::config::Config;
use hyproots::critical::locate_critical_points;
use hyproots::curves::{GenPoly, Mode, MonicCurve, Orientation, Piece, PiecewiseGermFunction, PowerTerm, Side};
use hyproots::desing::{desing_exponent, integrality_holds};
use hyproots::multiplicity::{
    contact_profile_exact, estimate_order, ladder, mbar_of_function, mult_at, verify_multiplicity_lemma, Mult, OrderFit,
};
use hyproots::reduction::{build_tree, d, reduce_once, NodeKind, ReductionNode, TreeSide};
use hyproots::regularity::{analyze_point, gamma_at, gamma_of_node, GammaPair};
use hyproots::scalar::{int, rat, to_f64};
use hyproots::symmetric::{coefficients_from_power_sums, coefficients_from_roots, discriminants, power_sums_from_coefficients};
use hyproots::{CRational, Rational};

fn small_dom() -> (Rational, Rational) {
    (rat(-1, 5), rat(1, 5))
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

fn q() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Roots `c t^k` as `(c, k)`.
fn root_terms(n: std::ops::RangeInclusive<usize>, k: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, k), n)
}

fn root_polys(terms: &[(i64, i64)], offset: i64, centred: bool) -> Vec<GenPoly> {
    let roots: Vec<GenPoly> =
        terms.iter().map(|&(c, k)| GenPoly::monomial(int(c), int(k)).add(&GenPoly::constant(int(offset)))).collect();
    if !centred {
        return roots;
    }
    let mut mean = GenPoly::zero();
    for r in &roots {
        mean = mean.add(r);
    }
    let mean = mean.scale(&rat(1, roots.len() as i64));
    roots.iter().map(|r| r.sub(&mean)).collect()
}

fn curve_from_roots(roots: &[GenPoly]) -> MonicCurve {
    let a = coefficients_from_roots(roots, &GenPoly::constant(int(1)));
    let dom = small_dom();
    MonicCurve::new(a.into_iter().map(|g| PiecewiseGermFunction::from_poly(dom.clone(), g).unwrap()).collect(), Mode::Hyperbolic).unwrap()
}

fn as_functions(roots: &[GenPoly]) -> Vec<PiecewiseGermFunction> {
    roots.iter().map(|r| PiecewiseGermFunction::from_poly(small_dom(), r.clone()).unwrap()).collect()
}

/// A function with a breakpoint at 0 and one-sided sums of powers.
fn germ_function(integer_exponents: bool) -> impl Strategy<Value = PiecewiseGermFunction> {
    let den = if integer_exponents { 1i64..=1 } else { 1i64..=3 };
    let term = (prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), 1i64..=9, den).prop_map(|(c, k, d)| PowerTerm::new(int(c), rat(k, d)));
    (prop::collection::vec(term.clone(), 0..=3), prop::collection::vec(term, 0..=3), -2i64..=2).prop_map(|(l, r, c0)| {
        let mut left = GenPoly::from_terms(l);
        let mut right = GenPoly::from_terms(r);
        left = left.add(&GenPoly::constant(int(c0)));
        right = right.add(&GenPoly::constant(int(c0)));
        let pieces = vec![Piece::new(int(0), Orientation::Reflected, left), Piece::new(int(0), Orientation::Forward, right)];
        PiecewiseGermFunction::new((int(-1), int(1)), vec![int(0)], pieces).unwrap()
    })
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Real roots of `x^n + Σ (-1)^j a_j x^(n-j)`.
fn real_roots(a: &[f64]) -> Vec<f64> {
    let mut desc = vec![Complex64::new(1.0, 0.0)];
    for (j, v) in a.iter().enumerate() {
        desc.push(Complex64::new(if j % 2 == 0 { -v } else { *v }, 0.0));
    }
    sorted(solve_monic(&desc, 1e-9).unwrap().0.iter().map(|z| z.re).collect())
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

fn all_identical(terms: &[(i64, i64)]) -> bool {
    terms.iter().all(|t| t.0 * t.1.signum() == terms[0].0 * terms[0].1.signum() && (t.0 == 0 || t.1 == terms[0].1))
}

// curves

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn ring_operations_evaluate_pointwise(f in germ_function(true), g in germ_function(true), t in (-9i64..=9).prop_map(|n| rat(n, 10)), k in 0u32..=3) {
        let (ft, gt) = (f.exact_at(&t).unwrap(), g.exact_at(&t).unwrap());
        prop_assert_eq!(f.add(&g).unwrap().exact_at(&t).unwrap(), &ft + &gt);
        prop_assert_eq!(f.mul(&g).unwrap().exact_at(&t).unwrap(), &ft * &gt);
        prop_assert_eq!(f.pow(k).unwrap().exact_at(&t).unwrap(), num::pow(ft, k as usize));
    }

    #[test]
    fn fractional_ring_operations_agree_numerically(f in germ_function(false), g in germ_function(false), t in -0.95f64..0.95) {
        let (ft, gt) = (f.evaluate_f64(t).unwrap(), g.evaluate_f64(t).unwrap());
        prop_assert!((f.mul(&g).unwrap().evaluate_f64(t).unwrap() - ft * gt).abs() <= 1e-12 * (1.0 + (ft * gt).abs()));
        prop_assert!((f.sub(&g).unwrap().evaluate_f64(t).unwrap() - (ft - gt)).abs() <= 1e-12 * (1.0 + ft.abs() + gt.abs()));
    }

    #[test]
    fn shift_abscissa_translates_roots(terms in root_terms(2..=4, 0..=3), t in (-5i64..=5).prop_map(|n| rat(n, 25))) {
        let p = curve_from_roots(&root_polys(&terms, 0, false));
        let sh = p.shift_abscissa().unwrap();
        let cfg = Config::default();
        let h = to_f64(&p.a(1).exact_at(&t).unwrap()) / p.degree() as f64;
        let before = sorted(roots_at_f64(&p, to_f64(&t), &cfg).unwrap().real_parts());
        let after = sorted(roots_at_f64(&sh, to_f64(&t), &cfg).unwrap().real_parts().iter().map(|x| x + h).collect());
        prop_assert!(close(&before, &after, 1e-6), "{:?} vs {:?}", before, after);
    }

    #[test]
    fn germ_truncation_error_has_the_right_order(c in 1i64..=4, alpha in prop::sample::select(vec![rat(1, 2), rat(1, 3), rat(3, 2), rat(5, 3), rat(7, 4)]), k in 2u32..=4) {
        // c (t + 1)^alpha near 0, a piece anchored at -1
        let piece = Piece::new(int(-1), Orientation::Forward, GenPoly::monomial(int(c), alpha));
        let f = PiecewiseGermFunction::new((rat(-1, 2), rat(1, 2)), vec![], vec![piece]).unwrap();
        let g = f.germ_at(&int(0), Side::Right, k).unwrap();
        let hs: Vec<f64> = (3..=7).map(|e| 2f64.powi(-e)).collect();
        let errs: Vec<f64> = hs.iter().map(|&h| (g.eval(h) - f.evaluate_f64(h).unwrap()).abs()).collect();
        let slope = (errs[0].ln() - errs[errs.len() - 1].ln()) / (hs[0].ln() - hs[hs.len() - 1].ln());
        prop_assert!(slope >= k as f64 - 0.2, "slope {} for K = {}: {:?}", slope, k, errs);
    }
}

// symmetric

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn newton_round_trip(a in prop::collection::vec(q(), 2..=8)) {
        let s = power_sums_from_coefficients(&a, &int(1));
        prop_assert_eq!(s[0].clone(), int(a.len() as i64));
        prop_assert_eq!(coefficients_from_power_sums(&s[1..=a.len()], &int(1)), a);
    }

    #[test]
    fn hyperbolic_discriminants_are_nonnegative(roots in prop::collection::vec(q(), 1..=6)) {
        let a = coefficients_from_roots(&roots, &int(1));
        let dk = discriminants(&a, &int(1));
        prop_assert!(dk.iter().all(|v| !v.is_negative()), "{:?}", dk);
        let n = roots.len() as i64;
        let mean: Rational = roots.iter().sum::<Rational>() / int(n);
        let centred: Vec<Rational> = roots.iter().map(|r| r - &mean).collect();
        let a = coefficients_from_roots(&centred, &int(1));
        if n >= 2 {
            prop_assert_eq!(discriminants(&a, &int(1))[1].clone(), -int(2 * n) * &a[1]);
        }
    }
}

// multiplicity

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn multiplying_by_a_power_adds_to_the_multiplicity(f in germ_function(false), m in 0u32..=5) {
        let Mult::Finite(mf) = mult_at(&f, &int(0)).unwrap().value else {
            prop_assume!(false);
            unreachable!()
        };
        let tm = PiecewiseGermFunction::from_poly((int(-1), int(1)), GenPoly::monomial(int(1), int(m as i64))).unwrap();
        prop_assert_eq!(mult_at(&tm.mul(&f).unwrap(), &int(0)).unwrap().value, Mult::Finite(mf + m));
    }

    #[test]
    fn multiplicity_lemma_conditions_agree(terms in root_terms(2..=5, 0..=3), r in 0u32..=4) {
        let p = curve_from_roots(&root_polys(&terms, 0, true));
        let (a, b, c) = verify_multiplicity_lemma(&p, &int(0), r).unwrap();
        prop_assert!(a == b && b == c, "({}, {}, {})", a, b, c);
    }

    #[test]
    fn shifted_a2_is_bounded_by_contact(terms in root_terms(2..=5, 0..=3)) {
        let roots = root_polys(&terms, 0, true);
        let p = curve_from_roots(&roots);
        let Mult::Finite(m2) = mult_at(p.a(2), &int(0)).unwrap().value else {
            prop_assume!(false);
            unreachable!()
        };
        let mbar = contact_profile_exact(&as_functions(&roots), &int(0)).unwrap().mbar;
        prop_assert!(m2 <= 2 * mbar + 1, "m(a2) = {}, mbar = {}", m2, mbar);
    }

    #[test]
    fn order_fit_recovers_exponents(c in 0.25f64..8.0, k in 1i64..=12, den in 1i64..=4) {
        let alpha = rat(k, den);
        let a = to_f64(&alpha);
        let samples: Vec<(f64, f64)> = ladder(1.0 / 16.0, 0.5, 24).iter().map(|&h| (h, c * h.powf(a))).collect();
        let span = samples[0].0 / samples[samples.len() - 1].0;
        prop_assert!(span >= 1e4);
        match estimate_order(&samples, 4, 1e-300, 0.05).unwrap() {
            OrderFit::Finite { exponent, fit_residual, .. } => {
                prop_assert_eq!(exponent, alpha);
                prop_assert!(fit_residual < 1e-6);
            }
            OrderFit::Infinite => prop_assert!(false, "infinite"),
        }
    }
}

// reduction

fn check_tree(node: &ReductionNode, n: usize) -> Result<(), TestCaseError> {
    fn walk(v: &ReductionNode, path: u32, worst: &mut u32, labels: &mut usize) -> Result<(), TestCaseError> {
        if v.label >= 2 {
            *labels += v.label;
        }
        let path = path + match (v.kind, v.r.and_then(|r| r.finite())) {
            (NodeKind::Reduce, Some(r)) => v.label as u32 * r,
            _ => 0,
        };
        *worst = (*worst).max(path);
        if !v.children.is_empty() {
            prop_assert_eq!(v.children.iter().map(|c| c.label).sum::<usize>(), v.label);
        }
        v.children.iter().try_for_each(|c| walk(c, path, worst, labels))
    }
    let (mut worst, mut labels) = (0, 0);
    walk(node, 0, &mut worst, &mut labels)?;
    prop_assert!(labels as u64 <= d(n as u64), "labels {} > d({})", labels, n);
    prop_assert!(worst <= gamma_of_node(node).big, "path budget {} > Gamma", worst);
    Ok(())
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn trees_partition_labels_within_budget(terms in root_terms(2..=5, 0..=3)) {
        let p = curve_from_roots(&root_polys(&terms, 0, false));
        for side in [TreeSide::Left, TreeSide::Right] {
            let t = build_tree(&p, &int(0), side, &Config::default()).unwrap();
            check_tree(&t.root, p.degree())?;
        }
    }

    #[test]
    fn reduction_scales_roots(terms in root_terms(2..=4, 1..=3), h in prop::sample::select(vec![1e-2, 3e-2, 1e-1])) {
        prop_assume!(!all_identical(&terms));
        let roots = root_polys(&terms, 0, true);
        let p = curve_from_roots(&roots);
        let out = reduce_once(&p, &int(0), 16);
        prop_assume!(out.is_ok());
        let out = out.unwrap();
        let Mult::Finite(r) = out.r else {
            prop_assume!(false);
            unreachable!()
        };
        // roots of P_(r) times t^r are the roots of P
        let right = out.right.unwrap();
        let mu: Vec<f64> = real_roots(&right.a.iter().map(|g| g.eval(h)).collect::<Vec<_>>());
        let scaled = sorted(mu.iter().map(|m| m * h.powi(r as i32)).collect());
        let want = sorted(roots.iter().map(|g| g.eval_numeric(h)).collect());
        prop_assert!(close(&scaled, &want, 1e-6), "{:?} vs {:?}", scaled, want);
        // mbar(P_(r)) ≤ mbar(P) - r
        let reduced: Vec<GenPoly> = roots.iter().map(|g| g.shift(&-int(r as i64))).collect();
        let before = contact_profile_exact(&as_functions(&roots), &int(0)).unwrap().mbar;
        let after = contact_profile_exact(&as_functions(&reduced), &int(0)).unwrap().mbar;
        prop_assert!(after + r <= before, "mbar {} -> {} with r = {}", before, after, r);
    }
}

// regularity

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn gamma_is_shift_invariant(terms in root_terms(2..=4, 0..=3)) {
        let cfg = Config::default();
        let p = curve_from_roots(&root_polys(&terms, 0, false));
        prop_assert_eq!(gamma_at(&p, &int(0), &cfg).unwrap(), gamma_at(&p.shift_abscissa().unwrap(), &int(0), &cfg).unwrap());
    }

    #[test]
    fn mbar_of_a_product_is_the_larger(a in root_terms(1..=3, 1..=3), b in root_terms(1..=3, 1..=3)) {
        let cfg = Config::default();
        let ra = root_polys(&a, 2, false);
        let rb = root_polys(&b, -2, false);
        let both: Vec<GenPoly> = ra.iter().chain(&rb).cloned().collect();
        let m = |r: &[GenPoly]| analyze_point(&curve_from_roots(r), &int(0), false, &cfg).unwrap().mbar;
        prop_assert_eq!(m(&both), m(&ra).max(m(&rb)));
    }

    #[test]
    fn square_root_case_matches_mbar(m in 0i64..=3, c in -4i64..=4, k in 1i64..=3) {
        let cfg = Config::default();
        let dom = small_dom();
        // f = t^(2m) (1 + c t^k) > 0 away from 0
        let f = PiecewiseGermFunction::from_poly(dom.clone(), GenPoly::monomial(int(1), int(2 * m)).add(&GenPoly::monomial(int(c), int(2 * m + k)))).unwrap();
        let p = MonicCurve::new(vec![PiecewiseGermFunction::zero(dom.clone()), f.neg()], Mode::Hyperbolic).unwrap();
        let mbar = mbar_of_function(&f, &dom.0, &dom.1, &cfg).unwrap();
        prop_assert_eq!(mbar, m as u32);
        prop_assert_eq!(gamma_at(&p, &int(0), &cfg).unwrap(), GammaPair::new(2 * mbar, mbar));
    }
}

// arrangement

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn arrangements_permute_sample_values(terms in root_terms(2..=4, 0..=3)) {
        let cfg = Config::default();
        let p = curve_from_roots(&root_polys(&terms, 0, false));
        let crit = locate_critical_points(&p, &rat(-1, 5), &rat(1, 5), &[], &cfg).unwrap();
        let grid: Vec<f64> = (0..=38).map(|i| -0.19 + 0.01 * i as f64).collect();
        let smooth = arrange(&p, &grid, Arrangement::Smooth, &crit, &cfg).unwrap();
        let plain = arrange(&p, &grid, Arrangement::Sorted, &crit, &cfg).unwrap();
        for i in 0..grid.len() {
            let a = sorted(smooth.branches.iter().map(|b| b[i]).collect());
            let b: Vec<f64> = plain.branches.iter().map(|b| b[i]).collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn sorted_branches_are_continuous(terms in root_terms(2..=4, 0..=3)) {
        let cfg = Config::default();
        let p = curve_from_roots(&root_polys(&terms, 0, false));
        let jump = |cells: usize| {
            let grid: Vec<f64> = (0..=cells).map(|i| -0.19 + 0.38 * i as f64 / cells as f64).collect();
            let tr = arrange(&p, &grid, Arrangement::Sorted, &[], &cfg).unwrap();
            tr.branches.iter().flat_map(|b| b.windows(2).map(|w| (w[1] - w[0]).abs())).fold(0.0, f64::max)
        };
        let (coarse, fine) = (jump(20), jump(40));
        prop_assert!(fine <= 0.6 * coarse + 1e-9, "jumps {} -> {}", coarse, fine);
    }
}

// desing

fn z_n_minus_t_k(n: usize, k: i64) -> MonicCurve<CRational> {
    let dom = (int(-1), int(1));
    let c = |g: GenPoly| PiecewiseGermFunction::from_poly(dom.clone(), g.map(|q| Complex::new(q.clone(), Rational::zero()))).unwrap();
    let mut a: Vec<_> = (1..n).map(|_| c(GenPoly::zero())).collect();
    a.push(c(GenPoly::monomial(int(if n % 2 == 1 { 1 } else { -1 }), int(k))));
    MonicCurve::new(a, Mode::Complex).unwrap()
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn desing_exponent_of_binomials(n in 2usize..=5, k in 1i64..=5) {
        let cfg = Config::default();
        let p = z_n_minus_t_k(n, k);
        let want = (n as u64) / (n as u64).gcd(&(k as u64));
        let got = desing_exponent(&p, &int(0), Side::Right, &cfg).unwrap();
        prop_assert_eq!(got.n, want);
        prop_assert!(integrality_holds(&p, &int(0), Side::Right, want as u32, &cfg).unwrap());
    }
}

// cli

fn q_text() -> impl Strategy<Value = String> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| if d == 1 { n.to_string() } else { format!("{n}/{d}") })
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn spec_round_trips(
        terms in prop::collection::vec(prop::collection::vec((q_text(), (0i64..=12, 1i64..=3)), 0..=3), 1..=4),
        complex in any::<bool>(),
        points in prop::collection::vec(q_text(), 0..=2),
    ) {
        let coeffs: Vec<String> = terms
            .iter()
            .map(|ts| {
                let body: Vec<String> = ts
                    .iter()
                    .map(|(c, (a, d))| {
                        let c = if complex { format!("{{\"re\": \"{c}\", \"im\": \"1/2\"}}") } else { format!("\"{c}\"") };
                        format!("{{\"c\": {c}, \"alpha\": \"{a}/{d}\"}}")
                    })
                    .collect();
                format!("{{\"breakpoints\": [\"0\"], \"pieces\": [{{\"terms\": []}}, {{\"anchor\": \"0\", \"terms\": [{}]}}]}}", body.join(", "))
            })
            .collect();
        let pts: Vec<String> = points.iter().map(|p| format!("\"{p}\"")).collect();
        let text = format!(
            "{{\"degree\": {}, \"mode\": \"complex\", \"domain\": [\"-1\", \"1\"], \"coefficients\": [{}], \"points\": [{}]}}",
            terms.len(),
            coeffs.join(", "),
            pts.join(", ")
        );
        let spec = CurveSpec::from_json(&text).unwrap();
        let again = CurveSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(&spec, &again);
        prop_assert_eq!(spec.to_json(), again.to_json());
    }
}
