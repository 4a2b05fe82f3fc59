//! Differentiability budgets Γ and γ folded from reduction trees, their
//! global versions, the exact smoothness class of the coefficients, and
//! the report of guaranteed root classes.

use std::fmt;

use serde::Serialize;

use crate::config::Config;
use crate::critical::{locate_critical_points, segment_midpoints, CriticalPoint};
use crate::curves::{MonicCurve, PiecewiseGermFunction, Side};
use crate::error::{Error, Result};
use crate::multiplicity::{mbar_of_function, GERM_ORDER};
use crate::reduction::combinatorics::d;
use crate::reduction::local::reduce_once;
use crate::reduction::tree::{build_side_tree_with, ReductionNode, ReductionTree};
use crate::reduction::NodeKind;
use crate::scalar::{floor_i64, format_rational, Rational, Scalar};
use crate::symmetric::sylvester_test;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GammaPair {
    #[serde(rename = "Gamma")]
    pub big: u32,
    #[serde(rename = "gamma")]
    pub small: u32,
}

impl GammaPair {
    pub const ZERO: GammaPair = GammaPair { big: 0, small: 0 };

    pub fn new(big: u32, small: u32) -> Self {
        GammaPair { big, small }
    }

    /// `Γ = max Γ_i`, `γ = Γ - max(Γ_i - γ_i)`; the neutral element is
    /// `(0, 0)`.
    pub fn combine(items: impl IntoIterator<Item = GammaPair>) -> GammaPair {
        let items: Vec<GammaPair> = items.into_iter().collect();
        let big = items.iter().map(|g| g.big).max().unwrap_or(0);
        let loss = items.iter().map(|g| g.big - g.small).max().unwrap_or(0);
        GammaPair { big, small: big - loss }
    }
}

impl fmt::Display for GammaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gamma={} gamma={}", self.big, self.small)
    }
}

/// Folds a reduction tree bottom-up.
pub fn gamma_of_node(node: &ReductionNode) -> GammaPair {
    match node.kind {
        NodeKind::Leaf => GammaPair::ZERO,
        NodeKind::Split => GammaPair::combine(node.children.iter().map(gamma_of_node)),
        NodeKind::Reduce => match node.r.and_then(|r| r.finite()) {
            None => GammaPair::ZERO,
            Some(r) => {
                let inner = GammaPair::combine(node.children.iter().map(gamma_of_node));
                GammaPair::new(inner.big + node.label as u32 * r, inner.small + r)
            }
        },
    }
}

/// Largest finite contact order between roots recorded by the tree: the
/// accumulated `r` above each vertex where clusters separate.
pub fn tree_mbar(node: &ReductionNode) -> u32 {
    fn go(n: &ReductionNode, acc: u32) -> u32 {
        let acc = match (n.kind, n.r) {
            (NodeKind::Reduce, Some(r)) => match r.finite() {
                Some(r) => acc + r,
                None => return 0,
            },
            _ => acc,
        };
        let here = if n.children.len() >= 2 { acc } else { 0 };
        n.children.iter().map(|c| go(c, acc)).fold(here, u32::max)
    }
    go(node, 0)
}

/// Local analysis at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRegularity {
    pub t0: String,
    #[serde(flatten)]
    pub pair: GammaPair,
    pub left: GammaPair,
    pub right: GammaPair,
    pub mbar: u32,
    pub type_a: bool,
    pub tree_left: ReductionTree,
    pub tree_right: ReductionTree,
    /// Outcome of the two-sided reduction step when all roots coincide.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_issue: Option<String>,
}

/// `Γ_{t0}, γ_{t0}` from the one-sided trees; when they differ the
/// conservative combination is used.
pub fn gamma_at(p: &MonicCurve, t0: &Rational, cfg: &Config) -> Result<GammaPair> {
    Ok(analyze_point(p, t0, false, cfg)?.pair)
}

/// Trees, budgets and the two-sided reduction check at `t0`. `numeric`
/// selects binary64 germs, for rational proxies of irrational points.
pub fn analyze_point(p: &MonicCurve, t0: &Rational, numeric: bool, cfg: &Config) -> Result<PointRegularity> {
    let tl = build_side_tree_with(p, t0, Side::Left, cfg, numeric)?;
    let tr = build_side_tree_with(p, t0, Side::Right, cfg, numeric)?;
    let (gl, gr) = (gamma_of_node(&tl.root), gamma_of_node(&tr.root));
    let pair = GammaPair::combine([gl, gr]);
    let mut issue = None;
    if !numeric && tr.root.kind == NodeKind::Reduce && tl.root.kind == NodeKind::Reduce {
        match reduce_once(p, t0, GERM_ORDER) {
            Ok(_) => {}
            Err(e) if e.is_hypothesis_failure() => issue = Some(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(PointRegularity {
        t0: format_rational(t0),
        pair,
        left: gl,
        right: gr,
        mbar: tree_mbar(&tl.root).max(tree_mbar(&tr.root)),
        type_a: tl.type_a() && tr.type_a(),
        tree_left: tl,
        tree_right: tr,
        hypothesis_issue: issue,
    })
}

/// `Γ, γ` over the candidate points.
pub fn gamma_global(points: &[GammaPair]) -> GammaPair {
    GammaPair::combine(points.iter().copied())
}

/// Smoothness class of a coefficient at a point or globally: `C^k`, and
/// whether the `k`-th derivative is additionally Lipschitz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessClass {
    /// `None` for `C^∞`.
    pub k: Option<u32>,
    pub lipschitz: bool,
}

impl SmoothnessClass {
    pub const SMOOTH: SmoothnessClass = SmoothnessClass { k: None, lipschitz: false };

    pub fn min(self, other: Self) -> Self {
        match (self.k, other.k) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) if a < b => self,
            (Some(a), Some(b)) if b < a => other,
            _ => SmoothnessClass { k: self.k, lipschitz: self.lipschitz && other.lipschitz },
        }
    }

    /// Whether the class contains `C^j`-ness, i.e. `j ≤ k`.
    pub fn at_least(self, j: u64) -> bool {
        self.k.is_none_or(|k| j <= k as u64)
    }
}

impl fmt::Display for SmoothnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.lipschitz) {
            (None, _) => write!(f, "C^inf"),
            (Some(k), true) => write!(f, "C^{{{k},1}}"),
            (Some(k), false) => write!(f, "C^{k}"),
        }
    }
}

/// Class of `f` at an interior point from the first exponent where the
/// one-sided germs fail to be one analytic germ: an integer mismatch `q`
/// gives `C^{q-1,1}`, a fractional exponent `α` gives `C^{⌊α⌋}`.
pub fn class_at(f: &PiecewiseGermFunction, t0: &Rational) -> Result<SmoothnessClass> {
    let (l, r) = match (f.germ_at(t0, Side::Left, GERM_ORDER), f.germ_at(t0, Side::Right, GERM_ORDER)) {
        (Ok(l), Ok(r)) => (l.map(|c| c.to_numeric()), r.map(|c| c.to_numeric())),
        _ => (
            f.germ_at_numeric(t0, Side::Left, GERM_ORDER)?.prune(1e-12),
            f.germ_at_numeric(t0, Side::Right, GERM_ORDER)?.prune(1e-12),
        ),
    };
    let exact = f.germ_at(t0, Side::Left, GERM_ORDER).is_ok() && f.germ_at(t0, Side::Right, GERM_ORDER).is_ok();
    let mut exps: Vec<Rational> = l.poly.terms().iter().chain(r.poly.terms()).map(|t| t.alpha.clone()).collect();
    exps.sort();
    exps.dedup();
    let tol = if exact { 0.0 } else { 1e-9 };
    for a in exps {
        if !a.is_integer() {
            return Ok(SmoothnessClass { k: Some(floor_i64(&a) as u32), lipschitz: false });
        }
        let cl = l.poly.coeff_at(&a);
        let cr = r.poly.coeff_at(&a);
        let sign = if a.to_integer() % 2u8 == 0.into() { 1.0 } else { -1.0 };
        if (cr - sign * cl).abs() > tol * (1.0 + cr.abs()) {
            let q = a.to_integer().try_into().unwrap_or(u32::MAX);
            return Ok(if q == 0 {
                SmoothnessClass { k: Some(0), lipschitz: false }
            } else {
                SmoothnessClass { k: Some(q - 1), lipschitz: true }
            });
        }
    }
    let order = [&l.order, &r.order].into_iter().flatten().min().cloned();
    Ok(match order {
        Some(o) => SmoothnessClass { k: Some(floor_i64(&o).max(0) as u32), lipschitz: false },
        None => SmoothnessClass::SMOOTH,
    })
}

/// Class of all coefficients on the open interval: minimum over interior
/// breakpoints.
pub fn coefficient_class(p: &MonicCurve, lo: &Rational, hi: &Rational) -> Result<SmoothnessClass> {
    let mut cls = SmoothnessClass::SMOOTH;
    for b in p.breakpoints().iter().filter(|b| *b > lo && *b < hi) {
        for a in p.coeffs() {
            cls = cls.min(class_at(a, b)?);
        }
    }
    Ok(cls)
}

/// One instantiated theorem implication.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuaranteeLine {
    pub id: &'static str,
    pub hypothesis: String,
    pub conclusion: String,
    pub applicable: bool,
    pub note: String,
}

impl fmt::Display for GuaranteeLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.applicable { "applies" } else { "n/a" };
        write!(f, "[{}] {}: {} => {}", self.id, mark, self.hypothesis, self.conclusion)?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub degree: usize,
    pub interval: [String; 2],
    pub coefficient_class: SmoothnessClass,
    pub critical_points: Vec<CriticalPoint>,
    pub points: Vec<PointRegularity>,
    pub mbar: u32,
    #[serde(flatten)]
    pub global: GammaPair,
    pub d_n: u64,
    pub type_a: bool,
    pub e_infinity_empty: bool,
    pub hyperbolic: bool,
    pub hypotheses_met: bool,
    pub issues: Vec<String>,
    pub lines: Vec<GuaranteeLine>,
}

impl RegularityReport {
    pub fn line(&self, id: &str) -> Option<&GuaranteeLine> {
        self.lines.iter().find(|l| l.id == id)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("degree {} on ({}, {})\n", self.degree, self.interval[0], self.interval[1]));
        s.push_str(&format!("coefficients {}\n", self.coefficient_class));
        s.push_str(&format!("{} mbar={} d(n)={} typeA={} E_inf_empty={}\n", self.global, self.mbar, self.d_n, self.type_a, self.e_infinity_empty));
        for p in &self.points {
            s.push_str(&format!("t0={} {} mbar={} typeA={}\n", p.t0, p.pair, p.mbar, p.type_a));
            for (name, t) in [("left", &p.tree_left), ("right", &p.tree_right)] {
                s.push_str(&format!("  {name} tree:\n"));
                for line in t.render_ascii().lines() {
                    s.push_str(&format!("    {line}\n"));
                }
            }
            if let Some(i) = &p.hypothesis_issue {
                s.push_str(&format!("  hypotheses unmet: {i}\n"));
            }
        }
        for i in &self.issues {
            s.push_str(&format!("issue: {i}\n"));
        }
        for l in &self.lines {
            s.push_str(&format!("{l}\n"));
        }
        s
    }
}

fn class_name(k: u64) -> String {
    format!("C^{k}")
}

/// Emits the theorem lines for the computed quantities.
#[allow(clippy::too_many_arguments)]
pub fn guarantee_lines(
    n: usize,
    cls: SmoothnessClass,
    global: GammaPair,
    mbar: u32,
    type_a: bool,
    e_inf_empty: bool,
    hyperbolic: bool,
    n2_mbar_f: Option<u32>,
) -> Vec<GuaranteeLine> {
    let dn = d(n as u64);
    let big = global.big as u64;
    let small = global.small as u64;
    let mut out = Vec::new();
    let budget = |need: u64| -> Option<i64> { cls.k.map(|k| k as i64 - need as i64) };
    let finite_line = |id: &'static str, need: u64, gain: u64, gate: bool, gate_note: &str| -> GuaranteeLine {
        let hyp = format!("coefficients C^(p+{need})");
        match budget(need) {
            None => GuaranteeLine {
                id,
                hypothesis: format!("{hyp} for every p"),
                conclusion: format!("roots admit C^(p+{gain}) parameterization for every p, i.e. C^inf"),
                applicable: gate && hyperbolic,
                note: gate_note.into(),
            },
            Some(p) => GuaranteeLine {
                id,
                hypothesis: format!("{hyp} with p={p} (coefficients are {cls})"),
                conclusion: if p >= 1 {
                    format!("roots admit {} parameterization", class_name(p as u64 + gain))
                } else {
                    "no guarantee (p < 1)".into()
                },
                applicable: gate && hyperbolic && p >= 1,
                note: gate_note.into(),
            },
        }
    };
    if let Some(mf) = n2_mbar_f {
        let mf = mf as u64;
        let mut l = finite_line("n2", 2 * mf, mf, true, &format!("mbar(f)={mf}"));
        if cls.k.is_none() {
            l.conclusion = "roots admit C^inf parameterization".into();
        }
        out.push(l);
    }
    out.push(GuaranteeLine {
        id: "main1",
        hypothesis: "coefficients C^inf".into(),
        conclusion: "roots admit C^inf parameterization".into(),
        applicable: cls.k.is_none() && hyperbolic,
        note: String::new(),
    });
    out.push(finite_line("main2", 1 + dn * mbar as u64, 0, true, &format!("d(n)={dn}, mbar={mbar}")));
    out.push(finite_line("sharp", big, small, true, &format!("Gamma={big}, gamma={small}")));
    out.push(GuaranteeLine {
        id: "bronshtein",
        hypothesis: format!("coefficients C^{n}"),
        conclusion: "roots admit C^1 parameterization".into(),
        applicable: hyperbolic && cls.at_least(n as u64),
        note: String::new(),
    });
    let e_note = if e_inf_empty { "E_inf empty" } else { "E_inf nonempty" };
    out.push(finite_line("Cp", big, 0, e_inf_empty, &format!("Gamma_J={big}, {e_note}")));
    let gate = e_inf_empty && type_a;
    out.push(finite_line(
        "fidiff",
        big,
        small,
        gate,
        &format!("Gamma_J={big}, gamma_J={small}, typeA={type_a}, {e_note}"),
    ));
    out
}

/// Full analysis of `P` on `(lo, hi)`.
pub fn smoothness_report(p: &MonicCurve, lo: &Rational, hi: &Rational, declared: &[Rational], cfg: &Config) -> Result<RegularityReport> {
    if lo >= hi {
        return Err(Error::Invalid("empty interval".into()));
    }
    let n = p.degree();
    let crit = locate_critical_points(p, lo, hi, declared, cfg)?;
    let mut issues = Vec::new();
    // hyperbolicity on segment midpoints and critical points
    let mut probes = segment_midpoints(lo, hi, &crit);
    probes.extend(crit.iter().filter_map(|c| c.exact.clone()));
    let mut hyperbolic = true;
    for t in &probes {
        let v = sylvester_test(p, t, cfg)?;
        if !v.hyperbolic {
            hyperbolic = false;
            issues.push(format!("not hyperbolic at t = {}", format_rational(t)));
            break;
        }
    }
    let cls = coefficient_class(p, lo, hi)?;
    let mut points = Vec::new();
    if hyperbolic {
        for c in &crit {
            match analyze_point(p, &c.proxy, c.exact.is_none(), cfg) {
                Ok(pr) => {
                    if let Some(i) = &pr.hypothesis_issue {
                        issues.push(format!("t = {}: {i}", pr.t0));
                    }
                    points.push(pr);
                }
                Err(e) if e.is_hypothesis_failure() => issues.push(format!("t = {}: {e}", c.label())),
                Err(e) => return Err(e),
            }
        }
    }
    let global = gamma_global(&points.iter().map(|p| p.pair).collect::<Vec<_>>());
    let mbar = points.iter().map(|p| p.mbar).max().unwrap_or(0);
    let type_a = points.iter().all(|p| p.type_a);
    let e_inf_empty = crit.iter().all(|c| !c.e_infinity);
    let n2 = if n == 2 && hyperbolic {
        // x^2 - f after the shift, f = a1^2/4 - a2
        let f = p.a(1).mul(p.a(1))?.scale(&Rational::new(1.into(), 4.into())).sub(p.a(2))?;
        Some(mbar_of_function(&f, lo, hi, cfg)?)
    } else {
        None
    };
    let hypotheses_met = issues.is_empty();
    let lines = guarantee_lines(n, cls, global, mbar, type_a, e_inf_empty, hyperbolic && hypotheses_met, n2);
    Ok(RegularityReport {
        degree: n,
        interval: [format_rational(lo), format_rational(hi)],
        coefficient_class: cls,
        critical_points: crit,
        points,
        mbar,
        global,
        d_n: d(n as u64),
        type_a,
        e_infinity_empty: e_inf_empty,
        hyperbolic,
        hypotheses_met,
        issues,
        lines,
    })
}

/// The bound chain `γ ≤ Γ ≤ d(n)·m̄ + 1`.
pub fn bound_chain_holds(n: usize, g: GammaPair, mbar: u32) -> bool {
    g.small <= g.big && g.big as u64 <= d(n as u64) * mbar as u64 + 1
}
