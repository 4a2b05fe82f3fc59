//! The labeled rooted tree of successive reductions and splittings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Config;
use crate::curves::{GenPoly, MonicCurve, Side};
use crate::error::{Error, Result};
use crate::multiplicity::{generic_rank, mult_at, Mult};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::symmetric::discriminant_curves;

use super::combinatorics::d;
use super::lift::{split_clusters, Factors};
use super::local::{reduce_side, LocalCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Leaf,
    Reduce,
    Split,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionNode {
    pub label: usize,
    pub kind: NodeKind,
    /// Reduction order on reduce nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Mult>,
    /// Translation `a_1/m` at `t0` applied before the node's step.
    pub shift: String,
    /// Set when all roots of the factor agree identically (`r = ∞`).
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub identically_equal: bool,
    /// Whether the factor germs were computed in exact arithmetic.
    pub exact: bool,
    /// Rendered coefficient germs `a_1, .., a_m` of the factor.
    #[serde(skip)]
    pub germs: Vec<String>,
    pub children: Vec<ReductionNode>,
}

impl ReductionNode {
    /// Shape-only node, for trees assembled by hand.
    pub fn shape(label: usize, children: Vec<ReductionNode>) -> Self {
        let kind = if children.is_empty() { NodeKind::Leaf } else { NodeKind::Split };
        ReductionNode { label, kind, r: None, shift: "0".into(), identically_equal: false, exact: true, germs: vec![], children }
    }

    pub fn leaf() -> Self {
        Self::shape(1, vec![])
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// Sum of all labels `≥ 2` in the subtree.
    pub fn label_sum(&self) -> usize {
        let own = if self.label >= 2 { self.label } else { 0 };
        own + self.children.iter().map(ReductionNode::label_sum).sum::<usize>()
    }

    /// Same labels, kinds and reduction orders throughout.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.label == other.label
            && self.kind == other.kind
            && self.r == other.r
            && self.children.len() == other.children.len()
            && self.children.iter().zip(&other.children).all(|(a, b)| a.same_shape(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeSide {
    Left,
    Right,
    TwoSided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTree {
    pub root: ReductionNode,
    #[serde(serialize_with = "crate::multiplicity::ser_rational")]
    pub t0: Rational,
    pub side: TreeSide,
    pub height: usize,
    /// Labels at each distance from the root.
    pub levels: Vec<Vec<usize>>,
}

impl ReductionTree {
    pub fn new(root: ReductionNode, t0: Rational, side: TreeSide) -> Self {
        let height = root.height();
        let mut levels: Vec<Vec<usize>> = Vec::new();
        let mut frontier = vec![&root];
        while !frontier.is_empty() {
            levels.push(frontier.iter().map(|n| n.label).collect());
            frontier = frontier.iter().flat_map(|n| n.children.iter()).collect();
        }
        ReductionTree { root, t0, side, height, levels }
    }

    /// Condition (A): every level `k ≤ height - 2` holds at most one
    /// vertex with label `≥ 2`.
    pub fn type_a(&self) -> bool {
        type_a_check(&self.root)
    }

    pub fn render_ascii(&self) -> String {
        render_ascii(&self.root)
    }
}

pub fn type_a_check(root: &ReductionNode) -> bool {
    let tree = ReductionTree::new(root.clone(), Rational::from_integer(0.into()), TreeSide::TwoSided);
    let h = tree.height;
    tree.levels
        .iter()
        .take((h + 1).saturating_sub(2))
        .all(|lv| lv.iter().filter(|&&l| l >= 2).count() <= 1)
}

/// One node per line as `label[r=..]`, indented two spaces per level.
pub fn render_ascii(root: &ReductionNode) -> String {
    fn go(n: &ReductionNode, depth: usize, out: &mut String) {
        let _ = write!(out, "{}{}", "  ".repeat(depth), n.label);
        if let Some(r) = n.r {
            let _ = write!(out, "[r={r}]");
        }
        out.push('\n');
        for c in &n.children {
            go(c, depth + 1, out);
        }
    }
    let mut s = String::new();
    go(root, 0, &mut s);
    s
}

pub fn render_germ<C: Scalar>(p: &GenPoly<C>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .iter()
        .map(|t| {
            if t.alpha == Rational::from_integer(0.into()) {
                t.coeff.render()
            } else {
                format!("{}*s^{}", t.coeff.render(), format_rational(&t.alpha))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Build parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeContext {
    pub truncation: Rational,
    pub depth_cap: usize,
    pub tol: f64,
    pub cfg: Config,
}

/// `⌊m_{t0}(Δ̃_s)/2⌋` for the generic rank `s`, used to size the lifting
/// order and depth cap.
pub fn mbar_hint(p: &MonicCurve, t0: &Rational) -> Result<u32> {
    let discs = discriminant_curves(p)?;
    let s = generic_rank(&discs);
    Ok(mult_at(&discs[s - 1], t0)?.value.finite().unwrap_or(0) / 2)
}

/// Default lifting order `max(8, 2(d(n)·m̄ + n))`.
pub fn default_truncation(n: usize, mbar: u32) -> u32 {
    (2 * (d(n as u64) as u32 * mbar + n as u32)).max(8)
}

impl TreeContext {
    pub fn for_curve(p: &MonicCurve, t0: &Rational, cfg: &Config) -> Result<Self> {
        let n = p.degree();
        let mbar = mbar_hint(p, t0)?;
        let k = cfg.truncation.unwrap_or_else(|| default_truncation(n, mbar));
        Ok(TreeContext {
            truncation: Rational::from_integer(k.into()),
            depth_cap: d(n as u64) as usize * mbar as usize + n,
            tol: cfg.tau_lift,
            cfg: cfg.clone(),
        })
    }
}

fn build_node<C: Scalar>(c: &LocalCurve<C>, ctx: &TreeContext, depth: usize) -> Result<ReductionNode> {
    let m = c.degree();
    let (sh, h) = c.shifted();
    let germs = c.a.iter().map(|g| render_germ(&g.poly)).collect();
    let mut node = ReductionNode {
        label: m,
        kind: NodeKind::Leaf,
        r: None,
        shift: h.render(),
        identically_equal: false,
        exact: C::EXACT,
        germs,
        children: vec![],
    };
    if m == 1 {
        return Ok(node);
    }
    if depth >= ctx.depth_cap {
        return Err(Error::DepthExceeded(ctx.depth_cap));
    }
    let scale = 1.0 + sh.values_at_zero().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let target = if sh.roots_coincide_at_zero(ctx.tol * scale) {
        node.kind = NodeKind::Reduce;
        let (r, q) = reduce_side(&sh, ctx.tol)?;
        node.r = Some(r);
        match q {
            None => {
                node.identically_equal = true;
                return Ok(node);
            }
            Some(q) => q,
        }
    } else {
        node.kind = NodeKind::Split;
        sh
    };
    node.children = match split_clusters(&target, &ctx.truncation, &ctx.cfg)? {
        Factors::Exact(v) => v.iter().map(|cl| build_node(&cl.factor, ctx, depth + 1)).collect::<Result<_>>()?,
        Factors::Numeric(v) => v.iter().map(|cl| build_node(&cl.factor, ctx, depth + 1)).collect::<Result<_>>()?,
    };
    Ok(node)
}

/// One-sided tree from germs of `P` at `t0`; exact germs when every
/// coefficient expands rationally, floating germs otherwise. A truncation
/// that proves too short is doubled up to three times.
pub fn build_side_tree(p: &MonicCurve, t0: &Rational, side: Side, cfg: &Config) -> Result<ReductionTree> {
    build_side_tree_with(p, t0, side, cfg, false)
}

/// As [`build_side_tree`]; `numeric` converts the exact germs at `t0` to
/// binary64 first, for rational proxies of irrational points.
pub fn build_side_tree_with(p: &MonicCurve, t0: &Rational, side: Side, cfg: &Config, numeric: bool) -> Result<ReductionTree> {
    let mut ctx = TreeContext::for_curve(p, t0, cfg)?;
    let mut last = None;
    for _ in 0..4 {
        let order: u32 = ctx.truncation.to_integer().try_into().unwrap_or(u32::MAX);
        let res = match LocalCurve::from_curve(p, t0, side, order) {
            Ok(c) if numeric => build_node(&c.to_numeric(), &ctx, 0),
            Ok(c) => build_node(&c, &ctx, 0),
            Err(Error::Unsupported(_)) => {
                let order = order.min(crate::curves::function::MAX_NUMERIC_TAYLOR_ORDER);
                build_node(&LocalCurve::from_curve_numeric(p, t0, side, order)?, &ctx, 0)
            }
            Err(e) => Err(e),
        };
        match res {
            Ok(root) => {
                let s = if side == Side::Left { TreeSide::Left } else { TreeSide::Right };
                return Ok(ReductionTree::new(root, t0.clone(), s));
            }
            Err(e @ (Error::NoConvergence(_) | Error::LiftDidNotConverge(_))) => {
                last = Some(e);
                ctx.truncation = &ctx.truncation * Rational::from_integer(2.into());
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `T(P, t0)`. Two-sided trees exist when both one-sided trees agree in
/// shape; otherwise the discrepancy is reported.
pub fn build_tree(p: &MonicCurve, t0: &Rational, side: TreeSide, cfg: &Config) -> Result<ReductionTree> {
    match side {
        TreeSide::Left => build_side_tree(p, t0, Side::Left, cfg),
        TreeSide::Right => build_side_tree(p, t0, Side::Right, cfg),
        TreeSide::TwoSided => {
            let l = build_side_tree(p, t0, Side::Left, cfg)?;
            let r = build_side_tree(p, t0, Side::Right, cfg)?;
            if !l.root.same_shape(&r.root) {
                return Err(Error::Discontinuous(format!(
                    "left and right reduction trees differ at t = {}",
                    format_rational(t0)
                )));
            }
            let mut root = r.root;
            root.exact &= l.root.exact;
            Ok(ReductionTree::new(root, t0.clone(), TreeSide::TwoSided))
        }
    }
}

/// The two trees drawn in the standard illustration of condition (A).
pub fn figure_trees() -> (ReductionNode, ReductionNode) {
    use ReductionNode as N;
    let two = || N::shape(2, vec![N::leaf(), N::leaf()]);
    let three = N::shape(3, vec![N::leaf(), N::leaf(), N::leaf()]);
    let five = N::shape(5, vec![three, two()]);
    let left = N::shape(8, vec![five, N::leaf(), N::leaf(), N::leaf()]);
    let four = N::shape(4, vec![two(), two()]);
    let right = N::shape(6, vec![four, two()]);
    (left, right)
}
