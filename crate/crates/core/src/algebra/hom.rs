use std::collections::BTreeMap;
use std::fmt;

use super::{canonicalize, identity, multiply, pow, AlgebraError, GroupElement, GroupExpr};

/// How a [`Homomorphism`] acts on elements, interpreted structurally against
/// its source and target expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomRule {
    Identity,
    /// Leaf-wise map given by per-label tables on atom element ids;
    /// atoms and products are matched position by position.
    LeafMap {
        name: String,
        tables: BTreeMap<String, Vec<u32>>,
    },
    /// Maps coordinates by `inner` and reduces the outer part into the
    /// target's outer group (`Z -> Z_n`, `Z^2 -> Z_n x Z_m`, or unchanged).
    Wreath(Box<HomRule>),
    /// Source `Z^r` (or `mZ`, counted in steps of `m`): the i-th unit vector
    /// maps to `images[i]`. A trivial source with no images is the trivial map.
    Include(Vec<GroupElement>),
    /// Product projection onto factor `i`.
    Project(usize),
    /// Product to product, one rule per factor.
    Factorwise(Vec<HomRule>),
    /// Source product to a single target: the image of `(x_1, ..., x_k)` is
    /// `rule_1(x_1) * ... * rule_k(x_k)`.
    ProductOfImages(Vec<HomRule>),
    /// Source `X^N` into the coordinates of a target wreath product with `N`
    /// base copies, outer part zero.
    IntoBase(Box<HomRule>),
    /// `X^m x mZ -> Y wr_m Z`: `(x_0..x_{m-1}, s) -> (inner(x_i), s)`.
    BlockEmbed(Box<HomRule>),
    /// Applies `inner` to representatives: a quotient source contributes its
    /// canonical representative and a quotient target canonicalizes the image.
    Cosets(Box<HomRule>),
}

impl HomRule {
    pub fn leaf_map(name: impl Into<String>, tables: BTreeMap<String, Vec<u32>>) -> Self {
        HomRule::LeafMap {
            name: name.into(),
            tables,
        }
    }

    pub fn mod_reduce() -> Self {
        HomRule::Wreath(Box::new(HomRule::Identity))
    }

    pub fn quotient_project() -> Self {
        HomRule::Cosets(Box::new(HomRule::Identity))
    }
}

impl fmt::Display for HomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, rules: &[HomRule]| {
            write!(f, "{name}[")?;
            for (i, r) in rules.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, "]")
        };
        match self {
            HomRule::Identity => write!(f, "identity"),
            HomRule::LeafMap { name, .. } => write!(f, "leafmap({name})"),
            HomRule::Wreath(inner) if **inner == HomRule::Identity => write!(f, "mod_reduce"),
            HomRule::Wreath(inner) => write!(f, "wreath({inner})"),
            HomRule::Include(images) => {
                write!(f, "include[")?;
                for (i, x) in images.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            HomRule::Project(i) => write!(f, "project({i})"),
            HomRule::Factorwise(rules) => list(f, "factorwise", rules),
            HomRule::ProductOfImages(rules) => list(f, "product_of_images", rules),
            HomRule::IntoBase(inner) => write!(f, "into_base({inner})"),
            HomRule::BlockEmbed(inner) => write!(f, "block_embed({inner})"),
            HomRule::Cosets(inner) if **inner == HomRule::Identity => write!(f, "quotient_project"),
            HomRule::Cosets(inner) => write!(f, "cosets({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: GroupExpr,
    pub target: GroupExpr,
    pub rule: HomRule,
}

impl Homomorphism {
    pub fn new(source: GroupExpr, target: GroupExpr, rule: HomRule) -> Self {
        Self { source, target, rule }
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, AlgebraError> {
        hom_apply(self, x)
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)
    }
}

pub fn hom_apply(h: &Homomorphism, x: &GroupElement) -> Result<GroupElement, AlgebraError> {
    super::check_shape(&h.source, x)?;
    apply_rule(&h.rule, &h.source, &h.target, x)
}

fn ill_typed(source: &GroupExpr, target: &GroupExpr, detail: impl Into<String>) -> AlgebraError {
    AlgebraError::IllTypedRule {
        source_expr: source.to_string(),
        target: target.to_string(),
        detail: detail.into(),
    }
}

fn wreath_parts(e: &GroupExpr) -> Option<(&GroupExpr, usize, Vec<Option<i64>>)> {
    match e {
        GroupExpr::WrZ { base, n } => Some((base, *n, vec![None])),
        GroupExpr::WrCyc { base, n } => Some((base, *n, vec![Some(*n as i64)])),
        GroupExpr::WrZ2 { base, n, m } => Some((base, n * m, vec![None, None])),
        GroupExpr::WrCycPair { base, n, m } => Some((base, n * m, vec![Some(*n as i64), Some(*m as i64)])),
        _ => None,
    }
}

/// Splits an element of `X^k` (a `k`-fold power, collapsed when `k = 1`).
fn power_parts(x: &GroupElement, k: usize) -> Option<Vec<GroupElement>> {
    if k == 1 {
        return Some(vec![x.clone()]);
    }
    match x {
        GroupElement::Tuple(xs) if xs.len() == k => Some(xs.clone()),
        _ => None,
    }
}

fn power_factor(e: &GroupExpr, k: usize) -> Option<&GroupExpr> {
    if k == 1 {
        return Some(e);
    }
    match e {
        GroupExpr::Product(fs) if fs.len() == k && fs.iter().all(|f| *f == fs[0]) => Some(&fs[0]),
        _ => None,
    }
}

fn apply_rule(
    rule: &HomRule,
    source: &GroupExpr,
    target: &GroupExpr,
    x: &GroupElement,
) -> Result<GroupElement, AlgebraError> {
    let bad = |detail: &str| ill_typed(source, target, detail);
    match rule {
        HomRule::Identity => Ok(x.clone()),
        HomRule::LeafMap { tables, .. } => match (source, target, x) {
            (GroupExpr::Trivial, GroupExpr::Trivial, _) => Ok(GroupElement::Unit),
            (GroupExpr::Atom { label, .. }, GroupExpr::Atom { .. }, GroupElement::Atom(id)) => {
                match tables.get(label) {
                    Some(t) => t
                        .get(*id as usize)
                        .map(|&v| GroupElement::Atom(v))
                        .ok_or_else(|| bad("element id outside the leaf table")),
                    None if *id == 0 => Ok(GroupElement::Atom(0)),
                    None => Err(AlgebraError::UnassignedAtom(label.clone())),
                }
            }
            (GroupExpr::Product(fs), GroupExpr::Product(gs), GroupElement::Tuple(xs)) if fs.len() == gs.len() => {
                Ok(GroupElement::Tuple(
                    fs.iter()
                        .zip(gs)
                        .zip(xs)
                        .map(|((f, g), x)| apply_rule(rule, f, g, x))
                        .collect::<Result<_, _>>()?,
                ))
            }
            _ => Err(bad("leaf map needs matching atoms")),
        },
        HomRule::Wreath(inner) => {
            let (sb, sn, _) = wreath_parts(source).ok_or_else(|| bad("source is not a wreath product"))?;
            let (tb, tn, moduli) = wreath_parts(target).ok_or_else(|| bad("target is not a wreath product"))?;
            let GroupElement::Wreath { base, outer } = x else {
                return Err(bad("element is not a wreath element"));
            };
            if sn != tn || outer.len() != moduli.len() {
                return Err(bad("wreath products differ in size"));
            }
            let coords = base
                .iter()
                .map(|g| apply_rule(inner, sb, tb, g))
                .collect::<Result<_, _>>()?;
            let outer = outer
                .iter()
                .zip(&moduli)
                .map(|(&a, m)| m.map_or(a, |m| a.rem_euclid(m)))
                .collect();
            Ok(GroupElement::Wreath { base: coords, outer })
        }
        HomRule::Include(images) => {
            let steps: Vec<i64> = match (source, x) {
                (GroupExpr::FreeAbelian(r), GroupElement::Vector(v)) if v.len() == *r => v.clone(),
                (GroupExpr::ScaledZ(m), GroupElement::Int(v)) => vec![v / *m as i64],
                (GroupExpr::Trivial, GroupElement::Unit) => vec![],
                _ => return Err(bad("include needs a free abelian source")),
            };
            if steps.len() != images.len() {
                return Err(bad("wrong number of generator images"));
            }
            let mut acc = identity(target);
            for (img, k) in images.iter().zip(steps) {
                acc = multiply(target, &acc, &pow(target, img, k)?)?;
            }
            Ok(acc)
        }
        HomRule::Project(i) => match (source, x) {
            (GroupExpr::Product(fs), GroupElement::Tuple(xs)) if *i < fs.len() && xs.len() == fs.len() => {
                Ok(xs[*i].clone())
            }
            _ => Err(bad("projection index out of range")),
        },
        HomRule::Factorwise(rules) => match (source, target, x) {
            (GroupExpr::Product(fs), GroupExpr::Product(gs), GroupElement::Tuple(xs))
                if fs.len() == rules.len() && gs.len() == rules.len() =>
            {
                Ok(GroupElement::Tuple(
                    rules
                        .iter()
                        .zip(fs.iter().zip(gs))
                        .zip(xs)
                        .map(|((r, (f, g)), x)| apply_rule(r, f, g, x))
                        .collect::<Result<_, _>>()?,
                ))
            }
            _ => Err(bad("factorwise needs products of equal length")),
        },
        HomRule::ProductOfImages(rules) => match (source, x) {
            (GroupExpr::Product(fs), GroupElement::Tuple(xs)) if fs.len() == rules.len() => {
                let mut acc = identity(target);
                for ((r, f), x) in rules.iter().zip(fs).zip(xs) {
                    acc = multiply(target, &acc, &apply_rule(r, f, target, x)?)?;
                }
                Ok(acc)
            }
            _ => Err(bad("product of images needs a product source")),
        },
        HomRule::IntoBase(inner) => {
            let (tb, copies, moduli) = wreath_parts(target).ok_or_else(|| bad("target is not a wreath product"))?;
            let factor = power_factor(source, copies).ok_or_else(|| bad("source is not a matching power"))?;
            let parts = power_parts(x, copies).ok_or_else(|| bad("element is not a matching power"))?;
            let coords = parts
                .iter()
                .map(|p| apply_rule(inner, factor, tb, p))
                .collect::<Result<_, _>>()?;
            Ok(GroupElement::Wreath {
                base: coords,
                outer: vec![0; moduli.len()],
            })
        }
        HomRule::BlockEmbed(inner) => {
            let GroupExpr::WrZ { base: tb, n } = target else {
                return Err(bad("block target must be a wrZ product"));
            };
            let (GroupExpr::Product(fs), GroupElement::Tuple(xs)) = (source, x) else {
                return Err(bad("block source must be a product"));
            };
            let (Some(block), Some(GroupExpr::ScaledZ(m)), Some(GroupElement::Int(s))) =
                (fs.first(), fs.get(1), xs.get(1))
            else {
                return Err(bad("block source must be X^m x mZ"));
            };
            if fs.len() != 2 || *m as usize != *n {
                return Err(bad("block size mismatch"));
            }
            let factor = power_factor(block, *n).ok_or_else(|| bad("block is not a matching power"))?;
            let parts = power_parts(&xs[0], *n).ok_or_else(|| bad("element is not a matching power"))?;
            let coords = parts
                .iter()
                .map(|p| apply_rule(inner, factor, tb, p))
                .collect::<Result<_, _>>()?;
            Ok(GroupElement::Wreath {
                base: coords,
                outer: vec![*s],
            })
        }
        HomRule::Cosets(inner) => {
            let src = match source {
                GroupExpr::CentralQuotient { base, .. } => base.as_ref(),
                other => other,
            };
            let tgt = match target {
                GroupExpr::CentralQuotient { base, .. } => base.as_ref(),
                other => other,
            };
            let image = apply_rule(inner, src, tgt, x)?;
            canonicalize(target, &image)
        }
    }
}
