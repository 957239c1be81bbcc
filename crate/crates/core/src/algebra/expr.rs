use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::element::{lit_to_element, Cursor};
use super::{AlgebraError, FiniteGroup, GroupElement};

/// Which leaf family an atom belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    S,
    Delta,
    G,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::S => "S",
            Flavor::Delta => "Δ",
            Flavor::G => "G",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Trivial,
    Cyclic(u64),
    FreeAbelian(usize),
    /// The subgroup `mZ` of `Z`.
    ScaledZ(u64),
    Atom {
        label: String,
        flavor: Flavor,
        assignment: Option<Arc<FiniteGroup>>,
    },
    Product(Vec<GroupExpr>),
    /// `B^n x| Z`, with `Z` shifting coordinates mod `n`.
    WrZ {
        base: Box<GroupExpr>,
        n: usize,
    },
    /// `B^n x| Z_n`.
    WrCyc {
        base: Box<GroupExpr>,
        n: usize,
    },
    /// `B^(n*m) x| Z^2`.
    WrZ2 {
        base: Box<GroupExpr>,
        n: usize,
        m: usize,
    },
    /// `B^(n*m) x| (Z_n x Z_m)`.
    WrCycPair {
        base: Box<GroupExpr>,
        n: usize,
        m: usize,
    },
    CentralQuotient {
        base: Box<GroupExpr>,
        generator: GroupElement,
    },
}

impl GroupExpr {
    /// Direct product; an empty list is the trivial group and a single
    /// factor is returned unchanged.
    pub fn product(mut factors: Vec<GroupExpr>) -> GroupExpr {
        match factors.len() {
            0 => GroupExpr::Trivial,
            1 => factors.pop().unwrap(),
            _ => GroupExpr::Product(factors),
        }
    }

    /// `k`-fold direct power.
    pub fn power(x: &GroupExpr, k: usize) -> GroupExpr {
        GroupExpr::product(vec![x.clone(); k])
    }

    pub fn atom(label: impl Into<String>, flavor: Flavor) -> GroupExpr {
        GroupExpr::Atom {
            label: label.into(),
            flavor,
            assignment: None,
        }
    }

    pub fn assigned_atom(label: impl Into<String>, flavor: Flavor, group: Arc<FiniteGroup>) -> GroupExpr {
        GroupExpr::Atom {
            label: label.into(),
            flavor,
            assignment: Some(group),
        }
    }

    pub fn wr_z(base: GroupExpr, n: usize) -> GroupExpr {
        GroupExpr::WrZ {
            base: Box::new(base),
            n,
        }
    }

    pub fn wr_cyc(base: GroupExpr, n: usize) -> GroupExpr {
        GroupExpr::WrCyc {
            base: Box::new(base),
            n,
        }
    }

    pub fn wr_z2(base: GroupExpr, n: usize, m: usize) -> GroupExpr {
        GroupExpr::WrZ2 {
            base: Box::new(base),
            n,
            m,
        }
    }

    pub fn wr_cyc_pair(base: GroupExpr, n: usize, m: usize) -> GroupExpr {
        GroupExpr::WrCycPair {
            base: Box::new(base),
            n,
            m,
        }
    }

    /// Quotient of `base` by the cyclic subgroup generated by `generator`,
    /// which must be central and of infinite order.
    pub fn central_quotient(base: GroupExpr, generator: GroupElement) -> Result<GroupExpr, AlgebraError> {
        super::check_shape(&base, &generator)?;
        if base.contains_quotient() {
            return Err(AlgebraError::InvalidExpr(
                "nested central quotients are not supported".into(),
            ));
        }
        if !super::is_central(&base, &generator)? {
            return Err(AlgebraError::NotCentral(generator.to_string()));
        }
        let exponent = base.torsion_exponent()?;
        let probe = super::pow(&base, &generator, exponent as i64)?;
        if probe == super::identity(&base) {
            return Err(AlgebraError::FiniteOrderGenerator(generator.to_string()));
        }
        Ok(GroupExpr::CentralQuotient {
            base: Box::new(base),
            generator,
        })
    }

    fn contains_quotient(&self) -> bool {
        match self {
            GroupExpr::CentralQuotient { .. } => true,
            GroupExpr::Product(fs) => fs.iter().any(GroupExpr::contains_quotient),
            GroupExpr::WrZ { base, .. }
            | GroupExpr::WrCyc { base, .. }
            | GroupExpr::WrZ2 { base, .. }
            | GroupExpr::WrCycPair { base, .. } => base.contains_quotient(),
            _ => false,
        }
    }

    /// A multiple of the order of every torsion element.
    fn torsion_exponent(&self) -> Result<u64, AlgebraError> {
        let overflow = || AlgebraError::Overflow(format!("torsion exponent of {self}"));
        Ok(match self {
            GroupExpr::Trivial | GroupExpr::FreeAbelian(_) | GroupExpr::ScaledZ(_) => 1,
            GroupExpr::Cyclic(n) => *n,
            // powers of an element with symbolic atom coordinates fail in
            // `multiply` unless those coordinates are the identity
            GroupExpr::Atom { assignment, .. } => assignment.as_ref().map_or(1, |g| g.order() as u64),
            GroupExpr::Product(fs) => {
                let mut e = 1u64;
                for f in fs {
                    e = num_integer::lcm(e, f.torsion_exponent()?);
                }
                e
            }
            GroupExpr::WrZ { base, .. } | GroupExpr::WrZ2 { base, .. } => base.torsion_exponent()?,
            GroupExpr::WrCyc { base, n } => base.torsion_exponent()?.checked_mul(*n as u64).ok_or_else(overflow)?,
            GroupExpr::WrCycPair { base, n, m } => base
                .torsion_exponent()?
                .checked_mul((*n * *m) as u64)
                .ok_or_else(overflow)?,
            GroupExpr::CentralQuotient { .. } => {
                return Err(AlgebraError::InvalidExpr(
                    "torsion exponent of a quotient is not tracked".into(),
                ))
            }
        })
    }

    /// True if the expression has no infinite factors.
    pub fn is_finite(&self) -> bool {
        match self {
            GroupExpr::Trivial | GroupExpr::Cyclic(_) | GroupExpr::Atom { .. } => true,
            GroupExpr::FreeAbelian(r) => *r == 0,
            GroupExpr::ScaledZ(_) | GroupExpr::WrZ { .. } | GroupExpr::WrZ2 { .. } => false,
            GroupExpr::Product(fs) => fs.iter().all(GroupExpr::is_finite),
            GroupExpr::WrCyc { base, .. } | GroupExpr::WrCycPair { base, .. } => base.is_finite(),
            GroupExpr::CentralQuotient { .. } => false,
        }
    }

    /// Replaces every atom's assignment using `assign(label, flavor)`.
    pub fn with_assignments(
        &self,
        assign: &dyn Fn(&str, Flavor) -> Option<Arc<FiniteGroup>>,
    ) -> Result<GroupExpr, AlgebraError> {
        Ok(match self {
            GroupExpr::Atom { label, flavor, .. } => GroupExpr::Atom {
                label: label.clone(),
                flavor: *flavor,
                assignment: assign(label, *flavor),
            },
            GroupExpr::Product(fs) => GroupExpr::Product(
                fs.iter()
                    .map(|f| f.with_assignments(assign))
                    .collect::<Result<_, _>>()?,
            ),
            GroupExpr::WrZ { base, n } => GroupExpr::wr_z(base.with_assignments(assign)?, *n),
            GroupExpr::WrCyc { base, n } => GroupExpr::wr_cyc(base.with_assignments(assign)?, *n),
            GroupExpr::WrZ2 { base, n, m } => GroupExpr::wr_z2(base.with_assignments(assign)?, *n, *m),
            GroupExpr::WrCycPair { base, n, m } => GroupExpr::wr_cyc_pair(base.with_assignments(assign)?, *n, *m),
            GroupExpr::CentralQuotient { base, generator } => {
                GroupExpr::central_quotient(base.with_assignments(assign)?, generator.clone())?
            }
            other => other.clone(),
        })
    }

    /// Labels of all atoms, in tree order (with repetition).
    pub fn atoms(&self) -> Vec<(String, Flavor)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<(String, Flavor)>) {
        match self {
            GroupExpr::Atom { label, flavor, .. } => out.push((label.clone(), *flavor)),
            GroupExpr::Product(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            GroupExpr::WrZ { base, .. }
            | GroupExpr::WrCyc { base, .. }
            | GroupExpr::WrZ2 { base, .. }
            | GroupExpr::WrCycPair { base, .. }
            | GroupExpr::CentralQuotient { base, .. } => base.collect_atoms(out),
            _ => {}
        }
    }

    /// Parses the canonical expression grammar.
    pub fn parse(src: &str) -> Result<GroupExpr, AlgebraError> {
        let mut cur = Cursor::new(src);
        let e = parse_product(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(e)
    }
}

fn parse_product(cur: &mut Cursor) -> Result<GroupExpr, AlgebraError> {
    let mut factors = vec![parse_factor(cur)?];
    while cur.eat("*") {
        factors.push(parse_factor(cur)?);
    }
    Ok(GroupExpr::product(factors))
}

fn parse_factor(cur: &mut Cursor) -> Result<GroupExpr, AlgebraError> {
    let usize_arg = |cur: &mut Cursor| -> Result<usize, AlgebraError> { Ok(cur.positive()? as usize) };
    if cur.eat("(") {
        let e = parse_product(cur)?;
        cur.expect(")")?;
        return Ok(e);
    }
    if cur.eat("Atom(") {
        let flavor = if cur.eat("S") {
            Flavor::S
        } else if cur.eat("Δ") || cur.eat("Delta") {
            Flavor::Delta
        } else if cur.eat("G") {
            Flavor::G
        } else {
            return Err(cur.error("expected atom flavor S, Δ or G"));
        };
        cur.expect(":")?;
        cur.skip_ws();
        let label: String = cur
            .rest()
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .collect();
        if label.is_empty() {
            return Err(cur.error("expected atom label"));
        }
        cur.eat(&label);
        cur.expect(")")?;
        return Ok(GroupExpr::atom(label, flavor));
    }
    for (kw, two) in [("wrZ2(", true), ("wrCP(", true), ("wrZ(", false), ("wrC(", false)] {
        if cur.eat(kw) {
            let base = parse_product(cur)?;
            cur.expect(";")?;
            let n = usize_arg(cur)?;
            let m = if two {
                cur.expect(",")?;
                usize_arg(cur)?
            } else {
                0
            };
            cur.expect(")")?;
            return Ok(match kw {
                "wrZ2(" => GroupExpr::wr_z2(base, n, m),
                "wrCP(" => GroupExpr::wr_cyc_pair(base, n, m),
                "wrZ(" => GroupExpr::wr_z(base, n),
                _ => GroupExpr::wr_cyc(base, n),
            });
        }
    }
    if cur.eat("quot(") {
        let base = parse_product(cur)?;
        cur.expect(";")?;
        cur.expect("gen=")?;
        let lit = cur.lit()?;
        cur.expect(")")?;
        let generator = lit_to_element(&base, &lit)?;
        return GroupExpr::central_quotient(base, generator);
    }
    if cur.eat("Z_") {
        return Ok(GroupExpr::Cyclic(cur.positive()?));
    }
    if cur.eat("Z^") {
        let r = cur.int()?;
        if r < 0 {
            return Err(cur.error("rank must be nonnegative"));
        }
        return Ok(GroupExpr::FreeAbelian(r as usize));
    }
    if cur.eat("Z") {
        return Ok(GroupExpr::FreeAbelian(1));
    }
    let k = cur.positive()?;
    if cur.eat("Z") {
        return Ok(GroupExpr::ScaledZ(k));
    }
    if k == 1 {
        return Ok(GroupExpr::Trivial);
    }
    Err(cur.error("expected a group expression"))
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => write!(f, "1"),
            GroupExpr::Cyclic(n) => write!(f, "Z_{n}"),
            GroupExpr::FreeAbelian(1) => write!(f, "Z"),
            GroupExpr::FreeAbelian(r) => write!(f, "Z^{r}"),
            GroupExpr::ScaledZ(m) => write!(f, "{m}Z"),
            GroupExpr::Atom { label, flavor, .. } => write!(f, "Atom({flavor}:{label})"),
            GroupExpr::Product(fs) => {
                if fs.is_empty() {
                    return write!(f, "1");
                }
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if matches!(x, GroupExpr::Product(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            GroupExpr::WrZ { base, n } => write!(f, "wrZ({base};{n})"),
            GroupExpr::WrCyc { base, n } => write!(f, "wrC({base};{n})"),
            GroupExpr::WrZ2 { base, n, m } => write!(f, "wrZ2({base};{n},{m})"),
            GroupExpr::WrCycPair { base, n, m } => write!(f, "wrCP({base};{n},{m})"),
            GroupExpr::CentralQuotient { base, generator } => write!(f, "quot({base};gen={generator})"),
        }
    }
}

impl FromStr for GroupExpr {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupExpr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "1",
            "Z",
            "Z^3",
            "Z_5",
            "3Z",
            "Atom(S:D1)",
            "Atom(Δ:Y12)*Atom(G:Y12)",
            "wrC(Z_2;3)",
            "wrZ2(Atom(S:D1)*Atom(S:D2);1,2)",
            "wrCP(Z_2;2,1)",
            "(Z*Z_2)*2Z",
            "wrZ((Atom(S:Y11)*Atom(S:Y11))*2Z;2)",
            "quot(Z*Z;gen=(1,1))",
        ] {
            let e = GroupExpr::parse(src).unwrap();
            assert_eq!(e.to_string(), src);
        }
    }

    #[test]
    fn delta_ascii_spelling() {
        assert_eq!(
            GroupExpr::parse("Atom(Delta:D1)").unwrap(),
            GroupExpr::atom("D1", Flavor::Delta)
        );
    }

    #[test]
    fn product_normalization() {
        assert_eq!(GroupExpr::product(vec![]), GroupExpr::Trivial);
        assert_eq!(GroupExpr::product(vec![GroupExpr::Cyclic(3)]), GroupExpr::Cyclic(3));
        assert_eq!(GroupExpr::power(&GroupExpr::FreeAbelian(1), 2).to_string(), "Z*Z");
    }

    #[test]
    fn rejects_bad_quotients() {
        let base = GroupExpr::product(vec![GroupExpr::Cyclic(2), GroupExpr::FreeAbelian(1)]);
        let g = GroupElement::parse(&base, "(1,(0))").unwrap();
        assert!(matches!(
            GroupExpr::central_quotient(base, g),
            Err(AlgebraError::FiniteOrderGenerator(_))
        ));
        let wr = GroupExpr::wr_z(GroupExpr::Cyclic(2), 2);
        let g = GroupElement::parse(&wr, "((1,0),0)").unwrap();
        assert!(matches!(
            GroupExpr::central_quotient(wr, g),
            Err(AlgebraError::NotCentral(_))
        ));
    }

    #[test]
    fn parse_errors() {
        for src in ["", "wrC(Z_2)", "Atom(X:D1)", "Z_0", "2", "Z*", "quot(Z;gen=(1,2))"] {
            assert!(GroupExpr::parse(src).is_err(), "{src}");
        }
    }
}
