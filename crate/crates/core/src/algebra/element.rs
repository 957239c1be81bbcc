use std::fmt;

use super::{AlgebraError, GroupExpr};

/// An element of a [`GroupExpr`], shaped like the expression tree.
///
/// Elements of a central quotient are stored as the canonical
/// representative in the base group, so they share the base's shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Unit,
    /// Element of `Z_n`, reduced into `0..n`.
    Residue(u64),
    /// Element of `mZ`, stored by its value (a multiple of `m`).
    Int(i64),
    Vector(Vec<i64>),
    /// Element id of a leaf group; 0 is the identity.
    Atom(u32),
    Tuple(Vec<GroupElement>),
    /// Coordinate vector and outer part of a wreath product element; the
    /// outer part has one entry for the one-dimensional wreath products and
    /// two for the two-dimensional ones.
    Wreath {
        base: Vec<GroupElement>,
        outer: Vec<i64>,
    },
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Unit => write!(f, "()"),
            GroupElement::Residue(r) => write!(f, "{r}"),
            GroupElement::Int(v) => write!(f, "{v}"),
            GroupElement::Atom(id) => write!(f, "{id}"),
            GroupElement::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            GroupElement::Vector(v) => join(f, v),
            GroupElement::Tuple(xs) => join(f, xs),
            GroupElement::Wreath { base, outer } => {
                write!(f, "(")?;
                join(f, base)?;
                write!(f, ",")?;
                if outer.len() == 1 {
                    write!(f, "{}", outer[0])?;
                } else {
                    join(f, outer)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Untyped literal tree: integers and parenthesized tuples.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Lit {
    Int(i64),
    Tuple(Vec<Lit>),
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<(), AlgebraError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    pub(crate) fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {} of {:?}", self.pos, self.src))
    }

    pub(crate) fn int(&mut self) -> Result<i64, AlgebraError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        let text = &rest[..len];
        let v = text.parse().map_err(|_| self.error("expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    pub(crate) fn positive(&mut self) -> Result<u64, AlgebraError> {
        let v = self.int()?;
        if v < 1 {
            return Err(self.error("expected positive integer"));
        }
        Ok(v as u64)
    }

    pub(crate) fn lit(&mut self) -> Result<Lit, AlgebraError> {
        if self.eat("(") {
            let mut items = Vec::new();
            if self.eat(")") {
                return Ok(Lit::Tuple(items));
            }
            loop {
                items.push(self.lit()?);
                if self.eat(")") {
                    return Ok(Lit::Tuple(items));
                }
                self.expect(",")?;
            }
        }
        Ok(Lit::Int(self.int()?))
    }
}

fn lit_ints(lit: &Lit, len: usize) -> Option<Vec<i64>> {
    match lit {
        Lit::Int(v) if len == 1 => Some(vec![*v]),
        Lit::Tuple(xs) if xs.len() == len => xs
            .iter()
            .map(|x| match x {
                Lit::Int(v) => Some(*v),
                Lit::Tuple(_) => None,
            })
            .collect(),
        _ => None,
    }
}

fn lit_items(lit: &Lit, len: usize) -> Option<Vec<&Lit>> {
    match lit {
        Lit::Tuple(xs) if xs.len() == len => Some(xs.iter().collect()),
        // a single coordinate may drop its parentheses
        other if len == 1 => Some(vec![other]),
        _ => None,
    }
}

impl Lit {
    fn describe(&self) -> String {
        match self {
            Lit::Int(v) => v.to_string(),
            Lit::Tuple(xs) => format!("({})", xs.iter().map(Lit::describe).collect::<Vec<_>>().join(",")),
        }
    }
}

pub(crate) fn lit_to_element(expr: &GroupExpr, lit: &Lit) -> Result<GroupElement, AlgebraError> {
    let bad = || AlgebraError::ShapeMismatch {
        expr: expr.to_string(),
        element: lit.describe(),
    };
    let el = match expr {
        GroupExpr::Trivial => match lit {
            Lit::Tuple(xs) if xs.is_empty() => GroupElement::Unit,
            Lit::Int(0) => GroupElement::Unit,
            _ => return Err(bad()),
        },
        GroupExpr::Cyclic(n) => match lit {
            Lit::Int(v) => GroupElement::Residue(v.rem_euclid(*n as i64) as u64),
            _ => return Err(bad()),
        },
        GroupExpr::FreeAbelian(r) => {
            if *r == 0 {
                match lit {
                    Lit::Tuple(xs) if xs.is_empty() => GroupElement::Vector(vec![]),
                    _ => return Err(bad()),
                }
            } else {
                GroupElement::Vector(lit_ints(lit, *r).ok_or_else(bad)?)
            }
        }
        GroupExpr::ScaledZ(m) => match lit {
            Lit::Int(v) if v.rem_euclid(*m as i64) == 0 => GroupElement::Int(*v),
            _ => return Err(bad()),
        },
        GroupExpr::Atom { assignment, .. } => match lit {
            Lit::Int(v) if *v >= 0 => {
                let bound = assignment.as_ref().map_or(2, |g| g.order() as i64);
                if *v >= bound {
                    return Err(bad());
                }
                GroupElement::Atom(*v as u32)
            }
            _ => return Err(bad()),
        },
        GroupExpr::Product(fs) => match lit {
            Lit::Tuple(xs) if xs.len() == fs.len() => GroupElement::Tuple(
                fs.iter()
                    .zip(xs)
                    .map(|(f, x)| lit_to_element(f, x))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(bad()),
        },
        GroupExpr::WrZ { base, n } | GroupExpr::WrCyc { base, n } => {
            let Lit::Tuple(parts) = lit else { return Err(bad()) };
            let [coords, Lit::Int(a)] = parts.as_slice() else {
                return Err(bad());
            };
            let coords = lit_items(coords, *n).ok_or_else(bad)?;
            let base_el = coords
                .into_iter()
                .map(|c| lit_to_element(base, c))
                .collect::<Result<_, _>>()?;
            let a = if matches!(expr, GroupExpr::WrCyc { .. }) {
                a.rem_euclid(*n as i64)
            } else {
                *a
            };
            GroupElement::Wreath {
                base: base_el,
                outer: vec![a],
            }
        }
        GroupExpr::WrZ2 { base, n, m } | GroupExpr::WrCycPair { base, n, m } => {
            let Lit::Tuple(parts) = lit else { return Err(bad()) };
            let [coords, outer] = parts.as_slice() else {
                return Err(bad());
            };
            let coords = lit_items(coords, n * m).ok_or_else(bad)?;
            let outer = lit_ints(outer, 2).ok_or_else(bad)?;
            let base_el = coords
                .into_iter()
                .map(|c| lit_to_element(base, c))
                .collect::<Result<_, _>>()?;
            let outer = if matches!(expr, GroupExpr::WrCycPair { .. }) {
                vec![outer[0].rem_euclid(*n as i64), outer[1].rem_euclid(*m as i64)]
            } else {
                outer
            };
            GroupElement::Wreath { base: base_el, outer }
        }
        GroupExpr::CentralQuotient { base, .. } => {
            let rep = lit_to_element(base, lit)?;
            return super::canonicalize(expr, &rep);
        }
    };
    Ok(el)
}

impl GroupElement {
    /// Parses an element literal against the shape of `expr`.
    pub fn parse(expr: &GroupExpr, src: &str) -> Result<Self, AlgebraError> {
        let mut cur = Cursor::new(src);
        let lit = cur.lit()?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        lit_to_element(expr, &lit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        let e = GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 2);
        let x = GroupElement::parse(&e, "((1,0),1)").unwrap();
        assert_eq!(
            x,
            GroupElement::Wreath {
                base: vec![GroupElement::Residue(1), GroupElement::Residue(0)],
                outer: vec![1]
            }
        );
        assert_eq!(x.to_string(), "((1,0),1)");
        let p = GroupExpr::product(vec![GroupExpr::Trivial, GroupExpr::FreeAbelian(2)]);
        let y = GroupElement::parse(&p, "((), (3, -1))").unwrap();
        assert_eq!(y.to_string(), "((),(3,-1))");
    }

    #[test]
    fn single_coordinate_wreath() {
        let e = GroupExpr::wr_z(GroupExpr::ScaledZ(2), 1);
        let x = GroupElement::parse(&e, "((4),-3)").unwrap();
        assert_eq!(x.to_string(), "((4),-3)");
        assert_eq!(GroupElement::parse(&e, "(4,-3)").unwrap(), x);
        assert!(GroupElement::parse(&e, "((3),0)").is_err());
    }

    #[test]
    fn bad_literals() {
        let e = GroupExpr::FreeAbelian(2);
        assert!(GroupElement::parse(&e, "(1,2,3)").is_err());
        assert!(GroupElement::parse(&e, "(1,2").is_err());
        assert!(GroupElement::parse(&e, "(1,2) x").is_err());
        assert!(GroupElement::parse(&GroupExpr::Trivial, "(1)").is_err());
    }
}
