use std::sync::Arc;

use super::AlgebraError;

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        let inverse = (0..n).map(|a| ((n - a) % n) as u32).collect();
        Self {
            name: format!("Z_{n}"),
            order: n,
            table,
            inverse,
            generators: if n > 1 { vec![1] } else { vec![] },
        }
    }

    /// Builds a group from a row-major multiplication table, checking the
    /// group axioms with 0 as identity.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self, AlgebraError> {
        let name = name.into();
        let bad = |why: &str| AlgebraError::InvalidExpr(format!("table for {name}: {why}"));
        if order == 0 || table.len() != order * order {
            return Err(bad("wrong size"));
        }
        if table.iter().any(|&v| v as usize >= order) {
            return Err(bad("entry out of range"));
        }
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        if (0..order).any(|a| mul(0, a) != a || mul(a, 0) != a) {
            return Err(bad("0 is not the identity"));
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order).find(|&b| mul(a, b) == 0 && mul(b, a) == 0);
            inverse.push(inv.ok_or_else(|| bad("missing inverse"))? as u32);
        }
        // greedy generating set
        let mut reached = vec![false; order];
        reached[0] = true;
        let mut generators = Vec::new();
        for g in 1..order {
            if reached[g] {
                continue;
            }
            generators.push(g as u32);
            let mut stack: Vec<usize> = (0..order).filter(|&x| reached[x]).collect();
            while let Some(x) = stack.pop() {
                for &s in &generators {
                    let y = mul(x, s as usize);
                    if !reached[y] {
                        reached[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        Ok(Self {
            name,
            order,
            table,
            inverse,
            generators,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    fn is_hom_to(&self, target: &FiniteGroup, map: &[u32]) -> bool {
        map.len() == self.order
            && map.iter().all(|&v| (v as usize) < target.order)
            && (0..self.order as u32).all(|a| {
                (0..self.order as u32)
                    .all(|b| map[self.mul(a, b) as usize] == target.mul(map[a as usize], map[b as usize]))
            })
    }
}

/// Finite stand-ins `delta -> s -> g` for the three leaf groups of one disk,
/// with `incl` injective, `proj` surjective and `image(incl) = ker(proj)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafTriple {
    pub delta: Arc<FiniteGroup>,
    pub s: Arc<FiniteGroup>,
    pub g: Arc<FiniteGroup>,
    pub incl: Vec<u32>,
    pub proj: Vec<u32>,
}

impl LeafTriple {
    pub fn new(
        delta: FiniteGroup,
        s: FiniteGroup,
        g: FiniteGroup,
        incl: Vec<u32>,
        proj: Vec<u32>,
    ) -> Result<Self, AlgebraError> {
        let err =
            |why: &str| AlgebraError::IncompatibleLeaves(format!("{} -> {} -> {}: {why}", delta.name, s.name, g.name));
        if !delta.is_hom_to(&s, &incl) {
            return Err(err("inclusion is not a homomorphism"));
        }
        if !s.is_hom_to(&g, &proj) {
            return Err(err("projection is not a homomorphism"));
        }
        let mut seen = vec![false; s.order];
        for &v in &incl {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(err("inclusion is not injective"));
            }
        }
        let mut hit = vec![false; g.order];
        for &v in &proj {
            hit[v as usize] = true;
        }
        if hit.contains(&false) {
            return Err(err("projection is not surjective"));
        }
        let kernel: Vec<bool> = proj.iter().map(|&v| v == 0).collect();
        if kernel != seen {
            return Err(err("image of the inclusion differs from the kernel of the projection"));
        }
        Ok(Self {
            delta: Arc::new(delta),
            s: Arc::new(s),
            g: Arc::new(g),
            incl,
            proj,
        })
    }

    /// `Z_{s/g} -> Z_s -> Z_g` via `k -> g*k` and reduction mod `g`.
    pub fn cyclic(s: usize, g: usize) -> Result<Self, AlgebraError> {
        if g == 0 || s == 0 || !s.is_multiple_of(g) {
            return Err(AlgebraError::IncompatibleLeaves(format!(
                "Z_{g} is not a quotient of Z_{s}"
            )));
        }
        let d = s / g;
        Self::new(
            FiniteGroup::cyclic(d),
            FiniteGroup::cyclic(s),
            FiniteGroup::cyclic(g),
            (0..d).map(|k| (g * k) as u32).collect(),
            (0..s).map(|k| (k % g) as u32).collect(),
        )
    }
}

impl Default for LeafTriple {
    /// `2Z_4 -> Z_4 -> Z_2`.
    fn default() -> Self {
        Self::cyclic(4, 2).expect("valid default triple")
    }
}
