use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    canonicalize, enumerate_truncated, invariant_factors, multiply, pow, random_element, window_size, GroupElement,
    GroupExpr,
};

use super::diagram::BlockShape;
use super::DeformationError;

/// Windows larger than this are sampled instead of enumerated.
const SECTION_WINDOW_LIMIT: u128 = 20_000;
const SECTION_PAIRS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    /// Rank of `Δ_Y^n` with free abelian leaves.
    pub delta_rank: usize,
    /// Free rank of `Δ_Y^n / <garside>`.
    pub quotient_rank: usize,
    /// Garside element in the standard basis (one step per `mZ` factor).
    pub generator: Vec<i64>,
    pub invariant_factors: Vec<i64>,
    pub primitive: bool,
    pub torsion_free: bool,
    pub section_checked: usize,
    pub section_failures: Vec<String>,
}

impl SplitReport {
    pub fn passes(&self) -> bool {
        self.primitive
            && self.torsion_free
            && self.quotient_rank + 1 == self.delta_rank
            && self.section_failures.is_empty()
    }
}

/// Builds `Δ_Y^n` with every leaf `Z^leaf_rank` and checks that the Garside
/// element spans a direct summand: its Smith form is `(1)`, the quotient has
/// rank one less and no torsion, and taking canonical coset representatives
/// is a homomorphic section on the `[-trunc, trunc]` window.
pub fn theta_splitting_check(
    n: u64,
    blocks: &[BlockShape],
    leaf_rank: usize,
    trunc: u32,
) -> Result<SplitReport, DeformationError> {
    if blocks.is_empty() {
        return Err(DeformationError::EmptyDecomposition);
    }
    if n == 0 || blocks.iter().any(|b| b.c == 0 || b.m == 0) {
        return Err(DeformationError::InvalidArgument(
            "cyclic index and every class shape must be positive".into(),
        ));
    }
    let leaf = if leaf_rank == 0 {
        GroupExpr::Trivial
    } else {
        GroupExpr::FreeAbelian(leaf_rank)
    };
    let leaf_el = if leaf_rank == 0 {
        GroupElement::Unit
    } else {
        GroupElement::Vector(vec![0; leaf_rank])
    };
    let collapse = |mut v: Vec<GroupElement>| {
        if v.len() == 1 {
            v.pop().unwrap()
        } else {
            GroupElement::Tuple(v)
        }
    };
    let mut factors = Vec::new();
    let mut block_els = Vec::new();
    let mut generator = Vec::new();
    for b in blocks {
        let leaves = GroupExpr::power(&leaf, b.c);
        factors.push(GroupExpr::Product(vec![
            GroupExpr::power(&leaves, b.m as usize),
            GroupExpr::ScaledZ(b.m),
        ]));
        let unit = collapse(vec![collapse(vec![leaf_el.clone(); b.c]); b.m as usize]);
        block_els.push(GroupElement::Tuple(vec![unit, GroupElement::Int(b.m as i64)]));
        generator.extend(std::iter::repeat_n(0, leaf_rank * b.c * b.m as usize));
        generator.push(1);
    }
    let dy = GroupExpr::product(factors);
    let dy_n = GroupExpr::power(&dy, n as usize);
    let garside = collapse(vec![collapse(block_els); n as usize]);
    let generator: Vec<i64> = (0..n).flat_map(|_| generator.iter().copied()).collect();

    let factors = invariant_factors(std::slice::from_ref(&generator));
    let nonzero = factors.iter().filter(|&&d| d != 0).count();
    let delta_rank = generator.len();
    let quotient = GroupExpr::central_quotient(dy_n.clone(), garside.clone())?;

    // canonical representatives: x = rep * garside^k, and rep is multiplicative
    let mut failures = Vec::new();
    let mut note = |msg: String| {
        if failures.len() < 5 {
            failures.push(msg);
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    let sample: Vec<GroupElement> = if window_size(&dy_n, trunc)? <= SECTION_WINDOW_LIMIT {
        enumerate_truncated(&dy_n, trunc)?
    } else {
        (0..SECTION_WINDOW_LIMIT as usize)
            .map(|_| random_element(&dy_n, &mut rng, trunc))
            .collect::<Result<_, _>>()?
    };
    let part = |x: &GroupElement, i: usize| match x {
        GroupElement::Tuple(parts) => parts[i].clone(),
        other => unreachable!("{other} is not a tuple"),
    };
    // mZ coordinate of the first class in the first copy, in steps of m
    let first_step = |x: &GroupElement| -> Result<i64, DeformationError> {
        let mut cur = x.clone();
        if n > 1 {
            cur = part(&cur, 0);
        }
        if blocks.len() > 1 {
            cur = part(&cur, 0);
        }
        match part(&cur, 1) {
            GroupElement::Int(v) => Ok(v / blocks[0].m as i64),
            other => Err(DeformationError::InvalidArgument(format!(
                "unexpected coordinate {other}"
            ))),
        }
    };
    for x in &sample {
        let rep = canonicalize(&quotient, x)?;
        if first_step(&rep)? != 0 {
            note(format!("representative {rep} of {x} is off the section"));
            continue;
        }
        let k = first_step(x)?;
        if multiply(&dy_n, &rep, &pow(&dy_n, &garside, k)?)? != *x {
            note(format!("{x} is not {rep} times a power of the generator"));
        }
    }
    for _ in 0..SECTION_PAIRS {
        let x = random_element(&dy_n, &mut rng, trunc)?;
        let y = random_element(&dy_n, &mut rng, trunc)?;
        let lhs = canonicalize(&quotient, &multiply(&dy_n, &x, &y)?)?;
        let rhs = multiply(&dy_n, &canonicalize(&quotient, &x)?, &canonicalize(&quotient, &y)?)?;
        if lhs != rhs {
            note(format!("section is not multiplicative on {x}, {y}"));
        }
    }

    Ok(SplitReport {
        delta_rank,
        quotient_rank: delta_rank - nonzero,
        generator,
        primitive: factors.iter().all(|&d| d == 1),
        torsion_free: factors.iter().all(|&d| d <= 1),
        invariant_factors: factors,
        section_checked: sample.len(),
        section_failures: failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(c: usize, m: u64) -> BlockShape {
        BlockShape { c, m }
    }

    #[test]
    fn single_block_rank_zero() {
        let r = theta_splitting_check(1, &[shape(1, 1)], 0, 4).unwrap();
        assert_eq!((r.delta_rank, r.quotient_rank), (1, 0));
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn two_copies_rank_zero() {
        let r = theta_splitting_check(2, &[shape(1, 1)], 0, 4).unwrap();
        assert_eq!(r.generator, vec![1, 1]);
        assert_eq!(r.quotient_rank, 1);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn two_classes_rank_one() {
        let r = theta_splitting_check(1, &[shape(1, 2), shape(1, 3)], 1, 2).unwrap();
        assert_eq!(r.delta_rank, 2 + 1 + 3 + 1);
        assert_eq!(r.quotient_rank, 6);
        assert!(r.passes(), "{r:?}");
    }
}
