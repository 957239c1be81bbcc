use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{enumerate_truncated, hom_apply, identity, AlgebraError, Homomorphism};

const MAX_COUNTEREXAMPLES: usize = 5;

/// Outcome of checking `A --first--> B --second--> C` for short exactness on
/// the `[-trunc, trunc]` windows of `A`, `B` and `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub injective: bool,
    pub surjective: bool,
    pub image_equals_kernel: bool,
    pub counterexamples: Vec<String>,
    pub window_sizes: [usize; 3],
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.injective && self.surjective && self.image_equals_kernel
    }
}

pub fn check_exact(first: &Homomorphism, second: &Homomorphism, trunc: u32) -> Result<ExactnessReport, AlgebraError> {
    if first.target != second.source {
        return Err(AlgebraError::IllTypedRule {
            source_expr: first.target.to_string(),
            target: second.source.to_string(),
            detail: "first map's target is not the second map's source".into(),
        });
    }
    let a_els = enumerate_truncated(&first.source, trunc)?;
    let b_els = enumerate_truncated(&second.source, trunc)?;
    let c_els = enumerate_truncated(&second.target, trunc)?;
    let e_c = identity(&second.target);
    let mut counterexamples = Vec::new();
    let mut note = |msg: String| {
        if counterexamples.len() < MAX_COUNTEREXAMPLES {
            counterexamples.push(msg);
        }
    };

    let mut injective = true;
    let mut composite_trivial = true;
    let mut image = HashMap::with_capacity(a_els.len());
    for a in &a_els {
        let b = hom_apply(first, a)?;
        if let Some(prev) = image.get(&b) {
            injective = false;
            note(format!("first map sends {prev} and {a} to {b}"));
            continue;
        }
        let c = hom_apply(second, &b)?;
        if c != e_c {
            composite_trivial = false;
            note(format!("composite sends {a} to {c}"));
        }
        image.insert(b, a.clone());
    }

    let mut kernel_in_image = true;
    let mut hit = HashSet::with_capacity(c_els.len());
    for b in &b_els {
        let c = hom_apply(second, b)?;
        if c == e_c && !image.contains_key(b) {
            kernel_in_image = false;
            note(format!("{b} lies in the kernel but not in the image"));
        }
        hit.insert(c);
    }

    let mut surjective = true;
    for c in &c_els {
        if !hit.contains(c) {
            if !second.source.is_finite() {
                return Err(AlgebraError::WindowTooSmall(format!(
                    "no preimage of {c} with coordinates in [-{trunc}, {trunc}]"
                )));
            }
            surjective = false;
            note(format!("{c} is not in the image of the second map"));
        }
    }

    Ok(ExactnessReport {
        injective,
        surjective,
        image_equals_kernel: composite_trivial && kernel_in_image,
        counterexamples,
        window_sizes: [a_els.len(), b_els.len(), c_els.len()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Flavor, GroupExpr, HomRule, LeafTriple};

    fn leaf_maps() -> (Homomorphism, Homomorphism) {
        let t = LeafTriple::default();
        let d = GroupExpr::assigned_atom("L", Flavor::Delta, t.delta.clone());
        let s = GroupExpr::assigned_atom("L", Flavor::S, t.s.clone());
        let g = GroupExpr::assigned_atom("L", Flavor::G, t.g.clone());
        let incl = HomRule::leaf_map("incl", [("L".to_string(), t.incl.clone())].into());
        let proj = HomRule::leaf_map("proj", [("L".to_string(), t.proj.clone())].into());
        (Homomorphism::new(d, s.clone(), incl), Homomorphism::new(s, g, proj))
    }

    #[test]
    fn trivial_then_identity() {
        let g = GroupExpr::Cyclic(3);
        let first = Homomorphism::new(GroupExpr::Trivial, g.clone(), HomRule::Include(vec![]));
        let second = Homomorphism::new(g.clone(), g, HomRule::Identity);
        assert!(check_exact(&first, &second, 1).unwrap().is_exact());
    }

    #[test]
    fn two_into_four_onto_two() {
        let (incl, proj) = leaf_maps();
        let r = check_exact(&incl, &proj, 1).unwrap();
        assert!(r.is_exact(), "{r:?}");
        assert_eq!(r.window_sizes, [2, 4, 2]);
    }

    #[test]
    fn failures_are_reported() {
        let (_, proj) = leaf_maps();
        let zero = Homomorphism::new(GroupExpr::Trivial, proj.source.clone(), HomRule::Include(vec![]));
        let r = check_exact(&zero, &proj, 1).unwrap();
        assert!(r.injective && r.surjective);
        assert!(!r.image_equals_kernel);
        assert!(!r.counterexamples.is_empty());

        let (incl, _) = leaf_maps();
        let mismatch = check_exact(&incl, &incl, 1);
        assert!(matches!(mismatch, Err(AlgebraError::IllTypedRule { .. })));
    }

    #[test]
    fn unbounded_preimages_need_a_wide_window() {
        // Z --x3--> Z --id--> Z is never surjective on a window
        let z = GroupExpr::FreeAbelian(1);
        let first = Homomorphism::new(GroupExpr::Trivial, z.clone(), HomRule::Include(vec![]));
        let triple = Homomorphism::new(
            z.clone(),
            z.clone(),
            HomRule::Include(vec![crate::algebra::GroupElement::Vector(vec![3])]),
        );
        assert!(matches!(
            check_exact(&first, &triple, 2),
            Err(AlgebraError::WindowTooSmall(_))
        ));
    }
}
