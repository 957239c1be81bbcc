use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    canonicalize, check_exact, enumerate_truncated, hom_apply, identity, is_central, multiply, AlgebraError,
    GroupElement, GroupExpr, HomRule, Homomorphism,
};

use super::DeformationError;
use super::{Diagram, DiagramShape, LeafAssignments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    pub counterexample: Option<String>,
}

impl CheckResult {
    fn pass() -> Self {
        Self {
            status: CheckStatus::Pass,
            counterexample: None,
        }
    }

    fn fail(counterexample: String) -> Self {
        Self {
            status: CheckStatus::Fail,
            counterexample: Some(counterexample),
        }
    }

    fn from_first_failure(failure: Option<String>) -> Self {
        failure.map_or_else(Self::pass, Self::fail)
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub checks: BTreeMap<String, CheckResult>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, r)| !r.passed())
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

fn exactness(first: &Homomorphism, second: &Homomorphism, trunc: u32) -> Result<CheckResult, AlgebraError> {
    let report = check_exact(first, second, trunc)?;
    Ok(if report.is_exact() {
        CheckResult::pass()
    } else {
        let what = [
            (!report.injective, "not injective"),
            (!report.surjective, "not surjective"),
            (!report.image_equals_kernel, "image differs from kernel"),
        ]
        .iter()
        .filter(|(bad, _)| *bad)
        .map(|(_, w)| *w)
        .collect::<Vec<_>>()
        .join(", ");
        let example = report.counterexamples.first().cloned().unwrap_or_default();
        CheckResult::fail(format!("{what}: {example}"))
    })
}

fn compose(maps: &[&Homomorphism], x: &GroupElement) -> Result<GroupElement, AlgebraError> {
    maps.iter().try_fold(x.clone(), |acc, h| hom_apply(h, &acc))
}

/// Compares two composites (applied left to right) on every element of `domain`.
fn square(lhs: &[&Homomorphism], rhs: &[&Homomorphism], domain: &[GroupElement]) -> Result<CheckResult, AlgebraError> {
    for x in domain {
        let (a, b) = (compose(lhs, x)?, compose(rhs, x)?);
        if a != b {
            return Ok(CheckResult::fail(format!("{x} maps to {a} and to {b}")));
        }
    }
    Ok(CheckResult::pass())
}

fn central(expr: &GroupExpr, elements: &[GroupElement]) -> Result<CheckResult, AlgebraError> {
    for z in elements {
        if !is_central(expr, z)? {
            return Ok(CheckResult::fail(format!("{z} is not central in {expr}")));
        }
    }
    Ok(CheckResult::pass())
}

/// Instantiates every leaf atom of `diagram` from `leaves` and checks, on
/// the `[-trunc, trunc]` windows, the three short exact sequences, the three
/// commuting squares and the centrality of the `p1` images (plus the
/// Garside element and its quotient for a circuit diagram).
pub fn instantiate_and_verify(
    diagram: &Diagram,
    leaves: &LeafAssignments,
    trunc: u32,
) -> Result<Verification, DeformationError> {
    let modulus = diagram.shape.max_outer_modulus();
    if u64::from(trunc) < modulus {
        return Err(
            AlgebraError::WindowTooSmall(format!("truncation {trunc} is below the outer modulus {modulus}")).into(),
        );
    }
    let d = diagram.shape.build(Some(leaves))?;
    let a = |name: &str| d.arrow(name);
    let mut checks = BTreeMap::new();

    checks.insert("exact:p1,d1".to_string(), exactness(a("p1"), a("d1"), trunc)?);
    checks.insert("exact:j0,rho".to_string(), exactness(a("j0"), a("rho"), trunc)?);
    checks.insert(
        "exact:iota1,rho_d1".to_string(),
        exactness(a("iota1"), a("rho_d1"), trunc)?,
    );

    let pair_window = enumerate_truncated(d.node("P1DxDelta"), trunc)?;
    checks.insert(
        "square:d1.iota1=j0.pr2".to_string(),
        square(&[a("iota1"), a("d1")], &[a("pr2"), a("j0")], &pair_window)?,
    );
    let p1o_window = enumerate_truncated(d.node("P1O"), trunc)?;
    checks.insert(
        "square:rho.d1=rho_d1".to_string(),
        square(&[a("d1"), a("rho")], &[a("rho_d1")], &p1o_window)?,
    );
    let e_delta = identity(d.node("Delta"));
    let p1d_window = enumerate_truncated(d.node("P1D"), trunc)?;
    let mut first_factor = None;
    for z in &p1d_window {
        let (x, y) = (
            hom_apply(a("p1"), z)?,
            hom_apply(a("iota1"), &GroupElement::Tuple(vec![z.clone(), e_delta.clone()]))?,
        );
        if x != y {
            first_factor = Some(format!("p1({z}) = {x} but iota1({z}, e) = {y}"));
            break;
        }
    }
    checks.insert(
        "square:p1.pr1=iota1".to_string(),
        CheckResult::from_first_failure(first_factor),
    );

    let HomRule::Include(p1_images) = &a("p1").rule else {
        unreachable!("p1 is an inclusion of a lattice")
    };
    checks.insert("central:p1".to_string(), central(d.node("P1O"), p1_images)?);

    if let (DiagramShape::F1 { .. }, Some(garside)) = (&d.shape, &d.garside) {
        let GroupExpr::CentralQuotient { base: dy_n, .. } = d.node("Delta") else {
            unreachable!("the Delta node of a circuit diagram is a quotient")
        };
        let GroupExpr::CentralQuotient {
            base: s_base,
            generator: h_gen,
        } = d.node("S")
        else {
            unreachable!("the S node of a circuit diagram is a quotient")
        };
        checks.insert(
            "central:garside".to_string(),
            central(dy_n, std::slice::from_ref(garside))?,
        );
        let mut h = central(s_base, std::slice::from_ref(h_gen))?;
        if h.passed() {
            h = central(d.node("P1O"), &p1_images[1..])?;
        }
        checks.insert("central:H".to_string(), h);
        checks.insert(
            "quotient:well_defined".to_string(),
            well_defined(&d, dy_n, garside, trunc)?,
        );
    }
    Ok(Verification { checks })
}

/// Coset maps out of the quotients do not depend on the representative,
/// and `rho` kills the generator of the S quotient.
fn well_defined(
    d: &Diagram,
    dy_n: &GroupExpr,
    garside: &GroupElement,
    trunc: u32,
) -> Result<CheckResult, AlgebraError> {
    let s = d.node("S");
    let GroupExpr::CentralQuotient {
        base: s_base,
        generator: h_gen,
    } = s
    else {
        unreachable!("checked by the caller")
    };
    let HomRule::Cosets(into) = &d.arrow("j0").rule else {
        unreachable!("j0 acts on cosets")
    };
    let lift = Homomorphism::new(dy_n.clone(), s_base.as_ref().clone(), into.as_ref().clone());
    for x in enumerate_truncated(dy_n, trunc)? {
        let shifted = multiply(dy_n, &x, garside)?;
        let (a, b) = (
            canonicalize(s, &hom_apply(&lift, &x)?)?,
            canonicalize(s, &hom_apply(&lift, &shifted)?)?,
        );
        if a != b {
            return Ok(CheckResult::fail(format!("{x} and {shifted} map to {a} and {b}")));
        }
    }
    let HomRule::Cosets(rho_inner) = &d.arrow("rho").rule else {
        unreachable!("rho acts on cosets")
    };
    let g = d.node("G");
    let rho_lift = Homomorphism::new(s_base.as_ref().clone(), g.clone(), rho_inner.as_ref().clone());
    let image = hom_apply(&rho_lift, h_gen)?;
    if image != identity(g) {
        return Ok(CheckResult::fail(format!(
            "rho sends the quotient generator {h_gen} to {image}"
        )));
    }
    Ok(CheckResult::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LeafTriple;
    use crate::deformation::{build_diagram_f0, build_diagram_f1, BlockShape};

    #[test]
    fn trivial_leaves_f0() {
        let d = build_diagram_f0(1, 1, 1, None).unwrap();
        let leaves = LeafAssignments::uniform(LeafTriple::cyclic(1, 1).unwrap());
        let v = instantiate_and_verify(&d, &leaves, 2).unwrap();
        assert!(v.all_pass(), "{v:?}");
        assert_eq!(v.checks.len(), 7);
    }

    #[test]
    fn default_leaves_f1() {
        let d = build_diagram_f1(1, &[BlockShape { c: 1, m: 1 }], None).unwrap();
        let v = instantiate_and_verify(&d, &LeafAssignments::default(), 2).unwrap();
        assert!(v.all_pass(), "{v:?}");
        assert_eq!(v.checks.len(), 10);
    }

    #[test]
    fn window_must_cover_outer_moduli() {
        let d = build_diagram_f0(2, 2, 1, None).unwrap();
        assert!(matches!(
            instantiate_and_verify(&d, &LeafAssignments::default(), 3),
            Err(DeformationError::Algebra(AlgebraError::WindowTooSmall(_)))
        ));
    }
}
