use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{identity, is_central, Flavor, GroupElement, GroupExpr, HomRule, Homomorphism};
use crate::reeb::{CylinderDecomposition, MorseClassification};

use super::{DeformationError, LeafAssignments};

/// Shape `(c, m)` of one cylinder class: `c` disk orbits of size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockShape {
    pub c: usize,
    pub m: u64,
}

impl BlockShape {
    pub fn from_decomposition(d: &CylinderDecomposition) -> Vec<BlockShape> {
        d.classes.iter().map(|c| BlockShape { c: c.c, m: c.m }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum DiagramShape {
    F0 { n: u64, m: u64, r: usize },
    F1 { n: u64, blocks: Vec<BlockShape> },
}

impl DiagramShape {
    pub fn from_classification(c: &MorseClassification) -> Self {
        match c {
            MorseClassification::F0 { n, m, r, .. } => DiagramShape::F0 { n: *n, m: *m, r: *r },
            MorseClassification::F1 {
                cyclic_index,
                decomposition,
                ..
            } => DiagramShape::F1 {
                n: *cyclic_index,
                blocks: BlockShape::from_decomposition(decomposition),
            },
        }
    }

    pub fn build(&self, leaves: Option<&LeafAssignments>) -> Result<Diagram, DeformationError> {
        match self {
            DiagramShape::F0 { n, m, r } => build_diagram_f0(*n, *m, *r, leaves),
            DiagramShape::F1 { n, blocks } => build_diagram_f1(*n, blocks, leaves),
        }
    }

    /// Largest modulus among the finite outer groups of the diagram.
    pub fn max_outer_modulus(&self) -> u64 {
        match self {
            DiagramShape::F0 { n, m, .. } => n * m,
            DiagramShape::F1 { n, blocks } => blocks.iter().map(|b| b.m).fold(*n, u64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
    pub hom: Homomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub shape: DiagramShape,
    pub nodes: Vec<(String, GroupExpr)>,
    pub arrows: Vec<Arrow>,
    pub garside: Option<GroupElement>,
    pub labels: Vec<String>,
}

impl Diagram {
    pub fn node(&self, name: &str) -> &GroupExpr {
        &self.nodes.iter().find(|(n, _)| n == name).expect("known node").1
    }

    pub fn arrow(&self, name: &str) -> &Homomorphism {
        &self.arrows.iter().find(|a| a.name == name).expect("known arrow").hom
    }
}

/// The Garside element of `Δ_Y^n` with the expression it lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarsideData {
    pub element: GroupElement,
    pub base: GroupExpr,
    /// Slide product whose isotopy class the element represents.
    pub theta_label: String,
}

struct Leaves<'a>(Option<&'a LeafAssignments>);

impl Leaves<'_> {
    fn atom(&self, label: &str, flavor: Flavor) -> GroupExpr {
        match self.0 {
            Some(a) => GroupExpr::assigned_atom(label, flavor, a.group(label, flavor)),
            None => GroupExpr::atom(label, flavor),
        }
    }

    fn product(&self, labels: &[String], flavor: Flavor) -> GroupExpr {
        GroupExpr::product(labels.iter().map(|l| self.atom(l, flavor)).collect())
    }

    fn tables(
        &self,
        labels: &[String],
        pick: fn(&crate::algebra::LeafTriple) -> &Vec<u32>,
    ) -> BTreeMap<String, Vec<u32>> {
        match self.0 {
            Some(a) => labels.iter().map(|l| (l.clone(), pick(a.triple(l)).clone())).collect(),
            None => BTreeMap::new(),
        }
    }
}

fn collapse(mut parts: Vec<GroupElement>) -> GroupElement {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        GroupElement::Tuple(parts)
    }
}

fn single_or_factorwise(rules: Vec<HomRule>) -> HomRule {
    if rules.len() == 1 {
        rules.into_iter().next().unwrap()
    } else {
        HomRule::Factorwise(rules)
    }
}

fn arrow(name: &str, source: &str, target: &str, nodes: &[(String, GroupExpr)], rule: HomRule) -> Arrow {
    let find = |n: &str| nodes.iter().find(|(k, _)| k == n).expect("known node").1.clone();
    Arrow {
        name: name.into(),
        source: source.into(),
        target: target.into(),
        hom: Homomorphism::new(find(source), find(target), rule),
    }
}

fn standard_arrows(nodes: &[(String, GroupExpr)], p1: HomRule, rules: [HomRule; 5]) -> Vec<Arrow> {
    let [d1, j0, rho, rho_d1, delta_into_p1o] = rules;
    let iota1 = HomRule::ProductOfImages(vec![p1.clone(), delta_into_p1o]);
    vec![
        arrow("pr1", "P1DxDelta", "P1D", nodes, HomRule::Project(0)),
        arrow("pr2", "P1DxDelta", "Delta", nodes, HomRule::Project(1)),
        arrow("iota1", "P1DxDelta", "P1O", nodes, iota1),
        arrow("p1", "P1D", "P1O", nodes, p1),
        arrow("d1", "P1O", "S", nodes, d1),
        arrow("j0", "Delta", "S", nodes, j0),
        arrow("rho", "S", "G", nodes, rho),
        arrow("rho_d1", "P1O", "G", nodes, rho_d1),
    ]
}

fn node_list(p1o: GroupExpr, delta: GroupExpr, s: GroupExpr, g: GroupExpr) -> Vec<(String, GroupExpr)> {
    let p1d = GroupExpr::FreeAbelian(2);
    vec![
        ("P1D".into(), p1d.clone()),
        ("Delta".into(), delta.clone()),
        ("P1DxDelta".into(), GroupExpr::Product(vec![p1d, delta])),
        ("P1O".into(), p1o),
        ("S".into(), s),
        ("G".into(), g),
    ]
}

/// Diagram for a function whose graph is a tree, with `r` orbits of disks
/// under a symmetry group `Z_n x Z_{nm}`. Leaves are symbolic when `leaves`
/// is `None`.
pub fn build_diagram_f0(
    n: u64,
    m: u64,
    r: usize,
    leaves: Option<&LeafAssignments>,
) -> Result<Diagram, DeformationError> {
    if n == 0 || m == 0 || r == 0 {
        return Err(DeformationError::InvalidArgument(format!(
            "n, m and r must be positive, got ({n}, {m}, {r})"
        )));
    }
    let lv = Leaves(leaves);
    let labels: Vec<String> = (1..=r).map(|i| format!("D{i}")).collect();
    let (n_, nm) = (n as usize, (n * m) as usize);
    let copies = n_ * nm;
    let delta_d = lv.product(&labels, Flavor::Delta);
    let s_d = lv.product(&labels, Flavor::S);
    let g_d = lv.product(&labels, Flavor::G);

    let nodes = node_list(
        GroupExpr::wr_z2(s_d.clone(), n_, nm),
        GroupExpr::power(&delta_d, copies),
        GroupExpr::wr_cyc_pair(s_d.clone(), n_, nm),
        GroupExpr::wr_cyc_pair(g_d, n_, nm),
    );
    let shift = |a: i64, b: i64| GroupElement::Wreath {
        base: vec![identity(&s_d); copies],
        outer: vec![a, b],
    };
    let p1 = HomRule::Include(vec![shift(n as i64, 0), shift(0, nm as i64)]);
    let incl = HomRule::leaf_map("incl", lv.tables(&labels, |t| &t.incl));
    let proj = HomRule::leaf_map("proj", lv.tables(&labels, |t| &t.proj));
    let arrows = standard_arrows(
        &nodes,
        p1,
        [
            HomRule::mod_reduce(),
            HomRule::IntoBase(Box::new(incl.clone())),
            HomRule::Wreath(Box::new(proj.clone())),
            HomRule::Wreath(Box::new(proj)),
            HomRule::IntoBase(Box::new(incl)),
        ],
    );
    Ok(Diagram {
        shape: DiagramShape::F0 { n, m, r },
        nodes,
        arrows,
        garside: None,
        labels,
    })
}

fn block_labels(blocks: &[BlockShape]) -> Vec<Vec<String>> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (1..=b.c).map(|j| format!("Y{}{j}", i + 1)).collect())
        .collect()
}

fn check_blocks(n: u64, blocks: &[BlockShape]) -> Result<(), DeformationError> {
    if blocks.is_empty() {
        return Err(DeformationError::EmptyDecomposition);
    }
    if n == 0 || blocks.iter().any(|b| b.c == 0 || b.m == 0) {
        return Err(DeformationError::InvalidArgument(
            "cyclic index and every class shape must be positive".into(),
        ));
    }
    Ok(())
}

fn delta_y(lv: &Leaves, labels: &[Vec<String>], blocks: &[BlockShape]) -> GroupExpr {
    GroupExpr::product(
        labels
            .iter()
            .zip(blocks)
            .map(|(ls, b)| {
                GroupExpr::Product(vec![
                    GroupExpr::power(&lv.product(ls, Flavor::Delta), b.m as usize),
                    GroupExpr::ScaledZ(b.m),
                ])
            })
            .collect(),
    )
}

fn garside_in(dy: &GroupExpr, n: u64, blocks: &[BlockShape]) -> GroupElement {
    let block_factors: Vec<&GroupExpr> = match dy {
        GroupExpr::Product(fs) if blocks.len() > 1 => fs.iter().collect(),
        other => vec![other],
    };
    let one = collapse(
        block_factors
            .iter()
            .zip(blocks)
            .map(|(f, b)| {
                let GroupExpr::Product(parts) = f else {
                    unreachable!("class blocks are products")
                };
                GroupElement::Tuple(vec![identity(&parts[0]), GroupElement::Int(b.m as i64)])
            })
            .collect(),
    );
    collapse(vec![one; n as usize])
}

/// Garside element of `Δ_Y^n`: every copy carries, per class, the unit of
/// the leaf factors and one generator step `m` of `mZ`.
pub fn garside_element(n: u64, blocks: &[BlockShape]) -> Result<GarsideData, DeformationError> {
    check_blocks(n, blocks)?;
    let labels = block_labels(blocks);
    let dy = delta_y(&Leaves(None), &labels, blocks);
    let base = GroupExpr::power(&dy, n as usize);
    let element = garside_in(&dy, n, blocks);
    let theta_label = (0..n).map(|i| format!("theta_{i}")).collect::<Vec<_>>().join("*");
    Ok(GarsideData {
        element,
        base,
        theta_label,
    })
}

/// Diagram for a function whose graph has one circuit of cyclic index `n`,
/// with the fundamental cylinder's classes given by `blocks`.
pub fn build_diagram_f1(
    n: u64,
    blocks: &[BlockShape],
    leaves: Option<&LeafAssignments>,
) -> Result<Diagram, DeformationError> {
    check_blocks(n, blocks)?;
    let lv = Leaves(leaves);
    let labels = block_labels(blocks);
    let flat_labels: Vec<String> = labels.iter().flatten().cloned().collect();
    let n_ = n as usize;

    let dy = delta_y(&lv, &labels, blocks);
    let s_y = GroupExpr::product(
        labels
            .iter()
            .zip(blocks)
            .map(|(ls, b)| GroupExpr::wr_z(lv.product(ls, Flavor::S), b.m as usize))
            .collect(),
    );
    let g_y = GroupExpr::product(
        labels
            .iter()
            .zip(blocks)
            .map(|(ls, b)| GroupExpr::wr_cyc(lv.product(ls, Flavor::G), b.m as usize))
            .collect(),
    );
    let incl = HomRule::leaf_map("incl", lv.tables(&flat_labels, |t| &t.incl));
    let proj = HomRule::leaf_map("proj", lv.tables(&flat_labels, |t| &t.proj));
    let j = single_or_factorwise(vec![HomRule::BlockEmbed(Box::new(incl)); blocks.len()]);
    let gmap = single_or_factorwise(vec![HomRule::Wreath(Box::new(proj)); blocks.len()]);

    let dy_n = GroupExpr::power(&dy, n_);
    let garside = garside_in(&dy, n, blocks);
    if !is_central(&dy_n, &garside)? {
        return Err(DeformationError::NonCentralGarside(garside.to_string()));
    }
    let p1o = GroupExpr::wr_z(s_y.clone(), n_);
    let s_base = GroupExpr::wr_cyc(s_y.clone(), n_);
    let into_base = HomRule::IntoBase(Box::new(j.clone()));
    let h_gen = Homomorphism::new(dy_n.clone(), s_base.clone(), into_base.clone()).apply(&garside)?;
    let h_lift = Homomorphism::new(dy_n.clone(), p1o.clone(), into_base.clone()).apply(&garside)?;
    let nodes = node_list(
        p1o,
        GroupExpr::central_quotient(dy_n, garside.clone())?,
        GroupExpr::central_quotient(s_base, h_gen)?,
        GroupExpr::wr_cyc(g_y, n_),
    );
    let outer_shift = GroupElement::Wreath {
        base: vec![identity(&s_y); n_],
        outer: vec![n as i64],
    };
    let p1 = HomRule::Include(vec![outer_shift, h_lift]);
    let cosets = |r: HomRule| HomRule::Cosets(Box::new(r));
    let arrows = standard_arrows(
        &nodes,
        p1,
        [
            cosets(HomRule::mod_reduce()),
            cosets(into_base.clone()),
            cosets(HomRule::Wreath(Box::new(gmap.clone()))),
            HomRule::Wreath(Box::new(gmap)),
            cosets(into_base),
        ],
    );
    Ok(Diagram {
        shape: DiagramShape::F1 {
            n,
            blocks: blocks.to_vec(),
        },
        nodes,
        arrows,
        garside: Some(garside),
        labels: flat_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_f0_prints_leaf_products() {
        let d = build_diagram_f0(1, 2, 2, None).unwrap();
        assert_eq!(d.node("S").to_string(), "wrCP(Atom(S:D1)*Atom(S:D2);1,2)");
        assert_eq!(d.node("P1D").to_string(), "Z^2");
        assert_eq!(d.labels, vec!["D1", "D2"]);
        assert_eq!(d.arrow("d1").rule.to_string(), "mod_reduce");
        assert_eq!(d.arrows.len(), 8);
    }

    #[test]
    fn garside_shapes() {
        let g = garside_element(1, &[BlockShape { c: 1, m: 3 }]).unwrap();
        assert_eq!(g.element.to_string(), "((0,0,0),3)");
        let g = garside_element(2, &[BlockShape { c: 1, m: 1 }, BlockShape { c: 1, m: 2 }]).unwrap();
        assert_eq!(g.element.to_string(), "(((0,1),((0,0),2)),((0,1),((0,0),2)))");
        assert_eq!(g.theta_label, "theta_0*theta_1");
        assert!(is_central(&g.base, &g.element).unwrap());
        assert!(matches!(
            garside_element(1, &[]),
            Err(DeformationError::EmptyDecomposition)
        ));
    }

    #[test]
    fn f1_nodes_build_symbolically_and_assigned() {
        let blocks = [BlockShape { c: 1, m: 2 }];
        let sym = build_diagram_f1(2, &blocks, None).unwrap();
        assert!(sym.node("S").to_string().starts_with("quot(wrC("));
        let a = LeafAssignments::default();
        let fin = build_diagram_f1(2, &blocks, Some(&a)).unwrap();
        assert_eq!(fin.node("P1O").to_string(), sym.node("P1O").to_string());
        assert_ne!(fin.node("P1O"), sym.node("P1O"));
    }
}
