use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::field::{TorusPoint, Translation, TranslationSubgroup};
use crate::UnionFind;

use super::{ReebError, ReebGraph};

/// Critical points are matched after translation when this close.
const CP_MATCH_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassOverrides {
    /// Replaces the cyclic index computed from the symmetry group.
    pub cyclic_index: Option<u64>,
}

/// A subtree hanging off a vertex, recorded by its canonical shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskDescriptor {
    /// Edge joining the subtree to its root vertex.
    pub attaching_edge: usize,
    pub vertices: Vec<usize>,
    pub min_level: f64,
    pub canonical: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderClass {
    /// Number of disk orbits per spine vertex.
    pub c: usize,
    /// Size of each disk orbit.
    pub m: u64,
    pub spine_vertices: Vec<usize>,
    pub disk_tree_descriptors: Vec<DiskDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderDecomposition {
    pub k: usize,
    pub classes: Vec<CylinderClass>,
}

/// Region of the torus between a circuit curve and its next translate along
/// the circuit (the whole torus cut open when the cyclic index is 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    pub cyclic_index: u64,
    /// `(edge id, curve index)` of the bounding curves.
    pub start_curve: (usize, usize),
    pub end_curve: (usize, usize),
    pub ascending: bool,
    pub spine_vertices: Vec<usize>,
    /// Translations mapping the cylinder onto itself.
    pub stabilizer: Vec<Translation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum MorseClassification {
    F0 {
        special_vertex: usize,
        n: u64,
        m: u64,
        r: usize,
        /// Regions of the complement of the special vertex, one list of edge
        /// ids per orbit of the symmetry group.
        disk_orbits: Vec<Vec<usize>>,
    },
    F1 {
        cyclic_index: u64,
        cyclic_index_overridden: bool,
        cylinder: Cylinder,
        decomposition: CylinderDecomposition,
    },
}

impl MorseClassification {
    pub fn name(&self) -> &'static str {
        match self {
            MorseClassification::F0 { .. } => "F0",
            MorseClassification::F1 { .. } => "F1",
        }
    }
}

pub fn classify(
    graph: &ReebGraph,
    sym: &TranslationSubgroup,
    overrides: &ClassOverrides,
) -> Result<MorseClassification, ReebError> {
    match graph.betti1 {
        0 => {
            if overrides.cyclic_index.is_some() {
                return Err(ReebError::InvalidArgument(
                    "a cyclic index only applies to graphs with a circuit".into(),
                ));
            }
            classify_tree(graph, sym)
        }
        1 => {
            let cylinder = fundamental_cylinder(graph, sym)?;
            let decomposition = cylinder_decomposition(graph, &cylinder)?;
            let cyclic_index = overrides.cyclic_index.unwrap_or(cylinder.cyclic_index);
            if cyclic_index == 0 {
                return Err(ReebError::InvalidArgument("cyclic index must be positive".into()));
            }
            Ok(MorseClassification::F1 {
                cyclic_index,
                cyclic_index_overridden: overrides.cyclic_index.is_some_and(|n| n != cylinder.cyclic_index),
                cylinder,
                decomposition,
            })
        }
        b => Err(ReebError::TooManyCycles(b)),
    }
}

fn locate_cp(graph: &ReebGraph, p: TorusPoint) -> Option<usize> {
    graph
        .critical_points
        .iter()
        .map(|cp| (cp.location.distance(&p), cp.id))
        .filter(|&(d, _)| d < CP_MATCH_TOL)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, id)| id)
}

fn cp_location(graph: &ReebGraph, id: usize) -> TorusPoint {
    graph
        .critical_points
        .iter()
        .find(|cp| cp.id == id)
        .expect("known critical point")
        .location
}

/// Image of critical point `cp` under `t`, as a critical point id.
fn translate_cp(graph: &ReebGraph, t: &Translation, cp: usize) -> Result<usize, ReebError> {
    locate_cp(graph, t.apply(cp_location(graph, cp))).ok_or_else(|| {
        ReebError::OrbitMismatch(format!(
            "translation {t} moves critical point {cp} off the critical set"
        ))
    })
}

fn vertex_image(graph: &ReebGraph, t: &Translation, v: usize) -> Result<usize, ReebError> {
    let cp = graph.vertices[v].preimage_critical_points[0];
    let image = translate_cp(graph, t, cp)?;
    Ok(graph
        .vertex_of_cp(image)
        .expect("every critical point lies on a vertex"))
}

/// Curve at regular level `level_index` closest to `p`.
fn locate_curve(graph: &ReebGraph, level_index: usize, p: TorusPoint) -> Option<(usize, usize)> {
    let tol = 2.0 / graph.resolution as f64;
    let mut best: Option<(f64, (usize, usize))> = None;
    for e in &graph.edges {
        for (ci, c) in e.curves.iter().enumerate() {
            if c.level_index != level_index {
                continue;
            }
            let d = c.samples.iter().map(|s| s.distance(&p)).fold(f64::INFINITY, f64::min);
            if d < tol && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, (e.id, ci)));
            }
        }
    }
    best.map(|(_, key)| key)
}

/// Vertices of the component of `graph - {edges in blocked} - {via}` containing
/// `start`, where `via` is the edge used to enter it.
fn subtree(graph: &ReebGraph, start: usize, via: usize, blocked: &BTreeSet<usize>) -> Vec<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![(start, via)];
    while let Some((v, from)) = stack.pop() {
        for e in graph.incident(v) {
            if e == from || blocked.contains(&e) {
                continue;
            }
            let w = graph.other_end(e, v);
            if seen.insert(w) {
                stack.push((w, e));
            }
        }
    }
    seen.into_iter().collect()
}

fn fmt_level(level: f64) -> String {
    let level = if level.abs() < 5e-7 { 0.0 } else { level };
    format!("{level:.6}")
}

/// Canonical shape of the tree hanging below `v` through edge `from`.
fn canonical_tree(graph: &ReebGraph, v: usize, from: usize, blocked: &BTreeSet<usize>) -> String {
    let mut children: Vec<String> = graph
        .incident(v)
        .into_iter()
        .filter(|&e| e != from && !blocked.contains(&e))
        .map(|e| canonical_tree(graph, graph.other_end(e, v), e, blocked))
        .collect();
    children.sort();
    let vx = &graph.vertices[v];
    let head = format!("{}@{}", vx.kind.short_name(), fmt_level(vx.level));
    if children.is_empty() {
        head
    } else {
        format!("{head}({})", children.join(","))
    }
}

fn hanging_disks(graph: &ReebGraph, v: usize, blocked: &BTreeSet<usize>) -> Vec<DiskDescriptor> {
    graph
        .incident(v)
        .into_iter()
        .filter(|e| !blocked.contains(e))
        .map(|e| {
            let w = graph.other_end(e, v);
            let mut guard = blocked.clone();
            guard.insert(e);
            let vertices = subtree(graph, w, e, &guard);
            DiskDescriptor {
                attaching_edge: e,
                min_level: vertices
                    .iter()
                    .map(|&u| graph.vertices[u].level)
                    .fold(f64::INFINITY, f64::min),
                canonical: canonical_tree(graph, w, e, blocked),
                vertices,
            }
        })
        .collect()
}

fn classify_tree(graph: &ReebGraph, sym: &TranslationSubgroup) -> Result<MorseClassification, ReebError> {
    let none = BTreeSet::new();
    let special = graph
        .vertices
        .iter()
        .map(|v| v.id)
        .find(|&v| {
            hanging_disks(graph, v, &none)
                .iter()
                .all(|d| d.vertices.iter().map(|&u| graph.vertices[u].euler).sum::<i64>() == 1)
        })
        .ok_or(ReebError::NoSpecialVertex)?;
    let disks = hanging_disks(graph, special, &none);

    let mut disk_of_vertex = HashMap::new();
    for (i, d) in disks.iter().enumerate() {
        for &u in &d.vertices {
            disk_of_vertex.insert(u, i);
        }
    }
    let mut uf = UnionFind::new(disks.len());
    for (i, d) in disks.iter().enumerate() {
        let rep = d.vertices[0];
        for t in &sym.elements {
            let image = vertex_image(graph, t, rep)?;
            let j = *disk_of_vertex.get(&image).ok_or_else(|| {
                ReebError::OrbitMismatch(format!("translation {t} moves a disk onto the special vertex"))
            })?;
            uf.union(i, j);
        }
    }
    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, d) in disks.iter().enumerate() {
        orbits.entry(uf.find(i)).or_default().push(d.attaching_edge);
    }
    let mut disk_orbits: Vec<Vec<usize>> = orbits.into_values().collect();
    for o in &mut disk_orbits {
        o.sort_unstable();
    }
    disk_orbits.sort();
    if let Some(bad) = disk_orbits.iter().find(|o| o.len() as u64 != sym.order) {
        return Err(ReebError::OrbitMismatch(format!(
            "disk orbit of size {} under a group of order {}",
            bad.len(),
            sym.order
        )));
    }
    let (n, m) = sym.smith_pair;
    Ok(MorseClassification::F0 {
        special_vertex: special,
        n,
        m,
        r: disk_orbits.len(),
        disk_orbits,
    })
}

/// Walks the circuit from `start` until it meets a curve of `family`;
/// returns the vertices passed and the curve reached.
fn walk(
    graph: &ReebGraph,
    circuit: &BTreeSet<usize>,
    start: (usize, usize),
    ascending: bool,
    family: &BTreeSet<(usize, usize)>,
) -> Result<(Vec<usize>, (usize, usize)), ReebError> {
    let (mut e, mut up) = (start.0, ascending);
    let mut from = start.1 as isize;
    let mut spine = Vec::new();
    for _ in 0..=2 * graph.edges.len() {
        let len = graph.edges[e].curves.len() as isize;
        let ahead: Vec<usize> = if up {
            (from + 1..len).map(|c| c as usize).collect()
        } else {
            (0..from).rev().map(|c| c as usize).collect()
        };
        if let Some(c) = ahead.into_iter().find(|&c| family.contains(&(e, c))) {
            return Ok((spine, (e, c)));
        }
        let (lo, hi) = graph.edges[e].endpoints;
        let w = if up { hi } else { lo };
        spine.push(w);
        let next = graph
            .incident(w)
            .into_iter()
            .find(|&x| x != e && circuit.contains(&x))
            .ok_or_else(|| ReebError::InconsistentSweep(format!("circuit breaks at vertex {w}")))?;
        up = graph.edges[next].endpoints.0 == w;
        from = if up {
            -1
        } else {
            graph.edges[next].curves.len() as isize
        };
        e = next;
    }
    Err(ReebError::InconsistentSweep("circuit walk does not close".into()))
}

/// Picks a circuit curve, finds its translates along the circuit and returns
/// the cylinder on the side holding the lowest critical level.
pub fn fundamental_cylinder(graph: &ReebGraph, sym: &TranslationSubgroup) -> Result<Cylinder, ReebError> {
    let circuit: BTreeSet<usize> = graph.circuit_edges().into_iter().collect();
    let &first = circuit
        .iter()
        .next()
        .ok_or_else(|| ReebError::InvalidArgument("graph has no circuit".into()))?;
    let start = (first, 0);
    let base = &graph.edges[first].curves[0];
    let sample = *base
        .samples
        .first()
        .ok_or_else(|| ReebError::InvalidArgument("circuit curves carry no samples".into()))?;

    let mut family = BTreeSet::new();
    let mut stabilizer = Vec::new();
    for t in &sym.elements {
        let image = locate_curve(graph, base.level_index, t.apply(sample)).ok_or_else(|| {
            ReebError::OrbitMismatch(format!("translation {t} moves a circuit curve off the level set"))
        })?;
        if !circuit.contains(&image.0) {
            return Err(ReebError::OrbitMismatch(format!(
                "translation {t} moves a circuit curve off the circuit"
            )));
        }
        if image == start {
            stabilizer.push(*t);
        }
        family.insert(image);
    }

    let lowest = |spine: &[usize]| {
        spine
            .iter()
            .flat_map(|&v| {
                let mut levels = vec![graph.vertices[v].level];
                levels.extend(hanging_disks(graph, v, &circuit).iter().map(|d| d.min_level));
                levels
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (up_spine, up_end) = walk(graph, &circuit, start, true, &family)?;
    let (down_spine, down_end) = walk(graph, &circuit, start, false, &family)?;
    let ascending = lowest(&up_spine) <= lowest(&down_spine);
    let (spine_vertices, end_curve) = if ascending {
        (up_spine, up_end)
    } else {
        (down_spine, down_end)
    };
    Ok(Cylinder {
        cyclic_index: family.len() as u64,
        start_curve: start,
        end_curve,
        ascending,
        spine_vertices,
        stabilizer,
    })
}

/// Groups the disks hanging off the cylinder's spine: one class per orbit of
/// spine vertices, `c` disk orbits per class, each of size `m`.
pub fn cylinder_decomposition(graph: &ReebGraph, cylinder: &Cylinder) -> Result<CylinderDecomposition, ReebError> {
    let circuit: BTreeSet<usize> = graph.circuit_edges().into_iter().collect();
    let spine: BTreeSet<usize> = cylinder.spine_vertices.iter().copied().collect();
    if spine.len() != cylinder.spine_vertices.len() {
        return Err(ReebError::NotACylinder("spine passes a vertex twice".into()));
    }

    let mut euler = 0;
    for &v in &spine {
        euler += graph.vertices[v].euler;
        for d in hanging_disks(graph, v, &circuit) {
            euler += d.vertices.iter().map(|&u| graph.vertices[u].euler).sum::<i64>();
        }
    }
    if euler != 0 {
        return Err(ReebError::NotACylinder(format!(
            "region has Euler characteristic {euler}"
        )));
    }

    // orbits of spine vertices
    let spine_list: Vec<usize> = spine.iter().copied().collect();
    let pos: HashMap<usize, usize> = spine_list.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(spine_list.len());
    for (i, &v) in spine_list.iter().enumerate() {
        for t in &cylinder.stabilizer {
            let w = vertex_image(graph, t, v)?;
            let j = *pos.get(&w).ok_or_else(|| {
                ReebError::OrbitMismatch(format!("translation {t} moves spine vertex {v} off the spine"))
            })?;
            uf.union(i, j);
        }
    }
    let mut vertex_orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &v) in spine_list.iter().enumerate() {
        vertex_orbits.entry(uf.find(i)).or_default().push(v);
    }

    let mut classes = Vec::new();
    for members in vertex_orbits.into_values() {
        let rep = members[0];
        let disks = hanging_disks(graph, rep, &circuit);
        if disks.is_empty() {
            continue;
        }
        let stab: Vec<&Translation> = cylinder
            .stabilizer
            .iter()
            .filter(|t| vertex_image(graph, t, rep).is_ok_and(|w| w == rep))
            .collect();
        let mut disk_of_vertex = HashMap::new();
        for (i, d) in disks.iter().enumerate() {
            for &u in &d.vertices {
                disk_of_vertex.insert(u, i);
            }
        }
        let mut duf = UnionFind::new(disks.len());
        for (i, d) in disks.iter().enumerate() {
            for t in &stab {
                let image = vertex_image(graph, t, d.vertices[0])?;
                let j = *disk_of_vertex.get(&image).ok_or_else(|| {
                    ReebError::OrbitMismatch(format!("translation {t} moves a disk away from vertex {rep}"))
                })?;
                duf.union(i, j);
            }
        }
        let mut disk_orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..disks.len() {
            disk_orbits.entry(duf.find(i)).or_default().push(i);
        }
        let sizes: BTreeSet<usize> = disk_orbits.values().map(Vec::len).collect();
        if sizes.len() != 1 {
            return Err(ReebError::OrbitMismatch(format!(
                "disks at vertex {rep} fall into orbits of sizes {sizes:?}"
            )));
        }
        let m = *sizes.iter().next().unwrap() as u64;
        let mut descriptors: Vec<DiskDescriptor> = disk_orbits.values().map(|o| disks[o[0]].clone()).collect();
        descriptors.sort_by(|a, b| {
            a.min_level
                .total_cmp(&b.min_level)
                .then_with(|| a.canonical.cmp(&b.canonical))
        });
        classes.push(CylinderClass {
            c: descriptors.len(),
            m,
            spine_vertices: members,
            disk_tree_descriptors: descriptors,
        });
    }
    let class_min = |c: &CylinderClass| {
        c.disk_tree_descriptors
            .iter()
            .map(|d| d.min_level)
            .fold(f64::INFINITY, f64::min)
    };
    let class_key = |c: &CylinderClass| {
        c.disk_tree_descriptors
            .iter()
            .map(|d| d.canonical.as_str())
            .collect::<Vec<_>>()
            .join(";")
    };
    classes.sort_by(|a, b| {
        class_min(a)
            .total_cmp(&class_min(b))
            .then_with(|| {
                graph.vertices[a.spine_vertices[0]]
                    .level
                    .total_cmp(&graph.vertices[b.spine_vertices[0]].level)
            })
            .then_with(|| class_key(a).cmp(&class_key(b)))
    });
    Ok(CylinderDecomposition {
        k: classes.len(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{detect_translation_symmetries, find_critical_points, TrigFieldSpec, TrigTerm};
    use crate::reeb::build_reeb_graph;

    fn run(terms: Vec<TrigTerm>) -> MorseClassification {
        let spec = TrigFieldSpec::new(terms).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        let graph = build_reeb_graph(&spec, &cps, 128).unwrap();
        let sym = detect_translation_symmetries(&spec, 8, 1e-9).unwrap();
        classify(&graph, &sym, &ClassOverrides::default()).unwrap()
    }

    fn cos(a: f64, p: i64, q: i64) -> TrigTerm {
        TrigTerm::new(a, p, q, 0.0)
    }

    #[test]
    fn egg_carton_is_f0() {
        match run(vec![cos(0.5, 1, -1), cos(-0.5, 1, 1)]) {
            MorseClassification::F0 {
                n, m, r, disk_orbits, ..
            } => {
                assert_eq!((n, m, r), (1, 2, 2));
                assert!(disk_orbits.iter().all(|o| o.len() == 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tilted_torus_has_cyclic_index_one() {
        match run(vec![cos(1.0, 1, 0), cos(0.5, 0, 1)]) {
            MorseClassification::F1 {
                cyclic_index,
                decomposition,
                ..
            } => {
                assert_eq!(cyclic_index, 1);
                assert_eq!(decomposition.k, 2);
                assert!(decomposition.classes.iter().all(|c| c.c == 1 && c.m == 1));
                assert!(decomposition.classes[0].disk_tree_descriptors[0]
                    .canonical
                    .starts_with("min@"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doubled_frequency_in_x_has_cyclic_index_two() {
        match run(vec![cos(1.0, 2, 0), cos(0.5, 0, 1)]) {
            MorseClassification::F1 {
                cyclic_index,
                decomposition,
                cylinder,
                ..
            } => {
                assert_eq!(cyclic_index, 2);
                assert!(cylinder.stabilizer.len() == 1);
                assert_eq!(decomposition.k, 2);
                assert!(decomposition.classes.iter().all(|c| c.c == 1 && c.m == 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn doubled_frequency_in_y_rotates_the_disks() {
        match run(vec![cos(1.0, 1, 0), cos(0.5, 0, 2)]) {
            MorseClassification::F1 {
                cyclic_index,
                decomposition,
                ..
            } => {
                assert_eq!(cyclic_index, 1);
                assert_eq!(decomposition.k, 2);
                assert!(decomposition.classes.iter().all(|c| c.c == 1 && c.m == 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_index_override() {
        let spec = TrigFieldSpec::new(vec![cos(1.0, 1, 0), cos(0.5, 0, 1)]).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        let graph = build_reeb_graph(&spec, &cps, 128).unwrap();
        let sym = TranslationSubgroup::trivial();
        let over = ClassOverrides { cyclic_index: Some(3) };
        match classify(&graph, &sym, &over).unwrap() {
            MorseClassification::F1 {
                cyclic_index,
                cyclic_index_overridden,
                ..
            } => assert_eq!((cyclic_index, cyclic_index_overridden), (3, true)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_symmetry_is_an_orbit_mismatch() {
        let spec = TrigFieldSpec::new(vec![cos(0.5, 1, -1), cos(-0.5, 1, 1)]).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        let graph = build_reeb_graph(&spec, &cps, 128).unwrap();
        let bogus = TranslationSubgroup::generated_by(&[Translation::from_fractions(1, 3, 0, 1)]).unwrap();
        assert!(matches!(
            classify(&graph, &bogus, &ClassOverrides::default()),
            Err(ReebError::OrbitMismatch(_))
        ));
    }
}
