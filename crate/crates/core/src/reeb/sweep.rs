use std::collections::BTreeMap;

use crate::field::{CriticalKind, CriticalPoint, TorusPoint, TrigFieldSpec};
use crate::UnionFind;

use super::{LevelCurve, ReebEdge, ReebError, ReebGraph, ReebVertex, VertexKind};

const MIN_RESOLUTION: usize = 64;

struct Grid {
    r: usize,
    values: Vec<f64>,
}

impl Grid {
    fn idx(&self, i: usize, j: usize) -> usize {
        (j % self.r) * self.r + (i % self.r)
    }

    fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.r, idx / self.r)
    }

    /// Endpoints of grid edge `e`: even ids run in `+x`, odd ids in `+y`.
    fn edge_nodes(&self, e: usize) -> (usize, usize) {
        let p = e / 2;
        let (i, j) = self.coords(p);
        if e.is_multiple_of(2) {
            (p, self.idx(i + 1, j))
        } else {
            (p, self.idx(i, j + 1))
        }
    }

    fn crossing_point(&self, e: usize, t: f64) -> TorusPoint {
        let (p, q) = self.edge_nodes(e);
        let (vp, vq) = (self.values[p], self.values[q]);
        let s = ((t - vp) / (vq - vp)).clamp(0.0, 1.0);
        let (i, j) = self.coords(p);
        let h = 1.0 / self.r as f64;
        let (dx, dy) = if e.is_multiple_of(2) { (s, 0.0) } else { (0.0, s) };
        TorusPoint::new((i as f64 + dx) * h, (j as f64 + dy) * h)
    }
}

struct RawCurve {
    level_index: usize,
    lower: usize,
    upper: usize,
    samples: Vec<TorusPoint>,
}

/// Clusters sorted critical values into levels; returns the level values and
/// the level index of each critical point (by position in `cps`).
fn critical_levels(cps: &[CriticalPoint], eps: f64) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..cps.len()).collect();
    order.sort_by(|&a, &b| cps[a].value.total_cmp(&cps[b].value));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if cps[k].value - cps[*c.last().unwrap()].value <= eps => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    let mut level_of = vec![0; cps.len()];
    let mut levels = Vec::with_capacity(clusters.len());
    for (li, c) in clusters.iter().enumerate() {
        levels.push(c.iter().map(|&k| cps[k].value).sum::<f64>() / c.len() as f64);
        for &k in c {
            level_of[k] = li;
        }
    }
    (levels, level_of)
}

/// Builds the Reeb graph by a band sweep on a periodic `resolution x
/// resolution` grid.
///
/// Between consecutive critical levels a regular level is chosen halfway; the
/// bands between regular levels each contain exactly one critical level.
/// Band components (union-find on grid nodes) containing critical points
/// become vertices, level components at the regular levels (union-find on
/// crossing grid edges) become the curves joining them, and chains of curves
/// through critical-point-free band components become edges.
pub fn build_reeb_graph(
    spec: &TrigFieldSpec,
    cps: &[CriticalPoint],
    resolution: usize,
) -> Result<ReebGraph, ReebError> {
    if resolution < MIN_RESOLUTION {
        return Err(ReebError::InvalidArgument(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if cps.is_empty() {
        return Err(ReebError::InvalidArgument("no critical points".into()));
    }
    let eps = 1e-7 * (1.0 + spec.amplitude_bound());
    let (levels, level_of) = critical_levels(cps, eps);
    let mids: Vec<f64> = levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();

    let r = resolution;
    let h = 1.0 / r as f64;
    let mut values = Vec::with_capacity(r * r);
    for j in 0..r {
        for i in 0..r {
            values.push(spec.value(i as f64 * h, j as f64 * h));
        }
    }
    let grid = Grid { r, values };
    let band_of = |v: f64| mids.partition_point(|&t| t < v);
    let band: Vec<usize> = grid.values.iter().map(|&v| band_of(v)).collect();

    // band components
    let mut uf = UnionFind::new(r * r);
    for j in 0..r {
        for i in 0..r {
            let c0 = grid.idx(i, j);
            let c1 = grid.idx(i + 1, j);
            let c2 = grid.idx(i + 1, j + 1);
            let c3 = grid.idx(i, j + 1);
            if band[c0] == band[c1] {
                uf.union(c0, c1);
            }
            if band[c0] == band[c3] {
                uf.union(c0, c3);
            }
            let center = band_of(spec.value((i as f64 + 0.5) * h, (j as f64 + 0.5) * h));
            if band[c0] == band[c2] && band[c0] == center {
                uf.union(c0, c2);
            }
            if band[c1] == band[c3] && band[c1] == center {
                uf.union(c1, c3);
            }
        }
    }
    let (comp_of, n_comps) = uf.labels();
    let mut comp_band = vec![0; n_comps];
    for (node, &c) in comp_of.iter().enumerate() {
        comp_band[c] = band[node];
    }

    // level components at each regular level
    let mut curves: Vec<RawCurve> = Vec::new();
    for (li, &t) in mids.iter().enumerate() {
        let above = |node: usize| grid.values[node] > t;
        let crosses = |e: usize| {
            let (p, q) = grid.edge_nodes(e);
            above(p) != above(q)
        };
        let mut euf = UnionFind::new(2 * r * r);
        for j in 0..r {
            for i in 0..r {
                let c = [
                    grid.idx(i, j),
                    grid.idx(i + 1, j),
                    grid.idx(i + 1, j + 1),
                    grid.idx(i, j + 1),
                ];
                let e = [
                    2 * grid.idx(i, j),
                    2 * grid.idx(i + 1, j) + 1,
                    2 * grid.idx(i, j + 1),
                    2 * grid.idx(i, j) + 1,
                ];
                let crossing: Vec<usize> = e.iter().copied().filter(|&x| crosses(x)).collect();
                match crossing.len() {
                    0 => {}
                    2 => {
                        euf.union(crossing[0], crossing[1]);
                    }
                    4 => {
                        let center_above = spec.value((i as f64 + 0.5) * h, (j as f64 + 0.5) * h) > t;
                        if center_above == above(c[0]) {
                            euf.union(e[0], e[1]);
                            euf.union(e[2], e[3]);
                        } else {
                            euf.union(e[0], e[3]);
                            euf.union(e[1], e[2]);
                        }
                    }
                    _ => unreachable!("a cell has an even number of crossing edges"),
                }
            }
        }
        let mut by_root: BTreeMap<usize, RawCurve> = BTreeMap::new();
        let mut order: Vec<usize> = Vec::new();
        for e in 0..2 * r * r {
            if !crosses(e) {
                continue;
            }
            let (p, q) = grid.edge_nodes(e);
            let (lo, hi) = if above(p) { (q, p) } else { (p, q) };
            if band[lo] != li || band[hi] != li + 1 {
                return Err(ReebError::ResolutionTooCoarse(format!(
                    "a grid edge crosses more than one regular level near {:?}",
                    grid.crossing_point(e, t)
                )));
            }
            let (lower, upper) = (comp_of[lo], comp_of[hi]);
            let root = euf.find(e);
            let curve = by_root.entry(root).or_insert_with(|| {
                order.push(root);
                RawCurve {
                    level_index: li,
                    lower,
                    upper,
                    samples: Vec::new(),
                }
            });
            if curve.lower != lower || curve.upper != upper {
                return Err(ReebError::InconsistentSweep(format!(
                    "level component at {t} touches several band components"
                )));
            }
            curve.samples.push(grid.crossing_point(e, t));
        }
        for root in order {
            curves.push(by_root.remove(&root).unwrap());
        }
    }

    // critical points to band components
    let mut comp_cps: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
    for (k, cp) in cps.iter().enumerate() {
        let node = grid.idx(
            (cp.location.x() * r as f64).round() as usize,
            (cp.location.y() * r as f64).round() as usize,
        );
        if band[node] != level_of[k] {
            return Err(ReebError::ResolutionTooCoarse(format!(
                "grid node next to critical point {} lies in another band",
                cp.id
            )));
        }
        comp_cps[comp_of[node]].push(k);
    }

    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
    for (ci, c) in curves.iter().enumerate() {
        above[c.lower].push(ci);
        below[c.upper].push(ci);
    }
    for comp in 0..n_comps {
        if comp_cps[comp].is_empty() && (below[comp].len() != 1 || above[comp].len() != 1) {
            return Err(ReebError::InconsistentSweep(format!(
                "band component without critical points has {} curves below and {} above",
                below[comp].len(),
                above[comp].len()
            )));
        }
    }

    // vertices, ordered by (level, smallest critical point id)
    let mut vertex_comps: Vec<usize> = (0..n_comps).filter(|&c| !comp_cps[c].is_empty()).collect();
    let min_cp_id = |c: usize| comp_cps[c].iter().map(|&k| cps[k].id).min().unwrap();
    vertex_comps.sort_by(|&a, &b| comp_band[a].cmp(&comp_band[b]).then(min_cp_id(a).cmp(&min_cp_id(b))));
    let mut vertex_of_comp = vec![usize::MAX; n_comps];
    let mut vertices = Vec::with_capacity(vertex_comps.len());
    for (id, &comp) in vertex_comps.iter().enumerate() {
        vertex_of_comp[comp] = id;
        let members = &comp_cps[comp];
        let count = |kind| members.iter().filter(|&&k| cps[k].kind == kind).count();
        let (mins, saddles, maxs) = (
            count(CriticalKind::Minimum),
            count(CriticalKind::Saddle),
            count(CriticalKind::Maximum),
        );
        let kind = match (mins, saddles, maxs) {
            (1, 0, 0) => VertexKind::Minimum,
            (0, 0, 1) => VertexKind::Maximum,
            (0, s, 0) if s > 0 => VertexKind::MultiSaddle { valence: 2 * s },
            _ => {
                return Err(ReebError::InconsistentSweep(format!(
                    "critical component with {mins} minima, {saddles} saddles and {maxs} maxima"
                )))
            }
        };
        let degree = below[comp].len() + above[comp].len();
        let euler = mins as i64 + maxs as i64 - saddles as i64;
        let twice_genus = 2 - degree as i64 - euler;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(ReebError::InconsistentSweep(format!(
                "critical component at level {} has degree {degree} and Euler characteristic {euler}",
                levels[comp_band[comp]]
            )));
        }
        if matches!(kind, VertexKind::Minimum | VertexKind::Maximum) && degree != 1 {
            return Err(ReebError::InconsistentSweep(format!(
                "extremum at level {} has degree {degree}",
                levels[comp_band[comp]]
            )));
        }
        let mut ids: Vec<usize> = members.iter().map(|&k| cps[k].id).collect();
        ids.sort_unstable();
        vertices.push(ReebVertex {
            id,
            kind,
            level: levels[comp_band[comp]],
            preimage_critical_points: ids,
            degree,
            euler,
            genus: twice_genus / 2,
        });
    }

    // edges: chains of curves through pass-through components
    let mut used = vec![false; curves.len()];
    let mut raw_edges: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for &comp in &vertex_comps {
        for &start in &above[comp] {
            let mut chain = vec![start];
            used[start] = true;
            let mut cur = curves[start].upper;
            while vertex_of_comp[cur] == usize::MAX {
                let next = above[cur][0];
                if used[next] {
                    return Err(ReebError::InconsistentSweep("curve chain revisits a curve".into()));
                }
                used[next] = true;
                chain.push(next);
                cur = curves[next].upper;
            }
            raw_edges.push((vertex_of_comp[comp], vertex_of_comp[cur], chain));
        }
    }
    if used.contains(&false) {
        return Err(ReebError::InconsistentSweep(
            "some level components are not attached to any critical component".into(),
        ));
    }
    let first_sample = |chain: &[usize]| {
        curves[chain[0]]
            .samples
            .iter()
            .map(|p| (p.x(), p.y()))
            .fold((f64::INFINITY, f64::INFINITY), |a, b| if b < a { b } else { a })
    };
    raw_edges.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| first_sample(&a.2).partial_cmp(&first_sample(&b.2)).unwrap())
    });
    let mut curves: Vec<Option<RawCurve>> = curves.into_iter().map(Some).collect();
    let edges: Vec<ReebEdge> = raw_edges
        .into_iter()
        .enumerate()
        .map(|(id, (lo, hi, chain))| ReebEdge {
            id,
            endpoints: (lo, hi),
            level_interval: (vertices[lo].level, vertices[hi].level),
            region_euler: 0,
            region_boundary_count: 2,
            curves: chain
                .iter()
                .map(|&c| {
                    let raw = curves[c].take().unwrap();
                    LevelCurve {
                        level_index: raw.level_index,
                        level: mids[raw.level_index],
                        samples: raw.samples,
                    }
                })
                .collect(),
        })
        .collect();

    // connectivity and cycle rank
    let mut vuf = UnionFind::new(vertices.len());
    for e in &edges {
        vuf.union(e.endpoints.0, e.endpoints.1);
    }
    let (_, n_parts) = vuf.labels();
    if n_parts != 1 {
        return Err(ReebError::InconsistentSweep(format!("graph has {n_parts} components")));
    }
    let betti1 = edges.len() + 1 - vertices.len();
    if betti1 > 1 {
        return Err(ReebError::TooManyCycles(betti1));
    }
    let total_genus: i64 = vertices.iter().map(|v| v.genus).sum();
    if total_genus + betti1 as i64 != 1 {
        return Err(ReebError::InconsistentSweep(format!(
            "vertex genera sum to {total_genus} with {betti1} cycles; the torus needs 1 in total"
        )));
    }

    Ok(ReebGraph {
        vertices,
        edges,
        betti1,
        resolution,
        critical_points: cps.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{find_critical_points, TrigTerm};

    fn graph(terms: Vec<TrigTerm>, r: usize) -> ReebGraph {
        let spec = TrigFieldSpec::new(terms).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        build_reeb_graph(&spec, &cps, r).unwrap()
    }

    #[test]
    fn tilted_torus_has_one_cycle() {
        let g = graph(vec![TrigTerm::new(1.0, 1, 0, 0.0), TrigTerm::new(0.5, 0, 1, 0.0)], 128);
        assert_eq!((g.vertices.len(), g.edges.len(), g.betti1), (4, 4, 1));
        assert_eq!(g.circuit_edges().len(), 2);
    }

    #[test]
    fn egg_carton_is_a_tree() {
        let g = graph(
            vec![TrigTerm::new(0.5, 1, -1, 0.0), TrigTerm::new(-0.5, 1, 1, 0.0)],
            128,
        );
        assert_eq!((g.vertices.len(), g.edges.len(), g.betti1), (5, 4, 0));
        let special = g.vertices.iter().find(|v| v.genus == 1).unwrap();
        assert_eq!(special.kind, VertexKind::MultiSaddle { valence: 8 });
        assert_eq!(special.degree, 4);
        assert!(g.circuit_edges().is_empty());
    }

    #[test]
    fn rejects_low_resolution() {
        let spec = TrigFieldSpec::new(vec![TrigTerm::new(1.0, 1, 0, 0.0), TrigTerm::new(0.5, 0, 1, 0.0)]).unwrap();
        let cps = find_critical_points(&spec, 64, 1e-9).unwrap();
        assert!(matches!(
            build_reeb_graph(&spec, &cps, 32),
            Err(ReebError::InvalidArgument(_))
        ));
    }

    #[test]
    fn level_clustering() {
        let spec = TrigFieldSpec::new(vec![TrigTerm::new(0.5, 1, -1, 0.0), TrigTerm::new(-0.5, 1, 1, 0.0)]).unwrap();
        let cps = find_critical_points(&spec, 128, 1e-9).unwrap();
        let (levels, _) = critical_levels(&cps, 1e-7);
        assert_eq!(levels.len(), 3);
    }
}
