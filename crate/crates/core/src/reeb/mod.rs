//! Kronrod-Reeb graphs of Morse functions on the torus, and the
//! combinatorial data extracted from them: the special vertex of a tree
//! graph, and the cyclic index and cylinder decomposition of a graph with
//! one circuit.

mod classify;
mod dot;
mod sweep;

pub use classify::{
    classify, cylinder_decomposition, fundamental_cylinder, ClassOverrides, Cylinder, CylinderClass,
    CylinderDecomposition, DiskDescriptor, MorseClassification,
};
pub use dot::to_dot;
pub use sweep::build_reeb_graph;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{CriticalPoint, TorusPoint};

#[derive(Debug, Error)]
pub enum ReebError {
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("inconsistent sweep: {0}")]
    InconsistentSweep(String),
    #[error("Reeb graph has first Betti number {0}; a Morse function on the torus gives at most 1")]
    TooManyCycles(usize),
    #[error("no vertex has only disks in its complement")]
    NoSpecialVertex,
    #[error("orbit mismatch: {0}")]
    OrbitMismatch(String),
    #[error("not a cylinder: {0}")]
    NotACylinder(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VertexKind {
    Minimum,
    Maximum,
    /// A critical level component carrying one or more saddles; `valence`
    /// counts the arcs of that component as a graph on its saddles.
    MultiSaddle {
        valence: usize,
    },
}

impl VertexKind {
    pub fn short_name(&self) -> &'static str {
        match self {
            VertexKind::Minimum => "min",
            VertexKind::Maximum => "max",
            VertexKind::MultiSaddle { .. } => "saddle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReebVertex {
    pub id: usize,
    pub kind: VertexKind,
    pub level: f64,
    pub preimage_critical_points: Vec<usize>,
    pub degree: usize,
    /// Euler characteristic of a regular neighbourhood of the critical component.
    pub euler: i64,
    pub genus: i64,
}

/// One regular level component `f = level` crossing an edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub level_index: usize,
    pub level: f64,
    #[serde(skip)]
    pub samples: Vec<TorusPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReebEdge {
    pub id: usize,
    /// `(lower vertex, upper vertex)`
    pub endpoints: (usize, usize),
    pub level_interval: (f64, f64),
    /// Euler characteristic of the closed annulus over the edge.
    pub region_euler: i64,
    pub region_boundary_count: usize,
    /// Level curves sampled on this edge, ordered by level.
    pub curves: Vec<LevelCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReebGraph {
    pub vertices: Vec<ReebVertex>,
    pub edges: Vec<ReebEdge>,
    pub betti1: usize,
    pub resolution: usize,
    pub critical_points: Vec<CriticalPoint>,
}

impl ReebGraph {
    /// Edges incident to `v`, by id.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.endpoints.0 == v || e.endpoints.1 == v)
            .map(|e| e.id)
            .collect()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e].endpoints;
        if a == v {
            b
        } else {
            a
        }
    }

    /// Ids of the edges on the unique circuit (empty for a tree).
    pub fn circuit_edges(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut degree: Vec<usize> = (0..n).map(|v| self.incident(v).len()).collect();
        let mut removed = vec![false; self.edges.len()];
        let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        while let Some(v) = stack.pop() {
            for e in self.incident(v) {
                if removed[e] {
                    continue;
                }
                removed[e] = true;
                degree[v] -= 1;
                let w = self.other_end(e, v);
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
        (0..self.edges.len()).filter(|&e| !removed[e]).collect()
    }

    /// Vertex carrying critical point `cp`.
    pub fn vertex_of_cp(&self, cp: usize) -> Option<usize> {
        self.vertices
            .iter()
            .find(|v| v.preimage_critical_points.contains(&cp))
            .map(|v| v.id)
    }
}
