//! Field to classification in one call, shared by the CLI and the bindings.

use thiserror::Error;

use crate::field::{
    detect_translation_symmetries, find_critical_points, FieldError, TranslationSubgroup, TrigFieldSpec, DEFAULT_TOL,
};
use crate::reeb::{build_reeb_graph, classify, ClassOverrides, MorseClassification, ReebError, ReebGraph};

/// Largest translation order searched when detecting symmetries.
pub const SYMMETRY_MAX_ORDER: u32 = 12;
pub const MIN_GRID: usize = 16;
/// The Reeb sweep needs a finer grid than critical point seeding.
pub const MIN_RESOLUTION: usize = 64;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Reeb(#[from] ReebError),
    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: ReebGraph,
    pub symmetry: TranslationSubgroup,
    pub classification: MorseClassification,
    /// Human-readable remarks for the report, in a fixed order.
    pub notes: Vec<String>,
}

pub fn reeb_graph(spec: &TrigFieldSpec, grid: usize) -> Result<ReebGraph, PipelineError> {
    if grid < MIN_GRID {
        return Err(PipelineError::InvalidArgument(format!(
            "grid must be at least {MIN_GRID}"
        )));
    }
    let cps = find_critical_points(spec, grid, DEFAULT_TOL)?;
    Ok(build_reeb_graph(spec, &cps, grid.max(MIN_RESOLUTION))?)
}

/// Builds the Reeb graph and classifies it. Without `symmetry` the
/// translation group is detected from the field.
pub fn analyze(
    spec: &TrigFieldSpec,
    grid: usize,
    symmetry: Option<TranslationSubgroup>,
    cyclic_index: Option<u64>,
) -> Result<Analysis, PipelineError> {
    let graph = reeb_graph(spec, grid)?;
    let mut notes = Vec::new();
    let symmetry = match symmetry {
        Some(sym) => {
            let dev = sym.max_deviation(spec);
            if dev > DEFAULT_TOL {
                notes.push(format!("given symmetry group moves the field by up to {dev:.3e}"));
            }
            notes.push(format!("symmetry group of order {} given by the caller", sym.order));
            sym
        }
        None => {
            let sym = detect_translation_symmetries(spec, SYMMETRY_MAX_ORDER, DEFAULT_TOL)?;
            notes.push(format!(
                "detected symmetry group of order {} with Smith pair ({}, {})",
                sym.order, sym.smith_pair.0, sym.smith_pair.1
            ));
            sym
        }
    };
    let classification = classify(&graph, &symmetry, &ClassOverrides { cyclic_index })?;
    if let MorseClassification::F1 {
        cyclic_index,
        cyclic_index_overridden: true,
        cylinder,
        ..
    } = &classification
    {
        notes.push(format!(
            "cyclic index {cyclic_index} given by the caller; the symmetry group gives {}",
            cylinder.cyclic_index
        ));
    }
    Ok(Analysis {
        graph,
        symmetry,
        classification,
        notes,
    })
}
