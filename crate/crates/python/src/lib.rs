//! Python bindings. Reports and graphs cross the boundary as JSON strings.

use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use torus_morse::algebra::{self, GroupElement, GroupExpr};
use torus_morse::deformation::{self, build_report, BlockShape, LeafSpec, Parameters, Report, DEFAULT_TRUNC};
use torus_morse::field::{
    find_critical_points, Translation, TranslationSubgroup, TrigFieldSpec, TrigTerm, DEFAULT_GRID, DEFAULT_TOL,
};
use torus_morse::pipeline;
use torus_morse::reeb::to_dot;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Finite sum of terms `a * cos(2π(p x + q y) + phase)` on the unit torus.
#[pyclass(frozen)]
struct TrigField {
    spec: TrigFieldSpec,
}

#[pymethods]
impl TrigField {
    /// `terms` is a list of `(a, p, q)` or `(a, p, q, phase)` tuples.
    #[new]
    fn new(terms: Vec<Vec<f64>>) -> PyResult<Self> {
        let terms = terms
            .iter()
            .map(|t| match t.as_slice() {
                [a, p, q] => Ok(TrigTerm::new(*a, *p as i64, *q as i64, 0.0)),
                [a, p, q, phase] => Ok(TrigTerm::new(*a, *p as i64, *q as i64, *phase)),
                _ => Err(err("each term is (a, p, q) or (a, p, q, phase)")),
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            spec: TrigFieldSpec::new(terms).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            spec: TrigFieldSpec::load(Path::new(path)).map_err(err)?,
        })
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.spec.value(x, y)
    }

    /// `(x, y, value, kind)` for every critical point.
    #[pyo3(signature = (grid = DEFAULT_GRID))]
    fn critical_points(&self, grid: usize) -> PyResult<Vec<(f64, f64, f64, String)>> {
        let cps = find_critical_points(&self.spec, grid, DEFAULT_TOL).map_err(err)?;
        Ok(cps
            .iter()
            .map(|c| {
                (
                    c.location.x(),
                    c.location.y(),
                    c.value,
                    format!("{:?}", c.kind).to_lowercase(),
                )
            })
            .collect())
    }

    /// Order and Smith pair of the detected translation symmetry group.
    fn symmetry(&self) -> PyResult<(u64, (u64, u64))> {
        let sym =
            torus_morse::field::detect_translation_symmetries(&self.spec, pipeline::SYMMETRY_MAX_ORDER, DEFAULT_TOL)
                .map_err(err)?;
        Ok((sym.order, sym.smith_pair))
    }

    #[pyo3(signature = (grid = DEFAULT_GRID))]
    fn reeb_json(&self, grid: usize) -> PyResult<String> {
        let graph = pipeline::reeb_graph(&self.spec, grid).map_err(err)?;
        serde_json::to_string(&graph).map_err(err)
    }

    #[pyo3(signature = (grid = DEFAULT_GRID))]
    fn reeb_dot(&self, grid: usize) -> PyResult<String> {
        Ok(to_dot(&pipeline::reeb_graph(&self.spec, grid).map_err(err)?))
    }

    /// Runs the whole pipeline and returns the report as JSON. `leaves` is a
    /// TOML leaf table; with `verify=False` the report is symbolic only.
    /// `symmetry` lists generators like `"1/2,0"`.
    #[pyo3(signature = (grid = DEFAULT_GRID, trunc = DEFAULT_TRUNC, leaves = None, verify = true, cyclic_index = None, symmetry = None))]
    fn analyze(
        &self,
        grid: usize,
        trunc: u32,
        leaves: Option<&str>,
        verify: bool,
        cyclic_index: Option<u64>,
        symmetry: Option<Vec<String>>,
    ) -> PyResult<String> {
        let symmetry = symmetry.map(|gens| subgroup(&gens)).transpose()?;
        let analysis = pipeline::analyze(&self.spec, grid, symmetry, cyclic_index).map_err(err)?;
        let leaves = match (verify, leaves) {
            (false, _) => None,
            (true, Some(src)) => Some(LeafSpec::from_toml_str(src).map_err(err)?),
            (true, None) => Some(LeafSpec::default()),
        };
        let report =
            build_report(&analysis.classification, Parameters { trunc, leaves }, analysis.notes).map_err(err)?;
        Ok(report.to_json())
    }
}

fn subgroup(gens: &[String]) -> PyResult<TranslationSubgroup> {
    let gens = gens
        .iter()
        .map(|g| Translation::parse(g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    TranslationSubgroup::generated_by(&gens).map_err(err)
}

fn parse(expr: &str, els: &[&str]) -> PyResult<(GroupExpr, Vec<GroupElement>)> {
    let expr: GroupExpr = expr.parse().map_err(err)?;
    let els = els
        .iter()
        .map(|s| GroupElement::parse(&expr, s))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    Ok((expr, els))
}

/// Product `a * b` in the group `expr`, e.g. `multiply("wrC(Z_2;2)", "((1,0),1)", "((0,1),1)")`.
#[pyfunction]
fn multiply(expr: &str, a: &str, b: &str) -> PyResult<String> {
    let (e, els) = parse(expr, &[a, b])?;
    Ok(algebra::multiply(&e, &els[0], &els[1]).map_err(err)?.to_string())
}

#[pyfunction]
fn invert(expr: &str, a: &str) -> PyResult<String> {
    let (e, els) = parse(expr, &[a])?;
    Ok(algebra::invert(&e, &els[0]).map_err(err)?.to_string())
}

#[pyfunction]
fn is_central(expr: &str, a: &str) -> PyResult<bool> {
    let (e, els) = parse(expr, &[a])?;
    algebra::is_central(&e, &els[0]).map_err(err)
}

/// Smith pair `(n, m)` of the translation group generated by `gens`.
#[pyfunction]
fn smith_pair(gens: Vec<String>) -> PyResult<(u64, u64)> {
    Ok(subgroup(&gens)?.smith_pair)
}

/// Verifies the tree-case diagram; returns `(check, passed)` pairs.
#[pyfunction]
#[pyo3(signature = (n, m, r, trunc = DEFAULT_TRUNC, leaves = None))]
fn verify_f0(n: u64, m: u64, r: usize, trunc: u32, leaves: Option<&str>) -> PyResult<Vec<(String, bool)>> {
    let spec = leaf_spec(leaves)?;
    let d = deformation::build_diagram_f0(n, m, r, None).map_err(err)?;
    checks(&d, &spec, trunc)
}

/// Same for the cylinder case; `blocks` lists `(c, m)` per class.
#[pyfunction]
#[pyo3(signature = (n, blocks, trunc = DEFAULT_TRUNC, leaves = None))]
fn verify_f1(n: u64, blocks: Vec<(usize, u64)>, trunc: u32, leaves: Option<&str>) -> PyResult<Vec<(String, bool)>> {
    let spec = leaf_spec(leaves)?;
    let blocks: Vec<BlockShape> = blocks.into_iter().map(|(c, m)| BlockShape { c, m }).collect();
    let d = deformation::build_diagram_f1(n, &blocks, None).map_err(err)?;
    checks(&d, &spec, trunc)
}

fn leaf_spec(src: Option<&str>) -> PyResult<LeafSpec> {
    src.map_or(Ok(LeafSpec::default()), |s| LeafSpec::from_toml_str(s).map_err(err))
}

fn checks(d: &deformation::Diagram, spec: &LeafSpec, trunc: u32) -> PyResult<Vec<(String, bool)>> {
    let v = deformation::instantiate_and_verify(d, &spec.assignments().map_err(err)?, trunc).map_err(err)?;
    Ok(v.checks.into_iter().map(|(k, r)| (k, r.passed())).collect())
}

/// Splitting check for the Garside element; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (n, blocks, leaf_rank = 1, trunc = 2))]
fn theta_check(n: u64, blocks: Vec<(usize, u64)>, leaf_rank: usize, trunc: u32) -> PyResult<String> {
    let blocks: Vec<BlockShape> = blocks.into_iter().map(|(c, m)| BlockShape { c, m }).collect();
    let r = deformation::theta_splitting_check(n, &blocks, leaf_rank, trunc).map_err(err)?;
    serde_json::to_string(&r).map_err(err)
}

/// Rebuilds a saved report and returns `(passed, json)`.
#[pyfunction]
fn reverify(report_json: &str) -> PyResult<(bool, String)> {
    let r = Report::from_json(report_json).map_err(err)?.rebuild().map_err(err)?;
    Ok((r.passed(), r.to_json()))
}

#[pymodule]
fn torus_morse_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<TrigField>()?;
    m.add_function(wrap_pyfunction!(multiply, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(is_central, m)?)?;
    m.add_function(wrap_pyfunction!(smith_pair, m)?)?;
    m.add_function(wrap_pyfunction!(verify_f0, m)?)?;
    m.add_function(wrap_pyfunction!(verify_f1, m)?)?;
    m.add_function(wrap_pyfunction!(theta_check, m)?)?;
    m.add_function(wrap_pyfunction!(reverify, m)?)?;
    Ok(())
}
