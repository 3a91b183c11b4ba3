//! Python bindings: graphs, a full run, and modularity of an assignment.

use parlouvain::{
    emit_timing, generate_ring_of_cliques, parse_edge_list, parse_matrix_market, AdjacencyIndex,
    CommunityState, Dendrogram, Edge, Engine, LouvainConfig,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py(e: parlouvain::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph", module = "pyparlouvain", frozen)]
struct PyGraph {
    inner: parlouvain::Graph,
    original_ids: Vec<u64>,
}

impl PyGraph {
    fn identity(inner: parlouvain::Graph) -> Self {
        let original_ids = (0..inner.vertex_count() as u64).collect();
        Self {
            inner,
            original_ids,
        }
    }
}

#[pymethods]
impl PyGraph {
    /// Build from `(source, target, weight)` triples; duplicate pairs are summed.
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let edges = edges.into_iter().map(|(s, t, w)| Edge::new(s, t, w));
        let inner = parlouvain::Graph::from_edges_merged(vertex_count, edges).map_err(to_py)?;
        Ok(Self::identity(inner))
    }

    #[staticmethod]
    fn ring_of_cliques(k: usize, c: usize) -> PyResult<Self> {
        Ok(Self::identity(
            generate_ring_of_cliques(k, c).map_err(to_py)?,
        ))
    }

    #[staticmethod]
    #[pyo3(signature = (text, default_weight = 1.0))]
    fn from_edge_list(text: &str, default_weight: f64) -> PyResult<Self> {
        let parsed = parse_edge_list(text, default_weight).map_err(to_py)?;
        Ok(Self {
            inner: parsed.graph,
            original_ids: parsed.original_ids,
        })
    }

    #[staticmethod]
    fn from_matrix_market(text: &str) -> PyResult<Self> {
        let parsed = parse_matrix_market(text).map_err(to_py)?;
        Ok(Self {
            inner: parsed.graph,
            original_ids: parsed.original_ids,
        })
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    /// Original id of each dense vertex.
    #[getter]
    fn original_ids(&self) -> Vec<u64> {
        self.original_ids.clone()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.source, e.target, e.weight))
            .collect()
    }

    fn degrees(&self) -> Vec<f64> {
        AdjacencyIndex::build(&self.inner).degrees().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertex_count={}, edge_count={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "LouvainResult", module = "pyparlouvain", frozen)]
struct PyLouvainResult {
    dendrogram: Dendrogram,
    timing_report: String,
}

#[pymethods]
impl PyLouvainResult {
    #[getter]
    fn levels(&self) -> Vec<Vec<usize>> {
        self.dendrogram.levels.clone()
    }

    #[getter]
    fn modularity_per_level(&self) -> Vec<f64> {
        self.dendrogram.modularity_per_level.clone()
    }

    #[getter]
    fn modularity(&self) -> f64 {
        self.dendrogram.final_modularity().unwrap_or(f64::NAN)
    }

    /// Final community of every vertex of the input graph.
    fn final_partition(&self) -> PyResult<Vec<usize>> {
        self.dendrogram.final_partition().map_err(to_py)
    }

    /// The `key=value` timing report.
    #[getter]
    fn timing_report(&self) -> String {
        self.timing_report.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "LouvainResult(levels={}, modularity={})",
            self.dendrogram.len(),
            self.modularity()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (graph, theta = 1e-6, big_theta = 1e-6, max_iters = 100, threads = 1, engine = "parallel"))]
fn run(
    py: Python<'_>,
    graph: &PyGraph,
    theta: f64,
    big_theta: f64,
    max_iters: usize,
    threads: usize,
    engine: &str,
) -> PyResult<PyLouvainResult> {
    let config = LouvainConfig {
        inner_threshold: theta,
        outer_threshold: big_theta,
        max_inner_iterations: max_iters,
        worker_count: threads,
        engine: engine.parse::<Engine>().map_err(to_py)?,
    };
    let inner = &graph.inner;
    let outcome = py
        .detach(|| parlouvain::run(inner, &config))
        .map_err(to_py)?;
    Ok(PyLouvainResult {
        timing_report: emit_timing(&outcome.timing),
        dendrogram: outcome.dendrogram,
    })
}

/// Modularity of `labels` (values in `0..vertex_count`) on `graph`.
#[pyfunction]
fn modularity(graph: &PyGraph, labels: Vec<usize>) -> PyResult<f64> {
    let idx = AdjacencyIndex::build(&graph.inner);
    let state = CommunityState::from_assignment(&idx, &labels).map_err(to_py)?;
    state.modularity().map_err(to_py)
}

#[pymodule]
fn pyparlouvain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLouvainResult>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    Ok(())
}
