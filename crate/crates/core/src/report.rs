//! Per-process timing breakdown of a run.
//!
//! The text form is one `key=value` pair per line:
//!
//! ```text
//! engine=parallel
//! workers=8
//! graph.n=9
//! graph.m=12
//! graph.max_degree=4
//! graph.avg_degree=2.6666666666666665e0
//! levels=2
//! level.0.neighbour=<seconds>
//! level.0.init=<seconds>
//! level.0.onelevel=<seconds>
//! level.0.renumber=<seconds>
//! level.0.induce=<seconds>
//! level.1.neighbour=<seconds>
//! ...
//! total.neighbour=<seconds>
//! total.init=<seconds>
//! total.onelevel=<seconds>
//! total.renumber=<seconds>
//! total.induce=<seconds>
//! total.wall=<seconds>
//! ```
//!
//! Totals also include the work spent on the final, discarded level attempt,
//! and `total.wall` covers orchestration, so it may exceed the sum of parts.
//! Degrees in the graph stats count neighbours, not weights.

use std::fmt::Write as _;

use crate::graph::{AdjacencyIndex, Graph};
use crate::louvain::Engine;

pub const PROCESS_NAMES: [&str; 5] = ["neighbour", "init", "onelevel", "renumber", "induce"];

/// Seconds spent in each process.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProcessTimes {
    pub neighbour: f64,
    pub init: f64,
    pub onelevel: f64,
    pub renumber: f64,
    pub induce: f64,
}

impl ProcessTimes {
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("neighbour", self.neighbour),
            ("init", self.init),
            ("onelevel", self.onelevel),
            ("renumber", self.renumber),
            ("induce", self.induce),
        ]
    }

    pub fn add(&mut self, other: &ProcessTimes) {
        self.neighbour += other.neighbour;
        self.init += other.init;
        self.onelevel += other.onelevel;
        self.renumber += other.renumber;
        self.induce += other.induce;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
}

impl GraphStats {
    pub fn new(graph: &Graph, idx: &AdjacencyIndex) -> Self {
        Self {
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            max_degree: idx.max_neighbor_count(),
            avg_degree: idx.targets().len() as f64 / graph.vertex_count() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    /// One entry per dendrogram level.
    pub levels: Vec<ProcessTimes>,
    pub totals: ProcessTimes,
    pub wall: f64,
    pub engine: Engine,
    pub worker_count: usize,
    pub graph: GraphStats,
}

/// Formats a real with 17 significant digits, which round-trips any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_timing(report: &TimingReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "engine={}", report.engine);
    let _ = writeln!(out, "workers={}", report.worker_count);
    let _ = writeln!(out, "graph.n={}", report.graph.vertices);
    let _ = writeln!(out, "graph.m={}", report.graph.edges);
    let _ = writeln!(out, "graph.max_degree={}", report.graph.max_degree);
    let _ = writeln!(
        out,
        "graph.avg_degree={}",
        format_real(report.graph.avg_degree)
    );
    let _ = writeln!(out, "levels={}", report.levels.len());
    for (t, level) in report.levels.iter().enumerate() {
        for (name, secs) in level.entries() {
            let _ = writeln!(out, "level.{t}.{name}={}", format_real(secs));
        }
    }
    for (name, secs) in report.totals.entries() {
        let _ = writeln!(out, "total.{name}={}", format_real(secs));
    }
    let _ = writeln!(out, "total.wall={}", format_real(report.wall));
    out
}
