//! In-memory graph representation and neighbour computation.
//!
//! A [`Graph`] is the undirected edge list handed around between phases. Each
//! unordered endpoint pair appears at most once and loops are allowed.
//! [`AdjacencyIndex`] is the directed, source-sorted expansion used by the
//! optimisation phases: every non-loop edge is stored in both orientations,
//! loops once, and each vertex owns a contiguous slice located through an
//! exclusive prefix sum over per-vertex neighbour counts.
//!
//! Loop convention: a loop of weight `w` contributes `2w` to the weighted
//! degree of its vertex and `w` to the total weight, so that the sum of all
//! weighted degrees is exactly twice the total weight.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: f64,
}

impl Edge {
    pub fn new(source: VertexId, target: VertexId, weight: f64) -> Self {
        Self {
            source,
            target,
            weight,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    /// Endpoints ordered as `(min, max)`.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.source <= self.target {
            (self.source, self.target)
        } else {
            (self.target, self.source)
        }
    }
}

/// Undirected weighted graph without parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from edges that already satisfy the invariants.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        for e in &edges {
            check_edge(vertex_count, e)?;
        }
        let mut keys: Vec<_> = edges.iter().map(Edge::key).collect();
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge between {} and {}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    /// Builds a graph, merging edges that share an unordered endpoint pair by
    /// summing their weights.
    ///
    /// Output edges are stored as `(min, max)` pairs sorted lexicographically.
    /// Weights of a merged pair are summed in input order.
    pub fn from_edges_merged<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut keyed: Vec<((VertexId, VertexId), f64)> = Vec::new();
        for e in edges {
            check_edge(vertex_count, &e)?;
            keyed.push((e.key(), e.weight));
        }
        // Stable, so equal keys keep input order and the sums are reproducible.
        keyed.par_sort_by_key(|&(k, _)| k);
        Ok(Self {
            vertex_count,
            edges: merge_sorted(&keyed),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Total edge weight `W`; loops counted once.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

fn check_edge(vertex_count: usize, e: &Edge) -> Result<()> {
    for v in [e.source, e.target] {
        if v >= vertex_count {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count,
            });
        }
    }
    if !(e.weight > 0.0 && e.weight.is_finite()) {
        return Err(Error::InvalidGraph(format!(
            "edge ({}, {}) has non-positive or non-finite weight {}",
            e.source, e.target, e.weight
        )));
    }
    Ok(())
}

fn merge_sorted(keyed: &[((VertexId, VertexId), f64)]) -> Vec<Edge> {
    let mut out: Vec<Edge> = Vec::with_capacity(keyed.len());
    for &((a, b), w) in keyed {
        match out.last_mut() {
            Some(last) if last.source == a && last.target == b => last.weight += w,
            _ => out.push(Edge::new(a, b, w)),
        }
    }
    out
}

/// Directed, source-sorted neighbour arrays with weighted degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyIndex {
    sources: Vec<VertexId>,
    targets: Vec<VertexId>,
    weights: Vec<f64>,
    offsets: Vec<usize>,
    counts: Vec<usize>,
    degrees: Vec<f64>,
    loop_weights: Vec<f64>,
    total_weight: f64,
}

impl AdjacencyIndex {
    /// Neighbour computation: mirror every non-loop edge, sort by
    /// `(source, target)`, count targets per source and take the exclusive
    /// prefix sum of the counts as slice offsets.
    pub fn build(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut directed: Vec<(VertexId, VertexId, f64)> =
            Vec::with_capacity(2 * graph.edge_count());
        for e in graph.edges() {
            directed.push((e.source, e.target, e.weight));
            if !e.is_loop() {
                directed.push((e.target, e.source, e.weight));
            }
        }
        // (source, target) keys are unique, so an unstable sort is still deterministic.
        directed.par_sort_unstable_by_key(|&(s, t, _)| (s, t));

        let mut counts = vec![0usize; n];
        for &(s, _, _) in &directed {
            counts[s] += 1;
        }
        let mut offsets = Vec::with_capacity(n);
        let mut running = 0usize;
        for &c in &counts {
            offsets.push(running);
            running += c;
        }

        let mut sources = Vec::with_capacity(directed.len());
        let mut targets = Vec::with_capacity(directed.len());
        let mut weights = Vec::with_capacity(directed.len());
        for (s, t, w) in directed {
            sources.push(s);
            targets.push(t);
            weights.push(w);
        }

        let (degrees, loop_weights): (Vec<f64>, Vec<f64>) = (0..n)
            .into_par_iter()
            .map(|v| {
                let range = offsets[v]..offsets[v] + counts[v];
                let mut degree = 0.0;
                let mut loop_weight = 0.0;
                for k in range {
                    if targets[k] == v {
                        loop_weight += weights[k];
                        degree += 2.0 * weights[k];
                    } else {
                        degree += weights[k];
                    }
                }
                (degree, loop_weight)
            })
            .unzip();

        Self {
            sources,
            targets,
            weights,
            offsets,
            counts,
            degrees,
            loop_weights,
            total_weight: graph.total_weight(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.counts.len()
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Weighted degree `δ_i`, with loops counted twice.
    pub fn weighted_degree(&self, vertex: VertexId) -> Result<f64> {
        self.check_vertex(vertex)?;
        Ok(self.degrees[vertex])
    }

    /// Weight of the loop at `vertex`, zero when there is none.
    pub fn loop_weight(&self, vertex: VertexId) -> f64 {
        self.loop_weights[vertex]
    }

    /// Directed entries `(target, weight)` whose source is `vertex`, in
    /// ascending target order. Panics if `vertex` is out of range.
    pub fn neighbors(&self, vertex: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let range = self.offsets[vertex]..self.offsets[vertex] + self.counts[vertex];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn max_neighbor_count(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub(crate) fn check_vertex(&self, vertex: VertexId) -> Result<()> {
        if vertex >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_adjacency() {
        let idx = AdjacencyIndex::build(&path3());
        assert_eq!(idx.sources(), &[0, 1, 1, 2]);
        assert_eq!(idx.targets(), &[1, 0, 2, 1]);
        assert_eq!(idx.offsets(), &[0, 1, 3]);
        assert_eq!(idx.counts(), &[1, 2, 1]);
        assert_eq!(idx.degrees(), &[1.0, 2.0, 1.0]);
        assert_eq!(idx.total_weight(), 2.0);
    }

    #[test]
    fn single_loop() {
        let g = Graph::new(1, vec![Edge::new(0, 0, 2.0)]).unwrap();
        let idx = AdjacencyIndex::build(&g);
        assert_eq!(idx.sources(), &[0]);
        assert_eq!(idx.targets(), &[0]);
        assert_eq!(idx.degrees(), &[4.0]);
        assert_eq!(idx.total_weight(), 2.0);
        assert_eq!(idx.loop_weight(0), 2.0);
    }

    #[test]
    fn triangle_degrees() {
        let g = Graph::new(
            3,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 1.0),
                Edge::new(0, 2, 1.0),
            ],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&g);
        assert_eq!(idx.degrees(), &[2.0, 2.0, 2.0]);
        assert_eq!(idx.total_weight(), 3.0);
        assert_eq!(idx.degrees().iter().sum::<f64>(), 2.0 * idx.total_weight());
    }

    #[test]
    fn weighted_degree_cases() {
        // isolated vertex 5, star centre 0, loop-plus-edge at 6
        let g = Graph::new(
            8,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(0, 2, 1.0),
                Edge::new(0, 3, 1.0),
                Edge::new(0, 4, 1.0),
                Edge::new(6, 7, 1.0),
                Edge::new(6, 6, 3.0),
            ],
        )
        .unwrap();
        let idx = AdjacencyIndex::build(&g);
        assert_eq!(idx.weighted_degree(5).unwrap(), 0.0);
        assert_eq!(idx.weighted_degree(0).unwrap(), 4.0);
        assert_eq!(idx.weighted_degree(6).unwrap(), 7.0);
        assert_eq!(
            idx.weighted_degree(8),
            Err(Error::VertexOutOfRange {
                vertex: 8,
                vertex_count: 8
            })
        );
    }

    #[test]
    fn rejects_duplicates_and_bad_weights() {
        assert!(Graph::new(2, vec![Edge::new(0, 1, 1.0), Edge::new(1, 0, 1.0)]).is_err());
        assert!(Graph::new(2, vec![Edge::new(0, 1, 0.0)]).is_err());
        assert!(Graph::new(2, vec![Edge::new(0, 2, 1.0)]).is_err());
        assert!(Graph::new(0, vec![]).is_err());
    }

    #[test]
    fn merged_construction_sums_duplicates() {
        let g = Graph::from_edges_merged(
            3,
            vec![
                Edge::new(1, 0, 2.0),
                Edge::new(2, 2, 1.0),
                Edge::new(0, 1, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(g.edges(), &[Edge::new(0, 1, 3.0), Edge::new(2, 2, 1.0)]);
    }
}
