//! Shared-memory parallel Louvain community detection.
//!
//! The pipeline per level is: neighbour computation ([`AdjacencyIndex::build`]),
//! status initialisation ([`init_status`]), snapshot-batched optimisation
//! ([`one_level`] followed by [`merge_isolated`]), dense relabelling
//! ([`renumber`]) and graph induction ([`induce_graph`]). [`run`] drives the
//! levels and records a [`Dendrogram`] and a [`TimingReport`].

pub mod error;
pub mod graph;
pub mod io;
pub mod louvain;
pub mod modularity;
pub mod report;

pub use error::{Error, Result};
pub use graph::{AdjacencyIndex, Edge, Graph, VertexId};
pub use io::{
    generate_ring_of_cliques, parse_edge_list, parse_matrix_market, read_graph, write_dendrogram,
    write_edge_list, write_partition, Format, ParsedGraph,
};
pub use louvain::{
    best_move, final_partition, induce_graph, merge_isolated, one_level, renumber, run,
    run_with_observer, Dendrogram, Engine, LevelOutcome, LouvainConfig, Renumbering, RunObserver,
    RunOutcome,
};
pub use modularity::{
    gain, init_status, modularity, neighbor_community_weights, CommunityState, GainCandidate, Label,
};
pub use report::{emit_timing, format_real, GraphStats, ProcessTimes, TimingReport};
