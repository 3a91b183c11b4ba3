//! Community bookkeeping and the modularity algebra.
//!
//! [`CommunityState`] carries, per vertex, its community label and, per label,
//! the degree sum of the members, the weight of edges with both endpoints
//! inside the community (loops counted once) and the member count. Labels live
//! in `0..N`; a label is in use while its member count is non-zero.
//!
//! Modularity is evaluated from the aggregates as
//! `Q = Σ_C [ internal_C / W − (deg_C / 2W)² ]`.
//!
//! The gain of moving vertex `i` into community `C` is scored as if `i` had
//! already left its own community:
//!
//! `ΔQ_{i→C} = e_{i→C} / W + (2·δ_i·deg_{C(i)∖i} − 2·δ_i·deg_C) / (2W)²`
//!
//! Only differences of gains are meaningful: the modularity change of an
//! actual move from `C(i)` to `T` is `gain(T) − gain(C(i))`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyIndex, VertexId};

pub type Label = usize;

/// A candidate community for a vertex together with the edge weight `e_{i→C}`
/// linking the vertex into it (loops excluded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCandidate {
    pub community: Label,
    pub edge_weight_to: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityState {
    nodes_to_com: Vec<Label>,
    com_degree: Vec<f64>,
    com_internal: Vec<f64>,
    com_size: Vec<usize>,
    total_weight: f64,
}

impl CommunityState {
    /// Every vertex in its own community.
    pub fn singletons(idx: &AdjacencyIndex) -> Self {
        let n = idx.vertex_count();
        Self {
            nodes_to_com: (0..n).collect(),
            com_degree: idx.degrees().to_vec(),
            com_internal: (0..n).map(|v| idx.loop_weight(v)).collect(),
            com_size: vec![1; n],
            total_weight: idx.total_weight(),
        }
    }

    /// State for an arbitrary assignment with labels in `0..N`.
    pub fn from_assignment(idx: &AdjacencyIndex, labels: &[Label]) -> Result<Self> {
        let n = idx.vertex_count();
        if labels.len() != n {
            return Err(Error::AssignmentLength {
                expected: n,
                actual: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} outside 0..{n}"
            )));
        }
        let mut com_degree = vec![0.0; n];
        let mut com_internal = vec![0.0; n];
        let mut com_size = vec![0; n];
        for v in 0..n {
            let c = labels[v];
            com_degree[c] += idx.degrees()[v];
            com_size[c] += 1;
            for (u, w) in idx.neighbors(v) {
                if u >= v && labels[u] == c {
                    com_internal[c] += w;
                }
            }
        }
        Ok(Self {
            nodes_to_com: labels.to_vec(),
            com_degree,
            com_internal,
            com_size,
            total_weight: idx.total_weight(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes_to_com.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.nodes_to_com
    }

    pub fn community_of(&self, vertex: VertexId) -> Label {
        self.nodes_to_com[vertex]
    }

    pub fn com_degree(&self) -> &[f64] {
        &self.com_degree
    }

    pub fn com_internal(&self) -> &[f64] {
        &self.com_internal
    }

    pub fn com_size(&self) -> &[usize] {
        &self.com_size
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_singlet(&self, label: Label) -> bool {
        self.com_size[label] == 1
    }

    /// Labels with at least one member, ascending.
    pub fn nonempty_labels(&self) -> Vec<Label> {
        (0..self.com_size.len())
            .filter(|&c| self.com_size[c] > 0)
            .collect()
    }

    pub fn community_count(&self) -> usize {
        self.com_size.iter().filter(|&&s| s > 0).count()
    }

    pub fn modularity(&self) -> Result<f64> {
        let w = self.total_weight;
        if w <= 0.0 {
            return Err(Error::UndefinedModularity);
        }
        let two_w = 2.0 * w;
        let mut q = 0.0;
        for c in 0..self.com_size.len() {
            if self.com_size[c] == 0 {
                continue;
            }
            let a = self.com_degree[c] / two_w;
            q += self.com_internal[c] / w - a * a;
        }
        Ok(q)
    }

    /// Moves `vertex` into `target`: remove from the old community, then
    /// insert into the new one, using the current labels of its neighbours.
    pub fn move_vertex(&mut self, idx: &AdjacencyIndex, vertex: VertexId, target: Label) {
        let own = self.nodes_to_com[vertex];
        if own == target {
            return;
        }
        let mut to_own = 0.0;
        let mut to_target = 0.0;
        for (u, w) in idx.neighbors(vertex) {
            if u == vertex {
                continue;
            }
            let c = self.nodes_to_com[u];
            if c == own {
                to_own += w;
            } else if c == target {
                to_target += w;
            }
        }
        let degree = idx.degrees()[vertex];
        let loop_weight = idx.loop_weight(vertex);

        self.com_size[own] -= 1;
        if self.com_size[own] == 0 {
            self.com_degree[own] = 0.0;
            self.com_internal[own] = 0.0;
        } else {
            self.com_degree[own] -= degree;
            self.com_internal[own] -= to_own + loop_weight;
        }

        self.com_size[target] += 1;
        self.com_degree[target] += degree;
        self.com_internal[target] += to_target + loop_weight;
        self.nodes_to_com[vertex] = target;
    }
}

/// Initial status: every vertex alone in the community carrying its own id.
pub fn init_status(idx: &AdjacencyIndex) -> CommunityState {
    CommunityState::singletons(idx)
}

/// Edge weight from `vertex` into each neighbouring community, ascending by
/// label. Loops contribute nothing, and the vertex's own community is always
/// present, possibly with zero weight.
pub fn neighbor_community_weights(
    idx: &AdjacencyIndex,
    vertex: VertexId,
    state: &CommunityState,
) -> Result<Vec<GainCandidate>> {
    idx.check_vertex(vertex)?;
    let mut by_label: BTreeMap<Label, f64> = BTreeMap::new();
    by_label.insert(state.community_of(vertex), 0.0);
    for (u, w) in idx.neighbors(vertex) {
        if u == vertex {
            continue;
        }
        *by_label.entry(state.community_of(u)).or_insert(0.0) += w;
    }
    Ok(by_label
        .into_iter()
        .map(|(community, edge_weight_to)| GainCandidate {
            community,
            edge_weight_to,
        })
        .collect())
}

/// Modularity `Q` of the partition held in `state`.
pub fn modularity(state: &CommunityState) -> Result<f64> {
    state.modularity()
}

/// Gain of placing `vertex` into `candidate.community`, scored against its
/// own community with the vertex removed.
pub fn gain(
    idx: &AdjacencyIndex,
    vertex: VertexId,
    candidate: &GainCandidate,
    state: &CommunityState,
) -> Result<f64> {
    idx.check_vertex(vertex)?;
    let w = state.total_weight();
    if w <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let degree = idx.degrees()[vertex];
    let own = state.community_of(vertex);
    let own_rest = state.com_degree()[own] - degree;
    let target_degree = if candidate.community == own {
        own_rest
    } else {
        state.com_degree()[candidate.community]
    };
    Ok(gain_value(
        candidate.edge_weight_to,
        degree,
        own_rest,
        target_degree,
        w,
    ))
}

#[inline]
pub(crate) fn gain_value(
    edge_weight_to: f64,
    degree: f64,
    own_rest_degree: f64,
    target_degree: f64,
    total_weight: f64,
) -> f64 {
    let two_w = 2.0 * total_weight;
    edge_weight_to / total_weight
        + (2.0 * degree * own_rest_degree - 2.0 * degree * target_degree) / (two_w * two_w)
}
