//! Parallel Louvain optimisation with the minimum-label heuristics.
//!
//! Each iteration of a level scores every vertex against a frozen snapshot of
//! the previous iteration's communities and then commits all accepted moves as
//! one batch in ascending vertex order. Scoring is a pure per-vertex map, so
//! the outcome does not depend on how many workers run it.
//!
//! Two heuristics keep the lock-free sweep from oscillating:
//!
//! * generalised minimum label: among targets with equal gain the smallest
//!   label wins;
//! * singlet minimum label: a vertex alone in its community may join another
//!   singlet community only if that community has the smaller label.
//!
//! Together they guarantee that vertices only ever move into communities that
//! already exist in the snapshot, so the set of live labels can only shrink
//! within a level.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{AdjacencyIndex, Edge, Graph, VertexId};
use crate::modularity::{
    gain, gain_value, init_status, neighbor_community_weights, CommunityState, Label,
};
use crate::report::{GraphStats, ProcessTimes, TimingReport};
use rayon::prelude::*;

/// Below this magnitude the relative convergence test falls back to an
/// absolute one.
const RELATIVE_TEST_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Scoring runs as a parallel map on a worker pool.
    Parallel,
    /// Plain loop over vertices; same snapshot and batch semantics.
    Sequential,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Parallel => "parallel",
            Engine::Sequential => "sequential",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(Engine::Parallel),
            "sequential" => Ok(Engine::Sequential),
            other => Err(Error::InvalidArgument(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainConfig {
    /// Relative modularity change below which a level stops iterating.
    pub inner_threshold: f64,
    /// Minimum modularity improvement for a new level to be kept.
    pub outer_threshold: f64,
    pub max_inner_iterations: usize,
    pub worker_count: usize,
    pub engine: Engine,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            inner_threshold: 1e-6,
            outer_threshold: 1e-6,
            max_inner_iterations: 100,
            worker_count: 1,
            engine: Engine::Parallel,
        }
    }
}

impl LouvainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.inner_threshold.is_nan() || self.inner_threshold <= 0.0 {
            return Err(Error::InvalidArgument(
                "inner threshold must be positive".into(),
            ));
        }
        if self.outer_threshold.is_nan() || self.outer_threshold <= 0.0 {
            return Err(Error::InvalidArgument(
                "outer threshold must be positive".into(),
            ));
        }
        if self.max_inner_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max inner iterations must be at least 1".into(),
            ));
        }
        if self.worker_count == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.worker_count)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))
    }
}

/// Per-level community assignments. Level `t` maps the vertices of the level-`t`
/// graph to dense community ids, which are the vertices of level `t + 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dendrogram {
    pub levels: Vec<Vec<Label>>,
    pub modularity_per_level: Vec<f64>,
}

impl Dendrogram {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn final_partition(&self) -> Result<Vec<Label>> {
        final_partition(self)
    }

    pub fn final_modularity(&self) -> Option<f64> {
        self.modularity_per_level.last().copied()
    }
}

/// Composes all levels into an original-vertex → final-community map.
pub fn final_partition(dendrogram: &Dendrogram) -> Result<Vec<Label>> {
    let (first, rest) = dendrogram
        .levels
        .split_first()
        .ok_or(Error::EmptyDendrogram)?;
    let mut labels = first.clone();
    for (t, level) in rest.iter().enumerate() {
        for l in labels.iter_mut() {
            *l = *level.get(*l).ok_or_else(|| {
                Error::InvalidArgument(format!("level {} has no entry for vertex {}", t + 1, *l))
            })?;
        }
    }
    Ok(labels)
}

/// Receives progress events from [`run_with_observer`] and [`one_level`].
pub trait RunObserver: Send {
    /// Called once per level before the first iteration.
    fn level_started(&mut self, _level: usize, _state: &CommunityState, _modularity: f64) {}

    /// Called after each committed batch of moves.
    fn iteration_committed(
        &mut self,
        _level: usize,
        _iteration: usize,
        _state: &CommunityState,
        _modularity: f64,
    ) {
    }

    /// Called when the iterations of a level stop, before the isolated-vertex
    /// merge.
    fn level_finished(&mut self, _level: usize, _outcome: &LevelOutcome) {}

    /// Called after the graph for the next level has been built.
    fn graph_induced(&mut self, _level: usize, _parent: &Graph, _child: &Graph) {}
}

impl RunObserver for () {}

/// Result of optimising one level.
#[derive(Debug, Clone)]
pub struct LevelOutcome {
    pub state: CommunityState,
    /// Whether any vertex changed community.
    pub improved: bool,
    /// Committed iterations, including a final one without moves.
    pub iterations: usize,
    /// False when the iteration cap stopped the level.
    pub converged: bool,
    pub modularity: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dendrogram: Dendrogram,
    pub timing: TimingReport,
}

/// Applies the move rule to an already scored candidate set.
fn decide(
    snapshot: &CommunityState,
    own: Label,
    own_gain: f64,
    best: Label,
    best_gain: f64,
) -> Label {
    if best == own || best_gain - own_gain <= 0.0 {
        return own;
    }
    if snapshot.is_singlet(own) && snapshot.is_singlet(best) && best > own {
        return own;
    }
    best
}

/// Target community for `vertex` given the previous iteration's state.
///
/// Candidates are scored with [`gain`]; ties go to the smallest label, a move
/// needs a strictly positive modularity change, and a singlet may only join
/// another singlet with a smaller label.
pub fn best_move(
    idx: &AdjacencyIndex,
    vertex: VertexId,
    snapshot: &CommunityState,
) -> Result<Label> {
    let own = snapshot.community_of(vertex);
    let candidates = neighbor_community_weights(idx, vertex, snapshot)?;
    let mut own_gain = 0.0;
    let mut best = own;
    let mut best_gain = f64::NEG_INFINITY;
    // Candidates arrive in ascending label order, so `>` keeps the minimum label on ties.
    for cand in &candidates {
        let g = gain(idx, vertex, cand, snapshot)?;
        if cand.community == own {
            own_gain = g;
        }
        if g > best_gain {
            best_gain = g;
            best = cand.community;
        }
    }
    Ok(decide(snapshot, own, own_gain, best, best_gain))
}

/// Same rule as [`best_move`], using a reusable buffer instead of a map.
fn best_move_buffered(
    idx: &AdjacencyIndex,
    vertex: VertexId,
    snapshot: &CommunityState,
    buf: &mut Vec<(Label, f64)>,
) -> Label {
    let labels = snapshot.labels();
    let own = labels[vertex];
    buf.clear();
    buf.push((own, 0.0));
    for (u, w) in idx.neighbors(vertex) {
        if u != vertex {
            buf.push((labels[u], w));
        }
    }
    // Stable: weights for one label are summed in adjacency order.
    buf.sort_by_key(|&(l, _)| l);

    let w_total = snapshot.total_weight();
    let degree = idx.degrees()[vertex];
    let own_rest = snapshot.com_degree()[own] - degree;
    let mut own_gain = 0.0;
    let mut best = own;
    let mut best_gain = f64::NEG_INFINITY;
    let mut k = 0;
    while k < buf.len() {
        let label = buf[k].0;
        let mut e = buf[k].1;
        k += 1;
        while k < buf.len() && buf[k].0 == label {
            e += buf[k].1;
            k += 1;
        }
        let target_degree = if label == own {
            own_rest
        } else {
            snapshot.com_degree()[label]
        };
        let g = gain_value(e, degree, own_rest, target_degree, w_total);
        if label == own {
            own_gain = g;
        }
        if g > best_gain {
            best_gain = g;
            best = label;
        }
    }
    decide(snapshot, own, own_gain, best, best_gain)
}

/// Scores every vertex against `snapshot` and returns the accepted moves in
/// ascending vertex order.
fn score_all(
    idx: &AdjacencyIndex,
    snapshot: &CommunityState,
    engine: Engine,
) -> Result<Vec<(VertexId, Label)>> {
    let n = idx.vertex_count();
    let targets: Vec<Label> = match engine {
        Engine::Parallel => (0..n)
            .into_par_iter()
            .with_min_len(512)
            .map_init(Vec::new, |buf, v| best_move_buffered(idx, v, snapshot, buf))
            .collect(),
        Engine::Sequential => (0..n)
            .map(|v| best_move(idx, v, snapshot))
            .collect::<Result<_>>()?,
    };
    Ok(targets
        .into_iter()
        .enumerate()
        .filter(|&(v, t)| snapshot.community_of(v) != t)
        .collect())
}

fn commit(idx: &AdjacencyIndex, state: &mut CommunityState, moves: &[(VertexId, Label)]) {
    for &(v, target) in moves {
        state.move_vertex(idx, v, target);
    }
}

/// Applies moves in order, each only if it strictly raises modularity given
/// the moves already applied. Returns how many were applied.
fn commit_validated(
    idx: &AdjacencyIndex,
    state: &mut CommunityState,
    moves: &[(VertexId, Label)],
) -> usize {
    let w_total = state.total_weight();
    let mut applied = 0;
    for &(v, target) in moves {
        let own = state.community_of(v);
        let mut to_own = 0.0;
        let mut to_target = 0.0;
        for (u, w) in idx.neighbors(v) {
            if u == v {
                continue;
            }
            let c = state.community_of(u);
            if c == own {
                to_own += w;
            } else if c == target {
                to_target += w;
            }
        }
        let degree = idx.degrees()[v];
        let own_rest = state.com_degree()[own] - degree;
        let join = gain_value(
            to_target,
            degree,
            own_rest,
            state.com_degree()[target],
            w_total,
        );
        let stay = gain_value(to_own, degree, own_rest, own_rest, w_total);
        if join - stay > 0.0 {
            state.move_vertex(idx, v, target);
            applied += 1;
        }
    }
    applied
}

fn has_converged(previous: f64, current: f64, threshold: f64) -> bool {
    if previous.abs() < RELATIVE_TEST_FLOOR {
        (current - previous).abs() < threshold
    } else {
        ((current - previous) / previous).abs() < threshold
    }
}

/// Iterates snapshot sweeps on one level until the relative modularity change
/// drops below the inner threshold or the iteration cap is hit.
pub fn one_level(
    idx: &AdjacencyIndex,
    state: CommunityState,
    config: &LouvainConfig,
) -> Result<LevelOutcome> {
    config.validate()?;
    let pool = config.pool()?;
    pool.install(|| one_level_in(idx, state, config, 0, &mut ()))
}

fn one_level_in(
    idx: &AdjacencyIndex,
    mut state: CommunityState,
    config: &LouvainConfig,
    level: usize,
    observer: &mut dyn RunObserver,
) -> Result<LevelOutcome> {
    let mut q = state.modularity()?;
    observer.level_started(level, &state, q);
    let mut previous: Option<f64> = None;
    let mut improved = false;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_inner_iterations {
        let moves = score_all(idx, &state, config.engine)?;
        let mut next = state.clone();
        commit(idx, &mut next, &moves);
        let mut applied = moves.len();
        let mut q_next = next.modularity()?;
        if q_next < q {
            // Simultaneous moves interfered; replay them one by one against
            // the live state and keep only those that still pay off.
            next = state.clone();
            applied = commit_validated(idx, &mut next, &moves);
            q_next = next.modularity()?;
        }
        state = next;
        q = q_next;
        iterations += 1;
        observer.iteration_committed(level, iterations, &state, q);
        if applied == 0 {
            converged = true;
            break;
        }
        improved = true;
        if let Some(p) = previous {
            if has_converged(p, q, config.inner_threshold) {
                converged = true;
                break;
            }
        }
        previous = Some(q);
    }
    let outcome = LevelOutcome {
        state,
        improved,
        iterations,
        converged,
        modularity: q,
    };
    observer.level_finished(level, &outcome);
    Ok(outcome)
}

/// Post-pass for vertices sitting alone whose neighbours all belong to a
/// single other community: such a vertex joins that community when the move
/// raises modularity. Moves are decided against one snapshot and committed
/// together; the singlet minimum-label rule applies here too.
pub fn merge_isolated(idx: &AdjacencyIndex, state: &CommunityState) -> CommunityState {
    let mut next = state.clone();
    let moves = isolated_merges(idx, state);
    commit(idx, &mut next, &moves);
    next
}

fn isolated_merges(idx: &AdjacencyIndex, snapshot: &CommunityState) -> Vec<(VertexId, Label)> {
    let w_total = snapshot.total_weight();
    let mut moves = Vec::new();
    for v in 0..idx.vertex_count() {
        let own = snapshot.community_of(v);
        if !snapshot.is_singlet(own) {
            continue;
        }
        let mut target: Option<Label> = None;
        let mut weight = 0.0;
        let mut unique = true;
        for (u, w) in idx.neighbors(v) {
            let c = snapshot.community_of(u);
            if u == v || c == own {
                continue;
            }
            match target {
                None => target = Some(c),
                Some(t) if t != c => {
                    unique = false;
                    break;
                }
                Some(_) => {}
            }
            weight += w;
        }
        let Some(target) = target.filter(|_| unique) else {
            continue;
        };
        if snapshot.is_singlet(target) && target > own {
            continue;
        }
        let degree = idx.degrees()[v];
        let own_rest = snapshot.com_degree()[own] - degree;
        let join = gain_value(
            weight,
            degree,
            own_rest,
            snapshot.com_degree()[target],
            w_total,
        );
        let stay = gain_value(0.0, degree, own_rest, own_rest, w_total);
        if join - stay > 0.0 {
            moves.push((v, target));
        }
    }
    moves
}

/// Dense relabelling of the live communities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renumbering {
    /// Per-vertex label in `0..k`.
    pub assignment: Vec<Label>,
    /// `(old, new)` pairs, ascending in both components.
    pub label_map: Vec<(Label, Label)>,
}

impl Renumbering {
    pub fn community_count(&self) -> usize {
        self.label_map.len()
    }
}

/// Maps the labels in use onto `0..k`, preserving their order.
pub fn renumber(labels: &[Label]) -> Renumbering {
    let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut present = vec![false; bound];
    for &l in labels {
        present[l] = true;
    }
    let mut new_id = vec![usize::MAX; bound];
    let mut label_map = Vec::new();
    for (old, _) in present.iter().enumerate().filter(|(_, &p)| p) {
        new_id[old] = label_map.len();
        label_map.push((old, label_map.len()));
    }
    Renumbering {
        assignment: labels.iter().map(|&l| new_id[l]).collect(),
        label_map,
    }
}

/// Collapses each community to one vertex. Intra-community weight, including
/// existing loops, becomes a loop on the new vertex; weights between two
/// communities are summed onto one edge.
pub fn induce_graph(graph: &Graph, assignment: &[Label]) -> Result<Graph> {
    if assignment.len() != graph.vertex_count() {
        return Err(Error::AssignmentLength {
            expected: graph.vertex_count(),
            actual: assignment.len(),
        });
    }
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    Graph::from_edges_merged(
        k,
        graph
            .edges()
            .iter()
            .map(|e| Edge::new(assignment[e.source], assignment[e.target], e.weight)),
    )
}

/// Full multi-level run with default observer.
pub fn run(graph: &Graph, config: &LouvainConfig) -> Result<RunOutcome> {
    run_with_observer(graph, config, &mut ())
}

/// Runs levels until a new level improves modularity by less than the outer
/// threshold. That last level is discarded; its processing time is still
/// counted in the report totals.
pub fn run_with_observer(
    graph: &Graph,
    config: &LouvainConfig,
    observer: &mut dyn RunObserver,
) -> Result<RunOutcome> {
    config.validate()?;
    if graph.total_weight() <= 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let pool = config.pool()?;
    pool.install(|| run_in(graph, config, observer))
}

fn run_in(
    graph: &Graph,
    config: &LouvainConfig,
    observer: &mut dyn RunObserver,
) -> Result<RunOutcome> {
    let started = Instant::now();
    let mut dendrogram = Dendrogram::default();
    let mut levels: Vec<ProcessTimes> = Vec::new();
    let mut totals = ProcessTimes::default();
    let mut stats: Option<GraphStats> = None;
    let mut current_q: Option<f64> = None;
    let mut current = graph.clone();

    for level in 0.. {
        let mut times = ProcessTimes::default();

        let t = Instant::now();
        let idx = AdjacencyIndex::build(&current);
        times.neighbour = t.elapsed().as_secs_f64();
        if stats.is_none() {
            stats = Some(GraphStats::new(&current, &idx));
        }

        let t = Instant::now();
        let state = init_status(&idx);
        times.init = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let outcome = one_level_in(&idx, state, config, level, observer)?;
        let state = merge_isolated(&idx, &outcome.state);
        let q = state.modularity()?;
        times.onelevel = t.elapsed().as_secs_f64();

        if let Some(prev) = current_q {
            if q - prev < config.outer_threshold {
                totals.add(&times);
                break;
            }
        }

        let t = Instant::now();
        let renumbered = renumber(state.labels());
        times.renumber = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let child = induce_graph(&current, &renumbered.assignment)?;
        times.induce = t.elapsed().as_secs_f64();
        observer.graph_induced(level, &current, &child);

        dendrogram.levels.push(renumbered.assignment);
        dendrogram.modularity_per_level.push(q);
        totals.add(&times);
        levels.push(times);
        current_q = Some(q);
        current = child;
    }

    let timing = TimingReport {
        levels,
        totals,
        wall: started.elapsed().as_secs_f64(),
        engine: config.engine,
        worker_count: config.worker_count,
        graph: stats.expect("at least one level is processed"),
    };
    Ok(RunOutcome { dendrogram, timing })
}
