//! Test-only oracles that work straight from edge lists, independent of the
//! adjacency index and the community aggregates.

#![allow(dead_code)]

use parlouvain::{Edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Modularity evaluated term by term: intra-community edge weight seen from
/// every endpoint, minus the squared community degree shares.
pub fn oracle_modularity(graph: &Graph, labels: &[usize]) -> f64 {
    let n = graph.vertex_count();
    let w: f64 = graph.edges().iter().map(|e| e.weight).sum();
    let mut degree = vec![0.0; n];
    let mut inside = 0.0;
    for e in graph.edges() {
        degree[e.source] += e.weight;
        degree[e.target] += e.weight;
        if labels[e.source] == labels[e.target] {
            // e_{i→C(i)} counts the edge once from each endpoint.
            inside += 2.0 * e.weight;
        }
    }
    let mut community_degree = vec![0.0; labels.iter().max().map_or(0, |m| m + 1)];
    for v in 0..n {
        community_degree[labels[v]] += degree[v];
    }
    let null: f64 = community_degree
        .iter()
        .map(|d| (d / (2.0 * w)) * (d / (2.0 * w)))
        .sum();
    inside / (2.0 * w) - null
}

/// Calls `f` with every set partition of `0..n` as a restricted growth string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    let mut labels = vec![0usize; n];
    let mut max_prefix = vec![0usize; n];
    loop {
        f(&labels);
        // Advance to the next restricted growth string.
        let mut i = n;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if labels[i] <= max_prefix[i - 1] {
                labels[i] += 1;
                break;
            }
        }
        max_prefix[i] = max_prefix[i - 1].max(labels[i]);
        for j in i + 1..n {
            labels[j] = 0;
            max_prefix[j] = max_prefix[i];
        }
    }
}

/// Best modularity over all set partitions.
pub fn optimal_modularity(graph: &Graph) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_partition(graph.vertex_count(), |labels| {
        best = best.max(oracle_modularity(graph, labels));
    });
    best
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All connected simple graphs on exactly `n ≥ 2` vertices up to isomorphism,
/// unit weights.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut pair_index = vec![vec![0usize; n]; n];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        pair_index[a][b] = k;
        pair_index[b][a] = k;
    }
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        if !connected(n, &edges) {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                edges
                    .iter()
                    .fold(0u64, |m, &(a, b)| m | 1 << pair_index[p[a]][p[b]])
            })
            .min()
            .unwrap();
        if seen.insert(canonical) {
            out.push(unit_graph(n, &edges));
        }
    }
    out
}

pub fn unit_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(
        n,
        edges.iter().map(|&(a, b)| Edge::new(a, b, 1.0)).collect(),
    )
    .unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges, with
/// optional random weights and loops.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_edges: usize,
    weighted: bool,
    loops: bool,
) -> Graph {
    let mut edges: Vec<Edge> = Vec::new();
    let mut used = std::collections::HashSet::new();
    let weight = |rng: &mut ChaCha8Rng| {
        if weighted {
            rng.random_range(0.1..3.0)
        } else {
            1.0
        }
    };
    for v in 1..n {
        let u = rng.random_range(0..v);
        used.insert((u, v));
        let w = weight(rng);
        edges.push(Edge::new(u, v, w));
    }
    for _ in 0..extra_edges {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b && !loops {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if used.insert(key) {
            let w = weight(rng);
            edges.push(Edge::new(key.0, key.1, w));
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
