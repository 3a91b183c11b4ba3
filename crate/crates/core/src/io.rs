//! Plain-text graph and community formats, plus synthetic fixtures.
//!
//! Edge lists hold one `source target [weight]` record per line; lines
//! starting with `#` or `%` and blank lines are skipped. Vertex ids may be any
//! non-negative integers and are densified in ascending order. Edges sharing
//! an unordered endpoint pair are merged by summing their weights.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::louvain::{final_partition, Dendrogram};
use crate::modularity::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    MatrixMarket,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "matrixmarket" => Ok(Format::MatrixMarket),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

/// A parsed graph with the original id of every dense vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub original_ids: Vec<u64>,
}

impl ParsedGraph {
    /// Dense ids double as original ids.
    pub fn identity(graph: Graph) -> Self {
        let original_ids = (0..graph.vertex_count() as u64).collect();
        Self {
            graph,
            original_ids,
        }
    }
}

struct RawEdge {
    line: usize,
    source: u64,
    target: u64,
    weight: f64,
}

fn parse_token<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

fn check_weight(weight: f64, line: usize) -> Result<()> {
    if weight > 0.0 && weight.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight { line, weight })
    }
}

fn densify(raw: Vec<RawEdge>) -> Result<ParsedGraph> {
    if raw.is_empty() {
        return Err(Error::InvalidGraph("input contains no edges".into()));
    }
    let mut ids: Vec<u64> = raw.iter().flat_map(|e| [e.source, e.target]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |id: u64| -> VertexId { ids.binary_search(&id).expect("id was collected") };
    let edges: Vec<Edge> = raw
        .iter()
        .map(|e| Edge::new(dense(e.source), dense(e.target), e.weight))
        .collect();
    let graph = Graph::from_edges_merged(ids.len(), edges)?;
    Ok(ParsedGraph {
        graph,
        original_ids: ids,
    })
}

/// Parses a whitespace-separated edge list. Lines without a weight get
/// `default_weight`.
pub fn parse_edge_list(text: &str, default_weight: f64) -> Result<ParsedGraph> {
    if !(default_weight > 0.0 && default_weight.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "default weight must be positive, got {default_weight}"
        )));
    }
    let mut raw = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected `source target [weight]`, got {} fields",
                    tokens.len()
                ),
            });
        }
        let source = parse_token(tokens[0], line_no, "vertex id")?;
        let target = parse_token(tokens[1], line_no, "vertex id")?;
        let weight = match tokens.get(2) {
            Some(t) => parse_token(t, line_no, "weight")?,
            None => default_weight,
        };
        check_weight(weight, line_no)?;
        raw.push(RawEdge {
            line: line_no,
            source,
            target,
            weight,
        });
    }
    densify(raw)
}

/// Parses a Matrix Market coordinate file (`real`, `integer` or `pattern`
/// field; `symmetric` or `general` symmetry). Indices are 1-based and become
/// the original ids; pattern entries get weight 1.
pub fn parse_matrix_market(text: &str) -> Result<ParsedGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::UnsupportedFormat("empty Matrix Market input".into()))?;
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::UnsupportedFormat(format!(
            "bad Matrix Market header `{header}`"
        )));
    }
    if fields[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!(
            "only coordinate matrices are supported, got `{}`",
            fields[2]
        )));
    }
    let pattern = match fields[3].as_str() {
        "pattern" => true,
        "real" | "integer" | "double" => false,
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "unsupported field `{other}`"
            )))
        }
    };
    if !matches!(fields[4].as_str(), "symmetric" | "general") {
        return Err(Error::UnsupportedFormat(format!(
            "unsupported symmetry `{}`",
            fields[4]
        )));
    }

    let mut size: Option<(u64, u64, usize)> = None;
    let mut raw: Vec<RawEdge> = Vec::new();
    for (k, line) in lines {
        let line_no = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((rows, cols, _)) = size else {
            if tokens.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected `rows cols entries`".into(),
                });
            }
            let rows = parse_token(tokens[0], line_no, "row count")?;
            let cols = parse_token(tokens[1], line_no, "column count")?;
            let nnz = parse_token(tokens[2], line_no, "entry count")?;
            if rows != cols {
                return Err(Error::UnsupportedFormat(format!(
                    "adjacency matrix must be square, got {rows}x{cols}"
                )));
            }
            size = Some((rows, cols, nnz));
            continue;
        };
        let expected = if pattern { 2 } else { 3 };
        if tokens.len() != expected {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {expected} fields, got {}", tokens.len()),
            });
        }
        let i: u64 = parse_token(tokens[0], line_no, "row index")?;
        let j: u64 = parse_token(tokens[1], line_no, "column index")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::Parse {
                line: line_no,
                message: format!("entry ({i}, {j}) outside {rows}x{cols}"),
            });
        }
        let weight = if pattern {
            1.0
        } else {
            parse_token(tokens[2], line_no, "value")?
        };
        check_weight(weight, line_no)?;
        raw.push(RawEdge {
            line: line_no,
            source: i,
            target: j,
            weight,
        });
    }
    let (_, _, nnz) = size.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing size line".into(),
    })?;
    if raw.len() != nnz {
        let line = raw.last().map_or(1, |e| e.line);
        return Err(Error::Parse {
            line,
            message: format!("header declares {nnz} entries, found {}", raw.len()),
        });
    }
    densify(raw)
}

pub fn read_graph(path: &Path, format: Format) -> Result<ParsedGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    match format {
        Format::EdgeList => parse_edge_list(&text, 1.0),
        Format::MatrixMarket => parse_matrix_market(&text),
    }
}

/// `k` cliques of `c` vertices each; vertex 0 of clique `t` is bridged to
/// vertex 0 of clique `(t + 1) mod k`. All weights are 1.
pub fn generate_ring_of_cliques(k: usize, c: usize) -> Result<Graph> {
    if k < 3 || c < 3 {
        return Err(Error::InvalidArgument(format!(
            "ring of cliques needs k >= 3 and c >= 3, got k={k}, c={c}"
        )));
    }
    let mut edges = Vec::with_capacity(k * c * (c - 1) / 2 + k);
    for t in 0..k {
        let base = t * c;
        for a in 0..c {
            for b in a + 1..c {
                edges.push(Edge::new(base + a, base + b, 1.0));
            }
        }
        edges.push(Edge::new(base, ((t + 1) % k) * c, 1.0));
    }
    Graph::from_edges_merged(k * c, edges)
}

/// Writes `source target weight` lines; weights use the shortest exact form.
pub fn write_edge_list(graph: &Graph, original_ids: Option<&[u64]>) -> String {
    let id = |v: VertexId| original_ids.map_or(v as u64, |ids| ids[v]);
    let mut out = String::new();
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", id(e.source), id(e.target), e.weight);
    }
    out
}

/// `vertex community` lines in ascending vertex order.
pub fn write_partition(labels: &[Label], original_ids: &[u64]) -> String {
    let mut rows: Vec<(u64, Label)> = original_ids
        .iter()
        .copied()
        .zip(labels.iter().copied())
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (v, c) in rows {
        let _ = writeln!(out, "{v} {c}");
    }
    out
}

/// One `# level <t>` block per level in level-local ids, then a
/// `# partition` block mapping original ids to their final community.
pub fn write_dendrogram(dendrogram: &Dendrogram, original_ids: &[u64]) -> Result<String> {
    let composed = final_partition(dendrogram)?;
    if composed.len() != original_ids.len() {
        return Err(Error::AssignmentLength {
            expected: original_ids.len(),
            actual: composed.len(),
        });
    }
    let mut out = String::new();
    for (t, level) in dendrogram.levels.iter().enumerate() {
        let _ = writeln!(out, "# level {t}");
        for (v, c) in level.iter().enumerate() {
            let _ = writeln!(out, "{v} {c}");
        }
    }
    out.push_str("# partition\n");
    out.push_str(&write_partition(&composed, original_ids));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &Graph) -> Vec<(usize, usize, f64)> {
        g.edges()
            .iter()
            .map(|e| (e.source, e.target, e.weight))
            .collect()
    }

    #[test]
    fn edge_list_path() {
        let p = parse_edge_list("0 1\n1 2\n", 1.0).unwrap();
        assert_eq!(p.graph.vertex_count(), 3);
        assert_eq!(edges(&p.graph), vec![(0, 1, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn edge_list_loop_and_relabel() {
        let p = parse_edge_list("5 5 2.0\n", 1.0).unwrap();
        assert_eq!(p.graph.vertex_count(), 1);
        assert_eq!(edges(&p.graph), vec![(0, 0, 2.0)]);
        assert_eq!(p.original_ids, vec![5]);
    }

    #[test]
    fn edge_list_merges_duplicates() {
        let p = parse_edge_list("0 1 1\n1 0 2\n", 1.0).unwrap();
        assert_eq!(p.graph.vertex_count(), 2);
        assert_eq!(edges(&p.graph), vec![(0, 1, 3.0)]);
    }

    #[test]
    fn edge_list_skips_comments() {
        let p = parse_edge_list("# header\n% other\n\n10 20\n", 1.0).unwrap();
        assert_eq!(p.original_ids, vec![10, 20]);
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(
            parse_edge_list("0 1\n0 x\n", 1.0),
            Err(Error::Parse {
                line: 2,
                message: "invalid vertex id `x`".into()
            })
        );
        assert!(matches!(
            parse_edge_list("0\n", 1.0),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2 3\n", 1.0),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n1 2 -1\n", 1.0),
            Err(Error::InvalidWeight { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 0\n", 1.0),
            Err(Error::InvalidWeight { line: 1, .. })
        ));
        assert!(parse_edge_list("-1 2\n", 1.0).is_err());
        assert!(parse_edge_list("# nothing\n", 1.0).is_err());
    }

    #[test]
    fn matrix_market_pattern() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n2 1\n3 2\n";
        let p = parse_matrix_market(text).unwrap();
        assert_eq!(p.graph.vertex_count(), 3);
        assert_eq!(edges(&p.graph), vec![(0, 1, 1.0), (1, 2, 1.0)]);
        assert_eq!(p.original_ids, vec![1, 2, 3]);
    }

    #[test]
    fn matrix_market_loop() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 4.0\n";
        let p = parse_matrix_market(text).unwrap();
        assert_eq!(edges(&p.graph), vec![(0, 0, 4.0)]);
    }

    #[test]
    fn matrix_market_general_collapses() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.5\n2 1 0.5\n";
        let p = parse_matrix_market(text).unwrap();
        assert_eq!(edges(&p.graph), vec![(0, 1, 2.0)]);
    }

    #[test]
    fn matrix_market_rejects_formats() {
        for header in [
            "%%MatrixMarket matrix array real general",
            "%%MatrixMarket matrix coordinate complex general",
            "%%MatrixMarket matrix coordinate real skew-symmetric",
            "not a header",
        ] {
            let text = format!("{header}\n2 2 1\n1 2 1\n");
            assert!(
                matches!(parse_matrix_market(&text), Err(Error::UnsupportedFormat(_))),
                "{header}"
            );
        }
        let short = "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n";
        assert!(matches!(
            parse_matrix_market(short),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn ring_sizes() {
        let g = generate_ring_of_cliques(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        let g = generate_ring_of_cliques(10, 6).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (60, 160));
        assert!(generate_ring_of_cliques(3, 2).is_err());
        assert!(generate_ring_of_cliques(2, 3).is_err());
    }

    #[test]
    fn dendrogram_identity() {
        let d = Dendrogram {
            levels: vec![vec![0, 1]],
            modularity_per_level: vec![0.0],
        };
        let text = write_dendrogram(&d, &[0, 1]).unwrap();
        assert_eq!(text, "# level 0\n0 0\n1 1\n# partition\n0 0\n1 1\n");
    }

    #[test]
    fn dendrogram_composes() {
        let d = Dendrogram {
            levels: vec![vec![0, 0, 1], vec![0, 0]],
            modularity_per_level: vec![0.0, 0.0],
        };
        let text = write_dendrogram(&d, &[7, 8, 9]).unwrap();
        assert!(text.ends_with("# partition\n7 0\n8 0\n9 0\n"));
        assert_eq!(
            write_dendrogram(&Dendrogram::default(), &[]),
            Err(Error::EmptyDendrogram)
        );
    }

    #[test]
    fn format_parses() {
        assert_eq!("edgelist".parse::<Format>().unwrap(), Format::EdgeList);
        assert_eq!(
            "matrixmarket".parse::<Format>().unwrap(),
            Format::MatrixMarket
        );
        assert!("csv".parse::<Format>().is_err());
    }
}
