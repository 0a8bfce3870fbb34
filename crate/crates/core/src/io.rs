//! Graph readers and writers: Matrix Market coordinate files and plain
//! whitespace-separated edge lists.
//!
//! Both readers feed [`Graph::from_edges`], so weights are discarded, directed
//! inputs are symmetrized, and self-loops and duplicate edges disappear.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed Matrix Market header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: malformed size line")]
    MalformedSize { line: usize },
    #[error("line {line}: matrix is {rows}x{cols}, adjacency matrices must be square")]
    NotSquare {
        line: usize,
        rows: usize,
        cols: usize,
    },
    #[error("line {line}: empty vertex set")]
    EmptyVertexSet { line: usize },
    #[error("line {line}: malformed entry")]
    MalformedEntry { line: usize },
    #[error("line {line}: index {index} outside 1..={bound}")]
    IndexOutOfBounds {
        line: usize,
        index: usize,
        bound: usize,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    MissingEntries {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: token {token:?} is not an integer vertex id")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: negative vertex id {id}")]
    NegativeId { line: usize, id: i64 },
    #[error("edge list contains no edges")]
    EmptyGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

impl GraphFormat {
    /// `.mtx` selects Matrix Market; anything else is read as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mtx" => Ok(GraphFormat::MatrixMarket),
            "edges" => Ok(GraphFormat::EdgeList),
            other => Err(format!(
                "unknown graph format {other:?} (expected mtx or edges)"
            )),
        }
    }
}

pub fn read_graph(path: &Path, format: GraphFormat) -> Result<Graph, ParseError> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        GraphFormat::MatrixMarket => parse_matrix_market(reader),
        GraphFormat::EdgeList => parse_edge_list(reader),
    }
}

/// Parses a Matrix Market `coordinate` file. Both `general` and `symmetric`
/// storage are accepted; entry values, if any, are ignored.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut lines = reader.lines();

    let header = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(ParseError::MalformedHeader {
                line: 1,
                reason: "missing header".into(),
            })
        }
    };
    check_mm_header(&header)?;

    let mut line_no = 1;
    let mut size: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for line in lines {
        let line = line?;
        line_no += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match size {
            None => {
                let mut dims = [0usize; 3];
                for d in dims.iter_mut() {
                    *d = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or(ParseError::MalformedSize { line: line_no })?;
                }
                let [rows, cols, nnz] = dims;
                if rows != cols {
                    return Err(ParseError::NotSquare {
                        line: line_no,
                        rows,
                        cols,
                    });
                }
                if rows == 0 {
                    return Err(ParseError::EmptyVertexSet { line: line_no });
                }
                size = Some((rows, nnz));
                edges.reserve(nnz);
            }
            Some((n, _)) => {
                let mut ends = [0usize; 2];
                for e in ends.iter_mut() {
                    let index: usize = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or(ParseError::MalformedEntry { line: line_no })?;
                    if index == 0 || index > n {
                        return Err(ParseError::IndexOutOfBounds {
                            line: line_no,
                            index,
                            bound: n,
                        });
                    }
                    *e = index - 1;
                }
                edges.push((ends[0], ends[1]));
            }
        }
    }

    let (n, nnz) = size.ok_or(ParseError::MalformedSize { line: line_no + 1 })?;
    if edges.len() < nnz {
        return Err(ParseError::MissingEntries {
            line: line_no,
            expected: nnz,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges)?)
}

fn check_mm_header(header: &str) -> Result<(), ParseError> {
    let bad = |reason: &str| ParseError::MalformedHeader {
        line: 1,
        reason: reason.to_string(),
    };
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(bad("expected %%MatrixMarket banner"));
    }
    if tokens.len() < 5 {
        return Err(bad("expected object, format, field and symmetry"));
    }
    if tokens[1] != "matrix" {
        return Err(bad("object must be 'matrix'"));
    }
    if tokens[2] != "coordinate" {
        return Err(bad("only coordinate format is supported"));
    }
    if !matches!(
        tokens[3].as_str(),
        "pattern" | "real" | "integer" | "double" | "complex"
    ) {
        return Err(bad("unknown field type"));
    }
    if !matches!(
        tokens[4].as_str(),
        "general" | "symmetric" | "skew-symmetric" | "hermitian"
    ) {
        return Err(bad("unknown symmetry"));
    }
    Ok(())
}

/// Parses `u v` pairs, one per line, with 0-based ids. Lines starting with `#`
/// or `%` are comments, except that a SNAP-style `# Nodes: N` comment raises
/// the vertex count to at least `N` so trailing isolated vertices survive.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut edges = Vec::new();
    let mut declared_nodes: Option<usize> = None;
    let mut max_id: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') || trimmed.starts_with('%') {
            if let Some(n) = nodes_hint(trimmed) {
                declared_nodes = Some(declared_nodes.map_or(n, |d| d.max(n)));
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut ends = [0usize; 2];
        for e in ends.iter_mut() {
            let token = tokens.next().ok_or_else(|| ParseError::InvalidToken {
                line: line_no,
                token: String::new(),
            })?;
            let id: i64 = token.parse().map_err(|_| ParseError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if id < 0 {
                return Err(ParseError::NegativeId { line: line_no, id });
            }
            *e = id as usize;
        }
        let hi = ends[0].max(ends[1]);
        max_id = Some(max_id.map_or(hi, |m| m.max(hi)));
        edges.push((ends[0], ends[1]));
    }

    let n = match (max_id, declared_nodes) {
        (None, None) | (None, Some(0)) => return Err(ParseError::EmptyGraph),
        (Some(m), hint) => (m + 1).max(hint.unwrap_or(0)),
        (None, Some(hint)) => hint,
    };
    Ok(Graph::from_edges(n, edges)?)
}

fn nodes_hint(comment: &str) -> Option<usize> {
    let mut tokens = comment.trim_start_matches(['#', '%']).split_whitespace();
    while let Some(t) = tokens.next() {
        if t.eq_ignore_ascii_case("nodes:") {
            return tokens.next()?.parse().ok();
        }
    }
    None
}

/// Writes the lower triangle as a `pattern symmetric` coordinate file.
pub fn write_matrix_market<W: Write>(graph: &Graph, mut out: W) -> io::Result<()> {
    let n = graph.num_vertices();
    writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(out, "{n} {n} {}", graph.num_edges())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", v + 1, u + 1)?;
    }
    Ok(())
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "# Nodes: {} Edges: {}",
        graph.num_vertices(),
        graph.num_edges()
    )?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
