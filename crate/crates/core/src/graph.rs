//! Undirected simple graphs in compressed sparse row form.
//!
//! Every constructor normalizes its input: edges are symmetrized, duplicates
//! and self-loops are dropped and each neighbor list is sorted ascending.
//! `Graph::from_csr_unchecked` is the one escape hatch, used to build
//! deliberately broken fixtures for [`validate_graph`].

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
}

/// Immutable CSR adjacency of an undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a normalized graph on `n` vertices from an arbitrary edge list.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let neighbors = pairs.into_iter().map(|(_, v)| v).collect();
        Ok(Self { offsets, neighbors })
    }

    /// Wraps raw CSR arrays without checking any invariant.
    pub fn from_csr_unchecked(offsets: Vec<usize>, neighbors: Vec<usize>) -> Self {
        Self { offsets, neighbors }
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Undirected edge count.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn neighbor_array(&self) -> &[usize] {
        &self.neighbors
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Binary-search adjacency test; relies on sorted neighbor lists.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_vertices())
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v)
    }
}

/// Degree summary. `avg_degree` is exact: `sum(deg) / n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub avg_degree: Ratio<u64>,
    pub min_degree: usize,
    pub max_degree: usize,
}

impl DegreeStats {
    pub fn avg_degree_f64(&self) -> f64 {
        *self.avg_degree.numer() as f64 / *self.avg_degree.denom() as f64
    }
}

/// The empty vertex set reports an average of zero.
pub fn degree_stats(graph: &Graph) -> DegreeStats {
    let n = graph.num_vertices();
    let degrees = (0..n).map(|v| graph.degree(v));
    let min_degree = degrees.clone().min().unwrap_or(0);
    let max_degree = degrees.max().unwrap_or(0);
    let sum = graph.neighbor_array().len() as u64;
    DegreeStats {
        avg_degree: Ratio::new(sum, n.max(1) as u64),
        min_degree,
        max_degree,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OffsetsLength,
    OffsetsOrigin,
    OffsetsEnd { expected: usize, found: usize },
    OffsetsDecreasing { vertex: usize },
    NeighborOutOfRange { vertex: usize, neighbor: usize },
    SelfLoop { vertex: usize },
    DuplicateNeighbor { vertex: usize, neighbor: usize },
    UnsortedNeighbors { vertex: usize },
    MissingReverseEdge { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::OffsetsLength => write!(f, "offsets array is empty"),
            Violation::OffsetsOrigin => write!(f, "offsets origin"),
            Violation::OffsetsEnd { expected, found } => {
                write!(f, "offsets end: expected {expected}, found {found}")
            }
            Violation::OffsetsDecreasing { vertex } => {
                write!(f, "offsets decrease at vertex {vertex}")
            }
            Violation::NeighborOutOfRange { vertex, neighbor } => {
                write!(f, "neighbor {neighbor} of vertex {vertex} out of range")
            }
            Violation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Violation::DuplicateNeighbor { vertex, neighbor } => {
                write!(f, "duplicate neighbor {neighbor} of vertex {vertex}")
            }
            Violation::UnsortedNeighbors { vertex } => {
                write!(f, "neighbors of vertex {vertex} not sorted")
            }
            Violation::MissingReverseEdge { u, v } => write!(f, "missing reverse edge ({u},{v})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphReport {
    pub violations: Vec<Violation>,
}

impl GraphReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant and reports all violations found.
///
/// Offsets problems are reported first; neighbor-level checks only run when
/// the offsets can be trusted to slice the neighbor array.
pub fn validate_graph(graph: &Graph) -> GraphReport {
    let offsets = &graph.offsets;
    let nbrs = &graph.neighbors;
    let mut violations = Vec::new();

    if offsets.is_empty() {
        violations.push(Violation::OffsetsLength);
        return GraphReport { violations };
    }
    let n = offsets.len() - 1;
    if offsets[0] != 0 {
        violations.push(Violation::OffsetsOrigin);
    }
    if offsets[n] != nbrs.len() {
        violations.push(Violation::OffsetsEnd {
            expected: nbrs.len(),
            found: offsets[n],
        });
    }
    for v in 0..n {
        if offsets[v + 1] < offsets[v] {
            violations.push(Violation::OffsetsDecreasing { vertex: v });
        }
    }
    let sliceable = offsets.windows(2).all(|w| w[0] <= w[1]) && offsets[n] <= nbrs.len();
    if !sliceable {
        return GraphReport { violations };
    }

    for v in 0..n {
        let list = &nbrs[offsets[v]..offsets[v + 1]];
        let mut sorted = true;
        for (k, &u) in list.iter().enumerate() {
            if u >= n {
                violations.push(Violation::NeighborOutOfRange {
                    vertex: v,
                    neighbor: u,
                });
                continue;
            }
            if u == v {
                violations.push(Violation::SelfLoop { vertex: v });
            }
            if k > 0 {
                let prev = list[k - 1];
                if prev == u {
                    violations.push(Violation::DuplicateNeighbor {
                        vertex: v,
                        neighbor: u,
                    });
                } else if prev > u {
                    sorted = false;
                }
            }
        }
        if !sorted {
            violations.push(Violation::UnsortedNeighbors { vertex: v });
        }
    }

    for v in 0..n {
        for &u in &nbrs[offsets[v]..offsets[v + 1]] {
            if u >= n || u == v {
                continue;
            }
            let back = &nbrs[offsets[u]..offsets[u + 1]];
            if !back.contains(&v) {
                violations.push(Violation::MissingReverseEdge { u: v, v: u });
            }
        }
    }
    GraphReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn normalization_drops_loops_and_duplicates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2), (2, 1)]).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1]);
        assert!(validate_graph(&g).is_valid());
    }

    #[test]
    fn out_of_range_endpoint_is_rejected() {
        let err = Graph::from_edges(2, [(0, 2)]).unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { u: 0, v: 2, n: 2 });
    }

    #[test]
    fn degree_stats_on_small_graphs() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = degree_stats(&k3);
        assert_eq!(s.avg_degree, Ratio::from_integer(2));
        assert_eq!((s.min_degree, s.max_degree), (2, 2));

        let star = Graph::from_edges(5, (1..5).map(|l| (0, l))).unwrap();
        let s = degree_stats(&star);
        assert_eq!(s.avg_degree, Ratio::new(8, 5));
        assert_eq!((s.min_degree, s.max_degree), (1, 4));
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (0, 2)]).unwrap();
        let sum: usize = (0..6).map(|v| g.degree(v)).sum();
        assert_eq!(sum, 2 * g.num_edges());
    }

    #[test]
    fn clean_graph_has_no_violations() {
        assert!(validate_graph(&p3()).violations.is_empty());
        assert!(validate_graph(&Graph::empty(4)).is_valid());
    }

    #[test]
    fn asymmetric_fixture_reports_missing_reverse_edge() {
        // 0 -> 1 present, 1 -> 0 absent.
        let g = Graph::from_csr_unchecked(vec![0, 1, 1], vec![1]);
        let report = validate_graph(&g);
        assert_eq!(
            report.violations,
            vec![Violation::MissingReverseEdge { u: 0, v: 1 }]
        );
        assert_eq!(
            report.violations[0].to_string(),
            "missing reverse edge (0,1)"
        );
    }

    #[test]
    fn shifted_offsets_fixture_reports_origin() {
        let g = Graph::from_csr_unchecked(vec![1, 2, 2], vec![1, 0]);
        let report = validate_graph(&g);
        assert!(report.violations.contains(&Violation::OffsetsOrigin));
        assert_eq!(Violation::OffsetsOrigin.to_string(), "offsets origin");
    }

    #[test]
    fn self_loop_duplicate_and_order_fixtures() {
        let g = Graph::from_csr_unchecked(vec![0, 3, 4, 5], vec![2, 0, 2, 0, 0]);
        let v = validate_graph(&g).violations;
        assert!(v.contains(&Violation::SelfLoop { vertex: 0 }));
        assert!(v.contains(&Violation::UnsortedNeighbors { vertex: 0 }));
        let g = Graph::from_csr_unchecked(vec![0, 2, 3], vec![1, 1, 0]);
        let v = validate_graph(&g).violations;
        assert!(v.contains(&Violation::DuplicateNeighbor {
            vertex: 0,
            neighbor: 1
        }));
    }

    #[test]
    fn edges_iterates_each_edge_once() {
        let g = p3();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
    }
}
