//! Independent checks on MIS outputs, and an exact maximum independent set
//! solver for tiny graphs.

use thiserror::Error;

use crate::graph::Graph;

/// Largest graph [`brute_force_max_is`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidatorError {
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("set is not independent: edge ({u},{v})")]
    NotIndependent { u: usize, v: usize },
    #[error("brute force is limited to {limit} vertices, graph has {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("reference set is empty on a non-empty graph")]
    EmptyReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// Both endpoints are in the set; `u < v`.
    Adjacent(usize, usize),
}

impl Independence {
    pub fn holds(self) -> bool {
        self == Independence::Independent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maximality {
    Maximal,
    /// This vertex could join the set without breaking independence.
    Addable(usize),
}

impl Maximality {
    pub fn holds(self) -> bool {
        self == Maximality::Maximal
    }
}

fn membership(graph: &Graph, set: &[usize]) -> Result<Vec<bool>, ValidatorError> {
    let n = graph.num_vertices();
    let mut member = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(ValidatorError::VertexOutOfRange { vertex: v, n });
        }
        member[v] = true;
    }
    Ok(member)
}

fn first_conflict(graph: &Graph, member: &[bool]) -> Independence {
    for u in 0..member.len() {
        if member[u] {
            if let Some(&v) = graph.neighbors(u).iter().find(|&&v| v > u && member[v]) {
                return Independence::Adjacent(u, v);
            }
        }
    }
    Independence::Independent
}

pub fn check_independence(graph: &Graph, set: &[usize]) -> Result<Independence, ValidatorError> {
    Ok(first_conflict(graph, &membership(graph, set)?))
}

/// Requires an independent set; reports the smallest addable vertex if any.
pub fn check_maximality(graph: &Graph, set: &[usize]) -> Result<Maximality, ValidatorError> {
    let member = membership(graph, set)?;
    if let Independence::Adjacent(u, v) = first_conflict(graph, &member) {
        return Err(ValidatorError::NotIndependent { u, v });
    }
    let addable =
        (0..member.len()).find(|&v| !member[v] && !graph.neighbors(v).iter().any(|&u| member[u]));
    Ok(addable.map_or(Maximality::Maximal, Maximality::Addable))
}

/// Convenience: independent and maximal.
pub fn is_valid_mis(graph: &Graph, set: &[usize]) -> bool {
    matches!(check_maximality(graph, set), Ok(Maximality::Maximal))
}

/// Exact maximum independent set size by branch and bound over vertex
/// bitmasks.
pub fn brute_force_max_is(graph: &Graph) -> Result<usize, ValidatorError> {
    let n = graph.num_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(ValidatorError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0;
    branch(&adj, all, 0, &mut best);
    Ok(best as usize)
}

fn branch(adj: &[u32], cands: u32, size: u32, best: &mut u32) {
    if size + cands.count_ones() <= *best {
        return;
    }
    if cands == 0 {
        *best = size;
        return;
    }
    // Branch on the candidate with most candidate neighbors; degree <= 1
    // vertices can always be taken greedily.
    let mut pick = cands.trailing_zeros() as usize;
    let mut pick_deg = (adj[pick] & cands).count_ones();
    let mut rest = cands & (cands - 1);
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & cands).count_ones();
        if d <= 1 {
            return branch(adj, cands & !(1 << v) & !adj[v], size + 1, best);
        }
        if d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    if pick_deg <= 1 {
        return branch(adj, cands & !(1 << pick) & !adj[pick], size + 1, best);
    }
    branch(adj, cands & !(1 << pick) & !adj[pick], size + 1, best);
    branch(adj, cands & !(1 << pick), size, best);
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub cardinality: usize,
    pub reference_cardinality: usize,
    /// `100 * (reference - cardinality) / reference`; positive means smaller
    /// than the reference.
    pub deviation_pct: f64,
    pub independent: bool,
    pub maximal: bool,
}

impl QualityReport {
    pub fn accepted(&self) -> bool {
        self.independent && self.maximal
    }
}

pub fn quality_report(
    graph: &Graph,
    result: &[usize],
    reference: &[usize],
) -> Result<QualityReport, ValidatorError> {
    let independent = check_independence(graph, result)?.holds();
    let maximal = independent && check_maximality(graph, result)?.holds();
    let cardinality = membership(graph, result)?.iter().filter(|&&m| m).count();
    let reference_cardinality = membership(graph, reference)?.iter().filter(|&&m| m).count();
    let deviation_pct = match reference_cardinality {
        0 if graph.num_vertices() > 0 => return Err(ValidatorError::EmptyReference),
        0 => 0.0,
        r => 100.0 * (r as f64 - cardinality as f64) / r as f64,
    };
    Ok(QualityReport {
        cardinality,
        reference_cardinality,
        deviation_pct,
        independent,
        maximal,
    })
}
