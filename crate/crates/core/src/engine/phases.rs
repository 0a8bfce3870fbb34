//! The per-iteration building blocks: neighbor maxima, candidate generation,
//! H3 conflict resolution and the lock-free state update.

use rayon::prelude::*;

use super::{EngineError, VertexState};
use crate::graph::Graph;
use crate::priorities::{PriorityKey, PriorityVector};
use crate::tiling::{pack_vector, TiledVector};

/// Largest `(p, id)` key among alive neighbors of each alive vertex.
///
/// `None` orders below every real key, so a vertex without alive neighbors
/// always becomes a candidate. Dead vertices get `None` as well.
pub fn compute_max_np(
    graph: &Graph,
    priorities: &PriorityVector,
    states: &[VertexState],
) -> Vec<Option<PriorityKey>> {
    (0..graph.num_vertices())
        .into_par_iter()
        .map(|v| {
            if states[v] != VertexState::Alive {
                return None;
            }
            graph
                .neighbors(v)
                .iter()
                .filter(|&&u| states[u] == VertexState::Alive)
                .map(|&u| priorities.key(u))
                .max()
        })
        .collect()
}

/// `C(v) = 1` iff `v` is alive and its key beats `max_np[v]`.
pub fn generate_candidates(
    priorities: &PriorityVector,
    max_np: &[Option<PriorityKey>],
    states: &[VertexState],
    tile_dim: usize,
) -> TiledVector {
    let flags: Vec<u8> = (0..states.len())
        .into_par_iter()
        .map(|v| (states[v] == VertexState::Alive && Some(priorities.key(v)) > max_np[v]) as u8)
        .collect();
    pack_vector(&flags, tile_dim)
}

/// H3 candidate finalization.
///
/// All alive vertices start pending. Each round selects the pending vertices
/// whose key beats every pending neighbor, then drops them and their pending
/// neighbors from the pending set. Rounds repeat until nothing is selected;
/// the union of all selections is returned as a conflict-free `C`. No vertex
/// state changes here.
pub fn run_h3_resolution(
    graph: &Graph,
    priorities: &PriorityVector,
    states: &[VertexState],
    tile_dim: usize,
) -> TiledVector {
    let n = graph.num_vertices();
    let mut in_pending: Vec<bool> = states.iter().map(|&s| s == VertexState::Alive).collect();
    let mut pending: Vec<usize> = (0..n).filter(|&v| in_pending[v]).collect();
    let mut selected = vec![0u8; n];

    loop {
        let picks: Vec<usize> = pending
            .par_iter()
            .copied()
            .filter(|&v| {
                let key = priorities.key(v);
                graph
                    .neighbors(v)
                    .iter()
                    .all(|&u| !in_pending[u] || priorities.key(u) < key)
            })
            .collect();
        if picks.is_empty() {
            break;
        }
        for &v in &picks {
            selected[v] = 1;
            in_pending[v] = false;
            for &u in graph.neighbors(v) {
                in_pending[u] = false;
            }
        }
        pending.retain(|&v| in_pending[v]);
    }
    pack_vector(&selected, tile_dim)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase3Outcome {
    /// Vertices moved to the MIS this iteration, ascending.
    pub selected: Vec<usize>,
    pub removed: usize,
}

/// Applies the three update rules. Each vertex reads only its own `C`, `N_c`
/// and state, so the update is a plain parallel map.
pub fn phase3_update(
    states: &mut [VertexState],
    candidates: &TiledVector,
    neighbor_counts: &[u32],
) -> Result<Phase3Outcome, EngineError> {
    assert_eq!(states.len(), candidates.len());
    assert_eq!(states.len(), neighbor_counts.len());
    if let Some(v) =
        (0..states.len()).find(|&v| candidates.get(v) != 0 && states[v] != VertexState::Alive)
    {
        return Err(EngineError::CandidateNotAlive { vertex: v });
    }

    let transitions: Vec<u8> = states
        .par_iter_mut()
        .enumerate()
        .map(|(v, state)| {
            if *state != VertexState::Alive {
                0
            } else if candidates.get(v) != 0 {
                *state = VertexState::InMis;
                1
            } else if neighbor_counts[v] > 0 {
                *state = VertexState::Removed;
                2
            } else {
                0
            }
        })
        .collect();

    let selected = (0..transitions.len())
        .filter(|&v| transitions[v] == 1)
        .collect();
    let removed = transitions.iter().filter(|&&t| t == 2).count();
    Ok(Phase3Outcome { selected, removed })
}
