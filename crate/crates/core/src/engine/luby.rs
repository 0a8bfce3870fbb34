//! Sequential Luby reference on the CSR graph, independent of the tiled path.
//!
//! `Fresh` draws new random priorities for the alive vertices every round.
//! `Permutation` fixes one priority vector for the whole run (degree-aware H2
//! priorities in [`run_luby_reference`]).

use std::time::Instant;

use super::{Algorithm, EngineError, IterationStats, MisResult};
use crate::graph::Graph;
use crate::priorities::{h2_degree_aware, mix64, vertex_hash, PriorityVector, DEFAULT_SCALE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LubyMode {
    Fresh,
    Permutation,
}

pub fn run_luby_reference(
    graph: &Graph,
    seed: u64,
    mode: LubyMode,
) -> Result<MisResult, EngineError> {
    match mode {
        LubyMode::Fresh => run_luby(graph, seed, Algorithm::LubyFresh, |v, round| {
            vertex_hash(v as u64, seed ^ mix64(round as u64 + 1))
        }),
        LubyMode::Permutation => {
            let p = h2_degree_aware(graph, seed, DEFAULT_SCALE_BITS)?;
            run_luby_with_priorities(graph, &p)
        }
    }
}

/// Permutation-mode Luby with caller-supplied priorities.
pub fn run_luby_with_priorities(
    graph: &Graph,
    priorities: &PriorityVector,
) -> Result<MisResult, EngineError> {
    if priorities.len() != graph.num_vertices() {
        return Err(EngineError::PriorityLength {
            expected: graph.num_vertices(),
            found: priorities.len(),
        });
    }
    let values = priorities.values();
    run_luby(graph, priorities.seed(), Algorithm::LubyPerm, |v, _| {
        values[v]
    })
}

fn run_luby<F>(
    graph: &Graph,
    seed: u64,
    algorithm: Algorithm,
    priority: F,
) -> Result<MisResult, EngineError>
where
    F: Fn(usize, usize) -> u64,
{
    let n = graph.num_vertices();
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut in_mis = vec![false; n];
    let mut prio = vec![0u64; n];
    let mut iterations = Vec::new();

    while alive_count > 0 {
        let round = iterations.len();
        if round >= n {
            return Err(EngineError::IterationCap { cap: n });
        }

        let t0 = Instant::now();
        for v in (0..n).filter(|&v| alive[v]) {
            prio[v] = priority(v, round);
        }

        let t1 = Instant::now();
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| {
                alive[v]
                    && graph
                        .neighbors(v)
                        .iter()
                        .all(|&u| !alive[u] || (prio[u], u) < (prio[v], v))
            })
            .collect();

        let t2 = Instant::now();
        let before = alive_count;
        for &v in &candidates {
            in_mis[v] = true;
            alive[v] = false;
            alive_count -= 1;
        }
        for &v in &candidates {
            for &u in graph.neighbors(v) {
                if alive[u] {
                    alive[u] = false;
                    alive_count -= 1;
                }
            }
        }
        let t3 = Instant::now();

        iterations.push(IterationStats {
            iteration: round,
            candidates: candidates.len(),
            removed: before - alive_count - candidates.len(),
            alive_remaining: alive_count,
            tiles_evaluated: 0,
            tiles_skipped: 0,
            phase1: t1 - t0,
            phase2: t2 - t1,
            phase3: t3 - t2,
        });
    }

    Ok(MisResult {
        mis: (0..n).filter(|&v| in_mis[v]).collect(),
        iterations,
        algorithm,
        seed,
    })
}
