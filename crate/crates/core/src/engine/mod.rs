//! The three-phase MIS iteration over the tiled adjacency.
//!
//! Each iteration runs bulk-synchronously:
//!
//! 1. neighbor maxima and the candidate vector `C` (or, for H3, the
//!    conflict-free `C` from pending-set resolution),
//! 2. `N_c = A x C` through [`crate::spmv::tiled_spmv`],
//! 3. the per-vertex state update.
//!
//! Priorities are fixed for the whole run, so with the H1/H2 flow the result
//! is the lexicographically-first MIS of the `(p, id)` order. All phases write
//! disjoint outputs and reduce in a fixed order; results do not depend on the
//! worker count.

mod luby;
mod phases;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use luby::{run_luby_reference, run_luby_with_priorities, LubyMode};
pub use phases::{
    compute_max_np, generate_candidates, phase3_update, run_h3_resolution, Phase3Outcome,
};

use crate::graph::Graph;
use crate::priorities::{h1_random, h2_degree_aware, PriorityError, PriorityVector};
use crate::spmv::{tiled_spmv, SpmvError, SpmvOptions};
use crate::tiling::{tile_graph, TiledAdjacency, TiledVector, TilingError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Spmv(#[from] SpmvError),
    #[error(transparent)]
    Priority(#[from] PriorityError),
    #[error("candidate vertex {vertex} is not alive")]
    CandidateNotAlive { vertex: usize },
    #[error("no convergence after {cap} iterations")]
    IterationCap { cap: usize },
    #[error("priority vector has {found} entries, graph has {expected} vertices")]
    PriorityLength { expected: usize, found: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum VertexState {
    Alive,
    InMis,
    Removed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Random priorities.
    H1,
    /// Degree-aware priorities.
    H2,
    /// Degree-aware priorities with pending-set conflict resolution.
    H3,
}

impl Heuristic {
    pub const ALL: [Heuristic; 3] = [Heuristic::H1, Heuristic::H2, Heuristic::H3];

    pub fn priorities(
        self,
        graph: &Graph,
        seed: u64,
        scale_bits: u32,
    ) -> Result<PriorityVector, PriorityError> {
        match self {
            Heuristic::H1 => Ok(h1_random(graph.num_vertices(), seed)),
            Heuristic::H2 | Heuristic::H3 => h2_degree_aware(graph, seed, scale_bits),
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            Heuristic::H1 => Algorithm::H1,
            Heuristic::H2 => Algorithm::H2,
            Heuristic::H3 => Algorithm::H3,
        }
    }
}

/// Everything the CLI can run: the tiled engine under one of its heuristics,
/// or the CSR Luby reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    H1,
    H2,
    H3,
    LubyFresh,
    LubyPerm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::H1,
        Algorithm::H2,
        Algorithm::H3,
        Algorithm::LubyFresh,
        Algorithm::LubyPerm,
    ];

    pub fn heuristic(self) -> Option<Heuristic> {
        match self {
            Algorithm::H1 => Some(Heuristic::H1),
            Algorithm::H2 => Some(Heuristic::H2),
            Algorithm::H3 => Some(Heuristic::H3),
            Algorithm::LubyFresh | Algorithm::LubyPerm => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::H1 => "h1",
            Algorithm::H2 => "h2",
            Algorithm::H3 => "h3",
            Algorithm::LubyFresh => "luby-fresh",
            Algorithm::LubyPerm => "luby-perm",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                format!("unknown heuristic {s:?} (expected h1, h2, h3, luby-fresh or luby-perm)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationStats {
    pub iteration: usize,
    pub candidates: usize,
    pub removed: usize,
    pub alive_remaining: usize,
    pub tiles_evaluated: usize,
    pub tiles_skipped: usize,
    pub phase1: Duration,
    pub phase2: Duration,
    pub phase3: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisResult {
    /// Selected vertices, ascending.
    pub mis: Vec<usize>,
    pub iterations: Vec<IterationStats>,
    pub algorithm: Algorithm,
    pub seed: u64,
}

impl MisResult {
    pub fn len(&self) -> usize {
        self.mis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mis.is_empty()
    }

    pub fn phase_totals(&self) -> [Duration; 3] {
        self.iterations.iter().fold([Duration::ZERO; 3], |acc, it| {
            [acc[0] + it.phase1, acc[1] + it.phase2, acc[2] + it.phase3]
        })
    }

    pub fn tiles_evaluated(&self) -> usize {
        self.iterations.iter().map(|it| it.tiles_evaluated).sum()
    }

    pub fn tiles_skipped(&self) -> usize {
        self.iterations.iter().map(|it| it.tiles_skipped).sum()
    }
}

/// Snapshot handed to an observer after each iteration's state update.
#[derive(Debug)]
pub struct IterationView<'a> {
    pub iteration: usize,
    pub candidates: &'a TiledVector,
    pub neighbor_counts: &'a [u32],
    pub states: &'a [VertexState],
}

/// A graph prepared for repeated runs: tiles are built once and reused by
/// every iteration of every run.
pub struct TcMis<'g> {
    graph: &'g Graph,
    tiles: TiledAdjacency,
    pool: rayon::ThreadPool,
    spmv: SpmvOptions,
}

impl<'g> TcMis<'g> {
    pub fn new(graph: &'g Graph, tile_dim: usize, workers: usize) -> Result<Self, EngineError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| EngineError::Pool(e.to_string()))?;
        let tiles = pool.install(|| tile_graph(graph, tile_dim))?;
        Ok(Self {
            graph,
            tiles,
            pool,
            spmv: SpmvOptions::default(),
        })
    }

    pub fn with_spmv_options(mut self, spmv: SpmvOptions) -> Self {
        self.spmv = spmv;
        self
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn tiles(&self) -> &TiledAdjacency {
        &self.tiles
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run(
        &self,
        heuristic: Heuristic,
        seed: u64,
        scale_bits: u32,
    ) -> Result<MisResult, EngineError> {
        let priorities = heuristic.priorities(self.graph, seed, scale_bits)?;
        self.run_with_priorities(&priorities, heuristic)
    }

    /// Runs with fixed caller-supplied priorities. `heuristic` selects the
    /// candidate flow: H3 resolves conflicts on a pending set, H1/H2 use the
    /// plain strict-dominance test.
    pub fn run_with_priorities(
        &self,
        priorities: &PriorityVector,
        heuristic: Heuristic,
    ) -> Result<MisResult, EngineError> {
        self.run_observed(priorities, heuristic, |_| {})
    }

    pub fn run_observed<F>(
        &self,
        priorities: &PriorityVector,
        heuristic: Heuristic,
        mut observer: F,
    ) -> Result<MisResult, EngineError>
    where
        F: FnMut(&IterationView<'_>) + Send,
    {
        let graph = self.graph;
        let n = graph.num_vertices();
        if priorities.len() != n {
            return Err(EngineError::PriorityLength {
                expected: n,
                found: priorities.len(),
            });
        }
        let t = self.tiles.tile_dim();

        self.pool.install(|| {
            let mut states = vec![VertexState::Alive; n];
            let mut alive = n;
            let mut mis = Vec::new();
            let mut iterations = Vec::new();

            while alive > 0 {
                let iteration = iterations.len();
                if iteration >= n {
                    return Err(EngineError::IterationCap { cap: n });
                }

                let t0 = Instant::now();
                let candidates = match heuristic {
                    Heuristic::H3 => run_h3_resolution(graph, priorities, &states, t),
                    Heuristic::H1 | Heuristic::H2 => {
                        let max_np = compute_max_np(graph, priorities, &states);
                        generate_candidates(priorities, &max_np, &states, t)
                    }
                };

                let t1 = Instant::now();
                let nc = tiled_spmv(&self.tiles, &candidates, self.spmv)?;

                let t2 = Instant::now();
                let outcome = phase3_update(&mut states, &candidates, &nc.counts)?;
                let t3 = Instant::now();

                alive -= outcome.selected.len() + outcome.removed;
                observer(&IterationView {
                    iteration,
                    candidates: &candidates,
                    neighbor_counts: &nc.counts,
                    states: &states,
                });
                iterations.push(IterationStats {
                    iteration,
                    candidates: outcome.selected.len(),
                    removed: outcome.removed,
                    alive_remaining: alive,
                    tiles_evaluated: nc.tiles_evaluated,
                    tiles_skipped: nc.tiles_skipped,
                    phase1: t1 - t0,
                    phase2: t2 - t1,
                    phase3: t3 - t2,
                });
                mis.extend(outcome.selected);
            }

            mis.sort_unstable();
            Ok(MisResult {
                mis,
                iterations,
                algorithm: heuristic.algorithm(),
                seed: priorities.seed(),
            })
        })
    }
}

/// One-shot convenience: tile `graph` and run a single heuristic.
pub fn run_tc_mis(
    graph: &Graph,
    heuristic: Heuristic,
    seed: u64,
    tile_dim: usize,
    workers: usize,
) -> Result<MisResult, EngineError> {
    TcMis::new(graph, tile_dim, workers)?.run(
        heuristic,
        seed,
        crate::priorities::DEFAULT_SCALE_BITS,
    )
}
