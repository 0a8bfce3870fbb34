//! Neighbor counting as a blocked sparse matrix-vector product.
//!
//! `N_c = A x C` is evaluated tile by tile. Each stored tile is multiplied
//! with the matching `T`-length segment of the candidate vector in exact
//! integer arithmetic; a tile contributes at most `T` to any output entry.
//! Tiles whose candidate segment is all zero are skipped without touching
//! their payload.
//!
//! Work is split by block row. Each block row reduces its tiles into a private
//! `T`-length accumulator in tile order and writes it out once, so the result
//! does not depend on how many threads the surrounding rayon pool has.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::tiling::{TiledAdjacency, TiledVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpmvError {
    #[error(
        "dimension mismatch: matrix has T={matrix_tile_dim}, n={matrix_n}; \
         vector has T={vector_tile_dim}, n={vector_n}"
    )]
    DimensionMismatch {
        matrix_tile_dim: usize,
        matrix_n: usize,
        vector_tile_dim: usize,
        vector_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpmvOptions {
    pub skip_empty_segments: bool,
}

impl Default for SpmvOptions {
    fn default() -> Self {
        Self {
            skip_empty_segments: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpmvOutput {
    /// Candidate-neighbor count per real vertex.
    pub counts: Vec<u32>,
    pub tiles_evaluated: usize,
    pub tiles_skipped: usize,
}

/// Multiplies one `T x T` 0/1 tile by a `T`-length segment.
///
/// # Panics
///
/// If `payload` is not `T * T` long or `segment` is not `T` long.
pub fn tile_mma(tile_dim: usize, payload: &[u8], segment: &[u8]) -> Vec<u32> {
    let mut out = vec![0u32; tile_dim];
    tile_mma_accumulate(tile_dim, payload, segment, &mut out);
    out
}

#[inline]
fn tile_mma_accumulate(tile_dim: usize, payload: &[u8], segment: &[u8], acc: &mut [u32]) {
    assert_eq!(payload.len(), tile_dim * tile_dim);
    assert_eq!(segment.len(), tile_dim);
    assert_eq!(acc.len(), tile_dim);
    for (row, out) in payload.chunks_exact(tile_dim).zip(acc.iter_mut()) {
        let dot: u32 = row
            .iter()
            .zip(segment)
            .map(|(&a, &c)| a as u32 * c as u32)
            .sum();
        *out += dot;
    }
}

pub fn tiled_spmv(
    matrix: &TiledAdjacency,
    candidates: &TiledVector,
    options: SpmvOptions,
) -> Result<SpmvOutput, SpmvError> {
    let t = matrix.tile_dim();
    if candidates.tile_dim() != t || candidates.len() != matrix.num_vertices() {
        return Err(SpmvError::DimensionMismatch {
            matrix_tile_dim: t,
            matrix_n: matrix.num_vertices(),
            vector_tile_dim: candidates.tile_dim(),
            vector_n: candidates.len(),
        });
    }

    let mut padded = vec![0u32; matrix.padded_len()];
    let (evaluated, skipped) = padded
        .par_chunks_mut(t)
        .enumerate()
        .map(|(br, acc)| {
            let mut evaluated = 0usize;
            let mut skipped = 0usize;
            for idx in matrix.row_range(br) {
                let tile = matrix.tile(idx);
                if options.skip_empty_segments && !candidates.segment_nonzero(tile.block_col) {
                    skipped += 1;
                    continue;
                }
                tile_mma_accumulate(t, tile.payload, candidates.segment(tile.block_col), acc);
                evaluated += 1;
            }
            (evaluated, skipped)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    padded.truncate(matrix.num_vertices());
    Ok(SpmvOutput {
        counts: padded,
        tiles_evaluated: evaluated,
        tiles_skipped: skipped,
    })
}

/// Direct neighbor scan over the CSR graph.
pub fn csr_neighbor_count_oracle(graph: &Graph, candidates: &[u8]) -> Vec<u32> {
    assert_eq!(candidates.len(), graph.num_vertices());
    (0..graph.num_vertices())
        .map(|v| {
            graph
                .neighbors(v)
                .iter()
                .filter(|&&u| candidates[u] != 0)
                .count() as u32
        })
        .collect()
}
