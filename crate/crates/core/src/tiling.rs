//! Block-compressed tiled adjacency.
//!
//! The adjacency matrix is cut into `T x T` blocks and only blocks holding at
//! least one edge are stored, each as a dense row-major 0/1 payload. Tiles are
//! sorted by `(block_row, block_col)` and indexed per block row, BSR style.
//! Vertex ids `>= n` are padding and never carry an entry.
//!
//! # Binary dump layout
//!
//! All integers little-endian:
//!
//! ```text
//! magic        4 bytes   b"TMIS"
//! tile_dim     u32
//! n            u64       real vertex count
//! tile_count   u64
//! tile_count records:
//!   block_row  u32
//!   block_col  u32
//!   payload    ceil(T*T / 8) bytes, row-major bits, LSB first
//! ```

use std::io::{self, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;

pub const DEFAULT_TILE_DIM: usize = 16;

const MAGIC: &[u8; 4] = b"TMIS";

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("tile dimension must be at least 1")]
    ZeroTileDim,
    #[error("not a tiled adjacency dump (bad magic)")]
    BadMagic,
    #[error("corrupt tiled adjacency dump: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tile<'a> {
    pub block_row: usize,
    pub block_col: usize,
    /// `T * T` entries, row-major, each 0 or 1.
    pub payload: &'a [u8],
}

impl Tile<'_> {
    pub fn nonzeros(&self) -> usize {
        self.payload.iter().filter(|&&x| x != 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiledAdjacency {
    tile_dim: usize,
    n: usize,
    coords: Vec<(u32, u32)>,
    payloads: Vec<u8>,
    row_ptr: Vec<usize>,
}

#[inline]
pub fn padded_len(n: usize, tile_dim: usize) -> usize {
    n.div_ceil(tile_dim) * tile_dim
}

impl TiledAdjacency {
    pub fn tile_dim(&self) -> usize {
        self.tile_dim
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn padded_len(&self) -> usize {
        padded_len(self.n, self.tile_dim)
    }

    pub fn block_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn tile_count(&self) -> usize {
        self.coords.len()
    }

    pub fn tile(&self, idx: usize) -> Tile<'_> {
        let area = self.tile_dim * self.tile_dim;
        let (br, bc) = self.coords[idx];
        Tile {
            block_row: br as usize,
            block_col: bc as usize,
            payload: &self.payloads[idx * area..(idx + 1) * area],
        }
    }

    pub fn tiles(&self) -> impl Iterator<Item = Tile<'_>> + '_ {
        (0..self.tile_count()).map(move |i| self.tile(i))
    }

    /// Index range of the tiles in block row `br`.
    pub fn row_range(&self, br: usize) -> std::ops::Range<usize> {
        self.row_ptr[br]..self.row_ptr[br + 1]
    }

    /// Looks up the tile at block coordinates `(br, bc)`, if stored.
    pub fn find(&self, br: usize, bc: usize) -> Option<Tile<'_>> {
        let range = self.row_range(br);
        let cols = &self.coords[range.clone()];
        cols.binary_search_by_key(&(bc as u32), |&(_, c)| c)
            .ok()
            .map(|k| self.tile(range.start + k))
    }

    /// True iff the tile set equals its own transpose.
    pub fn is_symmetric(&self) -> bool {
        let t = self.tile_dim;
        self.tiles()
            .all(|tile| match self.find(tile.block_col, tile.block_row) {
                None => false,
                Some(mirror) => (0..t)
                    .all(|i| (0..t).all(|j| tile.payload[i * t + j] == mirror.payload[j * t + i])),
            })
    }

    /// Writes the binary dump described in the module docs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.tile_dim as u32).to_le_bytes())?;
        out.write_all(&(self.n as u64).to_le_bytes())?;
        out.write_all(&(self.tile_count() as u64).to_le_bytes())?;
        let mut packed = vec![0u8; (self.tile_dim * self.tile_dim).div_ceil(8)];
        for tile in self.tiles() {
            out.write_all(&(tile.block_row as u32).to_le_bytes())?;
            out.write_all(&(tile.block_col as u32).to_le_bytes())?;
            packed.fill(0);
            for (k, &bit) in tile.payload.iter().enumerate() {
                if bit != 0 {
                    packed[k / 8] |= 1 << (k % 8);
                }
            }
            out.write_all(&packed)?;
        }
        Ok(())
    }

    /// Reads a binary dump and re-checks every tile invariant.
    pub fn read_binary<R: Read>(mut input: R) -> Result<Self, TilingError> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(TilingError::BadMagic);
        }
        let tile_dim = read_u32(&mut input)? as usize;
        if tile_dim == 0 {
            return Err(TilingError::ZeroTileDim);
        }
        let n = usize::try_from(read_u64(&mut input)?)
            .map_err(|_| TilingError::Corrupt("vertex count overflows usize".into()))?;
        let count = read_u64(&mut input)? as usize;
        let area = tile_dim * tile_dim;
        let block_rows = n.div_ceil(tile_dim);

        let mut coords = Vec::new();
        let mut payloads = Vec::new();
        let mut packed = vec![0u8; area.div_ceil(8)];
        for _ in 0..count {
            let br = read_u32(&mut input)?;
            let bc = read_u32(&mut input)?;
            if br as usize >= block_rows || bc as usize >= block_rows {
                return Err(TilingError::Corrupt(format!(
                    "tile ({br}, {bc}) out of range"
                )));
            }
            if coords.last().is_some_and(|&last| last >= (br, bc)) {
                return Err(TilingError::Corrupt(format!(
                    "tile ({br}, {bc}) out of order"
                )));
            }
            input.read_exact(&mut packed)?;
            let start = payloads.len();
            payloads.extend((0..area).map(|k| (packed[k / 8] >> (k % 8)) & 1));
            let payload = &payloads[start..];
            if payload.iter().all(|&x| x == 0) {
                return Err(TilingError::Corrupt(format!(
                    "tile ({br}, {bc}) is all zero"
                )));
            }
            for (k, &x) in payload.iter().enumerate() {
                let (i, j) = (k / tile_dim, k % tile_dim);
                let (row, col) = (br as usize * tile_dim + i, bc as usize * tile_dim + j);
                if x != 0 && (row >= n || col >= n || row == col) {
                    return Err(TilingError::Corrupt(format!(
                        "tile ({br}, {bc}) has an entry at ({row}, {col})"
                    )));
                }
            }
            coords.push((br, bc));
        }

        let mut row_ptr = vec![0usize; block_rows + 1];
        for &(br, _) in &coords {
            row_ptr[br as usize + 1] += 1;
        }
        for b in 0..block_rows {
            row_ptr[b + 1] += row_ptr[b];
        }
        let tiled = Self {
            tile_dim,
            n,
            coords,
            payloads,
            row_ptr,
        };
        if !tiled.is_symmetric() {
            return Err(TilingError::Corrupt("tile set is not symmetric".into()));
        }
        Ok(tiled)
    }
}

fn read_u32<R: Read>(input: &mut R) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(input: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Builds the tiled adjacency of `graph`, one block row per parallel task.
pub fn tile_graph(graph: &Graph, tile_dim: usize) -> Result<TiledAdjacency, TilingError> {
    if tile_dim == 0 {
        return Err(TilingError::ZeroTileDim);
    }
    let n = graph.num_vertices();
    let t = tile_dim;
    let area = t * t;
    let block_rows = n.div_ceil(t);

    let rows: Vec<(Vec<u32>, Vec<u8>)> = (0..block_rows)
        .into_par_iter()
        .map(|br| {
            let mut entries: Vec<(usize, usize)> = Vec::new();
            for i in 0..t {
                let v = br * t + i;
                if v >= n {
                    break;
                }
                entries.extend(graph.neighbors(v).iter().map(|&u| (u / t, i * t + u % t)));
            }
            entries.sort_unstable();
            let mut cols = Vec::new();
            let mut payload = Vec::new();
            for (bc, offset) in entries {
                if cols.last() != Some(&(bc as u32)) {
                    cols.push(bc as u32);
                    payload.resize(payload.len() + area, 0u8);
                }
                let base = payload.len() - area;
                payload[base + offset] = 1;
            }
            (cols, payload)
        })
        .collect();

    let mut coords = Vec::new();
    let mut payloads = Vec::new();
    let mut row_ptr = Vec::with_capacity(block_rows + 1);
    row_ptr.push(0);
    for (br, (cols, payload)) in rows.into_iter().enumerate() {
        coords.extend(cols.into_iter().map(|bc| (br as u32, bc)));
        payloads.extend_from_slice(&payload);
        row_ptr.push(coords.len());
    }
    Ok(TiledAdjacency {
        tile_dim,
        n,
        coords,
        payloads,
        row_ptr,
    })
}

/// Rebuilds the CSR graph from its tiles.
pub fn tiled_to_graph(tiled: &TiledAdjacency) -> Graph {
    let t = tiled.tile_dim;
    let n = tiled.n;
    let edges = tiled.tiles().flat_map(|tile| {
        tile.payload
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x != 0)
            .map(move |(k, _)| (tile.block_row * t + k / t, tile.block_col * t + k % t))
    });
    Graph::from_edges(n, edges.filter(|&(u, v)| u < n && v < n))
        .expect("tile entries are bounded by n")
}

/// A per-vertex vector padded to a multiple of the tile dimension, with one
/// bit per `T`-length segment recording whether it holds a non-zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiledVector {
    tile_dim: usize,
    n: usize,
    values: Vec<u8>,
    mask: Vec<u64>,
}

impl TiledVector {
    pub fn tile_dim(&self) -> usize {
        self.tile_dim
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn padded_len(&self) -> usize {
        self.values.len()
    }

    /// Padded values; entries past `len()` are zero.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    pub fn get(&self, v: usize) -> u8 {
        self.values[v]
    }

    pub fn num_segments(&self) -> usize {
        self.values.len() / self.tile_dim
    }

    #[inline]
    pub fn segment(&self, s: usize) -> &[u8] {
        &self.values[s * self.tile_dim..(s + 1) * self.tile_dim]
    }

    #[inline]
    pub fn segment_nonzero(&self, s: usize) -> bool {
        self.mask[s / 64] >> (s % 64) & 1 == 1
    }

    pub fn nonzero_segments(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of non-zero entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.values[v] != 0).collect()
    }
}

pub fn pack_vector(values: &[u8], tile_dim: usize) -> TiledVector {
    assert!(tile_dim > 0, "tile dimension must be at least 1");
    let n = values.len();
    let mut padded = Vec::with_capacity(padded_len(n, tile_dim));
    padded.extend_from_slice(values);
    padded.resize(padded_len(n, tile_dim), 0);
    let segments = padded.len() / tile_dim;
    let mut mask = vec![0u64; segments.div_ceil(64)];
    for (s, seg) in padded.chunks_exact(tile_dim).enumerate() {
        if seg.iter().any(|&x| x != 0) {
            mask[s / 64] |= 1 << (s % 64);
        }
    }
    TiledVector {
        tile_dim,
        n,
        values: padded,
        mask,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileStats {
    pub tile_dim: usize,
    pub tile_count: usize,
    pub nonzeros: usize,
    /// `occupancy_histogram[k]` = number of tiles holding exactly `k` ones.
    pub occupancy_histogram: Vec<usize>,
    /// Fraction of the padded block grid that is stored.
    pub density: f64,
    pub tiled_bytes: usize,
    pub csr_bytes: usize,
}

pub fn tile_stats(tiled: &TiledAdjacency) -> TileStats {
    let t = tiled.tile_dim;
    let mut occupancy_histogram = vec![0usize; t * t + 1];
    let mut nonzeros = 0;
    for tile in tiled.tiles() {
        let k = tile.nonzeros();
        occupancy_histogram[k] += 1;
        nonzeros += k;
    }
    let np = tiled.padded_len();
    let density = if np == 0 {
        0.0
    } else {
        (tiled.tile_count() * t * t) as f64 / (np as f64 * np as f64)
    };
    TileStats {
        tile_dim: t,
        tile_count: tiled.tile_count(),
        nonzeros,
        occupancy_histogram,
        density,
        tiled_bytes: tiled_footprint_bytes(tiled.tile_count(), t, tiled.block_rows()),
        csr_bytes: csr_footprint_bytes(tiled.n, nonzeros),
    }
}

/// One byte per payload entry, two `u32` block coordinates per tile and a
/// `u64` block-row index.
pub fn tiled_footprint_bytes(tile_count: usize, tile_dim: usize, block_rows: usize) -> usize {
    tile_count * (tile_dim * tile_dim + 8) + (block_rows + 1) * 8
}

/// `u64` offsets plus `u32` neighbor ids.
pub fn csr_footprint_bytes(n: usize, directed_entries: usize) -> usize {
    (n + 1) * 8 + directed_entries * 4
}
