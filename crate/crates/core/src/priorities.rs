//! Vertex priorities and the strict order used for candidate selection.
//!
//! Priorities are unsigned integers fixed once per run. Comparisons always use
//! the key `(p[v], v)`, so equal priorities are broken by vertex id and the
//! order over vertices is total.

use thiserror::Error;

use crate::graph::{degree_stats, Graph};

pub const DEFAULT_SCALE_BITS: u32 = 20;
pub const SCALE_BITS_RANGE: std::ops::RangeInclusive<u32> = 8..=30;

/// Lower bound on the degree-aware denominator when the average degree is
/// below one.
pub const DENOMINATOR_FLOOR: f64 = 1.0 / 1024.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PriorityError {
    #[error("scale bits {0} outside 8..=30")]
    ScaleBitsOutOfRange(u32),
}

/// Totally ordered selection key: priority first, vertex id second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PriorityKey {
    pub priority: u64,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityVector {
    values: Vec<u64>,
    seed: u64,
}

impl PriorityVector {
    pub fn from_values(values: Vec<u64>, seed: u64) -> Self {
        Self { values, seed }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn key(&self, v: usize) -> PriorityKey {
        PriorityKey {
            priority: self.values[v],
            vertex: v,
        }
    }

    /// Is `v` ranked above `u`?
    #[inline]
    pub fn outranks(&self, v: usize, u: usize) -> bool {
        self.key(v) > self.key(u)
    }
}

/// `(p[v], v) > (p[u], u)`.
pub fn priority_gt(p: &PriorityVector, v: usize, u: usize) -> bool {
    p.outranks(v, u)
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seeded per-vertex hash: `mix64(v ^ mix64(seed + golden))`.
///
/// For a fixed seed this is a bijection on `u64`, so distinct vertices never
/// collide in the full 64-bit output.
#[inline]
pub fn vertex_hash(v: u64, seed: u64) -> u64 {
    mix64(v ^ mix64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// Uniform `[0, 1)` draw derived from [`vertex_hash`], 53 bits of precision.
#[inline]
pub fn unit_interval(v: u64, seed: u64) -> f64 {
    (vertex_hash(v, seed) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// H1: purely random priorities, `p[v] = vertex_hash(v, seed)`.
pub fn h1_random(n: usize, seed: u64) -> PriorityVector {
    PriorityVector {
        values: (0..n as u64).map(|v| vertex_hash(v, seed)).collect(),
        seed,
    }
}

/// Degree-aware priority of a single vertex, before the vertex-id tie-break:
/// `floor(avg / (avg + deg - eps) * 2^scale_bits)`.
pub fn degree_aware_value(avg_degree: f64, degree: usize, epsilon: f64, scale_bits: u32) -> u64 {
    let denom = (avg_degree + degree as f64 - epsilon).max(DENOMINATOR_FLOOR);
    (avg_degree / denom * (1u64 << scale_bits) as f64).floor() as u64
}

/// H2: degree-aware priorities that favour low-degree vertices. The
/// perturbation `eps(v)` is `unit_interval(v, seed)`.
pub fn h2_degree_aware(
    graph: &Graph,
    seed: u64,
    scale_bits: u32,
) -> Result<PriorityVector, PriorityError> {
    if !SCALE_BITS_RANGE.contains(&scale_bits) {
        return Err(PriorityError::ScaleBitsOutOfRange(scale_bits));
    }
    let avg = degree_stats(graph).avg_degree_f64();
    let values = (0..graph.num_vertices())
        .map(|v| {
            degree_aware_value(
                avg,
                graph.degree(v),
                unit_interval(v as u64, seed),
                scale_bits,
            )
        })
        .collect();
    Ok(PriorityVector { values, seed })
}
