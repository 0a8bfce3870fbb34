//! Small named graphs and seeded random graph models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// Center 0 joined to `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes)).unwrap()
}

/// Erdős–Rényi `G(n, p)`, sampled with geometric skips so sparse graphs cost
/// `O(n + m)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if n >= 2 && p > 0.0 {
        if p >= 1.0 {
            return complete(n);
        }
        let log_q = (1.0 - p).ln();
        // Walk the strictly lower triangle (v, w), w < v, row by row.
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// `G(n, p)` with `p` chosen for the requested expected average degree.
pub fn gnp_avg_degree(n: usize, avg_degree: f64, seed: u64) -> Graph {
    let p = if n > 1 {
        (avg_degree / (n - 1) as f64).min(1.0)
    } else {
        0.0
    };
    gnp(n, p, seed)
}

/// Recursive-matrix generator on `2^scale` vertices with
/// `edge_factor * 2^scale` sampled edges and Graph500 quadrant weights.
pub fn rmat(scale: u32, edge_factor: usize, seed: u64) -> Graph {
    rmat_with(scale, edge_factor, [0.57, 0.19, 0.19], seed)
}

pub fn rmat_with(scale: u32, edge_factor: usize, abc: [f64; 3], seed: u64) -> Graph {
    let n = 1usize << scale;
    let [a, b, c] = abc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..edge_factor * n)
        .map(|_| {
            let (mut u, mut v) = (0usize, 0usize);
            for bit in (0..scale).rev() {
                let r: f64 = rng.random();
                let (du, dv) = if r < a {
                    (0, 0)
                } else if r < a + b {
                    (0, 1)
                } else if r < a + b + c {
                    (1, 0)
                } else {
                    (1, 1)
                };
                u |= du << bit;
                v |= dv << bit;
            }
            (u, v)
        })
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;

    #[test]
    fn named_graphs() {
        assert_eq!(path(3).num_edges(), 2);
        assert_eq!(cycle(5).num_edges(), 5);
        assert_eq!(complete(4).num_edges(), 6);
        assert_eq!(star(64).degree(0), 64);
        let p = petersen();
        assert_eq!(p.num_edges(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn gnp_density_and_determinism() {
        let g = gnp(2000, 0.004, 1);
        assert!(validate_graph(&g).is_valid());
        let expected = 0.004 * 2000.0 * 1999.0 / 2.0;
        let m = g.num_edges() as f64;
        assert!(
            (m - expected).abs() < 5.0 * expected.sqrt(),
            "m = {m}, expected ~{expected}"
        );
        assert_eq!(g, gnp(2000, 0.004, 1));
        assert_ne!(g, gnp(2000, 0.004, 2));
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gnp(10, 0.0, 0).num_edges(), 0);
        assert_eq!(gnp(10, 1.0, 0).num_edges(), 45);
        assert_eq!(gnp(1, 0.5, 0).num_edges(), 0);
    }

    #[test]
    fn rmat_is_skewed() {
        let g = rmat(10, 8, 3);
        assert!(validate_graph(&g).is_valid());
        let max = (0..g.num_vertices()).map(|v| g.degree(v)).max().unwrap();
        let avg = 2.0 * g.num_edges() as f64 / g.num_vertices() as f64;
        assert!(max as f64 > 5.0 * avg);
    }
}
