//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 9 needs local copies of amazon0302.mtx and delaunay_n19.mtx; set
//! `TCMIS_LARGE_GRAPH_DIR` to the directory holding them, otherwise it is
//! skipped.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcmis::engine::{run_luby_reference, Algorithm, Heuristic, LubyMode, MisResult, TcMis};
use tcmis::generators::{complete, cycle, gnp, gnp_avg_degree, path, petersen, rmat, star};
use tcmis::io::{read_graph, GraphFormat};
use tcmis::priorities::{PriorityVector, DEFAULT_SCALE_BITS};
use tcmis::spmv::{csr_neighbor_count_oracle, tiled_spmv, SpmvOptions};
use tcmis::tiling::{pack_vector, tile_graph};
use tcmis::validator::{
    brute_force_max_is, check_independence, check_maximality, quality_report, Independence,
    Maximality,
};
use tcmis::Graph;

const SEEDS: u64 = 10;
const WORKERS: usize = 2;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

struct Named {
    name: String,
    graph: Graph,
    synthetic: bool,
}

fn corpus() -> Vec<Named> {
    let mut out = Vec::new();
    let mut push = |name: String, graph: Graph, synthetic: bool| {
        out.push(Named {
            name,
            graph,
            synthetic,
        })
    };
    push("K3".into(), complete(3), false);
    push("C4".into(), cycle(4), false);
    push("C5".into(), cycle(5), false);
    push("P3".into(), path(3), false);
    push("Petersen".into(), petersen(), false);
    push("S64".into(), star(64), false);
    push("empty100".into(), Graph::empty(100), false);
    let sizes = [100, 1000, 10_000];
    let degrees = [2.0, 8.0, 32.0];
    for i in 0..50u64 {
        let n = sizes[(i % 3) as usize];
        let d = degrees[((i / 3) % 3) as usize];
        push(
            format!("gnp(n={n},d={d},s={i})"),
            gnp_avg_degree(n, d, 1000 + i),
            true,
        );
    }
    for i in 0..10u64 {
        push(format!("rmat(14,s={i})"), rmat(14, 8, 2000 + i), true);
    }
    out
}

fn validity_failure(graph: &Graph, result: &MisResult) -> Option<String> {
    match check_independence(graph, &result.mis) {
        Ok(Independence::Independent) => {}
        Ok(Independence::Adjacent(u, v)) => return Some(format!("edge ({u},{v}) inside the set")),
        Err(e) => return Some(e.to_string()),
    }
    match check_maximality(graph, &result.mis) {
        Ok(Maximality::Maximal) => None,
        Ok(Maximality::Addable(v)) => Some(format!("vertex {v} addable")),
        Err(e) => Some(e.to_string()),
    }
}

/// Results of the criterion 1 sweep, reused by criterion 6.
struct Sweep {
    failures: Vec<String>,
    h3_conflicts: Vec<String>,
    runs: usize,
    h3_iterations_checked: usize,
    elapsed: Duration,
    /// `(graph index, seed)` -> size per algorithm.
    sizes: BTreeMap<(usize, u64), BTreeMap<&'static str, usize>>,
}

fn validity_sweep(graphs: &[Named]) -> Sweep {
    let start = Instant::now();
    let mut sweep = Sweep {
        failures: Vec::new(),
        h3_conflicts: Vec::new(),
        runs: 0,
        h3_iterations_checked: 0,
        elapsed: Duration::ZERO,
        sizes: BTreeMap::new(),
    };
    for (gi, named) in graphs.iter().enumerate() {
        let g = &named.graph;
        let engine = TcMis::new(g, 16, WORKERS).expect("engine");
        for seed in 0..SEEDS {
            for algorithm in Algorithm::ALL {
                let result = match algorithm.heuristic() {
                    Some(Heuristic::H3) => {
                        let p = Heuristic::H3
                            .priorities(g, seed, DEFAULT_SCALE_BITS)
                            .unwrap();
                        let mut conflicts = Vec::new();
                        let mut checked = 0;
                        let r = engine
                            .run_observed(&p, Heuristic::H3, |view| {
                                checked += 1;
                                if let Ok(Independence::Adjacent(u, v)) =
                                    check_independence(g, &view.candidates.support())
                                {
                                    conflicts.push(format!(
                                        "{} seed {seed} iteration {}: candidates {u},{v} adjacent",
                                        named.name, view.iteration
                                    ));
                                }
                            })
                            .expect("h3 run");
                        sweep.h3_iterations_checked += checked;
                        sweep.h3_conflicts.extend(conflicts);
                        r
                    }
                    Some(h) => engine.run(h, seed, DEFAULT_SCALE_BITS).expect("engine run"),
                    None if algorithm == Algorithm::LubyFresh => {
                        run_luby_reference(g, seed, LubyMode::Fresh).expect("luby run")
                    }
                    None => run_luby_reference(g, seed, LubyMode::Permutation).expect("luby run"),
                };
                sweep.runs += 1;
                if let Some(why) = validity_failure(g, &result) {
                    sweep
                        .failures
                        .push(format!("{} {algorithm} seed {seed}: {why}", named.name));
                }
                sweep
                    .sizes
                    .entry((gi, seed))
                    .or_default()
                    .insert(algorithm.as_str(), result.len());
            }
        }
    }
    sweep.elapsed = start.elapsed();
    sweep
}

fn criterion_1(sweep: &Sweep, graphs: usize) -> Verdict {
    let limit = Duration::from_secs(300);
    let detail = format!(
        "{} runs over {graphs} graphs x 5 algorithms x {SEEDS} seeds in {:.1}s",
        sweep.runs,
        sweep.elapsed.as_secs_f64()
    );
    if !sweep.failures.is_empty() {
        Verdict::Fail(format!(
            "{} invalid outputs, first: {}",
            sweep.failures.len(),
            sweep.failures[0]
        ))
    } else if sweep.elapsed >= limit {
        Verdict::Fail(format!("{detail}; over the 300s budget"))
    } else {
        Verdict::Pass(detail)
    }
}

fn criterion_6(sweep: &Sweep, graphs: &[Named]) -> Verdict {
    if let Some(first) = sweep.h3_conflicts.first() {
        return Verdict::Fail(format!(
            "{} conflicting H3 iterations, first: {first}",
            sweep.h3_conflicts.len()
        ));
    }
    let mut totals: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (&(gi, _), sizes) in &sweep.sizes {
        if !graphs[gi].synthetic {
            continue;
        }
        let reference = sizes["luby-perm"] as f64;
        for h in ["h1", "h2", "h3"] {
            let dev = 100.0 * (reference - sizes[h] as f64) / reference;
            let e = totals.entry(h).or_default();
            e.0 += dev;
            e.1 += 1;
        }
    }
    let mean = |h: &str| totals[h].0 / totals[h].1 as f64;
    let (d1, d2, d3) = (mean("h1"), mean("h2"), mean("h3"));
    let detail = format!(
        "{} H3 iterations conflict-free; mean deviation h1={d1:.3}% h2={d2:.3}% h3={d3:.3}% over {} synthetic runs",
        sweep.h3_iterations_checked, totals["h1"].1
    );
    if d3 <= d2 && d2 <= d1 && d3 <= 2.0 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

/// 200 random (graph, candidate vector) pairs shared by criteria 2 and 3.
fn spmv_pairs() -> Vec<(Graph, Vec<u8>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let tile_dims = [4, 8, 16, 32];
    (0..200)
        .map(|i| {
            let n = if i % 10 == 0 {
                10_000
            } else {
                rng.random_range(1..=3000)
            };
            let avg = rng.random_range(0.0..24.0);
            let g = gnp_avg_degree(n, avg, i as u64);
            let density = [0.0005, 0.01, 0.1, 0.5, 1.0][i % 5];
            let c: Vec<u8> = (0..n).map(|_| rng.random_bool(density) as u8).collect();
            (g, c, tile_dims[i % 4])
        })
        .collect()
}

fn criterion_2_and_3(pairs: &[(Graph, Vec<u8>, usize)]) -> (Verdict, Verdict) {
    let mut mismatches = Vec::new();
    let mut skip_mismatches = Vec::new();
    let mut zero_mismatches = Vec::new();
    let mut skipped_total = 0;
    for (i, (g, c, t)) in pairs.iter().enumerate() {
        let tiles = tile_graph(g, *t).unwrap();
        let vector = pack_vector(c, *t);
        let oracle = csr_neighbor_count_oracle(g, c);
        let skipping = tiled_spmv(
            &tiles,
            &vector,
            SpmvOptions {
                skip_empty_segments: true,
            },
        )
        .unwrap();
        let full = tiled_spmv(
            &tiles,
            &vector,
            SpmvOptions {
                skip_empty_segments: false,
            },
        )
        .unwrap();
        if skipping.counts != oracle {
            mismatches.push(format!("pair {i} (n={}, T={t})", g.num_vertices()));
        }
        if full.counts != skipping.counts
            || full.tiles_skipped != 0
            || full.tiles_evaluated != tiles.tile_count()
        {
            skip_mismatches.push(format!("pair {i}"));
        }
        skipped_total += skipping.tiles_skipped;
        let zeros = pack_vector(&vec![0; g.num_vertices()], *t);
        let out = tiled_spmv(&tiles, &zeros, SpmvOptions::default()).unwrap();
        if out.tiles_skipped != tiles.tile_count()
            || out.tiles_evaluated != 0
            || out.counts.iter().any(|&x| x != 0)
        {
            zero_mismatches.push(format!("pair {i}"));
        }
    }
    let c2 = if mismatches.is_empty() {
        Verdict::Pass(format!(
            "{} pairs, T in {{4,8,16,32}}, exact match with CSR oracle",
            pairs.len()
        ))
    } else {
        Verdict::Fail(format!(
            "{} mismatches, first: {}",
            mismatches.len(),
            mismatches[0]
        ))
    };
    let c3 = if skip_mismatches.is_empty() && zero_mismatches.is_empty() {
        Verdict::Pass(format!(
            "skipping on/off identical on {} pairs ({skipped_total} tiles skipped); all-zero C skips every tile",
            pairs.len()
        ))
    } else {
        Verdict::Fail(format!(
            "{} on/off mismatches, {} all-zero mismatches",
            skip_mismatches.len(),
            zero_mismatches.len()
        ))
    };
    (c2, c3)
}

fn criterion_4() -> Verdict {
    let mut failures = Vec::new();
    for i in 0..20u64 {
        let g = if i % 4 == 3 {
            rmat(12, 8, i)
        } else {
            gnp_avg_degree(2000 + 500 * i as usize, 8.0, i)
        };
        let h = Heuristic::ALL[(i % 3) as usize];
        let seed = 100 + i;
        let mut reference: Option<MisResult> = None;
        for workers in [1, 2, 8] {
            let engine = TcMis::new(&g, 16, workers).unwrap();
            for _ in 0..3 {
                let r = engine.run(h, seed, DEFAULT_SCALE_BITS).unwrap();
                match &reference {
                    None => reference = Some(r),
                    Some(first) => {
                        if first.mis != r.mis {
                            failures
                                .push(format!("triple {i} ({h:?}, seed {seed}) workers={workers}"));
                        }
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        Verdict::Pass("20 triples identical across workers {1,2,8} x 3 runs".into())
    } else {
        Verdict::Fail(format!(
            "{} differing runs, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Sequential greedy: visit vertices by descending `(p, id)` and take each one
/// that has no taken neighbor.
fn greedy_oracle(g: &Graph, p: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by(|&a, &b| (p[b], b).cmp(&(p[a], a)));
    let mut taken = vec![false; g.num_vertices()];
    for v in order {
        if !g.neighbors(v).iter().any(|&u| taken[u]) {
            taken[v] = true;
        }
    }
    (0..g.num_vertices()).filter(|&v| taken[v]).collect()
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut failures = Vec::new();
    for i in 0..50u64 {
        let n = rng.random_range(1..=10_000);
        let g = gnp_avg_degree(n, rng.random_range(0.5..20.0), 500 + i);
        // Narrow ranges force many ties, exercising the id tie-break.
        let range = [4u64, 1 << 10, u64::MAX][(i % 3) as usize];
        let values: Vec<u64> = (0..n).map(|_| rng.random_range(0..range)).collect();
        let p = PriorityVector::from_values(values.clone(), i);
        let expected = greedy_oracle(&g, &values);
        let engine = TcMis::new(&g, [8, 16, 32][(i % 3) as usize], WORKERS).unwrap();
        for h in [Heuristic::H1, Heuristic::H2] {
            if engine.run_with_priorities(&p, h).unwrap().mis != expected {
                failures.push(format!("graph {i} (n={n}) {h:?}"));
            }
        }
    }
    if failures.is_empty() {
        Verdict::Pass("50 graphs, n <= 1e4: engine set equals greedy-by-(p,id) oracle".into())
    } else {
        Verdict::Fail(format!(
            "{} mismatches, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn criterion_7() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [1000usize, 10_000] {
        let mut total = 0usize;
        for seed in 0..100u64 {
            let g = gnp_avg_degree(n, 8.0, 7000 + seed);
            total += run_luby_reference(&g, seed, LubyMode::Fresh)
                .unwrap()
                .iterations
                .len();
        }
        let mean = total as f64 / 100.0;
        let bound = 4.0 * (n as f64).log2();
        ok &= mean <= bound;
        parts.push(format!("n={n}: mean {mean:.2} rounds (bound {bound:.1})"));
    }
    let detail = parts.join("; ");
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut failures = Vec::new();
    let mut runs = 0;
    for i in 0..100u64 {
        let n = rng.random_range(1..=20);
        let g = gnp(n, rng.random_range(0.0..0.9), 800 + i);
        let best = brute_force_max_is(&g).unwrap();
        let engine = TcMis::new(&g, 4, 1).unwrap();
        for h in Heuristic::ALL {
            let r = engine.run(h, i, DEFAULT_SCALE_BITS).unwrap();
            runs += 1;
            let independent = check_independence(&g, &r.mis)
                .map(Independence::holds)
                .unwrap_or(false);
            let maximal = independent
                && check_maximality(&g, &r.mis)
                    .map(Maximality::holds)
                    .unwrap_or(false);
            if !(independent && maximal && r.len() <= best && !r.is_empty()) {
                failures.push(format!(
                    "graph {i} (n={n}) {h:?}: |MIS|={} max={best}",
                    r.len()
                ));
            }
        }
    }
    if failures.is_empty() {
        Verdict::Pass(format!("{runs} runs on 100 graphs with n <= 20: 1 <= |MIS| <= maximum, independent and maximal"))
    } else {
        Verdict::Fail(format!(
            "{} violations, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn criterion_9() -> Verdict {
    let Some(dir) = std::env::var_os("TCMIS_LARGE_GRAPH_DIR").map(PathBuf::from) else {
        return Verdict::Skip("TCMIS_LARGE_GRAPH_DIR not set".into());
    };
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["amazon0302", "delaunay_n19"] {
        let path = dir.join(format!("{name}.mtx"));
        if !path.exists() {
            return Verdict::Skip(format!("{} not found", path.display()));
        }
        let g = match read_graph(&path, GraphFormat::MatrixMarket) {
            Ok(g) => g,
            Err(e) => return Verdict::Fail(format!("{}: {e}", path.display())),
        };
        let engine = TcMis::new(&g, 16, WORKERS).unwrap();
        let h3 = engine.run(Heuristic::H3, 1, DEFAULT_SCALE_BITS).unwrap();
        let reference = run_luby_reference(&g, 1, LubyMode::Permutation).unwrap();
        let valid =
            validity_failure(&g, &h3).is_none() && validity_failure(&g, &reference).is_none();
        let dev = quality_report(&g, &h3.mis, &reference.mis)
            .unwrap()
            .deviation_pct;
        ok &= valid && dev <= 1.0;
        parts.push(format!("{name}: valid={valid} h3 deviation {dev:.3}%"));
    }
    let detail = parts.join("; ");
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

/// Hardware speedups and absolute phase shares are out of scope. What is
/// checked is that every run reports the per-phase structure: three phase
/// timers and a tile evaluated/skipped split covering every tile on every
/// iteration.
fn criterion_10() -> Verdict {
    let g = gnp_avg_degree(20_000, 8.0, 10);
    let engine = TcMis::new(&g, 16, WORKERS).unwrap();
    let r = engine.run(Heuristic::H1, 1, DEFAULT_SCALE_BITS).unwrap();
    let tiles = engine.tiles().tile_count();
    let covered = r
        .iterations
        .iter()
        .all(|it| it.tiles_evaluated + it.tiles_skipped == tiles);
    let [p1, p2, p3] = r.phase_totals();
    let total = (p1 + p2 + p3).as_secs_f64();
    let share = |d: Duration| 100.0 * d.as_secs_f64() / total;
    let detail = format!(
        "GPU speedups and absolute phase shares not reproduced (hardware-specific); CPU structure on G(2e4, d=8) h1: \
         {} iterations, phase shares {:.1}%/{:.1}%/{:.1}%, {} tiles skipped of {}",
        r.iterations.len(),
        share(p1),
        share(p2),
        share(p3),
        r.tiles_skipped(),
        tiles * r.iterations.len()
    );
    if covered && total > 0.0 && !r.iterations.is_empty() {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn main() {
    // libtest passes flags such as --nocapture or a name filter; none apply.
    let mut failed = 0;
    let mut report = |id: u32, title: &str, verdict: Verdict| {
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("criterion {id:>2} [{tag}] {title}: {detail}");
    };

    let graphs = corpus();
    let sweep = validity_sweep(&graphs);
    report(1, "validity suite", criterion_1(&sweep, graphs.len()));
    let pairs = spmv_pairs();
    let (c2, c3) = criterion_2_and_3(&pairs);
    drop(pairs);
    report(2, "tiled SpMV equals CSR oracle", c2);
    report(3, "tile-skip soundness", c3);
    report(4, "determinism across workers", criterion_4());
    report(
        5,
        "fixed-priority engine equals greedy oracle",
        criterion_5(),
    );
    report(
        6,
        "H3 conflict-freedom and quality ordering",
        criterion_6(&sweep, &graphs),
    );
    report(7, "fresh-priority iteration bound", criterion_7());
    report(8, "brute-force cross-check", criterion_8());
    report(9, "large-graph smoke test", criterion_9());
    report(
        10,
        "hardware-dependent results out of scope",
        criterion_10(),
    );

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed or skipped");
}
