use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use odd_ramsey::host::VertexSet;
use odd_ramsey::tiles::graph::{enumerate_h1_tiles, h1_degree, h1_degree_formula, sample_h1_tile};
use odd_ramsey::tiles::hyper::{enumerate_hyper_tiles, hyper_degree, hyper_degree_formula, sample_hyper_tile};
use odd_ramsey::tiles::{pair_codegree_max, GraphTileConfig, HyperTileConfig, Tile, TileSystem, TileVertex, VertexKind};
use odd_ramsey::{HostInstance, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Key = (u32, BTreeSet<TileVertex>);

fn vs(v: &[Vertex]) -> VertexSet {
    let mut s: VertexSet = v.iter().copied().collect();
    s.sort_unstable();
    s
}

fn key(tile: &Tile) -> Key {
    (tile.color, tile.vertices.iter().cloned().collect())
}

/// Graph tiles straight from the definition: colored copies of V(S), the
/// edges of S, and all same-side pairs.
fn oracle_graph_tiles(n: usize, t: usize, n1: u32) -> HashSet<Key> {
    let host = HostInstance::bipartite(n, t).unwrap();
    let mut out = HashSet::new();
    for color in 0..n1 {
        for xs in (0..n).combinations(t + 1) {
            for ys in (0..n).combinations(t + 1) {
                for m in (0..=t).permutations(t + 1) {
                    let x: Vec<Vertex> = xs.iter().map(|&i| host.vertex(0, i)).collect();
                    let y: Vec<Vertex> = ys.iter().map(|&i| host.vertex(1, i)).collect();
                    let mut set = BTreeSet::new();
                    for &v in x.iter().chain(&y) {
                        set.insert(TileVertex::Colored { set: vs(&[v]), color });
                    }
                    for a in 0..=t {
                        for b in 0..=t {
                            if m[a] != b {
                                set.insert(TileVertex::Slot(vs(&[x[a], y[b]])));
                            }
                        }
                    }
                    for side in [&x, &y] {
                        for p in side.iter().combinations(2) {
                            set.insert(TileVertex::Slot(vs(&[*p[0], *p[1]])));
                        }
                    }
                    out.insert((color, set));
                }
            }
        }
    }
    out
}

/// Hypergraph tiles from the A/B definition: k-subsets of V(S) whose labels
/// are distinct and which contain a (k-1)-transversal, and colored
/// label-distinct (k-1)-transversals.
fn oracle_hyper_tiles(n: usize, k: usize, n1: u32) -> HashSet<Key> {
    let host = HostInstance::hypergraph(n, k).unwrap();
    let mut out = HashSet::new();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k + 1).collect();
    let perms: Vec<Vec<usize>> = (0..=k).permutations(k + 1).collect();
    for color in 0..n1 {
        for choice in (0..k).map(|_| 0..subsets.len()).multi_cartesian_product() {
            for labeling in (1..k).map(|_| 0..perms.len()).multi_cartesian_product() {
                // label of vertex, per part
                let mut label: HashMap<Vertex, usize> = HashMap::new();
                let mut all = Vec::new();
                for j in 0..k {
                    let sub = &subsets[choice[j]];
                    for (pos, &loc) in sub.iter().enumerate() {
                        let l = if j == 0 { pos } else { perms[labeling[j - 1]][pos] };
                        let v = host.vertex(j, loc);
                        label.insert(v, l);
                        all.push(v);
                    }
                }
                let distinct = |set: &[Vertex]| set.iter().map(|v| label[v]).all_unique();
                let one_per_part = |set: &[Vertex]| set.iter().map(|&v| host.part_of(v)).all_unique();
                let mut set = BTreeSet::new();
                for a in all.iter().copied().combinations(k) {
                    let extends = (0..k).any(|skip| {
                        let rest: Vec<Vertex> = a.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                        one_per_part(&rest)
                    });
                    if extends && distinct(&a) {
                        set.insert(TileVertex::Slot(vs(&a)));
                    }
                }
                for b in all.iter().copied().combinations(k - 1) {
                    if one_per_part(&b) && distinct(&b) {
                        set.insert(TileVertex::Colored { set: vs(&b), color });
                    }
                }
                out.insert((color, set));
            }
        }
    }
    out
}

#[test]
fn graph_enumeration_matches_definition() {
    for (n, t) in [(3, 2), (4, 2), (5, 3)] {
        let cfg = GraphTileConfig::new(n, t).unwrap();
        let tiles = enumerate_h1_tiles(&cfg).unwrap();
        let got: HashSet<Key> = tiles.iter().map(key).collect();
        assert_eq!(got.len(), tiles.len(), "duplicates at n={n} t={t}");
        assert_eq!(got, oracle_graph_tiles(n, t, cfg.palette.n1), "n={n} t={t}");
        assert!(tiles.iter().all(|t0| t0.uniformity() == 2 * (t + 1) * (t + 1)));
    }
}

#[test]
fn hyper_enumeration_matches_definition() {
    for (n, k) in [(3, 2), (4, 2), (4, 3)] {
        let cfg = HyperTileConfig::new(n, k).unwrap();
        let tiles = enumerate_hyper_tiles(&cfg).unwrap();
        let got: HashSet<Key> = tiles.iter().map(key).collect();
        assert_eq!(got.len(), tiles.len());
        assert_eq!(got, oracle_hyper_tiles(n, k, cfg.palette.n1), "n={n} k={k}");
    }
}

#[test]
fn hyper_k2_is_the_graph_t2_system() {
    for n in 3..=4 {
        let g = enumerate_h1_tiles(&GraphTileConfig::new(n, 2).unwrap()).unwrap();
        let h = enumerate_hyper_tiles(&HyperTileConfig::new(n, 2).unwrap()).unwrap();
        assert_eq!(g, h, "n={n}");
    }
}

fn degree_by_oracle(tiles: &HashSet<Key>, v: &TileVertex) -> u64 {
    tiles.iter().filter(|(_, set)| set.contains(v)).count() as u64
}

#[test]
fn graph_degrees_agree_with_closed_forms() {
    for (n, t) in [(4, 2), (5, 2), (6, 2), (5, 3), (6, 3)] {
        let cfg = GraphTileConfig::new(n, t).unwrap();
        let host = cfg.host();
        let x = host.vertex(0, 1);
        let y = host.vertex(1, n - 1);
        let cases = [
            (VertexKind::MainColored, TileVertex::Colored { set: vs(&[y]), color: 0 }),
            (VertexKind::EdgeSlot, TileVertex::Slot(vs(&[x, y]))),
            (VertexKind::DoubledSet, TileVertex::Slot(vs(&[x, host.vertex(0, 0)]))),
            (VertexKind::DoubledSet, TileVertex::Slot(vs(&[y, host.vertex(1, 0)]))),
        ];
        for (kind, v) in cases {
            assert_eq!(h1_degree(&cfg, &v).unwrap() as u128, h1_degree_formula(kind, &cfg), "n={n} t={t} {v}");
        }
    }
    // independent oracle on a small instance
    let cfg = GraphTileConfig::new(4, 2).unwrap();
    let oracle = oracle_graph_tiles(4, 2, cfg.palette.n1);
    let v = TileVertex::Slot(vs(&[0, 5]));
    assert_eq!(h1_degree(&cfg, &v).unwrap(), degree_by_oracle(&oracle, &v));
}

#[test]
fn hyper_degrees_cross_check_graph_case() {
    let h = HyperTileConfig::new(4, 2).unwrap();
    let g = GraphTileConfig::new(4, 2).unwrap();
    assert_eq!(h.palette.n1, g.palette.n1);
    let edge = TileVertex::Slot(vs(&[1, 6]));
    assert_eq!(hyper_degree(&h, &edge).unwrap() as u128, h1_degree_formula(VertexKind::EdgeSlot, &g));
    let b = TileVertex::Colored { set: vs(&[2]), color: 1 };
    assert_eq!(hyper_degree(&h, &b).unwrap() as u128, h1_degree_formula(VertexKind::MainColored, &g));
    for kind in [VertexKind::EdgeSlot, VertexKind::DoubledSet, VertexKind::MainColored] {
        assert_eq!(hyper_degree_formula(kind, &h), h1_degree_formula(kind, &g));
    }
    let oracle = oracle_hyper_tiles(4, 3, 2);
    let k3 = HyperTileConfig::new(4, 3).unwrap();
    let doubled = TileVertex::Slot(vs(&[4, 5, 8]));
    assert_eq!(hyper_degree(&k3, &doubled).unwrap(), degree_by_oracle(&oracle, &doubled));
}

#[test]
fn sampling_is_uniform() {
    let cfg = GraphTileConfig::new(6, 2).unwrap();
    let cells = cfg.h1_tile_count() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let samples = 10_000;
    let mut counts: HashMap<(u32, Vec<usize>), u64> = HashMap::new();
    for _ in 0..samples {
        let t = sample_h1_tile(&cfg, &mut rng).unwrap();
        *counts.entry((t.color, t.colored_edges)).or_insert(0) += 1;
    }
    let expected = samples as f64 / cells;
    let observed: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let empty = cells - counts.len() as f64;
    let chi2 = observed + empty * expected;
    let dof = cells - 1.0;
    assert!((chi2 - dof).abs() < 5.0 * (2.0 * dof).sqrt(), "chi2={chi2} dof={dof}");
}

#[test]
fn sampled_hyper_tiles_are_well_formed() {
    let cfg = HyperTileConfig::new(6, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let t = sample_hyper_tile(&cfg, &mut rng).unwrap();
        assert_eq!(t.uniformity(), 132);
        assert_eq!(t.colored_edges.len(), 24);
        assert!(t.vertices.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn no_tile_contains_a_target() {
    for t in 2..=4 {
        let cfg = GraphTileConfig::new(t + 1, t).unwrap();
        let host = cfg.host();
        let copies = host.enumerate_target_copies(t).unwrap();
        for tile in enumerate_h1_tiles(&cfg).unwrap() {
            assert!(!copies.iter().any(|c| c.edges.iter().all(|&e| tile.colors_edge(e))), "t={t}");
        }
    }
    for k in 2..=3 {
        let cfg = HyperTileConfig::new(k + 1, k).unwrap();
        let host = cfg.host();
        let copies = host.enumerate_target_copies(2).unwrap();
        for tile in enumerate_hyper_tiles(&cfg).unwrap() {
            assert!(!copies.iter().any(|c| c.edges.iter().all(|&e| tile.colors_edge(e))), "k={k}");
        }
    }
}

#[test]
fn pair_codegree_brute_force() {
    for n in 3..=4 {
        let cfg = GraphTileConfig::new(n, 2).unwrap();
        let tiles = enumerate_h1_tiles(&cfg).unwrap();
        let (max, pair) = pair_codegree_max(&tiles);
        let vertices: BTreeSet<&TileVertex> = tiles.iter().flat_map(|t| &t.vertices).collect();
        let vertices: Vec<_> = vertices.into_iter().collect();
        let mut best = 0;
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                let c = tiles.iter().filter(|t| t.contains(a) && t.contains(b)).count() as u64;
                best = best.max(c);
            }
        }
        assert_eq!(max, best, "n={n}");
        let (a, b) = pair.unwrap();
        assert_eq!(tiles.iter().filter(|t| t.contains(&a) && t.contains(&b)).count() as u64, max);
        if n == 4 {
            assert!((max as u128) < h1_degree_formula(VertexKind::MainColored, &cfg) && max < 256);
        }
    }
}

#[test]
fn condition_reports() {
    let g = TileSystem::Graph(GraphTileConfig::new(6, 2).unwrap());
    let report = g.condition_report().unwrap();
    assert_eq!(report.check("H3 Delta_R(H2)").unwrap().measured, 6.0);
    assert_eq!(report.check("H4 max d(x,v)").unwrap().measured, 1.0);
    assert_eq!(report.check("H1 Delta(H1)").unwrap().measured, 1440.0);
    assert!(report.check("H1 Delta(H1)").unwrap().pass);
    let n2 = g.palette().n2 as f64;
    assert_eq!(report.check("H3 delta_P(H2)").unwrap().measured, n2);

    let h = TileSystem::Hyper(HyperTileConfig::new(5, 3).unwrap());
    let stats = h.h2_stats();
    assert_eq!(stats.delta_r, 5);
    assert_eq!(stats.max_pair_degree, 1);
    assert_eq!(stats.delta_p, h.palette().n2 as u64);
}
