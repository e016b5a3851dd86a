use itertools::Itertools;
use odd_ramsey::coloring::Coloring;
use odd_ramsey::matcher::{run_matcher, MatcherConfig};
use odd_ramsey::tiles::{GraphTileConfig, HyperTileConfig, TileSystem};
use odd_ramsey::HostKind;

/// Scans every target copy directly from the coloring.
fn has_bad_copy(c: &Coloring) -> bool {
    let h = c.host;
    let n = h.n;
    let col = |e: usize| c.get(e).unwrap();
    let even = |cs: Vec<u32>| cs.into_iter().counts().values().all(|m| m % 2 == 0);
    match h.kind {
        HostKind::Bipartite => (0..n).combinations(2).any(|pair| {
            (0..n).combinations(h.t).any(|leaves| {
                let rows = leaves.iter().flat_map(|&l| pair.iter().map(move |&p| (p, l)));
                even(rows.clone().map(|(p, l)| col(p * n + l)).collect())
                    || even(rows.map(|(p, l)| col(l * n + p)).collect())
            })
        }),
        HostKind::Hypergraph => {
            assert_eq!(h.k, 2);
            (0..n).combinations(2).cartesian_product((0..n).combinations(2)).any(|(a, b)| {
                even(vec![col(a[0] * n + b[0]), col(a[0] * n + b[1]), col(a[1] * n + b[0]), col(a[1] * n + b[1])])
            })
        }
    }
}

#[test]
fn successful_runs_are_clean_and_within_palette() {
    let systems = [
        TileSystem::Graph(GraphTileConfig::new(10, 2).unwrap()),
        TileSystem::Graph(GraphTileConfig::new(7, 3).unwrap()),
        TileSystem::Hyper(HyperTileConfig::new(8, 2).unwrap()),
    ];
    for sys in &systems {
        let mut successes = 0;
        for seed in 0..5 {
            let r = run_matcher(sys, MatcherConfig { seed, ..MatcherConfig::default() }).unwrap();
            if r.success {
                successes += 1;
                assert!(r.coloring.is_total());
                assert!(!has_bad_copy(&r.coloring));
                assert!(r.colors_used <= sys.palette().size() as usize);
                assert!(r.coloring.colors_used().iter().all(|&c| sys.palette().contains(c)));
            }
        }
        assert!(successes > 0, "{}", sys.describe());
    }
}

#[test]
fn replays_are_identical_and_seeds_differ() {
    let sys = TileSystem::Hyper(HyperTileConfig::new(7, 2).unwrap());
    let a = run_matcher(&sys, MatcherConfig { seed: 11, ..MatcherConfig::default() }).unwrap();
    let b = run_matcher(&sys, MatcherConfig { seed: 11, ..MatcherConfig::default() }).unwrap();
    let c = run_matcher(&sys, MatcherConfig { seed: 12, ..MatcherConfig::default() }).unwrap();
    assert_eq!(serde_json::to_string(&a.without_timing()).unwrap(), serde_json::to_string(&b.without_timing()).unwrap());
    assert_ne!(a.coloring, c.coloring);
}

#[test]
fn tile_counts_account_for_every_edge() {
    let sys = TileSystem::Graph(GraphTileConfig::new(9, 2).unwrap());
    let r = run_matcher(&sys, MatcherConfig { seed: 4, ..MatcherConfig::default() }).unwrap();
    let t = 2;
    let per_h1 = (t + 1) * t;
    assert_eq!(r.h1_tiles * per_h1 + r.h2_tiles + r.fallback_edges + r.uncolored, sys.host().edge_count());
    assert_eq!(r.residue.uncolored_after_phase1, sys.host().edge_count() - r.h1_tiles * per_h1);
}
