use itertools::Itertools;
use odd_ramsey::exact::{
    exists_valid_coloring, lower_bound_exhaust, r_odd_exact, ExhaustMode, OddRamseyValue, Pruning, SearchConfig,
    SearchOutcome, DEFAULT_NODE_BUDGET,
};
use odd_ramsey::odd::find_bad_target;
use odd_ramsey::HostInstance;

/// `K_{2,t}` copies of `K_{n,n}` as edge lists, in both orientations.
fn copies(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for pair in (0..n).combinations(2) {
        for leaves in (0..n).combinations(t) {
            let mut rows = Vec::new();
            let mut cols = Vec::new();
            for &l in &leaves {
                for &p in &pair {
                    rows.push(p * n + l);
                    cols.push(l * n + p);
                }
            }
            out.push(rows);
            out.push(cols);
        }
    }
    out
}

fn is_valid(colors: &[u32], copies: &[Vec<usize>]) -> bool {
    copies.iter().all(|c| c.iter().map(|&e| colors[e]).counts().values().any(|m| m % 2 == 1))
}

/// Plain enumeration of all `q^(n^2)` colorings.
fn brute_force(n: usize, t: usize, q: u32) -> bool {
    let copies = copies(n, t);
    let m = n * n;
    let mut colors = vec![0u32; m];
    loop {
        if is_valid(&colors, &copies) {
            return true;
        }
        let mut i = 0;
        while i < m {
            colors[i] += 1;
            if colors[i] < q {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
        if i == m {
            return false;
        }
    }
}

#[test]
fn search_agrees_with_brute_force() {
    for (n, qmax) in [(2, 3), (3, 3)] {
        for q in 1..=qmax {
            let expected = brute_force(n, 2, q);
            for pruning in [Pruning::None, Pruning::ColorCanonical, Pruning::Full] {
                let host = HostInstance::bipartite(n, 2).unwrap();
                let r = exists_valid_coloring(&SearchConfig::new(host, q).with_pruning(pruning)).unwrap();
                assert_eq!(matches!(r.outcome, SearchOutcome::Yes(_)), expected, "n={n} q={q} {pruning:?}");
                if let SearchOutcome::Yes(c) = r.outcome {
                    assert!(is_valid(&c.as_slice().iter().map(|x| x.unwrap()).collect::<Vec<_>>(), &copies(n, 2)));
                }
            }
        }
    }
}

#[test]
fn exact_values_and_lower_bound() {
    for (n, value) in [(2, 2), (3, 3), (4, 3)] {
        let host = HostInstance::bipartite(n, 2).unwrap();
        let r = r_odd_exact(host, 4, Pruning::Full, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.value, OddRamseyValue::Exact(value), "n = {n}");
        assert!(value as usize > n / 2);
        assert!(find_bad_target(r.certificate.as_ref().unwrap()).unwrap().is_none());
        let results: Vec<&str> = r.rows.iter().map(|row| row.result.as_str()).collect();
        let first_yes = results.iter().position(|&s| s == "yes").unwrap();
        assert!(results[..first_yes].iter().all(|&s| s == "no"));
    }
}

#[test]
fn monotone_in_q() {
    let host = HostInstance::bipartite(3, 3).unwrap();
    let mut seen_yes = false;
    for q in 1..=4 {
        let r = exists_valid_coloring(&SearchConfig::new(host, q)).unwrap();
        let yes = matches!(r.outcome, SearchOutcome::Yes(_));
        assert!(!seen_yes || yes);
        seen_yes |= yes;
    }
    assert!(seen_yes);
}

#[test]
fn k2_hypergraph_matches_graph_value() {
    let graph = r_odd_exact(HostInstance::bipartite(3, 2).unwrap(), 4, Pruning::ColorCanonical, DEFAULT_NODE_BUDGET).unwrap();
    let hyper = r_odd_exact(HostInstance::hypergraph(3, 2).unwrap(), 4, Pruning::ColorCanonical, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(graph.value, hyper.value);
}

#[test]
fn lower_bound_sampled_t3() {
    let r = lower_bound_exhaust(6, 3, ExhaustMode::Sampled { samples: 20_000, seed: 5 }, 1 << 30).unwrap();
    assert!(r.pass);
    assert_eq!(r.checked, 20_000);
}

#[test]
fn lower_bound_guard() {
    assert!(lower_bound_exhaust(4, 2, ExhaustMode::Exhaustive, 10).is_err());
}
