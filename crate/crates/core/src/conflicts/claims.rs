use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::Palette;
use crate::host::{Color, HostKind, TargetCopy, Vertex};
use crate::odd::find_bad_target_partial;
use crate::tiles::Tile;

use super::engine::ConflictEngine;
use super::{find_witnesses, is_conflict, is_irreducible_conflict, PartialMatching};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub claims: Vec<ClaimResult>,
}

impl ClaimsReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimsConfig {
    pub random_conflicts: usize,
    pub random_matchings: usize,
    pub seed: u64,
}

impl Default for ClaimsConfig {
    fn default() -> Self {
        ClaimsConfig { random_conflicts: 10_000, random_matchings: 1_000, seed: 0 }
    }
}

/// Checks, on the engine's instance:
/// (i) no two disjoint tiles form a conflict;
/// (ii) every conflict contains an irreducible one;
/// (iii) a maximal conflict-free matching leaves no bad target.
pub fn check_claims(engine: &ConflictEngine, cfg: ClaimsConfig) -> ClaimsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    ClaimsReport {
        claims: vec![
            claim_pairs(engine),
            claim_reduction(engine, cfg.random_conflicts, &mut rng),
            claim_maximal(engine, cfg.random_matchings, &mut rng),
        ],
    }
}

fn claim_pairs(engine: &ConflictEngine) -> ClaimResult {
    let host = engine.host();
    let tiles = engine.tiles();
    let mut checked = 0;
    for (i, a) in tiles.iter().enumerate() {
        for b in &tiles[i + 1..] {
            if !a.is_disjoint(b) {
                continue;
            }
            checked += 1;
            if is_conflict(&host, &[a, b], host.n) {
                let sys = engine.system();
                return ClaimResult {
                    name: "no 2-tile conflict".into(),
                    pass: false,
                    checked,
                    counterexample: Some(format!("{} | {}", sys.dump_tile(a), sys.dump_tile(b))),
                };
            }
        }
    }
    ClaimResult { name: "no 2-tile conflict".into(), pass: true, checked, counterexample: None }
}

fn random_copy<R: Rng>(engine: &ConflictEngine, rng: &mut R) -> Option<TargetCopy> {
    let host = engine.host();
    let n = host.n;
    if n < 2 {
        return None;
    }
    let pick_pair = |rng: &mut R, part: usize| -> [Vertex; 2] {
        let mut locals: Vec<usize> = (0..n).collect();
        locals.shuffle(rng);
        let mut p = [host.vertex(part, locals[0]), host.vertex(part, locals[1])];
        p.sort_unstable();
        p
    };
    match host.kind {
        HostKind::Bipartite => {
            let r = rng.gen_range(2..=n.min(4));
            let pair_part = rng.gen_range(0..2);
            let pair = pick_pair(rng, pair_part);
            let mut leaves: Vec<Vertex> = host.part_vertices(1 - pair_part).collect();
            leaves.shuffle(rng);
            leaves.truncate(r);
            leaves.sort_unstable();
            Some(host.biclique(pair_part, pair, leaves))
        }
        HostKind::Hypergraph => {
            let mut parts: Vec<usize> = (0..host.k).collect();
            parts.shuffle(rng);
            let (mut a, mut b) = (parts[0], parts[1]);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let prefix: Vec<Vertex> = (0..host.k)
                .filter(|&p| p != a && p != b)
                .map(|p| host.vertex(p, rng.gen_range(0..n)))
                .collect();
            let pa = pick_pair(rng, a);
            let pb = pick_pair(rng, b);
            Some(host.grid(prefix, [a, b], [pa, pb]))
        }
    }
}

fn random_even_colors<R: Rng>(m: usize, palette: &Palette, rng: &mut R) -> Vec<Color> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut colors = vec![0; m];
    for pair in order.chunks(2) {
        let c = rng.gen_range(0..palette.size());
        for &i in pair {
            colors[i] = c;
        }
    }
    colors
}

fn random_tiles<R: Rng>(
    engine: &ConflictEngine,
    copy: &TargetCopy,
    colors: &[Color],
    rng: &mut R,
    chosen: &mut Vec<u32>,
    depth: usize,
    budget: &mut u32,
) -> bool {
    if depth == copy.edges.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let mut cands = engine.candidates(copy.edges[depth], colors[depth]).to_vec();
    cands.shuffle(rng);
    for id in cands {
        let fresh = !chosen.contains(&id);
        if fresh && !chosen.iter().all(|&o| engine.disjoint(id, o)) {
            continue;
        }
        if fresh {
            chosen.push(id);
        }
        if random_tiles(engine, copy, colors, rng, chosen, depth + 1, budget) {
            return true;
        }
        if fresh {
            chosen.pop();
        }
    }
    false
}

fn claim_reduction<R: Rng>(engine: &ConflictEngine, samples: usize, rng: &mut R) -> ClaimResult {
    let name = "conflict contains irreducible conflict".to_string();
    let host = engine.host();
    let palette = engine.system().palette();
    let mut checked = 0u64;
    let mut attempts = 0usize;
    while (checked as usize) < samples && attempts < samples.saturating_mul(1000).max(1000) {
        attempts += 1;
        let Some(copy) = random_copy(engine, rng) else { break };
        let colors = random_even_colors(copy.edges.len(), &palette, rng);
        let mut chosen = Vec::new();
        let mut budget = 10_000;
        if !random_tiles(engine, &copy, &colors, rng, &mut chosen, 0, &mut budget) || chosen.len() < 2 {
            continue;
        }
        chosen.sort_unstable();
        let tiles: Vec<&Tile> = chosen.iter().map(|&i| engine.tile(i)).collect();
        checked += 1;
        let describe = || {
            let sys = engine.system();
            tiles.iter().map(|t| sys.dump_tile(t)).collect::<Vec<_>>().join(" | ")
        };
        if find_witnesses(&host, &tiles, host.n).is_empty() {
            return ClaimResult { name, pass: false, checked, counterexample: Some(format!("not a conflict: {}", describe())) };
        }
        let m = tiles.len();
        let mut masks: Vec<u32> = (1u32..1 << m).filter(|s| s.count_ones() >= 2).collect();
        masks.sort_by_key(|s| s.count_ones());
        let found = masks.iter().any(|&s| {
            let sub: Vec<&Tile> = (0..m).filter(|i| s & (1 << i) != 0).map(|i| tiles[i]).collect();
            is_irreducible_conflict(&host, &sub, host.n)
        });
        if !found {
            return ClaimResult { name, pass: false, checked, counterexample: Some(describe()) };
        }
    }
    ClaimResult { name, pass: checked as usize == samples, checked, counterexample: None }
}

fn claim_maximal<R: Rng>(engine: &ConflictEngine, samples: usize, rng: &mut R) -> ClaimResult {
    let name = "maximal matching has no bad target".to_string();
    let sys = engine.system();
    let host = engine.host();
    let mut order: Vec<u32> = (0..engine.tiles().len() as u32).collect();
    for i in 0..samples {
        order.shuffle(rng);
        let mut m = PartialMatching::new(host, sys.palette(), sys.witness_max_r());
        for &id in &order {
            m.try_add(engine.tile(id).clone());
        }
        if let Some(bad) = find_bad_target_partial(&m.coloring()) {
            return ClaimResult {
                name,
                pass: false,
                checked: i as u64 + 1,
                counterexample: Some(format!("{bad} after {} tiles", m.tiles().len())),
            };
        }
    }
    ClaimResult { name, pass: true, checked: samples as u64, counterexample: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{GraphTileConfig, TileSystem};

    #[test]
    fn claims_hold_on_small_graph() {
        let sys = TileSystem::Graph(GraphTileConfig::new(3, 2).unwrap());
        let eng = ConflictEngine::new(&sys).unwrap();
        let report = check_claims(&eng, ClaimsConfig { random_conflicts: 200, random_matchings: 50, seed: 3 });
        assert!(report.all_pass(), "{report:?}");
    }
}
