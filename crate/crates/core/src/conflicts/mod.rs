//! Conflicts: matchings of tiles whose colored edges contain a bad target
//! copy touching every tile. The `C` system collects minimal conflicts of
//! H1 tiles, the `D` system minimal conflicts that use H2 tiles.

mod claims;
mod engine;
mod partial;
mod patterns;

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::next_combination;
use crate::host::{Color, CopyShape, EdgeId, HostInstance, HostKind, TargetCopy, Vertex};
use crate::odd::{all_even, BadCopy};
use crate::tiles::Tile;

pub use claims::{check_claims, ClaimResult, ClaimsConfig, ClaimsReport};
pub use patterns::{
    bad_pattern_classes, grid_pattern, hyper_pattern_catalogue, large_host_patterns, GridPattern, PaletteTag,
    PatternCatalogue, PatternClass, PatternUse,
};
pub use engine::{Catalogue, Conflict, ConflictDump, ConflictEngine, WitnessDump, DEFAULT_CONFLICT_TILES};
pub use partial::{Admission, PartialMatching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConflictSystem {
    C,
    D,
}

impl fmt::Display for ConflictSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictSystem::C => "C",
            ConflictSystem::D => "D",
        })
    }
}

/// Hypergraph `D` conflicts: type 1 mixes two H1 edges with two H2 edges,
/// type 2 uses four H2 edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HyperType {
    Type1,
    Type2,
    NotApplicable,
}

/// A bad copy inside a tile set, with the tile owning each of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub bad: BadCopy,
    /// Aligned with `bad.copy.edges`.
    pub colors: Vec<Color>,
    /// Index into the tile set, aligned with `bad.copy.edges`.
    pub owners: Vec<usize>,
}

impl Witness {
    pub fn is_irreducible(&self) -> bool {
        self.bad.is_irreducible()
    }

    /// Every color is shared by at most two tiles, and a tile contributing
    /// an odd number of edges of a color has a partner tile of that color.
    pub fn check_partner_laws(&self) -> std::result::Result<(), String> {
        let mut per_color: HashMap<Color, HashMap<usize, usize>> = HashMap::new();
        for (&c, &o) in self.colors.iter().zip(&self.owners) {
            *per_color.entry(c).or_default().entry(o).or_insert(0) += 1;
        }
        for (c, owners) in &per_color {
            if owners.len() > 2 {
                return Err(format!("color {c} is used by {} tiles", owners.len()));
            }
            for (&o, &m) in owners {
                if m % 2 == 1 && owners.len() < 2 {
                    return Err(format!("tile {o} contributes {m} edges of color {c} without a partner"));
                }
            }
        }
        Ok(())
    }
}

/// Edge -> (tile index, color) for a tile set; `None` if two tiles color
/// the same edge.
fn owner_map<T: Borrow<Tile>>(tiles: &[T]) -> Option<HashMap<EdgeId, (usize, Color)>> {
    let mut map = HashMap::new();
    for (i, t) in tiles.iter().enumerate() {
        let t = t.borrow();
        for &e in &t.colored_edges {
            if map.insert(e, (i, t.color)).is_some() {
                return None;
            }
        }
    }
    Some(map)
}

pub fn is_matching<T: Borrow<Tile>>(tiles: &[T]) -> bool {
    for (i, a) in tiles.iter().enumerate() {
        for b in &tiles[i + 1..] {
            if !a.borrow().is_disjoint(b.borrow()) {
                return false;
            }
        }
    }
    true
}

/// Calls `f` with every subset of `items` of size `1..=max`.
pub(crate) fn for_each_subset_upto(items: &[Vertex], max: usize, mut f: impl FnMut(&[Vertex])) {
    let mut buf = Vec::with_capacity(max);
    for size in 1..=max.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            buf.clear();
            buf.extend(idx.iter().map(|&i| items[i]));
            f(&buf);
            if !next_combination(&mut idx, items.len()) {
                break;
            }
        }
    }
}

fn sorted_pair(a: Vertex, b: Vertex) -> [Vertex; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Every bad target copy (`K_{2,r}` with `r <= max_r`, or a grid) inside the
/// colored edges of `tiles` that uses at least one edge of each tile.
/// Returns nothing when the tiles color some edge twice.
pub fn find_witnesses<T: Borrow<Tile>>(host: &HostInstance, tiles: &[T], max_r: usize) -> Vec<Witness> {
    let Some(owners) = owner_map(tiles) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let full = tiles.len();
    let mut consider = |copy: TargetCopy| {
        let mut colors = Vec::with_capacity(copy.edges.len());
        let mut who = Vec::with_capacity(copy.edges.len());
        for e in &copy.edges {
            let Some(&(o, c)) = owners.get(e) else { return };
            colors.push(c);
            who.push(o);
        }
        if !all_even(&colors) {
            return;
        }
        let mut seen = vec![false; full];
        for &o in &who {
            seen[o] = true;
        }
        if !seen.iter().all(|&s| s) {
            return;
        }
        if let Some(bad) = BadCopy::from_colors(&copy, &colors) {
            out.push(Witness { bad, colors, owners: who });
        }
    };
    match host.kind {
        HostKind::Bipartite => {
            let n = host.n;
            for pair_part in 0..2 {
                let leaf_part = 1 - pair_part;
                let edge = |p: Vertex, l: Vertex| {
                    if pair_part == 0 {
                        host.edge_id(&[p, l])
                    } else {
                        host.edge_id(&[l, p])
                    }
                };
                for u in 0..n {
                    for v in u + 1..n {
                        let pu = host.vertex(pair_part, u);
                        let pv = host.vertex(pair_part, v);
                        let common: Vec<Vertex> = host
                            .part_vertices(leaf_part)
                            .filter(|&l| owners.contains_key(&edge(pu, l)) && owners.contains_key(&edge(pv, l)))
                            .collect();
                        for_each_subset_upto(&common, max_r, |leaves| {
                            consider(host.biclique(pair_part, [pu, pv], leaves.to_vec()));
                        });
                    }
                }
            }
        }
        HostKind::Hypergraph => {
            let mut edges: Vec<EdgeId> = owners.keys().copied().collect();
            edges.sort_unstable();
            let copies = host.copies_through_edges(&edges, 2).expect("grids have no range");
            for copy in copies {
                consider(copy);
            }
        }
    }
    out
}

/// A matching of at least two tiles containing a bad copy touching all of them.
pub fn is_conflict<T: Borrow<Tile>>(host: &HostInstance, tiles: &[T], max_r: usize) -> bool {
    tiles.len() >= 2 && is_matching(tiles) && !find_witnesses(host, tiles, max_r).is_empty()
}

/// Like [`is_conflict`], with an irreducible witness.
pub fn is_irreducible_conflict<T: Borrow<Tile>>(host: &HostInstance, tiles: &[T], max_r: usize) -> bool {
    tiles.len() >= 2
        && is_matching(tiles)
        && find_witnesses(host, tiles, max_r).iter().any(Witness::is_irreducible)
}

/// An irreducible conflict none of whose proper subsets (of size at least
/// two) is one.
pub fn is_minimal<T: Borrow<Tile>>(host: &HostInstance, tiles: &[T], max_r: usize) -> bool {
    if !is_irreducible_conflict(host, tiles, max_r) {
        return false;
    }
    let m = tiles.len();
    assert!(m < 32, "tile set too large");
    let full = (1u32 << m) - 1;
    (1..full).filter(|s| s.count_ones() >= 2).all(|s| {
        let sub: Vec<&Tile> = (0..m).filter(|i| s & (1 << i) != 0).map(|i| tiles[i].borrow()).collect();
        !is_irreducible_conflict(host, &sub, max_r)
    })
}

/// Copies through edge `e` in a partially colored host. `get` yields the
/// owner and color of a colored edge; copies with an uncolored edge are
/// skipped. Graph copies have `r <= max_r`.
pub(crate) fn colored_copies_through<G>(
    host: &HostInstance,
    e: EdgeId,
    max_r: usize,
    get: G,
    mut visit: impl FnMut(&TargetCopy, &[Color], &[u32]) -> bool,
) -> bool
where
    G: Fn(EdgeId) -> Option<(u32, Color)>,
{
    let verts = host.edge_vertices(e);
    let mut colors = Vec::new();
    let mut owners = Vec::new();
    let fill = |copy: &TargetCopy, colors: &mut Vec<Color>, owners: &mut Vec<u32>| -> bool {
        colors.clear();
        owners.clear();
        for &f in &copy.edges {
            match get(f) {
                Some((o, c)) => {
                    colors.push(c);
                    owners.push(o);
                }
                None => return false,
            }
        }
        true
    };
    match host.kind {
        HostKind::Bipartite => {
            let (x, y) = (verts[0], verts[1]);
            for (p, u, w) in [(0usize, x, y), (1usize, y, x)] {
                let leaf_part = 1 - p;
                let edge = |a: Vertex, l: Vertex| if p == 0 { host.edge_id(&[a, l]) } else { host.edge_id(&[l, a]) };
                for mate in host.part_vertices(p).filter(|&m| m != u) {
                    if get(edge(mate, w)).is_none() {
                        continue;
                    }
                    let others: Vec<Vertex> = host
                        .part_vertices(leaf_part)
                        .filter(|&z| z != w && get(edge(u, z)).is_some() && get(edge(mate, z)).is_some())
                        .collect();
                    let pair = sorted_pair(u, mate);
                    let stop = {
                    let mut stop = false;
                    let mut try_leaves = |extra: &[Vertex]| {
                        if stop {
                            return;
                        }
                        let mut leaves: Vec<Vertex> = extra.to_vec();
                        leaves.push(w);
                        leaves.sort_unstable();
                        let copy = host.biclique(p, pair, leaves);
                        if fill(&copy, &mut colors, &mut owners) && visit(&copy, &colors, &owners) {
                            stop = true;
                        }
                    };
                    try_leaves(&[]);
                    if max_r > 1 {
                        for_each_subset_upto(&others, max_r - 1, &mut try_leaves);
                    }
                    stop
                    };
                    if stop {
                        return true;
                    }
                }
            }
        }
        HostKind::Hypergraph => {
            for a in 0..host.k {
                for b in a + 1..host.k {
                    let prefix: Vec<Vertex> = (0..host.k).filter(|&q| q != a && q != b).map(|q| verts[q]).collect();
                    for ma in host.part_vertices(a).filter(|&v| v != verts[a]) {
                        for mb in host.part_vertices(b).filter(|&v| v != verts[b]) {
                            let copy = host.grid(
                                prefix.clone(),
                                [a, b],
                                [sorted_pair(verts[a], ma), sorted_pair(verts[b], mb)],
                            );
                            if fill(&copy, &mut colors, &mut owners) && visit(&copy, &colors, &owners) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// Shape label used in dumps.
pub(crate) fn copy_label(copy: &TargetCopy) -> String {
    match &copy.shape {
        CopyShape::Biclique { .. } => format!("K_{{2,{}}}", copy.width()),
        CopyShape::Grid { .. } => "grid".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::Palette;
    use crate::tiles::{build_h2_tile, GraphTileConfig, TileSystem};

    fn graph_system(n: usize) -> TileSystem {
        TileSystem::Graph(GraphTileConfig::new(n, 2).unwrap())
    }

    #[test]
    fn two_h2_tiles_on_a_rectangle() {
        let host = HostInstance::bipartite(4, 2).unwrap();
        let palette = Palette::new(2, 4);
        // x0y4, x1y5 colored 2; x0y5, x1y4 colored 3
        let e = |x: u32, y: u32| host.edge_id(&[x, y]);
        let tiles = [
            build_h2_tile(&host, &palette, e(0, 4), 2).unwrap(),
            build_h2_tile(&host, &palette, e(1, 5), 2).unwrap(),
            build_h2_tile(&host, &palette, e(0, 5), 3).unwrap(),
            build_h2_tile(&host, &palette, e(1, 4), 3).unwrap(),
        ];
        assert!(is_matching(&tiles));
        let w = find_witnesses(&host, &tiles, 2);
        // the same rectangle seen with the pair in X and in Y
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(Witness::is_irreducible));
        assert!(w.iter().all(|w| w.check_partner_laws().is_ok()));
        assert!(is_minimal(&host, &tiles, 2));
        assert!(!is_conflict(&host, &tiles[..3], 2));
    }

    #[test]
    fn overlapping_tiles_are_not_a_matching() {
        let sys = graph_system(4);
        let h2 = sys.enumerate_h2();
        let host = sys.host();
        let same_x: Vec<&Tile> = h2
            .iter()
            .filter(|t| t.color == 2 && host.edge_vertices(t.colored_edges[0])[0] == 0)
            .take(2)
            .collect();
        assert_eq!(same_x.len(), 2);
        assert!(!is_matching(&same_x));
        assert!(!is_conflict(&host, &same_x, 2));
    }

    #[test]
    fn partner_law_violation_is_reported() {
        let host = HostInstance::bipartite(3, 2).unwrap();
        let copy = host.biclique(0, [0, 1], vec![3, 4]);
        let bad = BadCopy::from_colors(&copy, &[0, 0, 0, 0]).unwrap();
        let w = Witness { bad, colors: vec![0; 4], owners: vec![0, 1, 2, 2] };
        assert!(w.check_partner_laws().is_err());
    }
}
