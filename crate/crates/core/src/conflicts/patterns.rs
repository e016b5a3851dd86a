//! Bad colorings of the grid `K_{1,...,1,2,2}` and which of them a matching
//! of tiles can produce.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloring::Palette;
use crate::combinatorics::set_partitions;
use crate::error::{Error, Result};
use crate::host::{Color, HostInstance, Vertex, VertexSet};
use crate::tiles::TileVertex;

use super::engine::ConflictEngine;

/// Color pattern of a bad grid; `edges[2a + b]` sits at row `a`, column `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GridPattern {
    AllSame,
    Rows,
    Columns,
    Diagonals,
}

impl GridPattern {
    /// Edge-index blocks sharing a color.
    pub fn blocks(self) -> Vec<Vec<usize>> {
        match self {
            GridPattern::AllSame => vec![vec![0, 1, 2, 3]],
            GridPattern::Rows => vec![vec![0, 1], vec![2, 3]],
            GridPattern::Columns => vec![vec![0, 2], vec![1, 3]],
            GridPattern::Diagonals => vec![vec![0, 3], vec![1, 2]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PaletteTag {
    N1,
    N2,
}

/// A grid pattern with the palette of each color block, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternClass {
    pub pattern: GridPattern,
    pub palettes: Vec<PaletteTag>,
}

pub fn grid_pattern(colors: &[Color]) -> Option<GridPattern> {
    if colors.len() != 4 {
        return None;
    }
    let c = colors;
    if c.iter().all(|&x| x == c[0]) {
        Some(GridPattern::AllSame)
    } else if c[0] == c[1] && c[2] == c[3] {
        Some(GridPattern::Rows)
    } else if c[0] == c[2] && c[1] == c[3] {
        Some(GridPattern::Columns)
    } else if c[0] == c[3] && c[1] == c[2] {
        Some(GridPattern::Diagonals)
    } else {
        None
    }
}

fn pattern_class(colors: &[Color], palette: &Palette) -> Option<PatternClass> {
    let pattern = grid_pattern(colors)?;
    let blocks: BTreeSet<Color> = colors.iter().copied().collect();
    let mut palettes: Vec<PaletteTag> =
        blocks.iter().map(|&b| if palette.is_main(b) { PaletteTag::N1 } else { PaletteTag::N2 }).collect();
    palettes.sort_unstable();
    Some(PatternClass { pattern, palettes })
}

/// Every bad pattern class a grid can carry.
pub fn bad_pattern_classes() -> Vec<PatternClass> {
    use GridPattern::*;
    use PaletteTag::*;
    let mut bad = vec![
        PatternClass { pattern: AllSame, palettes: vec![N1] },
        PatternClass { pattern: AllSame, palettes: vec![N2] },
    ];
    for pattern in [Rows, Columns, Diagonals] {
        for palettes in [vec![N1, N1], vec![N1, N2], vec![N2, N2]] {
            bad.push(PatternClass { pattern, palettes });
        }
    }
    bad
}

/// Where a realized pattern class shows up.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternUse {
    /// Witnesses (or owner assignments) producing the class.
    pub witnesses: usize,
    /// `(H1 tiles, H2 tiles)` of the conflicts producing the class.
    pub signatures: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCatalogue {
    pub bad: Vec<PatternClass>,
    pub realized: BTreeMap<PatternClass, PatternUse>,
}

impl PatternCatalogue {
    pub fn is_realized(&self, class: &PatternClass) -> bool {
        self.realized.contains_key(class)
    }

    pub fn realized_classes(&self) -> BTreeSet<PatternClass> {
        self.realized.keys().cloned().collect()
    }
}

/// Pattern classes of the bad grids inside minimal conflicts of the
/// engine's hypergraph instance.
pub fn hyper_pattern_catalogue(engine: &ConflictEngine) -> Result<PatternCatalogue> {
    if engine.host().is_bipartite() {
        return Err(Error::WrongHost { expected: "hypergraph" });
    }
    let palette = engine.system().palette();
    let mut realized: BTreeMap<PatternClass, PatternUse> = BTreeMap::new();
    for conflict in engine.catalogue().conflicts.iter().filter(|c| c.minimal) {
        for w in &conflict.witnesses {
            let Some(class) = pattern_class(&w.colors, &palette) else { continue };
            let entry = realized.entry(class).or_default();
            entry.witnesses += 1;
            entry.signatures.insert(conflict.signature);
        }
    }
    Ok(PatternCatalogue { bad: bad_pattern_classes(), realized })
}

/// Pattern classes realizable once the host is large enough that tiles
/// only interact through the grid itself.
///
/// Each color block is split among owner tiles (one edge per H2 tile). An
/// H1 owner is restricted to the grid vertices it covers: every labeling of
/// those vertices is tried, subject to its own edges being transversal and
/// no other grid edge on its vertices being transversal. The pattern is
/// realizable when the restricted tiles can be chosen pairwise disjoint.
pub fn large_host_patterns(k: usize) -> Result<PatternCatalogue> {
    let host = HostInstance::hypergraph(2, k)?;
    let prefix: Vec<Vertex> = (2..k).map(|p| host.vertex(p, 0)).collect();
    let grid = host.grid(prefix, [0, 1], [[host.vertex(0, 0), host.vertex(0, 1)], [host.vertex(1, 0), host.vertex(1, 1)]]);
    let edges: Vec<VertexSet> = grid.edges.iter().map(|&e| host.edge_vertices(e)).collect();
    let mut realized: BTreeMap<PatternClass, PatternUse> = BTreeMap::new();
    for class in bad_pattern_classes() {
        let blocks = class.pattern.blocks();
        let tag_orders: BTreeSet<Vec<PaletteTag>> = permutations(&class.palettes);
        for tags in tag_orders {
            let mut owners_per_block: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
            for (block, tag) in blocks.iter().zip(&tags) {
                let options = match tag {
                    PaletteTag::N2 => vec![block.iter().map(|&e| vec![e]).collect()],
                    PaletteTag::N1 => set_partitions(block.len())
                        .into_iter()
                        .map(|rgs| {
                            let parts = rgs.iter().max().map_or(0, |&b| b + 1);
                            (0..parts)
                                .map(|p| (0..block.len()).filter(|&i| rgs[i] == p).map(|i| block[i]).collect())
                                .collect()
                        })
                        .collect(),
                };
                owners_per_block.push(options);
            }
            for choice in cartesian(&owners_per_block) {
                let mut owners: Vec<(Vec<usize>, Color, PaletteTag)> = Vec::new();
                for (b, groups) in choice.iter().enumerate() {
                    for g in groups.iter() {
                        owners.push((g.clone(), b as Color, tags[b]));
                    }
                }
                if owners.len() < 2 {
                    continue;
                }
                if realizable(&host, &edges, &owners) {
                    let j1 = owners.iter().filter(|o| o.2 == PaletteTag::N1).count();
                    let entry = realized.entry(class.clone()).or_default();
                    entry.witnesses += 1;
                    entry.signatures.insert((j1, owners.len() - j1));
                }
            }
        }
    }
    Ok(PatternCatalogue { bad: bad_pattern_classes(), realized })
}

fn permutations(tags: &[PaletteTag]) -> BTreeSet<Vec<PaletteTag>> {
    let mut out = BTreeSet::new();
    out.insert(tags.to_vec());
    if tags.len() == 2 {
        out.insert(vec![tags[1], tags[0]]);
    }
    out
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::new();
        for prefix in &out {
            for o in opts {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn realizable(host: &HostInstance, edges: &[VertexSet], owners: &[(Vec<usize>, Color, PaletteTag)]) -> bool {
    let options: Vec<Vec<BTreeSet<TileVertex>>> =
        owners.iter().map(|(own, color, tag)| fragments(host, edges, own, *color, *tag)).collect();
    fn search(options: &[Vec<BTreeSet<TileVertex>>], chosen: &mut Vec<BTreeSet<TileVertex>>) -> bool {
        let i = chosen.len();
        if i == options.len() {
            return true;
        }
        for f in &options[i] {
            if chosen.iter().all(|c| c.is_disjoint(f)) {
                chosen.push(f.clone());
                if search(options, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    search(&options, &mut Vec::new())
}

/// The possible restrictions of one owner tile to the grid vertices.
fn fragments(
    host: &HostInstance,
    edges: &[VertexSet],
    own: &[usize],
    color: Color,
    tag: PaletteTag,
) -> Vec<BTreeSet<TileVertex>> {
    let k = host.k;
    let colored = |set: &[Vertex]| TileVertex::Colored { set: set.iter().copied().collect(), color };
    if tag == PaletteTag::N2 {
        let e = &edges[own[0]];
        let mut f = BTreeSet::new();
        f.insert(TileVertex::Slot(e.clone()));
        for skip in 0..k {
            let sub: Vec<Vertex> = (0..k).filter(|&i| i != skip).map(|i| e[i]).collect();
            f.insert(colored(&sub));
        }
        return vec![f];
    }
    let verts: Vec<Vertex> = own.iter().flat_map(|&i| edges[i].iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeSet::new();
    let mut labels = vec![0usize; verts.len()];
    let total = (k + 1).pow(verts.len() as u32);
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % (k + 1);
            c /= k + 1;
        }
        let label_of = |v: Vertex| labels[verts.iter().position(|&w| w == v).expect("owned vertex")];
        let injective_in_parts = verts.iter().enumerate().all(|(i, &v)| {
            verts[i + 1..].iter().all(|&w| host.part_of(v) != host.part_of(w) || label_of(v) != label_of(w))
        });
        if !injective_in_parts {
            continue;
        }
        let distinct = |set: &[Vertex]| {
            let ls: BTreeSet<usize> = set.iter().map(|&v| label_of(v)).collect();
            ls.len() == set.len()
        };
        if !own.iter().all(|&i| distinct(&edges[i])) {
            continue;
        }
        let foreign_ok = (0..edges.len())
            .filter(|i| !own.contains(i))
            .filter(|&i| edges[i].iter().all(|v| verts.contains(v)))
            .all(|i| !distinct(&edges[i]));
        if !foreign_ok {
            continue;
        }
        let mut f = BTreeSet::new();
        for mask in 1u32..(1 << verts.len()) {
            let set: Vec<Vertex> = (0..verts.len()).filter(|&i| mask & (1 << i) != 0).map(|i| verts[i]).collect();
            if !distinct(&set) {
                continue;
            }
            let mut per_part = vec![0usize; k];
            for &v in &set {
                per_part[host.part_of(v)] += 1;
            }
            let doubled = per_part.iter().filter(|&&m| m == 2).count();
            let missing = per_part.iter().filter(|&&m| m == 0).count();
            let over = per_part.iter().any(|&m| m > 2);
            if over {
                continue;
            }
            if set.len() == k && doubled == 0 {
                f.insert(TileVertex::Slot(set.iter().copied().collect()));
            } else if set.len() == k && doubled == 1 && missing == 1 {
                f.insert(TileVertex::Slot(set.iter().copied().collect()));
            } else if set.len() == k - 1 && doubled == 0 {
                f.insert(colored(&set));
            }
        }
        out.insert(f);
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::{HyperTileConfig, TileSystem};
    use PaletteTag::*;

    fn diagonals(palettes: Vec<Vec<PaletteTag>>) -> BTreeSet<PatternClass> {
        palettes.into_iter().map(|palettes| PatternClass { pattern: GridPattern::Diagonals, palettes }).collect()
    }

    #[test]
    fn grid_patterns() {
        assert_eq!(grid_pattern(&[1, 1, 1, 1]), Some(GridPattern::AllSame));
        assert_eq!(grid_pattern(&[1, 1, 2, 2]), Some(GridPattern::Rows));
        assert_eq!(grid_pattern(&[1, 2, 1, 2]), Some(GridPattern::Columns));
        assert_eq!(grid_pattern(&[1, 2, 2, 1]), Some(GridPattern::Diagonals));
        assert_eq!(grid_pattern(&[1, 2, 3, 1]), None);
        assert_eq!(bad_pattern_classes().len(), 11);
    }

    #[test]
    fn small_hosts_miss_the_h1_diagonal() {
        for n in [3, 4] {
            let sys = TileSystem::Hyper(HyperTileConfig::new(n, 2).unwrap());
            let eng = ConflictEngine::new(&sys).unwrap();
            let cat = hyper_pattern_catalogue(&eng).unwrap();
            assert_eq!(cat.realized_classes(), diagonals(vec![vec![N1, N2], vec![N2, N2]]), "n = {n}");
        }
    }

    #[test]
    fn large_hosts_realize_exactly_the_diagonals() {
        for k in [2, 3] {
            let cat = large_host_patterns(k).unwrap();
            assert_eq!(cat.realized_classes(), diagonals(vec![vec![N1, N1], vec![N1, N2], vec![N2, N2]]), "k = {k}");
            let sigs = |p: Vec<PaletteTag>| {
                cat.realized[&PatternClass { pattern: GridPattern::Diagonals, palettes: p }].signatures.clone()
            };
            assert_eq!(sigs(vec![N1, N1]), BTreeSet::from([(3, 0), (4, 0)]));
            assert_eq!(sigs(vec![N1, N2]), BTreeSet::from([(1, 2), (2, 2)]));
            assert_eq!(sigs(vec![N2, N2]), BTreeSet::from([(0, 4)]));
        }
    }
}
