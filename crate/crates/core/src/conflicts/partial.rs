use std::collections::HashSet;

use crate::coloring::{Coloring, Palette};
use crate::host::{Color, EdgeId, HostInstance};
use crate::odd::{all_even, BadCopy};
use crate::tiles::{Tile, TileVertex};

use super::colored_copies_through;

const INCOMING: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admission {
    Accepted,
    /// The tile shares a vertex with the matching.
    Overlap,
    /// Adding the tile would complete this irreducible bad copy across
    /// at least two tiles.
    Conflict(Box<BadCopy>),
}

impl Admission {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Admission::Accepted)
    }
}

/// A growing conflict-free matching together with the partial coloring it
/// induces.
#[derive(Clone, Debug)]
pub struct PartialMatching {
    host: HostInstance,
    palette: Palette,
    max_r: usize,
    owner: Vec<Option<(u32, Color)>>,
    occupied: HashSet<TileVertex>,
    tiles: Vec<Tile>,
}

impl PartialMatching {
    /// `max_r` bounds the `K_{2,r}` checked on insertion (ignored for grids).
    pub fn new(host: HostInstance, palette: Palette, max_r: usize) -> Self {
        PartialMatching {
            host,
            palette,
            max_r,
            owner: vec![None; host.edge_count()],
            occupied: HashSet::new(),
            tiles: Vec::new(),
        }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn is_colored(&self, e: EdgeId) -> bool {
        self.owner[e].is_some()
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        self.owner[e].map(|(_, c)| c)
    }

    pub fn uncolored_edges(&self) -> Vec<EdgeId> {
        (0..self.owner.len()).filter(|&e| self.owner[e].is_none()).collect()
    }

    pub fn colored_count(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    pub fn admits(&self, tile: &Tile) -> Admission {
        if tile.vertices.iter().any(|v| self.occupied.contains(v)) {
            return Admission::Overlap;
        }
        if tile.colored_edges.iter().any(|&e| self.owner[e].is_some()) {
            return Admission::Overlap;
        }
        let get = |e: EdgeId| {
            if tile.colors_edge(e) {
                Some((INCOMING, tile.color))
            } else {
                self.owner[e]
            }
        };
        let mut found = None;
        for &e in &tile.colored_edges {
            let hit = colored_copies_through(&self.host, e, self.max_r, get, |copy, colors, owners| {
                if !all_even(colors) || owners.iter().all(|&o| o == owners[0]) {
                    return false;
                }
                match BadCopy::from_colors(copy, colors) {
                    Some(bad) if bad.is_irreducible() => {
                        found = Some(bad);
                        true
                    }
                    _ => false,
                }
            });
            if hit {
                break;
            }
        }
        match found {
            Some(bad) => Admission::Conflict(Box::new(bad)),
            None => Admission::Accepted,
        }
    }

    /// Adds the tile if admissible.
    pub fn try_add(&mut self, tile: Tile) -> Admission {
        let verdict = self.admits(&tile);
        if verdict.is_accepted() {
            self.insert_unchecked(tile);
        }
        verdict
    }

    fn insert_unchecked(&mut self, tile: Tile) {
        let id = self.tiles.len() as u32;
        for &e in &tile.colored_edges {
            self.owner[e] = Some((id, tile.color));
        }
        self.occupied.extend(tile.vertices.iter().cloned());
        self.tiles.push(tile);
    }

    pub fn coloring(&self) -> Coloring {
        let colors = self.owner.iter().map(|o| o.map(|(_, c)| c)).collect();
        Coloring::from_colors(self.host, self.palette, colors).expect("tile colors lie in the palette")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::build_h2_tile;

    #[test]
    fn rejects_the_fourth_edge_of_a_bad_rectangle() {
        let host = HostInstance::bipartite(4, 2).unwrap();
        let palette = Palette::new(2, 4);
        let e = |x: u32, y: u32| host.edge_id(&[x, y]);
        let mut m = PartialMatching::new(host, palette, 2);
        for (edge, c) in [(e(0, 4), 2), (e(1, 5), 2), (e(0, 5), 3)] {
            assert!(m.try_add(build_h2_tile(&host, &palette, edge, c).unwrap()).is_accepted());
        }
        let last = build_h2_tile(&host, &palette, e(1, 4), 3).unwrap();
        assert!(matches!(m.admits(&last), Admission::Conflict(_)));
        let other = build_h2_tile(&host, &palette, e(1, 4), 4).unwrap();
        assert!(m.try_add(other).is_accepted());
        let again = build_h2_tile(&host, &palette, e(1, 4), 5).unwrap();
        assert_eq!(m.admits(&again), Admission::Overlap);
        assert_eq!(m.colored_count(), 4);
    }
}
