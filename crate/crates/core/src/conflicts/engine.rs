use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::Palette;
use crate::combinatorics::set_partitions;
use crate::error::{Error, Result};
use crate::host::{Color, EdgeId, HostInstance, HostKind, TargetCopy};
use crate::odd::BadCopy;
use crate::report::{BoundCheck, ConditionReport, Relation};
use crate::tiles::{sorted_disjoint, Tile, TileKind, TileSystem, TileVertex};

use super::{copy_label, ConflictSystem, HyperType, Witness};

/// Tile-count cap for [`ConflictEngine::with_limit`].
pub const DEFAULT_CONFLICT_TILES: u128 = 2_000;

/// One irreducible conflict found by exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    /// Sorted ids into the engine's tile list.
    pub tile_ids: Vec<u32>,
    /// `(H1 tiles, H2 tiles)`.
    pub signature: (usize, usize),
    pub witnesses: Vec<Witness>,
    pub minimal: bool,
    pub hyper_type: HyperType,
}

impl Conflict {
    pub fn size(&self) -> usize {
        self.tile_ids.len()
    }

    /// The system this conflict belongs to, if it is minimal.
    pub fn system(&self) -> Option<ConflictSystem> {
        match (self.minimal, self.signature.1) {
            (false, _) => None,
            (true, 0) => Some(ConflictSystem::C),
            (true, _) => Some(ConflictSystem::D),
        }
    }
}

/// All tiles of a small instance, indexed for witness-first enumeration.
pub struct ConflictEngine {
    system: TileSystem,
    host: HostInstance,
    palette: Palette,
    tiles: Vec<Tile>,
    h1_count: usize,
    by_edge_color: HashMap<(EdgeId, Color), Vec<u32>>,
    interned: Vec<Vec<u32>>,
    max_r: usize,
}

impl ConflictEngine {
    /// Accepts graph systems with `t = 2, n <= 4` and hypergraph systems with
    /// `k = 2, n <= 4`.
    pub fn new(system: &TileSystem) -> Result<Self> {
        let host = system.host();
        let ok = match host.kind {
            HostKind::Bipartite => host.t == 2 && host.n <= 4,
            HostKind::Hypergraph => host.k == 2 && host.n <= 4,
        };
        if !ok {
            return Err(Error::GuardExceeded {
                what: "conflict enumeration instance",
                needed: host.n as u128,
                guard: 4,
            });
        }
        Self::with_limit(system, u128::MAX)
    }

    /// Accepts any instance with at most `max_tiles` tiles.
    pub fn with_limit(system: &TileSystem, max_tiles: u128) -> Result<Self> {
        let host = system.host();
        let palette = system.palette();
        let total = system.h1_count() + host.edge_count() as u128 * palette.n2 as u128;
        crate::tiles::check_guard("conflict enumeration tiles", total, max_tiles)?;
        let mut tiles = system.enumerate_h1()?;
        let h1_count = tiles.len();
        tiles.extend(system.enumerate_h2());
        let mut ids: HashMap<TileVertex, u32> = HashMap::new();
        let mut interned = Vec::with_capacity(tiles.len());
        let mut by_edge_color: HashMap<(EdgeId, Color), Vec<u32>> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            let mut v: Vec<u32> = t
                .vertices
                .iter()
                .map(|x| {
                    let next = ids.len() as u32;
                    *ids.entry(x.clone()).or_insert(next)
                })
                .collect();
            v.sort_unstable();
            interned.push(v);
            for &e in &t.colored_edges {
                by_edge_color.entry((e, t.color)).or_default().push(i as u32);
            }
        }
        Ok(ConflictEngine {
            system: system.clone(),
            host,
            palette,
            tiles,
            h1_count,
            by_edge_color,
            interned,
            max_r: system.witness_max_r(),
        })
    }

    pub fn system(&self) -> &TileSystem {
        &self.system
    }

    pub fn host(&self) -> HostInstance {
        self.host
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile(&self, id: u32) -> &Tile {
        &self.tiles[id as usize]
    }

    pub fn h1_count(&self) -> usize {
        self.h1_count
    }

    pub(crate) fn candidates(&self, e: EdgeId, c: Color) -> &[u32] {
        self.by_edge_color.get(&(e, c)).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn disjoint(&self, a: u32, b: u32) -> bool {
        sorted_disjoint(&self.interned[a as usize], &self.interned[b as usize])
    }

    fn target_copies(&self) -> Vec<TargetCopy> {
        match self.host.kind {
            HostKind::Bipartite => (1..=self.max_r)
                .flat_map(|r| self.host.enumerate_target_copies(r).expect("r <= t"))
                .collect(),
            HostKind::Hypergraph => self.host.enumerate_target_copies(2).expect("grid"),
        }
    }

    /// Every irreducible conflict, keyed by tile set, with minimality decided
    /// against the full list.
    pub fn catalogue(&self) -> Catalogue {
        let mut found: HashMap<Vec<u32>, Vec<Witness>> = HashMap::new();
        let mut partitions: HashMap<usize, Vec<(Vec<usize>, usize)>> = HashMap::new();
        let colors: Vec<Color> = (0..self.palette.size()).collect();
        for copy in self.target_copies() {
            let m = copy.edges.len();
            let parts = partitions.entry(copy.width()).or_insert_with(|| {
                set_partitions(m)
                    .into_iter()
                    .filter(|rgs| {
                        let blocks = rgs.iter().max().map_or(0, |&b| b + 1);
                        let even = (0..blocks).all(|b| rgs.iter().filter(|&&x| x == b).count() % 2 == 0);
                        let labels: Vec<Color> = rgs.iter().map(|&b| b as Color).collect();
                        even && BadCopy::from_colors(&copy, &labels).is_some_and(|bad| bad.is_irreducible())
                    })
                    .map(|rgs| {
                        let blocks = rgs.iter().max().map_or(0, |&b| b + 1);
                        (rgs, blocks)
                    })
                    .collect()
            });
            for (rgs, blocks) in parts.iter() {
                let mut assign = Vec::with_capacity(*blocks);
                self.assign_colors(&copy, rgs, *blocks, &colors, &mut assign, &mut found);
            }
        }
        let mut keys: Vec<&Vec<u32>> = found.keys().collect();
        keys.sort();
        let mut conflicts = Vec::with_capacity(keys.len());
        for key in keys {
            let m = key.len();
            let full = (1u32 << m) - 1;
            let minimal = (1..full).filter(|s| s.count_ones() >= 2).all(|s| {
                let sub: Vec<u32> = (0..m).filter(|i| s & (1 << i) != 0).map(|i| key[i]).collect();
                !found.contains_key(&sub)
            });
            let j2 = key.iter().filter(|&&id| id as usize >= self.h1_count).count();
            let j1 = m - j2;
            let hyper_type = match (self.host.kind, j2) {
                (HostKind::Bipartite, _) | (_, 0) => HyperType::NotApplicable,
                (_, _) if j1 > 0 => HyperType::Type1,
                _ => HyperType::Type2,
            };
            conflicts.push(Conflict {
                tile_ids: key.clone(),
                signature: (j1, j2),
                witnesses: found[key].clone(),
                minimal,
                hyper_type,
            });
        }
        Catalogue { conflicts }
    }

    fn assign_colors(
        &self,
        copy: &TargetCopy,
        rgs: &[usize],
        blocks: usize,
        colors: &[Color],
        assign: &mut Vec<Color>,
        found: &mut HashMap<Vec<u32>, Vec<Witness>>,
    ) {
        if assign.len() == blocks {
            let edge_colors: Vec<Color> = rgs.iter().map(|&b| assign[b]).collect();
            if copy.edges.iter().zip(&edge_colors).any(|(&e, &c)| self.candidates(e, c).is_empty()) {
                return;
            }
            let mut chosen = Vec::new();
            let mut per_edge = Vec::with_capacity(copy.edges.len());
            self.assign_tiles(copy, &edge_colors, &mut chosen, &mut per_edge, found);
            return;
        }
        for &c in colors {
            if assign.contains(&c) {
                continue;
            }
            assign.push(c);
            self.assign_colors(copy, rgs, blocks, colors, assign, found);
            assign.pop();
        }
    }

    fn assign_tiles(
        &self,
        copy: &TargetCopy,
        edge_colors: &[Color],
        chosen: &mut Vec<u32>,
        per_edge: &mut Vec<u32>,
        found: &mut HashMap<Vec<u32>, Vec<Witness>>,
    ) {
        let i = per_edge.len();
        if i == copy.edges.len() {
            if chosen.len() < 2 {
                return;
            }
            let mut key = chosen.clone();
            key.sort_unstable();
            let owners = per_edge.iter().map(|id| key.binary_search(id).expect("chosen")).collect();
            let bad = BadCopy::from_colors(copy, edge_colors).expect("even partition");
            found.entry(key).or_default().push(Witness { bad, colors: edge_colors.to_vec(), owners });
            return;
        }
        for &id in self.candidates(copy.edges[i], edge_colors[i]) {
            let fresh = !chosen.contains(&id);
            if fresh && !chosen.iter().all(|&o| self.disjoint(id, o)) {
                continue;
            }
            if fresh {
                chosen.push(id);
            }
            per_edge.push(id);
            self.assign_tiles(copy, edge_colors, chosen, per_edge, found);
            per_edge.pop();
            if fresh {
                chosen.pop();
            }
        }
    }

    pub fn dump(&self, conflict: &Conflict) -> ConflictDump {
        ConflictDump {
            system: conflict.system(),
            signature: conflict.signature,
            minimal: conflict.minimal,
            hyper_type: conflict.hyper_type,
            tiles: conflict.tile_ids.iter().map(|&id| self.system.dump_tile(self.tile(id))).collect(),
            witnesses: conflict
                .witnesses
                .iter()
                .map(|w| WitnessDump {
                    shape: copy_label(&w.bad.copy),
                    copy: w.bad.copy.to_string(),
                    edges: w.bad.copy.edges.clone(),
                    colors: w.colors.clone(),
                    owners: w.owners.clone(),
                })
                .collect(),
        }
    }

    /// Codegree bounds for the `C` and `D` systems of this instance.
    pub fn codegree_report(&self, catalogue: &Catalogue) -> ConditionReport {
        let d = self.system.d();
        let df = d.to_f64();
        let eps = self.system.epsilon();
        let ell = self.system.ell();
        let n2 = self.palette.n2 as f64;
        let mut checks = Vec::new();

        let mut by_size: BTreeMap<usize, Vec<&Conflict>> = BTreeMap::new();
        for c in catalogue.c_system() {
            by_size.entry(c.size()).or_default().push(c);
        }
        for (&j, list) in &by_size {
            for jp in 1..j {
                let (max, arg) = max_subset_count(list.iter().map(|c| c.tile_ids.as_slice()), jp);
                let (name, expr, bound) = if jp == 1 {
                    (
                        format!("C2 Delta(C^({j}))"),
                        format!("l*d^({j}-1) = {ell}*{d}^{}", j - 1),
                        ell as f64 * df.powi(j as i32 - 1),
                    )
                } else {
                    (
                        format!("C3 Delta_{jp}(C^({j}))"),
                        format!("d^({j}-{jp}-eps) = {d}^({}-{eps:.6})", j - jp),
                        df.powf(j as f64 - jp as f64 - eps),
                    )
                };
                let mut check = BoundCheck::new(name, max as f64, Relation::AtMost, expr.clone(), expr, bound);
                if let Some(a) = arg {
                    check = check.with_witness(format!("tiles {a:?}"));
                }
                checks.push(check);
            }
        }

        let mut by_sig: BTreeMap<(usize, usize), Vec<&Conflict>> = BTreeMap::new();
        for c in catalogue.d_system() {
            by_sig.entry(c.signature).or_default().push(c);
        }
        for (&(j1, j2), list) in &by_sig {
            let tail = format!("n2^{j2}");
            let reserve = n2.powi(j2 as i32);
            let mut at_x: HashMap<EdgeId, u64> = HashMap::new();
            let mut at_xy: HashMap<(EdgeId, EdgeId), u64> = HashMap::new();
            let mut at_xf: HashMap<(EdgeId, Vec<u32>), u64> = HashMap::new();
            for c in list {
                let (h1, h2): (Vec<u32>, Vec<u32>) =
                    c.tile_ids.iter().partition(|&&id| (id as usize) < self.h1_count);
                let xs: Vec<EdgeId> = h2.iter().map(|&id| self.tile(id).colored_edges[0]).collect();
                for (i, &x) in xs.iter().enumerate() {
                    *at_x.entry(x).or_insert(0) += 1;
                    for &y in &xs[i + 1..] {
                        let key = if x < y { (x, y) } else { (y, x) };
                        *at_xy.entry(key).or_insert(0) += 1;
                    }
                    for jp in 1..=j1 {
                        for_each_sub(&h1, jp, |f| {
                            *at_xf.entry((x, f.to_vec())).or_insert(0) += 1;
                        });
                    }
                }
            }
            let (max_x, arg_x) = argmax(&at_x);
            let expr = format!("d^(j1+eps^4)*{tail}");
            let sub = format!("{d}^({j1}+{:.3e})*{}^{j2}", eps.powi(4), self.palette.n2);
            let bound = df.powf(j1 as f64 + eps.powi(4)) * reserve;
            let mut check = BoundCheck::new(format!("D2 |D_x^({j1},{j2})|"), max_x as f64, Relation::AtMost, expr, sub, bound);
            if let Some(x) = arg_x {
                check = check.with_witness(format!("x = {}", TileVertex::edge_slot(&self.host, x)));
            }
            checks.push(check);
            for jp in 1..=j1 {
                let mut best = (0u64, None);
                for ((x, f), &v) in &at_xf {
                    if f.len() == jp && v > best.0 {
                        best = (v, Some((*x, f.clone())));
                    }
                }
                let expr = format!("d^(j1-j'-eps)*{tail}");
                let sub = format!("{d}^({}-{eps:.6})*{}^{j2}", j1 - jp, self.palette.n2);
                let bound = df.powf(j1 as f64 - jp as f64 - eps) * reserve;
                let mut check = BoundCheck::new(
                    format!("D3 Delta_{jp},0(D_x^({j1},{j2}))"),
                    best.0 as f64,
                    Relation::AtMost,
                    expr,
                    sub,
                    bound,
                );
                if let Some((x, f)) = best.1 {
                    check = check.with_witness(format!("x = {} F = {f:?}", TileVertex::edge_slot(&self.host, x)));
                }
                checks.push(check);
            }
            let (max_xy, arg_xy) = argmax(&at_xy);
            let expr = format!("d^(j1-eps)*{tail}");
            let sub = format!("{d}^({j1}-{eps:.6})*{}^{j2}", self.palette.n2);
            let bound = df.powf(j1 as f64 - eps) * reserve;
            let mut check =
                BoundCheck::new(format!("D4 |D_x,y^({j1},{j2})|"), max_xy as f64, Relation::AtMost, expr, sub, bound);
            if let Some((x, y)) = arg_xy {
                check = check.with_witness(format!(
                    "x = {} y = {}",
                    TileVertex::edge_slot(&self.host, x),
                    TileVertex::edge_slot(&self.host, y)
                ));
            }
            checks.push(check);
        }

        ConditionReport {
            system: format!("conflicts {}", self.system.describe()),
            parameters: vec![
                ("d".into(), d.to_string()),
                ("epsilon".into(), format!("{eps}")),
                ("ell".into(), ell.to_string()),
                ("n2".into(), self.palette.n2.to_string()),
                ("C".into(), catalogue.c_system().count().to_string()),
                ("D".into(), catalogue.d_system().count().to_string()),
            ],
            checks,
        }
    }

    /// `|D_x^(j1,j2)|` for the edge slot `x`.
    pub fn d_x_count(&self, catalogue: &Catalogue, x: EdgeId, signature: (usize, usize)) -> usize {
        catalogue
            .d_system()
            .filter(|c| c.signature == signature)
            .filter(|c| {
                c.tile_ids.iter().any(|&id| {
                    let t = self.tile(id);
                    t.kind == TileKind::H2 && t.colored_edges[0] == x
                })
            })
            .count()
    }
}

fn argmax<K: Clone + Ord>(map: &HashMap<K, u64>) -> (u64, Option<K>) {
    let mut best: (u64, Option<K>) = (0, None);
    for (k, &v) in map {
        let better = v > best.0 || (v == best.0 && best.1.as_ref().is_some_and(|b| k < b));
        if better {
            best = (v, Some(k.clone()));
        }
    }
    best
}

fn for_each_sub(items: &[u32], size: usize, mut f: impl FnMut(&[u32])) {
    if size > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf = Vec::with_capacity(size);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(&buf);
        if !crate::combinatorics::next_combination(&mut idx, items.len()) {
            break;
        }
    }
}

fn max_subset_count<'a>(sets: impl Iterator<Item = &'a [u32]>, size: usize) -> (u64, Option<Vec<u32>>) {
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for s in sets {
        for_each_sub(s, size, |f| *counts.entry(f.to_vec()).or_insert(0) += 1);
    }
    argmax(&counts)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalogue {
    pub conflicts: Vec<Conflict>,
}

impl Catalogue {
    pub fn c_system(&self) -> impl Iterator<Item = &Conflict> {
        self.conflicts.iter().filter(|c| c.system() == Some(ConflictSystem::C))
    }

    pub fn d_system(&self) -> impl Iterator<Item = &Conflict> {
        self.conflicts.iter().filter(|c| c.system() == Some(ConflictSystem::D))
    }

    /// `|C^(j)|`.
    pub fn c_count(&self, j: usize) -> usize {
        self.c_system().filter(|c| c.size() == j).count()
    }

    /// `|D^(j1,j2)|`.
    pub fn d_count(&self, j1: usize, j2: usize) -> usize {
        self.d_system().filter(|c| c.signature == (j1, j2)).count()
    }

    /// Minimal conflict counts by system and signature.
    pub fn sizes(&self) -> BTreeMap<(ConflictSystem, usize, usize), usize> {
        let mut out = BTreeMap::new();
        for c in &self.conflicts {
            if let Some(s) = c.system() {
                *out.entry((s, c.signature.0, c.signature.1)).or_insert(0) += 1;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDump {
    pub shape: String,
    pub copy: String,
    pub edges: Vec<EdgeId>,
    pub colors: Vec<Color>,
    pub owners: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictDump {
    pub system: Option<ConflictSystem>,
    pub signature: (usize, usize),
    pub minimal: bool,
    pub hyper_type: HyperType,
    pub tiles: Vec<String>,
    pub witnesses: Vec<WitnessDump>,
}
