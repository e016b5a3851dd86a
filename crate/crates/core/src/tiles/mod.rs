//! Tile hypergraphs. An H1 tile colors a labeled transversal system with one
//! main color; an H2 tile colors a single host edge with one reserve color.
//!
//! Both host kinds share one representation. A tile-vertex is either a
//! `Slot` (a k-set of host vertices: a host edge, or a set with one part
//! doubled) or a `Colored` (k-1)-set carrying a color. For `K_{n,n}` these are
//! exactly the edge slots and same-side pairs of `U` and the colored vertex
//! copies `v^i` of `V`/`W`, so the graph system with parameter `t` is the
//! two-part transversal system with parts of size `t+1`.

pub mod graph;
pub mod hyper;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::Palette;
use crate::error::{Error, Result};
use crate::host::{Color, EdgeId, HostInstance, VertexSet};
use crate::report::{BoundCheck, ConditionReport, ExactRatio, Relation};

pub use graph::{GraphTileConfig, GraphTileTemplate};
pub use hyper::{HyperTileConfig, TransversalTemplate};

use crate::combinatorics::binomial;

/// Default cap on the number of tiles an exhaustive enumeration may produce.
pub const DEFAULT_GUARD: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileVertex {
    Slot(VertexSet),
    Colored { set: VertexSet, color: Color },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    /// A host edge (`xy` in the graph case, an `A_k` transversal otherwise).
    EdgeSlot,
    /// A same-side pair (graph) or a k-set with one part doubled.
    DoubledSet,
    /// A vertex copy / (k-1)-set with a main-palette color.
    MainColored,
    /// A vertex copy / (k-1)-set with a reserve-palette color.
    ReserveColored,
}

impl TileVertex {
    pub fn kind(&self, host: &HostInstance, palette: &Palette) -> VertexKind {
        match self {
            TileVertex::Slot(set) => {
                let distinct_parts = set.windows(2).all(|w| host.part_of(w[0]) != host.part_of(w[1]));
                if distinct_parts && set.len() == host.k {
                    VertexKind::EdgeSlot
                } else {
                    VertexKind::DoubledSet
                }
            }
            TileVertex::Colored { color, .. } => {
                if palette.is_main(*color) {
                    VertexKind::MainColored
                } else {
                    VertexKind::ReserveColored
                }
            }
        }
    }

    pub fn edge_slot(host: &HostInstance, e: EdgeId) -> TileVertex {
        TileVertex::Slot(host.edge_vertices(e))
    }
}

impl fmt::Display for TileVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TileVertex::Slot(s) => write!(f, "{:?}", s.as_slice()),
            TileVertex::Colored { set, color } => write!(f, "{:?}^{}", set.as_slice(), color),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileKind {
    H1,
    H2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileSource {
    Transversal(TransversalTemplate),
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tile {
    pub kind: TileKind,
    pub color: Color,
    /// Sorted, duplicate-free.
    pub vertices: Vec<TileVertex>,
    /// Host edges this tile colors, sorted.
    pub colored_edges: Vec<EdgeId>,
    pub source: TileSource,
}

impl Tile {
    pub fn uniformity(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: &TileVertex) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    pub fn colors_edge(&self, e: EdgeId) -> bool {
        self.colored_edges.binary_search(&e).is_ok()
    }

    pub fn is_disjoint(&self, other: &Tile) -> bool {
        sorted_disjoint(&self.vertices, &other.vertices)
    }
}

pub(crate) fn sorted_disjoint<T: Ord>(a: &[T], b: &[T]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Builds the H1 tile of a labeled transversal system: every k-subset of the
/// system's vertices with pairwise distinct labels and at most one part
/// doubled (as `Slot`s), and every label-distinct (k-1)-set with one part
/// omitted (as `Colored` with the tile color). The label-distinct k-sets with
/// one vertex per part are the colored host edges.
pub(crate) fn build_transversal_tile(host: &HostInstance, template: &TransversalTemplate) -> Tile {
    let k = host.k;
    let parts = &template.parts;
    let s = parts[0].len();
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::new();
    let mut labels = vec![usize::MAX; k];
    let mut used = vec![false; s];

    // Assigns distinct labels to parts in `order`, calling `visit` on each full assignment.
    fn assign(
        order: &[usize],
        depth: usize,
        labels: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize], &[bool]),
    ) {
        if depth == order.len() {
            visit(labels, used);
            return;
        }
        for l in 0..used.len() {
            if !used[l] {
                used[l] = true;
                labels[order[depth]] = l;
                assign(order, depth + 1, labels, used, visit);
                used[l] = false;
            }
        }
        labels[order[depth]] = usize::MAX;
    }

    let all: Vec<usize> = (0..k).collect();
    assign(&all, 0, &mut labels, &mut used, &mut |labels, _| {
        let set: VertexSet = (0..k).map(|p| parts[p][labels[p]]).collect();
        edges.push(host.edge_id(&set));
        vertices.insert(TileVertex::Slot(set));
    });

    for omitted in 0..k {
        let rest: Vec<usize> = (0..k).filter(|&p| p != omitted).collect();
        assign(&rest, 0, &mut labels, &mut used, &mut |labels, used| {
            let base: VertexSet = rest.iter().map(|&p| parts[p][labels[p]]).collect();
            vertices.insert(TileVertex::Colored { set: base.clone(), color: template.color });
            // double one present part with a fresh, larger label
            for &d in &rest {
                for extra in labels[d] + 1..s {
                    if used[extra] {
                        continue;
                    }
                    let mut set = base.clone();
                    set.push(parts[d][extra]);
                    set.sort_unstable();
                    vertices.insert(TileVertex::Slot(set));
                }
            }
        });
    }
    edges.sort_unstable();
    Tile {
        kind: TileKind::H1,
        color: template.color,
        vertices: vertices.into_iter().collect(),
        colored_edges: edges,
        source: TileSource::Transversal(template.clone()),
    }
}

/// `e_{a,i}`: the edge slot plus each (k-1)-subset of the edge with color `i`.
pub fn build_h2_tile(host: &HostInstance, palette: &Palette, edge: EdgeId, color: Color) -> Result<Tile> {
    if edge >= host.edge_count() {
        return Err(Error::InvalidParameter(format!("edge {edge} out of range")));
    }
    if !palette.is_reserve(color) {
        return Err(Error::InvalidParameter(format!("color {color} is not a reserve color")));
    }
    let verts = host.edge_vertices(edge);
    let mut vertices = Vec::with_capacity(host.k + 1);
    vertices.push(TileVertex::Slot(verts.clone()));
    for skip in 0..verts.len() {
        let set: VertexSet = verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
        vertices.push(TileVertex::Colored { set, color });
    }
    vertices.sort();
    Ok(Tile { kind: TileKind::H2, color, vertices, colored_edges: vec![edge], source: TileSource::Edge(edge) })
}

/// H2 measurements: `delta_p` over edge slots, `delta_r` over reserve-colored
/// vertices, and the largest slot/reserve-vertex co-degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Stats {
    pub tiles: usize,
    pub delta_p: u64,
    pub delta_r: u64,
    pub delta_r_witness: Option<String>,
    pub max_pair_degree: u64,
}

/// Either tile system, behind one interface for the conflict engine and matcher.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TileSystem {
    Graph(GraphTileConfig),
    Hyper(HyperTileConfig),
}

impl TileSystem {
    pub fn host(&self) -> HostInstance {
        match self {
            TileSystem::Graph(c) => c.host(),
            TileSystem::Hyper(c) => c.host(),
        }
    }

    pub fn palette(&self) -> Palette {
        match self {
            TileSystem::Graph(c) => c.palette,
            TileSystem::Hyper(c) => c.palette,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            TileSystem::Graph(c) => c.epsilon,
            TileSystem::Hyper(c) => c.epsilon,
        }
    }

    pub fn delta(&self) -> f64 {
        match self {
            TileSystem::Graph(c) => c.delta,
            TileSystem::Hyper(c) => c.delta,
        }
    }

    pub fn d(&self) -> ExactRatio {
        match self {
            TileSystem::Graph(c) => c.d(),
            TileSystem::Hyper(c) => c.d(),
        }
    }

    /// Maximum conflict size.
    pub fn ell(&self) -> usize {
        match self {
            TileSystem::Graph(c) => c.ell(),
            TileSystem::Hyper(c) => c.ell(),
        }
    }

    pub fn guard(&self) -> u128 {
        match self {
            TileSystem::Graph(c) => c.guard,
            TileSystem::Hyper(c) => c.guard,
        }
    }

    /// Largest witness `K_{2,r}` used by the conflict checks facing the matcher.
    pub fn witness_max_r(&self) -> usize {
        match self {
            TileSystem::Graph(c) => c.t,
            TileSystem::Hyper(_) => 2,
        }
    }

    pub fn h1_count(&self) -> u128 {
        match self {
            TileSystem::Graph(c) => c.h1_tile_count(),
            TileSystem::Hyper(c) => c.h1_tile_count(),
        }
    }

    pub fn enumerate_h1(&self) -> Result<Vec<Tile>> {
        match self {
            TileSystem::Graph(c) => graph::enumerate_h1_tiles(c),
            TileSystem::Hyper(c) => hyper::enumerate_hyper_tiles(c),
        }
    }

    /// A uniformly random H1 tile, or `None` when H1 is empty.
    pub fn sample_h1<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Tile> {
        match self {
            TileSystem::Graph(c) => graph::sample_h1_tile(c, rng),
            TileSystem::Hyper(c) => hyper::sample_hyper_tile(c, rng),
        }
    }

    pub fn h2_tile(&self, edge: EdgeId, color: Color) -> Result<Tile> {
        build_h2_tile(&self.host(), &self.palette(), edge, color)
    }

    pub fn enumerate_h2(&self) -> Vec<Tile> {
        let host = self.host();
        let palette = self.palette();
        let mut out = Vec::with_capacity(host.edge_count() * palette.n2 as usize);
        for e in 0..host.edge_count() {
            for c in palette.reserve_colors() {
                out.push(build_h2_tile(&host, &palette, e, c).expect("reserve color"));
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        match self {
            TileSystem::Graph(c) => format!("graph n={} t={}", c.n, c.t),
            TileSystem::Hyper(c) => format!("hypergraph n={} k={}", c.n, c.k),
        }
    }

    /// One-line dump of a tile in this system's format.
    pub fn dump_tile(&self, tile: &Tile) -> String {
        match self {
            TileSystem::Graph(_) => graph::dump_tile(tile),
            TileSystem::Hyper(_) => hyper::dump_tile(tile),
        }
    }
}

impl TileSystem {
    /// `|P|`: host edges plus doubled sets.
    pub fn p_size(&self) -> u128 {
        let h = self.host();
        let (n, k) = (h.n as u128, h.k as u32);
        n.pow(k) + (k as u128) * (k as u128 - 1) * binomial(h.n as u64, 2) * n.pow(k - 2)
    }

    /// `|Q|`: main-colored (k-1)-sets.
    pub fn q_size(&self) -> u128 {
        let h = self.host();
        self.palette().n1 as u128 * h.k as u128 * (h.n as u128).pow(h.k as u32 - 1)
    }

    /// Degree statistics of H2, which is small enough to always enumerate.
    pub fn h2_stats(&self) -> H2Stats {
        let host = self.host();
        let h2 = self.enumerate_h2();
        let mut slot_deg: HashMap<EdgeId, u64> = HashMap::new();
        let mut r_deg: HashMap<&TileVertex, u64> = HashMap::new();
        let mut pair_deg: HashMap<(EdgeId, &TileVertex), u64> = HashMap::new();
        for tile in &h2 {
            let e = tile.colored_edges[0];
            *slot_deg.entry(e).or_insert(0) += 1;
            for v in &tile.vertices {
                if let TileVertex::Colored { .. } = v {
                    *r_deg.entry(v).or_insert(0) += 1;
                    *pair_deg.entry((e, v)).or_insert(0) += 1;
                }
            }
        }
        let delta_p = if slot_deg.len() < host.edge_count() { 0 } else { slot_deg.values().copied().min().unwrap_or(0) };
        let (delta_r, delta_r_witness) = r_deg
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(v, &c)| (c, Some(v.to_string())))
            .unwrap_or((0, None));
        H2Stats {
            tiles: h2.len(),
            delta_p,
            delta_r,
            delta_r_witness,
            max_pair_degree: pair_deg.values().copied().max().unwrap_or(0),
        }
    }

    /// Measured degree quantities of H1 and H2 against the matching-theorem
    /// bounds at this `(n, d, eps, delta)`. Informational only.
    pub fn condition_report(&self) -> Result<ConditionReport> {
        let tiles = self.enumerate_h1()?;
        let host = self.host();
        let palette = self.palette();
        let d = self.d();
        let df = d.to_f64();
        let eps = self.epsilon();
        let dtag = format!("{d}");

        let deg = degree_table(&tiles);
        let (mut p_seen, mut p_min, mut q_seen, mut q_min, mut max_all) = (0u128, u64::MAX, 0u128, u64::MAX, 0u64);
        let (mut p_arg, mut q_arg, mut max_arg) = (None, None, None);
        for (v, &c) in &deg {
            match v.kind(&host, &palette) {
                VertexKind::EdgeSlot | VertexKind::DoubledSet => {
                    p_seen += 1;
                    if c < p_min {
                        p_min = c;
                        p_arg = Some(v);
                    }
                }
                VertexKind::MainColored | VertexKind::ReserveColored => {
                    q_seen += 1;
                    if c < q_min {
                        q_min = c;
                        q_arg = Some(v);
                    }
                }
            }
            if c > max_all {
                max_all = c;
                max_arg = Some(v);
            }
        }
        // vertices in no tile have degree zero
        if p_seen < self.p_size() {
            p_min = 0;
            p_arg = None;
        }
        if q_seen < self.q_size() {
            q_min = 0;
            q_arg = None;
        }
        let (codeg, codeg_pair) = pair_codegree_max(&tiles);

        let h2 = self.h2_stats();
        let (h2_min, r_max, r_arg, pair_max) = (h2.delta_p, h2.delta_r, h2.delta_r_witness.clone(), h2.max_pair_degree);

        let lower = df - d.powf(1.0 - eps);
        let h2f = h2_min as f64;
        let eps4 = eps.powi(4);
        let mut checks = vec![
            BoundCheck::new("H1 delta_P(H1)", p_min as f64, Relation::AtLeast, "(1-d^-eps)*d", format!("(1-({dtag})^-{eps:.6})*{dtag}"), lower),
            BoundCheck::new("H1 delta_Q(H1)", q_min as f64, Relation::AtLeast, "(1-d^-eps)*d", format!("(1-({dtag})^-{eps:.6})*{dtag}"), lower),
            BoundCheck::new("H1 Delta(H1)", max_all as f64, Relation::AtMost, "d", dtag.clone(), df)
                .with_exact_pass(d.ge_int(max_all as u128)),
            BoundCheck::new("H2 Delta_2(H1)", codeg as f64, Relation::AtMost, "d^(1-eps)", format!("({dtag})^(1-{eps:.6})"), d.powf(1.0 - eps)),
            BoundCheck::new("H3 Delta_R(H2)", r_max as f64, Relation::AtMost, "d^(eps^4)*delta_P(H2)", format!("({dtag})^{eps4:.3e}*{h2_min}"), d.powf(eps4) * h2f),
            BoundCheck::new("H3 delta_P(H2)", h2f, Relation::AtLeast, "n^delta", format!("{}^{:.6}", host.n, self.delta()), (host.n as f64).powf(self.delta())),
            BoundCheck::new("H4 max d(x,v)", pair_max as f64, Relation::AtMost, "d^-eps*delta_P(H2)", format!("({dtag})^-{eps:.6}*{h2_min}"), d.powf(-eps) * h2f),
            BoundCheck::new("|P| lower", self.p_size() as f64, Relation::AtLeast, "d^eps", format!("({dtag})^{eps:.6}"), d.powf(eps)),
            BoundCheck::new(
                "|P+Q| upper",
                (self.p_size() + self.q_size()) as f64,
                Relation::AtMost,
                "exp(d^(eps^3))",
                format!("exp(({dtag})^{:.3e})", eps.powi(3)),
                d.powf(eps.powi(3)).exp(),
            ),
        ];
        if let Some(v) = p_arg {
            checks[0] = checks[0].clone().with_witness(v.to_string());
        }
        if let Some(v) = q_arg {
            checks[1] = checks[1].clone().with_witness(v.to_string());
        }
        if let Some(v) = max_arg {
            checks[2] = checks[2].clone().with_witness(v.to_string());
        }
        if let Some((a, b)) = codeg_pair {
            checks[3] = checks[3].clone().with_witness(format!("{a} {b}"));
        }
        if let Some(v) = r_arg {
            checks[4] = checks[4].clone().with_witness(v);
        }
        let mut parameters = vec![("n".to_string(), host.n.to_string())];
        match self {
            TileSystem::Graph(c) => parameters.push(("t".into(), c.t.to_string())),
            TileSystem::Hyper(c) => parameters.push(("k".into(), c.k.to_string())),
        }
        parameters.extend([
            ("d".to_string(), dtag),
            ("epsilon".to_string(), format!("{eps}")),
            ("delta".to_string(), format!("{}", self.delta())),
            ("n1".to_string(), palette.n1.to_string()),
            ("n2".to_string(), palette.n2.to_string()),
            ("ell".to_string(), self.ell().to_string()),
            ("h1_tiles".to_string(), tiles.len().to_string()),
            ("h2_tiles".to_string(), h2.tiles.to_string()),
        ]);
        Ok(ConditionReport { system: self.describe(), parameters, checks })
    }
}

/// Degrees of every H1 tile-vertex, by exhaustive enumeration.
pub fn degree_table(tiles: &[Tile]) -> HashMap<TileVertex, u64> {
    let mut deg = HashMap::new();
    for tile in tiles {
        for v in &tile.vertices {
            *deg.entry(v.clone()).or_insert(0) += 1;
        }
    }
    deg
}

/// Maximum number of tiles sharing a pair of tile-vertices, with an attaining pair.
pub fn pair_codegree_max(tiles: &[Tile]) -> (u64, Option<(TileVertex, TileVertex)>) {
    let mut ids: HashMap<&TileVertex, u32> = HashMap::new();
    let mut names: Vec<&TileVertex> = Vec::new();
    let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
    let mut local = Vec::new();
    for tile in tiles {
        local.clear();
        for v in &tile.vertices {
            let next = names.len() as u32;
            let id = *ids.entry(v).or_insert_with(|| {
                names.push(v);
                next
            });
            local.push(id);
        }
        local.sort_unstable();
        for i in 0..local.len() {
            for j in i + 1..local.len() {
                *counts.entry((local[i], local[j])).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .map(|((a, b), c)| (c, Some((names[a as usize].clone(), names[b as usize].clone()))))
        .unwrap_or((0, None))
}

pub(crate) fn check_guard(what: &'static str, needed: u128, guard: u128) -> Result<()> {
    if needed > guard {
        return Err(Error::GuardExceeded { what, needed, guard });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_tile_shape() {
        let host = HostInstance::bipartite(4, 2).unwrap();
        let palette = Palette::new(2, 4);
        let t = build_h2_tile(&host, &palette, 5, 2).unwrap();
        assert_eq!(t.uniformity(), 3);
        assert_eq!(t.colored_edges, vec![5]);
        assert!(build_h2_tile(&host, &palette, 5, 1).is_err());
    }

    #[test]
    fn h2_tiles_sharing_a_vertex_collide() {
        let host = HostInstance::bipartite(4, 2).unwrap();
        let palette = Palette::new(2, 4);
        // edges 0 = (0,4) and 1 = (0,5) share x = 0
        let a = build_h2_tile(&host, &palette, 0, 3).unwrap();
        let b = build_h2_tile(&host, &palette, 1, 3).unwrap();
        assert!(!a.is_disjoint(&b));
        let shared = TileVertex::Colored { set: [0].into_iter().collect(), color: 3 };
        assert!(a.contains(&shared) && b.contains(&shared));
        // edge 5 = (1,5) is disjoint from edge 0
        let c = build_h2_tile(&host, &palette, 5, 3).unwrap();
        assert!(a.is_disjoint(&c));
    }

    #[test]
    fn hyper_h2_tile_has_k_plus_one_vertices() {
        let host = HostInstance::hypergraph(3, 3).unwrap();
        let palette = Palette::new(2, 3);
        let t = build_h2_tile(&host, &palette, 7, 4).unwrap();
        assert_eq!(t.uniformity(), 4);
    }
}
