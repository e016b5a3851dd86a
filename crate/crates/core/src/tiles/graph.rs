//! Tiles for `K_{n,n}`: H1 tiles are monochromatic copies of
//! `K_{t+1,t+1}` minus a perfect matching.

use itertools::Itertools;
use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hyper::{count_containing, for_each_template, random_template, template_count, validate_vertex, TransversalTemplate};
use super::{build_transversal_tile, check_guard, Tile, TileKind, TileSource, TileVertex, VertexKind, DEFAULT_GUARD};
use crate::coloring::Palette;
use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::host::{Color, HostInstance, Vertex};
use crate::report::ExactRatio;

/// `side_x` and `side_y` sorted; `removed[a]` is the index in `side_y` of the
/// partner of `side_x[a]` in the removed perfect matching.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphTileTemplate {
    pub side_x: Vec<Vertex>,
    pub side_y: Vec<Vertex>,
    pub removed: Vec<usize>,
    pub color: Color,
}

impl GraphTileTemplate {
    pub fn validate(&self, host: &HostInstance) -> Result<()> {
        let s = host.t + 1;
        if self.side_x.len() != s || self.side_y.len() != s || self.removed.len() != s {
            return Err(Error::MalformedTemplate(format!("sides and matching must have {s} entries")));
        }
        for (side, part) in [(&self.side_x, 0), (&self.side_y, 1)] {
            if side.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::MalformedTemplate("sides must be sorted and distinct".into()));
            }
            if side.iter().any(|&v| v as usize >= host.vertex_count() || host.part_of(v) != part) {
                return Err(Error::MalformedTemplate("side vertex in the wrong part".into()));
            }
        }
        let mut seen = vec![false; s];
        for &r in &self.removed {
            if r >= s || std::mem::replace(&mut seen[r], true) {
                return Err(Error::MalformedTemplate("removed matching is not a bijection".into()));
            }
        }
        Ok(())
    }

    /// Labels: `side_x[l]` and its removed partner share label `l`.
    pub fn to_transversal(&self) -> TransversalTemplate {
        TransversalTemplate {
            parts: vec![self.side_x.clone(), self.removed.iter().map(|&r| self.side_y[r]).collect()],
            color: self.color,
        }
    }

    pub fn from_transversal(tpl: &TransversalTemplate) -> GraphTileTemplate {
        let side_x = tpl.parts[0].clone();
        let mut side_y = tpl.parts[1].clone();
        side_y.sort_unstable();
        let removed = tpl.parts[1].iter().map(|y| side_y.binary_search(y).expect("member")).collect();
        GraphTileTemplate { side_x, side_y, removed, color: tpl.color }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphTileConfig {
    pub n: usize,
    pub t: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub palette: Palette,
    pub guard: u128,
}

impl GraphTileConfig {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        Self::with_parameters(n, t, None, None)
    }

    pub fn default_epsilon(t: usize) -> f64 {
        1.0 / (2 * t + 3) as f64
    }

    /// Open interval for `delta` given `epsilon`.
    pub fn delta_interval(t: usize, epsilon: f64) -> (f64, f64) {
        (1.0 - (2 * t + 1) as f64 * epsilon.powi(4), 1.0)
    }

    pub fn with_parameters(n: usize, t: usize, epsilon: Option<f64>, delta: Option<f64>) -> Result<Self> {
        HostInstance::bipartite(n, t)?;
        let epsilon = epsilon.unwrap_or_else(|| Self::default_epsilon(t));
        let eps_max = 1.0 / (2 * t + 2) as f64;
        if !(epsilon > 0.0 && epsilon < eps_max) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, {eps_max}), got {epsilon}")));
        }
        let (lo, hi) = Self::delta_interval(t, epsilon);
        let delta = delta.unwrap_or((lo + hi) / 2.0);
        if !(delta > lo && delta < hi) {
            return Err(Error::InvalidParameter(format!("delta must lie in ({lo}, {hi}), got {delta}")));
        }
        Ok(GraphTileConfig { n, t, epsilon, delta, palette: Palette::graph_default(n, t, delta), guard: DEFAULT_GUARD })
    }

    pub fn with_palette(mut self, n1: u32, n2: u32) -> Self {
        self.palette = Palette { n1, n2, delta: None };
        self
    }

    pub fn with_guard(mut self, guard: u128) -> Self {
        self.guard = guard;
        self
    }

    pub fn host(&self) -> HostInstance {
        HostInstance::bipartite(self.n, self.t).expect("validated")
    }

    /// `n^{2t+1} / t!`.
    pub fn d(&self) -> ExactRatio {
        let num = BigUint::from(self.n).pow((2 * self.t + 1) as u32);
        ExactRatio::new(num, BigUint::from(factorial(self.t as u64)))
    }

    pub fn ell(&self) -> usize {
        2 * self.t
    }

    /// `C(n,t+1)^2 (t+1)! n1`.
    pub fn h1_tile_count(&self) -> u128 {
        template_count(&self.host(), self.t + 1, self.palette.n1)
    }
}

pub fn build_h1_tile(config: &GraphTileConfig, template: &GraphTileTemplate) -> Result<Tile> {
    let host = config.host();
    template.validate(&host)?;
    if !config.palette.is_main(template.color) {
        return Err(Error::MalformedTemplate(format!("color {} is not a main color", template.color)));
    }
    Ok(build_transversal_tile(&host, &template.to_transversal()))
}

pub fn enumerate_h1_tiles(config: &GraphTileConfig) -> Result<Vec<Tile>> {
    check_guard("graph H1 enumeration", config.h1_tile_count(), config.guard)?;
    let host = config.host();
    let mut out = Vec::with_capacity(config.h1_tile_count() as usize);
    for_each_template(&host, config.t + 1, config.palette.main_colors(), &mut |tpl| {
        out.push(build_transversal_tile(&host, tpl));
    });
    Ok(out)
}

pub fn sample_h1_tile<R: Rng + ?Sized>(config: &GraphTileConfig, rng: &mut R) -> Option<Tile> {
    let host = config.host();
    random_template(&host, config.t + 1, config.palette.main_colors(), rng).map(|tpl| build_transversal_tile(&host, &tpl))
}

/// Exact H1 degree of `v` by enumerating every tile template.
pub fn h1_degree(config: &GraphTileConfig, v: &TileVertex) -> Result<u64> {
    let host = config.host();
    validate_vertex(&host, v)?;
    check_guard("graph H1 degree", config.h1_tile_count(), config.guard)?;
    Ok(count_containing(&host, config.t + 1, config.palette, v))
}

/// Closed-form H1 degree: colored copy `C(n,t+1) C(n-1,t) (t+1)!`, edge slot
/// `C(n-1,t)^2 t t! n1`, same-side pair `C(n-2,t-1) C(n,t+1) (t+1)! n1`.
pub fn h1_degree_formula(kind: VertexKind, config: &GraphTileConfig) -> u128 {
    let (n, t) = (config.n as u64, config.t as u64);
    let n1 = config.palette.n1 as u128;
    match kind {
        VertexKind::MainColored => binomial(n, t + 1) * binomial(n.saturating_sub(1), t) * factorial(t + 1),
        VertexKind::EdgeSlot => binomial(n.saturating_sub(1), t).pow(2) * t as u128 * factorial(t) * n1,
        VertexKind::DoubledSet if n >= 2 => binomial(n - 2, t - 1) * binomial(n, t + 1) * factorial(t + 1) * n1,
        VertexKind::DoubledSet | VertexKind::ReserveColored => 0,
    }
}

/// `H1 color=<i> X={..} Y={..} M={x:y,..}`, or `H2 edge=<id> color=<i>`.
pub fn dump_tile(tile: &Tile) -> String {
    match (&tile.kind, &tile.source) {
        (TileKind::H1, TileSource::Transversal(tpl)) => {
            let g = GraphTileTemplate::from_transversal(tpl);
            let m = g.side_x.iter().zip(&g.removed).map(|(x, &r)| format!("{}:{}", x, g.side_y[r])).join(",");
            format!(
                "H1 color={} X={{{}}} Y={{{}}} M={{{}}}",
                tile.color,
                g.side_x.iter().join(","),
                g.side_y.iter().join(","),
                m
            )
        }
        (_, TileSource::Edge(e)) => format!("H2 edge={} color={}", e, tile.color),
        _ => format!("{:?}", tile),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn template(n: usize, t: usize) -> GraphTileTemplate {
        let host = HostInstance::bipartite(n, t).unwrap();
        GraphTileTemplate {
            side_x: (0..=t).map(|i| host.vertex(0, i)).collect(),
            side_y: (0..=t).map(|i| host.vertex(1, i)).collect(),
            removed: (0..=t).rev().collect(),
            color: 0,
        }
    }

    #[test]
    fn tile_sizes() {
        for t in 2..=4 {
            let cfg = GraphTileConfig::new(t + 2, t).unwrap();
            let tile = build_h1_tile(&cfg, &template(t + 2, t)).unwrap();
            assert_eq!(tile.uniformity(), 2 * (t + 1) * (t + 1));
            assert_eq!(tile.colored_edges.len(), (t + 1) * (t + 1) - (t + 1));
        }
    }

    #[test]
    fn colored_edges_are_regular() {
        let cfg = GraphTileConfig::new(5, 3).unwrap();
        let host = cfg.host();
        let tile = build_h1_tile(&cfg, &template(5, 3)).unwrap();
        let mut deg = std::collections::HashMap::new();
        for &e in &tile.colored_edges {
            for v in host.edge_vertices(e) {
                *deg.entry(v).or_insert(0) += 1;
            }
        }
        assert_eq!(deg.len(), 8);
        assert!(deg.values().all(|&d| d == 3));
    }

    #[test]
    fn malformed_matching() {
        let cfg = GraphTileConfig::new(4, 2).unwrap();
        let mut tpl = template(4, 2);
        tpl.removed = vec![0, 0, 1];
        assert!(matches!(build_h1_tile(&cfg, &tpl), Err(Error::MalformedTemplate(_))));
    }

    #[test]
    fn enumeration_counts() {
        let small = GraphTileConfig::new(3, 2).unwrap();
        assert_eq!(small.h1_tile_count(), 12);
        assert_eq!(enumerate_h1_tiles(&small).unwrap().len(), 12);
        let cfg = GraphTileConfig::new(6, 2).unwrap();
        assert_eq!(cfg.h1_tile_count(), 7200);
        let tiles = enumerate_h1_tiles(&cfg).unwrap();
        assert_eq!(tiles.len(), 7200);
        let distinct: std::collections::HashSet<_> = tiles.iter().map(|t| (t.color, t.colored_edges.clone())).collect();
        assert_eq!(distinct.len(), 7200);
    }

    #[test]
    fn guard_is_enforced() {
        let cfg = GraphTileConfig::new(6, 2).unwrap().with_guard(100);
        assert!(matches!(enumerate_h1_tiles(&cfg), Err(Error::GuardExceeded { needed: 7200, .. })));
    }

    #[test]
    fn degree_examples() {
        let cfg = GraphTileConfig::new(6, 2).unwrap();
        assert_eq!(h1_degree_formula(VertexKind::MainColored, &cfg), 1200);
        assert_eq!(h1_degree_formula(VertexKind::EdgeSlot, &cfg), 1200);
        assert_eq!(h1_degree_formula(VertexKind::DoubledSet, &cfg), 1440);
        let host = cfg.host();
        let x = host.vertex(0, 2);
        let y = host.vertex(1, 4);
        assert_eq!(h1_degree(&cfg, &TileVertex::Colored { set: [x].into_iter().collect(), color: 1 }).unwrap(), 1200);
        assert_eq!(h1_degree(&cfg, &TileVertex::Slot([x, y].into_iter().collect())).unwrap(), 1200);
        assert_eq!(h1_degree(&cfg, &TileVertex::Slot([x, x + 1].into_iter().collect())).unwrap(), 1440);
    }

    #[test]
    fn dump_format() {
        let cfg = GraphTileConfig::new(3, 2).unwrap();
        let tile = build_h1_tile(&cfg, &template(3, 2)).unwrap();
        assert_eq!(dump_tile(&tile), "H1 color=0 X={0,1,2} Y={3,4,5} M={0:5,1:4,2:3}");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sample_h1_tile(&cfg, &mut rng).unwrap();
        assert_eq!(s.uniformity(), 18);
    }
}
