//! Transversal tiles of `K^{(k)}_{k+1,...,k+1}` copies in the complete
//! k-partite k-uniform host, plus the template machinery shared with the
//! graph case (which is the two-part system with parts of size `t+1`).

use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{build_transversal_tile, check_guard, Tile, TileKind, TileSource, TileVertex, VertexKind, DEFAULT_GUARD};
use crate::coloring::Palette;
use crate::combinatorics::{binomial, factorial, next_combination};
use crate::error::{Error, Result};
use crate::host::{Color, HostInstance, Vertex};
use crate::report::ExactRatio;

/// A labeled transversal system: `parts[j][l]` is the vertex of part `j`
/// carrying label `l`. Canonical when part 0 is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TransversalTemplate {
    pub parts: Vec<Vec<Vertex>>,
    pub color: Color,
}

impl TransversalTemplate {
    /// Checks shape against `host` with parts of size `s`, and returns the
    /// canonical relabeling (part 0 sorted).
    pub fn validated(&self, host: &HostInstance, s: usize) -> Result<TransversalTemplate> {
        if self.parts.len() != host.k {
            return Err(Error::MalformedTemplate(format!("expected {} parts, got {}", host.k, self.parts.len())));
        }
        for (j, part) in self.parts.iter().enumerate() {
            if part.len() != s {
                return Err(Error::MalformedTemplate(format!("part {j} has {} vertices, expected {s}", part.len())));
            }
            if part.iter().any(|&v| v as usize >= host.vertex_count() || host.part_of(v) != j) {
                return Err(Error::MalformedTemplate(format!("part {j} holds a vertex outside X_{j}")));
            }
            if part.iter().duplicates().next().is_some() {
                return Err(Error::MalformedTemplate(format!("part {j} repeats a vertex")));
            }
        }
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by_key(|&l| self.parts[0][l]);
        let parts = self.parts.iter().map(|p| order.iter().map(|&l| p[l]).collect()).collect();
        Ok(TransversalTemplate { parts, color: self.color })
    }
}

/// Number of canonical templates with parts of size `s` and `colors` colors.
pub(crate) fn template_count(host: &HostInstance, s: usize, colors: u32) -> u128 {
    let per_part = binomial(host.n as u64, s as u64);
    per_part.pow(host.k as u32) * factorial(s as u64).pow(host.k as u32 - 1) * colors as u128
}

/// Visits every canonical template in a fixed order: color, then per part the
/// subset (lexicographic) and, for parts after the first, the labeling
/// (permutations in lexicographic order).
pub(crate) fn for_each_template(
    host: &HostInstance,
    s: usize,
    colors: std::ops::Range<Color>,
    visit: &mut dyn FnMut(&TransversalTemplate),
) {
    if s > host.n || s == 0 {
        return;
    }
    let perms: Vec<Vec<usize>> = (0..s).permutations(s).collect();
    let mut tpl = TransversalTemplate { parts: vec![Vec::new(); host.k], color: 0 };

    fn rec(
        host: &HostInstance,
        s: usize,
        part: usize,
        perms: &[Vec<usize>],
        tpl: &mut TransversalTemplate,
        visit: &mut dyn FnMut(&TransversalTemplate),
    ) {
        if part == host.k {
            visit(tpl);
            return;
        }
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let subset: Vec<Vertex> = idx.iter().map(|&i| host.vertex(part, i)).collect();
            if part == 0 {
                tpl.parts[0] = subset;
                rec(host, s, 1, perms, tpl, visit);
            } else {
                for p in perms {
                    tpl.parts[part] = p.iter().map(|&i| subset[i]).collect();
                    rec(host, s, part + 1, perms, tpl, visit);
                }
            }
            if !next_combination(&mut idx, host.n) {
                break;
            }
        }
    }

    for color in colors {
        tpl.color = color;
        rec(host, s, 0, &perms, &mut tpl, visit);
    }
}

/// A uniformly random canonical template.
pub(crate) fn random_template<R: Rng + ?Sized>(
    host: &HostInstance,
    s: usize,
    colors: std::ops::Range<Color>,
    rng: &mut R,
) -> Option<TransversalTemplate> {
    if s > host.n || s == 0 || colors.is_empty() {
        return None;
    }
    let color = rng.gen_range(colors);
    let parts = (0..host.k)
        .map(|j| {
            let mut locals = rand::seq::index::sample(rng, host.n, s).into_vec();
            if j == 0 {
                locals.sort_unstable();
            } else {
                locals.shuffle(rng);
            }
            locals.into_iter().map(|l| host.vertex(j, l)).collect()
        })
        .collect();
    Some(TransversalTemplate { parts, color })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperTileConfig {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub palette: Palette,
    pub guard: u128,
}

impl HyperTileConfig {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_parameters(n, k, None, None)
    }

    pub fn default_epsilon(k: usize) -> f64 {
        1.0 / ((k * k + 2) as f64)
    }

    /// Open interval for `delta`.
    pub fn delta_interval(k: usize) -> (f64, f64) {
        let q = (k * k + 1) as f64 / (k * k + 2) as f64;
        let a = 1.0 - (k * k + 1) as f64 / (2.0 * ((k * k + 2) as f64).powi(4));
        let lo = a.max(q).max((1.0 + q) / 2.0);
        (lo, 1.0)
    }

    pub fn with_parameters(n: usize, k: usize, epsilon: Option<f64>, delta: Option<f64>) -> Result<Self> {
        HostInstance::hypergraph(n, k)?;
        let eps_max = Self::default_epsilon(k);
        let epsilon = epsilon.unwrap_or(eps_max);
        if !(epsilon > 0.0 && epsilon <= eps_max) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, {eps_max}], got {epsilon}")));
        }
        let (lo, hi) = Self::delta_interval(k);
        let delta = delta.unwrap_or((lo + hi) / 2.0);
        if !(delta > lo && delta < hi) {
            return Err(Error::InvalidParameter(format!("delta must lie in ({lo}, {hi}), got {delta}")));
        }
        Ok(HyperTileConfig { n, k, epsilon, delta, palette: Palette::hyper_default(n, delta), guard: DEFAULT_GUARD })
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
        HostInstance::hypergraph(self.n, self.k).expect("validated")
    }

    /// `n^{k^2+1} / 2`.
    pub fn d(&self) -> ExactRatio {
        let num = BigUint::from(self.n).pow((self.k * self.k + 1) as u32);
        ExactRatio::new(num, BigUint::from(2u8))
    }

    pub fn ell(&self) -> usize {
        6
    }

    pub fn h1_tile_count(&self) -> u128 {
        template_count(&self.host(), self.k + 1, self.palette.n1)
    }
}

pub fn build_hyper_tile(config: &HyperTileConfig, template: &TransversalTemplate) -> Result<Tile> {
    let host = config.host();
    if !config.palette.is_main(template.color) {
        return Err(Error::MalformedTemplate(format!("color {} is not a main color", template.color)));
    }
    let tpl = template.validated(&host, config.k + 1)?;
    Ok(build_transversal_tile(&host, &tpl))
}

/// `(k+1)! + k C(k+1,2) (k-1) (k-1)! + k (k+1)!/2`.
pub fn hyper_uniformity(k: usize) -> u128 {
    let k = k as u64;
    factorial(k + 1) + k as u128 * binomial(k + 1, 2) * (k - 1) as u128 * factorial(k - 1) + k as u128 * factorial(k + 1) / 2
}

pub fn enumerate_hyper_tiles(config: &HyperTileConfig) -> Result<Vec<Tile>> {
    check_guard("hypergraph H1 enumeration", config.h1_tile_count(), config.guard)?;
    let host = config.host();
    let mut out = Vec::with_capacity(config.h1_tile_count() as usize);
    for_each_template(&host, config.k + 1, config.palette.main_colors(), &mut |tpl| {
        out.push(build_transversal_tile(&host, tpl));
    });
    Ok(out)
}

pub fn sample_hyper_tile<R: Rng + ?Sized>(config: &HyperTileConfig, rng: &mut R) -> Option<Tile> {
    let host = config.host();
    random_template(&host, config.k + 1, config.palette.main_colors(), rng).map(|tpl| build_transversal_tile(&host, &tpl))
}

/// Rejects tile-vertices that are not of one of the three H1 shapes.
pub(crate) fn validate_vertex(host: &HostInstance, v: &TileVertex) -> Result<()> {
    let (set, want) = match v {
        TileVertex::Slot(set) => (set, host.k),
        TileVertex::Colored { set, .. } => (set, host.k - 1),
    };
    if set.len() != want || set.iter().any(|&x| x as usize >= host.vertex_count()) {
        return Err(Error::InvalidParameter(format!("{v} has the wrong size for this host")));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!("{v} is not a sorted set of distinct vertices")));
    }
    let mut per_part = vec![0usize; host.k];
    for &x in set {
        per_part[host.part_of(x)] += 1;
    }
    let doubled = per_part.iter().filter(|&&c| c == 2).count();
    let ok = per_part.iter().all(|&c| c <= 2)
        && match v {
            TileVertex::Slot(_) => doubled <= 1,
            TileVertex::Colored { .. } => doubled == 0,
        };
    if !ok {
        return Err(Error::InvalidParameter(format!("{v} is not a tile-vertex shape")));
    }
    Ok(())
}

/// Exact H1 degree of `v` by enumerating every template.
pub fn hyper_degree(config: &HyperTileConfig, v: &TileVertex) -> Result<u64> {
    let host = config.host();
    validate_vertex(&host, v)?;
    check_guard("hypergraph H1 degree", config.h1_tile_count(), config.guard)?;
    Ok(count_containing(&host, config.k + 1, config.palette, v))
}

pub(crate) fn count_containing(host: &HostInstance, s: usize, palette: Palette, v: &TileVertex) -> u64 {
    let colors = match v {
        TileVertex::Colored { color, .. } if palette.is_main(*color) => *color..*color + 1,
        TileVertex::Colored { .. } => return 0,
        TileVertex::Slot(_) => palette.main_colors(),
    };
    let mut count = 0;
    for_each_template(host, s, colors, &mut |tpl| {
        if template_contains(host, tpl, v) {
            count += 1;
        }
    });
    count
}

/// Membership test without building the tile: every vertex of `v` is in the
/// system, labels are distinct, and the part pattern matches.
fn template_contains(host: &HostInstance, tpl: &TransversalTemplate, v: &TileVertex) -> bool {
    let set = match v {
        TileVertex::Slot(s) => s,
        TileVertex::Colored { set, color } => {
            if *color != tpl.color {
                return false;
            }
            set
        }
    };
    let mut seen = 0u64;
    for &x in set {
        let Some(l) = tpl.parts[host.part_of(x)].iter().position(|&y| y == x) else {
            return false;
        };
        if seen & (1 << l) != 0 {
            return false;
        }
        seen |= 1 << l;
    }
    true
}

/// Closed-form H1 degree of a vertex of the given kind.
pub fn hyper_degree_formula(kind: VertexKind, config: &HyperTileConfig) -> u128 {
    let (n, k) = (config.n as u64, config.k as u64);
    let n1 = config.palette.n1 as u128;
    let kf = factorial(k);
    let k_pow = |base: u128, e: u64| base.pow(e as u32);
    match kind {
        VertexKind::EdgeSlot => k_pow(binomial(n - 1, k), k) * k_pow(kf, k) * n1,
        VertexKind::DoubledSet => {
            if n < 2 {
                return 0;
            }
            binomial(n - 2, k - 1)
                * k_pow(binomial(n - 1, k), k - 2)
                * binomial(n, k + 1)
                * factorial(k + 1)
                * factorial(k - 1)
                * k_pow(kf, k - 2)
                * n1
        }
        VertexKind::MainColored => {
            k_pow(binomial(n - 1, k), k - 1) * binomial(n, k + 1) * (factorial(k + 1) / 2) * k_pow(kf, k - 1)
        }
        VertexKind::ReserveColored => 0,
    }
}

/// `H1k color=<i> parts=[{..};..] labels=[a,b,..;..]`, or `H2k edge=<id> color=<i>`.
pub fn dump_tile(tile: &Tile) -> String {
    match (&tile.kind, &tile.source) {
        (TileKind::H1, TileSource::Transversal(tpl)) => {
            let mut s = format!("H1k color={} parts=[", tile.color);
            for (j, part) in tpl.parts.iter().enumerate() {
                let mut sorted = part.clone();
                sorted.sort_unstable();
                let _ = write!(s, "{}{{{}}}", if j > 0 { ";" } else { "" }, sorted.iter().join(","));
            }
            s.push_str("] labels=[");
            s.push_str(&tpl.parts.iter().map(|p| p.iter().join(",")).join(";"));
            s.push(']');
            s
        }
        (_, TileSource::Edge(e)) => format!("H2k edge={} color={}", e, tile.color),
        _ => format!("{:?}", tile),
    }
}
