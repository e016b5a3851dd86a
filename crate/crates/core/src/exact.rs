//! Exact odd Ramsey numbers on tiny hosts by backtracking over colorings,
//! and exhaustive checks of the pigeonhole lower bound.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, Palette};
use crate::error::{Error, Result};
use crate::host::{Color, HostInstance, HostKind};
use crate::odd::{find_bad_target, pigeonhole_witness};

/// Default cap on host edges for exhaustive search.
pub const DEFAULT_EDGE_LIMIT: usize = 36;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pruning {
    None,
    /// Colors are introduced in first-use order.
    ColorCanonical,
    /// Color-canonical plus lex-leader conditions for row, column and side
    /// swaps. Bipartite hosts only.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub host: HostInstance,
    pub q: u32,
    pub pruning: Pruning,
    pub node_budget: u64,
    pub edge_limit: usize,
}

impl SearchConfig {
    pub fn new(host: HostInstance, q: u32) -> Self {
        SearchConfig {
            host,
            q,
            pruning: Pruning::ColorCanonical,
            node_budget: DEFAULT_NODE_BUDGET,
            edge_limit: DEFAULT_EDGE_LIMIT,
        }
    }

    pub fn with_pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    Yes(Coloring),
    No,
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Yes(_) => "yes",
            SearchOutcome::No => "no",
            SearchOutcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

struct Search<'a> {
    n: usize,
    m: usize,
    q: u32,
    pruning: Pruning,
    budget: u64,
    nodes: u64,
    /// Copies (as edge lists) whose largest edge is the index.
    closing: &'a [Vec<Vec<usize>>],
    colors: Vec<Color>,
}

impl Search<'_> {
    fn run(&mut self, e: usize, used: u32) -> Option<bool> {
        if e == self.m {
            if self.pruning == Pruning::Full && !self.transpose_ok() {
                return Some(false);
            }
            return Some(true);
        }
        let limit = match self.pruning {
            Pruning::None => self.q,
            _ => (used + 1).min(self.q),
        };
        for c in 0..limit {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.colors[e] = c;
            if self.pruning == Pruning::Full && !self.lex_ok(e) {
                continue;
            }
            let bad = self.closing[e].iter().any(|copy| {
                let mut parity = 0u64;
                for &f in copy {
                    parity ^= 1 << self.colors[f];
                }
                parity == 0
            });
            if bad {
                continue;
            }
            match self.run(e + 1, used.max(c + 1)) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        Some(false)
    }

    /// Rows and columns stay in non-decreasing lexicographic order.
    fn lex_ok(&self, e: usize) -> bool {
        let n = self.n;
        let (r, j) = (e / n, e % n);
        if j == n - 1 && r > 0 {
            let prev = &self.colors[(r - 1) * n..r * n];
            let cur = &self.colors[r * n..(r + 1) * n];
            if cur < prev {
                return false;
            }
        }
        if j > 0 {
            let tied = (0..r).all(|i| self.colors[i * n + j - 1] == self.colors[i * n + j]);
            if tied && self.colors[r * n + j - 1] > self.colors[r * n + j] {
                return false;
            }
        }
        true
    }

    fn transpose_ok(&self) -> bool {
        let n = self.n;
        for i in 0..n * n {
            let (r, j) = (i / n, i % n);
            let t = self.colors[j * n + r];
            match self.colors[i].cmp(&t) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        true
    }
}

fn closing_index(host: &HostInstance) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut closing = vec![Vec::new(); host.edge_count()];
    for copy in host.enumerate_target_copies(host.target_r())? {
        let last = *copy.edges.iter().max().expect("non-empty copy");
        closing[last].push(copy.edges.clone());
    }
    Ok(closing)
}

/// Is there a coloring with at most `q` colors in which every target copy
/// has an odd color class?
pub fn exists_valid_coloring(config: &SearchConfig) -> Result<SearchResult> {
    let host = config.host;
    if config.q == 0 || config.q > 64 || config.node_budget == 0 {
        return Err(Error::InvalidParameter(format!("q = {} and budget must be positive, q <= 64", config.q)));
    }
    if config.pruning == Pruning::Full && host.kind != HostKind::Bipartite {
        return Err(Error::InvalidParameter("full pruning needs a bipartite host".into()));
    }
    let m = host.edge_count();
    crate::tiles::check_guard("exact search edges", m as u128, config.edge_limit as u128)?;
    let start = Instant::now();
    let closing = closing_index(&host)?;
    let mut search = Search {
        n: host.n,
        m,
        q: config.q,
        pruning: config.pruning,
        budget: config.node_budget,
        nodes: 0,
        closing: &closing,
        colors: vec![0; m],
    };
    let found = search.run(0, 0);
    let outcome = match found {
        None => SearchOutcome::BudgetExceeded,
        Some(false) => SearchOutcome::No,
        Some(true) => {
            let coloring = Coloring::total(host, Palette::new(config.q, 0), &search.colors)?;
            if find_bad_target(&coloring)?.is_some() {
                return Err(Error::InvalidParameter("search produced an uncertified coloring".into()));
            }
            SearchOutcome::Yes(coloring)
        }
    };
    Ok(SearchResult { outcome, nodes: search.nodes, elapsed_ms: start.elapsed().as_millis() as u64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OddRamseyValue {
    Exact(u32),
    /// Every `q <= bound` was refuted.
    GreaterThan(u32),
    /// A budget ran out: the value lies in `lower..` and is at most `upper` if known.
    Unknown { lower: u32, upper: Option<u32> },
}

impl fmt::Display for OddRamseyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddRamseyValue::Exact(v) => write!(f, "{v}"),
            OddRamseyValue::GreaterThan(v) => write!(f, "> {v}"),
            OddRamseyValue::Unknown { lower, upper: Some(u) } => write!(f, "[{lower}, {u}]"),
            OddRamseyValue::Unknown { lower, upper: None } => write!(f, ">= {lower}"),
        }
    }
}

/// One search in a results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub host: String,
    pub target: String,
    pub q: u32,
    pub result: String,
    pub nodes: u64,
    pub time_ms: u64,
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddRamseyReport {
    pub value: OddRamseyValue,
    pub rows: Vec<TableRow>,
    pub certificate: Option<Coloring>,
}

pub fn target_label(host: &HostInstance) -> String {
    match host.kind {
        HostKind::Bipartite => format!("K_{{2,{}}}", host.t),
        HostKind::Hypergraph => format!("K_(1..1,2,2) k={}", host.k),
    }
}

/// Smallest `q <= q_max` admitting a valid coloring.
pub fn r_odd_exact(host: HostInstance, q_max: u32, pruning: Pruning, node_budget: u64) -> Result<OddRamseyReport> {
    let mut rows = Vec::new();
    let mut lower = 1;
    let mut tainted = false;
    for q in 1..=q_max {
        let cfg = SearchConfig::new(host, q).with_pruning(pruning).with_budget(node_budget);
        let res = exists_valid_coloring(&cfg)?;
        let certificate = match &res.outcome {
            SearchOutcome::Yes(c) => Some(c.to_text()),
            _ => None,
        };
        rows.push(TableRow {
            host: host.to_string(),
            target: target_label(&host),
            q,
            result: res.outcome.label().to_string(),
            nodes: res.nodes,
            time_ms: res.elapsed_ms,
            certificate,
        });
        match res.outcome {
            SearchOutcome::Yes(c) => {
                let value = if tainted { OddRamseyValue::Unknown { lower, upper: Some(q) } } else { OddRamseyValue::Exact(q) };
                return Ok(OddRamseyReport { value, rows, certificate: Some(c) });
            }
            SearchOutcome::No => {
                if !tainted {
                    lower = q + 1;
                }
            }
            SearchOutcome::BudgetExceeded => tainted = true,
        }
    }
    let value = if tainted { OddRamseyValue::Unknown { lower, upper: None } } else { OddRamseyValue::GreaterThan(q_max) };
    Ok(OddRamseyReport { value, rows, certificate: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExhaustMode {
    /// Every coloring up to color relabeling.
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub t: usize,
    pub colors: u32,
    pub mode: ExhaustMode,
    pub checked: u64,
    pub pass: bool,
    pub counterexample: Option<Coloring>,
}

/// Checks that every coloring of `K_{n,n}` with `floor(n/t)` colors has a
/// pigeonhole witness and a bad `K_{2,t}`.
pub fn lower_bound_exhaust(n: usize, t: usize, mode: ExhaustMode, budget: u64) -> Result<LowerBoundReport> {
    let host = HostInstance::bipartite(n, t)?;
    let q = (n / t) as u32;
    if q == 0 {
        return Err(Error::InvalidParameter(format!("floor(n/t) = 0 for n = {n}, t = {t}")));
    }
    let m = host.edge_count();
    let palette = Palette::new(q, 0);
    let mut report =
        LowerBoundReport { n, t, colors: q, mode, checked: 0, pass: true, counterexample: None };
    let copies: Vec<Vec<usize>> = host.enumerate_target_copies(t)?.into_iter().map(|c| c.edges).collect();
    let has_bad = |colors: &[Color]| {
        copies.iter().any(|copy| copy.iter().fold(0u64, |acc, &e| acc ^ (1 << colors[e])) == 0)
    };
    let check = |colors: &[Color], report: &mut LowerBoundReport| -> Result<bool> {
        report.checked += 1;
        let coloring = Coloring::total(host, palette, colors)?;
        let ok = has_bad(colors) && pigeonhole_witness(&coloring, t)?.is_some();
        if !ok {
            report.pass = false;
            report.counterexample = Some(coloring);
        }
        Ok(ok)
    };
    match mode {
        ExhaustMode::Exhaustive => {
            let total = canonical_count(m, q);
            crate::tiles::check_guard("lower-bound colorings", total, budget as u128)?;
            let mut colors = vec![0 as Color; m];
            loop {
                if !check(&colors, &mut report)? {
                    break;
                }
                if !next_canonical(&mut colors, q) {
                    break;
                }
            }
        }
        ExhaustMode::Sampled { samples, seed } => {
            crate::tiles::check_guard("lower-bound samples", samples as u128, budget as u128)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut colors = vec![0 as Color; m];
            for _ in 0..samples {
                for c in colors.iter_mut() {
                    *c = rng.gen_range(0..q);
                }
                if !check(&colors, &mut report)? {
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Colorings of `m` edges with at most `q` colors in first-use order.
fn canonical_count(m: usize, q: u32) -> u128 {
    // sum over j <= q of Stirling numbers S(m, j)
    let q = q as usize;
    let mut s = vec![vec![0u128; q + 1]; m + 1];
    s[0][0] = 1;
    for i in 1..=m {
        for j in 1..=q {
            s[i][j] = j as u128 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[m].iter().sum()
}

/// Advances a restricted growth string bounded by `q` colors.
fn next_canonical(colors: &mut [Color], q: u32) -> bool {
    let m = colors.len();
    for i in (1..m).rev() {
        let max_before = colors[..i].iter().copied().max().unwrap_or(0);
        if colors[i] < q - 1 && colors[i] <= max_before {
            colors[i] += 1;
            for c in colors[i + 1..].iter_mut() {
                *c = 0;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22(n: usize) -> HostInstance {
        HostInstance::bipartite(n, 2).unwrap()
    }

    #[test]
    fn k22_in_k22() {
        let one = exists_valid_coloring(&SearchConfig::new(k22(2), 1)).unwrap();
        assert_eq!(one.outcome, SearchOutcome::No);
        let two = exists_valid_coloring(&SearchConfig::new(k22(2), 2)).unwrap();
        assert!(matches!(two.outcome, SearchOutcome::Yes(_)));
        let r = r_odd_exact(k22(2), 3, Pruning::ColorCanonical, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.value, OddRamseyValue::Exact(2));
    }

    #[test]
    fn pruning_levels_agree() {
        for n in 2..=4 {
            for q in 1..=3 {
                let outcomes: Vec<bool> = [Pruning::None, Pruning::ColorCanonical, Pruning::Full]
                    .into_iter()
                    .filter(|&p| n < 4 || p != Pruning::None)
                    .map(|p| {
                        let r = exists_valid_coloring(&SearchConfig::new(k22(n), q).with_pruning(p)).unwrap();
                        matches!(r.outcome, SearchOutcome::Yes(_))
                    })
                    .collect();
                assert!(outcomes.windows(2).all(|w| w[0] == w[1]), "n = {n} q = {q}: {outcomes:?}");
            }
        }
    }

    #[test]
    fn k44_needs_three_colors() {
        let r = exists_valid_coloring(&SearchConfig::new(k22(4), 2)).unwrap();
        assert_eq!(r.outcome, SearchOutcome::No);
    }

    #[test]
    fn budget_is_a_third_state() {
        let r = exists_valid_coloring(&SearchConfig::new(k22(4), 2).with_budget(10)).unwrap();
        assert_eq!(r.outcome, SearchOutcome::BudgetExceeded);
        let rep = r_odd_exact(k22(4), 2, Pruning::ColorCanonical, 10).unwrap();
        assert!(matches!(rep.value, OddRamseyValue::Unknown { .. }));
    }

    #[test]
    fn full_pruning_rejects_hypergraphs() {
        let host = HostInstance::hypergraph(2, 2).unwrap();
        let cfg = SearchConfig::new(host, 2).with_pruning(Pruning::Full);
        assert!(exists_valid_coloring(&cfg).is_err());
    }

    #[test]
    fn canonical_enumeration_counts() {
        let mut colors = vec![0; 5];
        let mut count = 1;
        while next_canonical(&mut colors, 2) {
            count += 1;
        }
        assert_eq!(count, 16);
        assert_eq!(canonical_count(5, 2), 16);
        assert_eq!(canonical_count(4, 3), 14);
    }

    #[test]
    fn lower_bound_small() {
        for n in 2..=4 {
            let r = lower_bound_exhaust(n, 2, ExhaustMode::Exhaustive, 1 << 20).unwrap();
            assert!(r.pass);
            assert_eq!(r.checked as u128, canonical_count(n * n, (n / 2) as u32));
        }
    }
}
