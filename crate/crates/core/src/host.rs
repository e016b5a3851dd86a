//! Host structures: the balanced complete bipartite graph `K_{n,n}` and the
//! complete k-partite k-uniform hypergraph, their edges, and the target copies
//! (`K_{2,r}` and `K_{1,...,1,2,2}`) that colorings are checked against.
//!
//! Vertices are numbered globally: part `j` occupies `[j*n, (j+1)*n)`. An edge
//! picks one vertex per part; its id is the mixed-radix number formed by the
//! local indices (part 0 most significant), so ids ascend lexicographically in
//! the vertex tuple.

use std::collections::BTreeSet;
use std::fmt;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, next_combination};
use crate::error::{Error, Result};

pub type Vertex = u32;
pub type EdgeId = usize;
pub type Color = u32;

/// Largest supported uniformity.
pub const MAX_K: usize = 6;

/// A small sorted set of host vertices.
pub type VertexSet = ArrayVec<Vertex, MAX_K>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HostKind {
    /// `K_{n,n}` with target `K_{2,t}`.
    Bipartite,
    /// `K^{(k)}_{n,...,n}` with target `K_{1,...,1,2,2}`.
    Hypergraph,
}

impl HostKind {
    pub fn tag(self) -> &'static str {
        match self {
            HostKind::Bipartite => "bg",
            HostKind::Hypergraph => "kh",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HostInstance {
    pub kind: HostKind,
    /// Vertices per part.
    pub n: usize,
    /// Target width of `K_{2,t}`. Fixed to 2 for hypergraph hosts.
    pub t: usize,
    /// Number of parts (2 for bipartite hosts).
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HostEdge {
    pub id: EdgeId,
    /// One vertex per part, in part order.
    pub vertices: VertexSet,
}

impl HostInstance {
    pub fn bipartite(n: usize, t: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if t < 2 {
            return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
        }
        Ok(HostInstance { kind: HostKind::Bipartite, n, t, k: 2 })
    }

    pub fn hypergraph(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidParameter(format!("k must be in 2..={MAX_K}, got {k}")));
        }
        Ok(HostInstance { kind: HostKind::Hypergraph, n, t: 2, k })
    }

    pub fn is_bipartite(&self) -> bool {
        self.kind == HostKind::Bipartite
    }

    pub fn parts(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.k
    }

    pub fn vertex(&self, part: usize, local: usize) -> Vertex {
        debug_assert!(part < self.k && local < self.n);
        (part * self.n + local) as Vertex
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        v as usize / self.n
    }

    pub fn local(&self, v: Vertex) -> usize {
        v as usize % self.n
    }

    pub fn part_vertices(&self, part: usize) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).map(move |i| self.vertex(part, i))
    }

    pub fn edge_count(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    /// Id of the edge through `vertices` (one per part, any order).
    pub fn edge_id(&self, vertices: &[Vertex]) -> EdgeId {
        debug_assert_eq!(vertices.len(), self.k);
        let mut locals = [0usize; MAX_K];
        for &v in vertices {
            locals[self.part_of(v)] = self.local(v);
        }
        locals[..self.k].iter().fold(0, |acc, &l| acc * self.n + l)
    }

    pub fn edge_vertices(&self, id: EdgeId) -> VertexSet {
        let mut out = VertexSet::new();
        let mut rest = id;
        let mut locals = [0usize; MAX_K];
        for part in (0..self.k).rev() {
            locals[part] = rest % self.n;
            rest /= self.n;
        }
        for (part, &l) in locals[..self.k].iter().enumerate() {
            out.push(self.vertex(part, l));
        }
        out
    }

    pub fn edge(&self, id: EdgeId) -> HostEdge {
        HostEdge { id, vertices: self.edge_vertices(id) }
    }

    /// Every edge exactly once, ascending id.
    pub fn edges(&self) -> impl Iterator<Item = HostEdge> + '_ {
        (0..self.edge_count()).map(|id| self.edge(id))
    }

    /// Copy size checked by the verifier: `t` for graphs, the fixed
    /// 2x2 grid (reported as 2) for hypergraphs.
    pub fn target_r(&self) -> usize {
        self.t
    }

    fn check_r(&self, r: usize) -> Result<()> {
        if self.is_bipartite() && !(1..=self.t).contains(&r) {
            return Err(Error::RangeError { r, t: self.t });
        }
        Ok(())
    }

    /// Number of copies `enumerate_target_copies(r)` yields.
    pub fn target_copy_count(&self, r: usize) -> u128 {
        let n = self.n as u64;
        match self.kind {
            HostKind::Bipartite => 2 * binomial(n, 2) * binomial(n, r as u64),
            HostKind::Hypergraph => {
                binomial(self.k as u64, 2)
                    * (n as u128).pow(self.k as u32 - 2)
                    * binomial(n, 2).pow(2)
            }
        }
    }

    /// All copies of the target in deterministic lexicographic order. For
    /// bipartite hosts these are the copies of `K_{2,r}` with the pair in X
    /// first, then those with the pair in Y; `r` is ignored for hypergraphs.
    pub fn enumerate_target_copies(&self, r: usize) -> Result<Vec<TargetCopy>> {
        self.check_r(r)?;
        let mut out = Vec::new();
        match self.kind {
            HostKind::Bipartite => {
                for pair_part in 0..2 {
                    let leaf_part = 1 - pair_part;
                    let mut pair = [0usize, 1];
                    if self.n < 2 || r > self.n {
                        continue;
                    }
                    loop {
                        let p = [self.vertex(pair_part, pair[0]), self.vertex(pair_part, pair[1])];
                        let mut leaves: Vec<usize> = (0..r).collect();
                        loop {
                            let l: Vec<Vertex> =
                                leaves.iter().map(|&i| self.vertex(leaf_part, i)).collect();
                            out.push(self.biclique(pair_part, p, l));
                            if !next_combination(&mut leaves, self.n) {
                                break;
                            }
                        }
                        if !next_combination(&mut pair, self.n) {
                            break;
                        }
                    }
                }
            }
            HostKind::Hypergraph => {
                if self.n < 2 {
                    return Ok(out);
                }
                for a in 0..self.k {
                    for b in a + 1..self.k {
                        let others: Vec<usize> = (0..self.k).filter(|&p| p != a && p != b).collect();
                        let prefixes = self.n.pow(others.len() as u32);
                        for code in 0..prefixes {
                            let mut prefix = Vec::with_capacity(others.len());
                            let mut rest = code;
                            let mut locals = vec![0; others.len()];
                            for slot in (0..others.len()).rev() {
                                locals[slot] = rest % self.n;
                                rest /= self.n;
                            }
                            for (slot, &p) in others.iter().enumerate() {
                                prefix.push(self.vertex(p, locals[slot]));
                            }
                            let mut pa = [0usize, 1];
                            loop {
                                let mut pb = [0usize, 1];
                                loop {
                                    let pairs = [
                                        [self.vertex(a, pa[0]), self.vertex(a, pa[1])],
                                        [self.vertex(b, pb[0]), self.vertex(b, pb[1])],
                                    ];
                                    out.push(self.grid(prefix.clone(), [a, b], pairs));
                                    if !next_combination(&mut pb, self.n) {
                                        break;
                                    }
                                }
                                if !next_combination(&mut pa, self.n) {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Copies of the target containing at least one of `edge_ids`, sorted
    /// and duplicate-free.
    pub fn copies_through_edges(&self, edge_ids: &[EdgeId], r: usize) -> Result<Vec<TargetCopy>> {
        self.check_r(r)?;
        let mut found = BTreeSet::new();
        for &e in edge_ids {
            self.copies_through_edge_into(e, r, &mut found);
        }
        Ok(found.into_iter().collect())
    }

    /// Copies through one edge, pushed into `out` (may contain duplicates
    /// only across calls).
    pub fn copies_through_edge_into(&self, e: EdgeId, r: usize, out: &mut BTreeSet<TargetCopy>) {
        let verts = self.edge_vertices(e);
        match self.kind {
            HostKind::Bipartite => {
                if r > self.n || self.n < 2 {
                    return;
                }
                for pair_part in 0..2 {
                    let leaf_part = 1 - pair_part;
                    let anchor = verts[pair_part];
                    let leaf = verts[leaf_part];
                    let other_leaves: Vec<Vertex> =
                        self.part_vertices(leaf_part).filter(|&v| v != leaf).collect();
                    for mate in self.part_vertices(pair_part).filter(|&v| v != anchor) {
                        let pair = if anchor < mate { [anchor, mate] } else { [mate, anchor] };
                        if r == 1 {
                            out.insert(self.biclique(pair_part, pair, vec![leaf]));
                            continue;
                        }
                        let mut idx: Vec<usize> = (0..r - 1).collect();
                        loop {
                            let mut leaves: Vec<Vertex> = idx.iter().map(|&i| other_leaves[i]).collect();
                            leaves.push(leaf);
                            leaves.sort_unstable();
                            out.insert(self.biclique(pair_part, pair, leaves));
                            if !next_combination(&mut idx, other_leaves.len()) {
                                break;
                            }
                        }
                    }
                }
            }
            HostKind::Hypergraph => {
                if self.n < 2 {
                    return;
                }
                for a in 0..self.k {
                    for b in a + 1..self.k {
                        let prefix: Vec<Vertex> = (0..self.k)
                            .filter(|&p| p != a && p != b)
                            .map(|p| verts[p])
                            .collect();
                        for ma in self.part_vertices(a).filter(|&v| v != verts[a]) {
                            for mb in self.part_vertices(b).filter(|&v| v != verts[b]) {
                                let pa = sorted_pair(verts[a], ma);
                                let pb = sorted_pair(verts[b], mb);
                                out.insert(self.grid(prefix.clone(), [a, b], [pa, pb]));
                            }
                        }
                    }
                }
            }
        }
    }

    /// The copy of `K_{2,r}` with pair side `pair` (in `pair_part`) and the
    /// given leaves. Edges are listed leaf-major: `edges[2*j + i]` joins
    /// `pair[i]` to `leaves[j]`.
    pub fn biclique(&self, pair_part: usize, pair: [Vertex; 2], leaves: Vec<Vertex>) -> TargetCopy {
        let mut edges = Vec::with_capacity(2 * leaves.len());
        for &l in &leaves {
            for &p in &pair {
                edges.push(self.edge_id(&[p, l]));
            }
        }
        TargetCopy { shape: CopyShape::Biclique { pair_part, pair, leaves }, edges }
    }

    /// The 2x2 grid copy of `K_{1,...,1,2,2}`. Edges are listed as
    /// `edges[2*a + b]` using `pairs[0][a]` and `pairs[1][b]`.
    pub fn grid(&self, prefix: Vec<Vertex>, pair_parts: [usize; 2], pairs: [[Vertex; 2]; 2]) -> TargetCopy {
        let mut edges = Vec::with_capacity(4);
        for &va in &pairs[0] {
            for &vb in &pairs[1] {
                let mut vs: VertexSet = prefix.iter().copied().collect();
                vs.push(va);
                vs.push(vb);
                edges.push(self.edge_id(&vs));
            }
        }
        TargetCopy { shape: CopyShape::Grid { prefix, pair_parts, pairs }, edges }
    }
}

fn sorted_pair(a: Vertex, b: Vertex) -> [Vertex; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

impl fmt::Display for HostInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            HostKind::Bipartite => write!(f, "K_{{{n},{n}}}", n = self.n),
            HostKind::Hypergraph => write!(f, "K^({k})_{{{n}x{k}}}", k = self.k, n = self.n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CopyShape {
    /// `K_{2,r}`: `pair` lies in `pair_part` (0 = X, 1 = Y), the leaves in the other part.
    Biclique { pair_part: usize, pair: [Vertex; 2], leaves: Vec<Vertex> },
    /// `K_{1,...,1,2,2}`: one prefix vertex in each part outside `pair_parts`.
    Grid { prefix: Vec<Vertex>, pair_parts: [usize; 2], pairs: [[Vertex; 2]; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TargetCopy {
    pub shape: CopyShape,
    pub edges: Vec<EdgeId>,
}

impl TargetCopy {
    /// `r` for a `K_{2,r}`, 2 for a grid.
    pub fn width(&self) -> usize {
        match &self.shape {
            CopyShape::Biclique { leaves, .. } => leaves.len(),
            CopyShape::Grid { .. } => 2,
        }
    }

    pub fn is_biclique(&self) -> bool {
        matches!(self.shape, CopyShape::Biclique { .. })
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// The sub-biclique on the leaves whose indices are set in `mask`.
    pub fn sub_biclique(&self, host: &HostInstance, mask: u32) -> Option<TargetCopy> {
        match &self.shape {
            CopyShape::Biclique { pair_part, pair, leaves } => {
                let sub: Vec<Vertex> = leaves
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                Some(host.biclique(*pair_part, *pair, sub))
            }
            CopyShape::Grid { .. } => None,
        }
    }
}

impl fmt::Display for TargetCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            CopyShape::Biclique { pair_part, pair, leaves } => write!(
                f,
                "K_{{2,{}}} pair={:?} in {} leaves={:?}",
                leaves.len(),
                pair,
                if *pair_part == 0 { "X" } else { "Y" },
                leaves
            ),
            CopyShape::Grid { prefix, pair_parts, pairs } => write!(
                f,
                "K_(1..1,2,2) prefix={:?} parts={:?} pairs={:?}",
                prefix, pair_parts, pairs
            ),
        }
    }
}
