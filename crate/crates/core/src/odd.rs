//! Odd color classes: class profiles, bad copies, reducibility of bad
//! `K_{2,r}`'s, the bad-target verifier, and the pigeonhole witnesses behind
//! the lower bound.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::combinatorics::set_partitions;
use crate::error::{Error, Result};
use crate::host::{Color, CopyShape, HostInstance, HostKind, TargetCopy, Vertex};

/// Color multiset of one copy's edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassProfile {
    pub counts: BTreeMap<Color, usize>,
}

impl ClassProfile {
    pub fn from_colors(colors: &[Color]) -> Self {
        let mut counts = BTreeMap::new();
        for &c in colors {
            *counts.entry(c).or_insert(0) += 1;
        }
        ClassProfile { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// True iff there is no odd color class.
    pub fn is_bad(&self) -> bool {
        self.counts.values().all(|&m| m % 2 == 0)
    }

    pub fn multiplicity(&self, c: Color) -> usize {
        self.counts.get(&c).copied().unwrap_or(0)
    }
}

impl fmt::Display for ClassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, m)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}:{m}")?;
        }
        write!(f, "}}")
    }
}

/// True iff every color appears an even number of times.
pub fn all_even(colors: &[Color]) -> bool {
    let mut odd: Vec<Color> = Vec::with_capacity(colors.len());
    for &c in colors {
        match odd.iter().position(|&o| o == c) {
            Some(i) => {
                odd.swap_remove(i);
            }
            None => odd.push(c),
        }
    }
    odd.is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Irreducibility {
    Yes,
    No,
    /// Reducibility is only defined for `K_{2,r}` targets.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BadCopy {
    pub copy: TargetCopy,
    pub profile: ClassProfile,
    pub irreducible: Irreducibility,
}

impl BadCopy {
    /// Builds the bad copy when `colors` (aligned with `copy.edges`) has no
    /// odd class, classifying reducibility for bicliques.
    pub fn from_colors(copy: &TargetCopy, colors: &[Color]) -> Option<BadCopy> {
        if !all_even(colors) {
            return None;
        }
        let irreducible = match copy.shape {
            CopyShape::Biclique { .. } => {
                if leaf_split(copy.width(), colors).is_some() {
                    Irreducibility::No
                } else {
                    Irreducibility::Yes
                }
            }
            CopyShape::Grid { .. } => Irreducibility::NotApplicable,
        };
        Some(BadCopy { copy: copy.clone(), profile: ClassProfile::from_colors(colors), irreducible })
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible != Irreducibility::No
    }
}

impl fmt::Display for BadCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} edges={:?} profile={}", self.copy, self.copy.edges, self.profile)
    }
}

/// Parts of a reducible bad `K_{2,r}`, each an irreducible bad `K_{2,r_i}`
/// on the parent's pair, ordered by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<BadCopy>,
}

impl Decomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.copy.width()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reducibility {
    Irreducible,
    Reducible(Decomposition),
}

/// Colors of a copy's edges, failing on the first uncolored one.
pub fn copy_colors(copy: &TargetCopy, coloring: &Coloring) -> Result<Vec<Color>> {
    copy.edges.iter().map(|&e| coloring.get(e).ok_or(Error::Uncolored(e))).collect()
}

fn copy_colors_if_full(copy: &TargetCopy, coloring: &Coloring) -> Option<Vec<Color>> {
    copy.edges.iter().map(|&e| coloring.get(e)).collect()
}

pub fn class_profile(copy: &TargetCopy, coloring: &Coloring) -> Result<ClassProfile> {
    Ok(ClassProfile::from_colors(&copy_colors(copy, coloring)?))
}

pub fn is_bad(copy: &TargetCopy, coloring: &Coloring) -> Result<bool> {
    Ok(all_even(&copy_colors(copy, coloring)?))
}

/// Badness of every leaf subset: `out[mask]` is true when the sub-`K_{2,|mask|}`
/// on those leaves has no odd class. Colors are leaf-major as in `TargetCopy`.
fn bad_leaf_masks(r: usize, colors: &[Color]) -> Vec<bool> {
    let mut out = vec![false; 1 << r];
    let mut buf = Vec::with_capacity(2 * r);
    for (mask, slot) in out.iter_mut().enumerate().skip(1) {
        buf.clear();
        for j in 0..r {
            if mask & (1 << j) != 0 {
                buf.push(colors[2 * j]);
                buf.push(colors[2 * j + 1]);
            }
        }
        *slot = all_even(&buf);
    }
    out
}

/// A proper nonempty leaf subset `s` such that both `s` and its complement
/// are bad. Any partition into at least two bad parts yields one (merge all
/// but one part), so this exists iff the copy is reducible.
fn leaf_split(r: usize, colors: &[Color]) -> Option<u32> {
    if r < 2 {
        return None;
    }
    let bad = bad_leaf_masks(r, colors);
    let full = (1usize << r) - 1;
    if !bad[full] {
        return None;
    }
    (1..full).find(|&s| bad[s] && bad[full ^ s]).map(|s| s as u32)
}

fn irreducible_masks(r: usize, colors: &[Color]) -> Vec<bool> {
    let bad = bad_leaf_masks(r, colors);
    let mut irr = vec![false; 1 << r];
    for mask in 1..(1usize << r) {
        if !bad[mask] {
            continue;
        }
        let mut sub = (mask - 1) & mask;
        let mut splits = false;
        while sub > 0 {
            if bad[sub] && bad[mask ^ sub] {
                splits = true;
                break;
            }
            sub = (sub - 1) & mask;
        }
        irr[mask] = !splits;
    }
    irr
}

/// Reducibility of a bad `K_{2,r}`: either irreducible, or the
/// lexicographically least set partition of the leaves into at least two
/// blocks that are each irreducible bad copies.
pub fn decompose_irreducible(host: &HostInstance, copy: &TargetCopy, coloring: &Coloring) -> Result<Reducibility> {
    if !host.is_bipartite() || !copy.is_biclique() {
        return Err(Error::WrongHost { expected: "bipartite" });
    }
    let colors = copy_colors(copy, coloring)?;
    decompose_colors(host, copy, &colors)
}

pub fn decompose_colors(host: &HostInstance, copy: &TargetCopy, colors: &[Color]) -> Result<Reducibility> {
    if !all_even(colors) {
        return Err(Error::NotBad);
    }
    let r = copy.width();
    if leaf_split(r, colors).is_none() {
        return Ok(Reducibility::Irreducible);
    }
    let irr = irreducible_masks(r, colors);
    for blocks in set_partitions(r) {
        let nblocks = blocks.iter().max().map_or(0, |m| m + 1);
        if nblocks < 2 {
            continue;
        }
        let mut masks = vec![0u32; nblocks];
        for (leaf, &b) in blocks.iter().enumerate() {
            masks[b] |= 1 << leaf;
        }
        if masks.iter().all(|&m| irr[m as usize]) {
            let mut parts: Vec<BadCopy> = masks
                .iter()
                .map(|&m| {
                    let sub = copy.sub_biclique(host, m).expect("biclique");
                    let sub_colors = leaf_colors(colors, m);
                    BadCopy {
                        copy: sub,
                        profile: ClassProfile::from_colors(&sub_colors),
                        irreducible: Irreducibility::Yes,
                    }
                })
                .collect();
            parts.sort_by(|a, b| a.copy.width().cmp(&b.copy.width()).then_with(|| a.copy.cmp(&b.copy)));
            return Ok(Reducibility::Reducible(Decomposition { parts }));
        }
    }
    unreachable!("a reducible copy refines into irreducible parts")
}

fn leaf_colors(colors: &[Color], mask: u32) -> Vec<Color> {
    let mut out = Vec::new();
    for j in 0..colors.len() / 2 {
        if mask & (1 << j) != 0 {
            out.push(colors[2 * j]);
            out.push(colors[2 * j + 1]);
        }
    }
    out
}

/// The first bad copy of the target (`K_{2,t}`, or `K_{1,...,1,2,2}`) in
/// enumeration order. `None` certifies the coloring.
pub fn find_bad_target(coloring: &Coloring) -> Result<Option<BadCopy>> {
    if let Some(e) = coloring.as_slice().iter().position(Option::is_none) {
        return Err(Error::Uncolored(e));
    }
    Ok(find_bad_target_partial(coloring))
}

/// Like [`find_bad_target`] but skips copies with an uncolored edge.
pub fn find_bad_target_partial(coloring: &Coloring) -> Option<BadCopy> {
    let host = coloring.host;
    let copies = host.enumerate_target_copies(host.target_r()).expect("t is in range");
    copies.iter().find_map(|copy| {
        let colors = copy_colors_if_full(copy, coloring)?;
        BadCopy::from_colors(copy, &colors)
    })
}

/// Searches the bipartite link `color(a, b)` (a in the leaf part, b in the
/// pair part) for a pair with `t` common monochromatic leaves. Pairs are
/// scanned in the second part first, matching the counting argument.
fn pigeonhole_search<F>(n: usize, t: usize, color: F) -> Option<(usize, [usize; 2], Vec<usize>)>
where
    F: Fn(usize, usize, usize) -> Color,
{
    // `color(pair_side, pair_vertex, leaf_vertex)`
    for pair_side in [1usize, 0] {
        for u in 0..n {
            for v in u + 1..n {
                let leaves: Vec<usize> = (0..n)
                    .filter(|&x| color(pair_side, u, x) == color(pair_side, v, x))
                    .take(t)
                    .collect();
                if leaves.len() == t {
                    return Some((pair_side, [u, v], leaves));
                }
            }
        }
    }
    None
}

/// A pair `u, v` in one part and `t` vertices `x_1..x_t` in the other with
/// each `{x_i u, x_i v}` monochromatic. Guaranteed to exist when at most
/// `floor(n/t)` colors are used.
pub fn pigeonhole_witness(coloring: &Coloring, t: usize) -> Result<Option<BadCopy>> {
    let host = coloring.host;
    if host.kind != HostKind::Bipartite {
        return Err(Error::WrongHost { expected: "bipartite" });
    }
    let colors = total_colors(coloring)?;
    let n = host.n;
    let found = pigeonhole_search(n, t, |side, p, l| {
        let (x, y) = if side == 0 { (p, l) } else { (l, p) };
        colors[x * n + y]
    });
    Ok(found.map(|(side, [u, v], leaves)| {
        let pair = [host.vertex(side, u), host.vertex(side, v)];
        let leaves: Vec<Vertex> = leaves.iter().map(|&l| host.vertex(1 - side, l)).collect();
        let copy = host.biclique(side, pair, leaves);
        let cols = copy_colors(&copy, coloring).expect("total");
        BadCopy::from_colors(&copy, &cols).expect("columns are monochromatic")
    }))
}

/// Lower-bound witness for hypergraph hosts: fix one vertex in each of the
/// first `k-2` parts and run the pigeonhole search (t = 2) on the link
/// between the last two parts.
pub fn hypergraph_lower_bound_witness(coloring: &Coloring) -> Result<Option<BadCopy>> {
    let host = coloring.host;
    if host.kind != HostKind::Hypergraph {
        return Err(Error::WrongHost { expected: "hypergraph" });
    }
    let colors = total_colors(coloring)?;
    let (n, k) = (host.n, host.k);
    let (pa, pb) = (k - 2, k - 1);
    for code in 0..n.pow(k as u32 - 2) {
        let base = code * n * n;
        let found = pigeonhole_search(n, 2, |side, p, l| {
            let (a, b) = if side == 0 { (p, l) } else { (l, p) };
            colors[base + a * n + b]
        });
        if let Some((side, [u, v], leaves)) = found {
            let mut prefix = Vec::with_capacity(k - 2);
            let mut rest = code;
            let mut locals = vec![0; k - 2];
            for slot in (0..k - 2).rev() {
                locals[slot] = rest % n;
                rest /= n;
            }
            for (part, &l) in locals.iter().enumerate() {
                prefix.push(host.vertex(part, l));
            }
            let (a_pair, b_pair) = if side == 0 { ([u, v], [leaves[0], leaves[1]]) } else { ([leaves[0], leaves[1]], [u, v]) };
            let pairs = [
                [host.vertex(pa, a_pair[0]), host.vertex(pa, a_pair[1])],
                [host.vertex(pb, b_pair[0]), host.vertex(pb, b_pair[1])],
            ];
            let copy = host.grid(prefix, [pa, pb], pairs);
            let cols = copy_colors(&copy, coloring).expect("total");
            return Ok(Some(BadCopy::from_colors(&copy, &cols).expect("link columns are monochromatic")));
        }
    }
    Ok(None)
}

fn total_colors(coloring: &Coloring) -> Result<Vec<Color>> {
    coloring
        .as_slice()
        .iter()
        .enumerate()
        .map(|(e, c)| c.ok_or(Error::Uncolored(e)))
        .collect()
}
