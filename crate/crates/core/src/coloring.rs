//! Palettes, edge colorings, and the plain-text coloring file format:
//!
//! ```text
//! odd-ramsey v1 kind=<bg|kh> n=<n> t=<t> k=<k> n1=<n1> n2=<n2>
//! <edge-id> <color-id|->
//! ...
//! ```
//!
//! One line per edge in ascending id order, `-` for uncolored, trailing newline.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::combinatorics::ceil_div;
use crate::error::{Error, Result};
use crate::host::{Color, EdgeId, HostInstance, HostKind};

/// Colors `0..n1` form the main palette N1, `n1..n1+n2` the reserve palette N2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub n1: u32,
    pub n2: u32,
    /// Exponent used to size `n2 = ceil(n^delta)`, when derived that way.
    pub delta: Option<f64>,
}

/// `ceil(n^delta)`.
pub fn reserve_size(n: usize, delta: f64) -> u32 {
    (n as f64).powf(delta).ceil() as u32
}

impl Palette {
    pub fn new(n1: u32, n2: u32) -> Self {
        Palette { n1, n2, delta: None }
    }

    /// `n1 = ceil(n/t)`, `n2 = ceil(n^delta)`.
    pub fn graph_default(n: usize, t: usize, delta: f64) -> Self {
        Palette {
            n1: ceil_div(n as u64, t as u64) as u32,
            n2: reserve_size(n, delta),
            delta: Some(delta),
        }
    }

    /// `n1 = ceil(n/2)`, `n2 = ceil(n^delta)`.
    pub fn hyper_default(n: usize, delta: f64) -> Self {
        Self::graph_default(n, 2, delta)
    }

    pub fn size(&self) -> u32 {
        self.n1 + self.n2
    }

    pub fn contains(&self, c: Color) -> bool {
        c < self.size()
    }

    pub fn is_main(&self, c: Color) -> bool {
        c < self.n1
    }

    pub fn is_reserve(&self, c: Color) -> bool {
        c >= self.n1 && c < self.size()
    }

    pub fn main_colors(&self) -> std::ops::Range<Color> {
        0..self.n1
    }

    pub fn reserve_colors(&self) -> std::ops::Range<Color> {
        self.n1..self.size()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coloring {
    pub host: HostInstance,
    pub palette: Palette,
    colors: Vec<Option<Color>>,
}

impl Coloring {
    pub fn uncolored(host: HostInstance, palette: Palette) -> Self {
        Coloring { host, palette, colors: vec![None; host.edge_count()] }
    }

    pub fn from_colors(host: HostInstance, palette: Palette, colors: Vec<Option<Color>>) -> Result<Self> {
        if colors.len() != host.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "coloring has {} entries, host has {} edges",
                colors.len(),
                host.edge_count()
            )));
        }
        for &c in colors.iter().flatten() {
            if !palette.contains(c) {
                return Err(Error::PaletteMismatch { color: c, n1: palette.n1, n2: palette.n2 });
            }
        }
        Ok(Coloring { host, palette, colors })
    }

    /// A total coloring from plain colors.
    pub fn total(host: HostInstance, palette: Palette, colors: &[Color]) -> Result<Self> {
        Self::from_colors(host, palette, colors.iter().map(|&c| Some(c)).collect())
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    pub fn set(&mut self, e: EdgeId, c: Color) -> Result<()> {
        if !self.palette.contains(c) {
            return Err(Error::PaletteMismatch { color: c, n1: self.palette.n1, n2: self.palette.n2 });
        }
        self.colors[e] = Some(c);
        Ok(())
    }

    pub fn clear(&mut self, e: EdgeId) {
        self.colors[e] = None;
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn colors_used(&self) -> BTreeSet<Color> {
        self.colors.iter().flatten().copied().collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 * self.colors.len() + 64);
        let h = &self.host;
        let _ = writeln!(
            s,
            "odd-ramsey v1 kind={} n={} t={} k={} n1={} n2={}",
            h.kind.tag(),
            h.n,
            h.t,
            h.k,
            self.palette.n1,
            self.palette.n2
        );
        for (e, c) in self.colors.iter().enumerate() {
            match c {
                Some(c) => {
                    let _ = writeln!(s, "{e} {c}");
                }
                None => {
                    let _ = writeln!(s, "{e} -");
                }
            }
        }
        s
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        if !text.ends_with('\n') {
            return Err(parse_err(text.lines().count().max(1), "missing trailing newline"));
        }
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let (host, palette) = parse_header(header)?;
        let mut colors = vec![None; host.edge_count()];
        let mut expected: EdgeId = 0;
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let (Some(id), Some(col), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err(line, "expected `<edge-id> <color-id|->`"));
            };
            let id: EdgeId = id.parse().map_err(|_| parse_err(line, "bad edge id"))?;
            if id >= host.edge_count() {
                return Err(parse_err(line, &format!("edge id {id} out of range")));
            }
            if id != expected {
                if id < expected {
                    return Err(Error::DuplicateEdge { line, edge: id });
                }
                return Err(parse_err(line, &format!("missing edge line {expected}")));
            }
            if col != "-" {
                let c: Color = col.parse().map_err(|_| parse_err(line, "bad color id"))?;
                if !palette.contains(c) {
                    return Err(Error::PaletteMismatch { color: c, n1: palette.n1, n2: palette.n2 });
                }
                colors[id] = Some(c);
            }
            expected += 1;
        }
        if expected != host.edge_count() {
            return Err(parse_err(
                text.lines().count() + 1,
                &format!("missing edge line {expected}"),
            ));
        }
        Ok(Coloring { host, palette, colors })
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

fn parse_header(header: &str) -> Result<(HostInstance, Palette)> {
    let mut it = header.split_whitespace();
    if it.next() != Some("odd-ramsey") || it.next() != Some("v1") {
        return Err(parse_err(1, "header must start with `odd-ramsey v1`"));
    }
    let mut fields = [None::<&str>; 6];
    const KEYS: [&str; 6] = ["kind", "n", "t", "k", "n1", "n2"];
    for (slot, tok) in it.enumerate() {
        let (key, value) = tok.split_once('=').ok_or_else(|| parse_err(1, "expected key=value"))?;
        if slot >= KEYS.len() || KEYS[slot] != key {
            return Err(parse_err(1, &format!("unexpected header field `{key}`")));
        }
        fields[slot] = Some(value);
    }
    let get = |i: usize| fields[i].ok_or_else(|| parse_err(1, &format!("missing `{}`", KEYS[i])));
    let num = |i: usize| -> Result<usize> {
        get(i)?.parse().map_err(|_| parse_err(1, &format!("bad `{}`", KEYS[i])))
    };
    let (n, t, k) = (num(1)?, num(2)?, num(3)?);
    let host = match get(0)? {
        "bg" => {
            if k != 2 {
                return Err(parse_err(1, "bipartite hosts have k=2"));
            }
            HostInstance::bipartite(n, t)
        }
        "kh" => HostInstance::hypergraph(n, k),
        other => return Err(parse_err(1, &format!("unknown kind `{other}`"))),
    }
    .map_err(|e| parse_err(1, &e.to_string()))?;
    if host.kind == HostKind::Hypergraph && t != host.t {
        return Err(parse_err(1, "hypergraph hosts have t=2"));
    }
    let palette = Palette::new(num(4)? as u32, num(5)? as u32);
    Ok((host, palette))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_coloring() -> Coloring {
        let host = HostInstance::bipartite(2, 2).unwrap();
        Coloring::total(host, Palette::new(1, 1), &[0, 0, 0, 0]).unwrap()
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let c = zero_coloring();
        let text = c.to_text();
        assert_eq!(text, "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 0\n2 0\n3 0\n");
        let back = Coloring::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back, c);
    }

    #[test]
    fn uncolored_marker_round_trips() {
        let host = HostInstance::hypergraph(2, 3).unwrap();
        let mut c = Coloring::uncolored(host, Palette::new(1, 2));
        c.set(3, 2).unwrap();
        let back = Coloring::from_text(&c.to_text()).unwrap();
        assert_eq!(back.get(3), Some(2));
        assert_eq!(back.get(0), None);
        assert!(!back.is_total());
    }

    #[test]
    fn palette_mismatch() {
        let text = "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 2\n2 0\n3 0\n";
        assert!(matches!(Coloring::from_text(text), Err(Error::PaletteMismatch { color: 2, .. })));
    }

    #[test]
    fn missing_line_is_parse_error() {
        let text = "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 0\n3 0\n";
        assert!(matches!(Coloring::from_text(text), Err(Error::Parse { line: 4, .. })));
        let short = "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 0\n2 0\n";
        assert!(matches!(Coloring::from_text(short), Err(Error::Parse { .. })));
    }

    #[test]
    fn duplicate_line() {
        let text = "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 0\n1 0\n2 0\n3 0\n";
        assert!(matches!(Coloring::from_text(text), Err(Error::DuplicateEdge { line: 4, edge: 1 })));
    }

    #[test]
    fn malformed_header_and_trailing_newline() {
        assert!(Coloring::from_text("odd-ramsey v2 kind=bg\n").is_err());
        let no_nl = "odd-ramsey v1 kind=bg n=2 t=2 k=2 n1=1 n2=1\n0 0\n1 0\n2 0\n3 0";
        assert!(matches!(Coloring::from_text(no_nl), Err(Error::Parse { .. })));
    }

    #[test]
    fn default_palettes() {
        let p = Palette::graph_default(12, 2, 0.99);
        assert_eq!(p.n1, 6);
        assert_eq!(p.n2, 12);
        let q = Palette::graph_default(7, 3, 0.5);
        assert_eq!(q.n1, 3);
        assert_eq!(q.n2, 3);
        assert!(q.is_main(2) && q.is_reserve(3) && !q.contains(6));
    }
}
