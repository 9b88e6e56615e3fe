//! Small pattern graphs, canonical forms and subgraph censuses.
//!
//! Canonical codes are exact: a vertex ordering is chosen to minimise the
//! upper-triangle adjacency bit string, searching only orderings compatible
//! with an isomorphism-invariant colour refinement.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest pattern canonicalised by default.
pub const DEFAULT_CANON_CAP: usize = 10;
/// Largest pattern whose full edge-subset census is enumerated by default.
pub const DEFAULT_CENSUS_CAP: usize = 7;
/// Hard limit imposed by the 128-bit code.
pub const MAX_CANON_VERTICES: usize = 16;
/// Hard limit of the bitmask representation.
pub const MAX_PATTERN_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PatternGraph {
    r: usize,
    adj: Vec<u64>,
}

impl PatternGraph {
    pub fn new<I>(r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = PatternGraph::empty(r)?;
        for (u, v) in edges {
            if u >= r || v >= r {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) out of range for {r} vertices"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::domain(format!("duplicate edge ({u}, {v})")));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    pub fn empty(r: usize) -> Result<Self> {
        if r > MAX_PATTERN_VERTICES {
            return Err(Error::Size {
                what: "pattern vertex count",
                got: r,
                cap: MAX_PATTERN_VERTICES,
            });
        }
        Ok(PatternGraph { r, adj: vec![0; r] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        PatternGraph::new(n, edges.collect::<Vec<_>>())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("cycle needs at least 3 vertices, got {n}")));
        }
        PatternGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Path with `edges` edges (and `edges + 1` vertices).
    pub fn path(edges: usize) -> Result<Self> {
        PatternGraph::new(edges + 1, (0..edges).map(|i| (i, i + 1)))
    }

    /// `K_{a,b}` with side `A = 0..a` and side `B = a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        PatternGraph::new(a + b, edges.collect::<Vec<_>>())
    }

    pub fn vertex_count(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbor_mask(&self, u: usize) -> u64 {
        self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.r {
            for v in u + 1..self.r {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.iter().any(|&m| m == 0)
    }

    /// Connected components as vertex bitmasks, in order of smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.r {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & !comp;
                comp |= new;
                frontier |= new;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced subgraph on `mask`, vertices relabelled in increasing order.
    pub fn induced(&self, mask: u64) -> PatternGraph {
        let verts: Vec<usize> = (0..self.r).filter(|v| mask >> v & 1 == 1).collect();
        let mut g = PatternGraph {
            r: verts.len(),
            adj: vec![0; verts.len()],
        };
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                }
            }
        }
        g
    }

    pub fn without_isolated(&self) -> PatternGraph {
        let mask = (0..self.r)
            .filter(|&v| self.adj[v] != 0)
            .fold(0u64, |m, v| m | 1 << v);
        self.induced(mask)
    }

    pub fn disjoint_union(&self, other: &PatternGraph) -> Result<PatternGraph> {
        let shift = self.r;
        let edges = self
            .edges()
            .into_iter()
            .chain(other.edges().into_iter().map(|(u, v)| (u + shift, v + shift)));
        PatternGraph::new(self.r + other.r, edges.collect::<Vec<_>>())
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> PatternGraph {
        assert_eq!(perm.len(), self.r);
        let mut g = PatternGraph {
            r: self.r,
            adj: vec![0; self.r],
        };
        for (u, v) in self.edges() {
            g.adj[perm[u]] |= 1 << perm[v];
            g.adj[perm[v]] |= 1 << perm[u];
        }
        g
    }

    pub fn to_simple(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.r, self.edges()).expect("pattern edges are valid")
    }

    pub fn from_simple(g: &SimpleGraph) -> Result<Self> {
        PatternGraph::new(g.n(), g.edges())
    }

    /// Parses a builtin name (`K4`, `C5`, `P3`, `K2,3`, `E4`) or the text
    /// form: first line `r`, then one `u v` pair per line.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return parse_builtin(trimmed);
        }
        let mut lines = trimmed
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let r: usize = lines
            .next()
            .ok_or_else(|| Error::parse("empty pattern text"))?
            .parse()
            .map_err(|_| Error::parse("first line must be the vertex count"))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(Error::parse(format!("bad edge line `{line}`"))),
            }
        }
        PatternGraph::new(r, edges)
    }
}

fn parse_builtin(name: &str) -> Result<PatternGraph> {
    let bad = || Error::parse(format!("unknown pattern `{name}`"));
    let (kind, rest) = name.split_at(1);
    if kind == "K" {
        if let Some((a, b)) = rest.split_once(',') {
            let a = a.parse().map_err(|_| bad())?;
            let b = b.parse().map_err(|_| bad())?;
            return PatternGraph::complete_bipartite(a, b);
        }
    }
    let n: usize = rest.parse().map_err(|_| bad())?;
    match kind {
        "K" => PatternGraph::complete(n),
        "C" => PatternGraph::cycle(n),
        "P" => PatternGraph::path(n),
        "E" => PatternGraph::empty(n),
        _ => Err(bad()),
    }
}

impl FromStr for PatternGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternGraph::parse(s)
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.r)?;
        let edges = self.edges();
        for (i, (u, v)) in edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}-{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PatternStats {
    pub edge_count: u64,
    pub triangle_count: u64,
    /// Unordered paths with two edges.
    pub path2_count: u64,
    pub disjoint_edge_pairs: u64,
}

pub fn pattern_stats(g: &PatternGraph) -> PatternStats {
    let r = g.vertex_count();
    let mut triangles = 0;
    for a in 0..r {
        for b in a + 1..r {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..r {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    triangles += 1;
                }
            }
        }
    }
    let path2 = (0..r)
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let edges = g.edges();
    let mut disjoint = 0;
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a != c && a != d && b != c && b != d {
                disjoint += 1;
            }
        }
    }
    PatternStats {
        edge_count: edges.len() as u64,
        triangle_count: triangles,
        path2_count: path2,
        disjoint_edge_pairs: disjoint,
    }
}

/// An isomorphism class, identified by its minimal adjacency code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IsoClass {
    vertex_count: u8,
    edge_count: u16,
    code: u128,
}

impl IsoClass {
    /// The class of the graph with no vertices.
    pub const EMPTY: IsoClass = IsoClass {
        vertex_count: 0,
        edge_count: 0,
        code: 0,
    };

    pub fn vertex_count(&self) -> usize {
        self.vertex_count as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count as usize
    }

    pub fn code(&self) -> u128 {
        self.code
    }

    /// A representative graph, in canonical labelling.
    pub fn to_graph(&self) -> PatternGraph {
        let n = self.vertex_count();
        let total = n * n.saturating_sub(1) / 2;
        let mut edges = Vec::new();
        let mut pos = 0;
        for j in 1..n {
            for i in 0..j {
                if self.code >> (total - 1 - pos) & 1 == 1 {
                    edges.push((i, j));
                }
                pos += 1;
            }
        }
        PatternGraph::new(n, edges).expect("decoded code is a valid graph")
    }
}

impl fmt::Display for IsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_graph())
    }
}

/// Canonical form with the default size cap.
pub fn canonical_form(g: &PatternGraph) -> Result<IsoClass> {
    canonical_form_capped(g, DEFAULT_CANON_CAP)
}

pub fn canonical_form_capped(g: &PatternGraph, cap: usize) -> Result<IsoClass> {
    let cap = cap.min(MAX_CANON_VERTICES);
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::Size {
            what: "canonical form vertex count",
            got: n,
            cap,
        });
    }
    let cells = refined_cells(g);
    let total_bits = n * n.saturating_sub(1) / 2;
    let mut search = CanonSearch {
        g,
        total_bits,
        order: Vec::with_capacity(n),
        best: None,
    };
    let mut used = 0u64;
    search.descend(&cells, 0, 0, 0, &mut used, false);
    Ok(IsoClass {
        vertex_count: n as u8,
        edge_count: g.edge_count() as u16,
        code: search.best.unwrap_or(0),
    })
}

/// Ordered partition of the vertices from colour refinement seeded by degree.
fn refined_cells(g: &PatternGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = count_distinct(&colors);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&u| g.has_edge(v, u))
                    .map(|u| colors[u])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted = signatures.clone();
        sorted.sort();
        sorted.dedup();
        colors = signatures
            .iter()
            .map(|s| sorted.binary_search(s).expect("signature present"))
            .collect();
        let next = sorted.len();
        if next == classes {
            break;
        }
        classes = next;
    }
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.into_iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    cells.into_values().collect()
}

fn count_distinct(xs: &[usize]) -> usize {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct CanonSearch<'a> {
    g: &'a PatternGraph,
    total_bits: usize,
    order: Vec<usize>,
    best: Option<u128>,
}

impl CanonSearch<'_> {
    /// `prefix` holds the code bits of the first `order.len()` columns.
    fn descend(
        &mut self,
        cells: &[Vec<usize>],
        cell: usize,
        prefix: u128,
        prefix_bits: usize,
        used: &mut u64,
        strictly_better: bool,
    ) {
        if self.order.len() == self.g.vertex_count() {
            if self.best.map_or(true, |b| prefix < b) {
                self.best = Some(prefix);
            }
            return;
        }
        let mut cell = cell;
        while cells[cell].iter().all(|&v| *used >> v & 1 == 1) {
            cell += 1;
        }
        for &v in &cells[cell] {
            if *used >> v & 1 == 1 {
                continue;
            }
            let j = self.order.len();
            let mut column = 0u128;
            for &u in &self.order {
                column = column << 1 | self.g.has_edge(u, v) as u128;
            }
            let next = prefix << j | column;
            let next_bits = prefix_bits + j;
            let mut better = strictly_better;
            if !better {
                if let Some(best) = self.best {
                    let best_prefix = if next_bits == 0 {
                        0
                    } else {
                        best >> (self.total_bits - next_bits)
                    };
                    if next > best_prefix {
                        continue;
                    }
                    better = next < best_prefix;
                }
            }
            self.order.push(v);
            *used |= 1 << v;
            self.descend(cells, cell, next, next_bits, used, better);
            *used &= !(1 << v);
            self.order.pop();
        }
    }
}

/// Counts of subgraphs (edge subsets, isolated vertices dropped) by class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgraphCensus {
    entries: BTreeMap<IsoClass, u64>,
}

impl SubgraphCensus {
    pub fn get(&self, class: &IsoClass) -> u64 {
        self.entries.get(class).copied().unwrap_or(0)
    }

    /// Count for the class of `g` (which may contain isolated vertices).
    pub fn count_of(&self, g: &PatternGraph) -> Result<u64> {
        Ok(self.get(&canonical_form(&g.without_isolated())?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IsoClass, &u64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

pub fn census(g: &PatternGraph) -> Result<SubgraphCensus> {
    census_capped(g, DEFAULT_CENSUS_CAP)
}

pub fn census_capped(g: &PatternGraph, cap: usize) -> Result<SubgraphCensus> {
    let r = g.vertex_count();
    if r > cap.min(MAX_CANON_VERTICES) {
        return Err(Error::Size {
            what: "census pattern vertex count",
            got: r,
            cap: cap.min(MAX_CANON_VERTICES),
        });
    }
    let edges = g.edges();
    let e = edges.len();
    let mut entries: BTreeMap<IsoClass, u64> = BTreeMap::new();
    // Different edge subsets often compact to the same labelled graph.
    let mut memo: HashMap<(usize, Vec<u64>), IsoClass> = HashMap::new();
    for mask in 0u64..1 << e {
        let mut touched = 0u64;
        let mut sub = PatternGraph {
            r,
            adj: vec![0; r],
        };
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sub.adj[u] |= 1 << v;
                sub.adj[v] |= 1 << u;
                touched |= 1 << u | 1 << v;
            }
        }
        let compact = sub.induced(touched);
        let key = (compact.r, compact.adj.clone());
        let class = match memo.get(&key) {
            Some(c) => *c,
            None => {
                let c = canonical_form_capped(&compact, MAX_CANON_VERTICES)?;
                memo.insert(key, c);
                c
            }
        };
        *entries.entry(class).or_insert(0) += 1;
    }
    Ok(SubgraphCensus { entries })
}

/// One representative per isomorphism class on exactly `n` vertices.
pub fn all_graphs(n: usize) -> Result<Vec<PatternGraph>> {
    const CAP: usize = 7;
    if n > CAP {
        return Err(Error::Size {
            what: "graph enumeration vertex count",
            got: n,
            cap: CAP,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut classes = BTreeMap::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = PatternGraph::new(n, edges)?;
        classes.entry(canonical_form(&g)?).or_insert(g);
    }
    Ok(classes.into_keys().map(|c| c.to_graph()).collect())
}

/// Classes with between 2 and `max_vertices` vertices and no isolated vertex.
pub fn nonisolated_classes(max_vertices: usize) -> Result<Vec<PatternGraph>> {
    let mut out = Vec::new();
    for n in 2..=max_vertices {
        out.extend(all_graphs(n)?.into_iter().filter(|g| !g.has_isolated_vertex()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(s: &str) -> PatternGraph {
        s.parse().unwrap()
    }

    #[test]
    fn builtins_parse() {
        assert_eq!(pg("K4").edge_count(), 6);
        assert_eq!(pg("C5").edge_count(), 5);
        assert_eq!(pg("P3").vertex_count(), 4);
        assert_eq!(pg("K2,3").edge_count(), 6);
        assert_eq!(pg("E4").edge_count(), 0);
        assert!("X3".parse::<PatternGraph>().is_err());
        assert!("C2".parse::<PatternGraph>().is_err());
    }

    #[test]
    fn text_form_parses_and_validates() {
        let g = pg("3\n0 1\n1 2\n");
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!("3\n0 0".parse::<PatternGraph>().is_err());
        assert!("3\n0 3".parse::<PatternGraph>().is_err());
        assert!("3\n0 1\n1 0".parse::<PatternGraph>().is_err());
        assert!("3\n0 1 2".parse::<PatternGraph>().is_err());
    }

    #[test]
    fn canonical_relabelled_triangle() {
        let a = PatternGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let b = PatternGraph::new(3, [(2, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_path_equals_star_k12() {
        let path = PatternGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let star = PatternGraph::new(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&path).unwrap(), canonical_form(&star).unwrap());
    }

    #[test]
    fn canonical_distinguishes_star_and_path() {
        let star = pg("K1,3");
        let path = pg("P3");
        assert_ne!(canonical_form(&star).unwrap(), canonical_form(&path).unwrap());
    }

    #[test]
    fn canonical_cap_is_enforced() {
        let big = pg("K11");
        assert!(matches!(canonical_form(&big), Err(Error::Size { .. })));
        assert!(canonical_form_capped(&big, 12).is_ok());
    }

    #[test]
    fn code_round_trips_through_representative() {
        for g in all_graphs(5).unwrap() {
            let c = canonical_form(&g).unwrap();
            assert_eq!(canonical_form(&c.to_graph()).unwrap(), c);
        }
    }

    #[test]
    fn class_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn stats_examples() {
        let k4 = pattern_stats(&pg("K4"));
        assert_eq!(
            (k4.edge_count, k4.triangle_count, k4.path2_count, k4.disjoint_edge_pairs),
            (6, 4, 12, 3)
        );
        let c5 = pattern_stats(&pg("C5"));
        assert_eq!(
            (c5.edge_count, c5.triangle_count, c5.path2_count, c5.disjoint_edge_pairs),
            (5, 0, 5, 5)
        );
        let k2 = pattern_stats(&pg("K2"));
        assert_eq!(
            (k2.edge_count, k2.triangle_count, k2.path2_count, k2.disjoint_edge_pairs),
            (1, 0, 0, 0)
        );
    }

    #[test]
    fn census_examples() {
        let k4 = census(&pg("K4")).unwrap();
        assert_eq!(k4.count_of(&pg("K3")).unwrap(), 4);
        assert_eq!(k4.count_of(&pg("K2").disjoint_union(&pg("K2")).unwrap()).unwrap(), 3);

        let k3 = census(&pg("K3")).unwrap();
        assert_eq!(k3.len(), 4);
        assert_eq!(k3.get(&IsoClass::EMPTY), 1);
        assert_eq!(k3.count_of(&pg("K2")).unwrap(), 3);
        assert_eq!(k3.count_of(&pg("P2")).unwrap(), 3);
        assert_eq!(k3.count_of(&pg("K3")).unwrap(), 1);
    }

    #[test]
    fn census_cap_is_enforced() {
        assert!(matches!(census(&pg("K8")), Err(Error::Size { .. })));
    }
}
