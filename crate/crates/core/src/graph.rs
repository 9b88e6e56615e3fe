//! Simple undirected graphs stored as row bitsets.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = SimpleGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::domain(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::domain(format!("self-loop at vertex {u}")));
        }
        self.set_edge(u, v, true);
        Ok(())
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (wu, bu) = (u / 64, u % 64);
        let (wv, bv) = (v / 64, v % 64);
        if present {
            self.bits[u * self.words + wv] |= 1 << bv;
            self.bits[v * self.words + wu] |= 1 << bu;
        } else {
            self.bits[u * self.words + wv] &= !(1 << bv);
            self.bits[v * self.words + wu] &= !(1 << bu);
        }
    }

    /// Builds a graph from a predicate queried once per pair `x < y`, in
    /// row-major order.
    pub fn from_upper_fn<F: FnMut(usize, usize) -> bool>(n: usize, mut edge: F) -> Self {
        let mut g = SimpleGraph::empty(n);
        let words = g.words;
        for x in 0..n {
            let row = &mut g.bits[x * words..(x + 1) * words];
            for y in x + 1..n {
                row[y / 64] |= (edge(x, y) as u64) << (y % 64);
            }
        }
        g.mirror_upper();
        g
    }

    /// Copies the upper triangle onto the lower one, 64x64 blocks at a time.
    fn mirror_upper(&mut self) {
        let (n, words) = (self.n, self.words);
        for bx in 0..words {
            for by in bx..words {
                let mut block = [0u64; 64];
                for (i, slot) in block.iter_mut().enumerate() {
                    let x = bx * 64 + i;
                    if x < n {
                        *slot = self.bits[x * words + by];
                    }
                }
                transpose64(&mut block);
                for (j, word) in block.iter().enumerate() {
                    let y = by * 64 + j;
                    if y < n {
                        self.bits[y * words + bx] |= word;
                    }
                }
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn complement(&self) -> SimpleGraph {
        SimpleGraph::from_upper_fn(self.n, |u, v| !self.has_edge(u, v))
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        and_popcount(self.row(u), self.row(v)) as usize
    }

    /// Relabels vertices so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> SimpleGraph {
        assert_eq!(perm.len(), self.n);
        let mut g = SimpleGraph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    pub fn triangle_count(&self) -> u64 {
        let mut count = 0u64;
        for (u, v) in self.edges() {
            count += and_popcount(self.row(u), self.row(v)) as u64;
        }
        count / 3
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Size of a largest clique.
    pub fn clique_number(&self) -> usize {
        let mut candidates = vec![0u64; self.words];
        for v in 0..self.n {
            candidates[v / 64] |= 1 << (v % 64);
        }
        let mut best = 0;
        self.expand_clique(0, candidates, &mut best);
        best
    }

    pub fn independence_number(&self) -> usize {
        self.complement().clique_number()
    }

    fn expand_clique(&self, size: usize, candidates: Vec<u64>, best: &mut usize) {
        let remaining: usize = candidates.iter().map(|w| w.count_ones() as usize).sum();
        if remaining == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + remaining <= *best {
            return;
        }
        let mut candidates = candidates;
        while let Some(v) = first_set(&candidates) {
            let total: usize = candidates.iter().map(|w| w.count_ones() as usize).sum();
            if size + total <= *best {
                return;
            }
            let next: Vec<u64> = candidates
                .iter()
                .zip(self.row(v))
                .map(|(c, r)| c & r)
                .collect();
            self.expand_clique(size + 1, next, best);
            candidates[v / 64] &= !(1 << (v % 64));
        }
    }

    /// For every vertex-degree sum `s`, the largest codegree among distinct
    /// pairs `x != y` with `deg(x) + deg(y) = s` (indexed by `s`).
    pub fn max_codegree_by_degree_sum(&self) -> Vec<Option<usize>> {
        let degrees = self.degrees();
        let mut best: Vec<Option<usize>> = vec![None; 2 * self.n.max(1)];
        for_each_pair_codegree(self, |x, y, c| {
            let slot = &mut best[degrees[x] + degrees[y]];
            let c = c as usize;
            if slot.map_or(true, |b| c > b) {
                *slot = Some(c);
            }
        });
        best
    }
}

/// In-place transpose of a 64x64 bit matrix: bit `j` of row `i` moves to
/// bit `i` of row `j`.
fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32;
    let mut mask: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & mask;
            a[k + j] ^= t;
            a[k] ^= t << j;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        mask ^= mask << j;
    }
}

fn first_set(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[inline(always)]
fn and_popcount_portable(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u64 {
    and_popcount_portable(a, b)
}

/// Rows per tile in the all-pairs scan; keeps a tile resident in L2.
const PAIR_TILE: usize = 256;

fn scan_pairs_portable<F: FnMut(usize, usize, u64)>(g: &SimpleGraph, visit: &mut F) {
    let n = g.n;
    let mut start = 0;
    while start < n {
        let end = (start + PAIR_TILE).min(n);
        for y in start + 1..n {
            let row_y = g.row(y);
            for x in start..end.min(y) {
                visit(x, y, and_popcount_portable(g.row(x), row_y));
            }
        }
        start = end;
    }
}

/// Calls `visit(x, y, codegree)` once for every pair `x < y`, in an
/// unspecified but deterministic order.
pub(crate) fn for_each_pair_codegree<F: FnMut(usize, usize, u64)>(g: &SimpleGraph, mut visit: F) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512vpopcntdq")
            && std::arch::is_x86_feature_detected!("avx512f")
        {
            // SAFETY: the required CPU features were detected above.
            unsafe { avx512::scan_pairs(g, &mut visit) };
            return;
        }
    }
    scan_pairs_portable(g, &mut visit);
}

#[cfg(target_arch = "x86_64")]
mod avx512 {
    use std::arch::x86_64::*;

    use super::{SimpleGraph, PAIR_TILE};

    const BX: usize = 4;
    const BY: usize = 6;

    #[inline]
    #[target_feature(enable = "avx512f")]
    unsafe fn load(row: *const u64, off: usize, mask: __mmask8) -> __m512i {
        _mm512_maskz_loadu_epi64(mask, row.add(off) as *const i64)
    }

    /// Codegrees of a `BX` by `BY` block of rows, register blocked.
    #[target_feature(enable = "avx512f,avx512vpopcntdq")]
    unsafe fn block(xs: &[*const u64; BX], ys: &[*const u64; BY], words: usize) -> [[u64; BY]; BX] {
        let mut acc = [[_mm512_setzero_si512(); BY]; BX];
        let mut off = 0;
        while off < words {
            let left = words - off;
            let mask: __mmask8 = if left >= 8 { 0xff } else { ((1u16 << left) - 1) as u8 };
            let mut xv = [_mm512_setzero_si512(); BX];
            for i in 0..BX {
                xv[i] = load(xs[i], off, mask);
            }
            for j in 0..BY {
                let yv = load(ys[j], off, mask);
                for i in 0..BX {
                    let both = _mm512_and_si512(xv[i], yv);
                    acc[i][j] = _mm512_add_epi64(acc[i][j], _mm512_popcnt_epi64(both));
                }
            }
            off += 8;
        }
        let mut out = [[0u64; BY]; BX];
        for i in 0..BX {
            for j in 0..BY {
                out[i][j] = _mm512_reduce_add_epi64(acc[i][j]) as u64;
            }
        }
        out
    }

    #[target_feature(enable = "avx512f,avx512vpopcntdq")]
    pub(super) unsafe fn scan_pairs<F: FnMut(usize, usize, u64)>(g: &SimpleGraph, visit: &mut F) {
        let n = g.n;
        let words = g.words;
        let base = g.bits.as_ptr();
        // Out-of-range block slots alias row 0; their results are discarded.
        let row = |v: usize| if v < n { base.add(v * words) } else { base };
        let mut tile = 0;
        while tile < n {
            let tile_end = (tile + PAIR_TILE).min(n);
            let mut y0 = tile;
            while y0 < n {
                let ys: [*const u64; BY] = std::array::from_fn(|j| row(y0 + j));
                let mut x0 = tile;
                while x0 < tile_end.min(y0 + BY) {
                    let xs: [*const u64; BX] = std::array::from_fn(|i| row(x0 + i));
                    let counts = block(&xs, &ys, words);
                    for (i, line) in counts.iter().enumerate() {
                        let x = x0 + i;
                        if x >= tile_end {
                            break;
                        }
                        for (j, &c) in line.iter().enumerate() {
                            let y = y0 + j;
                            if x < y && y < n {
                                visit(x, y, c);
                            }
                        }
                    }
                    x0 += BX;
                }
                y0 += BY;
            }
            tile = tile_end;
        }
    }
}
