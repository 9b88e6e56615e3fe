//! Block graphons, W-random graphs, the connected-density formula and the
//! deviation lower bound, plus Ramsey witnesses and a tiny exact oracle.

use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernels::{center, density, FiniteSpace, StepKernel};
use crate::patterns::{census_capped, PatternGraph, DEFAULT_CENSUS_CAP};
use crate::quasirandomness::Expander;
use crate::scalar::{Scalar, Q};

/// Largest `n_max` accepted by [`ramsey_exact`].
pub const RAMSEY_ORACLE_CAP: usize = 9;

/// `W(x,y) = (1 + [same block]) / 2` on `m` equal blocks.
pub fn block_graphon<S: Scalar>(m: usize) -> Result<StepKernel<S>> {
    if m == 0 {
        return Err(Error::domain("block count must be positive"));
    }
    let half = S::from_ratio(1, 2);
    let rows = (0..m)
        .map(|i| (0..m).map(|j| if i == j { S::one() } else { half.clone() }).collect())
        .collect();
    StepKernel::new(FiniteSpace::uniform(m)?, rows)
}

/// Samples a W-random graph: each vertex draws an atom by weight, each pair
/// is an edge with probability given by the kernel value.
pub fn w_random_graph<S: Scalar>(w: &StepKernel<S>, n: usize, seed: u64) -> Result<SimpleGraph> {
    if !w.is_graphon() {
        return Err(Error::domain("W-random graphs need a graphon"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cumulative: Vec<f64> = w
        .weights()
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x.to_f64();
            Some(*acc)
        })
        .collect();
    let m = w.atom_count();
    let types: Vec<usize> = (0..n)
        .map(|_| {
            let u = rng.gen::<f64>() * cumulative[m - 1];
            cumulative.partition_point(|&c| c <= u).min(m - 1)
        })
        .collect();
    // Edge iff a uniform u64 falls below the scaled kernel value; value 1
    // always gives an edge. One draw per pair keeps streams aligned.
    let thresholds: Vec<(u64, bool)> = w
        .values()
        .iter()
        .map(|v| {
            if v.is_one() {
                (0, true)
            } else {
                ((v.to_f64() * 18_446_744_073_709_551_616.0) as u64, false)
            }
        })
        .collect();
    Ok(SimpleGraph::from_upper_fn(n, |x, y| {
        let (t, always) = thresholds[types[x] * m + types[y]];
        (rng.next_u64() < t) | always
    }))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<SimpleGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("edge probability {p} is not in [0, 1]")));
    }
    let w = StepKernel::constant(FiniteSpace::uniform(1)?, p)?;
    w_random_graph(&w, n, seed)
}

pub fn circulant(n: usize, offsets: &[usize]) -> Result<SimpleGraph> {
    let mut g = SimpleGraph::empty(n);
    for &d in offsets {
        if d == 0 || d >= n {
            return Err(Error::domain(format!("offset {d} is not in 1..{n}")));
        }
        for i in 0..n {
            let j = (i + d) % n;
            g.set_edge(i, j, true);
        }
    }
    Ok(g)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Paley graph on `Z_q`: `x ~ y` iff `x - y` is a nonzero square.
pub fn paley(q: usize) -> Result<SimpleGraph> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::domain(format!("{q} is not a prime congruent to 1 mod 4")));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    let mut g = SimpleGraph::empty(q);
    for x in 0..q {
        for y in x + 1..q {
            if square[y - x] {
                g.set_edge(x, y, true);
            }
        }
    }
    Ok(g)
}

/// Exact `2^{-e(J)} m^{1-v(J)}` for connected `J`, checked against the
/// density of `J` in the centred block graphon.
pub fn connected_density(j: &PatternGraph, m: usize) -> Result<Q> {
    if j.vertex_count() == 0 || !j.is_connected() {
        return Err(Error::usage(format!("pattern {j} is not connected")));
    }
    let formula = Q::from_ratio(1, 2).powi(j.edge_count() as u32)
        / Q::from_int(m as i64).powi(j.vertex_count() as u32 - 1);
    let f = center(&block_graphon::<Q>(m)?, &Q::from_ratio(1, 2))?;
    let direct = density(j, &f)?;
    if direct != formula {
        return Err(Error::Invariant(format!(
            "t_J(W - 1/2) = {} but the formula gives {} for J = {j}, m = {m}",
            direct.render(),
            formula.render()
        )));
    }
    Ok(formula)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationBound {
    pub r: usize,
    pub m: usize,
    /// `sum_J C_{K_r,J} 2^{e(J)} t_J(W - 1/2)` over connected `J` on `r` vertices.
    pub connected_sum: Q,
    /// `2^{C(r-1,2)} m^{1-r}`.
    pub floor: Q,
    /// Number of connected spanning subgraphs of `K_r`.
    pub connected_spanning: u64,
    /// `2^{C(r,2)} t_{K_r}(W)` recomputed from the full census expansion.
    pub scaled_clique_density: Q,
}

pub fn deviation_lower_bound(r: usize, m: usize) -> Result<DeviationBound> {
    if r < 2 {
        return Err(Error::domain("r must be at least 2"));
    }
    if r > DEFAULT_CENSUS_CAP {
        return Err(Error::Size {
            what: "clique size",
            got: r,
            cap: DEFAULT_CENSUS_CAP,
        });
    }
    let w = block_graphon::<Q>(m)?;
    let half = Q::from_ratio(1, 2);
    let kr = PatternGraph::complete(r)?;
    let mut expander = Expander::for_kernel(&w, &half)?;
    let mut connected_sum = Q::zero();
    let mut connected_spanning = 0u64;
    let mut full = Q::zero();
    for (class, &count) in census_capped(&kr, DEFAULT_CENSUS_CAP)?.iter() {
        let scale = Q::from_int(2).powi(class.edge_count() as u32) * Q::from_int(count as i64);
        let term = scale * expander.class_density(class)?;
        full += term.clone();
        if class.vertex_count() == r && class.to_graph().is_connected() {
            connected_sum += term;
            connected_spanning += count;
        }
    }
    let floor = Q::from_int(2).powi(((r - 1) * (r - 2) / 2) as u32)
        / Q::from_int(m as i64).powi(r as u32 - 1);
    let scaled_clique_density = Q::from_int(2).powi((r * (r - 1) / 2) as u32) * density(&kr, &w)?;
    if full != scaled_clique_density {
        return Err(Error::Invariant(format!(
            "census expansion of K_{r} in the block graphon disagrees with its density"
        )));
    }
    if connected_sum < floor {
        return Err(Error::Invariant(format!(
            "connected sum {} is below the floor {} for r = {r}, m = {m}",
            connected_sum.render(),
            floor.render()
        )));
    }
    Ok(DeviationBound {
        r,
        m,
        connected_sum,
        floor,
        connected_spanning,
        scaled_clique_density,
    })
}

/// A graph with no `K_{k+1}` and no independent set of size `l + 1`.
#[derive(Clone, Debug)]
pub struct RamseyWitness {
    pub graph: SimpleGraph,
    pub k: usize,
    pub l: usize,
    pub clique_number: usize,
    pub independence_number: usize,
}

impl RamseyWitness {
    pub fn certify(graph: SimpleGraph, k: usize, l: usize) -> Result<Self> {
        let clique_number = graph.clique_number();
        let independence_number = graph.independence_number();
        if clique_number > k || independence_number > l {
            return Err(Error::domain(format!(
                "graph has clique number {clique_number} and independence number \
                 {independence_number}, not a ({k}, {l}) witness"
            )));
        }
        Ok(RamseyWitness {
            graph,
            k,
            l,
            clique_number,
            independence_number,
        })
    }
}

/// Smallest `n <= n_max` such that every graph on `n` vertices has a `K_s`
/// or an independent `t`-set; `None` if that exceeds `n_max`.
pub fn ramsey_exact(s: usize, t: usize, n_max: usize) -> Result<Option<usize>> {
    if s < 2 || t < 2 {
        return Err(Error::domain("s and t must be at least 2"));
    }
    if n_max > RAMSEY_ORACLE_CAP {
        return Err(Error::Size {
            what: "n_max",
            got: n_max,
            cap: RAMSEY_ORACLE_CAP,
        });
    }
    for n in 1..=n_max {
        if ramsey_witness_search(s, t, n)?.is_none() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// A graph on `n` vertices avoiding `K_s` and independent `t`-sets, found by
/// edge-by-edge backtracking, or `None` if none exists.
pub fn ramsey_witness_search(s: usize, t: usize, n: usize) -> Result<Option<SimpleGraph>> {
    if n > 16 {
        return Err(Error::Size {
            what: "vertex count",
            got: n,
            cap: 16,
        });
    }
    let mut search = WitnessSearch {
        n,
        s,
        t,
        adj: vec![0u16; n],
        non: vec![0u16; n],
    };
    if !search.descend(1, 0) {
        return Ok(None);
    }
    let mut g = SimpleGraph::empty(n);
    for j in 0..n {
        for i in 0..j {
            if search.adj[j] >> i & 1 == 1 {
                g.set_edge(i, j, true);
            }
        }
    }
    Ok(Some(g))
}

struct WitnessSearch {
    n: usize,
    s: usize,
    t: usize,
    adj: Vec<u16>,
    non: Vec<u16>,
}

impl WitnessSearch {
    /// Decides pair `(i, j)`; pairs are ordered by column `j`, then row `i`.
    fn descend(&mut self, j: usize, i: usize) -> bool {
        if j >= self.n {
            return true;
        }
        let (nj, ni) = if i + 1 == j { (j + 1, 0) } else { (j, i + 1) };
        let below = (1u16 << i) - 1;
        for present in [true, false] {
            let (rel, size) = if present {
                (&self.adj, self.s)
            } else {
                (&self.non, self.t)
            };
            // Cliques in this colour through the new pair use only earlier vertices.
            let common = rel[i] & rel[j] & below;
            if !has_clique(rel, common, size - 2) {
                let (rel_mut, bit_i, bit_j) = if present {
                    (&mut self.adj, 1u16 << i, 1u16 << j)
                } else {
                    (&mut self.non, 1u16 << i, 1u16 << j)
                };
                rel_mut[j] |= bit_i;
                rel_mut[i] |= bit_j;
                if self.descend(nj, ni) {
                    return true;
                }
                let rel_mut = if present { &mut self.adj } else { &mut self.non };
                rel_mut[j] &= !(1u16 << i);
                rel_mut[i] &= !(1u16 << j);
            }
        }
        false
    }
}

/// Whether `mask` contains a clique of `size` vertices in relation `rel`.
fn has_clique(rel: &[u16], mask: u16, size: usize) -> bool {
    if size == 0 {
        return true;
    }
    if (mask.count_ones() as usize) < size {
        return false;
    }
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(rel, rest & rel[v], size - 1) {
            return true;
        }
    }
    false
}

/// An isomorphism `a -> b` (vertex `v` of `a` maps to `perm[v]`), if any.
pub fn find_isomorphism(a: &SimpleGraph, b: &SimpleGraph) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    let (degrees_a, degrees_b) = (da.clone(), db.clone());
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        v: usize,
        a: &SimpleGraph,
        b: &SimpleGraph,
        da: &[usize],
        db: &[usize],
        perm: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == a.n() {
            return true;
        }
        for target in 0..b.n() {
            if used[target] || da[v] != db[target] {
                continue;
            }
            if (0..v).any(|u| a.has_edge(u, v) != b.has_edge(perm[u], target)) {
                continue;
            }
            perm[v] = target;
            used[target] = true;
            if extend(v + 1, a, b, da, db, perm, used) {
                return true;
            }
            used[target] = false;
        }
        false
    }
    extend(0, a, b, &degrees_a, &degrees_b, &mut perm, &mut used).then_some(perm)
}

/// Checks self-complementarity by an explicit vertex-map search.
pub fn is_self_complementary(g: &SimpleGraph) -> bool {
    find_isomorphism(g, &g.complement()).is_some()
}

/// `Σ_J C_{K_r,J}` over connected spanning `J`, used as a sanity count.
pub fn connected_spanning_count(r: usize) -> Result<u64> {
    let kr = PatternGraph::complete(r)?;
    Ok(census_capped(&kr, DEFAULT_CENSUS_CAP)?
        .iter()
        .filter(|(c, _)| c.vertex_count() == r && c.to_graph().is_connected())
        .map(|(_, &n)| n)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{self, embed_graph};

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn block_examples() {
        let one = block_graphon::<Q>(1).unwrap();
        assert_eq!(one.values(), &[q(1, 1)]);
        let two = block_graphon::<Q>(2).unwrap();
        assert_eq!(two.rows(), vec![vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 1)]]);
        for m in 1..6 {
            let w = block_graphon::<Q>(m).unwrap();
            assert_eq!(kernels::mean(&w), q(1, 2) + q(1, 2 * m as i64));
        }
        let f = center(&two, &q(1, 2)).unwrap();
        assert_eq!(kernels::mean(&f), q(1, 4));
    }

    #[test]
    fn w_random_extremes() {
        let zero = StepKernel::<Q>::constant(FiniteSpace::uniform(3).unwrap(), q(0, 1)).unwrap();
        assert_eq!(w_random_graph(&zero, 30, 1).unwrap().edge_count(), 0);
        let full = StepKernel::<Q>::constant(FiniteSpace::uniform(3).unwrap(), q(1, 1)).unwrap();
        assert_eq!(w_random_graph(&full, 30, 1).unwrap().edge_count(), 435);
        let w = block_graphon::<f64>(4).unwrap();
        let a = w_random_graph(&w, 200, 9).unwrap();
        let b = w_random_graph(&w, 200, 9).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn connected_density_examples() {
        assert_eq!(connected_density(&"K2".parse().unwrap(), 2).unwrap(), q(1, 4));
        assert_eq!(connected_density(&"K3".parse().unwrap(), 3).unwrap(), q(1, 72));
        // Two edges on three vertices: (1/2)^2 * 2^{-2}.
        assert_eq!(connected_density(&"P2".parse().unwrap(), 2).unwrap(), q(1, 16));
        assert!(connected_density(&"E2".parse().unwrap(), 2).is_err());
    }

    #[test]
    fn deviation_examples() {
        for m in 1..5 {
            let d = deviation_lower_bound(2, m).unwrap();
            assert_eq!(d.connected_sum, q(1, m as i64));
            assert_eq!(d.floor, q(1, m as i64));
        }
        let d = deviation_lower_bound(3, 2).unwrap();
        assert_eq!(d.floor, q(1, 2));
        // Connected spanning subgraphs of K_3: the triangle and three paths.
        assert_eq!(d.connected_spanning, 4);
        assert_eq!(d.connected_sum, q(4, 4));
        let d = deviation_lower_bound(4, 4).unwrap();
        assert!(d.connected_sum >= q(1, 8));
        assert_eq!(d.connected_spanning, 38);
    }

    #[test]
    fn paley_examples() {
        let c5 = SimpleGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(paley(5).unwrap().edges(), c5.edges());
        let p17 = paley(17).unwrap();
        assert!(p17.degrees().iter().all(|&d| d == 8));
        assert!(is_self_complementary(&p17));
        assert_eq!(p17.clique_number(), 3);
        assert_eq!(p17.independence_number(), 3);
        assert!(paley(7).is_err());
        assert!(paley(21).is_err());
        let w = RamseyWitness::certify(p17, 3, 3).unwrap();
        assert_eq!((w.clique_number, w.independence_number), (3, 3));
    }

    #[test]
    fn ramsey_small() {
        assert_eq!(ramsey_exact(2, 2, 3).unwrap(), Some(2));
        assert_eq!(ramsey_exact(3, 3, 6).unwrap(), Some(6));
        assert_eq!(ramsey_exact(3, 3, 5).unwrap(), None);
        assert!(ramsey_exact(3, 3, 10).is_err());
        let c8 = circulant(8, &[1, 4]).unwrap();
        assert!(RamseyWitness::certify(c8, 2, 3).is_ok());
        let w = ramsey_witness_search(3, 3, 5).unwrap().unwrap();
        assert!(RamseyWitness::certify(w, 2, 2).is_ok());
    }

    #[test]
    fn embedded_block_density() {
        let g = circulant(6, &[1]).unwrap();
        let w = embed_graph::<Q>(&g).unwrap();
        assert_eq!(kernels::mean(&w), q(12, 36));
    }
}
