//! Finite probability spaces, symmetric step kernels and the density engine.
//!
//! A step kernel is a symmetric matrix of values indexed by atoms of a
//! finite probability space. Graph embeddings have zero diagonal; graphon
//! step functions may carry nonzero diagonal blocks. On a finite space
//! "almost everywhere" and "everywhere" coincide.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::patterns::PatternGraph;
use crate::scalar::{Scalar, Q};

/// Tolerance on the total weight of a float-mode space.
pub const FLOAT_WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace<S> {
    weights: Vec<S>,
}

impl<S: Scalar> FiniteSpace<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("a space needs at least one atom"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::domain("atom weights must be nonnegative"));
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        let ok = match S::MODE {
            crate::scalar::Mode::Exact => total.is_one(),
            crate::scalar::Mode::Float => (total.to_f64() - 1.0).abs() <= FLOAT_WEIGHT_TOLERANCE,
        };
        if !ok {
            return Err(Error::domain(format!(
                "atom weights sum to {}, not 1",
                total.render()
            )));
        }
        Ok(FiniteSpace { weights })
    }

    pub fn uniform(atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::domain("a space needs at least one atom"));
        }
        Ok(FiniteSpace {
            weights: vec![S::from_ratio(1, atoms as i64); atoms],
        })
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepKernel<S> {
    space: FiniteSpace<S>,
    values: Vec<S>,
}

pub type ExactKernel = StepKernel<Q>;
pub type FloatKernel = StepKernel<f64>;

impl<S: Scalar> StepKernel<S> {
    /// Builds a kernel from a square, symmetric value matrix with
    /// sup-norm at most one.
    pub fn new(space: FiniteSpace<S>, rows: Vec<Vec<S>>) -> Result<Self> {
        let m = space.atom_count();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::domain(format!("value matrix must be {m}x{m}")));
        }
        for i in 0..m {
            for j in i + 1..m {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::domain(format!("values not symmetric at ({i}, {j})")));
                }
            }
        }
        let values: Vec<S> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| v.abs() > S::one()) {
            return Err(Error::domain("kernel sup-norm exceeds 1"));
        }
        Ok(StepKernel { space, values })
    }

    pub fn constant(space: FiniteSpace<S>, c: S) -> Result<Self> {
        let m = space.atom_count();
        StepKernel::new(space, vec![vec![c; m]; m])
    }

    pub fn zero(atoms: usize) -> Result<Self> {
        StepKernel::constant(FiniteSpace::uniform(atoms)?, S::zero())
    }

    /// Random signed kernel: values uniform in `[-1, 1]` symmetrised by
    /// averaging, random positive weights normalised to one.
    pub fn random_signed<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::domain("a space needs at least one atom"));
        }
        let raw: Vec<S> = (0..atoms).map(|_| S::sample_positive(rng)).collect();
        let total = raw.iter().cloned().fold(S::zero(), |a, b| a + b);
        let mut weights: Vec<S> = raw.into_iter().map(|w| w / total.clone()).collect();
        if S::MODE == crate::scalar::Mode::Float {
            // Push the rounding residue into the last atom.
            let head = weights[..atoms - 1]
                .iter()
                .cloned()
                .fold(S::zero(), |a, b| a + b);
            weights[atoms - 1] = S::one() - head;
        }
        let draws: Vec<Vec<S>> = (0..atoms)
            .map(|_| (0..atoms).map(|_| S::sample_signed(rng)).collect())
            .collect();
        let two = S::from_int(2);
        let rows = (0..atoms)
            .map(|i| {
                (0..atoms)
                    .map(|j| (draws[i][j].clone() + draws[j][i].clone()) / two.clone())
                    .collect()
            })
            .collect();
        StepKernel::new(FiniteSpace::new(weights)?, rows)
    }

    pub fn space(&self) -> &FiniteSpace<S> {
        &self.space
    }

    pub fn weights(&self) -> &[S] {
        self.space.weights()
    }

    pub fn atom_count(&self) -> usize {
        self.space.atom_count()
    }

    pub fn value(&self, i: usize, j: usize) -> &S {
        &self.values[i * self.atom_count() + j]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.values
            .chunks(self.atom_count())
            .map(|c| c.to_vec())
            .collect()
    }

    /// Values all lie in `[0, 1]`.
    pub fn is_graphon(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative() && *v <= S::one())
    }

    pub fn sup_norm(&self) -> S {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(S::zero(), S::max_of)
    }

    /// Simultaneously relabels atoms: old atom `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let m = self.atom_count();
        assert_eq!(perm.len(), m);
        let mut weights = vec![S::zero(); m];
        let mut values = vec![S::zero(); m * m];
        for i in 0..m {
            weights[perm[i]] = self.weights()[i].clone();
            for j in 0..m {
                values[perm[i] * m + perm[j]] = self.value(i, j).clone();
            }
        }
        StepKernel {
            space: FiniteSpace { weights },
            values,
        }
    }

    pub fn to_float(&self) -> FloatKernel {
        StepKernel {
            space: FiniteSpace {
                weights: self.weights().iter().map(Scalar::to_f64).collect(),
            },
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// `W_G`: uniform weights, 0/1 values, zero diagonal.
pub fn embed_graph<S: Scalar>(g: &SimpleGraph) -> Result<StepKernel<S>> {
    let n = g.n();
    let space = FiniteSpace::uniform(n)?;
    let mut values = vec![S::zero(); n * n];
    for (u, v) in g.edges() {
        values[u * n + v] = S::one();
        values[v * n + u] = S::one();
    }
    Ok(StepKernel { space, values })
}

/// Pointwise `w - p` for a graphon `w` and `p` in `(0, 1)`.
pub fn center<S: Scalar>(w: &StepKernel<S>, p: &S) -> Result<StepKernel<S>> {
    if !(*p > S::zero() && *p < S::one()) {
        return Err(Error::domain(format!("p = {} is not in (0, 1)", p.render())));
    }
    if !w.is_graphon() {
        return Err(Error::domain("only graphons can be centred"));
    }
    Ok(StepKernel {
        space: w.space.clone(),
        values: w.values.iter().map(|v| v.clone() - p.clone()).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct DensityOptions {
    /// Maximum number of atom assignments enumerated.
    pub max_work: f64,
    /// Exact mode cap on `v(H) * log2(atoms)`.
    pub max_exact_bits: f64,
    /// Evaluate complete bipartite components through codegree powers.
    pub kab_shortcut: bool,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            max_work: 2e9,
            max_exact_bits: 40.0,
            kab_shortcut: true,
        }
    }
}

impl DensityOptions {
    pub fn brute_force() -> Self {
        DensityOptions {
            kab_shortcut: false,
            ..DensityOptions::default()
        }
    }
}

/// Enumeration order for one connected component of a pattern.
#[derive(Clone, Debug)]
pub struct ComponentPlan {
    /// `back[i]` lists earlier positions adjacent to position `i`.
    back: Vec<Vec<usize>>,
    atoms: usize,
}

impl ComponentPlan {
    fn new(h: &PatternGraph, mask: u64, atoms: usize) -> Self {
        let verts: Vec<usize> = (0..h.vertex_count()).filter(|v| mask >> v & 1 == 1).collect();
        let mut order: Vec<usize> = Vec::with_capacity(verts.len());
        let mut placed = 0u64;
        while order.len() < verts.len() {
            let next = verts
                .iter()
                .copied()
                .filter(|v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    (
                        (h.neighbor_mask(v) & placed).count_ones(),
                        h.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex exists");
            order.push(next);
            placed |= 1 << next;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (0..i).filter(|&j| h.has_edge(order[j], v)).collect())
            .collect();
        ComponentPlan { back, atoms }
    }

    pub fn vertex_count(&self) -> usize {
        self.back.len()
    }

    pub fn edge_count(&self) -> usize {
        self.back.iter().map(Vec::len).sum()
    }
}

/// Sum over assignments of `prod weights * prod edge values` for one
/// component, generic over the ring used for accumulation.
pub(crate) fn enumerate_component<T>(plan: &ComponentPlan, weights: &[T], values: &[T]) -> T
where
    T: Clone + Zero + Mul<Output = T> + Add<Output = T>,
{
    let mut assign = vec![0usize; plan.vertex_count()];
    let one_like = T::zero();
    // Start the recursion with the empty product represented implicitly.
    recurse(plan, weights, values, 0, &mut assign, None, one_like)
}

fn recurse<T>(
    plan: &ComponentPlan,
    weights: &[T],
    values: &[T],
    depth: usize,
    assign: &mut [usize],
    partial: Option<T>,
    zero: T,
) -> T
where
    T: Clone + Zero + Mul<Output = T> + Add<Output = T>,
{
    let m = plan.atoms;
    let back = &plan.back[depth];
    let times = |p: &Option<T>, t: T| match p {
        Some(p) => p.clone() * t,
        None => t,
    };
    if depth + 1 == plan.vertex_count() {
        let mut acc = zero.clone();
        for y in 0..m {
            let mut t = weights[y].clone();
            for &p in back {
                t = t * values[assign[p] * m + y].clone();
            }
            acc = acc + t;
        }
        return times(&partial, acc);
    }
    let mut acc = zero.clone();
    'atoms: for x in 0..m {
        let mut t = times(&partial, weights[x].clone());
        for &p in back {
            t = t * values[assign[p] * m + x].clone();
            if t.is_zero() {
                continue 'atoms;
            }
        }
        if t.is_zero() {
            continue;
        }
        assign[depth] = x;
        acc = acc + recurse(plan, weights, values, depth + 1, assign, Some(t), zero.clone());
    }
    acc
}

/// Exact component sum: rescales weights and values to integers, sums in
/// `i128` when the magnitude bound allows and in `BigInt` otherwise.
pub(crate) fn exact_component_sum(plan: &ComponentPlan, weights: &[Q], values: &[Q]) -> Q {
    let dw = weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
    let dv = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let wi: Vec<BigInt> = weights.iter().map(|w| (w * &dw).to_integer()).collect();
    let vi: Vec<BigInt> = values.iter().map(|v| (v * &dv).to_integer()).collect();
    let v = plan.vertex_count() as u64;
    let e = plan.edge_count() as u64;
    let max_bits = |xs: &[BigInt]| xs.iter().map(|x| x.bits()).max().unwrap_or(0);
    let bound_bits = e * max_bits(&vi)
        + v * max_bits(&wi)
        + v * (plan.atoms as f64).log2().ceil() as u64
        + 2;
    let sum: BigInt = if bound_bits < 126 {
        let wn: Vec<i128> = wi.iter().map(|x| x.to_i128().expect("fits")).collect();
        let vn: Vec<i128> = vi.iter().map(|x| x.to_i128().expect("fits")).collect();
        BigInt::from(enumerate_component(plan, &wn, &vn))
    } else {
        enumerate_component(plan, &wi, &vi)
    };
    let den = num_traits::pow(dw, v as usize) * num_traits::pow(dv, e as usize);
    Q::new(sum, den)
}

/// `t_H(w)` with default options.
pub fn density<S: Scalar>(h: &PatternGraph, w: &StepKernel<S>) -> Result<S> {
    density_with(h, w, &DensityOptions::default())
}

pub fn density_with<S: Scalar>(
    h: &PatternGraph,
    w: &StepKernel<S>,
    opts: &DensityOptions,
) -> Result<S> {
    let m = w.atom_count();
    let non_isolated = (0..h.vertex_count()).filter(|&v| h.degree(v) > 0).count();
    check_budget::<S>(non_isolated, m, opts)?;
    let mut total = S::one();
    for mask in h.components() {
        if mask.count_ones() == 1 {
            continue;
        }
        let part = match complete_bipartite_sides(h, mask).filter(|_| opts.kab_shortcut) {
            Some((a, b)) => kab_density_with(a, b, w, opts)?,
            None => {
                let plan = ComponentPlan::new(h, mask, m);
                S::component_sum(&plan, w.weights(), w.values())
            }
        };
        if part.is_zero() {
            return Ok(S::zero());
        }
        total = total * part;
    }
    Ok(total)
}

fn check_budget<S: Scalar>(vertices: usize, atoms: usize, opts: &DensityOptions) -> Result<()> {
    let work = (atoms as f64).powi(vertices as i32);
    if work > opts.max_work {
        return Err(Error::Budget {
            needed: work,
            budget: opts.max_work,
        });
    }
    if S::MODE == crate::scalar::Mode::Exact {
        let bits = vertices as f64 * (atoms as f64).log2();
        if bits > opts.max_exact_bits {
            return Err(Error::Budget {
                needed: bits.exp2(),
                budget: opts.max_exact_bits.exp2(),
            });
        }
    }
    Ok(())
}

/// Side sizes if the component on `mask` is a complete bipartite graph.
fn complete_bipartite_sides(h: &PatternGraph, mask: u64) -> Option<(usize, usize)> {
    let start = mask.trailing_zeros() as usize;
    let mut side_a = 1u64 << start;
    let mut side_b = 0u64;
    let mut frontier = vec![(start, true)];
    let mut seen = 1u64 << start;
    while let Some((v, in_a)) = frontier.pop() {
        let mut nb = h.neighbor_mask(v);
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if seen >> u & 1 == 0 {
                seen |= 1 << u;
                if in_a {
                    side_b |= 1 << u;
                } else {
                    side_a |= 1 << u;
                }
                frontier.push((u, !in_a));
            }
        }
    }
    for v in 0..h.vertex_count() {
        let nb = h.neighbor_mask(v);
        if side_a >> v & 1 == 1 && nb != side_b {
            return None;
        }
        if side_b >> v & 1 == 1 && nb != side_a {
            return None;
        }
    }
    Some((side_a.count_ones() as usize, side_b.count_ones() as usize))
}

/// `W_x = E_y prod_i W(x_i, y)`.
pub fn codegree<S: Scalar>(w: &StepKernel<S>, xs: &[usize]) -> Result<S> {
    if xs.is_empty() {
        return Err(Error::usage("codegree needs a nonempty tuple"));
    }
    let m = w.atom_count();
    if let Some(&bad) = xs.iter().find(|&&x| x >= m) {
        return Err(Error::domain(format!("atom {bad} out of range for {m} atoms")));
    }
    Ok(codegree_unchecked(w, xs))
}

fn codegree_unchecked<S: Scalar>(w: &StepKernel<S>, xs: &[usize]) -> S {
    let mut acc = S::zero();
    'y: for y in 0..w.atom_count() {
        let mut t = w.weights()[y].clone();
        for &x in xs {
            let v = w.value(x, y);
            if v.is_zero() {
                continue 'y;
            }
            t = t * v.clone();
        }
        acc = acc + t;
    }
    acc
}

/// `t_{K_{a,b}}(w)` via `E_x W_x^t` over tuples of the smaller side.
pub fn kab_density<S: Scalar>(a: usize, b: usize, w: &StepKernel<S>) -> Result<S> {
    kab_density_with(a, b, w, &DensityOptions::default())
}

pub fn kab_density_with<S: Scalar>(
    a: usize,
    b: usize,
    w: &StepKernel<S>,
    opts: &DensityOptions,
) -> Result<S> {
    if a == 0 || b == 0 {
        return Err(Error::usage("K_{a,b} needs a, b >= 1"));
    }
    let (side, power) = (a.min(b), a.max(b));
    let m = w.atom_count();
    let multisets = binomial_f64(m + side - 1, side);
    let work = multisets * m as f64 * side as f64;
    if work > opts.max_work {
        return Err(Error::Budget {
            needed: work,
            budget: opts.max_work,
        });
    }
    // Nondecreasing tuples, each weighted by its multinomial coefficient.
    let mut tuple = vec![0usize; side];
    let mut acc = S::zero();
    let factorials: Vec<i64> = (0..=side as i64)
        .scan(1i64, |f, i| {
            if i > 0 {
                *f *= i;
            }
            Some(*f)
        })
        .collect();
    loop {
        let cd = codegree_unchecked(w, &tuple);
        if !cd.is_zero() {
            let mut weight = S::one();
            for &x in &tuple {
                weight = weight * w.weights()[x].clone();
            }
            let mut denom = 1i64;
            let mut run = 1usize;
            for i in 1..=side {
                if i < side && tuple[i] == tuple[i - 1] {
                    run += 1;
                } else {
                    denom *= factorials[run];
                    run = 1;
                }
            }
            let multinomial = S::from_ratio(factorials[side] / denom, 1);
            acc = acc + multinomial * weight * cd.powi(power as u32);
        }
        // Advance to the next nondecreasing tuple.
        let mut i = side;
        loop {
            if i == 0 {
                return Ok(acc);
            }
            i -= 1;
            if tuple[i] + 1 < m {
                let v = tuple[i] + 1;
                for t in &mut tuple[i..] {
                    *t = v;
                }
                break;
            }
        }
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Mean of the kernel, `t_{K_2}`.
pub fn mean<S: Scalar>(w: &StepKernel<S>) -> S {
    let m = w.atom_count();
    let mut acc = S::zero();
    for i in 0..m {
        for j in 0..m {
            acc = acc + w.weights()[i].clone() * w.weights()[j].clone() * w.value(i, j).clone();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn cycle(n: usize) -> SimpleGraph {
        SimpleGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn pg(s: &str) -> PatternGraph {
        s.parse().unwrap()
    }

    #[test]
    fn embed_triangle() {
        let w: ExactKernel = embed_graph(&SimpleGraph::complete(3)).unwrap();
        assert_eq!(w.weights(), &[q(1, 3), q(1, 3), q(1, 3)]);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { q(0, 1) } else { q(1, 1) };
                assert_eq!(*w.value(i, j), expected);
            }
        }
    }

    #[test]
    fn embed_empty_and_cycle() {
        let w: ExactKernel = embed_graph(&SimpleGraph::empty(2)).unwrap();
        assert!(w.values().iter().all(Zero::is_zero));
        let c5: ExactKernel = embed_graph(&cycle(5)).unwrap();
        for i in 0..5 {
            let row_sum = (0..5).fold(q(0, 1), |a, j| a + c5.value(i, j));
            assert_eq!(row_sum, q(2, 1));
        }
    }

    #[test]
    fn center_examples() {
        let w: ExactKernel = embed_graph(&SimpleGraph::complete(3)).unwrap();
        let f = center(&w, &q(2, 3)).unwrap();
        assert_eq!(*f.value(0, 0), q(-2, 3));
        assert_eq!(*f.value(0, 1), q(1, 3));
        let constant = StepKernel::constant(FiniteSpace::uniform(3).unwrap(), q(2, 5)).unwrap();
        let zero = center(&constant, &q(2, 5)).unwrap();
        assert!(zero.values().iter().all(Zero::is_zero));
        assert!(center(&w, &q(0, 1)).is_err());
        assert!(center(&w, &q(1, 1)).is_err());
        assert!(center(&f, &q(1, 2)).is_err());
    }

    #[test]
    fn density_examples() {
        let k3: ExactKernel = embed_graph(&SimpleGraph::complete(3)).unwrap();
        assert_eq!(density(&pg("K2"), &k3).unwrap(), q(2, 3));
        let c5: ExactKernel = embed_graph(&cycle(5)).unwrap();
        assert_eq!(density(&pg("K3"), &c5).unwrap(), q(0, 1));
    }

    #[test]
    fn codegree_examples() {
        let k3: ExactKernel = embed_graph(&SimpleGraph::complete(3)).unwrap();
        assert_eq!(codegree(&k3, &[0]).unwrap(), q(2, 3));
        let c5: ExactKernel = embed_graph(&cycle(5)).unwrap();
        // Oracle: count common neighbours of 0 and 2 directly.
        let common = (0..5)
            .filter(|&y| cycle(5).has_edge(0, y) && cycle(5).has_edge(2, y))
            .count();
        assert_eq!(common, 1);
        assert_eq!(codegree(&c5, &[0, 2]).unwrap(), q(1, 5));
        let zero: ExactKernel = StepKernel::zero(4).unwrap();
        assert_eq!(codegree(&zero, &[1, 2, 3]).unwrap(), q(0, 1));
        assert!(codegree(&zero, &[]).is_err());
    }

    #[test]
    fn kab_examples() {
        let mut rng = rand::thread_rng();
        let w: ExactKernel = StepKernel::random_signed(&mut rng, 4).unwrap();
        assert_eq!(kab_density(1, 1, &w).unwrap(), mean(&w));
        assert!(!kab_density(2, 2, &w).unwrap().is_negative());
        let c5: ExactKernel = embed_graph(&cycle(5)).unwrap();
        let brute = density_with(&pg("K2,3"), &c5, &DensityOptions::brute_force()).unwrap();
        assert_eq!(kab_density(2, 3, &c5).unwrap(), brute);
        assert_eq!(kab_density(3, 2, &c5).unwrap(), brute);
    }

    #[test]
    fn budget_is_enforced() {
        let w: FloatKernel = StepKernel::zero(100).unwrap();
        let opts = DensityOptions {
            max_work: 1e6,
            ..DensityOptions::default()
        };
        assert!(matches!(
            density_with(&pg("K4"), &w, &opts),
            Err(Error::Budget { .. })
        ));
        let exact: ExactKernel = StepKernel::zero(100).unwrap();
        assert!(matches!(
            density(&pg("K7"), &exact),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn kernel_validation() {
        let space = FiniteSpace::<Q>::uniform(2).unwrap();
        assert!(StepKernel::new(space.clone(), vec![vec![q(0, 1), q(1, 2)], vec![q(1, 3), q(0, 1)]]).is_err());
        assert!(StepKernel::new(space.clone(), vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(0, 1)]]).is_err());
        assert!(StepKernel::new(space, vec![vec![q(0, 1)]]).is_err());
        assert!(FiniteSpace::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(FiniteSpace::new(vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(FiniteSpace::new(vec![0.5, 0.5 + 1e-13]).is_ok());
    }
}
