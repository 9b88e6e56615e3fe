//! Centered codegree statistics, the signed-kernel inequality chain, the
//! census expansion of `t_H(W_G)` around `p`, and the discrepancy report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernels::{self, center, density, embed_graph, kab_density, StepKernel};
use crate::patterns::{census, canonical_form, pattern_stats, IsoClass, PatternGraph};
use crate::scalar::Scalar;

/// `mu = max_x |E_y f(x,y)|`, `nu = max_{x != y} max(0, E_z f(x,z) f(z,y))`
/// for `f = W_G - p`.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteredStats<S> {
    pub p: S,
    pub n: usize,
    pub mu: S,
    pub nu: S,
}

fn check_probability<S: Scalar>(p: &S) -> Result<()> {
    if *p > S::zero() && *p < S::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("p = {} is not in (0, 1)", p.render())))
    }
}

pub fn centered_stats<S: Scalar>(g: &SimpleGraph, p: &S) -> Result<CenteredStats<S>> {
    check_probability(p)?;
    let n = g.n();
    let n_s = S::from_int(n as i64);
    let np = n_s.clone() * p.clone();
    let mu = g
        .degrees()
        .into_iter()
        .map(|d| (S::from_int(d as i64) - np.clone()).abs())
        .fold(S::zero(), S::max_of)
        / n_s.clone();
    // E_z f(x,z) f(z,y) = (codeg - p (d_x + d_y) + n p^2) / n, so for a fixed
    // degree sum only the largest codegree matters.
    let np2 = np * p.clone();
    let nu = g
        .max_codegree_by_degree_sum()
        .into_iter()
        .enumerate()
        .filter_map(|(s, c)| c.map(|c| (s, c)))
        .map(|(s, c)| S::from_int(c as i64) - p.clone() * S::from_int(s as i64) + np2.clone())
        .fold(S::zero(), S::max_of)
        / n_s;
    Ok(CenteredStats {
        p: p.clone(),
        n,
        mu,
        nu,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub preconditions: Vec<(String, bool)>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, holds: bool) -> Self {
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            holds,
            preconditions: Vec::new(),
        }
    }

    /// Float comparison with the standard tolerance.
    pub fn float(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let holds = lhs <= rhs + crate::scalar::FLOAT_TOLERANCE;
        InequalityReport::new(name, lhs, rhs, holds)
    }

    pub fn with_precondition(mut self, name: impl Into<String>, satisfied: bool) -> Self {
        self.preconditions.push((name.into(), satisfied));
        self
    }

    pub fn preconditions_met(&self) -> bool {
        self.preconditions.iter().all(|(_, ok)| *ok)
    }
}

fn sup_norm_ok<S: Scalar>(w: &StepKernel<S>) -> bool {
    w.sup_norm() <= S::one()
}

/// `|t_{K_{a,b}}(w)| <= |t_{K_{c,b}}(w)|` for `a >= c`, `c` even.
pub fn verify_kab_monotone<S: Scalar>(
    a: usize,
    b: usize,
    c: usize,
    w: &StepKernel<S>,
) -> Result<InequalityReport> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::usage("a, b, c must be positive"));
    }
    if a < c || c % 2 == 1 {
        return Err(Error::usage(format!("need a >= c and c even, got a={a}, c={c}")));
    }
    let lhs = kab_density(a, b, w)?.abs();
    let rhs = kab_density(c, b, w)?.abs();
    Ok(InequalityReport::new(
        format!("kab a={a} b={b} c={c}"),
        lhs.to_f64(),
        rhs.to_f64(),
        S::approx_le(&lhs, &rhs),
    )
    .with_precondition("sup-norm <= 1", sup_norm_ok(w)))
}

/// `|t_H(w)| <= |t_{K_{2,d}}(w)|^{1/2}` for a vertex of degree `d`.
pub fn verify_local<S: Scalar>(
    h: &PatternGraph,
    d: usize,
    w: &StepKernel<S>,
) -> Result<InequalityReport> {
    if d == 0 || !(0..h.vertex_count()).any(|v| h.degree(v) == d) {
        return Err(Error::usage(format!("pattern {h} has no vertex of degree {d}")));
    }
    let lhs = density(h, w)?.abs();
    let base = kab_density(2, d, w)?.abs();
    Ok(InequalityReport::new(
        format!("local d={d} H={h}"),
        lhs.to_f64(),
        base.to_f64().sqrt(),
        S::le_root(&lhs, &base, 1, 2),
    )
    .with_precondition("sup-norm <= 1", sup_norm_ok(w)))
}

/// `|t_H(w)| <= |t_{K_{2,2u}}(w)|^{h/(2u)}` with `h = |B|`, `u = ceil(h/2)`,
/// for a bipartition `A ⊔ B` in which every vertex of `B` has degree >= 2.
pub fn verify_bipartite_global<S: Scalar>(
    h: &PatternGraph,
    side_b: &[usize],
    w: &StepKernel<S>,
) -> Result<InequalityReport> {
    let r = h.vertex_count();
    let mut in_b = 0u64;
    for &v in side_b {
        if v >= r {
            return Err(Error::usage(format!("vertex {v} out of range")));
        }
        in_b |= 1 << v;
    }
    for (u, v) in h.edges() {
        if (in_b >> u & 1) == (in_b >> v & 1) {
            return Err(Error::usage(format!("edge {u}-{v} does not cross the bipartition")));
        }
    }
    if let Some(&v) = side_b.iter().find(|&&v| h.degree(v) < 2) {
        return Err(Error::usage(format!("vertex {v} of B has degree below 2")));
    }
    let hb = in_b.count_ones() as u32;
    if hb == 0 {
        return Err(Error::usage("side B is empty"));
    }
    let two_u = 2 * hb.div_ceil(2);
    let lhs = density(h, w)?.abs();
    let base = kab_density(2, two_u as usize, w)?.abs();
    Ok(InequalityReport::new(
        format!("bipartite-global |B|={hb} H={h}"),
        lhs.to_f64(),
        base.to_f64().powf(hb as f64 / two_u as f64),
        S::le_root(&lhs, &base, hb, two_u),
    )
    .with_precondition("sup-norm <= 1", sup_norm_ok(w)))
}

/// `|t_H(w)| <= |t_{K_{2,2 ceil(h/2)}}(w)|^{1/4}` for `H` without isolated vertices.
pub fn verify_general_global<S: Scalar>(
    h: &PatternGraph,
    w: &StepKernel<S>,
) -> Result<InequalityReport> {
    if h.vertex_count() == 0 || h.has_isolated_vertex() {
        return Err(Error::usage(format!("pattern {h} has an isolated vertex")));
    }
    let two_u = 2 * h.vertex_count().div_ceil(2);
    let lhs = density(h, w)?.abs();
    let base = kab_density(2, two_u, w)?.abs();
    Ok(InequalityReport::new(
        format!("general-global H={h}"),
        lhs.to_f64(),
        base.to_f64().powf(0.25),
        S::le_root(&lhs, &base, 1, 4),
    )
    .with_precondition("sup-norm <= 1", sup_norm_ok(w)))
}

/// `t_{K_{2,a}}(f_{p,G}) = E_{x,y} f_{x,y}^a`, summed over all ordered pairs
/// including the diagonal.
pub fn k2a_centered_density<S: Scalar>(g: &SimpleGraph, p: &S, a: usize) -> Result<S> {
    check_probability(p)?;
    if a == 0 {
        return Err(Error::usage("a must be positive"));
    }
    let n = g.n();
    let degrees = g.degrees();
    let np2 = S::from_int(n as i64) * p.clone() * p.clone();
    let pair = |codeg: usize, s: usize| {
        (S::from_int(codeg as i64) - p.clone() * S::from_int(s as i64) + np2.clone()).powi(a as u32)
    };
    let mut sum = S::zero();
    for x in 0..n {
        sum = sum + pair(degrees[x], 2 * degrees[x]);
    }
    let mut off = S::zero();
    crate::graph::for_each_pair_codegree(g, |x, y, c| {
        off = off.clone() + pair(c as usize, degrees[x] + degrees[y]);
    });
    let two = S::from_int(2);
    let n_s = S::from_int(n as i64);
    Ok((sum + two * off) / (n_s.powi(a as u32 + 2)))
}

/// `|t_{K_{2,a}}(f_{p,G})| <= 2 nu^a + 2 n^{-2/3}`.
pub fn k2a_graph_bound<S: Scalar>(g: &SimpleGraph, p: &S, a: usize) -> Result<InequalityReport> {
    let stats = centered_stats(g, p)?;
    let lhs = k2a_centered_density(g, p, a)?.abs();
    let two = S::from_int(2);
    let nu_term = two.clone() * stats.nu.powi(a as u32);
    let n = g.n() as f64;
    let rhs = nu_term.to_f64() + 2.0 * n.powf(-2.0 / 3.0);
    // lhs - 2 nu^a <= 2 n^{-2/3}  iff  ((lhs - 2 nu^a) / 2)^3 <= n^{-2}.
    let excess = (lhs.clone() - nu_term) / two;
    let holds = if !excess.is_positive() {
        true
    } else {
        let n_sq = S::from_int(g.n() as i64).powi(2);
        S::approx_le(&(excess.powi(3) * n_sq), &S::one())
    };
    Ok(InequalityReport::new(format!("k2a a={a} n={}", g.n()), lhs.to_f64(), rhs, holds))
}

/// Census expansion of `t_H(W_G)` around `p`, caching `t_J(f)` per class.
pub struct Expander<S> {
    f: StepKernel<S>,
    p: S,
    cache: BTreeMap<IsoClass, S>,
}

#[derive(Clone, Debug)]
pub struct Expansion<S> {
    pub total: S,
    pub terms: BTreeMap<IsoClass, S>,
}

impl<S: Scalar> Expander<S> {
    pub fn new(g: &SimpleGraph, p: &S) -> Result<Self> {
        Expander::for_kernel(&embed_graph(g)?, p)
    }

    /// Expansion of a graphon `w` around `p`.
    pub fn for_kernel(w: &StepKernel<S>, p: &S) -> Result<Self> {
        check_probability(p)?;
        Ok(Expander {
            f: center(w, p)?,
            p: p.clone(),
            cache: BTreeMap::new(),
        })
    }

    pub fn centered(&self) -> &StepKernel<S> {
        &self.f
    }

    /// `t_J(f)` for the class representative.
    pub fn class_density(&mut self, class: &IsoClass) -> Result<S> {
        if let Some(t) = self.cache.get(class) {
            return Ok(t.clone());
        }
        let t = density(&class.to_graph(), &self.f)?;
        self.cache.insert(*class, t.clone());
        Ok(t)
    }

    pub fn expand(&mut self, h: &PatternGraph) -> Result<Expansion<S>> {
        let e = h.edge_count();
        let mut terms = BTreeMap::new();
        let mut total = S::zero();
        for (class, &count) in census(h)?.iter() {
            let t = self.class_density(class)?;
            let term = self.p.powi((e - class.edge_count()) as u32)
                * S::from_int(count as i64)
                * t;
            total = total + term.clone();
            terms.insert(*class, term);
        }
        Ok(Expansion { total, terms })
    }
}

pub fn expansion<S: Scalar>(h: &PatternGraph, g: &SimpleGraph, p: &S) -> Result<Expansion<S>> {
    Expander::new(g, p)?.expand(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub discrepancy: f64,
    /// Exact rendering of the discrepancy in exact mode.
    pub discrepancy_text: String,
    pub bound: f64,
    pub bound_holds: bool,
    pub mu: f64,
    pub nu_graph: f64,
    pub nu: f64,
    pub r: usize,
    pub n: usize,
    pub preconditions: Vec<(String, bool)>,
    pub side_checks: Vec<InequalityReport>,
}

impl DiscrepancyReport {
    pub fn theorem_applies(&self) -> bool {
        self.preconditions.iter().all(|(_, ok)| *ok)
    }
}

pub fn effective_distance_report<S: Scalar>(
    h: &PatternGraph,
    g: &SimpleGraph,
    p: &S,
    nu: &S,
) -> Result<DiscrepancyReport> {
    if !(nu.is_positive() && *nu <= S::one()) {
        return Err(Error::domain(format!("nu = {} is not in (0, 1]", nu.render())));
    }
    let stats = centered_stats(g, p)?;
    let wg = embed_graph::<S>(g)?;
    let f = center(&wg, p)?;
    let hs = pattern_stats(h);
    let e = hs.edge_count as u32;
    let t_h = density(h, &wg)?;
    let t_k2 = kernels::mean(&f);
    let t_k3 = density(&PatternGraph::complete(3)?, &f)?;
    let p_inv = S::one() / p.clone();
    let disc = (t_h * p_inv.powi(e)
        - S::one()
        - p_inv.clone() * S::from_int(hs.edge_count as i64) * t_k2
        - p_inv.powi(3) * S::from_int(hs.triangle_count as i64) * t_k3)
        .abs();

    let r = h.vertex_count();
    let n = g.n();
    let (pf, nuf) = (p.to_f64(), nu.to_f64());
    let mu = stats.mu.to_f64();
    let bound = (-2.0 * r as f64).exp2() * nuf.powf(7.0 / 6.0)
        + 3.0 * binomial(r + 1, 4) * mu * mu / (pf * pf);
    let r_cap = (1.0 / nuf).ln() / (12.0 * (8.0 / pf).ln());
    let preconditions = vec![
        ("nu >= nu_{p,G}".to_string(), *nu >= stats.nu),
        ("r <= log(1/nu) / (12 log(8/p))".to_string(), r as f64 <= r_cap),
        ("nu^{-2r} <= n".to_string(), -2.0 * r as f64 * nuf.ln() <= (n as f64).ln()),
    ];

    let mu_sq = stats.mu.powi(2);
    let k12 = density(&PatternGraph::path(2)?, &f)?.abs();
    let edge = PatternGraph::complete(2)?;
    let k2k2 = density(&edge.disjoint_union(&edge)?, &f)?.abs();
    let side_checks = vec![
        InequalityReport::new("|t_K12(f)| <= mu^2", k12.to_f64(), mu_sq.to_f64(), S::approx_le(&k12, &mu_sq)),
        InequalityReport::new("|t_K2+K2(f)| <= mu^2", k2k2.to_f64(), mu_sq.to_f64(), S::approx_le(&k2k2, &mu_sq)),
    ];
    let discrepancy = disc.to_f64();
    Ok(DiscrepancyReport {
        discrepancy,
        discrepancy_text: disc.render(),
        bound,
        bound_holds: discrepancy <= bound + crate::scalar::FLOAT_TOLERANCE,
        mu,
        nu_graph: stats.nu.to_f64(),
        nu: nuf,
        r,
        n,
        preconditions,
        side_checks,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The class of `K_{1,2}`, handy for reading expansion terms.
pub fn cherry_class() -> IsoClass {
    canonical_form(&PatternGraph::path(2).expect("valid")).expect("small")
}
