//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every reference value here comes from a brute-force oracle written in
//! this file, never from the library code under test.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasiramsey::bounds::{
    self, best_bound, log_grid, ramsey_upper_bound, rho_prime, rho_properties_check, rho_second,
    smoothness_certificate, BoundConfig,
};
use quasiramsey::constructions::{
    block_graphon, circulant, deviation_lower_bound, find_isomorphism, gnp, paley, ramsey_exact,
    ramsey_witness_search, w_random_graph,
};
use quasiramsey::kernels::{center, density, embed_graph};
use quasiramsey::patterns::nonisolated_classes;
use quasiramsey::quasirandomness::{
    centered_stats, effective_distance_report, expansion, k2a_graph_bound, verify_general_global,
    verify_local,
};
use quasiramsey::suites::{run_suite, trial_seed, Suite};
use quasiramsey::{Mode, PatternGraph, Scalar, SimpleGraph, StepKernel, Q};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Homomorphism count of `h` into `g` by backtracking over vertex images.
fn hom_count(h: &PatternGraph, g: &SimpleGraph) -> u64 {
    fn go(h: &PatternGraph, g: &SimpleGraph, img: &mut Vec<usize>) -> u64 {
        let v = img.len();
        if v == h.vertex_count() {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.n() {
            if (0..v).all(|u| !h.has_edge(u, v) || g.has_edge(img[u], x)) {
                img.push(x);
                total += go(h, g, img);
                img.pop();
            }
        }
        total
    }
    go(h, g, &mut Vec::new())
}

fn brute_graph_density(h: &PatternGraph, g: &SimpleGraph) -> Q {
    let n = BigInt::from(g.n());
    Q::new(BigInt::from(hom_count(h, g)), num_traits::pow(n, h.vertex_count()))
}

/// `t_J(w)` by summing over every atom assignment.
fn brute_kernel_density(j: &PatternGraph, w: &StepKernel<Q>) -> Q {
    let m = w.atom_count();
    let v = j.vertex_count();
    let edges = j.edges();
    let mut total = Q::zero();
    let mut idx = vec![0usize; v];
    loop {
        let mut term = Q::one();
        for &x in &idx {
            term *= &w.weights()[x];
        }
        for &(a, b) in &edges {
            term *= w.value(idx[a], idx[b]);
        }
        total += term;
        let mut pos = 0;
        while pos < v {
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == v {
            return total;
        }
    }
}

fn criterion_1() -> Outcome {
    let patterns = nonisolated_classes(5).map_err(|e| e.to_string())?;
    let ps = [q(1, 3), q(1, 2), q(2, 3)];
    let mut checks = 0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(2..=10);
        let g = gnp(n, rng.gen_range(0.15..0.85), rng.gen()).map_err(|e| e.to_string())?;
        let wg = embed_graph::<Q>(&g).map_err(|e| e.to_string())?;
        for h in &patterns {
            let oracle = brute_graph_density(h, &g);
            let lib = density(h, &wg).map_err(|e| e.to_string())?;
            ensure(lib == oracle, format!("t_H(W_G) mismatch for H={h}, seed {seed}"))?;
            for p in &ps {
                let total = expansion(h, &g, p).map_err(|e| e.to_string())?.total;
                ensure(
                    total == oracle,
                    format!("expansion mismatch for H={h}, p={}, seed {seed}", p.render()),
                )?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact identities over {} patterns", patterns.len()))
}

fn criterion_2() -> Outcome {
    let mut rows = 0;
    let mut worst = f64::INFINITY;
    for suite in [Suite::Kab, Suite::Local, Suite::BipartiteGlobal, Suite::GeneralGlobal, Suite::K2a] {
        for mode in [Mode::Float, Mode::Exact] {
            let out = run_suite(suite, 20_240_601, 1000, mode).map_err(|e| e.to_string())?;
            if let Some(bad) = out.iter().find(|r| !r.holds) {
                return Err(format!("{suite} {mode} violated: {bad:?}"));
            }
            worst = out.iter().map(|r| r.slack).fold(worst, f64::min);
            rows += out.len();
        }
    }
    // Every pattern up to six vertices, against a fixed family of kernels.
    let patterns = nonisolated_classes(6).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let kernels: Vec<StepKernel<f64>> = (0..4)
        .map(|i| StepKernel::random_signed(&mut rng, 2 + 2 * i).expect("kernel"))
        .collect();
    for h in &patterns {
        for w in &kernels {
            let r = verify_general_global(h, w).map_err(|e| e.to_string())?;
            ensure(r.holds, format!("general-global failed for {h}"))?;
            let mut degrees: Vec<usize> = (0..h.vertex_count()).map(|v| h.degree(v)).collect();
            degrees.dedup();
            for d in degrees {
                let r = verify_local(h, d, w).map_err(|e| e.to_string())?;
                ensure(r.holds, format!("local failed for {h}, d={d}"))?;
            }
            rows += 1;
        }
    }
    for n in [20, 40, 60] {
        let g = gnp(n, 0.5, n as u64).map_err(|e| e.to_string())?;
        for a in 2..=8 {
            let r = k2a_graph_bound(&g, &q(1, 2), a).map_err(|e| e.to_string())?;
            ensure(r.holds, format!("k2a failed at n={n}, a={a}"))?;
        }
    }
    ensure(worst >= -1e-9, format!("slack {worst} below tolerance"))?;
    Ok(format!("{rows} checks, zero violations, min slack {worst:.3e}"))
}

fn criterion_3() -> Outcome {
    let connected: Vec<PatternGraph> = nonisolated_classes(5)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|j| j.is_connected())
        .collect();
    let mut checks = 0;
    for m in 1..=8usize {
        let f = center(&block_graphon::<Q>(m).map_err(|e| e.to_string())?, &q(1, 2))
            .map_err(|e| e.to_string())?;
        for j in &connected {
            let formula = q(1, 2).powi(j.edge_count() as u32)
                / Q::from_int(m as i64).powi(j.vertex_count() as u32 - 1);
            let lib = density(j, &f).map_err(|e| e.to_string())?;
            ensure(lib == formula, format!("J={j}, m={m}: {} != {}", lib.render(), formula.render()))?;
            if m <= 4 {
                ensure(brute_kernel_density(j, &f) == formula, format!("oracle disagrees J={j}, m={m}"))?;
            }
            checks += 1;
        }
    }
    for r in 2..=4usize {
        let spanning = connected_spanning_oracle(r);
        for m in 1..=8usize {
            let d = deviation_lower_bound(r, m).map_err(|e| e.to_string())?;
            let unit = Q::one() / Q::from_int(m as i64).powi(r as u32 - 1);
            let floor = Q::from_int(1i64 << ((r - 1) * (r - 2) / 2)) * unit.clone();
            ensure(d.connected_sum == Q::from_int(spanning as i64) * unit, format!("sum r={r} m={m}"))?;
            ensure(d.connected_sum >= floor, format!("floor fails r={r} m={m}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} exact checks"))
}

/// Connected spanning subgraphs of `K_r` by enumerating edge subsets.
fn connected_spanning_oracle(r: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len())
        .filter(|mask| {
            let mut reach = 1u64;
            loop {
                let mut next = reach;
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 && (reach >> a & 1 == 1 || reach >> b & 1 == 1) {
                        next |= 1 << a | 1 << b;
                    }
                }
                if next == reach {
                    break;
                }
                reach = next;
            }
            reach == (1 << r) - 1
        })
        .count() as u64
}

fn criterion_4() -> Outcome {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut report = Vec::new();
    for m in [2usize, 4, 8] {
        let n = 500 * m * m;
        let w = block_graphon::<f64>(m).map_err(|e| e.to_string())?;
        let (lo, hi) = (1.0 / (8.0 * m as f64), 2.0 / m as f64);
        let seeds: Vec<u64> = (0..20).map(|i| trial_seed(4, i)).collect();
        let results: Vec<(f64, f64)> = std::thread::scope(|scope| {
            let chunks: Vec<_> = seeds
                .chunks(seeds.len().div_ceil(threads))
                .map(|chunk| {
                    let w = &w;
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|&s| {
                                let g = w_random_graph(w, n, s).expect("sample");
                                let st = centered_stats(&g, &0.5).expect("stats");
                                (st.mu, st.nu)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            chunks.into_iter().flat_map(|h| h.join().expect("worker")).collect()
        });
        let inside = results
            .iter()
            .filter(|(mu, nu)| (lo..=hi).contains(mu) && (lo..=hi).contains(nu))
            .count();
        let mean_mu = results.iter().map(|r| r.0).sum::<f64>() / 20.0;
        let mean_nu = results.iter().map(|r| r.1).sum::<f64>() / 20.0;
        report.push(format!("m={m}: {inside}/20 in band, mean mu {mean_mu:.4}, mean nu {mean_nu:.4}"));
        ensure(inside >= 18, report.join("; "))?;
    }
    Ok(report.join("; "))
}

/// `rho_{r,eps}` in exact arithmetic.
fn rho_exact(r: u32, eps: &Q, x: &Q) -> Q {
    if *x > Q::one() {
        return rho_exact(r, eps, &(Q::one() / x));
    }
    if x <= eps {
        return Q::zero();
    }
    let y = (x - eps) / (Q::one() - eps);
    let tau = y.clone().powi(3) * (Q::from_int(10) - Q::from_int(15) * &y + Q::from_int(6) * y.clone().powi(2));
    Q::from_int(r as i64 - 4) / Q::from_int(4) * tau
}

fn criterion_5() -> Outcome {
    let h = q(1, 10_000_000_000);
    let mut fd_worst: f64 = 0.0;
    let mut certs = 0;
    for r in 5..=12u32 {
        for eps in [0.1, 0.25, 0.4] {
            let cfg = BoundConfig::new(r, eps, 1.0).map_err(|e| e.to_string())?;
            for rep in rho_properties_check(&cfg, 10_000).map_err(|e| e.to_string())? {
                ensure(rep.holds, format!("r={r} eps={eps}: {} fails ({} vs {})", rep.name, rep.lhs, rep.rhs))?;
            }
            let eps_q = Q::from_float(eps).expect("finite");
            for i in 1..=200 {
                let xf = 3.0 * i as f64 / 200.0 - 0.0071;
                let x = Q::from_float(xf).expect("finite");
                let up = rho_exact(r, &eps_q, &(&x + &h));
                let mid = rho_exact(r, &eps_q, &x);
                let down = rho_exact(r, &eps_q, &(&x - &h));
                let d1 = Scalar::to_f64(&((&up - &down) / (Q::from_int(2) * &h)));
                let d2 = Scalar::to_f64(&((&up - Q::from_int(2) * &mid + &down) / (&h * &h)));
                let e1 = (d1 - rho_prime(&cfg, xf)).abs() / d1.abs().max(1.0);
                let e2 = (d2 - rho_second(&cfg, xf)).abs() / d2.abs().max(1.0);
                fd_worst = fd_worst.max(e1).max(e2);
            }
            let threshold = (200.0 * (r as f64).powi(4) / (eps * eps)).ceil();
            let mut rng = ChaCha8Rng::seed_from_u64(r as u64 * 1000 + (eps * 100.0) as u64);
            for _ in 0..100 {
                let k = (threshold * rng.gen_range(0.0f64..3.0).exp()).round() as u64;
                let l = (threshold * rng.gen_range(0.0f64..3.0).exp()).round() as u64;
                let cert = smoothness_certificate(&cfg, k, l).map_err(|e| e.to_string())?;
                ensure(cert.size_precondition, "sampled pair below the size threshold")?;
                if let Some(bad) = cert.checks().find(|c| !c.holds) {
                    return Err(format!("r={r} eps={eps} k={k} l={l}: {} ({} > {})", bad.name, bad.lhs, bad.rhs));
                }
                certs += 1;
            }
        }
    }
    ensure(fd_worst <= 1e-6, format!("finite differences disagree by {fd_worst:e}"))?;
    Ok(format!("24 rho grids, {certs} certificates, worst derivative gap {fd_worst:.2e}"))
}

/// `ln C(2k, k)` by summing `ln((k + i) / i)` with compensation.
fn log_central_binomial_oracle(k: u64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in 1..=k {
        let y = (k as f64 / i as f64).ln_1p() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn criterion_6() -> Outcome {
    let cfg = BoundConfig::new(8, 0.25, 1.0).map_err(|e| e.to_string())?;
    let grid = log_grid(1000, 10_000_000, 25);
    let mut not_improved = Vec::new();
    let mut closed_worst: f64 = 0.0;
    let mut es_worst: f64 = 0.0;
    for &k in &grid {
        let b = ramsey_upper_bound(&cfg, k, k).map_err(|e| e.to_string())?;
        if (k as f64) >= 2f64.powf(cfg.c_eps * 8.0) && !(b.bound_log.ln() < b.es_baseline_log.ln()) {
            not_improved.push(k);
        }
        // bound / ES against 2^{C r^2} / (2k).
        let closed_ratio = 64.0 * std::f64::consts::LN_2 - (2.0 * k as f64).ln();
        closed_worst = closed_worst.max((b.ratio_log.ln() - closed_ratio).exp_m1().abs());
        let es = log_central_binomial_oracle(k);
        es_worst = es_worst.max((b.es_baseline_log.ln() - es).abs() / es);
        if let Some(exact) = &b.exact_value {
            let binom = (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(k + i) / BigUint::from(i));
            let closed = (binom << 64u32) / BigUint::from(2 * k);
            let gap = (bounds::ln_biguint(exact) - bounds::ln_biguint(&closed)).abs();
            closed_worst = closed_worst.max(gap.exp_m1());
        }
        let best = best_bound(k, k, 0.25, 1.0).map_err(|e| e.to_string())?;
        let c = best.c_derived.ok_or("best_bound has no derived c")?;
        let log_k = (k as f64).ln();
        ensure(
            best.ratio_log.ln() <= -c * log_k * log_k + 1e-9,
            format!("best_bound ratio above exp(-c log^2 k) at k={k}"),
        )?;
    }
    ensure(closed_worst <= 1e-9, format!("closed form off by {closed_worst:e}"))?;
    ensure(es_worst <= 1e-12, format!("binomial off by {es_worst:e}"))?;
    let regime = best_bound(10_000_000, 10_000_000, 0.25, 1.0).map_err(|e| e.to_string())?.regime;
    let detail = format!(
        "closed form within {closed_worst:.1e}, best_bound regime at 1e7 {regime}"
    );
    if !not_improved.is_empty() {
        return Err(format!(
            "bound exceeds Erdős–Szekeres at {} of {} grid points (k={}..{}); {detail}",
            not_improved.len(),
            grid.len(),
            not_improved[0],
            not_improved[not_improved.len() - 1]
        ));
    }
    Ok(detail)
}

fn clique_or_independent_4_subset(g: &SimpleGraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let e = (0..4)
                        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                        .filter(|&(i, j)| g.has_edge(q[i], q[j]))
                        .count();
                    if e == 0 || e == 6 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn triangles_oracle(g: &SimpleGraph) -> u64 {
    let n = g.n();
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let e = g.has_edge(a, b) as u8 + g.has_edge(b, c) as u8 + g.has_edge(a, c) as u8;
                t += (e == 0 || e == 3) as u64;
            }
        }
    }
    t
}

fn criterion_7() -> Outcome {
    ensure(ramsey_exact(3, 3, 6).map_err(|e| e.to_string())? == Some(6), "R(3,3) != 6")?;
    let w = ramsey_witness_search(3, 3, 5).map_err(|e| e.to_string())?.ok_or("no witness on 5 vertices")?;
    let c5 = SimpleGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).expect("C5");
    ensure(find_isomorphism(&w, &c5).is_some(), "witness is not C5")?;
    let p17 = paley(17).map_err(|e| e.to_string())?;
    ensure(!clique_or_independent_4_subset(&p17), "Paley(17) has a monochromatic 4-set")?;
    ensure(p17.clique_number() == 3 && p17.independence_number() == 3, "Paley(17) numbers")?;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(rng.gen_range(1..=12), rng.gen_range(0.0..1.0), seed).map_err(|e| e.to_string())?;
        let (mono, formula) = bounds::goodman(&g);
        let oracle = triangles_oracle(&g);
        ensure(mono == oracle && formula == oracle, format!("Goodman fails on seed {seed}"))?;
    }
    let start = Instant::now();
    let r34 = ramsey_exact(3, 4, 9).map_err(|e| e.to_string())?;
    let w8 = ramsey_witness_search(3, 4, 8).map_err(|e| e.to_string())?.ok_or("no (3,4) witness")?;
    let c8 = circulant(8, &[1, 4]).map_err(|e| e.to_string())?;
    let stretch = r34 == Some(9) && find_isomorphism(&w8, &c8).is_some();
    Ok(format!(
        "R(3,3)=6 with C5, Paley(17) certified, Goodman on 100 graphs; stretch R(3,4)=9 with C8(1,4): {} in {:.2}s",
        if stretch { "yes" } else { "no" },
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_8() -> Outcome {
    let patterns: Vec<PatternGraph> = ["K3", "C4", "K4", "P3", "K1,3", "C5", "K2,3"]
        .iter()
        .map(|s| s.parse().expect("builtin"))
        .collect();
    let mut instances = 0;
    for seed in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let n = rng.gen_range(8..=40);
        let g = if seed % 3 == 0 {
            paley([13, 17, 29, 37][seed as usize / 3]).map_err(|e| e.to_string())?
        } else {
            gnp(n, rng.gen_range(0.2..0.8), seed).map_err(|e| e.to_string())?
        };
        for p in [q(1, 3), q(1, 2), q(2, 3)] {
            let stats = centered_stats(&g, &p).map_err(|e| e.to_string())?;
            let nu = if stats.nu.is_positive() { stats.nu.clone() } else { q(1, g.n() as i64) };
            for h in &patterns {
                let rep = effective_distance_report(h, &g, &p, &nu).map_err(|e| e.to_string())?;
                ensure(!rep.theorem_applies(), format!("all preconditions met for {h} on n={}", g.n()))?;
                let n_ok = rep.preconditions.iter().find(|(name, _)| name == "nu^{-2r} <= n").map(|x| x.1);
                ensure(n_ok == Some(false), "size precondition unexpectedly met")?;
                for side in &rep.side_checks {
                    ensure(side.holds, format!("{} fails for {h}", side.name))?;
                }
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} instances, all flagged, side inequalities hold"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("expansion identity", criterion_1, Duration::from_secs(120)),
        ("unconditional inequality suites", criterion_2, Duration::from_secs(300)),
        ("block graphon formula", criterion_3, Duration::from_secs(60)),
        ("statistics scaling", criterion_4, Duration::from_secs(600)),
        ("rho and phi calculus", criterion_5, Duration::from_secs(120)),
        ("bound reproduction", criterion_6, Duration::from_secs(60)),
        ("Ramsey semantics oracle", criterion_7, Duration::from_secs(120)),
        ("applicability honesty", criterion_8, Duration::from_secs(60)),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let number = i + 1;
        if only.is_some_and(|o| o != number) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
        let elapsed = start.elapsed();
        let timing = format!(
            "{:.1}s of {}s{}",
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if elapsed > *budget { ", over budget" } else { "" }
        );
        match result {
            Ok(detail) => println!("criterion {number} ({name}): PASS [{timing}] {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {number} ({name}): FAIL [{timing}] {detail}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
