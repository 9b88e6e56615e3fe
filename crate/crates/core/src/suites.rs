//! Seeded randomized suites for the unconditional inequalities and the
//! census expansion identity.
//!
//! Trial `i` of a run with master seed `s` depends only on `(suite, s, i)`,
//! so trials can be evaluated in any order or in parallel.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::gnp;
use crate::error::{Error, Result};
use crate::kernels::StepKernel;
use crate::patterns::{nonisolated_classes, PatternGraph};
use crate::quasirandomness::{
    expansion, k2a_graph_bound, verify_bipartite_global, verify_general_global,
    verify_kab_monotone, verify_local, InequalityReport,
};
use crate::scalar::{Mode, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kab,
    Local,
    BipartiteGlobal,
    GeneralGlobal,
    K2a,
    Expansion,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Kab,
        Suite::Local,
        Suite::BipartiteGlobal,
        Suite::GeneralGlobal,
        Suite::K2a,
        Suite::Expansion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kab => "kab",
            Suite::Local => "local",
            Suite::BipartiteGlobal => "bipartite-global",
            Suite::GeneralGlobal => "general-global",
            Suite::K2a => "k2a",
            Suite::Expansion => "expansion",
        }
    }

    /// Trial count used by the `all` meta-suite.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Expansion => 200,
            _ => 1000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub suite: Suite,
    pub seed: u64,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// SplitMix64 finalizer over the master seed and trial index.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn patterns_up_to(max: usize) -> &'static [PatternGraph] {
    static SIX: OnceLock<Vec<PatternGraph>> = OnceLock::new();
    let all = SIX.get_or_init(|| nonisolated_classes(6).expect("small patterns"));
    let end = all.partition_point(|h| h.vertex_count() <= max);
    &all[..end]
}

fn row(suite: Suite, seed: u64, instance: String, rep: InequalityReport) -> TrialRow {
    TrialRow {
        suite,
        seed,
        instance,
        lhs: rep.lhs,
        rhs: rep.rhs,
        slack: rep.slack,
        holds: rep.holds,
    }
}

fn random_kernel<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<(usize, StepKernel<S>)> {
    let atoms = rng.gen_range(2..=8);
    Ok((atoms, StepKernel::random_signed(rng, atoms)?))
}

/// Random bipartite pattern whose `B` side has all degrees at least 2.
fn random_bipartite(rng: &mut ChaCha8Rng) -> Result<(PatternGraph, Vec<usize>)> {
    let a = rng.gen_range(2..=3);
    let b = rng.gen_range(1..=3);
    let mut edges = Vec::new();
    for v in a..a + b {
        let mut side: Vec<usize> = (0..a).collect();
        side.shuffle(rng);
        let deg = rng.gen_range(2..=a);
        edges.extend(side[..deg].iter().map(|&u| (u, v)));
    }
    Ok((PatternGraph::new(a + b, edges)?, (a..a + b).collect()))
}

fn random_p<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    let choices = [(1, 3), (1, 2), (2, 3)];
    let (n, d) = choices[rng.gen_range(0..choices.len())];
    S::from_ratio(n, d)
}

fn trial_in<S: Scalar>(suite: Suite, seed: u64) -> Result<TrialRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Kab => {
            let (atoms, w) = random_kernel::<S>(&mut rng)?;
            let c = 2 * rng.gen_range(1..=2);
            let a = rng.gen_range(c..=c + 2);
            let b = rng.gen_range(1..=3);
            let rep = verify_kab_monotone(a, b, c, &w)?;
            Ok(row(suite, seed, format!("atoms={atoms} a={a} b={b} c={c}"), rep))
        }
        Suite::Local => {
            let (atoms, w) = random_kernel::<S>(&mut rng)?;
            let h = patterns_up_to(6).choose(&mut rng).expect("nonempty");
            let v = rng.gen_range(0..h.vertex_count());
            let d = h.degree(v);
            let rep = verify_local(h, d, &w)?;
            Ok(row(suite, seed, format!("atoms={atoms} d={d} H={h}"), rep))
        }
        Suite::BipartiteGlobal => {
            let (atoms, w) = random_kernel::<S>(&mut rng)?;
            let (h, side_b) = random_bipartite(&mut rng)?;
            let rep = verify_bipartite_global(&h, &side_b, &w)?;
            Ok(row(suite, seed, format!("atoms={atoms} H={h}"), rep))
        }
        Suite::GeneralGlobal => {
            let (atoms, w) = random_kernel::<S>(&mut rng)?;
            let h = patterns_up_to(6).choose(&mut rng).expect("nonempty");
            let rep = verify_general_global(h, &w)?;
            Ok(row(suite, seed, format!("atoms={atoms} H={h}"), rep))
        }
        Suite::K2a => {
            let n = rng.gen_range(2..=60);
            let density = rng.gen_range(0.05..0.95);
            let g = gnp(n, density, rng.gen())?;
            let p = random_p::<S>(&mut rng);
            let a = rng.gen_range(2..=6);
            let rep = k2a_graph_bound(&g, &p, a)?;
            Ok(row(suite, seed, format!("n={n} p={} a={a}", p.render()), rep))
        }
        Suite::Expansion => {
            let n = rng.gen_range(2..=10);
            let density = rng.gen_range(0.1..0.9);
            let g = gnp(n, density, rng.gen())?;
            let p = random_p::<S>(&mut rng);
            let h = patterns_up_to(5).choose(&mut rng).expect("nonempty");
            let lhs = crate::kernels::density(h, &crate::kernels::embed_graph::<S>(&g)?)?;
            let rhs = expansion(h, &g, &p)?.total;
            let gap = (lhs.clone() - rhs.clone()).abs().to_f64();
            Ok(TrialRow {
                suite,
                seed,
                instance: format!("n={n} p={} H={h}", p.render()),
                lhs: lhs.to_f64(),
                rhs: rhs.to_f64(),
                slack: -gap,
                holds: S::approx_eq(&lhs, &rhs),
            })
        }
    }
}

/// Runs trial `index` of `suite` under `master` seed.
pub fn run_trial(suite: Suite, master: u64, index: u64, mode: Mode) -> Result<TrialRow> {
    let seed = trial_seed(master, index);
    match mode {
        Mode::Exact => trial_in::<Q>(suite, seed),
        Mode::Float => trial_in::<f64>(suite, seed),
    }
}

/// Sequential convenience runner.
pub fn run_suite(suite: Suite, master: u64, trials: usize, mode: Mode) -> Result<Vec<TrialRow>> {
    (0..trials as u64)
        .map(|i| run_trial(suite, master, i, mode))
        .collect()
}
