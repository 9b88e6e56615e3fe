mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use quasiramsey::bounds::{
    self, best_bound, inductive_step_preconditions, log_grid, ramsey_upper_bound,
    smoothness_certificate, BoundConfig, BoundRow,
};
use quasiramsey::constructions::{
    block_graphon, connected_density, deviation_lower_bound, ramsey_exact,
    ramsey_witness_search, w_random_graph,
};
use quasiramsey::io::{load_graph, load_kernel, to_edge_list, to_graph6, AnyKernel};
use quasiramsey::kernels::{density, embed_graph};
use quasiramsey::patterns::nonisolated_classes;
use quasiramsey::quasirandomness::{centered_stats, InequalityReport};
use quasiramsey::suites::{run_trial, Suite, TrialRow};
use quasiramsey::{Error, Mode, PatternGraph, Scalar, SimpleGraph, StepKernel};

use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "quasiramsey", version, about = "Effective quasirandomness and Ramsey bound propagation")]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Master seed for randomized work.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "exact", global = true)]
    mode: ModeArg,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Homomorphism density of a pattern in a graph or kernel.
    Density {
        #[arg(long)]
        pattern: String,
        #[arg(long, conflicts_with = "kernel", required_unless_present = "kernel")]
        graph: Option<String>,
        #[arg(long)]
        kernel: Option<String>,
    },
    /// Centered degree and codegree statistics of a graph.
    Stats {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "1/2")]
        p: String,
    },
    /// Randomized inequality suites: kab, local, bipartite-global,
    /// general-global, k2a, expansion, or all.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Block-graphon experiments and graph export.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Ramsey upper bound for one (k, l).
    Bound(BoundArgs),
    /// Bound table over a logarithmic grid of k.
    Table(TableArgs),
    /// Exhaustive Ramsey-semantics oracles.
    Oracle {
        #[command(subcommand)]
        what: Oracle,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Centred connected densities of the block graphon against the formula.
    BlockDensity {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
    },
    /// Lower bound on the clique-density deviation of the block graphon.
    Deviation {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// Statistics of W-random graphs from the block graphon, one row per seed.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Print a graph as an edge list or graph6.
    Graph {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value = "graph6")]
        export: Export,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Graph6,
    EdgeList,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    l: u64,
    #[arg(long, default_value_t = 8)]
    r: u32,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long = "Ceps", default_value_t = BoundConfig::DEFAULT_C_EPS)]
    c_eps: f64,
    /// Constant in the hypothesis r <= c log k.
    #[arg(long = "ceps-small", default_value_t = BoundConfig::DEFAULT_C_EPS_SMALL)]
    c_eps_small: f64,
    /// Choose r from k, eps and C_eps instead of taking it as given.
    #[arg(long)]
    best: bool,
    /// Emit the smoothness certificate and inductive-step checks instead.
    #[arg(long, conflicts_with = "best")]
    certificate: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 1000)]
    kmin: u64,
    #[arg(long, default_value_t = 10_000_000)]
    kmax: u64,
    #[arg(long, default_value_t = 9)]
    points: usize,
    /// l = round(ratio k).
    #[arg(long, default_value_t = 1.0)]
    ratio: f64,
    #[arg(long, value_delimiter = ',', default_value = "8")]
    r: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    eps: Vec<f64>,
    #[arg(long = "Ceps", default_value_t = BoundConfig::DEFAULT_C_EPS)]
    c_eps: f64,
    #[arg(long)]
    best: bool,
}

#[derive(Subcommand)]
enum Oracle {
    /// Smallest n forcing K_s or an independent t-set, up to nmax.
    Ramsey {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Goodman's monochromatic triangle identity on a graph.
    Goodman {
        #[arg(long)]
        graph: String,
    },
    /// Clique and independence numbers of a graph against (k, l).
    Witness {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
}

enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Violation(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.jobs == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let mut sink = Sink::open(cli.format, cli.out.as_ref())?;
    let mode: Mode = cli.mode.into();
    match &cli.verb {
        Verb::Density {
            pattern,
            graph,
            kernel,
        } => density_verb(&mut sink, mode, pattern, graph.as_deref(), kernel.as_deref()),
        Verb::Stats { graph, p } => stats_verb(&mut sink, mode, graph, p),
        Verb::Verify { suite, trials } => pool.install(|| verify_verb(&mut sink, cli, suite, *trials)),
        Verb::Construct { what } => pool.install(|| construct_verb(&mut sink, cli, what)),
        Verb::Bound(args) => bound_verb(&mut sink, args),
        Verb::Table(args) => pool.install(|| table_verb(&mut sink, args)),
        Verb::Oracle { what } => oracle_verb(&mut sink, what),
    }
}

#[derive(Serialize)]
struct DensityRecord {
    pattern: String,
    source: String,
    mode: Mode,
    density: String,
    density_f64: f64,
}

fn density_of<S: Scalar>(h: &PatternGraph, w: &StepKernel<S>) -> Result<(String, f64), Error> {
    let t = density(h, w)?;
    Ok((t.render(), t.to_f64()))
}

fn density_verb(
    sink: &mut Sink,
    mode: Mode,
    pattern: &str,
    graph: Option<&str>,
    kernel: Option<&str>,
) -> Outcome {
    let h = PatternGraph::parse(pattern)?;
    let (source, (text, value), mode) = match (graph, kernel) {
        (Some(g), _) => {
            let g = load_graph(g)?;
            let t = match mode {
                Mode::Exact => density_of(&h, &embed_graph::<quasiramsey::Q>(&g)?)?,
                Mode::Float => density_of(&h, &embed_graph::<f64>(&g)?)?,
            };
            (format!("graph n={}", g.n()), t, mode)
        }
        (None, Some(k)) => match load_kernel(k, mode)? {
            AnyKernel::Exact(w) => (k.to_string(), density_of(&h, &w)?, Mode::Exact),
            AnyKernel::Float(w) => (k.to_string(), density_of(&h, &w)?, Mode::Float),
        },
        (None, None) => return Err(Failure::Input("need --graph or --kernel".into())),
    };
    let rec = DensityRecord {
        pattern: h.to_string(),
        source,
        mode,
        density: text,
        density_f64: value,
    };
    sink.record(&rec, &rec)?;
    Ok(())
}

#[derive(Serialize)]
struct StatsRecord {
    n: usize,
    edges: usize,
    p: String,
    mu: String,
    nu: String,
    mu_f64: f64,
    nu_f64: f64,
}

fn stats_for<S: Scalar>(g: &SimpleGraph, p: &str) -> Result<StatsRecord, Error> {
    let p = S::parse_value(p)?;
    let s = centered_stats(g, &p)?;
    Ok(StatsRecord {
        n: g.n(),
        edges: g.edge_count(),
        p: p.render(),
        mu: s.mu.render(),
        nu: s.nu.render(),
        mu_f64: s.mu.to_f64(),
        nu_f64: s.nu.to_f64(),
    })
}

fn stats_verb(sink: &mut Sink, mode: Mode, graph: &str, p: &str) -> Outcome {
    let g = load_graph(graph)?;
    let rec = match mode {
        Mode::Exact => stats_for::<quasiramsey::Q>(&g, p)?,
        Mode::Float => stats_for::<f64>(&g, p)?,
    };
    sink.record(&rec, &rec)?;
    Ok(())
}

fn verify_verb(sink: &mut Sink, cli: &Cli, suite: &str, trials: Option<usize>) -> Outcome {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mode: Mode = cli.mode.into();
    let mut rows: Vec<TrialRow> = Vec::new();
    for s in suites {
        let count = trials.unwrap_or_else(|| s.default_trials()) as u64;
        let batch = (0..count)
            .into_par_iter()
            .map(|i| run_trial(s, cli.seed, i, mode))
            .collect::<Result<Vec<_>, Error>>()?;
        rows.extend(batch);
    }
    sink.rows(&rows)?;
    let failed = rows.iter().filter(|r| !r.holds).count();
    if failed > 0 {
        return Err(Failure::Violation(format!("{failed} of {} trials violated", rows.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct BlockDensityRow {
    pattern: String,
    m: usize,
    vertices: usize,
    edges: usize,
    density: String,
}

#[derive(Serialize)]
struct DeviationRecord {
    r: usize,
    m: usize,
    connected_sum: String,
    floor: String,
    holds: bool,
    connected_spanning: u64,
    scaled_clique_density: String,
}

#[derive(Serialize)]
struct SampleRow {
    m: usize,
    n: usize,
    seed: u64,
    mu: f64,
    nu: f64,
    band_lo: f64,
    band_hi: f64,
    in_band: bool,
}

fn construct_verb(sink: &mut Sink, cli: &Cli, what: &Construct) -> Outcome {
    match what {
        Construct::BlockDensity { m, max_vertices } => {
            let mut rows = Vec::new();
            for j in nonisolated_classes(*max_vertices)?.iter().filter(|j| j.is_connected()) {
                rows.push(BlockDensityRow {
                    pattern: j.to_string(),
                    m: *m,
                    vertices: j.vertex_count(),
                    edges: j.edge_count(),
                    density: connected_density(j, *m)?.render(),
                });
            }
            sink.rows(&rows)?;
        }
        Construct::Deviation { r, m } => {
            let d = deviation_lower_bound(*r, *m)?;
            let rec = DeviationRecord {
                r: d.r,
                m: d.m,
                holds: d.connected_sum >= d.floor,
                connected_sum: d.connected_sum.render(),
                floor: d.floor.render(),
                connected_spanning: d.connected_spanning,
                scaled_clique_density: d.scaled_clique_density.render(),
            };
            sink.record(&rec, &rec)?;
            if !rec.holds {
                return Err(Failure::Violation("deviation sum below its floor".into()));
            }
        }
        Construct::Sample { m, n, seeds } => {
            let w = block_graphon::<f64>(*m)?;
            let half = 0.5;
            let rows = (0..*seeds as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = quasiramsey::suites::trial_seed(cli.seed, i);
                    let g = w_random_graph(&w, *n, seed)?;
                    let s = centered_stats(&g, &half)?;
                    let (lo, hi) = (1.0 / (8.0 * *m as f64), 2.0 / *m as f64);
                    Ok(SampleRow {
                        m: *m,
                        n: *n,
                        seed,
                        mu: s.mu,
                        nu: s.nu,
                        band_lo: lo,
                        band_hi: hi,
                        in_band: (lo..=hi).contains(&s.mu) && (lo..=hi).contains(&s.nu),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            sink.rows(&rows)?;
        }
        Construct::Graph { graph, export } => {
            let g = load_graph(graph)?;
            match export {
                Export::Graph6 => sink.text(&format!("{}\n", to_graph6(&g)))?,
                Export::EdgeList => sink.text(&to_edge_list(&g))?,
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRow {
    group: String,
    name: String,
    lhs: f64,
    rhs: f64,
    slack: f64,
    holds: bool,
    preconditions_met: bool,
}

impl CheckRow {
    fn new(group: impl Into<String>, rep: &InequalityReport) -> Self {
        CheckRow {
            group: group.into(),
            name: rep.name.clone(),
            lhs: rep.lhs,
            rhs: rep.rhs,
            slack: rep.slack,
            holds: rep.holds,
            preconditions_met: rep.preconditions_met(),
        }
    }
}

fn bound_verb(sink: &mut Sink, a: &BoundArgs) -> Outcome {
    sink.note("C_eps and the small constant c_eps are inputs; no numeric values are fixed by the theory")?;
    if a.best {
        let b = best_bound(a.k, a.l, a.eps, a.c_eps)?;
        sink.record(&b, &BoundRow::from(&b))?;
        return Ok(());
    }
    let cfg = BoundConfig::new(a.r, a.eps, a.c_eps)?.with_c_eps_small(a.c_eps_small)?;
    if a.certificate {
        let cert = smoothness_certificate(&cfg, a.k, a.l)?;
        let mut rows: Vec<CheckRow> = cert
            .per_m
            .iter()
            .flat_map(|(m, reps)| reps.iter().map(move |r| CheckRow::new(format!("smooth m={m}"), r)))
            .collect();
        rows.extend(
            inductive_step_preconditions(&cfg, &cert)
                .iter()
                .map(|r| CheckRow::new("inductive-step", r)),
        );
        rows.extend(
            bounds::rho_properties_check(&cfg, 10_000)?
                .iter()
                .map(|r| CheckRow::new("rho", r)),
        );
        sink.rows(&rows)?;
        return Ok(());
    }
    let b = ramsey_upper_bound(&cfg, a.k, a.l)?;
    sink.record(&b, &BoundRow::from(&b))?;
    Ok(())
}

fn table_verb(sink: &mut Sink, a: &TableArgs) -> Outcome {
    if !(a.ratio > 0.0) {
        return Err(Failure::Input("--ratio must be positive".into()));
    }
    let ks = log_grid(a.kmin.max(1), a.kmax.max(1), a.points);
    let mut jobs = Vec::new();
    for &eps in &a.eps {
        if a.best {
            jobs.extend(ks.iter().map(|&k| (None, eps, k)));
        } else {
            for &r in &a.r {
                jobs.extend(ks.iter().map(|&k| (Some(r), eps, k)));
            }
        }
    }
    let rows = jobs
        .into_par_iter()
        .map(|(r, eps, k)| {
            let l = ((k as f64 * a.ratio).round() as u64).max(1);
            let b = match r {
                Some(r) => ramsey_upper_bound(&BoundConfig::new(r, eps, a.c_eps)?, k, l)?,
                None => best_bound(k, l, eps, a.c_eps)?,
            };
            Ok(BoundRow::from(&b))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    sink.rows(&rows)?;
    Ok(())
}

#[derive(Serialize)]
struct RamseyRecord {
    s: usize,
    t: usize,
    nmax: usize,
    value: Option<usize>,
    witness_graph6: Option<String>,
}

#[derive(Serialize)]
struct GoodmanRecord {
    n: usize,
    monochromatic: u64,
    formula: u64,
    holds: bool,
}

#[derive(Serialize)]
struct WitnessRecord {
    n: usize,
    k: usize,
    l: usize,
    clique_number: usize,
    independence_number: usize,
    valid: bool,
}

fn oracle_verb(sink: &mut Sink, what: &Oracle) -> Outcome {
    match what {
        Oracle::Ramsey { s, t, nmax } => {
            let value = ramsey_exact(*s, *t, *nmax)?;
            let witness = match value {
                Some(v) if v > 1 => ramsey_witness_search(*s, *t, v - 1)?.map(|g| to_graph6(&g)),
                _ => None,
            };
            let rec = RamseyRecord {
                s: *s,
                t: *t,
                nmax: *nmax,
                value,
                witness_graph6: witness,
            };
            if !sink.is_json() {
                match value {
                    Some(v) => sink.text(&format!("{v}\n"))?,
                    None => sink.text(&format!("> {nmax}\n"))?,
                }
            } else {
                sink.record(&rec, &rec)?;
            }
        }
        Oracle::Goodman { graph } => {
            let g = load_graph(graph)?;
            let (mono, formula) = bounds::goodman(&g);
            let rec = GoodmanRecord {
                n: g.n(),
                monochromatic: mono,
                formula,
                holds: mono == formula,
            };
            sink.record(&rec, &rec)?;
            if !rec.holds {
                return Err(Failure::Violation("Goodman identity failed".into()));
            }
        }
        Oracle::Witness { graph, k, l } => {
            let g = load_graph(graph)?;
            let (w, a) = (g.clique_number(), g.independence_number());
            let rec = WitnessRecord {
                n: g.n(),
                k: *k,
                l: *l,
                clique_number: w,
                independence_number: a,
                valid: w <= *k && a <= *l,
            };
            sink.record(&rec, &rec)?;
        }
    }
    Ok(())
}
