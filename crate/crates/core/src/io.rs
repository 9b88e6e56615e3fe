//! Text formats: edge lists, graph6, kernel JSON and generator specs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::constructions::{block_graphon, circulant, gnp, paley, w_random_graph};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernels::{ExactKernel, FiniteSpace, FloatKernel, StepKernel};
use crate::patterns::PatternGraph;
use crate::scalar::{Mode, Scalar};

/// `n` on the first line, then one `u v` pair per line.
pub fn to_edge_list(g: &SimpleGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::parse("empty edge list"))?
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
    SimpleGraph::from_edges(n, edges)
}

const GRAPH6_MAX: usize = (1 << 36) - 1;

pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else if n <= 258_047 {
        bytes.push(126);
        bytes.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        bytes.extend([126, 126]);
        bytes.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                bytes.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 is ASCII")
}

pub fn from_graph6(text: &str) -> Result<SimpleGraph> {
    let text = text.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::parse("graph6 strings use bytes 63..=126"));
    }
    let sextet = |b: u8| (b - 63) as usize;
    let take = |from: usize, count: usize| -> Result<usize> {
        let chunk = bytes
            .get(from..from + count)
            .ok_or_else(|| Error::parse("truncated graph6 header"))?;
        Ok(chunk.iter().fold(0, |acc, &b| (acc << 6) | sextet(b)))
    };
    let (n, mut pos) = if bytes[0] != 126 {
        (sextet(bytes[0]), 1)
    } else if bytes.get(1) != Some(&126) {
        (take(1, 3)?, 4)
    } else {
        (take(2, 6)?, 8)
    };
    if n > GRAPH6_MAX {
        return Err(Error::parse("graph6 order out of range"));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    if bytes.len() != pos + needed {
        return Err(Error::parse(format!(
            "graph6 body has {} bytes, expected {needed}",
            bytes.len() - pos.min(bytes.len())
        )));
    }
    let mut g = SimpleGraph::empty(n);
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = sextet(bytes[pos + bit / 6]);
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            bit += 1;
        }
    }
    pos += needed;
    debug_assert_eq!(pos, bytes.len());
    Ok(g)
}

/// Named graph generators.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// The block graphon on `m` parts; a kernel, not a graph.
    Block { m: usize },
    Gnp { n: usize, p: f64, seed: u64 },
    /// W-random graph from the block graphon on `m` parts.
    WRandom { m: usize, n: usize, seed: u64 },
    Paley { q: usize },
    Circulant { n: usize, offsets: Vec<usize> },
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("invalid generator spec `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let seed = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["block", m] => Ok(GeneratorSpec::Block { m: num(m)? }),
            ["gnp", n, p, s] => Ok(GeneratorSpec::Gnp {
                n: num(n)?,
                p: f64::parse_value(p).map_err(|_| bad())?,
                seed: seed(s)?,
            }),
            ["wrand", m, n, s] => Ok(GeneratorSpec::WRandom {
                m: num(m)?,
                n: num(n)?,
                seed: seed(s)?,
            }),
            ["paley", q] => Ok(GeneratorSpec::Paley { q: num(q)? }),
            ["circulant", n, offsets] => Ok(GeneratorSpec::Circulant {
                n: num(n)?,
                offsets: offsets.split(',').map(num).collect::<Result<_>>()?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Block { m } => write!(f, "block:{m}"),
            GeneratorSpec::Gnp { n, p, seed } => write!(f, "gnp:{n}:{p}:{seed}"),
            GeneratorSpec::WRandom { m, n, seed } => write!(f, "wrand:{m}:{n}:{seed}"),
            GeneratorSpec::Paley { q } => write!(f, "paley:{q}"),
            GeneratorSpec::Circulant { n, offsets } => {
                let list: Vec<String> = offsets.iter().map(usize::to_string).collect();
                write!(f, "circulant:{n}:{}", list.join(","))
            }
        }
    }
}

impl GeneratorSpec {
    pub fn graph(&self) -> Result<SimpleGraph> {
        match self {
            GeneratorSpec::Block { .. } => Err(Error::usage(
                "block:<m> names a kernel; use wrand:<m>:<n>:<seed> for a graph",
            )),
            GeneratorSpec::Gnp { n, p, seed } => gnp(*n, *p, *seed),
            GeneratorSpec::WRandom { m, n, seed } => {
                w_random_graph(&block_graphon::<f64>(*m)?, *n, *seed)
            }
            GeneratorSpec::Paley { q } => paley(*q),
            GeneratorSpec::Circulant { n, offsets } => circulant(*n, offsets),
        }
    }
}

/// Parses a graph from a generator spec, a pattern builtin (`K4`, `C5`,
/// `K2,3`), a graph6 string or an edge list.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse("empty graph text"));
    }
    if trimmed.contains(':') && !trimmed.starts_with(">>") {
        return GeneratorSpec::from_str(trimmed)?.graph();
    }
    let first = trimmed.chars().next().unwrap_or(' ');
    if matches!(first, 'K' | 'C' | 'P' | 'E') && trimmed[1..].chars().all(|c| c.is_ascii_digit() || c == ',') {
        if let Ok(p) = PatternGraph::parse(trimmed) {
            return Ok(p.to_simple());
        }
    }
    if !trimmed.contains(char::is_whitespace) && !trimmed.chars().all(|c| c.is_ascii_digit()) {
        return from_graph6(trimmed);
    }
    parse_edge_list(trimmed)
}

/// Reads a graph from a file when `arg` names one, otherwise parses `arg`.
pub fn load_graph(arg: &str) -> Result<SimpleGraph> {
    if Path::new(arg).is_file() {
        return parse_graph(&std::fs::read_to_string(arg)?);
    }
    parse_graph(arg)
}

/// A kernel read from text in whichever mode it declared.
#[derive(Clone, Debug)]
pub enum AnyKernel {
    Exact(ExactKernel),
    Float(FloatKernel),
}

impl AnyKernel {
    pub fn mode(&self) -> Mode {
        match self {
            AnyKernel::Exact(_) => Mode::Exact,
            AnyKernel::Float(_) => Mode::Float,
        }
    }
}

fn json_scalar<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_value(s),
        Value::Number(n) => S::parse_value(&n.to_string()),
        other => Err(Error::parse(format!("expected a number or \"p/q\", got {other}"))),
    }
}

fn kernel_from_value<S: Scalar>(doc: &Value) -> Result<StepKernel<S>> {
    let weights = doc
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("kernel JSON needs a `weights` array"))?
        .iter()
        .map(json_scalar::<S>)
        .collect::<Result<Vec<_>>>()?;
    let rows = doc
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("kernel JSON needs a `values` matrix"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::parse("`values` rows must be arrays"))?
                .iter()
                .map(json_scalar::<S>)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    StepKernel::new(FiniteSpace::new(weights)?, rows)
}

/// Parses `{"weights": [...], "values": [[...]], "mode": "exact"|"float"}`.
/// A missing mode means exact.
pub fn parse_kernel_json(text: &str) -> Result<AnyKernel> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("kernel JSON: {e}")))?;
    let mode = match doc.get("mode") {
        None => Mode::Exact,
        Some(Value::String(s)) => s.parse()?,
        Some(other) => return Err(Error::parse(format!("invalid mode {other}"))),
    };
    Ok(match mode {
        Mode::Exact => AnyKernel::Exact(kernel_from_value(&doc)?),
        Mode::Float => AnyKernel::Float(kernel_from_value(&doc)?),
    })
}

pub fn kernel_to_json<S: Scalar>(w: &StepKernel<S>) -> String {
    let render = |v: &S| match S::MODE {
        Mode::Exact => Value::String(v.render()),
        Mode::Float => json!(v.to_f64()),
    };
    let doc = json!({
        "weights": w.weights().iter().map(render).collect::<Vec<_>>(),
        "values": w.rows().iter().map(|r| r.iter().map(render).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "mode": S::MODE.to_string(),
    });
    serde_json::to_string(&doc).expect("plain JSON")
}

/// Loads a kernel from a JSON file, a JSON literal or the builtin
/// `block:<m>`, in the requested mode when the source has none.
pub fn load_kernel(arg: &str, mode: Mode) -> Result<AnyKernel> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg)?
    } else {
        arg.to_string()
    };
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return parse_kernel_json(trimmed);
    }
    match GeneratorSpec::from_str(trimmed)? {
        GeneratorSpec::Block { m } => Ok(match mode {
            Mode::Exact => AnyKernel::Exact(block_graphon(m)?),
            Mode::Float => AnyKernel::Float(block_graphon(m)?),
        }),
        other => Err(Error::usage(format!("`{other}` is a graph generator, not a kernel"))),
    }
}
