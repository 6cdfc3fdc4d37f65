//! Text formats for marginal sets, explicit subtree distributions and edge
//! centralities. Graph files live in [`crate::graph::parse_graph`].
//!
//! Marginal sets are JSON objects tagged by `kind`:
//!
//! ```text
//! {"kind": "gaussian", "marginals": [{"mean": 0.0, "std": 1.0}, ...]}
//! {"kind": "empirical", "samples": [[0.0, 1.0], ...]}
//! {"kind": "discrete", "support": ["a", "b"], "weights": [[0.5, 0.5], ...]}
//! ```
//!
//! Subtree distributions are JSON arrays of `{"edges": [[i, j], ...], "p": 0.5}`.
//! Centrality files hold one `i j value` line per edge.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::centrality::{EdgeCentrality, ExplicitEta};
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph};
use crate::marginals::{
    DiscreteMarginal, EmpiricalMarginal, GaussianMarginal, MarginalSet, Marginals,
};

// A flat struct rather than a tagged enum so serde keeps line positions.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarginalFile {
    kind: String,
    marginals: Option<Vec<GaussianEntry>>,
    samples: Option<Vec<Vec<f64>>>,
    support: Option<Vec<String>>,
    weights: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianEntry {
    mean: f64,
    std: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EtaEntry {
    edges: Vec<[usize; 2]>,
    p: f64,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line().max(1),
        msg: e.to_string(),
    }
}

fn at_node(node: usize, e: Error) -> Error {
    Error::InvalidMarginal(format!("node {node}: {e}"))
}

pub fn parse_marginals(text: &str) -> Result<MarginalSet<f64>> {
    let file: MarginalFile = serde_json::from_str(text).map_err(json_error)?;
    let missing =
        |field: &str| Error::InvalidMarginal(format!("{} file needs \"{field}\"", file.kind));
    match file.kind.as_str() {
        "gaussian" => MarginalSet::gaussian(
            file.marginals
                .ok_or_else(|| missing("marginals"))?
                .into_iter()
                .enumerate()
                .map(|(k, m)| GaussianMarginal::new(m.mean, m.std).map_err(|e| at_node(k, e)))
                .collect::<Result<_>>()?,
        ),
        "empirical" => MarginalSet::empirical(
            file.samples
                .ok_or_else(|| missing("samples"))?
                .into_iter()
                .enumerate()
                .map(|(k, s)| EmpiricalMarginal::new(s).map_err(|e| at_node(k, e)))
                .collect::<Result<_>>()?,
        ),
        "discrete" => MarginalSet::discrete(
            file.support.ok_or_else(|| missing("support"))?,
            file.weights
                .ok_or_else(|| missing("weights"))?
                .into_iter()
                .enumerate()
                .map(|(k, w)| DiscreteMarginal::new(w).map_err(|e| at_node(k, e)))
                .collect::<Result<_>>()?,
        ),
        other => Err(Error::InvalidMarginal(format!(
            "unknown kind {other:?}; expected gaussian, empirical or discrete"
        ))),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Canonical rendering: one node per line, shortest round-trip floats.
pub fn write_marginals(ns: &MarginalSet<f64>) -> String {
    let (kind, head, rows): (&str, String, Vec<String>) = match ns.marginals() {
        Marginals::Gaussian(ms) => (
            "gaussian",
            String::new(),
            ms.iter()
                .map(|m| {
                    json(&GaussianEntry {
                        mean: m.mean,
                        std: m.std,
                    })
                })
                .collect(),
        ),
        Marginals::Empirical(ms) => (
            "empirical",
            String::new(),
            ms.iter().map(|m| json(m.samples())).collect(),
        ),
        Marginals::Discrete { support, marginals } => (
            "discrete",
            format!("  \"support\": {},\n", json(support)),
            marginals.iter().map(|m| json(m.weights())).collect(),
        ),
    };
    let field = match kind {
        "gaussian" => "marginals",
        "empirical" => "samples",
        _ => "weights",
    };
    let mut out = format!("{{\n  \"kind\": \"{kind}\",\n{head}  \"{field}\": [\n");
    for (k, row) in rows.iter().enumerate() {
        let sep = if k + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    {row}{sep}");
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn parse_eta(g: &Graph, text: &str) -> Result<ExplicitEta<f64>> {
    let entries: Vec<EtaEntry> = serde_json::from_str(text).map_err(json_error)?;
    let entries = entries
        .into_iter()
        .enumerate()
        .map(|(k, entry)| {
            let pairs: Vec<(usize, usize)> = entry.edges.iter().map(|&[i, j]| (i, j)).collect();
            let subset = EdgeSubset::from_pairs(g, &pairs)
                .map_err(|e| Error::InvalidDistribution(format!("entry {k}: {e}")))?;
            Ok((subset, entry.p))
        })
        .collect::<Result<Vec<_>>>()?;
    ExplicitEta::new(g, entries)
}

pub fn write_eta(g: &Graph, eta: &ExplicitEta<f64>) -> String {
    let rows: Vec<String> = eta
        .entries()
        .iter()
        .map(|(t, p)| {
            json(&EtaEntry {
                edges: t.pairs(g).into_iter().map(|(i, j)| [i, j]).collect(),
                p: *p,
            })
        })
        .collect();
    format!("[\n  {}\n]\n", rows.join(",\n  "))
}

/// Reads `i j value` lines (one per edge, any order; `#` starts a comment).
pub fn parse_centrality(g: &Graph, text: &str) -> Result<EdgeCentrality<f64>> {
    let mut values: Vec<Option<f64>> = vec![None; g.edge_count()];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [i, j, v] = fields[..] else {
            return Err(err(format!("expected \"i j value\", got {content:?}")));
        };
        let node = |f: &str| {
            f.parse::<usize>()
                .map_err(|_| err(format!("not a node index: {f:?}")))
        };
        let (i, j) = (node(i)?, node(j)?);
        let value: f64 = v.parse().map_err(|_| err(format!("not a number: {v:?}")))?;
        let e = g
            .edge_index(i, j)
            .ok_or_else(|| err(format!("({i}, {j}) is not an edge of the graph")))?;
        if values[e].replace(value).is_some() {
            return Err(err(format!("edge ({i}, {j}) listed twice")));
        }
    }
    if let Some(e) = values.iter().position(Option::is_none) {
        let (i, j) = g.edge(e);
        return Err(Error::InvalidCentrality(format!(
            "no value for edge ({i}, {j})"
        )));
    }
    EdgeCentrality::from_values(g, values.into_iter().flatten().collect())
}
