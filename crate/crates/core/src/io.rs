//! Graph files: a JSON object with explicit vertices, or a tab-separated edge list.
//!
//! External vertex ids are remapped to `0..n` while parsing and kept as labels
//! for output.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{default_mu, WeightedGraph};
use crate::rational::{format_compact, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Tsv,
}

impl GraphFormat {
    /// `.json` is JSON and `.tsv`/`.txt` are TSV; other paths are undecided.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("json") => Some(GraphFormat::Json),
            Some("tsv" | "txt") => Some(GraphFormat::Tsv),
            _ => None,
        }
    }

    /// JSON when the first non-blank character opens an object.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            GraphFormat::Json
        } else {
            GraphFormat::Tsv
        }
    }
}

/// A JSON id or weight: numbers and strings are both accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(serde_json::Number),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Number(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }

    fn label(s: &str) -> Self {
        match s.parse::<u64>() {
            Ok(v) if v.to_string() == s => Scalar::Number(v.into()),
            _ => Scalar::Text(s.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: Scalar,
    pub v: Scalar,
    pub w: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

fn field_rational(s: &Scalar, field: &str) -> Result<Rational> {
    parse_rational(&s.text()).map_err(|_| Error::Parse(format!("{field}: invalid rational {:?}", s.text())))
}

fn build(
    labels: Vec<String>,
    mu: Option<Vec<Rational>>,
    edges: Vec<(usize, usize, Rational)>,
    context: &dyn Fn(usize) -> String,
) -> Result<WeightedGraph> {
    let mu = match mu {
        Some(mu) => mu,
        None => default_mu(labels.len(), &edges).map_err(|e| match e {
            Error::ZeroMu { vertex } => {
                Error::Parse(format!("vertex {:?} has no edges and no explicit mu", labels[vertex]))
            }
            other => other,
        })?,
    };
    let g = WeightedGraph::new(mu, edges.iter().cloned()).map_err(|e| match e {
        Error::DuplicateEdge(a, b) => {
            let i = edges.iter().rposition(|&(u, v, _)| (u.min(v), u.max(v)) == (a, b)).unwrap_or(0);
            Error::Parse(format!("{}: duplicate edge {{{}, {}}}", context(i), labels[a], labels[b]))
        }
        Error::SelfLoop(v) => {
            let i = edges.iter().position(|&(a, b, _)| a == v && b == v).unwrap_or(0);
            Error::Parse(format!("{}: self-loop at {:?}", context(i), labels[v]))
        }
        Error::NonPositiveWeight { what, value } => Error::Parse(format!("nonpositive {what}: {value}")),
        other => other,
    })?;
    g.with_labels(labels)
}

pub fn parse_json(text: &str) -> Result<WeightedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("json: {e}")))?;
    from_graph_file(&file)
}

pub fn from_graph_file(file: &GraphFile) -> Result<WeightedGraph> {
    let mut index = HashMap::new();
    let mut labels = Vec::with_capacity(file.vertices.len());
    for (i, rec) in file.vertices.iter().enumerate() {
        let id = rec.id.text();
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::Parse(format!("vertices[{i}].id: duplicate id {id:?}")));
        }
        labels.push(id);
    }
    let given = file.vertices.iter().filter(|v| v.mu.is_some()).count();
    let mu = match given {
        0 => None,
        g if g == file.vertices.len() => Some(
            file.vertices
                .iter()
                .enumerate()
                .map(|(i, rec)| field_rational(rec.mu.as_ref().expect("counted"), &format!("vertices[{i}].mu")))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => return Err(Error::Parse("mu must be given for every vertex or for none".into())),
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, rec) in file.edges.iter().enumerate() {
        let end = |s: &Scalar, name: &str| {
            index
                .get(&s.text())
                .copied()
                .ok_or_else(|| Error::Parse(format!("edges[{i}].{name}: unknown vertex {:?}", s.text())))
        };
        edges.push((end(&rec.u, "u")?, end(&rec.v, "v")?, field_rational(&rec.w, &format!("edges[{i}].w"))?));
    }
    build(labels, mu, edges, &|i| format!("edges[{i}]"))
}

/// `u<TAB>v<TAB>w` per line (weight optional, default 1); `#` starts a comment.
///
/// Vertex ids are ordered numerically when every id is a nonnegative integer and
/// by first appearance otherwise. `mu` is always the weighted degree.
pub fn parse_tsv(text: &str) -> Result<WeightedGraph> {
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let (u, v, w) = match fields.as_slice() {
            [u, v] => (*u, *v, Rational::from_integer(1)),
            [u, v, w] => (
                *u,
                *v,
                parse_rational(w)
                    .map_err(|_| Error::Parse(format!("line {}: field 3: invalid weight {w:?}", lineno + 1)))?,
            ),
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected 2 or 3 tab-separated fields, found {}",
                    lineno + 1,
                    fields.len()
                )))
            }
        };
        for (col, id) in [(1, u), (2, v)] {
            if id.is_empty() {
                return Err(Error::Parse(format!("line {}: field {col}: empty vertex id", lineno + 1)));
            }
        }
        raw.push((lineno + 1, u.to_string(), v.to_string(), w));
    }
    if raw.is_empty() {
        return Err(Error::Parse("edge list is empty".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    for (_, u, v, _) in &raw {
        for id in [u, v] {
            if !labels.contains(id) {
                labels.push(id.clone());
            }
        }
    }
    let numeric: Option<Vec<u64>> =
        labels.iter().map(|l| l.parse::<u64>().ok().filter(|n| n.to_string() == *l)).collect();
    if let Some(keys) = numeric {
        let mut pairs: Vec<(u64, String)> = keys.into_iter().zip(labels).collect();
        pairs.sort();
        labels = pairs.into_iter().map(|(_, l)| l).collect();
    }
    if labels.len() > crate::graph::MAX_VERTICES {
        return Err(Error::TooManyVertices { n: labels.len(), max: crate::graph::MAX_VERTICES });
    }
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let lines: Vec<usize> = raw.iter().map(|r| r.0).collect();
    let edges = raw.iter().map(|(_, u, v, w)| (index[u.as_str()], index[v.as_str()], *w)).collect();
    build(labels, None, edges, &|i| format!("line {}", lines[i]))
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<WeightedGraph> {
    match format {
        GraphFormat::Json => parse_json(text),
        GraphFormat::Tsv => parse_tsv(text),
    }
}

pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_graph(&text, GraphFormat::from_path(path).unwrap_or_else(|| GraphFormat::sniff(&text)))
}

/// `mu` is written when asked for or when it differs from the weighted degree.
pub fn to_graph_file(g: &WeightedGraph, explicit_mu: bool) -> GraphFile {
    let with_mu = explicit_mu || !g.satisfies_degree_convention();
    GraphFile {
        vertices: (0..g.n())
            .map(|v| VertexRecord {
                id: Scalar::label(g.label(v)),
                mu: with_mu.then(|| Scalar::Text(format_compact(&g.mu()[v]))),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                u: Scalar::label(g.label(e.u)),
                v: Scalar::label(g.label(e.v)),
                w: Scalar::Text(format_compact(&e.w)),
            })
            .collect(),
    }
}

pub fn emit_json(g: &WeightedGraph, explicit_mu: bool) -> String {
    let mut s = serde_json::to_string_pretty(&to_graph_file(g, explicit_mu)).expect("graph files serialize");
    s.push('\n');
    s
}

/// Fails when the graph cannot be recovered from an edge list alone.
pub fn emit_tsv(g: &WeightedGraph) -> Result<String> {
    if let Some(vertex) = g.degree_convention_violation() {
        return Err(Error::NotSupported(format!(
            "edge lists imply mu = weighted degree, which vertex {:?} does not satisfy",
            g.label(vertex)
        )));
    }
    let mut out = String::from("# u\tv\tw\n");
    for e in g.edges() {
        out.push_str(&format!("{}\t{}\t{}\n", g.label(e.u), g.label(e.v), format_compact(&e.w)));
    }
    Ok(out)
}
