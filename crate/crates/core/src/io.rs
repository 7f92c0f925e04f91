//! Text formats: matrix CSV, vector CSV and edge-list JSON.
//!
//! Matrix CSV has one row per line. Rational entries are written `p/q`
//! (or `p` when `q = 1`); float entries are decimal literals that always
//! carry a `.` or exponent. A file containing any `/` is rational; a file
//! with only integers is rational as well.

use std::collections::HashMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::DirectedNetwork;
use crate::matrix::SquareMatrix;
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Rational,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedMatrix {
    Rational(SquareMatrix<Rational>),
    Float(SquareMatrix<f64>),
}

struct Field<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn split_fields(text: &str) -> Vec<Vec<Field<'_>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let mut column = 1;
            line.split(',')
                .map(|raw| {
                    let lead = raw.len() - raw.trim_start().len();
                    let f = Field {
                        line: i + 1,
                        column: column + lead,
                        text: raw.trim(),
                    };
                    column += raw.chars().count() + 1;
                    f
                })
                .collect()
        })
        .collect()
}

fn is_decimal(s: &str) -> bool {
    s.contains(['.', 'e', 'E']) || s.eq_ignore_ascii_case("nan") || s.contains("inf")
}

/// Detects the domain of a matrix file from its fields.
pub fn detect_domain(text: &str) -> Result<Domain> {
    let fields = split_fields(text);
    let all = fields.iter().flatten();
    let has_ratio = all.clone().any(|f| f.text.contains('/'));
    let has_decimal = all.clone().any(|f| is_decimal(f.text));
    match (has_ratio, has_decimal) {
        (true, true) => Err(Error::MixedDomain),
        (false, true) => Ok(Domain::Float),
        _ => Ok(Domain::Rational),
    }
}

/// Parses every field in domain `T`.
pub fn parse_matrix_as<T: Scalar>(text: &str) -> Result<SquareMatrix<T>> {
    let rows = split_fields(text);
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty matrix".into(),
        });
    }
    let order = rows.len();
    let mut out = Vec::with_capacity(order);
    for row in rows {
        if row.len() != order {
            let f = row.last().expect("split yields at least one field");
            return Err(Error::Parse {
                line: f.line,
                column: f.column,
                message: format!("row has {} entries, expected {order}", row.len()),
            });
        }
        let parsed = row
            .iter()
            .map(|f| {
                T::parse_field(f.text).ok_or_else(|| Error::Parse {
                    line: f.line,
                    column: f.column,
                    message: format!("invalid entry {:?}", f.text),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        out.push(parsed);
    }
    SquareMatrix::from_rows(out)
}

/// Parses a matrix, choosing the domain with [`detect_domain`].
pub fn parse_matrix(text: &str) -> Result<ParsedMatrix> {
    match detect_domain(text)? {
        Domain::Rational => parse_matrix_as(text).map(ParsedMatrix::Rational),
        Domain::Float => parse_matrix_as(text).map(ParsedMatrix::Float),
    }
}

/// Canonical CSV text: entries in lowest terms, newline after every row.
pub fn format_matrix<T: Scalar>(m: &SquareMatrix<T>) -> String {
    m.to_string()
}

/// A single comma-separated line of values.
pub fn parse_vector_as<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let fields: Vec<Field<'_>> = split_fields(text).into_iter().flatten().collect();
    if fields.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty vector".into(),
        });
    }
    fields
        .iter()
        .map(|f| {
            T::parse_field(f.text).ok_or_else(|| Error::Parse {
                line: f.line,
                column: f.column,
                message: format!("invalid entry {:?}", f.text),
            })
        })
        .collect()
}

pub fn format_vector<T: Scalar>(v: &[T]) -> String {
    let fields: Vec<String> = v.iter().map(Scalar::to_field).collect();
    format!("{}\n", fields.join(","))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodesSpec {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeRef {
    Index(usize),
    Label(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightSpec {
    Number(serde_json::Number),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    from: NodeRef,
    to: NodeRef,
    #[serde(default)]
    weight: Option<WeightSpec>,
}

#[derive(Deserialize)]
struct NetworkRecord {
    nodes: NodesSpec,
    edges: Vec<EdgeRecord>,
}

/// Parses the edge-list JSON
/// `{"nodes": <count or labels>, "edges": [{"from", "to", "weight"}]}`.
///
/// Weights may be JSON numbers or `"p/q"` strings and are read exactly;
/// a missing weight means one.
pub fn parse_network_json(text: &str) -> Result<DirectedNetwork> {
    let record: NetworkRecord = serde_json::from_str(text)?;
    let (count, labels) = match record.nodes {
        NodesSpec::Count(n) => (n, None),
        NodesSpec::Labels(l) => (l.len(), Some(l)),
    };
    let lookup: HashMap<&str, usize> = labels
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let resolve = |r: &NodeRef| match r {
        NodeRef::Index(i) => Ok(*i),
        NodeRef::Label(l) => lookup
            .get(l.as_str())
            .copied()
            .ok_or_else(|| Error::UnknownLabel(l.clone())),
    };
    let edges = record
        .edges
        .iter()
        .map(|e| {
            let weight = match &e.weight {
                None => Rational::from_i64(1),
                Some(WeightSpec::Number(n)) => parse_rational(&n.to_string())
                    .ok_or_else(|| Error::Json(format!("invalid weight {n}")))?,
                Some(WeightSpec::Text(t)) => {
                    parse_rational(t).ok_or_else(|| Error::Json(format!("invalid weight {t:?}")))?
                }
            };
            Ok((resolve(&e.from)?, resolve(&e.to)?, weight))
        })
        .collect::<Result<Vec<_>>>()?;
    match labels {
        Some(l) => DirectedNetwork::with_labels(l, edges),
        None => DirectedNetwork::from_edge_list(count, edges),
    }
}

/// Serializes a network to the edge-list JSON; weights are `"p/q"` strings.
pub fn network_to_json(g: &DirectedNetwork) -> String {
    let nodes = match g.labels() {
        Some(l) => serde_json::json!(l),
        None => serde_json::json!(g.node_count()),
    };
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| serde_json::json!({"from": e.from, "to": e.to, "weight": e.weight.to_field()}))
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({"nodes": nodes, "edges": edges}))
        .expect("json values serialize")
}
