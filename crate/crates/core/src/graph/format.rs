//! Text encodings of [`Graph`].
//!
//! Edge-list format:
//!
//! ```text
//! n=4 m=3
//! A=0 1
//! 0 2   # comments run to end of line
//! 1 2
//! 1 3
//! ```
//!
//! The `A=` line is optional. When it is present and no `B=` line follows,
//! every vertex outside `A` is labelled `B`. A `B=` line is written only when
//! some vertex carries no label at all. `m` counts edge lines; a repeated
//! edge is accepted once and reported as a [`ParseWarning`].

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Graph, GraphError, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header `n=<int> m=<int>`")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("expected a non-negative integer, found `{0}`")]
    BadInteger(String),
    #[error("expected two vertex indices per edge line")]
    BadEdgeLine,
    #[error("header declares {declared} edges but {found} edge lines follow")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("label line lists vertex {0} twice or in both parts")]
    DuplicateLabel(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    pub warnings: Vec<ParseWarning>,
}

/// JSON shape of a graph: vertex count, sorted edge list and optional labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Option<Side>>>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson::from(&g)
    }
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> GraphJson {
        GraphJson {
            vertex_count: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            labels: g.is_labelled().then(|| g.labels().to_vec()),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Graph, GraphError> {
        let g = Graph::from_edges(j.vertex_count, j.edges.iter().map(|e| (e[0], e[1])))?;
        match j.labels {
            Some(labels) => g.with_labels(labels),
            None => Ok(g),
        }
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn to_text(&self, format: GraphFormat) -> String {
        match format {
            GraphFormat::EdgeList => self.to_edge_list(),
            GraphFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("graph JSON is infallible");
                s.push('\n');
                s
            }
        }
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Parsed, ParseError> {
        match format {
            GraphFormat::EdgeList => parse_edge_list(text),
            GraphFormat::Json => {
                let graph = serde_json::from_str(text).map_err(|e| ParseError {
                    line: e.line(),
                    column: e.column(),
                    kind: ParseErrorKind::Json(e.to_string()),
                })?;
                Ok(Parsed {
                    graph,
                    warnings: Vec::new(),
                })
            }
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={} m={}", self.vertex_count(), self.edge_count());
        if self.is_labelled() {
            write_label_line(&mut out, "A", self.part(Side::A).iter());
            if self.labels().iter().any(Option::is_none) {
                write_label_line(&mut out, "B", self.part(Side::B).iter());
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn write_label_line(out: &mut String, name: &str, members: impl Iterator<Item = usize>) {
    out.push_str(name);
    out.push('=');
    for (i, v) in members.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &body[s..i], column: s + 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &body[s..], column: s + 1 });
    }
    out
}

fn integer(tok: &Token<'_>, line: usize) -> Result<usize, ParseError> {
    tok.text.parse().map_err(|_| ParseError {
        line,
        column: tok.column,
        kind: ParseErrorKind::BadInteger(tok.text.to_string()),
    })
}

fn header_field(tok: &Token<'_>, key: &str, line: usize) -> Result<usize, ParseError> {
    let bad = || ParseError {
        line,
        column: tok.column,
        kind: ParseErrorKind::BadHeader(format!("expected `{key}=<int>`, found `{}`", tok.text)),
    };
    let value = tok.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')).ok_or_else(bad)?;
    value.parse().map_err(|_| bad())
}

pub(crate) fn parse_edge_list(text: &str) -> Result<Parsed, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty())
        .peekable();

    let (hline, header) = lines.next().ok_or(ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    if header.len() != 2 {
        return Err(ParseError {
            line: hline,
            column: 1,
            kind: ParseErrorKind::BadHeader("expected exactly `n=<int> m=<int>`".into()),
        });
    }
    let n = header_field(&header[0], "n", hline)?;
    let m = header_field(&header[1], "m", hline)?;

    let mut labels: Vec<Option<Side>> = vec![None; n];
    let mut saw_a = false;
    let mut saw_b = false;
    for (name, side) in [("A=", Side::A), ("B=", Side::B)] {
        let Some((lno, toks)) = lines.next_if(|(_, t)| t[0].text.starts_with(name)) else {
            continue;
        };
        match side {
            Side::A => saw_a = true,
            Side::B => saw_b = true,
        }
        // `A=0 1 2` and `A= 0 1 2` are both accepted.
        let mut members = Vec::new();
        let first = &toks[0];
        if first.text.len() > 2 {
            members.push(Token {
                text: &first.text[2..],
                column: first.column + 2,
            });
        }
        members.extend(toks.into_iter().skip(1));
        for tok in &members {
            let v = integer(tok, lno)?;
            let err = |kind| ParseError { line: lno, column: tok.column, kind };
            if v >= n {
                return Err(err(ParseErrorKind::Graph(GraphError::VertexOutOfRange { vertex: v, n })));
            }
            if labels[v].replace(side).is_some() {
                return Err(err(ParseErrorKind::DuplicateLabel(v)));
            }
        }
    }
    if saw_a && !saw_b {
        for l in labels.iter_mut().filter(|l| l.is_none()) {
            *l = Some(Side::B);
        }
    }

    let mut graph = Graph::empty(n);
    let mut warnings = Vec::new();
    let mut found = 0;
    for (lno, toks) in lines {
        if toks.len() != 2 {
            return Err(ParseError {
                line: lno,
                column: toks.get(2).map_or(1, |t| t.column),
                kind: ParseErrorKind::BadEdgeLine,
            });
        }
        let u = integer(&toks[0], lno)?;
        let v = integer(&toks[1], lno)?;
        for (x, tok) in [(u, &toks[0]), (v, &toks[1])] {
            if x >= n {
                return Err(ParseError {
                    line: lno,
                    column: tok.column,
                    kind: ParseErrorKind::Graph(GraphError::VertexOutOfRange { vertex: x, n }),
                });
            }
        }
        if u == v {
            return Err(ParseError {
                line: lno,
                column: toks[0].column,
                kind: ParseErrorKind::Graph(GraphError::SelfLoop(u)),
            });
        }
        if graph.has_edge(u, v) {
            warnings.push(ParseWarning {
                line: lno,
                message: format!("duplicate edge {u} {v} ignored"),
            });
        }
        graph.insert_edge(u, v);
        found += 1;
    }
    if found != m {
        return Err(ParseError {
            line: hline,
            column: header[1].column,
            kind: ParseErrorKind::EdgeCountMismatch { declared: m, found },
        });
    }
    if saw_a || saw_b {
        graph.labels = labels;
    }
    Ok(Parsed { graph, warnings })
}
