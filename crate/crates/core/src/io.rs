//! Graph and update-stream file formats.
//!
//! Edge lists are whitespace-separated label pairs, one edge per line, with
//! `#` comments. GML support covers the subset used by common network
//! dataset distributions: `graph [ node [ id N ] edge [ source A target B ] ]`,
//! with unknown keys and nested lists skipped.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::dynamic::UpdateEvent;
use crate::graph::{GraphError, NodeId, UndirectedGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
    Gml,
}

impl GraphFormat {
    /// `.gml` files are GML, everything else an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("gml") => GraphFormat::Gml,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edgelist" => Ok(GraphFormat::EdgeList),
            "gml" => Ok(GraphFormat::Gml),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::EdgeList => "edgelist",
            GraphFormat::Gml => "gml",
        })
    }
}

/// A graph plus the dataset label of every dense node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: UndirectedGraph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    /// Labels `0..n` for a graph that has no external names.
    pub fn unlabeled(graph: UndirectedGraph) -> Self {
        let labels = (0..graph.node_count()).map(|v| v.to_string()).collect();
        Self { graph, labels }
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    /// Dense id for a dataset label.
    pub fn index_of(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }
}

pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<LabeledGraph, IoError> {
    let text = read_text(path)?;
    match format.unwrap_or_else(|| GraphFormat::from_path(path)) {
        GraphFormat::EdgeList => parse_edge_list(&text),
        GraphFormat::Gml => parse_gml(&text),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Node ids are assigned in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<LabeledGraph, IoError> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = content(line).split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [a, b] => {
                let mut id_of = |label: &str| {
                    *ids.entry(label.to_owned()).or_insert_with(|| {
                        labels.push(label.to_owned());
                        labels.len() - 1
                    })
                };
                let (a, b) = (id_of(a), id_of(b));
                if a == b {
                    return Err(parse_err(line_no, format!("self-loop on `{}`", labels[a])));
                }
                edges.push((a, b));
            }
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("expected two endpoints, found {} fields", tokens.len()),
                ))
            }
        }
    }
    let graph = UndirectedGraph::from_edges(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Word(&'a str),
    Text(&'a str),
}

fn tokenize(text: &str) -> Result<Vec<(Token<'_>, usize)>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut rest = line;
        loop {
            rest = rest.trim_start();
            let Some(c) = rest.chars().next() else {
                break;
            };
            match c {
                '#' => break,
                '[' | ']' => {
                    out.push((if c == '[' { Token::Open } else { Token::Close }, line_no));
                    rest = &rest[1..];
                }
                '"' => {
                    let end = rest[1..]
                        .find('"')
                        .ok_or_else(|| parse_err(line_no, "unterminated string"))?;
                    out.push((Token::Text(&rest[1..end + 1]), line_no));
                    rest = &rest[end + 2..];
                }
                _ => {
                    let end = rest
                        .find(|ch: char| ch.is_whitespace() || ch == '[' || ch == ']')
                        .unwrap_or(rest.len());
                    out.push((Token::Word(&rest[..end]), line_no));
                    rest = &rest[end..];
                }
            }
        }
    }
    Ok(out)
}

struct GmlCursor<'a> {
    tokens: Vec<(Token<'a>, usize)>,
    at: usize,
}

impl<'a> GmlCursor<'a> {
    fn line(&self) -> usize {
        self.tokens
            .get(self.at)
            .or(self.tokens.last())
            .map_or(0, |t| t.1)
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn expect_open(&mut self) -> Result<(), IoError> {
        match self.next() {
            Some(Token::Open) => Ok(()),
            _ => Err(parse_err(self.line(), "expected `[`")),
        }
    }

    /// Skips one value: a scalar or a bracketed list.
    fn skip_value(&mut self) -> Result<(), IoError> {
        match self.next() {
            Some(Token::Word(_)) | Some(Token::Text(_)) => Ok(()),
            Some(Token::Open) => {
                let mut depth = 1;
                while depth > 0 {
                    match self.next() {
                        Some(Token::Open) => depth += 1,
                        Some(Token::Close) => depth -= 1,
                        Some(_) => {}
                        None => return Err(parse_err(self.line(), "unbalanced `[`")),
                    }
                }
                Ok(())
            }
            _ => Err(parse_err(self.line(), "expected a value")),
        }
    }

    fn scalar(&mut self) -> Result<&'a str, IoError> {
        match self.next() {
            Some(Token::Word(w)) | Some(Token::Text(w)) => Ok(w),
            _ => Err(parse_err(self.line(), "expected a scalar value")),
        }
    }

    /// Reads a `[ key value ... ]` block, returning the requested scalar
    /// keys; other entries are skipped.
    fn record(&mut self, wanted: &[&str]) -> Result<Vec<Option<(&'a str, usize)>>, IoError> {
        self.expect_open()?;
        let mut found = vec![None; wanted.len()];
        loop {
            let line = self.line();
            match self.next() {
                Some(Token::Close) => return Ok(found),
                Some(Token::Word(key)) => match wanted.iter().position(|&w| w == key) {
                    Some(slot) => found[slot] = Some((self.scalar()?, line)),
                    None => self.skip_value()?,
                },
                _ => return Err(parse_err(line, "expected a key or `]`")),
            }
        }
    }
}

/// Parses the GML subset. Node ids keep their declaration order.
pub fn parse_gml(text: &str) -> Result<LabeledGraph, IoError> {
    let mut cur = GmlCursor {
        tokens: tokenize(text)?,
        at: 0,
    };
    loop {
        match cur.next() {
            Some(Token::Word("graph")) => break,
            Some(Token::Word(_)) => cur.skip_value()?,
            _ => return Err(parse_err(cur.line(), "no `graph [ ... ]` block")),
        }
    }
    cur.expect_open()?;

    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut raw_edges = Vec::new();
    loop {
        let line = cur.line();
        match cur.next() {
            Some(Token::Close) => break,
            Some(Token::Word("node")) => {
                let [id] = cur.record(&["id"])?[..] else {
                    unreachable!()
                };
                let (id, _) = id.ok_or_else(|| parse_err(line, "node without id"))?;
                if ids.insert(id, labels.len()).is_some() {
                    return Err(parse_err(line, format!("duplicate node id `{id}`")));
                }
                labels.push(id.to_owned());
            }
            Some(Token::Word("edge")) => {
                let [source, target] = cur.record(&["source", "target"])?[..] else {
                    unreachable!()
                };
                match (source, target) {
                    (Some(s), Some(t)) => raw_edges.push((s, t)),
                    _ => return Err(parse_err(line, "edge needs source and target")),
                }
            }
            Some(Token::Word("directed")) => {
                if cur.scalar()? != "0" {
                    return Err(parse_err(line, "directed graphs are not supported"));
                }
            }
            Some(Token::Word(_)) => cur.skip_value()?,
            _ => return Err(parse_err(line, "unterminated graph block")),
        }
    }

    let mut edges = Vec::with_capacity(raw_edges.len());
    for ((s, line), (t, _)) in raw_edges {
        let resolve = |label: &str| {
            ids.get(label)
                .copied()
                .ok_or_else(|| parse_err(line, format!("edge references unknown node `{label}`")))
        };
        let (a, b) = (resolve(s)?, resolve(t)?);
        if a == b {
            return Err(parse_err(line, format!("self-loop on `{s}`")));
        }
        edges.push((a, b));
    }
    let graph = UndirectedGraph::from_edges(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

/// Parses an update stream: one `d <u> <v>` per line, using dataset labels.
pub fn parse_updates(text: &str, graph: &LabeledGraph) -> Result<Vec<UpdateEvent>, IoError> {
    let index = graph.index_of();
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = content(line).split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            ["d", u, v] => {
                let resolve = |label: &str| {
                    index
                        .get(label)
                        .copied()
                        .ok_or_else(|| parse_err(line_no, format!("unknown node `{label}`")))
                };
                events.push(UpdateEvent::DeleteEdge(resolve(u)?, resolve(v)?));
            }
            _ => return Err(parse_err(line_no, format!("expected `d <u> <v>`, got `{}`", line.trim()))),
        }
    }
    Ok(events)
}

/// Writes `g` as a GML document with the given labels as node ids.
pub fn write_gml(g: &LabeledGraph) -> String {
    let mut out = String::from("graph\n[\n");
    for label in &g.labels {
        out.push_str(&format!("  node\n  [\n    id {label}\n  ]\n"));
    }
    for (a, b) in g.graph.edges() {
        out.push_str(&format!(
            "  edge\n  [\n    source {}\n    target {}\n  ]\n",
            g.labels[a], g.labels[b]
        ));
    }
    out.push_str("]\n");
    out
}

/// Writes `g` as an edge list with a header comment.
pub fn write_edge_list(g: &LabeledGraph) -> String {
    let mut out = format!(
        "# {} nodes, {} edges\n",
        g.graph.node_count(),
        g.graph.edge_count()
    );
    for (a, b) in g.graph.edges() {
        out.push_str(&format!("{} {}\n", g.labels[a], g.labels[b]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments_and_strings() {
        let text = "# header\n\nalice bob\nbob carol # trailing\n\n  carol alice\nbob alice\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.labels, vec!["alice", "bob", "carol"]);
        assert_eq!(g.graph.edge_count(), 3);
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        let err = parse_edge_list("1 2\n3\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }));
        let err = parse_edge_list("1 2\n4 4\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }));
    }

    #[test]
    fn gml_subset() {
        let text = r#"Creator "test"
graph
[
  directed 0
  node [ id 10 label "a" graphics [ x 1.0 y 2.0 ] ]
  node [ id 20 ]
  node
  [
    id 30
  ]
  edge [ source 10 target 20 value 3 ]
  edge [ source 30 target 20 ]
  edge [ source 20 target 10 ]
]
"#;
        let g = parse_gml(text).unwrap();
        assert_eq!(g.labels, vec!["10", "20", "30"]);
        assert_eq!(g.graph.edge_count(), 2);
        assert!(g.graph.has_edge(1, 2));
    }

    #[test]
    fn gml_rejects_unknown_endpoint_and_directed() {
        let err = parse_gml("graph [ node [ id 1 ] edge [ source 1 target 2 ] ]").unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }));
        assert!(parse_gml("graph [ directed 1 ]").is_err());
        assert!(parse_gml("graph [ node [ id 1 ]").is_err());
    }

    #[test]
    fn gml_roundtrip() {
        let g = parse_edge_list("a b\nb c\nc d\nd a\n").unwrap();
        let back = parse_gml(&write_gml(&g)).unwrap();
        assert_eq!(back, g);
        let path = parse_edge_list("a b\nb c\nc d\n").unwrap();
        assert_eq!(parse_edge_list(&write_edge_list(&path)).unwrap(), path);
    }

    #[test]
    fn update_lines() {
        let g = parse_edge_list("a b\nb c\n").unwrap();
        let events = parse_updates("d a b\n# skip\n\nd c b\n", &g).unwrap();
        assert_eq!(
            events,
            vec![UpdateEvent::DeleteEdge(0, 1), UpdateEvent::DeleteEdge(2, 1)]
        );
        let err = parse_updates("d a b\nd x\n", &g).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }));
        assert!(parse_updates("d a zz\n", &g).is_err());
        assert!(parse_updates("a a b\n", &g).is_err());
    }
}
