use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BiboundariedGraph, Digraph, GraphError};

/// JSON object form `{"n", "edges", "p1", "p2"}` used by gadget files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphObject {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub p1: Vec<usize>,
    #[serde(default)]
    pub p2: Vec<usize>,
}

impl From<&BiboundariedGraph> for GraphObject {
    fn from(g: &BiboundariedGraph) -> Self {
        GraphObject {
            n: g.vertex_count(),
            edges: g.graph.edges().collect(),
            p1: g.p1.clone(),
            p2: g.p2.clone(),
        }
    }
}

impl From<&Digraph> for GraphObject {
    fn from(g: &Digraph) -> Self {
        GraphObject {
            n: g.vertex_count(),
            edges: g.edges().collect(),
            p1: Vec::new(),
            p2: Vec::new(),
        }
    }
}

impl TryFrom<GraphObject> for BiboundariedGraph {
    type Error = GraphError;

    fn try_from(o: GraphObject) -> Result<Self, GraphError> {
        BiboundariedGraph::new(Digraph::from_edges(o.n, o.edges)?, o.p1, o.p2)
    }
}

fn parse_num(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::ParseError {
        line,
        message: format!("expected a decimal label, found {tok:?}"),
    })
}

impl BiboundariedGraph {
    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// graph 3
    /// e 0 1
    /// e 1 2
    /// p1 0
    /// p2 2
    /// ```
    ///
    /// `#` starts a comment. Port lines are optional.
    pub fn from_text(text: &str) -> Result<BiboundariedGraph, GraphError> {
        let mut graph: Option<Digraph> = None;
        let mut p1 = None;
        let mut p2 = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = content.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let rest: Vec<&str> = toks.collect();
            let perr = |message: String| GraphError::ParseError { line, message };
            match head {
                "graph" => {
                    if graph.is_some() {
                        return Err(perr("duplicate `graph` header".into()));
                    }
                    let [n] = rest.as_slice() else {
                        return Err(perr("`graph` takes exactly one vertex count".into()));
                    };
                    graph = Some(Digraph::new(parse_num(n, line)?));
                }
                "e" => {
                    let g = graph.as_mut().ok_or_else(|| perr("edge before `graph` header".into()))?;
                    let [u, v] = rest.as_slice() else {
                        return Err(perr("`e` takes exactly two labels".into()));
                    };
                    g.add_edge(parse_num(u, line)?, parse_num(v, line)?)?;
                }
                "p1" | "p2" => {
                    let ports = rest.iter().map(|t| parse_num(t, line)).collect::<Result<Vec<_>, _>>()?;
                    let slot = if head == "p1" { &mut p1 } else { &mut p2 };
                    if slot.replace(ports).is_some() {
                        return Err(perr(format!("duplicate `{head}` line")));
                    }
                }
                other => return Err(perr(format!("unknown directive {other:?}"))),
            }
        }
        let graph = graph.ok_or(GraphError::ParseError {
            line: 0,
            message: "missing `graph` header".into(),
        })?;
        BiboundariedGraph::new(graph, p1.unwrap_or_default(), p2.unwrap_or_default())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph {}\n", self.vertex_count());
        for (u, v) in self.graph.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        if self.port_count() > 0 {
            for (name, ports) in [("p1", &self.p1), ("p2", &self.p2)] {
                out.push_str(name);
                for p in ports {
                    let _ = write!(out, " {p}");
                }
                out.push('\n');
            }
        }
        out
    }
}

impl Digraph {
    /// Parses the graph text format, ignoring any port lines.
    pub fn from_text(text: &str) -> Result<Digraph, GraphError> {
        BiboundariedGraph::from_text(text).map(|g| g.graph)
    }

    pub fn to_text(&self) -> String {
        BiboundariedGraph::unported(self.clone()).to_text()
    }
}
