//! Graph files and divisor strings.
//!
//! A graph file is a JSON object `{"n": 3, "adj": [[0,1,1],[1,0,1],[1,1,0]]}`
//! holding the vertex count and the symmetric adjacency matrix of edge
//! multiplicities. A divisor is written as comma-separated integers, one per
//! vertex, e.g. `1,-1,0`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::graph::{Divisor, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub adj: Vec<Vec<i64>>,
}

impl GraphFile {
    pub fn from_graph(g: &Multigraph) -> Self {
        GraphFile {
            n: g.vertex_count(),
            adj: g.adjacency().iter().map(|r| r.iter().map(|&m| m as i64).collect()).collect(),
        }
    }

    pub fn into_graph(self) -> Result<Multigraph, ExperimentError> {
        if self.adj.len() != self.n {
            return Err(ExperimentError::Config(format!(
                "graph file declares n = {} but adjacency has {} rows",
                self.n,
                self.adj.len()
            )));
        }
        Multigraph::from_signed_adjacency(self.adj).map_err(|e| ExperimentError::Config(e.to_string()))
    }
}

pub fn parse_graph(text: &str) -> Result<Multigraph, ExperimentError> {
    let file: GraphFile = serde_json::from_str(text)?;
    file.into_graph()
}

pub fn read_graph(path: &Path) -> Result<Multigraph, ExperimentError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn graph_to_json(g: &Multigraph) -> String {
    serde_json::to_string(&GraphFile::from_graph(g)).expect("graph file serializes")
}

pub fn parse_divisor(text: &str) -> Result<Divisor, ExperimentError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ExperimentError::Config("divisor is empty".into()));
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| ExperimentError::Config(format!("bad divisor entry `{}`", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Divisor::new)
}
