//! Score tables and dense matrices as CSV or JSON.

use std::fmt::Write as _;

use lric_core::rank::rank;
use lric_core::{Error, Result};
use serde::Serialize;

pub const DECIMALS: usize = 6;

fn fixed(v: f64) -> String {
    let s = format!("{v:.DECIMALS$}");
    // keep "-0.000000" out of reports
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn rounded(v: f64) -> f64 {
    fixed(v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub node: String,
    pub score: f64,
    pub rank: usize,
}

/// One index over all nodes, in node order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTable {
    pub index: String,
    pub scores: Vec<ScoreRow>,
}

impl ScoreTable {
    pub fn new(index: impl Into<String>, ids: &[String], scores: &[f64]) -> Self {
        let ranking = rank(ids, scores);
        let scores = ids
            .iter()
            .zip(scores)
            .map(|(id, &s)| ScoreRow { node: id.clone(), score: rounded(s), rank: ranking.rank_of(id).unwrap_or(0) })
            .collect();
        Self { index: index.into(), scores }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,score,rank\n");
        for row in &self.scores {
            writeln!(out, "{},{},{}", row.node, fixed(row.score), row.rank).unwrap();
        }
        out
    }
}

/// Dense square matrix labelled by node ids; `None` cells are undefined entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixTable {
    pub name: String,
    pub nodes: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl MatrixTable {
    pub fn new(name: impl Into<String>, nodes: &[String], value: impl Fn(usize, usize) -> Option<f64>) -> Self {
        let n = nodes.len();
        let values = (0..n).map(|i| (0..n).map(|j| value(i, j).map(rounded)).collect()).collect();
        Self { name: name.into(), nodes: nodes.to_vec(), values }
    }

    /// Header row `node,<ids>`, then one row per node; undefined cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node");
        for id in &self.nodes {
            write!(out, ",{id}").unwrap();
        }
        out.push('\n');
        for (id, row) in self.nodes.iter().zip(&self.values) {
            out.push_str(id);
            for v in row {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&fixed(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { path: "matrix".into(), line: line as u64, message };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty matrix".into()))?;
        let nodes: Vec<String> = header.split(',').skip(1).map(|s| s.trim().to_string()).collect();
        let mut values = Vec::with_capacity(nodes.len());
        for (k, line) in lines {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != nodes.len() + 1 {
                return Err(err(k + 1, format!("expected {} cells, found {}", nodes.len() + 1, cells.len())));
            }
            if nodes.get(values.len()).map(String::as_str) != Some(cells[0]) {
                return Err(err(k + 1, format!("row label {} does not follow the header order", cells[0])));
            }
            let row = cells[1..]
                .iter()
                .map(|c| if c.is_empty() { Ok(None) } else { c.parse().map(Some).map_err(|_| err(k + 1, format!("invalid value '{c}'"))) })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        if values.len() != nodes.len() {
            return Err(err(0, format!("expected {} rows, found {}", nodes.len(), values.len())));
        }
        Ok(Self { name: name.into(), nodes, values })
    }
}

/// JSON document: `{"indices": [...], "matrices": [...]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub indices: Vec<ScoreTable>,
    pub matrices: Vec<MatrixTable>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
