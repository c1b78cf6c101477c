//! CSV ingestion of edge lists, node attributes, absolute thresholds and rankings.

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use lric_core::{Error, Network, NetworkBuilder, Ranking, Result};

fn open(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(ReaderBuilder::new().trim(Trim::All).flexible(false).from_reader(file))
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse { path: path.display().to_string(), line, message: message.into() }
}

fn from_csv(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    parse_error(path, line, e.to_string())
}

fn headers(path: &Path, reader: &mut csv::Reader<File>) -> Result<StringRecord> {
    reader.headers().cloned().map_err(|e| from_csv(path, e))
}

fn column(path: &Path, header: &StringRecord, name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or_else(|| parse_error(path, 1, format!("missing column '{name}'")))
}

fn number(path: &Path, line: u64, what: &str, cell: &str) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| parse_error(path, line, format!("invalid {what} '{cell}'")))
}

// Iterates data records with their 1-based file line numbers.
fn records<'r>(path: &Path, reader: &'r mut csv::Reader<File>) -> impl Iterator<Item = Result<(u64, StringRecord)>> + 'r {
    let path = path.to_path_buf();
    reader.records().map(move |r| {
        let rec = r.map_err(|e| from_csv(&path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        Ok((line, rec))
    })
}

/// Adds the rows of a `from,to,weight` file to `builder`.
pub fn read_edges_into(path: &Path, builder: &mut NetworkBuilder<f64>) -> Result<()> {
    let mut reader = open(path)?;
    let header = headers(path, &mut reader)?;
    let (f, t, w) = (column(path, &header, "from")?, column(path, &header, "to")?, column(path, &header, "weight")?);
    for row in records(path, &mut reader) {
        let (line, rec) = row?;
        let weight = number(path, line, "weight", &rec[w])?;
        builder.add_edge(&rec[f], &rec[t], weight).map_err(|e| parse_error(path, line, e.to_string()))?;
    }
    Ok(())
}

/// Adds a node attribute file: the first column holds node ids, every further
/// column is a numeric attribute named by its header. Empty cells are missing values.
pub fn read_attributes_into(path: &Path, builder: &mut NetworkBuilder<f64>) -> Result<()> {
    let mut reader = open(path)?;
    let header = headers(path, &mut reader)?;
    if header.len() < 2 {
        return Err(parse_error(path, 1, "expected a node column and at least one attribute column"));
    }
    for name in header.iter().skip(1) {
        builder.declare_attribute(name);
    }
    for row in records(path, &mut reader) {
        let (line, rec) = row?;
        for (k, cell) in rec.iter().enumerate().skip(1) {
            if !cell.is_empty() {
                builder.set_attribute(&rec[0], &header[k], number(path, line, &header[k], cell)?);
            }
        }
    }
    Ok(())
}

pub fn load_network(edges: &Path, attributes: Option<&Path>) -> Result<Network> {
    let mut builder = NetworkBuilder::new();
    read_edges_into(edges, &mut builder)?;
    if let Some(attrs) = attributes {
        read_attributes_into(attrs, &mut builder)?;
    }
    Ok(builder.build())
}

/// `node,threshold` rows for the absolute threshold policy.
pub fn read_thresholds(path: &Path) -> Result<HashMap<String, f64>> {
    let mut reader = open(path)?;
    let header = headers(path, &mut reader)?;
    let (n, q) = (column(path, &header, "node")?, column(path, &header, "threshold")?);
    let mut out = HashMap::new();
    for row in records(path, &mut reader) {
        let (line, rec) = row?;
        let value = number(path, line, "threshold", &rec[q])?;
        if value <= 0.0 || !value.is_finite() {
            return Err(parse_error(path, line, format!("threshold of {} must be positive", &rec[n])));
        }
        if out.insert(rec[n].to_string(), value).is_some() {
            return Err(parse_error(path, line, format!("duplicate node {}", &rec[n])));
        }
    }
    Ok(out)
}

/// A `node,score,rank` report; the rank column wins when present.
pub fn read_ranking(path: &Path) -> Result<Ranking> {
    let mut reader = open(path)?;
    let header = headers(path, &mut reader)?;
    let n = column(path, &header, "node")?;
    let rank_col = column(path, &header, "rank").ok();
    let score_col = column(path, &header, "score").ok();
    let mut ids = Vec::new();
    let mut ranks = Vec::new();
    let mut scores = Vec::new();
    for row in records(path, &mut reader) {
        let (line, rec) = row?;
        ids.push(rec[n].to_string());
        match (rank_col, score_col) {
            (Some(r), _) => ranks.push(
                rec[r].parse::<usize>().map_err(|_| parse_error(path, line, format!("invalid rank '{}'", &rec[r])))?,
            ),
            (None, Some(s)) => scores.push(number(path, line, "score", &rec[s])?),
            (None, None) => return Err(parse_error(path, 1, "expected a rank or score column")),
        }
    }
    if rank_col.is_some() {
        Ok(Ranking::from_ranks(ids.into_iter().zip(ranks).collect()))
    } else {
        Ok(lric_core::rank::rank(&ids, &scores))
    }
}
