#![allow(dead_code)]

use std::path::PathBuf;

use lric_core::{ExposureNetwork, NetworkBuilder};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn rows(name: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    text.lines().skip(1).filter(|l| !l.trim().is_empty()).map(|l| l.split(',').map(|c| c.trim().to_string()).collect()).collect()
}

/// Edge file plus an optional attribute file, parsed without the CLI.
pub fn load(edges: &str, attributes: Option<&str>) -> ExposureNetwork<f64> {
    let mut b = NetworkBuilder::new();
    for r in rows(edges) {
        b.add_edge(&r[0], &r[1], r[2].parse().unwrap()).unwrap();
    }
    if let Some(attrs) = attributes {
        let text = std::fs::read_to_string(data_path(attrs)).unwrap();
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        for r in rows(attrs) {
            for (k, cell) in r.iter().enumerate().skip(1) {
                if !cell.is_empty() {
                    b.set_attribute(&r[0], header[k], cell.parse().unwrap());
                }
            }
        }
    }
    b.build()
}

pub fn example1() -> ExposureNetwork<f64> {
    load("example1.csv", None)
}

pub fn example2() -> ExposureNetwork<f64> {
    load("example2.csv", None)
}

/// Index of a numeric id.
pub fn ix(net: &ExposureNetwork<f64>, id: usize) -> usize {
    net.index_of(&id.to_string()).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol + 1e-12
}
