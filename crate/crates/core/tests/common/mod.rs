#![allow(dead_code)]

use std::path::PathBuf;

use pglca::builder::{read_starters, StarterVector};
use pglca::TestingArray;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// The reference `(u, v)` pair for degree `k` over three symbols.
pub fn starters(k: usize) -> (StarterVector, StarterVector) {
    let mut vs = read_starters(data(&format!("k{k}_starters.txt")), 3).unwrap();
    assert_eq!(vs.len(), 2);
    let v = vs.pop().unwrap();
    let u = vs.pop().unwrap();
    assert_eq!(u.len(), k);
    (u, v)
}

/// The reference completion matrix for degree `k`, if there is one.
pub fn completion(k: usize) -> Option<TestingArray> {
    let name = format!("k{k}_c1.txt");
    let path = data(&name);
    path.exists().then(|| TestingArray::read(path).unwrap())
}

/// One row of the reference coverage table.
#[derive(Debug, Clone)]
pub struct CoverageRow {
    pub g: usize,
    pub k: usize,
    pub n: usize,
    pub mu: f64,
    pub vector: String,
}

pub fn coverage_rows() -> Vec<CoverageRow> {
    std::fs::read_to_string(data("coverage_table.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            CoverageRow {
                g: f[0].parse().unwrap(),
                k: f[1].parse().unwrap(),
                n: f[2].parse().unwrap(),
                mu: f[3].parse().unwrap(),
                vector: f[4].to_string(),
            }
        })
        .collect()
}
