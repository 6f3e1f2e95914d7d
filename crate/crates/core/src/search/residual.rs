use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;

use super::{accept, LocalSearchParams};
use crate::builder::{ResidualReport, TestingArray};
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::orbit::{OrbitId, OrbitTable};

/// One row 4-subset that must see a tuple from `orbit` in some column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obligation {
    pub rows: [usize; 4],
    pub orbit: OrbitId,
}

/// Every (member subset, missing orbit) pair of the deficient classes.
///
/// Rows are listed in the cyclic reading order of the class, the order in
/// which its d-set tuples are read. A column of `C1` whose pattern on `rows`
/// lies in `orbit` meets the obligation; developing `C1` by the group then
/// covers the whole orbit there.
pub fn residual_obligations(report: &ResidualReport, orbits: &OrbitTable) -> Vec<Obligation> {
    let k = report.k;
    let mut out = Vec::new();
    for e in &report.entries {
        let mut seen = HashSet::new();
        for start in 0..k {
            let rows = e.class.rows_from(start, k);
            let mut key = rows;
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            out.extend(orbits.ids().filter(|id| e.missing & id.bit() != 0).map(|orbit| Obligation { rows, orbit }));
        }
    }
    out
}

/// Number of obligations no column of `matrix` meets.
pub fn score_residual_matrix(report: &ResidualReport, matrix: &TestingArray, orbits: &OrbitTable) -> Result<usize> {
    check_matrix(report, matrix, orbits)?;
    let obligations = residual_obligations(report, orbits);
    let g = orbits.symbol_count();
    Ok(obligations
        .iter()
        .filter(|ob| !(0..matrix.cols()).any(|j| orbit_in_column(matrix, ob.rows, j, g, orbits) == ob.orbit.index()))
        .count())
}

fn check_matrix(report: &ResidualReport, matrix: &TestingArray, orbits: &OrbitTable) -> Result<()> {
    if matrix.symbol_count() != orbits.symbol_count() {
        return Err(Error::DimensionMismatch(format!(
            "matrix over {} symbols, orbit table over {}",
            matrix.symbol_count(),
            orbits.symbol_count()
        )));
    }
    if matrix.cols() > 0 && matrix.rows() != report.k {
        return Err(Error::DimensionMismatch(format!("matrix has {} rows, residual is for k={}", matrix.rows(), report.k)));
    }
    Ok(())
}

#[inline]
fn orbit_in_column(m: &TestingArray, rows: [usize; 4], j: usize, g: usize, orbits: &OrbitTable) -> usize {
    let idx = rows.iter().fold(0usize, |acc, &r| acc * g + m.get(r, j).index());
    orbits.packed_table()[idx] as usize
}

#[derive(Debug, Clone)]
pub struct ResidualSearchOutcome {
    /// Best matrix found, `k x width`.
    pub matrix: TestingArray,
    /// Obligations the matrix leaves open.
    pub unsatisfied: usize,
    pub success: bool,
}

/// Incremental state: per obligation, the number of columns meeting it.
struct MatrixClimber<'a> {
    g: usize,
    orbits: &'a OrbitTable,
    obligations: &'a [Obligation],
    by_row: &'a [Vec<usize>],
    matrix: TestingArray,
    hits: Vec<u32>,
    open: usize,
}

impl<'a> MatrixClimber<'a> {
    fn new(orbits: &'a OrbitTable, obligations: &'a [Obligation], by_row: &'a [Vec<usize>], matrix: TestingArray) -> Self {
        let g = orbits.symbol_count();
        let hits: Vec<u32> = obligations
            .iter()
            .map(|ob| {
                (0..matrix.cols()).filter(|&j| orbit_in_column(&matrix, ob.rows, j, g, orbits) == ob.orbit.index()).count() as u32
            })
            .collect();
        let open = hits.iter().filter(|&&h| h == 0).count();
        MatrixClimber { g, orbits, obligations, by_row, matrix, hits, open }
    }

    fn set(&mut self, r: usize, j: usize, s: Symbol) {
        for &oi in &self.by_row[r] {
            let ob = self.obligations[oi];
            if orbit_in_column(&self.matrix, ob.rows, j, self.g, self.orbits) == ob.orbit.index() {
                self.hits[oi] -= 1;
                if self.hits[oi] == 0 {
                    self.open += 1;
                }
            }
        }
        self.matrix.set(r, j, s);
        for &oi in &self.by_row[r] {
            let ob = self.obligations[oi];
            if orbit_in_column(&self.matrix, ob.rows, j, self.g, self.orbits) == ob.orbit.index() {
                self.hits[oi] += 1;
                if self.hits[oi] == 1 {
                    self.open -= 1;
                }
            }
        }
    }
}

/// Randomized local search for a `k x width` completion matrix meeting every
/// residual obligation.
pub fn search_residual_matrix(
    report: &ResidualReport,
    width: usize,
    params: LocalSearchParams,
    orbits: &OrbitTable,
) -> Result<ResidualSearchOutcome> {
    let g = orbits.symbol_count();
    let k = report.k;
    let obligations = residual_obligations(report, orbits);
    if width == 0 || obligations.is_empty() {
        let matrix = TestingArray::filled(g, k, width, Symbol(0));
        let unsatisfied = score_residual_matrix(report, &matrix, orbits)?;
        return Ok(ResidualSearchOutcome { matrix, unsatisfied, success: unsatisfied == 0 });
    }
    let mut by_row = vec![Vec::new(); k];
    for (i, ob) in obligations.iter().enumerate() {
        for &r in &ob.rows {
            by_row[r].push(i);
        }
    }

    let per_restart = params.per_restart();
    let runs: Vec<(usize, usize, TestingArray)> = (0..params.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = params.rng(restart);
            let mut m = TestingArray::filled(g, k, width, Symbol(0));
            for r in 0..k {
                for j in 0..width {
                    m.set(r, j, Symbol(rng.gen_range(0..g) as u8));
                }
            }
            let mut c = MatrixClimber::new(orbits, &obligations, &by_row, m);
            let mut stall = 0;
            let mut moves = 0;
            while moves < per_restart && c.open > 0 {
                let r = rng.gen_range(0..k);
                let j = rng.gen_range(0..width);
                let old = c.matrix.get(r, j);
                let new = Symbol((old.code() + rng.gen_range(1..g) as u8) % g as u8);
                let before = c.open;
                c.set(r, j, new);
                if !accept(&before, &c.open, &mut stall, params.plateau_cap) {
                    c.set(r, j, old);
                }
                moves += 1;
            }
            (c.open, restart, c.matrix)
        })
        .collect();
    let (unsatisfied, _, matrix) = runs.into_iter().min_by_key(|(open, r, _)| (*open, *r)).expect("at least one restart");
    Ok(ResidualSearchOutcome { matrix, unsatisfied, success: unsatisfied == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{assemble, starter_check, AssemblyOptions, StarterVector};
    use crate::field::FieldSpec;
    use crate::group::Pgl2;
    use crate::verifier::is_covering_array;

    #[test]
    fn empty_residual_needs_nothing() {
        let orbits = OrbitTable::build(&Pgl2::new(&FieldSpec::new(2).unwrap()));
        let report = ResidualReport { k: 9, classes_checked: 0, entries: vec![] };
        let out = search_residual_matrix(&report, 0, LocalSearchParams::new(10, 1, 0), &orbits).unwrap();
        assert!(out.success);
        assert_eq!(out.matrix.cols(), 0);
    }

    #[test]
    fn finds_completion_for_short_vector() {
        let grp = Pgl2::new(&FieldSpec::new(2).unwrap());
        let orbits = OrbitTable::build(&grp);
        let u = StarterVector::parse("0011*0*10", 3).unwrap();
        let report = starter_check(&u, None, &orbits).unwrap();
        assert!(!report.is_empty());
        let out = search_residual_matrix(&report, 30, LocalSearchParams::new(200_000, 4, 3), &orbits).unwrap();
        assert_eq!(score_residual_matrix(&report, &out.matrix, &orbits).unwrap(), out.unsatisfied);
        assert!(out.success);
        let a = assemble(&u, None, Some(&out.matrix), &grp, AssemblyOptions::default()).unwrap();
        assert!(is_covering_array(&a).valid);
    }
}
