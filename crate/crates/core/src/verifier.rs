//! Brute-force strength-4 coverage and the class-based coverage formula.
//!
//! The brute-force pass walks every 4-subset of rows in lexicographic order
//! and marks the tuples seen across all columns in a `g^4`-bit set. Work is
//! split over the first row of the subset; each task owns its bit set.

use rayon::prelude::*;
use serde::Serialize;

use crate::builder::{d_set_mask, StarterVector, TestingArray};
use crate::classes::{binomial, enumerate_classes};
use crate::error::{Error, Result};
use crate::field::{format_symbols, Symbol};
use crate::orbit::{unpack, OrbitTable};

/// An uncovered tuple on a set of rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub rows: [usize; 4],
    pub tuple: [Symbol; 4],
}

/// Result of a covering check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverVerdict {
    pub valid: bool,
    /// Lexicographically first missing (rows, tuple) when not valid.
    pub witness: Option<Witness>,
}

/// Count of covered (row 4-subset, tuple) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageResult {
    pub g: usize,
    pub covered: u64,
    pub total: u64,
    pub witness: Option<Witness>,
}

#[derive(Serialize)]
struct WitnessRecord {
    rows: [usize; 4],
    tuple: String,
}

#[derive(Serialize)]
struct CoverageRecord {
    covered: u64,
    total: u64,
    mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessRecord>,
}

impl CoverageResult {
    pub fn mu(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.covered as f64 / self.total as f64
    }

    /// `mu` rounded to three decimals.
    pub fn mu_rounded(&self) -> f64 {
        (self.mu() * 1000.0).round() / 1000.0
    }

    /// `covered / total` in lowest terms.
    pub fn ratio(&self) -> (u64, u64) {
        let d = gcd(self.covered, self.total).max(1);
        (self.covered / d, self.total / d)
    }

    pub fn is_full(&self) -> bool {
        self.covered == self.total
    }

    /// One-line JSON record.
    pub fn to_record(&self) -> String {
        let rec = CoverageRecord {
            covered: self.covered,
            total: self.total,
            mu: self.mu_rounded(),
            witness: self.witness.map(|w| WitnessRecord { rows: w.rows, tuple: format_symbols(&w.tuple, self.g) }),
        };
        serde_json::to_string(&rec).expect("plain record")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Scan {
    covered: u64,
    witness: Option<Witness>,
}

/// Scans all subsets whose least row is `a`. Stops at the first subset with a
/// gap when `stop_early` is set.
fn scan_first_row(a: &TestingArray, first: usize, stop_early: bool) -> Scan {
    let g = a.symbol_count();
    let k = a.rows();
    let n = a.cols();
    let full = g.pow(4);
    let mut bits = vec![0u64; full.div_ceil(64)];
    let mut ab = vec![0u32; n];
    let mut abc = vec![0u32; n];
    let mut out = Scan { covered: 0, witness: None };
    let g32 = g as u32;
    let r0 = a.row(first);
    for b in first + 1..k {
        let r1 = a.row(b);
        for j in 0..n {
            ab[j] = r0[j].0 as u32 * g32 + r1[j].0 as u32;
        }
        for c in b + 1..k {
            let r2 = a.row(c);
            for j in 0..n {
                abc[j] = ab[j] * g32 + r2[j].0 as u32;
            }
            for d in c + 1..k {
                let r3 = a.row(d);
                bits.iter_mut().for_each(|w| *w = 0);
                for j in 0..n {
                    let idx = (abc[j] * g32 + r3[j].0 as u32) as usize;
                    bits[idx >> 6] |= 1 << (idx & 63);
                }
                let seen: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
                out.covered += seen;
                if seen < full as u64 && out.witness.is_none() {
                    let missing = (0..full).find(|&i| bits[i >> 6] & (1 << (i & 63)) == 0).expect("a gap exists");
                    out.witness = Some(Witness { rows: [first, b, c, d], tuple: unpack(missing, g) });
                    if stop_early {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// True iff every 4-subset of rows sees all `g^4` tuples.
pub fn is_covering_array(a: &TestingArray) -> CoverVerdict {
    if a.rows() < 4 {
        return CoverVerdict { valid: false, witness: None };
    }
    let witness = (0..a.rows() - 3).into_par_iter().find_map_first(|first| scan_first_row(a, first, true).witness);
    CoverVerdict { valid: witness.is_none(), witness }
}

/// Exact coverage by enumerating every row 4-subset.
pub fn coverage_brute(a: &TestingArray) -> CoverageResult {
    let g = a.symbol_count();
    let k = a.rows();
    let total = binomial(k, 4) * (g as u64).pow(4);
    if k < 4 {
        return CoverageResult { g, covered: 0, total, witness: None };
    }
    let scans: Vec<Scan> = (0..k - 3).into_par_iter().map(|first| scan_first_row(a, first, false)).collect();
    let covered = scans.iter().map(|s| s.covered).sum();
    let witness = scans.iter().find_map(|s| s.witness);
    CoverageResult { g, covered, total, witness }
}

/// Coverage of the assembled array `[M^G (, C)]` computed from d-sets alone:
/// each class contributes its size times the tuples in the orbits its d-set
/// meets, plus the constant orbit when constant columns are included.
pub fn coverage_by_classes(
    u: &StarterVector,
    v: Option<&StarterVector>,
    orbits: &OrbitTable,
    include_constants: bool,
) -> Result<CoverageResult> {
    let g = orbits.symbol_count();
    let k = u.len();
    if let Some(v) = v {
        if v.len() != k {
            return Err(Error::LengthMismatch { expected: k, found: v.len() });
        }
    }
    let vectors: Vec<&[Symbol]> = std::iter::once(u).chain(v).map(StarterVector::as_slice).collect();
    let constant = if include_constants { orbits.constant_orbit().bit() } else { 0 };
    let covered =
        enumerate_classes(k)?.iter().map(|c| c.size as u64 * orbits.tuples_in(d_set_mask(&vectors, c, orbits) | constant)).sum();
    Ok(CoverageResult { g, covered, total: binomial(k, 4) * (g as u64).pow(4), witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::Pgl2;
    use crate::orbit::pack;

    /// All g^4 tuples on exactly four rows.
    fn exhaustive_k4(g: usize) -> TestingArray {
        let cols: Vec<Vec<Symbol>> = (0..g.pow(4)).map(|i| unpack(i, g).to_vec()).collect();
        TestingArray::from_columns(g, 4, &cols).unwrap()
    }

    #[test]
    fn exhaustive_is_covering() {
        let a = exhaustive_k4(3);
        assert!(is_covering_array(&a).valid);
        let cov = coverage_brute(&a);
        assert!(cov.is_full());
        assert_eq!(cov.mu(), 1.0);
    }

    #[test]
    fn witness_is_first_gap() {
        let a = exhaustive_k4(3);
        let keep: Vec<bool> = (0..81).map(|i| i != 5 && i != 40).collect();
        let b = a.retain_columns(&keep);
        let v = is_covering_array(&b);
        assert!(!v.valid);
        let w = v.witness.unwrap();
        assert_eq!(w.rows, [0, 1, 2, 3]);
        assert_eq!(pack(&w.tuple, 3), 5);
        let cov = coverage_brute(&b);
        assert_eq!(cov.covered, 79);
        assert_eq!(cov.witness, Some(w));
        assert!(cov.to_record().starts_with("{\"covered\":79,\"total\":81,\"mu\":0.975,\"witness\":"));
    }

    #[test]
    fn too_few_columns() {
        let a = TestingArray::filled(3, 6, 80, Symbol(0));
        assert!(!is_covering_array(&a).valid);
    }

    #[test]
    fn classes_match_brute_small() {
        let grp = Pgl2::new(&FieldSpec::new(2).unwrap());
        let orbits = OrbitTable::build(&grp);
        let u = StarterVector::parse("0010*1*0011", 3).unwrap();
        let a = crate::builder::assemble(&u, None, None, &grp, Default::default()).unwrap();
        let brute = coverage_brute(&a);
        let by = coverage_by_classes(&u, None, &orbits, true).unwrap();
        assert_eq!(brute.covered, by.covered);
        assert_eq!(brute.total, by.total);
    }

    #[test]
    fn ratio_reduced() {
        let r = CoverageResult { g: 3, covered: 60, total: 81, witness: None };
        assert_eq!(r.ratio(), (20, 27));
    }
}
