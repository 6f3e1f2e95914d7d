//! Degree extension by one fixed row.
//!
//! Starters of length `k-1` develop cyclically on rows `0..k-1` while row
//! `k-1` holds one symbol per starter block. The array keeps the size of the
//! length-`(k-1)` construction.

use super::{constant_columns, develop, AssemblyOptions, StarterVector, TestingArray};
use crate::classes::{enumerate_fixed_row_classes, FixedRowClass};
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::group::Pgl2;
use crate::orbit::{pack, OrbitMask, OrbitTable};

/// Outcome for one choice of fixed-row symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionVerdict {
    pub u_symbol: Symbol,
    pub v_symbol: Option<Symbol>,
    /// Missing (fixed-row class, orbit) pairs.
    pub missing_pairs: usize,
}

impl ExtensionVerdict {
    pub fn passes(&self) -> bool {
        self.missing_pairs == 0
    }
}

/// Per fixed-row class, the orbit mask hit by one block for each candidate symbol.
fn block_masks(w: &[Symbol], classes: &[FixedRowClass], orbits: &OrbitTable) -> Vec<Vec<OrbitMask>> {
    let g = orbits.symbol_count();
    let k = w.len() + 1;
    classes
        .iter()
        .map(|c| {
            (0..g)
                .map(|s| {
                    (0..k - 1).fold(0, |mask, i| {
                        let r = c.rows_from(i, k);
                        let t = [w[r[0]], w[r[1]], w[r[2]], Symbol(s as u8)];
                        mask | orbits.orbit_of_packed(pack(&t, g)).bit()
                    })
                })
                .collect()
        })
        .collect()
}

fn validate(u: &StarterVector, v: Option<&StarterVector>, orbits: &OrbitTable) -> Result<()> {
    if let Some(v) = v {
        if v.len() != u.len() {
            return Err(Error::LengthMismatch { expected: u.len(), found: v.len() });
        }
    }
    if u.symbol_count() != orbits.symbol_count() {
        return Err(Error::DimensionMismatch(format!(
            "vector over {} symbols, orbit table over {}",
            u.symbol_count(),
            orbits.symbol_count()
        )));
    }
    Ok(())
}

/// Fixed-row classes left deficient when row `k-1` holds `s` under the `u`
/// block and `t` under the `v` block. `u` and `v` have length `k-1`.
pub fn fixed_row_residual(
    u: &StarterVector,
    v: Option<&StarterVector>,
    s: Symbol,
    t: Option<Symbol>,
    orbits: &OrbitTable,
) -> Result<Vec<(FixedRowClass, OrbitMask)>> {
    validate(u, v, orbits)?;
    let classes = enumerate_fixed_row_classes(u.len() + 1)?;
    let mu = block_masks(u.as_slice(), &classes, orbits);
    let mv = v.map(|v| block_masks(v.as_slice(), &classes, orbits));
    let required = orbits.required_mask();
    Ok(classes
        .iter()
        .enumerate()
        .filter_map(|(ci, c)| {
            let mut mask = mu[ci][s.index()];
            if let (Some(mv), Some(t)) = (&mv, t) {
                mask |= mv[ci][t.index()];
            }
            let missing = required & !mask;
            (missing != 0).then_some((*c, missing))
        })
        .collect())
}

/// Scores every placement: `g` choices for one starter, `g^2` for two.
pub fn check_extension(u: &StarterVector, v: Option<&StarterVector>, orbits: &OrbitTable) -> Result<Vec<ExtensionVerdict>> {
    validate(u, v, orbits)?;
    let g = orbits.symbol_count();
    let classes = enumerate_fixed_row_classes(u.len() + 1)?;
    let mu = block_masks(u.as_slice(), &classes, orbits);
    let mv = v.map(|v| block_masks(v.as_slice(), &classes, orbits));
    let required = orbits.required_mask();

    let mut out = Vec::new();
    for s in 0..g {
        let ts: Vec<Option<usize>> = if mv.is_some() { (0..g).map(Some).collect() } else { vec![None] };
        for t in ts {
            let missing_pairs = mu
                .iter()
                .enumerate()
                .map(|(ci, m)| {
                    let mut mask = m[s];
                    if let (Some(mv), Some(t)) = (&mv, t) {
                        mask |= mv[ci][t];
                    }
                    (required & !mask).count_ones() as usize
                })
                .sum();
            out.push(ExtensionVerdict { u_symbol: Symbol(s as u8), v_symbol: t.map(|t| Symbol(t as u8)), missing_pairs });
        }
    }
    Ok(out)
}

/// Circulant of `w` with an extra constant row `s` at the bottom.
fn extended_block(w: &StarterVector, s: Symbol) -> TestingArray {
    let k = w.len();
    let sym = w.as_slice();
    let mut rows: Vec<Vec<Symbol>> = (0..k).map(|i| (0..k).map(|j| sym[(i + k - j) % k]).collect()).collect();
    rows.push(vec![s; k]);
    TestingArray::from_rows(w.symbol_count(), rows).expect("rectangular")
}

/// The degree-`(k+1)` array for starters of length `k` and fixed-row symbols.
pub fn assemble_extended(
    u: &StarterVector,
    v: Option<&StarterVector>,
    s: Symbol,
    t: Option<Symbol>,
    group: &Pgl2,
    opts: AssemblyOptions,
) -> Result<TestingArray> {
    let g = group.field().symbol_count();
    let mut blocks = vec![extended_block(u, s)];
    match (v, t) {
        (Some(v), Some(t)) => {
            if v.len() != u.len() {
                return Err(Error::LengthMismatch { expected: u.len(), found: v.len() });
            }
            blocks.push(extended_block(v, t));
        }
        (None, None) => {}
        _ => return Err(Error::DimensionMismatch("a fixed-row symbol is needed for each starter".into())),
    }
    let refs: Vec<&TestingArray> = blocks.iter().collect();
    let m = TestingArray::hconcat(&refs)?;
    let mut parts = vec![develop(&m, group)];
    if opts.include_constants {
        parts.push(constant_columns(g, u.len() + 1));
    }
    let refs: Vec<&TestingArray> = parts.iter().collect();
    TestingArray::hconcat(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn constant_vectors_never_extend() {
        let grp = Pgl2::new(&FieldSpec::new(2).unwrap());
        let orbits = OrbitTable::build(&grp);
        let u = StarterVector::constant(3, 12, Symbol(0));
        let v = StarterVector::constant(3, 12, Symbol(1));
        let verdicts = check_extension(&u, Some(&v), &orbits).unwrap();
        assert_eq!(verdicts.len(), 9);
        assert!(verdicts.iter().all(|x| !x.passes()));
        assert_eq!(check_extension(&u, None, &orbits).unwrap().len(), 3);
    }

    #[test]
    fn extended_shape() {
        let grp = Pgl2::new(&FieldSpec::new(2).unwrap());
        let u = StarterVector::parse("0*1100", 3).unwrap();
        let a = assemble_extended(&u, None, Symbol(2), None, &grp, AssemblyOptions::default()).unwrap();
        assert_eq!((a.rows(), a.cols()), (7, 6 * 6 + 3));
        // bottom row under the first copy (identity) is the fixed symbol
        assert!((0..6).all(|c| a.get(6, c) == Symbol(2)));
        assert!(assemble_extended(&u, None, Symbol(2), Some(Symbol(0)), &grp, AssemblyOptions::default()).is_err());
    }
}
