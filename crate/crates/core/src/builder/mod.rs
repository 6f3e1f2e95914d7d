//! Testing arrays assembled from starter vectors.
//!
//! A starter `u` of length `k` gives the `k x k` circulant whose column `j`
//! is `u` rotated down by `j`. The body of the array is that circulant (or
//! two of them side by side) developed by every element of PGL(2,q), then
//! optionally a developed completion matrix `C1`, then one constant column
//! per symbol.

mod array;
mod extension;

use std::fmt;
use std::path::Path;

pub use array::TestingArray;
pub use extension::{assemble_extended, check_extension, fixed_row_residual, ExtensionVerdict};

use crate::classes::{enumerate_classes, EquivClass};
use crate::error::{Error, Result};
use crate::field::{format_symbols, parse_symbols, Symbol};
use crate::group::Pgl2;
use crate::orbit::{pack, OrbitMask, OrbitTable};

/// A length-`k` vector of projective symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarterVector {
    g: usize,
    symbols: Vec<Symbol>,
}

impl StarterVector {
    pub fn new(g: usize, symbols: Vec<Symbol>) -> Result<StarterVector> {
        if symbols.len() < 4 {
            return Err(Error::DegreeTooSmall { k: symbols.len(), min: 4 });
        }
        if let Some(bad) = symbols.iter().find(|s| s.index() >= g) {
            return Err(Error::DimensionMismatch(format!("symbol code {} out of range for g={g}", bad.0)));
        }
        Ok(StarterVector { g, symbols })
    }

    /// Parses a token string such as `011*11***0`.
    pub fn parse(text: &str, g: usize) -> Result<StarterVector> {
        StarterVector::new(g, parse_symbols(text, g)?)
    }

    pub fn constant(g: usize, k: usize, s: Symbol) -> StarterVector {
        StarterVector { g, symbols: vec![s; k] }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn symbol_count(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    /// Copy of `self` with `s` appended.
    pub fn extended(&self, s: Symbol) -> StarterVector {
        let mut symbols = self.symbols.clone();
        symbols.push(s);
        StarterVector { g: self.g, symbols }
    }
}

impl fmt::Display for StarterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.symbols, self.g))
    }
}

/// Reads a starter file: one vector per line, blank lines and `#` comments ignored.
pub fn read_starters(path: impl AsRef<Path>, g: usize) -> Result<Vec<StarterVector>> {
    parse_starters(&std::fs::read_to_string(path)?, g)
}

pub fn parse_starters(text: &str, g: usize) -> Result<Vec<StarterVector>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(|l| StarterVector::parse(l, g)).collect()
}

pub fn write_starters(path: impl AsRef<Path>, vectors: &[StarterVector]) -> Result<()> {
    let text: String = vectors.iter().map(|v| format!("{v}\n")).collect();
    std::fs::write(path, text)?;
    Ok(())
}

/// `k x k` circulant with entry `(i, j) = u[(i - j) mod k]`.
pub fn circulant(u: &StarterVector) -> TestingArray {
    let k = u.len();
    let rows = (0..k).map(|i| (0..k).map(|j| u.symbols[(i + k - j) % k]).collect()).collect();
    TestingArray::from_rows(u.g, rows).expect("square circulant")
}

/// One relabelled copy of `block` per group element, in enumeration order.
pub fn develop(block: &TestingArray, group: &Pgl2) -> TestingArray {
    develop_by(block, group.elements().iter().map(|e| e.action()))
}

pub(crate) fn develop_by<'a>(block: &TestingArray, actions: impl Iterator<Item = &'a [Symbol]>) -> TestingArray {
    let copies: Vec<TestingArray> = actions.map(|act| block.map_symbols(act)).collect();
    let refs: Vec<&TestingArray> = copies.iter().collect();
    if refs.is_empty() {
        return TestingArray::filled(block.symbol_count(), block.rows(), 0, Symbol(0));
    }
    TestingArray::hconcat(&refs).expect("copies share a shape")
}

/// `k x g` array whose column `x` is constant `x`.
pub fn constant_columns(g: usize, k: usize) -> TestingArray {
    let rows = (0..k).map(|_| (0..g).map(|x| Symbol(x as u8)).collect()).collect();
    TestingArray::from_rows(g, rows).expect("rectangular")
}

/// One deficient class and the orbits its d-set misses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEntry {
    pub class: EquivClass,
    pub missing: OrbitMask,
}

/// Classes whose d-set fails to meet every non-constant orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub k: usize,
    pub classes_checked: usize,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of missing (class, orbit) pairs.
    pub fn missing_pairs(&self) -> usize {
        self.entries.iter().map(|e| e.missing.count_ones() as usize).sum()
    }

    /// Text table: one line per deficient class with the missing orbits,
    /// numbered among the non-constant orbits.
    pub fn render(&self, orbits: &OrbitTable) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let labels: Vec<String> = orbits
                .ids()
                .filter(|id| e.missing & id.bit() != 0)
                .filter_map(|id| orbits.nonconstant_number(id))
                .map(|l| l.to_string())
                .collect();
            out.push_str(&format!("d{} | {}\n", e.class, labels.join(",")));
        }
        out.push_str(&format!(
            "{} of {} classes deficient, {} missing (class, orbit) pairs\n",
            self.entries.len(),
            self.classes_checked,
            self.missing_pairs()
        ));
        out
    }
}

/// Orbits hit by the d-set of `class` over the given vectors.
pub fn d_set_mask(vectors: &[&[Symbol]], class: &EquivClass, orbits: &OrbitTable) -> OrbitMask {
    let g = orbits.symbol_count();
    let mut mask = 0;
    for w in vectors {
        let k = w.len();
        for i in 0..k {
            let rows = class.rows_from(i, k);
            mask |= orbits.orbit_of_packed(pack(&rows.map(|r| w[r]), g)).bit();
        }
    }
    mask
}

fn check_lengths(u: &StarterVector, v: Option<&StarterVector>, orbits: &OrbitTable) -> Result<()> {
    if let Some(v) = v {
        if v.len() != u.len() {
            return Err(Error::LengthMismatch { expected: u.len(), found: v.len() });
        }
    }
    for w in std::iter::once(u).chain(v) {
        if w.g != orbits.symbol_count() {
            return Err(Error::DimensionMismatch(format!(
                "vector over {} symbols, orbit table over {}",
                w.g,
                orbits.symbol_count()
            )));
        }
    }
    Ok(())
}

/// Checks the starter condition class by class.
pub fn starter_check(u: &StarterVector, v: Option<&StarterVector>, orbits: &OrbitTable) -> Result<ResidualReport> {
    check_lengths(u, v, orbits)?;
    let k = u.len();
    let classes = enumerate_classes(k)?;
    let vectors: Vec<&[Symbol]> = std::iter::once(u).chain(v).map(StarterVector::as_slice).collect();
    let required = orbits.required_mask();
    let entries = classes
        .iter()
        .filter_map(|c| {
            let missing = required & !d_set_mask(&vectors, c, orbits);
            (missing != 0).then_some(ResidualEntry { class: *c, missing })
        })
        .collect();
    Ok(ResidualReport { k, classes_checked: classes.len(), entries })
}

/// How the optional parts are attached by [`assemble`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    pub include_constants: bool,
    /// Develop `C1` by the group (default) or append it as given.
    pub develop_c1: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { include_constants: true, develop_c1: true }
    }
}

/// Column count of an assembled array.
pub fn assembled_size(k: usize, vectors: usize, c1_width: usize, group_order: usize, g: usize, opts: AssemblyOptions) -> usize {
    let c1 = if opts.develop_c1 { c1_width * group_order } else { c1_width };
    vectors * k * group_order + c1 + if opts.include_constants { g } else { 0 }
}

/// `[M^G, C1^G, C]` with `M = [circ(u), circ(v)]`.
pub fn assemble(
    u: &StarterVector,
    v: Option<&StarterVector>,
    c1: Option<&TestingArray>,
    group: &Pgl2,
    opts: AssemblyOptions,
) -> Result<TestingArray> {
    let g = group.field().symbol_count();
    let k = u.len();
    if let Some(v) = v {
        if v.len() != k {
            return Err(Error::LengthMismatch { expected: k, found: v.len() });
        }
    }
    for w in std::iter::once(u).chain(v) {
        if w.g != g {
            return Err(Error::DimensionMismatch(format!("vector over {} symbols, group acts on {g}", w.g)));
        }
    }
    if let Some(c1) = c1 {
        if c1.rows() != k || c1.symbol_count() != g {
            return Err(Error::DimensionMismatch(format!(
                "C1 is {}x{} over {} symbols, expected {k} rows over {g}",
                c1.rows(),
                c1.cols(),
                c1.symbol_count()
            )));
        }
    }

    let circ: Vec<TestingArray> = std::iter::once(u).chain(v).map(circulant).collect();
    let circ_refs: Vec<&TestingArray> = circ.iter().collect();
    let m = TestingArray::hconcat(&circ_refs)?;
    let mut parts = vec![develop(&m, group)];
    if let Some(c1) = c1 {
        parts.push(if opts.develop_c1 { develop(c1, group) } else { c1.clone() });
    }
    if opts.include_constants {
        parts.push(constant_columns(g, k));
    }
    let refs: Vec<&TestingArray> = parts.iter().collect();
    TestingArray::hconcat(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn sv(s: &str, g: usize) -> StarterVector {
        StarterVector::parse(s, g).unwrap()
    }

    #[test]
    fn circulant_layout() {
        let u = sv("0120", 4);
        let m = circulant(&u);
        assert_eq!(m.column(0), u.as_slice());
        assert_eq!(m.column(1), parse_symbols("0012", 4).unwrap());
        let c = circulant(&StarterVector::constant(3, 5, Symbol(1)));
        assert!((0..5).all(|r| c.row(r).iter().all(|&s| s == Symbol(1))));
    }

    #[test]
    fn develop_shapes() {
        let f = FieldSpec::new(2).unwrap();
        let grp = Pgl2::new(&f);
        let col = TestingArray::from_rows(3, vec![vec![Symbol(0)], vec![Symbol(1)]]).unwrap();
        let d = develop(&col, &grp);
        assert_eq!(d.cols(), 6);
        let mut pairs: Vec<_> = (0..6).map(|c| (d.get(0, c), d.get(1, c))).collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 6, "all ordered pairs of distinct symbols");
        assert!(pairs.iter().all(|(a, b)| a != b));

        let ident = develop_by(&col, std::iter::once(grp.elements()[0].action()));
        assert_eq!(ident, col);
    }

    #[test]
    fn constants() {
        let c = constant_columns(3, 4);
        assert_eq!((c.rows(), c.cols()), (4, 3));
        assert_eq!(c.column(2), vec![Symbol(2); 4]);
        assert_eq!(constant_columns(5, 2).cols(), 5);
    }

    #[test]
    fn constant_starter_misses_everything() {
        let f = FieldSpec::new(2).unwrap();
        let orbits = OrbitTable::build(&Pgl2::new(&f));
        let u = StarterVector::constant(3, 9, Symbol(0));
        let rep = starter_check(&u, None, &orbits).unwrap();
        assert_eq!(rep.entries.len(), rep.classes_checked);
        assert!(rep.entries.iter().all(|e| e.missing == orbits.required_mask()));
    }

    #[test]
    fn length_mismatch() {
        let f = FieldSpec::new(2).unwrap();
        let grp = Pgl2::new(&f);
        let orbits = OrbitTable::build(&grp);
        let u = StarterVector::constant(3, 9, Symbol(0));
        let v = StarterVector::constant(3, 8, Symbol(0));
        assert!(matches!(starter_check(&u, Some(&v), &orbits), Err(Error::LengthMismatch { .. })));
        assert!(assemble(&u, Some(&v), None, &grp, AssemblyOptions::default()).is_err());
        let c1 = TestingArray::filled(3, 8, 2, Symbol(0));
        assert!(assemble(&u, None, Some(&c1), &grp, AssemblyOptions::default()).is_err());
    }

    #[test]
    fn assembled_sizes() {
        let f = FieldSpec::new(2).unwrap();
        let grp = Pgl2::new(&f);
        let u = sv("0011*0*10", 3);
        let v = sv("*1010*001", 3);
        let c1 = TestingArray::filled(3, 9, 2, Symbol(1));
        let opts = AssemblyOptions::default();
        for (vv, cc) in [(None, None), (Some(&v), None), (None, Some(&c1)), (Some(&v), Some(&c1))] {
            let a = assemble(&u, vv, cc, &grp, opts).unwrap();
            let expect = assembled_size(9, 1 + vv.is_some() as usize, cc.map_or(0, |c| c.cols()), 6, 3, opts);
            assert_eq!(a.cols(), expect);
            assert_eq!(a.rows(), 9);
        }
        let raw = AssemblyOptions { include_constants: false, develop_c1: false };
        assert_eq!(assemble(&u, Some(&v), Some(&c1), &grp, raw).unwrap().cols(), 2 * 9 * 6 + 2);
    }

    #[test]
    fn starter_file_roundtrip() {
        let text = "# pair\n011*\n\n*110\n";
        let vs = parse_starters(text, 3).unwrap();
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[1].to_string(), "*110");
    }
}
