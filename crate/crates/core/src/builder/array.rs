use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Symbol;

/// A `k x n` array over `g` projective symbols. Rows are parameters and
/// columns are tests. Storage is row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestingArray {
    g: usize,
    k: usize,
    n: usize,
    data: Vec<Symbol>,
}

impl TestingArray {
    pub fn filled(g: usize, k: usize, n: usize, value: Symbol) -> TestingArray {
        TestingArray { g, k, n, data: vec![value; k * n] }
    }

    pub fn from_rows(g: usize, rows: Vec<Vec<Symbol>>) -> Result<TestingArray> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(k * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(bad) = row.iter().find(|s| s.index() >= g) {
                return Err(Error::DimensionMismatch(format!("symbol code {} out of range for g={g}", bad.0)));
            }
            data.extend(row);
        }
        Ok(TestingArray { g, k, n, data })
    }

    /// Builds an array from columns, each of length `k`.
    pub fn from_columns(g: usize, k: usize, columns: &[Vec<Symbol>]) -> Result<TestingArray> {
        let rows = (0..k)
            .map(|r| {
                columns
                    .iter()
                    .map(|c| {
                        c.get(r)
                            .copied()
                            .ok_or_else(|| Error::DimensionMismatch(format!("column of length {} for k={k}", c.len())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut a = TestingArray::from_rows(g, rows)?;
        a.n = columns.len();
        Ok(a)
    }

    #[inline]
    pub fn symbol_count(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, s: Symbol) {
        debug_assert!(s.index() < self.g);
        self.data[r * self.n + c] = s;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> Vec<Symbol> {
        (0..self.k).map(|r| self.get(r, c)).collect()
    }

    /// Horizontal concatenation. All parts must agree on `g` and `k`.
    pub fn hconcat(parts: &[&TestingArray]) -> Result<TestingArray> {
        let first = parts.first().ok_or_else(|| Error::DimensionMismatch("nothing to concatenate".into()))?;
        let (g, k) = (first.g, first.k);
        for p in parts {
            if p.g != g || p.k != k {
                return Err(Error::DimensionMismatch(format!(
                    "cannot join a {}x{} array over {} symbols to a {k}-row array over {g} symbols",
                    p.k, p.n, p.g
                )));
            }
        }
        let n = parts.iter().map(|p| p.n).sum();
        let mut data = Vec::with_capacity(k * n);
        for r in 0..k {
            for p in parts {
                data.extend_from_slice(p.row(r));
            }
        }
        Ok(TestingArray { g, k, n, data })
    }

    /// Keeps the columns whose flag is true.
    pub fn retain_columns(&self, keep: &[bool]) -> TestingArray {
        assert_eq!(keep.len(), self.n);
        let n = keep.iter().filter(|&&b| b).count();
        let mut data = Vec::with_capacity(self.k * n);
        for r in 0..self.k {
            data.extend(self.row(r).iter().zip(keep).filter(|(_, &k)| k).map(|(s, _)| *s));
        }
        TestingArray { g: self.g, k: self.k, n, data }
    }

    /// Reorders columns: column `j` of the result is column `order[j]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> TestingArray {
        assert_eq!(order.len(), self.n);
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.k {
            let row = self.row(r);
            data.extend(order.iter().map(|&c| row[c]));
        }
        TestingArray { g: self.g, k: self.k, n: self.n, data }
    }

    /// The first `k` rows.
    pub fn truncate_rows(&self, k: usize) -> TestingArray {
        let k = k.min(self.k);
        TestingArray { g: self.g, k, n: self.n, data: self.data[..k * self.n].to_vec() }
    }

    /// Applies a symbol map (indexed by code) to every entry.
    pub fn map_symbols(&self, map: &[Symbol]) -> TestingArray {
        TestingArray { g: self.g, k: self.k, n: self.n, data: self.data.iter().map(|s| map[s.index()]).collect() }
    }

    /// Text form: a header line then one line of tokens per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("CA k={} n={} g={} t=4\n", self.k, self.n, self.g);
        for r in 0..self.k {
            let toks: Vec<String> = self.row(r).iter().map(|s| s.token(self.g).to_string()).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<TestingArray> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty array file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("CA") {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let mut get = |name: &str| -> Result<usize> {
            let f = fields.next().ok_or_else(|| Error::Parse(format!("header is missing {name}=")))?;
            f.strip_prefix(name)
                .and_then(|s| s.strip_prefix('='))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("expected {name}=<int>, found {f:?}")))
        };
        let k = get("k")?;
        let n = get("n")?;
        let g = get("g")?;
        let t = get("t")?;
        if t != 4 {
            return Err(Error::Parse(format!("only strength t=4 is supported, found t={t}")));
        }
        let mut rows = Vec::with_capacity(k);
        for r in 0..k {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    let mut chars = tok.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => Symbol::parse_token(c, g),
                        _ => Err(Error::Parse(format!("bad token {tok:?} in row {r}"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {r} has {} tokens, header says n={n}", row.len())));
            }
            rows.push(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("more than k={k} rows")));
        }
        let mut a = TestingArray::from_rows(g, rows)?;
        a.n = n;
        Ok(a)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<TestingArray> {
        TestingArray::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl fmt::Display for TestingArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
