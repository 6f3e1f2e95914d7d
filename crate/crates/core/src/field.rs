//! Small Galois fields GF(q) and the projective line GF(q) ∪ {∞}.
//!
//! Elements are stored as integer codes `0..q`. For prime fields the code is
//! the residue itself. For extension fields GF(p^m) the code packs the
//! polynomial coefficients in base `p`, lowest degree first, so in GF(4) the
//! code 2 is `x` and 3 is `x + 1`.
//!
//! The projective line adds the point at infinity with code `q`, giving the
//! total order `0 < 1 < ... < q-1 < ∞`.

use std::fmt;

use crate::error::{Error, Result};

/// Field orders with built-in tables.
pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

/// One point of the projective line `GF(q) ∪ {∞}`.
///
/// Codes `0..q` are field elements and code `q` is ∞. The code alone does not
/// say which field it belongs to, so text conversion takes the alphabet size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct Symbol(pub u8);

impl Symbol {
    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The point at infinity on a line with `g` symbols.
    #[inline]
    pub fn infinity(g: usize) -> Symbol {
        Symbol((g - 1) as u8)
    }

    #[inline]
    pub fn is_infinity(self, g: usize) -> bool {
        self.index() == g - 1
    }

    /// File token: digits for field elements, `*` for ∞.
    pub fn token(self, g: usize) -> char {
        if self.is_infinity(g) {
            '*'
        } else {
            char::from(b'0' + self.0)
        }
    }

    /// Like [`Symbol::token`] but renders ∞ with the unicode glyph.
    pub fn pretty(self, g: usize) -> char {
        if self.is_infinity(g) {
            '∞'
        } else {
            char::from(b'0' + self.0)
        }
    }

    /// Parses a single token. Accepts `*` and `∞` for the point at infinity.
    pub fn parse_token(c: char, g: usize) -> Result<Symbol> {
        match c {
            '*' | '∞' => Ok(Symbol::infinity(g)),
            '0'..='9' => {
                let v = c as usize - '0' as usize;
                if v + 1 < g {
                    Ok(Symbol(v as u8))
                } else {
                    Err(Error::InvalidSymbol { token: c, g })
                }
            }
            _ => Err(Error::InvalidSymbol { token: c, g }),
        }
    }
}

/// Renders a run of symbols as a compact token string, e.g. `01*0`.
pub fn format_symbols(symbols: &[Symbol], g: usize) -> String {
    symbols.iter().map(|s| s.token(g)).collect()
}

/// Parses a compact token string, skipping whitespace, commas and brackets.
pub fn parse_symbols(text: &str, g: usize) -> Result<Vec<Symbol>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, ',' | '(' | ')' | '[' | ']'))
        .map(|c| Symbol::parse_token(c, g))
        .collect()
}

/// Addition, multiplication and inversion tables for GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: usize,
    p: usize,
    m: usize,
    /// Monic reduction polynomial, lowest degree first; empty for prime fields.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldSpec {
    /// Builds GF(q). Extension fields use x²+x+1 (q=4), x³+x+1 (q=8) and
    /// x²+1 over GF(3) (q=9).
    pub fn new(q: usize) -> Result<FieldSpec> {
        let (p, m, modulus): (usize, usize, Vec<u8>) = match q {
            2 | 3 | 5 | 7 => (q, 1, Vec::new()),
            4 => (2, 2, vec![1, 1, 1]),
            8 => (2, 3, vec![1, 1, 0, 1]),
            9 => (3, 2, vec![1, 0, 1]),
            _ => return Err(Error::UnsupportedOrder(q)),
        };

        let digits = |mut v: usize| -> Vec<usize> {
            (0..m)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let pack = |coeffs: &[usize]| -> usize { coeffs.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = pack(&sum) as u8;

                let prod = if m == 1 {
                    (a * b) % p
                } else {
                    // schoolbook product, then reduce by the monic modulus
                    let mut full = vec![0usize; 2 * m - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            full[i + j] = (full[i + j] + x * y) % p;
                        }
                    }
                    for deg in (m..full.len()).rev() {
                        let lead = full[deg];
                        if lead == 0 {
                            continue;
                        }
                        for (i, &c) in modulus.iter().enumerate() {
                            let idx = deg - m + i;
                            full[idx] = (full[idx] + p * p - lead * c as usize % p) % p;
                        }
                    }
                    pack(&full[..m])
                };
                mul[a * q + b] = prod as u8;
            }
        }

        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as u8).collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).expect("reduction polynomial must be irreducible") as u8
                }
            })
            .collect();

        Ok(FieldSpec { q, p, m, modulus, add, mul, neg, inv })
    }

    /// Field for an alphabet of `g` symbols, i.e. GF(g-1).
    pub fn for_symbols(g: usize) -> Result<FieldSpec> {
        if g < 3 {
            return Err(Error::UnsupportedSymbolCount(g));
        }
        FieldSpec::new(g - 1).map_err(|_| Error::UnsupportedSymbolCount(g))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Number of points on the projective line, g = q + 1.
    #[inline]
    pub fn symbol_count(&self) -> usize {
        self.q + 1
    }

    #[inline]
    pub fn infinity(&self) -> Symbol {
        Symbol(self.q as u8)
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> Option<u8> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// All field elements `0..q`.
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }

    /// All projective symbols `0..=q`, ∞ last.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..=self.q as u8).map(Symbol)
    }
}
