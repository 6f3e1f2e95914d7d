//! Column reduction by exploiting flexible entries.
//!
//! An entry is flexible when turning it into a wildcard, which covers
//! nothing, still leaves every (row 4-subset, tuple) pair covered by some
//! fully specified column. The optimizer keeps a wildcard array with exact
//! per-pair cover counts and works on the column with the most wildcards.
//! It first tries to move the pairs only that column covers into wildcard
//! slots of other columns. If that fails, every other wildcard is refilled
//! at random and the marking pass is rerun with the target column first,
//! which tends to pile flexibility into it. A column that becomes all
//! wildcards is deleted, and each deletion is checked by filling the
//! wildcards at random and running the full verifier.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builder::TestingArray;
use crate::classes::binomial;
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::verifier::is_covering_array;

const WILD: u8 = u8::MAX;

/// A covering array with the entries marked that can individually be
/// replaced by any symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexState {
    pub array: TestingArray,
    /// Row-major `k x n` mask.
    pub flexible: Vec<bool>,
    pub seed: u64,
}

impl FlexState {
    pub fn is_flexible(&self, r: usize, c: usize) -> bool {
        self.flexible[r * self.array.cols() + c]
    }

    pub fn flexible_count(&self) -> usize {
        self.flexible.iter().filter(|&&f| f).count()
    }
}

/// Row subsets through one row, as sorted rows plus colex rank.
struct Incidence {
    rows: [usize; 4],
    rank: usize,
}

struct Wild {
    g: usize,
    k: usize,
    /// Column-major cells, `WILD` for a wildcard.
    cols: Vec<Vec<u8>>,
    counts: Vec<u16>,
    through: Vec<Vec<Incidence>>,
}

fn colex_rank(rows: &[usize; 4]) -> usize {
    (0..4).map(|i| binomial(rows[i], i + 1) as usize).sum()
}

impl Wild {
    fn new(a: &TestingArray) -> Wild {
        let g = a.symbol_count();
        let k = a.rows();
        let cols: Vec<Vec<u8>> = (0..a.cols()).map(|c| a.column(c).iter().map(|s| s.code()).collect()).collect();
        let mut through: Vec<Vec<Incidence>> = (0..k).map(|_| Vec::new()).collect();
        for d in 3..k {
            for c in 2..d {
                for b in 1..c {
                    for a in 0..b {
                        let rows = [a, b, c, d];
                        let rank = colex_rank(&rows);
                        for r in rows {
                            through[r].push(Incidence { rows, rank });
                        }
                    }
                }
            }
        }
        let subsets = binomial(k, 4) as usize;
        let mut w = Wild { g, k, cols, counts: vec![0; subsets * g.pow(4)], through };
        // count every subset once, through its least row
        for c in 0..w.cols.len() {
            for r in 0..k {
                for inc in &w.through[r] {
                    if inc.rows[0] == r {
                        let t = tuple(&w.cols[c], &inc.rows, g);
                        w.counts[inc.rank * g.pow(4) + t] += 1;
                    }
                }
            }
        }
        w
    }

    fn n(&self) -> usize {
        self.cols.len()
    }

    fn g4(&self) -> usize {
        self.g.pow(4)
    }

    /// Turns `(r, c)` into a wildcard if nothing loses its last cover.
    fn try_wild(&mut self, r: usize, c: usize) -> bool {
        let g4 = self.g4();
        let col = &self.cols[c];
        if col[r] == WILD {
            return true;
        }
        for inc in &self.through[r] {
            if let Some(t) = full_tuple(col, &inc.rows, self.g) {
                if self.counts[inc.rank * g4 + t] < 2 {
                    return false;
                }
            }
        }
        for inc in &self.through[r] {
            if let Some(t) = full_tuple(col, &inc.rows, self.g) {
                self.counts[inc.rank * g4 + t] -= 1;
            }
        }
        self.cols[c][r] = WILD;
        true
    }

    fn fix(&mut self, r: usize, c: usize, s: u8) {
        debug_assert_eq!(self.cols[c][r], WILD);
        self.cols[c][r] = s;
        let g4 = self.g4();
        for inc in &self.through[r] {
            if let Some(t) = full_tuple(&self.cols[c], &inc.rows, self.g) {
                self.counts[inc.rank * g4 + t] += 1;
            }
        }
    }

    fn wild_count(&self, c: usize) -> usize {
        self.cols[c].iter().filter(|&&s| s == WILD).count()
    }

    /// Tries to make column `t` all wildcards, rehoming the pairs it alone
    /// covers into wildcard slots of other columns.
    fn clear_column<R: Rng>(&mut self, t: usize, rng: &mut R) -> bool {
        let g = self.g;
        let g4 = self.g4();
        let mut rows: Vec<usize> = (0..self.k).collect();
        rows.shuffle(rng);
        let mut others: Vec<usize> = (0..self.n()).filter(|&c| c != t).collect();
        for r in rows {
            if self.try_wild(r, t) {
                continue;
            }
            let sole: Vec<([usize; 4], usize)> = self.through[r]
                .iter()
                .filter_map(|inc| {
                    let tt = full_tuple(&self.cols[t], &inc.rows, g)?;
                    (self.counts[inc.rank * g4 + tt] == 1).then_some((inc.rows, tt))
                })
                .collect();
            for (sub, tt) in sole {
                let want = crate::orbit::unpack(tt, g);
                // an earlier rehoming may already have covered it
                let rank = colex_rank(&sub);
                if self.counts[rank * g4 + tt] >= 2 {
                    continue;
                }
                others.shuffle(rng);
                let host = others.iter().copied().find(|&c| {
                    let col = &self.cols[c];
                    sub.iter().zip(want).all(|(&q, s)| col[q] == WILD || col[q] == s.code())
                });
                let Some(host) = host else {
                    return false;
                };
                for (&q, s) in sub.iter().zip(want) {
                    if self.cols[host][q] == WILD {
                        self.fix(q, host, s.code());
                    }
                }
            }
            if !self.try_wild(r, t) {
                return false;
            }
        }
        true
    }

    fn remove_empty_columns(&mut self) -> usize {
        let before = self.n();
        self.cols.retain(|c| c.iter().any(|&s| s != WILD));
        before - self.n()
    }

    /// Shuffled column order, keeping counts intact.
    fn shuffle_columns<R: Rng>(&mut self, rng: &mut R) {
        self.cols.shuffle(rng);
    }

    fn filled<R: Rng>(&self, rng: &mut R) -> TestingArray {
        let cols: Vec<Vec<Symbol>> = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&s| Symbol(if s == WILD { rng.gen_range(0..self.g) as u8 } else { s })).collect())
            .collect();
        TestingArray::from_columns(self.g, self.k, &cols).expect("consistent shape")
    }

    /// Replaces every wildcard outside column `keep` by a random symbol.
    fn refill_except<R: Rng>(&mut self, keep: usize, rng: &mut R) {
        for c in 0..self.n() {
            if c == keep {
                continue;
            }
            for r in 0..self.k {
                if self.cols[c][r] == WILD {
                    let s = rng.gen_range(0..self.g) as u8;
                    self.fix(r, c, s);
                }
            }
        }
    }

    /// Wildcard pass that offers column `first` every entry before any
    /// other column is touched.
    fn mark_from<R: Rng>(&mut self, first: usize, rng: &mut R) {
        let mut rows: Vec<usize> = (0..self.k).collect();
        rows.shuffle(rng);
        for &r in &rows {
            self.try_wild(r, first);
        }
        self.mark(rng);
    }

    /// Greedy wildcard pass: columns in random order, rows in random order
    /// within each column.
    fn mark<R: Rng>(&mut self, rng: &mut R) {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.shuffle(rng);
        let mut rows: Vec<usize> = (0..self.k).collect();
        for c in order {
            rows.shuffle(rng);
            for &r in &rows {
                self.try_wild(r, c);
            }
        }
    }
}

#[inline]
fn tuple(col: &[u8], rows: &[usize; 4], g: usize) -> usize {
    rows.iter().fold(0, |acc, &r| acc * g + col[r] as usize)
}

#[inline]
fn full_tuple(col: &[u8], rows: &[usize; 4], g: usize) -> Option<usize> {
    rows.iter().try_fold(0, |acc, &r| (col[r] != WILD).then(|| acc * g + col[r] as usize))
}

fn require_ca(a: &TestingArray) -> Result<()> {
    if is_covering_array(a).valid {
        Ok(())
    } else {
        Err(Error::NotCoveringArray)
    }
}

/// Greedily marks flexible entries in a seeded random order.
pub fn mark_flexible(a: &TestingArray, seed: u64) -> Result<FlexState> {
    require_ca(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Wild::new(a);
    w.mark(&mut rng);
    let n = a.cols();
    let mut flexible = vec![false; a.rows() * n];
    for (c, col) in w.cols.iter().enumerate() {
        for (r, &s) in col.iter().enumerate() {
            flexible[r * n + c] = s == WILD;
        }
    }
    Ok(FlexState { array: a.clone(), flexible, seed })
}

/// Shrinks a covering array column by column. `budget` bounds the number of
/// column-clearing attempts. The result is always a verified covering array
/// with no more columns than the input.
pub fn post_optimize(a: &TestingArray, budget: u64, seed: u64) -> Result<TestingArray> {
    require_ca(a)?;
    if budget == 0 {
        return Ok(a.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = a.clone();
    let mut w = Wild::new(a);
    w.shuffle_columns(&mut rng);
    w.mark(&mut rng);
    let mut attempts = 0;
    while attempts < budget && w.n() > 0 {
        attempts += 1;
        let target = (0..w.n()).max_by_key(|&c| (w.wild_count(c), std::cmp::Reverse(c))).expect("nonempty");
        if w.clear_column(target, &mut rng) {
            w.remove_empty_columns();
            let candidate = w.filled(&mut rng);
            if is_covering_array(&candidate).valid {
                best = candidate;
            } else {
                w = Wild::new(&best);
                w.mark(&mut rng);
            }
            w.shuffle_columns(&mut rng);
            continue;
        }
        w.refill_except(target, &mut rng);
        w.mark_from(target, &mut rng);
    }
    Ok(best)
}
