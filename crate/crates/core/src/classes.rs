//! Cyclic equivalence classes of 4-subsets of rows.
//!
//! Rows are `0..k`. Two 4-subsets are equivalent when one is a cyclic shift
//! of the other mod `k`. A class is named by the gap triple `[x, y, z]` of a
//! canonical member `{i, i+x, i+x+y, i+x+y+z}`; the fourth gap is
//! `w = k - x - y - z`.
//!
//! For the fixed-row extension the last row `k-1` stays put and the 3-subsets
//! of `0..k-1` are shifted mod `k-1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Symbol;

/// A class `[x, y, z]` of 4-subsets under rotation mod `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivClass {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Number of distinct 4-subsets in the class.
    pub size: usize,
}

impl EquivClass {
    /// Builds the class for a canonical gap triple. Returns `None` if the
    /// triple is not the canonical name of a class for degree `k`.
    pub fn new(k: usize, x: usize, y: usize, z: usize) -> Option<EquivClass> {
        is_canonical(k, x, y, z).then(|| EquivClass { x, y, z, size: class_size(k, x, y, z) })
    }

    /// Row offsets of the canonical member starting at row 0.
    #[inline]
    pub fn offsets(&self) -> [usize; 4] {
        [0, self.x, self.x + self.y, self.x + self.y + self.z]
    }

    /// The rows `i, i+x, i+x+y, i+x+y+z` (mod k), in that order.
    #[inline]
    pub fn rows_from(&self, start: usize, k: usize) -> [usize; 4] {
        self.offsets().map(|o| (start + o) % k)
    }

    /// All distinct member subsets, each sorted ascending.
    pub fn members(&self, k: usize) -> Vec<[usize; 4]> {
        let mut out: Vec<[usize; 4]> = (0..k)
            .map(|i| {
                let mut s = self.rows_from(i, k);
                s.sort_unstable();
                s
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn gaps(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for EquivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.x, self.y, self.z)
    }
}

/// Canonical-name test: `x` is the least gap, the fourth gap is strictly
/// larger than `x`, and for `[x, y, x]` the smaller of `y, w` is taken. The
/// fully symmetric `[k/4, k/4, k/4]` is the one exception to the strict
/// fourth-gap rule.
pub fn is_canonical(k: usize, x: usize, y: usize, z: usize) -> bool {
    if x == 0 || 4 * x > k || y < x || z < x {
        return false;
    }
    if 4 * x == k && y == x && z == x {
        return true;
    }
    if 2 * x + y + z >= k {
        return false;
    }
    x != z || y <= (k - 2 * x) / 2
}

/// Number of distinct subsets in `[x, y, z]`: `k` divided by the rotational
/// symmetry order of the gap vector `(x, y, z, w)`.
pub fn class_size(k: usize, x: usize, y: usize, z: usize) -> usize {
    let w = k - x - y - z;
    if x == y && y == z && z == w {
        k / 4
    } else if x == z && y == w {
        k / 2
    } else {
        k
    }
}

/// Every cyclic class for degree `k`, ordered by `(x, y, z)`.
pub fn enumerate_classes(k: usize) -> Result<Vec<EquivClass>> {
    if k < 4 {
        return Err(Error::DegreeTooSmall { k, min: 4 });
    }
    let mut out = Vec::new();
    for x in 1..=k / 4 {
        for y in x..k {
            for z in x..k {
                if let Some(c) = EquivClass::new(k, x, y, z) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// The class containing a 4-subset of distinct rows in `0..k`.
///
/// Among the four rotations of the gap vector, those meeting the canonical
/// constraints are kept and the lexicographically least is returned.
pub fn class_of(subset: [usize; 4], k: usize) -> EquivClass {
    let mut s = subset;
    s.sort_unstable();
    debug_assert!(s[0] < s[1] && s[1] < s[2] && s[2] < s[3] && s[3] < k);
    let gaps = [s[1] - s[0], s[2] - s[1], s[3] - s[2], k + s[0] - s[3]];
    (0..4)
        .map(|r| (gaps[r], gaps[(r + 1) % 4], gaps[(r + 2) % 4]))
        .filter(|&(x, y, z)| is_canonical(k, x, y, z))
        .min()
        .map(|(x, y, z)| EquivClass { x, y, z, size: class_size(k, x, y, z) })
        .expect("every 4-subset has a canonical rotation")
}

/// The d-set of a class: the tuples `(w_i, w_{i+x}, w_{i+x+y}, w_{i+x+y+z})`
/// for `i in 0..k`, taken from `u` and then from `v` when given.
pub fn d_set(u: &[Symbol], v: Option<&[Symbol]>, class: &EquivClass) -> Vec<[Symbol; 4]> {
    let k = u.len();
    std::iter::once(u).chain(v).flat_map(|w| (0..k).map(move |i| class.rows_from(i, k).map(|r| w[r]))).collect()
}

/// A class `[{t, t+x, t+x+y, k-1}]` with `t` running over `0..k-1` mod `k-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedRowClass {
    pub x: usize,
    pub y: usize,
    pub size: usize,
}

impl FixedRowClass {
    /// Rows `t, t+x, t+x+y` (mod k-1) followed by the fixed row `k-1`.
    #[inline]
    pub fn rows_from(&self, start: usize, k: usize) -> [usize; 4] {
        let m = k - 1;
        [start % m, (start + self.x) % m, (start + self.x + self.y) % m, m]
    }

    pub fn members(&self, k: usize) -> Vec<[usize; 4]> {
        let mut out: Vec<[usize; 4]> = (0..k - 1)
            .map(|i| {
                let mut s = self.rows_from(i, k);
                s.sort_unstable();
                s
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for FixedRowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{};fixed]", self.x, self.y)
    }
}

/// Canonical gap pair of a 3-subset of `Z_m`: least rotation of `(x, y, w)`.
fn fixed_canonical(m: usize, x: usize, y: usize) -> bool {
    let w = m - x - y;
    (x, y, w) <= (y, w, x) && (x, y, w) <= (w, x, y)
}

/// All fixed-row classes for degree `k` (cyclic part of length `k-1`).
pub fn enumerate_fixed_row_classes(k: usize) -> Result<Vec<FixedRowClass>> {
    if k < 5 {
        return Err(Error::DegreeTooSmall { k, min: 5 });
    }
    let m = k - 1;
    let mut out = Vec::new();
    for x in 1..m {
        for y in 1..m - x {
            if fixed_canonical(m, x, y) {
                let w = m - x - y;
                let size = if x == y && y == w { m / 3 } else { m };
                out.push(FixedRowClass { x, y, size });
            }
        }
    }
    Ok(out)
}

/// The fixed-row class of a 4-subset that contains row `k-1`.
pub fn fixed_row_class_of(subset: [usize; 4], k: usize) -> Option<FixedRowClass> {
    let m = k - 1;
    let mut s = subset;
    s.sort_unstable();
    if s[3] != m {
        return None;
    }
    let gaps = [s[1] - s[0], s[2] - s[1], m + s[0] - s[2]];
    let (x, y, w) = (0..3).map(|r| (gaps[r], gaps[(r + 1) % 3], gaps[(r + 2) % 3])).min()?;
    let size = if x == y && y == w { m / 3 } else { m };
    Some(FixedRowClass { x, y, size })
}

/// Binomial coefficient for the small arguments used here.
pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(cs: &[EquivClass]) -> Vec<(usize, usize, usize)> {
        cs.iter().map(|c| (c.x, c.y, c.z)).collect()
    }

    #[test]
    fn k8_classes() {
        let cs = enumerate_classes(8).unwrap();
        assert_eq!(
            triples(&cs),
            vec![(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 4), (1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 1), (1, 3, 2), (2, 2, 2)]
        );
        assert_eq!(cs.iter().map(|c| c.size).sum::<usize>(), 70);
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_classes(21).unwrap().len(), 285);
        let k9 = enumerate_classes(9).unwrap();
        assert_eq!(k9.len(), 8 * 7 * 6 / 24);
        assert!(k9.iter().all(|c| c.size == 9));
        assert!(matches!(enumerate_classes(3), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn sizes() {
        assert_eq!(EquivClass::new(8, 1, 3, 1).unwrap().size, 4);
        assert_eq!(EquivClass::new(8, 2, 2, 2).unwrap().size, 2);
        assert_eq!(EquivClass::new(9, 1, 1, 1).unwrap().size, 9);
        for k in 4..=30 {
            for c in enumerate_classes(k).unwrap() {
                assert_eq!(c.members(k).len(), c.size, "k={k} {c}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(class_of([0, 1, 2, 4], 8).gaps(), [1, 1, 2]);
        assert_eq!(class_of([0, 2, 4, 6], 8).gaps(), [2, 2, 2]);
        assert_eq!(class_of([3, 4, 5, 7], 8).gaps(), [1, 1, 2]);
        assert_eq!(class_of([0, 1, 4, 5], 8).gaps(), [1, 3, 1]);
        assert_eq!(class_of([1, 2, 5, 6], 8).gaps(), [1, 3, 1]);
    }

    #[test]
    fn d_set_shapes() {
        let zero = vec![Symbol(0); 10];
        let c = EquivClass::new(10, 1, 2, 3).unwrap();
        let d = d_set(&zero, None, &c);
        assert_eq!(d.len(), 10);
        assert!(d.iter().all(|t| *t == [Symbol(0); 4]));
        let one = vec![Symbol(1); 10];
        assert_eq!(d_set(&zero, Some(&one), &c).len(), 20);

        let u: Vec<Symbol> = (0..6).map(|i| Symbol(i as u8)).collect();
        let c = EquivClass::new(6, 1, 1, 2).unwrap();
        assert_eq!(d_set(&u, None, &c)[5], [Symbol(5), Symbol(0), Symbol(1), Symbol(3)]);
    }

    #[test]
    fn fixed_row_classes() {
        let k5 = enumerate_fixed_row_classes(5).unwrap();
        assert_eq!(k5.len(), 1);
        assert_eq!(k5[0].size, 4);
        let k9 = enumerate_fixed_row_classes(9).unwrap();
        assert_eq!(k9.len(), 7);
        assert_eq!(k9.iter().map(|c| c.size).sum::<usize>(), 56);
        let k33 = enumerate_fixed_row_classes(33).unwrap();
        assert_eq!(k33.iter().map(|c| c.size as u64).sum::<u64>(), binomial(32, 3));
        for k in 5..=20 {
            for c in enumerate_fixed_row_classes(k).unwrap() {
                let members = c.members(k);
                assert_eq!(members.len(), c.size);
                for m in members {
                    assert_eq!(fixed_row_class_of(m, k), Some(c));
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(21, 4), 5985);
        assert_eq!(binomial(30, 4), 27405);
        assert_eq!(binomial(3, 4), 0);
    }
}
