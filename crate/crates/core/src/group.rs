//! PGL(2,q) as fractional linear maps on the projective line.

use crate::field::{FieldSpec, Symbol};

/// A normalized fractional linear map `x -> (ax + b) / (cx + d)`.
///
/// The stored coefficients are scaled so the first nonzero entry of `(c, a)`
/// is 1, which picks one representative per scalar class. `action` holds the
/// image of every projective symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub d: u8,
    action: Vec<Symbol>,
}

impl GroupElement {
    /// Builds and normalizes `(a, b, c, d)`. Returns `None` if `ad - bc = 0`.
    pub fn new(field: &FieldSpec, a: u8, b: u8, c: u8, d: u8) -> Option<GroupElement> {
        let det = field.sub(field.mul(a, d), field.mul(b, c));
        if det == 0 {
            return None;
        }
        let lead = if c != 0 { c } else { a };
        let s = field.inv(lead)?;
        let (a, b, c, d) = (field.mul(s, a), field.mul(s, b), field.mul(s, c), field.mul(s, d));
        let action = field.symbols().map(|x| eval(field, a, b, c, d, x)).collect();
        Some(GroupElement { a, b, c, d, action })
    }

    pub fn identity(field: &FieldSpec) -> GroupElement {
        GroupElement::new(field, 1, 0, 0, 1).expect("identity is invertible")
    }

    #[inline]
    pub fn apply(&self, x: Symbol) -> Symbol {
        self.action[x.index()]
    }

    /// Image of every symbol, indexed by symbol code.
    #[inline]
    pub fn action(&self) -> &[Symbol] {
        &self.action
    }

    pub fn is_identity(&self) -> bool {
        self.action.iter().enumerate().all(|(i, s)| s.index() == i)
    }

    /// The map `x -> self(other(x))`.
    pub fn compose(&self, other: &GroupElement, field: &FieldSpec) -> GroupElement {
        // [[a b][c d]] * [[a' b'][c' d']]
        let m = |x, y| field.mul(x, y);
        let a = field.add(m(self.a, other.a), m(self.b, other.c));
        let b = field.add(m(self.a, other.b), m(self.b, other.d));
        let c = field.add(m(self.c, other.a), m(self.d, other.c));
        let d = field.add(m(self.c, other.b), m(self.d, other.d));
        GroupElement::new(field, a, b, c, d).expect("product of invertible maps")
    }

    pub fn inverse(&self, field: &FieldSpec) -> GroupElement {
        GroupElement::new(field, self.d, field.neg(self.b), field.neg(self.c), self.a).expect("adjugate of an invertible map")
    }
}

/// Evaluates the map with 1/0 = ∞ and 1/∞ = 0.
fn eval(field: &FieldSpec, a: u8, b: u8, c: u8, d: u8, x: Symbol) -> Symbol {
    let inf = field.infinity();
    if x == inf {
        return match field.div(a, c) {
            Some(v) => Symbol(v),
            None => inf,
        };
    }
    let x = x.code();
    let num = field.add(field.mul(a, x), b);
    let den = field.add(field.mul(c, x), d);
    match field.div(num, den) {
        Some(v) => Symbol(v),
        None => inf,
    }
}

/// The full group PGL(2,q) in a fixed enumeration order.
#[derive(Debug, Clone)]
pub struct Pgl2 {
    field: FieldSpec,
    elements: Vec<GroupElement>,
}

impl Pgl2 {
    /// Enumerates all `(q+1)q(q-1)` normalized elements. The identity comes first.
    pub fn new(field: &FieldSpec) -> Pgl2 {
        let q = field.order() as u8;
        let mut elements = Vec::with_capacity(field.symbol_count() * (q as usize) * (q as usize - 1));
        // c = 0, a = 1: affine maps x -> x/d + b/d
        for d in 1..q {
            for b in 0..q {
                elements.extend(GroupElement::new(field, 1, b, 0, d));
            }
        }
        // c = 1
        for a in 0..q {
            for b in 0..q {
                for d in 0..q {
                    elements.extend(GroupElement::new(field, a, b, 1, d));
                }
            }
        }
        Pgl2 { field: field.clone(), elements }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    /// True iff every ordered triple of distinct symbols is carried to every
    /// other such triple by exactly one element.
    pub fn is_sharply_3_transitive(&self) -> bool {
        let g = self.field.symbol_count();
        let triples: Vec<[usize; 3]> = (0..g)
            .flat_map(|x| (0..g).flat_map(move |y| (0..g).map(move |z| [x, y, z])))
            .filter(|[x, y, z]| x != y && y != z && x != z)
            .collect();
        let idx = |t: [usize; 3]| (t[0] * g + t[1]) * g + t[2];
        let mut hits = vec![0u32; g * g * g];
        for src in &triples {
            hits.iter_mut().for_each(|h| *h = 0);
            for e in &self.elements {
                let img = src.map(|s| e.action[s].index());
                hits[idx(img)] += 1;
            }
            if triples.iter().any(|&t| hits[idx(t)] != 1) {
                return false;
            }
        }
        true
    }
}

impl<'a> IntoIterator for &'a Pgl2 {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SUPPORTED_ORDERS;
    use std::collections::HashSet;

    #[test]
    fn group_orders() {
        for (q, n) in [(2, 6), (3, 24), (4, 60), (5, 120), (7, 336), (8, 504), (9, 720)] {
            let f = FieldSpec::new(q).unwrap();
            let grp = Pgl2::new(&f);
            assert_eq!(grp.order(), n, "q={q}");
            assert!(grp.elements()[0].is_identity());
            let actions: HashSet<_> = grp.iter().map(|e| e.action().to_vec()).collect();
            assert_eq!(actions.len(), n, "distinct actions for q={q}");
        }
    }

    #[test]
    fn apply_examples() {
        let f = FieldSpec::new(2).unwrap();
        let inf = f.infinity();
        assert_eq!(GroupElement::identity(&f).apply(inf), inf);
        let shift = GroupElement::new(&f, 1, 1, 0, 1).unwrap();
        assert_eq!(shift.apply(Symbol(0)), Symbol(1));
        assert_eq!(shift.apply(inf), inf);
        let recip = GroupElement::new(&f, 0, 1, 1, 0).unwrap();
        assert_eq!(recip.apply(Symbol(0)), inf);
        assert_eq!(recip.apply(inf), Symbol(0));
        assert_eq!(recip.apply(Symbol(1)), Symbol(1));
    }

    #[test]
    fn normalization_is_unique() {
        let f = FieldSpec::new(5).unwrap();
        let e = GroupElement::new(&f, 2, 3, 4, 2).unwrap();
        let scaled = GroupElement::new(&f, f.mul(3, 2), f.mul(3, 3), f.mul(3, 4), f.mul(3, 2)).unwrap();
        assert_eq!(e, scaled);
        assert_eq!(e.c, 1);
        assert!(GroupElement::new(&f, 1, 2, 2, 4).is_none());
    }

    #[test]
    fn sharp_three_transitivity() {
        for q in [2, 3, 4, 5] {
            let grp = Pgl2::new(&FieldSpec::new(q).unwrap());
            assert!(grp.is_sharply_3_transitive(), "q={q}");
        }
    }

    #[test]
    fn actions_are_bijections() {
        for q in SUPPORTED_ORDERS {
            let f = FieldSpec::new(q).unwrap();
            for e in &Pgl2::new(&f) {
                let img: HashSet<_> = e.action().iter().copied().collect();
                assert_eq!(img.len(), f.symbol_count());
            }
        }
    }

    #[test]
    fn composition() {
        let f2 = FieldSpec::new(2).unwrap();
        let shift = GroupElement::new(&f2, 1, 1, 0, 1).unwrap();
        assert!(shift.compose(&shift, &f2).is_identity());

        for q in [3, 4, 5] {
            let f = FieldSpec::new(q).unwrap();
            let grp = Pgl2::new(&f);
            let id = GroupElement::identity(&f);
            for e1 in grp.iter().step_by(7) {
                assert_eq!(&id.compose(e1, &f), e1);
                assert!(e1.compose(&e1.inverse(&f), &f).is_identity());
                for e2 in grp.iter().step_by(5) {
                    let c = e1.compose(e2, &f);
                    for x in f.symbols() {
                        assert_eq!(c.apply(x), e1.apply(e2.apply(x)));
                    }
                }
            }
        }
    }
}
