//! Orbits of PGL(2,q) acting diagonally on 4-tuples of projective symbols.
//!
//! A 4-tuple over `g` symbols is packed base `g` with the first coordinate
//! most significant, so numeric order on packed indices is lexicographic
//! order on tuples with ∞ largest. Orbit ids are assigned in increasing order
//! of their least member, which makes the constant orbit id 0.

use std::fmt;

use crate::field::{format_symbols, parse_symbols, Symbol};
use crate::group::Pgl2;

/// Index of an orbit in an [`OrbitTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitId(pub u8);

impl OrbitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bit(self) -> u32 {
        1 << self.0
    }
}

/// Bit set of orbit ids. There are at most `g + 11 <= 21` orbits.
pub type OrbitMask = u32;

/// One orbit with its canonical (least) representative.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: [Symbol; 4],
    pub constant: bool,
    /// Packed indices of all members, ascending.
    pub members: Vec<u32>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// First member of each orbit in the customary 1..14 numbering for g = 3.
const G3_LABEL_REPRESENTATIVES: [&str; 14] =
    ["0000", "0001", "1***", "0100", "11*1", "11**", "*0*0", "*11*", "11*0", "*0*1", "1*01", "1*0*", "1*00", "1**0"];

/// Partition of all `g^4` tuples into orbits.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    g: usize,
    orbit_of: Vec<u8>,
    orbits: Vec<Orbit>,
    labels: Vec<usize>,
}

impl OrbitTable {
    /// Closes every tuple under the group, visiting tuples in lexicographic order.
    pub fn build(group: &Pgl2) -> OrbitTable {
        let g = group.field().symbol_count();
        let n = g.pow(4);
        const UNSET: u8 = u8::MAX;
        let mut orbit_of = vec![UNSET; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if orbit_of[start] != UNSET {
                continue;
            }
            let id = orbits.len() as u8;
            let rep = unpack(start, g);
            let mut members = Vec::new();
            for e in group {
                let img = pack(&rep.map(|s| e.apply(s)), g);
                if orbit_of[img] == UNSET {
                    orbit_of[img] = id;
                    members.push(img as u32);
                }
            }
            members.sort_unstable();
            debug_assert_eq!(members[0] as usize, start);
            orbits.push(Orbit { representative: rep, constant: rep.iter().all(|&s| s == rep[0]), members });
        }

        let labels = if g == 3 {
            let mut labels = vec![0; orbits.len()];
            for (i, rep) in G3_LABEL_REPRESENTATIVES.iter().enumerate() {
                let t = parse_symbols(rep, 3).expect("valid label token");
                labels[orbit_of[pack(&[t[0], t[1], t[2], t[3]], 3)] as usize] = i + 1;
            }
            labels
        } else {
            (1..=orbits.len()).collect()
        };

        OrbitTable { g, orbit_of, orbits, labels }
    }

    #[inline]
    pub fn symbol_count(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit(&self, id: OrbitId) -> &Orbit {
        &self.orbits[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = OrbitId> {
        (0..self.orbits.len() as u8).map(OrbitId)
    }

    /// The orbit of `(a, a, a, a)`.
    pub fn constant_orbit(&self) -> OrbitId {
        OrbitId(0)
    }

    /// Mask of all non-constant orbits; a starter must hit each of these.
    pub fn required_mask(&self) -> OrbitMask {
        let all = if self.orbits.len() == 32 { u32::MAX } else { (1u32 << self.orbits.len()) - 1 };
        all & !self.constant_orbit().bit()
    }

    #[inline]
    pub fn orbit_of(&self, tuple: &[Symbol; 4]) -> OrbitId {
        OrbitId(self.orbit_of[pack(tuple, self.g)])
    }

    /// Lookup by packed index (see [`pack`]).
    #[inline]
    pub fn orbit_of_packed(&self, index: usize) -> OrbitId {
        OrbitId(self.orbit_of[index])
    }

    /// Raw lookup table indexed by packed tuple.
    pub fn packed_table(&self) -> &[u8] {
        &self.orbit_of
    }

    /// Display number of an orbit: the customary Orb 1..14 numbering for
    /// g = 3, otherwise `id + 1`.
    pub fn label(&self, id: OrbitId) -> usize {
        self.labels[id.index()]
    }

    /// Number among the non-constant orbits, `label - 1`; `None` for the
    /// constant orbit. Used when listing missing orbits.
    pub fn nonconstant_number(&self, id: OrbitId) -> Option<usize> {
        (id != self.constant_orbit()).then(|| self.label(id) - 1)
    }

    pub fn id_for_label(&self, label: usize) -> Option<OrbitId> {
        self.labels.iter().position(|&l| l == label).map(|i| OrbitId(i as u8))
    }

    /// Total number of tuples in the orbits selected by `mask`.
    pub fn tuples_in(&self, mask: OrbitMask) -> u64 {
        self.ids().filter(|id| mask & id.bit() != 0).map(|id| self.orbit(id).size() as u64).sum()
    }

    /// One orbit per line, members ascending (the canonical representative
    /// comes first), in symbol tokens.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for orbit in &self.orbits {
            let line: Vec<String> = orbit.members.iter().map(|&m| format_symbols(&unpack(m as usize, self.g), self.g)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for OrbitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Packs a 4-tuple base `g`, first coordinate most significant.
#[inline]
pub fn pack(tuple: &[Symbol; 4], g: usize) -> usize {
    ((tuple[0].index() * g + tuple[1].index()) * g + tuple[2].index()) * g + tuple[3].index()
}

#[inline]
pub fn unpack(mut index: usize, g: usize) -> [Symbol; 4] {
    let mut t = [Symbol(0); 4];
    for slot in t.iter_mut().rev() {
        *slot = Symbol((index % g) as u8);
        index /= g;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, SUPPORTED_ORDERS};

    fn table(g: usize) -> OrbitTable {
        OrbitTable::build(&Pgl2::new(&FieldSpec::for_symbols(g).unwrap()))
    }

    fn tup(s: &str, g: usize) -> [Symbol; 4] {
        let v = parse_symbols(s, g).unwrap();
        [v[0], v[1], v[2], v[3]]
    }

    #[test]
    fn orbit_counts() {
        for q in SUPPORTED_ORDERS {
            let g = q + 1;
            let t = table(g);
            assert_eq!(t.len(), g + 11, "g={g}");
            let total: usize = t.orbits().iter().map(Orbit::size).sum();
            assert_eq!(total, g.pow(4));
            assert_eq!(g + 7 * g * (g - 1) + 6 * g * (g - 1) * (g - 2) + (g - 3) * g * (g - 1) * (g - 2), g.pow(4));
            assert_eq!(t.orbits().iter().filter(|o| o.constant).count(), 1);
            assert!(t.orbit(t.constant_orbit()).constant);
        }
    }

    #[test]
    fn orbit_sizes_by_distinct_entries() {
        for g in [3, 4, 5, 6] {
            let t = table(g);
            for o in t.orbits() {
                let mut d = o.representative.to_vec();
                d.sort();
                d.dedup();
                let expect = match d.len() {
                    1 => g,
                    2 => g * (g - 1),
                    _ => g * (g - 1) * (g - 2),
                };
                assert_eq!(o.size(), expect);
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let t = table(3);
        assert_eq!(t.orbit_of(&tup("0000", 3)), t.constant_orbit());
        assert_eq!(t.orbit_of(&tup("1**0", 3)), t.orbit_of(&tup("100*", 3)));
        assert_ne!(t.orbit_of(&tup("0011", 3)), t.orbit_of(&tup("0101", 3)));
        assert_eq!(t.label(t.constant_orbit()), 1);
        assert_eq!(t.label(t.orbit_of(&tup("0001", 3))), 2);
        assert_eq!(t.label(t.orbit_of(&tup("*110", 3))), 14);
        let labels: std::collections::HashSet<_> = t.ids().map(|i| t.label(i)).collect();
        assert_eq!(labels.len(), 14);
    }

    #[test]
    fn pack_roundtrip() {
        for i in 0..625 {
            assert_eq!(pack(&unpack(i, 5), 5), i);
        }
    }

    #[test]
    fn dump_lines() {
        let t = table(3);
        let dump = t.dump();
        assert_eq!(dump.lines().count(), 14);
        assert_eq!(dump.lines().next().unwrap(), "0000 1111 ****");
    }
}
