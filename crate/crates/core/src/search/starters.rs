use std::cmp::{Ordering, Reverse};

use rand::Rng;
use rayon::prelude::*;

use super::{accept, Objective, SearchConfig};
use crate::builder::{starter_check, ResidualReport, StarterVector};
use crate::classes::enumerate_classes;
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::orbit::{unpack, OrbitMask, OrbitTable};
use crate::verifier::{coverage_by_classes, CoverageResult};

/// Search objective, compared lexicographically: fewer missing
/// (class, orbit) pairs first, then more covered tuples. Smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Score {
    pub missing: u64,
    /// Covered (row 4-subset, tuple) pairs of the assembled array, constant
    /// columns included.
    pub covered: u64,
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.missing, Reverse(self.covered)).cmp(&(other.missing, Reverse(other.covered)))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orbit counters per class are `1 << STRIDE` wide; there are at most 21 orbits.
const STRIDE: usize = 5;

fn nibble_table(orbits: &OrbitTable) -> Box<[u8; 1 << 16]> {
    let g = orbits.symbol_count();
    let mut t = Box::new([0u8; 1 << 16]);
    for (packed, &o) in orbits.packed_table().iter().enumerate() {
        let idx = unpack(packed, g).iter().fold(0, |acc, s| acc << 4 | s.index());
        t[idx] = o;
    }
    t
}

/// Incrementally scored state of one or two starter vectors.
///
/// For every class and orbit it keeps the number of d-set tuples in that
/// orbit. Changing coordinate `p` of a vector only touches the four tuples
/// per class that read `p`.
#[derive(Debug, Clone)]
pub struct Climber {
    g: usize,
    k: usize,
    /// Orbit by tuple packed four bits per symbol.
    table: Box<[u8; 1 << 16]>,
    orbit_size: Vec<u64>,
    required: OrbitMask,
    constant: usize,
    offsets: Vec<[usize; 4]>,
    class_size: Vec<u64>,
    counts: Vec<u16>,
    changes: Vec<(u32, u8, u8)>,
    vectors: Vec<Vec<u8>>,
    missing: u64,
    covered: u64,
}

impl Climber {
    pub fn new(orbits: &OrbitTable, vectors: &[StarterVector]) -> Result<Climber> {
        let first = vectors.first().ok_or_else(|| Error::DimensionMismatch("no starter vectors".into()))?;
        let k = first.len();
        let g = orbits.symbol_count();
        for v in vectors {
            if v.len() != k {
                return Err(Error::LengthMismatch { expected: k, found: v.len() });
            }
            if v.symbol_count() != g {
                return Err(Error::DimensionMismatch(format!("vector over {} symbols, orbit table over {g}", v.symbol_count())));
            }
        }
        let classes = enumerate_classes(k)?;
        let mut c = Climber {
            g,
            k,
            table: nibble_table(orbits),
            orbit_size: orbits.orbits().iter().map(|o| o.size() as u64).collect(),
            required: orbits.required_mask(),
            constant: orbits.constant_orbit().index(),
            offsets: classes.iter().map(|c| c.offsets()).collect(),
            class_size: classes.iter().map(|c| c.size as u64).collect(),
            counts: vec![0; classes.len() << STRIDE],
            changes: Vec::new(),
            vectors: vectors.iter().map(|v| v.as_slice().iter().chain(v.as_slice()).map(|s| s.code()).collect()).collect(),
            missing: 0,
            covered: 0,
        };
        c.missing = c.class_size.len() as u64 * c.required.count_ones() as u64;
        c.covered = c.class_size.iter().map(|s| s * c.orbit_size[c.constant]).sum();
        for w in 0..c.vectors.len() {
            for ci in 0..c.offsets.len() {
                for i in 0..k {
                    let o = c.orbit_at(w, ci, i);
                    c.inc(ci, o);
                }
            }
        }
        Ok(c)
    }

    /// Uniformly random vectors.
    pub fn random<R: Rng>(orbits: &OrbitTable, k: usize, count: usize, rng: &mut R) -> Result<Climber> {
        let g = orbits.symbol_count();
        let vectors = (0..count)
            .map(|_| StarterVector::new(g, (0..k).map(|_| Symbol(rng.gen_range(0..g) as u8)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Climber::new(orbits, &vectors)
    }

    pub fn score(&self) -> Score {
        Score { missing: self.missing, covered: self.covered }
    }

    pub fn vectors(&self) -> Vec<StarterVector> {
        self.vectors
            .iter()
            .map(|v| StarterVector::new(self.g, v[..self.k].iter().map(|&s| Symbol(s)).collect()).expect("valid state"))
            .collect()
    }

    #[inline]
    fn orbit_at(&self, w: usize, class: usize, start: usize) -> usize {
        // vectors are stored twice over, so `start + offset` needs no wrap
        let v = &self.vectors[w][start..];
        let o = &self.offsets[class];
        let idx = (v[o[0]] as usize) << 12 | (v[o[1]] as usize) << 8 | (v[o[2]] as usize) << 4 | v[o[3]] as usize;
        self.table[idx & 0xffff] as usize
    }

    #[inline]
    fn inc(&mut self, class: usize, orbit: usize) {
        let slot = &mut self.counts[(class << STRIDE) | orbit];
        *slot += 1;
        if *slot == 1 && orbit != self.constant {
            self.covered += self.class_size[class] * self.orbit_size[orbit];
            if self.required & (1 << orbit) != 0 {
                self.missing -= 1;
            }
        }
    }

    #[inline]
    fn dec(&mut self, class: usize, orbit: usize) {
        let slot = &mut self.counts[(class << STRIDE) | orbit];
        *slot -= 1;
        if *slot == 0 && orbit != self.constant {
            self.covered -= self.class_size[class] * self.orbit_size[orbit];
            if self.required & (1 << orbit) != 0 {
                self.missing += 1;
            }
        }
    }

    /// Sets coordinate `p` of vector `w` to `s`, rescoring only the tuples
    /// that read it.
    pub fn set(&mut self, w: usize, p: usize, s: Symbol) {
        let mut changes = std::mem::take(&mut self.changes);
        self.record(w, p, s.code(), &mut changes);
        self.apply(&changes, false);
        self.changes = changes;
    }

    /// Writes the symbol and lists `(class, old orbit, new orbit)` for every
    /// tuple through `p` whose orbit changes.
    fn record(&mut self, w: usize, p: usize, s: u8, changes: &mut Vec<(u32, u8, u8)>) {
        changes.clear();
        if self.vectors[w][p] == s {
            return;
        }
        let k = self.k;
        for ci in 0..self.offsets.len() {
            for off in self.offsets[ci] {
                let start = if p >= off { p - off } else { p + k - off };
                changes.push((ci as u32, self.orbit_at(w, ci, start) as u8, 0));
            }
        }
        self.vectors[w][p] = s;
        self.vectors[w][p + k] = s;
        let mut i = 0;
        for ci in 0..self.offsets.len() {
            for off in self.offsets[ci] {
                let start = if p >= off { p - off } else { p + k - off };
                changes[i].2 = self.orbit_at(w, ci, start) as u8;
                i += 1;
            }
        }
        changes.retain(|c| c.1 != c.2);
    }

    fn apply(&mut self, changes: &[(u32, u8, u8)], undo: bool) {
        for &(ci, old, new) in changes {
            let (from, to) = if undo { (new, old) } else { (old, new) };
            self.dec(ci as usize, from as usize);
            self.inc(ci as usize, to as usize);
        }
    }

    /// One random move under the accept/undo rule. Returns whether it was kept.
    pub fn step<R: Rng>(&mut self, rng: &mut R, stall: &mut u64, plateau_cap: u64) -> bool {
        let w = rng.gen_range(0..self.vectors.len());
        let p = rng.gen_range(0..self.k);
        let old = self.vectors[w][p];
        let new = (old + rng.gen_range(1..self.g) as u8) % self.g as u8;
        let before = self.score();
        let mut changes = std::mem::take(&mut self.changes);
        self.record(w, p, new, &mut changes);
        self.apply(&changes, false);
        let kept = accept(&before, &self.score(), stall, plateau_cap);
        if !kept {
            self.apply(&changes, true);
            self.vectors[w][p] = old;
            self.vectors[w][p + self.k] = old;
        }
        self.changes = changes;
        kept
    }
}

/// Best score reached by one restart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartSummary {
    pub restart: usize,
    pub score: Score,
    pub moves: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub vectors: Vec<StarterVector>,
    pub score: Score,
    pub residual: ResidualReport,
    pub coverage: CoverageResult,
    pub restarts: Vec<RestartSummary>,
}

/// Hill climbing with restarts over one or two starter vectors.
pub fn search_starters(cfg: &SearchConfig, orbits: &OrbitTable) -> Result<SearchOutcome> {
    if cfg.g != orbits.symbol_count() {
        return Err(Error::DimensionMismatch(format!("config g={} but orbit table over {}", cfg.g, orbits.symbol_count())));
    }
    if cfg.k < 4 {
        return Err(Error::DegreeTooSmall { k: cfg.k, min: 4 });
    }
    if let Some(init) = &cfg.initial {
        if init.len() != cfg.mode.count() {
            return Err(Error::DimensionMismatch(format!(
                "{} initial vectors for a {}-vector search",
                init.len(),
                cfg.mode.count()
            )));
        }
        if let Some(bad) = init.iter().find(|v| v.len() != cfg.k) {
            return Err(Error::LengthMismatch { expected: cfg.k, found: bad.len() });
        }
    }

    let params = cfg.params;
    let per_restart = params.per_restart();
    let runs: Vec<Result<(Climber, RestartSummary)>> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = params.rng(r);
            let mut climber = match (&cfg.initial, r) {
                (Some(init), 0) => Climber::new(orbits, init)?,
                _ => Climber::random(orbits, cfg.k, cfg.mode.count(), &mut rng)?,
            };
            let mut stall = 0;
            let mut moves = 0;
            while moves < per_restart {
                if cfg.objective == Objective::Full && climber.score().missing == 0 {
                    break;
                }
                climber.step(&mut rng, &mut stall, params.plateau_cap);
                moves += 1;
            }
            let summary = RestartSummary { restart: r, score: climber.score(), moves };
            Ok((climber, summary))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let restarts: Vec<RestartSummary> = runs.iter().map(|(_, s)| s.clone()).collect();
    let (best, summary) = runs
        .into_iter()
        .min_by(|(_, a), (_, b)| a.score.cmp(&b.score).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart");

    let vectors = best.vectors();
    let residual = starter_check(&vectors[0], vectors.get(1), orbits)?;
    let coverage = coverage_by_classes(&vectors[0], vectors.get(1), orbits, true)?;
    Ok(SearchOutcome { vectors, score: summary.score, residual, coverage, restarts })
}
