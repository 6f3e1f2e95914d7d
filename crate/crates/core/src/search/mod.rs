//! Randomized local search for starters, completion matrices and
//! fixed-row extensions.
//!
//! Both randomized searches are first-improvement hill climbs with random
//! restarts. A move changes one entry to a different symbol. Improving moves
//! are always kept, equal moves are kept while fewer than `plateau_cap` moves
//! have passed since the last improvement, and worse moves are undone. The
//! move budget is split evenly across restarts. Restart `r` draws from the
//! ChaCha stream `r` of the configured seed, so runs are reproducible and
//! restarts can run in parallel.

mod residual;
mod starters;

pub use residual::{residual_obligations, score_residual_matrix, search_residual_matrix, Obligation, ResidualSearchOutcome};
pub use starters::{search_starters, Climber, RestartSummary, Score, SearchOutcome};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::builder::{check_extension, StarterVector};
use crate::error::Result;
use crate::field::Symbol;
use crate::orbit::OrbitTable;

/// Number of starter vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarterMode {
    One,
    Two,
}

impl StarterMode {
    pub fn count(self) -> usize {
        match self {
            StarterMode::One => 1,
            StarterMode::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Stop as soon as the residual is empty.
    Full,
    /// Use the whole budget.
    MaxCoverage,
}

/// Budget and restart policy shared by the randomized searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchParams {
    /// Total number of moves across all restarts.
    pub budget: u64,
    pub restarts: usize,
    pub plateau_cap: u64,
    pub seed: u64,
}

impl LocalSearchParams {
    pub const DEFAULT_PLATEAU_CAP: u64 = 2000;

    pub fn new(budget: u64, restarts: usize, seed: u64) -> LocalSearchParams {
        LocalSearchParams { budget, restarts: restarts.max(1), plateau_cap: Self::DEFAULT_PLATEAU_CAP, seed }
    }

    pub(crate) fn per_restart(&self) -> u64 {
        self.budget / self.restarts.max(1) as u64
    }

    pub(crate) fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

/// Configuration for [`search_starters`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: usize,
    pub g: usize,
    pub mode: StarterMode,
    pub objective: Objective,
    pub params: LocalSearchParams,
    /// Starting point for restart 0; later restarts start at random.
    pub initial: Option<Vec<StarterVector>>,
}

/// Fixed-row placements whose new classes meet every non-constant orbit.
///
/// `u` and `v` have length `k-1`; each passing placement gives a degree-`k`
/// array of the same size.
pub fn search_extension(
    u: &StarterVector,
    v: Option<&StarterVector>,
    orbits: &OrbitTable,
) -> Result<Vec<(Symbol, Option<Symbol>)>> {
    Ok(check_extension(u, v, orbits)?.into_iter().filter(|x| x.passes()).map(|x| (x.u_symbol, x.v_symbol)).collect())
}

/// Accept/undo rule shared by the hill climbs. Lower is better.
#[inline]
pub(crate) fn accept<T: Ord>(old: &T, new: &T, stall: &mut u64, plateau_cap: u64) -> bool {
    match new.cmp(old) {
        std::cmp::Ordering::Less => {
            *stall = 0;
            true
        }
        std::cmp::Ordering::Equal if *stall < plateau_cap => {
            *stall += 1;
            true
        }
        _ => {
            *stall += 1;
            false
        }
    }
}
