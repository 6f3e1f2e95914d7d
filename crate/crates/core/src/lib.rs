//! Strength-four covering arrays from PGL(2,q) starter vectors.
//!
//! The symbols are the points of the projective line GF(q) ∪ {∞}, so an
//! alphabet of `g` symbols uses GF(g-1). Rows are developed cyclically from
//! one or two starter vectors and columns are developed by every element of
//! PGL(2,q). A starter works when, for every cyclic class of row 4-subsets,
//! its d-set meets every non-constant orbit of the group on 4-tuples.
//!
//! Modules, bottom up:
//!
//! - [`field`]: GF(q) tables and projective symbols
//! - [`group`]: PGL(2,q) enumeration and action
//! - [`orbit`]: orbits on 4-tuples
//! - [`classes`]: cyclic classes of row 4-subsets and their d-sets
//! - [`builder`]: circulants, development, assembly and starter checks
//! - [`verifier`]: brute-force covering checks and coverage measure
//! - [`search`]: randomized search for starters and completion matrices
//! - [`postopt`]: randomized column reduction

pub mod builder;
pub mod classes;
pub mod error;
pub mod field;
pub mod group;
pub mod orbit;
pub mod postopt;
pub mod search;
pub mod verifier;

pub use builder::{assemble, starter_check, AssemblyOptions, ResidualReport, StarterVector, TestingArray};
pub use error::{Error, Result};
pub use field::{FieldSpec, Symbol};
pub use group::{GroupElement, Pgl2};
pub use orbit::{OrbitId, OrbitTable};

/// Field, group and orbit table for an alphabet of `g` symbols.
#[derive(Debug, Clone)]
pub struct Context {
    pub field: FieldSpec,
    pub group: Pgl2,
    pub orbits: OrbitTable,
}

impl Context {
    pub fn new(g: usize) -> Result<Context> {
        let field = FieldSpec::for_symbols(g)?;
        let group = Pgl2::new(&field);
        let orbits = OrbitTable::build(&group);
        Ok(Context { field, group, orbits })
    }

    pub fn symbol_count(&self) -> usize {
        self.field.symbol_count()
    }
}
