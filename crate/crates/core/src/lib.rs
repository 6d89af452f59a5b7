//! Learning lexicographic preference lists (LP-lists) from pairwise examples.
//!
//! An LP-list ranks objects built from categorical attributes: attributes are
//! consulted in list order, each carrying a total order over its values, and
//! the first attribute on which two objects differ decides between them.
//!
//! The crate provides
//!
//! * [`model`]: schemas, objects, examples, LP-lists and their comparison semantics,
//! * [`dp`]: an exact learner based on dynamic programming over subsets,
//! * [`ga`]: a genetic-algorithm learner over chromosome-encoded LP-lists,
//! * [`greedy`]: a greedy front-to-back baseline,
//! * [`oracle`]: exhaustive reference solvers for small instances,
//! * [`datagen`]: synthetic data from hidden LP-lists with label noise,
//! * [`bench`]: the experiment harness and its CSV/SVG reports.

pub mod bench;
pub mod datagen;
pub mod dp;
mod error;
pub mod ga;
pub mod greedy;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use model::{Attribute, Example, LpList, Object, Relation, Schema};
