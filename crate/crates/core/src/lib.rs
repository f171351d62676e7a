//! Invertible Mealy automata and the groups they generate: restriction calculus, nuclei of
//! contracting actions, bounded automata, post-critically finite limit spaces, and finite
//! graph approximations of those limit spaces.
//!
//! ```
//! use pcfgroups::{compute_nucleus, is_pcf, MealyMachine, NucleusCaps};
//!
//! let m: MealyMachine = "alphabet 2\nstate e = (0 1) [e, e]\nstate a = (1 0) [e, a]"
//!     .parse()
//!     .unwrap();
//! let report = compute_nucleus(&m, &["a"], NucleusCaps::default()).unwrap();
//! let nucleus = report.nucleus().unwrap();
//! assert_eq!(nucleus.names(), ["e", "a", "a^-1"]);
//! assert_eq!(is_pcf(nucleus).path_count, Some(2));
//! ```

pub mod contraction;
pub mod digraph;
pub mod error;
pub mod limitspace;
pub mod machine;
mod parse;
pub mod structure;
pub mod word;
pub mod zoo;

pub use contraction::{
    compute_nucleus, is_identity, limit_states, nucleus_of_machine, open_set_condition, CapKind,
    ContractionOutcome, ContractionReport, Nucleus, NucleusCaps, WordProblem,
};
pub use digraph::{Arrow, ArrowLabel, LabeledDigraph};
pub use error::{Error, Result};
pub use limitspace::{
    boundary_certificates, emit_graph, schreier_graph, tile_graph, GraphFormat, SchreierGraph,
    TileGraph,
};
pub use machine::{MealyMachine, State, StateId};
pub use structure::{
    activity_count, finitary_depth, is_bounded, is_pcf, nucleus_partition, post_critical_set,
    CycleReport, FinitaryDepth, LeftInfSeq, PcfReport,
};
pub use word::{Alphabet, GroupWord, Letter, Sign, StateWord};
