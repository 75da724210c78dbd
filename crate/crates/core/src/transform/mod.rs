//! Circuit <-> activity diagram mappings.

mod forward;
mod reverse;

pub use forward::{circuit_to_uml, CONSTRAINT_LABEL};
pub use reverse::{pair_bindings, uml_to_circuit, PairBinding};
