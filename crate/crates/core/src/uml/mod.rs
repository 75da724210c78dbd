//! Activity-diagram model stereotyped with the quantum circuit profile.

mod model;
mod validate;

pub use model::{
    control_flow_order, reachable_from_initial, Activity, Edge, EdgeKind, GateInfo, MeasureInfo,
    ModelError, Node, NodeKind, Partition, StereotypeApplication, StereotypeKind, UmlModel,
};
pub use validate::{validate, Diagnostic, RuleId};
