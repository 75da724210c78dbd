//! Bidirectional transformation between OpenQASM 2.0 programs and UML
//! activity diagrams stereotyped with a quantum circuit profile.
//!
//! The pipeline is `qasm` -> [`Circuit`] -> [`UmlModel`] -> XMI / PlantUML,
//! and back from XMI through [`uml_to_circuit`] to canonical OpenQASM.

pub mod circuit;
pub mod dag;
pub mod diagnostics;
pub mod gates;
pub mod qasm;
pub mod serialization;
pub mod transform;
pub mod uml;

#[cfg(test)]
mod fixtures;

pub use circuit::{BitRef, Circuit, CircuitError, ParamExpr, QuantumOp, QubitRef, RegisterDecl};
pub use dag::{canonicalize, circuits_equivalent, dependency_dag, DepDag};
pub use diagnostics::{ErrorCode, Severity};
pub use qasm::{emit, lower, parse, parse_circuit, ParseDiagnostic};
pub use serialization::{read_xmi, write_plantuml, write_xmi, XmiRead};
pub use transform::{circuit_to_uml, uml_to_circuit};
pub use uml::{validate, Diagnostic, NodeKind, RuleId, StereotypeKind, UmlModel};
