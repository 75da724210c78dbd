//! Shared test inputs.

use crate::{circuit_to_uml, parse_circuit, Circuit, UmlModel};

pub const TELEPORT: &str = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg msg[1];
creg register[1];
h q[1];
cx q[1], q[2];
barrier q[0],q[1],q[2];
cx q[0], q[1];
h q[0];
barrier q[0],q[1],q[2];
measure q[0] -> msg[0];
cz q[0], q[2];
measure q[1] -> register[0];
cx q[1], q[2];
"#;

pub fn teleport() -> Circuit {
    let mut c = parse_circuit(TELEPORT).expect("teleport parses");
    c.set_name("teleport");
    c
}

pub fn teleport_model() -> UmlModel {
    circuit_to_uml(&teleport())
}
