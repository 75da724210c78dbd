use std::fmt::Write;

use crate::circuit::{Circuit, ParamExpr, QuantumOp, QubitRef};
use crate::dag::canonicalize;

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn gate_line(mnemonic: &str, params: &[ParamExpr], qubits: &[&QubitRef]) -> String {
    let mut line = mnemonic.to_string();
    if !params.is_empty() {
        line.push('(');
        line.push_str(&join(params));
        line.push(')');
    }
    line.push(' ');
    line.push_str(&join(qubits));
    line.push(';');
    line
}

/// Writes canonical OpenQASM 2.0: header, include, registers, then the
/// canonically ordered ops one per line.
pub fn emit(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for reg in circuit.qregs() {
        let _ = writeln!(out, "qreg {}[{}];", reg.name, reg.size);
    }
    for reg in circuit.cregs() {
        let _ = writeln!(out, "creg {}[{}];", reg.name, reg.size);
    }
    for op in canonicalize(circuit).ops() {
        let line = match op {
            QuantumOp::Gate { params, .. } | QuantumOp::ControlledGate { params, .. } => {
                let mnemonic = op.mnemonic().expect("well-formed circuit");
                gate_line(mnemonic, params, &op.qubits())
            }
            QuantumOp::Measure { qubit, bit } => format!("measure {qubit} -> {bit};"),
            QuantumOp::Reset { qubit } => format!("reset {qubit};"),
            QuantumOp::Barrier { qubits } => format!("barrier {};", join(qubits)),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
