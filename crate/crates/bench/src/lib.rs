//! Deterministic workloads for the pipeline benchmarks.

use qcuml_core::{emit, BitRef, Circuit, QuantumOp, QubitRef};

/// Brick-wall circuit: each layer applies `h` to every qubit, a `cx` ladder,
/// and a full barrier. Every qubit is measured at the end.
pub fn layered_circuit(qubits: usize, layers: usize) -> Circuit {
    let mut c = Circuit::with_registers("layered", &[("q", qubits)], &[("c", qubits)]).expect("valid registers");
    let q = |i| QubitRef::new("q", i);
    for _ in 0..layers {
        for i in 0..qubits {
            c.push(QuantumOp::gate("h", vec![], q(i))).unwrap();
        }
        for i in 1..qubits {
            c.push(QuantumOp::controlled("x", vec![], vec![q(i - 1)], q(i))).unwrap();
        }
        if qubits > 1 {
            c.push(QuantumOp::Barrier {
                qubits: (0..qubits).map(q).collect(),
            })
            .unwrap();
        }
    }
    for i in 0..qubits {
        c.push(QuantumOp::Measure {
            qubit: q(i),
            bit: BitRef::new("c", i),
        })
        .unwrap();
    }
    c
}

pub fn layered_source(qubits: usize, layers: usize) -> String {
    emit(&layered_circuit(qubits, layers))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let c = layered_circuit(4, 3);
        assert_eq!(c.ops().len(), 3 * (4 + 3 + 1) + 4);
        assert_eq!(layered_circuit(1, 2).ops().len(), 3);
        assert!(qcuml_core::parse_circuit(&layered_source(3, 2)).is_ok());
    }
}
