use super::parser::{Argument, Item, Program, RegisterKind, Statement, StatementKind};
use super::{Location, ParseDiagnostic};
use crate::circuit::{BitRef, Circuit, CircuitError, QuantumOp, QubitRef};
use crate::diagnostics::ErrorCode;
use crate::gates::{self, GateShape};

pub const DEFAULT_CIRCUIT_NAME: &str = "circuit";

/// Resolves a parsed program against the supported gate table.
pub fn lower(program: &Program) -> Result<Circuit, Vec<ParseDiagnostic>> {
    let mut circuit = Circuit::new(DEFAULT_CIRCUIT_NAME);
    let mut errors = Vec::new();
    for item in &program.items {
        let result = match item {
            Item::Declaration(decl) => {
                let declared = match decl.kind {
                    RegisterKind::Quantum => circuit.declare_qreg(&decl.name, decl.size),
                    RegisterKind::Classical => circuit.declare_creg(&decl.name, decl.size),
                };
                declared.map_err(|e| from_circuit_error(e, decl.loc))
            }
            Item::Statement(stmt) => lower_statement(&mut circuit, stmt),
        };
        if let Err(d) = result {
            errors.push(d);
        }
    }
    if errors.is_empty() {
        Ok(circuit)
    } else {
        Err(errors)
    }
}

fn from_circuit_error(err: CircuitError, loc: Location) -> ParseDiagnostic {
    ParseDiagnostic::new(err.code(), err.to_string(), loc)
}

/// An operand after broadcast resolution: either one element or every
/// element of a register.
struct Resolved {
    items: Vec<(String, usize)>,
    whole: bool,
}

fn resolve(
    circuit: &Circuit,
    arg: &Argument,
    kind: RegisterKind,
) -> Result<Resolved, ParseDiagnostic> {
    let regs = match kind {
        RegisterKind::Quantum => circuit.qregs(),
        RegisterKind::Classical => circuit.cregs(),
    };
    let Some(reg) = regs.iter().find(|r| r.name == arg.register) else {
        let what = match kind {
            RegisterKind::Quantum => "quantum",
            RegisterKind::Classical => "classical",
        };
        return Err(ParseDiagnostic::new(
            ErrorCode::UnknownRegister,
            format!("`{}` is not a declared {what} register", arg.register),
            arg.loc,
        ));
    };
    match arg.index {
        Some(i) if i >= reg.size => Err(ParseDiagnostic::new(
            ErrorCode::IndexRange,
            format!(
                "index {i} is out of range for register `{}` of size {}",
                reg.name, reg.size
            ),
            arg.loc,
        )),
        Some(i) => Ok(Resolved {
            items: vec![(reg.name.clone(), i)],
            whole: false,
        }),
        None => Ok(Resolved {
            items: (0..reg.size).map(|i| (reg.name.clone(), i)).collect(),
            whole: true,
        }),
    }
}

/// Number of ops a broadcast produces, or a mismatch error.
fn broadcast_len(operands: &[Resolved], loc: Location) -> Result<usize, ParseDiagnostic> {
    let mut len = None;
    for op in operands.iter().filter(|o| o.whole) {
        match len {
            None => len = Some(op.items.len()),
            Some(n) if n != op.items.len() => {
                return Err(ParseDiagnostic::new(
                    ErrorCode::BroadcastMismatch,
                    "register operands have different sizes",
                    loc,
                ))
            }
            Some(_) => {}
        }
    }
    Ok(len.unwrap_or(1))
}

fn pick(resolved: &Resolved, k: usize) -> QubitRef {
    let (reg, i) = if resolved.whole {
        &resolved.items[k]
    } else {
        &resolved.items[0]
    };
    QubitRef::new(reg.clone(), *i)
}

fn lower_statement(circuit: &mut Circuit, stmt: &Statement) -> Result<(), ParseDiagnostic> {
    let loc = stmt.loc;
    let mut ops = Vec::new();
    match &stmt.kind {
        StatementKind::GateApplication { name, params, args } => {
            let spec = gates::lookup(name).ok_or_else(|| {
                ParseDiagnostic::new(
                    ErrorCode::UnsupportedGate,
                    format!("gate `{name}` is not in the supported gate table"),
                    loc,
                )
            })?;
            if params.len() != spec.params {
                return Err(ParseDiagnostic::new(
                    ErrorCode::ParamArity,
                    format!(
                        "gate `{name}` takes {} parameter(s), got {}",
                        spec.params,
                        params.len()
                    ),
                    loc,
                ));
            }
            if args.len() != spec.qubits() {
                return Err(ParseDiagnostic::new(
                    ErrorCode::OperandArity,
                    format!(
                        "gate `{name}` takes {} qubit operand(s), got {}",
                        spec.qubits(),
                        args.len()
                    ),
                    loc,
                ));
            }
            let operands = args
                .iter()
                .map(|a| resolve(circuit, a, RegisterKind::Quantum))
                .collect::<Result<Vec<_>, _>>()?;
            for k in 0..broadcast_len(&operands, loc)? {
                let mut qubits: Vec<QubitRef> = operands.iter().map(|o| pick(o, k)).collect();
                let target = qubits.pop().expect("at least one operand");
                ops.push(match spec.shape {
                    GateShape::Plain => QuantumOp::gate(name, params.clone(), target),
                    GateShape::Controlled { base, .. } => {
                        QuantumOp::controlled(base, params.clone(), qubits, target)
                    }
                });
            }
        }
        StatementKind::Measure { qubit, bit } => {
            let q = resolve(circuit, qubit, RegisterKind::Quantum)?;
            let b = resolve(circuit, bit, RegisterKind::Classical)?;
            if q.whole != b.whole || q.items.len() != b.items.len() {
                return Err(ParseDiagnostic::new(
                    ErrorCode::BroadcastMismatch,
                    "measure operands must both be single elements or registers of equal size",
                    loc,
                ));
            }
            for ((qr, qi), (br, bi)) in q.items.into_iter().zip(b.items) {
                ops.push(QuantumOp::Measure {
                    qubit: QubitRef::new(qr, qi),
                    bit: BitRef::new(br, bi),
                });
            }
        }
        StatementKind::Reset { qubit } => {
            let q = resolve(circuit, qubit, RegisterKind::Quantum)?;
            for (reg, i) in q.items {
                ops.push(QuantumOp::Reset {
                    qubit: QubitRef::new(reg, i),
                });
            }
        }
        StatementKind::Barrier { args } => {
            let mut qubits = Vec::new();
            for a in args {
                let r = resolve(circuit, a, RegisterKind::Quantum)?;
                qubits.extend(r.items.into_iter().map(|(reg, i)| QubitRef::new(reg, i)));
            }
            ops.push(QuantumOp::Barrier { qubits });
        }
    }
    // check everything before touching the circuit so a failed broadcast
    // leaves no partial ops behind
    for op in &ops {
        circuit
            .check_op(op)
            .map_err(|e| from_circuit_error(e, loc))?;
    }
    for op in ops {
        circuit.push(op).expect("checked above");
    }
    Ok(())
}
