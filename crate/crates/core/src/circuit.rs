//! Quantum circuit intermediate representation.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::diagnostics::ErrorCode;
use crate::gates;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterDecl {
    pub name: String,
    pub size: usize,
}

impl RegisterDecl {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef {
    pub register: String,
    pub index: usize,
}

impl QubitRef {
    pub fn new(register: impl Into<String>, index: usize) -> Self {
        Self {
            register: register.into(),
            index,
        }
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRef {
    pub register: String,
    pub index: usize,
}

impl BitRef {
    pub fn new(register: impl Into<String>, index: usize) -> Self {
        Self {
            register: register.into(),
            index,
        }
    }
}

impl fmt::Display for BitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Gate parameter expression. Equality is structural: `pi/2` and `1.5707963`
/// are different expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParamExpr {
    /// Non-negative numeric literal, kept as normalized source text.
    Number(String),
    Pi,
    Neg(Box<ParamExpr>),
    Binary(BinaryOp, Box<ParamExpr>, Box<ParamExpr>),
}

impl ParamExpr {
    /// Builds a literal, normalizing the exponent marker to lowercase.
    pub fn number(text: &str) -> Self {
        ParamExpr::Number(text.to_ascii_lowercase())
    }

    pub fn negate(inner: ParamExpr) -> Self {
        ParamExpr::Neg(Box::new(inner))
    }

    pub fn binary(op: BinaryOp, lhs: ParamExpr, rhs: ParamExpr) -> Self {
        ParamExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    fn is_sum(&self) -> bool {
        matches!(self, ParamExpr::Binary(BinaryOp::Add | BinaryOp::Sub, ..))
    }

    fn is_product_or_sum(&self) -> bool {
        matches!(
            self,
            ParamExpr::Binary(BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div, ..)
        )
    }

    fn is_atom(&self) -> bool {
        matches!(self, ParamExpr::Number(_) | ParamExpr::Pi)
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, expr: &ParamExpr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({expr})")
    } else {
        write!(f, "{expr}")
    }
}

// Prints with the minimum parentheses needed for the parser in `qasm` to
// rebuild the same tree: `-` binds looser than `^`, `^` is right-associative.
impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamExpr::Number(text) => f.write_str(text),
            ParamExpr::Pi => f.write_str("pi"),
            ParamExpr::Neg(inner) => {
                f.write_str("-")?;
                write_wrapped(f, inner, inner.is_product_or_sum())
            }
            ParamExpr::Binary(op, lhs, rhs) => {
                let (wrap_l, wrap_r) = match op {
                    BinaryOp::Add | BinaryOp::Sub => (false, rhs.is_sum()),
                    BinaryOp::Mul | BinaryOp::Div => (lhs.is_sum(), rhs.is_product_or_sum()),
                    BinaryOp::Pow => (!lhs.is_atom(), rhs.is_product_or_sum()),
                };
                write_wrapped(f, lhs, wrap_l)?;
                write!(f, "{}", op.symbol())?;
                write_wrapped(f, rhs, wrap_r)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuantumOp {
    Gate {
        mnemonic: String,
        params: Vec<ParamExpr>,
        target: QubitRef,
    },
    ControlledGate {
        base_mnemonic: String,
        params: Vec<ParamExpr>,
        controls: Vec<QubitRef>,
        target: QubitRef,
    },
    Measure {
        qubit: QubitRef,
        bit: BitRef,
    },
    Reset {
        qubit: QubitRef,
    },
    Barrier {
        qubits: Vec<QubitRef>,
    },
}

impl QuantumOp {
    pub fn gate(mnemonic: &str, params: Vec<ParamExpr>, target: QubitRef) -> Self {
        QuantumOp::Gate {
            mnemonic: mnemonic.to_string(),
            params,
            target,
        }
    }

    pub fn controlled(
        base_mnemonic: &str,
        params: Vec<ParamExpr>,
        controls: Vec<QubitRef>,
        target: QubitRef,
    ) -> Self {
        QuantumOp::ControlledGate {
            base_mnemonic: base_mnemonic.to_string(),
            params,
            controls,
            target,
        }
    }

    /// Qubit operands in source order; controls precede the target.
    pub fn qubits(&self) -> Vec<&QubitRef> {
        match self {
            QuantumOp::Gate { target, .. } => vec![target],
            QuantumOp::ControlledGate {
                controls, target, ..
            } => controls.iter().chain(std::iter::once(target)).collect(),
            QuantumOp::Measure { qubit, .. } | QuantumOp::Reset { qubit } => vec![qubit],
            QuantumOp::Barrier { qubits } => qubits.iter().collect(),
        }
    }

    /// Source-level mnemonic (`cx` for a singly controlled `x`).
    pub fn mnemonic(&self) -> Option<&'static str> {
        match self {
            QuantumOp::Gate { mnemonic, .. } => gates::plain_gate(mnemonic).map(|g| g.mnemonic),
            QuantumOp::ControlledGate {
                base_mnemonic,
                controls,
                ..
            } => gates::controlled_gate(base_mnemonic, controls.len()).map(|g| g.mnemonic),
            QuantumOp::Measure { .. } => Some("measure"),
            QuantumOp::Reset { .. } => Some("reset"),
            QuantumOp::Barrier { .. } => Some("barrier"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("register `{0}` is already declared")]
    DuplicateRegister(String),
    #[error("invalid register name `{0}`")]
    InvalidRegisterName(String),
    #[error("register `{0}` must have size of at least 1")]
    EmptyRegister(String),
    #[error("index {index} is out of range for register `{register}` of size {size}")]
    IndexRange {
        register: String,
        index: usize,
        size: usize,
    },
    #[error("operand {0} appears more than once")]
    DuplicateOperand(String),
    #[error("gate `{0}` is not supported")]
    UnsupportedGate(String),
    #[error("gate `{mnemonic}` takes {expected} parameter(s), got {found}")]
    ParamArity {
        mnemonic: String,
        expected: usize,
        found: usize,
    },
    #[error("barrier needs at least one qubit")]
    EmptyBarrier,
}

impl CircuitError {
    pub fn code(&self) -> ErrorCode {
        match self {
            CircuitError::UnknownRegister(_) => ErrorCode::UnknownRegister,
            CircuitError::DuplicateRegister(_) => ErrorCode::DuplicateRegister,
            CircuitError::InvalidRegisterName(_) => ErrorCode::Syntax,
            CircuitError::EmptyRegister(_) | CircuitError::IndexRange { .. } => {
                ErrorCode::IndexRange
            }
            CircuitError::DuplicateOperand(_) => ErrorCode::DuplicateOperand,
            CircuitError::UnsupportedGate(_) => ErrorCode::UnsupportedGate,
            CircuitError::ParamArity { .. } => ErrorCode::ParamArity,
            CircuitError::EmptyBarrier => ErrorCode::OperandArity,
        }
    }
}

/// `[a-z][A-Za-z0-9_]*`
pub fn is_valid_register_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered list of operations over declared quantum and classical
/// registers. Every mutation re-checks the register and operand invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    name: String,
    qregs: Vec<RegisterDecl>,
    cregs: Vec<RegisterDecl>,
    ops: Vec<QuantumOp>,
}

impl Circuit {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            qregs: Vec::new(),
            cregs: Vec::new(),
            ops: Vec::new(),
        }
    }

    /// Convenience constructor for a circuit with registers but no ops.
    pub fn with_registers(
        name: impl Into<String>,
        qregs: &[(&str, usize)],
        cregs: &[(&str, usize)],
    ) -> Result<Self, CircuitError> {
        let mut circuit = Self::new(name);
        for (n, s) in qregs {
            circuit.declare_qreg(n, *s)?;
        }
        for (n, s) in cregs {
            circuit.declare_creg(n, *s)?;
        }
        Ok(circuit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn qregs(&self) -> &[RegisterDecl] {
        &self.qregs
    }

    pub fn cregs(&self) -> &[RegisterDecl] {
        &self.cregs
    }

    pub fn ops(&self) -> &[QuantumOp] {
        &self.ops
    }

    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|r| r.size).sum()
    }

    /// All qubits in declaration order.
    pub fn qubits(&self) -> impl Iterator<Item = QubitRef> + '_ {
        self.qregs
            .iter()
            .flat_map(|r| (0..r.size).map(move |i| QubitRef::new(r.name.clone(), i)))
    }

    /// Position of a qubit in declaration order, if declared.
    pub fn qubit_position(&self, qubit: &QubitRef) -> Option<usize> {
        let mut offset = 0;
        for reg in &self.qregs {
            if reg.name == qubit.register {
                return (qubit.index < reg.size).then_some(offset + qubit.index);
            }
            offset += reg.size;
        }
        None
    }

    fn check_new_register(&self, name: &str, size: usize) -> Result<(), CircuitError> {
        if !is_valid_register_name(name) {
            return Err(CircuitError::InvalidRegisterName(name.to_string()));
        }
        if self.qregs.iter().chain(&self.cregs).any(|r| r.name == name) {
            return Err(CircuitError::DuplicateRegister(name.to_string()));
        }
        if size == 0 {
            return Err(CircuitError::EmptyRegister(name.to_string()));
        }
        Ok(())
    }

    pub fn declare_qreg(&mut self, name: &str, size: usize) -> Result<(), CircuitError> {
        self.check_new_register(name, size)?;
        self.qregs.push(RegisterDecl::new(name, size));
        Ok(())
    }

    pub fn declare_creg(&mut self, name: &str, size: usize) -> Result<(), CircuitError> {
        self.check_new_register(name, size)?;
        self.cregs.push(RegisterDecl::new(name, size));
        Ok(())
    }

    fn check_index(regs: &[RegisterDecl], register: &str, index: usize) -> Result<(), CircuitError> {
        let Some(reg) = regs.iter().find(|r| r.name == register) else {
            return Err(CircuitError::UnknownRegister(register.to_string()));
        };
        if index >= reg.size {
            return Err(CircuitError::IndexRange {
                register: register.to_string(),
                index,
                size: reg.size,
            });
        }
        Ok(())
    }

    fn check_qubit(&self, q: &QubitRef) -> Result<(), CircuitError> {
        Self::check_index(&self.qregs, &q.register, q.index)
    }

    fn check_bit(&self, b: &BitRef) -> Result<(), CircuitError> {
        Self::check_index(&self.cregs, &b.register, b.index)
    }

    fn check_params(mnemonic: &str, expected: usize, found: usize) -> Result<(), CircuitError> {
        if expected != found {
            return Err(CircuitError::ParamArity {
                mnemonic: mnemonic.to_string(),
                expected,
                found,
            });
        }
        Ok(())
    }

    /// Checks that `op` could be appended to this circuit.
    pub fn check_op(&self, op: &QuantumOp) -> Result<(), CircuitError> {
        match op {
            QuantumOp::Gate {
                mnemonic, params, ..
            } => {
                let spec = gates::plain_gate(mnemonic)
                    .ok_or_else(|| CircuitError::UnsupportedGate(mnemonic.clone()))?;
                Self::check_params(mnemonic, spec.params, params.len())?;
            }
            QuantumOp::ControlledGate {
                base_mnemonic,
                params,
                controls,
                ..
            } => {
                let spec = gates::controlled_gate(base_mnemonic, controls.len()).ok_or_else(|| {
                    CircuitError::UnsupportedGate(format!(
                        "{base_mnemonic} with {} control(s)",
                        controls.len()
                    ))
                })?;
                Self::check_params(spec.mnemonic, spec.params, params.len())?;
            }
            QuantumOp::Measure { bit, .. } => self.check_bit(bit)?,
            QuantumOp::Reset { .. } => {}
            QuantumOp::Barrier { qubits } => {
                if qubits.is_empty() {
                    return Err(CircuitError::EmptyBarrier);
                }
            }
        }
        let mut seen = HashSet::new();
        for q in op.qubits() {
            self.check_qubit(q)?;
            if !seen.insert(q) {
                return Err(CircuitError::DuplicateOperand(q.to_string()));
            }
        }
        Ok(())
    }

    pub fn push(&mut self, op: QuantumOp) -> Result<(), CircuitError> {
        self.check_op(&op)?;
        self.ops.push(op);
        Ok(())
    }

    /// Returns the circuit with `op` appended.
    pub fn append_op(mut self, op: QuantumOp) -> Result<Self, CircuitError> {
        self.push(op)?;
        Ok(self)
    }

    /// Same registers and name, different op list. Only used on op lists
    /// that are permutations of already-checked ops.
    pub(crate) fn with_ops(&self, ops: Vec<QuantumOp>) -> Self {
        Self {
            name: self.name.clone(),
            qregs: self.qregs.clone(),
            cregs: self.cregs.clone(),
            ops,
        }
    }
}
