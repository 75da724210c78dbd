//! The supported subset of the `qelib1.inc` gate library.
//!
//! Plain gates act on exactly one target qubit. Controlled gates are stored
//! by their base gate plus a control count, so `cx` is `x` with one control
//! and `ccx` is `x` with two.

/// How a mnemonic is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateShape {
    Plain,
    Controlled { base: &'static str, controls: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateSpec {
    pub mnemonic: &'static str,
    pub params: usize,
    pub shape: GateShape,
}

impl GateSpec {
    /// Number of qubit operands in source order (controls first, then target).
    pub fn qubits(&self) -> usize {
        match self.shape {
            GateShape::Plain => 1,
            GateShape::Controlled { controls, .. } => controls + 1,
        }
    }
}

const fn plain(mnemonic: &'static str, params: usize) -> GateSpec {
    GateSpec {
        mnemonic,
        params,
        shape: GateShape::Plain,
    }
}

const fn controlled(
    mnemonic: &'static str,
    base: &'static str,
    controls: usize,
    params: usize,
) -> GateSpec {
    GateSpec {
        mnemonic,
        params,
        shape: GateShape::Controlled { base, controls },
    }
}

pub const SUPPORTED_GATES: &[GateSpec] = &[
    plain("id", 0),
    plain("x", 0),
    plain("y", 0),
    plain("z", 0),
    plain("h", 0),
    plain("s", 0),
    plain("sdg", 0),
    plain("t", 0),
    plain("tdg", 0),
    plain("rx", 1),
    plain("ry", 1),
    plain("rz", 1),
    plain("u1", 1),
    plain("u2", 2),
    plain("u3", 3),
    controlled("cx", "x", 1, 0),
    controlled("cy", "y", 1, 0),
    controlled("cz", "z", 1, 0),
    controlled("ch", "h", 1, 0),
    controlled("crz", "rz", 1, 1),
    controlled("cu1", "u1", 1, 1),
    controlled("ccx", "x", 2, 0),
];

pub fn lookup(mnemonic: &str) -> Option<&'static GateSpec> {
    SUPPORTED_GATES.iter().find(|g| g.mnemonic == mnemonic)
}

/// Looks up a plain (uncontrolled) gate.
pub fn plain_gate(mnemonic: &str) -> Option<&'static GateSpec> {
    lookup(mnemonic).filter(|g| g.shape == GateShape::Plain)
}

/// Inverse of the controlled table: `("x", 2)` yields `ccx`.
pub fn controlled_gate(base: &str, controls: usize) -> Option<&'static GateSpec> {
    SUPPORTED_GATES.iter().find(|g| {
        matches!(g.shape, GateShape::Controlled { base: b, controls: c } if b == base && c == controls)
    })
}
