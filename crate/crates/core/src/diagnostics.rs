//! Error codes and severities shared by every stage of the pipeline.

use std::fmt;

/// Stable, machine-readable identifiers for every error the crate reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorCode {
    Syntax,
    Version,
    ClassicalIf,
    UnknownRegister,
    DuplicateRegister,
    IndexRange,
    DuplicateOperand,
    UnsupportedGate,
    ParamArity,
    OperandArity,
    BroadcastMismatch,
    DupId,
    DanglingRef,
    PartitionRequired,
    PartitionForbidden,
    DupStereotype,
    AmbiguousRegister,
    AmbiguousLane,
    BitUnlabeled,
    Xml,
    XmiSchema,
    InvalidModel,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Syntax => "E-SYNTAX",
            ErrorCode::Version => "E-VERSION",
            ErrorCode::ClassicalIf => "E-CLASSICAL-IF",
            ErrorCode::UnknownRegister => "E-UNKNOWN-REGISTER",
            ErrorCode::DuplicateRegister => "E-DUPLICATE-REGISTER",
            ErrorCode::IndexRange => "E-INDEX-RANGE",
            ErrorCode::DuplicateOperand => "E-DUPLICATE-OPERAND",
            ErrorCode::UnsupportedGate => "E-UNSUPPORTED-GATE",
            ErrorCode::ParamArity => "E-PARAM-ARITY",
            ErrorCode::OperandArity => "E-OPERAND-ARITY",
            ErrorCode::BroadcastMismatch => "E-BROADCAST-MISMATCH",
            ErrorCode::DupId => "E-DUP-ID",
            ErrorCode::DanglingRef => "E-DANGLING-REF",
            ErrorCode::PartitionRequired => "E-PARTITION-REQUIRED",
            ErrorCode::PartitionForbidden => "E-PARTITION-FORBIDDEN",
            ErrorCode::DupStereotype => "E-DUP-STEREOTYPE",
            ErrorCode::AmbiguousRegister => "E-AMBIGUOUS-REGISTER",
            ErrorCode::AmbiguousLane => "E-AMBIGUOUS-LANE",
            ErrorCode::BitUnlabeled => "E-BIT-UNLABELED",
            ErrorCode::Xml => "E-XML",
            ErrorCode::XmiSchema => "E-XMI-SCHEMA",
            ErrorCode::InvalidModel => "E-INVALID-MODEL",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
