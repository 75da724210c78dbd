use std::collections::{BTreeSet, HashMap};

use crate::circuit::{BitRef, Circuit, QuantumOp, QubitRef};
use crate::dag::canonicalize;
use crate::diagnostics::{ErrorCode, Severity};
use crate::gates;
use crate::uml::{validate, Diagnostic, EdgeKind, Node, NodeKind, StereotypeKind, UmlModel};

/// Links one constraint edge to the send and accept nodes it joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBinding {
    pub send: String,
    pub accept: String,
    pub constraint: String,
}

const DEFAULT_QREG: &str = "q";

fn split_lane_name(name: &str) -> Option<(&str, usize)> {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 {
        return None;
    }
    let (prefix, index) = name.split_at(name.len() - digits);
    Some((prefix, index.parse().ok()?))
}

/// Infers the single quantum register from lane names `q0`, `q1`, ...
fn infer_qreg(model: &UmlModel) -> Result<(String, HashMap<&str, usize>), Diagnostic> {
    let ambiguous = |ids: Vec<String>, msg: String| Diagnostic::code(ErrorCode::AmbiguousRegister, ids, msg);
    let mut prefix: Option<&str> = None;
    let mut lanes = HashMap::new();
    for (expected, p) in model.partitions().iter().enumerate() {
        let Some((pre, index)) = split_lane_name(&p.name) else {
            return Err(ambiguous(
                vec![p.id.clone()],
                format!("partition `{}` does not end in a qubit index", p.name),
            ));
        };
        if *prefix.get_or_insert(pre) != pre {
            return Err(ambiguous(
                vec![p.id.clone()],
                format!("partition `{}` does not share the register prefix `{}`", p.name, prefix.unwrap_or_default()),
            ));
        }
        if index != expected {
            return Err(ambiguous(
                vec![p.id.clone()],
                format!("partition `{}` is out of order, expected index {expected}", p.name),
            ));
        }
        lanes.insert(p.id.as_str(), index);
    }
    let name = match prefix {
        Some("") | None => DEFAULT_QREG.to_string(),
        Some(p) => p.to_string(),
    };
    Ok((name, lanes))
}

fn bit_label(label: Option<&str>, register: &str) -> Option<usize> {
    let rest = label?.strip_prefix(register)?.strip_prefix('[')?;
    rest.strip_suffix(']')?.parse().ok()
}

fn circuit_error(node: &str, err: crate::circuit::CircuitError) -> Diagnostic {
    Diagnostic::code(err.code(), vec![node.to_string()], err.to_string())
}

struct Reverse<'m> {
    model: &'m UmlModel,
    qreg: String,
    lanes: HashMap<&'m str, usize>,
}

impl<'m> Reverse<'m> {
    fn qubit(&self, node: &Node) -> QubitRef {
        let lane = node.partition.as_deref().expect("actions have partitions");
        QubitRef::new(self.qreg.clone(), self.lanes[lane])
    }

    fn measured_bit(&self, node: &Node) -> Result<BitRef, Diagnostic> {
        let flow = self
            .model
            .outgoing(&node.id, EdgeKind::ObjectFlow)
            .next()
            .expect("R7 guarantees one object flow");
        let store = self.model.node(&flow.target).expect("resolved target");
        bit_label(flow.label.as_deref(), &store.name)
            .map(|i| BitRef::new(store.name.clone(), i))
            .ok_or_else(|| {
                Diagnostic::code(
                    ErrorCode::BitUnlabeled,
                    vec![flow.id.clone()],
                    format!("measure flow into `{}` is not labelled `{}[i]`", store.name, store.name),
                )
            })
    }

    /// Lanes entering a barrier join.
    fn barrier_lanes(&self, join: &Node) -> Result<Vec<QubitRef>, Diagnostic> {
        let mut qubits = Vec::new();
        for e in self.model.incoming(&join.id, EdgeKind::ControlFlow) {
            let lane = e.partition.as_deref().or_else(|| {
                self.model
                    .node(&e.source)
                    .filter(|n| n.kind.is_action())
                    .and_then(|n| n.partition.as_deref())
            });
            let Some(lane) = lane else {
                return Err(Diagnostic::code(
                    ErrorCode::AmbiguousLane,
                    vec![e.id.clone()],
                    "cannot tell which qubit this flow into a barrier belongs to",
                ));
            };
            qubits.push(QubitRef::new(self.qreg.clone(), self.lanes[lane]));
        }
        qubits.sort();
        Ok(qubits)
    }

    fn is_barrier_join(&self, node: &Node) -> bool {
        node.kind == NodeKind::JoinNode
            && self
                .model
                .outgoing(&node.id, EdgeKind::ControlFlow)
                .all(|e| self.model.node(&e.target).is_some_and(|t| t.kind == NodeKind::ForkNode))
    }

    fn op_for(&self, node: &Node, bindings: &[&PairBinding]) -> Result<Option<QuantumOp>, Diagnostic> {
        let params = || node.gate_info.as_ref().map(|g| g.params.clone()).unwrap_or_default();
        Ok(Some(match node.kind {
            NodeKind::CallOperationAction => QuantumOp::gate(node.mnemonic(), params(), self.qubit(node)),
            NodeKind::AcceptEventAction => {
                let controls: Vec<QubitRef> = bindings
                    .iter()
                    .map(|b| self.qubit(self.model.node(&b.send).expect("resolved send")))
                    .collect();
                if gates::controlled_gate(node.mnemonic(), controls.len()).is_none() {
                    return Err(Diagnostic::code(
                        ErrorCode::UnsupportedGate,
                        vec![node.id.clone()],
                        format!(
                            "no supported gate applies `{}` with {} control(s)",
                            node.mnemonic(),
                            controls.len()
                        ),
                    ));
                }
                QuantumOp::controlled(node.mnemonic(), params(), controls, self.qubit(node))
            }
            NodeKind::ValueSpecificationAction => match self.model.stereotype_of(&node.id) {
                Some(StereotypeKind::Measure) => QuantumOp::Measure {
                    qubit: self.qubit(node),
                    bit: self.measured_bit(node)?,
                },
                _ => QuantumOp::Reset {
                    qubit: self.qubit(node),
                },
            },
            NodeKind::JoinNode if self.is_barrier_join(node) => QuantumOp::Barrier {
                qubits: self.barrier_lanes(node)?,
            },
            _ => return Ok(None),
        }))
    }
}

/// Constraint edges in model order, each tying a send to its accept.
pub fn pair_bindings(model: &UmlModel) -> Vec<PairBinding> {
    model
        .edges_of_kind(EdgeKind::Constraint)
        .map(|e| PairBinding {
            send: e.source.clone(),
            accept: e.target.clone(),
            constraint: e.id.clone(),
        })
        .collect()
}

/// Regenerates a circuit from a profile-conformant model. Validation runs
/// first; any error diagnostic aborts the transformation.
pub fn uml_to_circuit(model: &UmlModel) -> Result<Circuit, Vec<Diagnostic>> {
    let diagnostics = validate(model);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(diagnostics);
    }
    let (qreg, lanes) = infer_qreg(model).map_err(|d| vec![d])?;
    let mut circuit = Circuit::new(model.activity().name.clone());
    circuit
        .declare_qreg(&qreg, lanes.len())
        .map_err(|e| vec![circuit_error(&model.activity().id, e)])?;

    for store in model.nodes_of_kind(NodeKind::DataStoreNode) {
        let size = store.upper_bound.unwrap_or_else(|| {
            model
                .incoming(&store.id, EdgeKind::ObjectFlow)
                .filter_map(|e| bit_label(e.label.as_deref(), &store.name))
                .max()
                .map_or(1, |m| m + 1)
        });
        circuit
            .declare_creg(&store.name, size)
            .map_err(|e| vec![circuit_error(&store.id, e)])?;
    }

    let bindings = pair_bindings(model);
    let mut groups: HashMap<&str, Vec<&PairBinding>> = HashMap::new();
    for b in &bindings {
        groups.entry(b.accept.as_str()).or_default().push(b);
    }
    let rev = Reverse { model, qreg, lanes };

    // each send collapses onto the accept it controls
    let index: HashMap<&str, usize> = model
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();
    let mut class: Vec<usize> = (0..model.nodes().len()).collect();
    for b in &bindings {
        class[index[b.send.as_str()]] = index[b.accept.as_str()];
    }
    let count = class.len();
    let mut indegree = vec![0usize; count];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); count];
    for e in model.edges_of_kind(EdgeKind::ControlFlow) {
        let (s, t) = (class[index[e.source.as_str()]], class[index[e.target.as_str()]]);
        succ[s].push(t);
        indegree[t] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..count)
        .filter(|&i| class[i] == i && indegree[i] == 0)
        .collect();
    let mut errors = Vec::new();
    while let Some(c) = ready.pop_first() {
        let node = &model.nodes()[c];
        let group = groups.get(node.id.as_str()).map_or(&[][..], Vec::as_slice);
        match rev.op_for(node, group) {
            Ok(Some(op)) => {
                if let Err(e) = circuit.push(op) {
                    errors.push(circuit_error(&node.id, e));
                }
            }
            Ok(None) => {}
            Err(d) => errors.push(d),
        }
        for &s in &succ[c] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.insert(s);
            }
        }
    }
    if !errors.is_empty() {
        errors.sort();
        return Err(errors);
    }
    Ok(canonicalize(&circuit))
}
