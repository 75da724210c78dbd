//! Fixtures, a random circuit generator and reference implementations used
//! as oracles by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use qcuml_core::circuit::BinaryOp;
use qcuml_core::uml::{Edge, EdgeKind, GateInfo, Node, NodeKind, StereotypeKind};
use qcuml_core::{
    circuit_to_uml, parse_circuit, BitRef, Circuit, ParamExpr, QuantumOp, QubitRef, RuleId, UmlModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TELEPORT: &str = include_str!("../data/teleport.qasm");

pub fn teleport() -> Circuit {
    let mut c = parse_circuit(TELEPORT).expect("teleport parses");
    c.set_name("teleport");
    c
}

pub fn teleport_model() -> UmlModel {
    circuit_to_uml(&teleport())
}

pub fn q(i: usize) -> QubitRef {
    QubitRef::new("q", i)
}

/// (mnemonic, parameter count)
const PLAIN: &[(&str, usize)] = &[
    ("id", 0),
    ("x", 0),
    ("y", 0),
    ("z", 0),
    ("h", 0),
    ("s", 0),
    ("sdg", 0),
    ("t", 0),
    ("tdg", 0),
    ("rx", 1),
    ("ry", 1),
    ("rz", 1),
    ("u1", 1),
    ("u2", 2),
    ("u3", 3),
];

/// (base mnemonic, controls, parameter count)
const CONTROLLED: &[(&str, usize, usize)] = &[
    ("x", 1, 0),
    ("y", 1, 0),
    ("z", 1, 0),
    ("h", 1, 0),
    ("rz", 1, 1),
    ("u1", 1, 1),
    ("x", 2, 0),
];

const LITERALS: &[&str] = &["0", "1", "2", "4", "0.5", "3.25", "1e-3", "2.5E2"];

fn random_param(rng: &mut ChaCha8Rng, depth: usize) -> ParamExpr {
    let leaf = depth == 0 || rng.random_bool(0.4);
    if leaf {
        return if rng.random_bool(0.4) {
            ParamExpr::Pi
        } else {
            ParamExpr::number(LITERALS[rng.random_range(0..LITERALS.len())])
        };
    }
    if rng.random_bool(0.2) {
        return ParamExpr::negate(random_param(rng, depth - 1));
    }
    let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow][rng.random_range(0..5)];
    ParamExpr::binary(op, random_param(rng, depth - 1), random_param(rng, depth - 1))
}

fn params(rng: &mut ChaCha8Rng, count: usize) -> Vec<ParamExpr> {
    (0..count).map(|_| random_param(rng, 2)).collect()
}

/// Distinct qubit indices, in random order.
fn distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for _ in 0..k {
        out.push(pool.swap_remove(rng.random_range(0..pool.len())));
    }
    out
}

/// Random well-formed circuit: one register `q` of 1..=5 qubits, up to two
/// classical registers and at most 30 ops drawn from the whole gate table
/// plus measure, reset and barrier.
pub fn random_circuit(seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=5);
    let cregs: Vec<(String, usize)> = (0..rng.random_range(0..=2))
        .map(|i| (format!("c{i}"), rng.random_range(1..=3)))
        .collect();
    let creg_refs: Vec<(&str, usize)> = cregs.iter().map(|(s, k)| (s.as_str(), *k)).collect();
    let mut c = Circuit::with_registers(format!("rand{seed}"), &[("q", n)], &creg_refs).unwrap();
    let len = rng.random_range(0..=30);
    while c.ops().len() < len {
        let op = match rng.random_range(0..10) {
            0..=3 => {
                let (m, p) = PLAIN[rng.random_range(0..PLAIN.len())];
                QuantumOp::gate(m, params(&mut rng, p), q(rng.random_range(0..n)))
            }
            4..=6 => {
                let (base, controls, p) = CONTROLLED[rng.random_range(0..CONTROLLED.len())];
                if controls + 1 > n {
                    continue;
                }
                let picked = distinct(&mut rng, n, controls + 1);
                let ctl = picked[..controls].iter().map(|&i| q(i)).collect();
                QuantumOp::controlled(base, params(&mut rng, p), ctl, q(picked[controls]))
            }
            7 => {
                if cregs.is_empty() {
                    continue;
                }
                let (name, size) = &cregs[rng.random_range(0..cregs.len())];
                QuantumOp::Measure {
                    qubit: q(rng.random_range(0..n)),
                    bit: BitRef::new(name.clone(), rng.random_range(0..*size)),
                }
            }
            8 => QuantumOp::Reset {
                qubit: q(rng.random_range(0..n)),
            },
            _ => {
                // one-qubit barriers have no diagram form, so they are not generated
                if n < 2 {
                    continue;
                }
                let k = rng.random_range(2..=n);
                QuantumOp::Barrier {
                    qubits: distinct(&mut rng, n, k).into_iter().map(q).collect(),
                }
            }
        };
        c.push(op).expect("generated op is well-formed");
    }
    c
}

pub fn arb_circuit() -> impl Strategy<Value = Circuit> {
    any::<u64>().prop_map(random_circuit)
}

pub fn arb_param() -> impl Strategy<Value = ParamExpr> {
    (any::<u64>(), 0usize..4).prop_map(|(seed, depth)| random_param(&mut ChaCha8Rng::seed_from_u64(seed), depth))
}

/// Flat qubit position, `q` only.
fn pos(qubit: &QubitRef) -> usize {
    qubit.index
}

fn normalized(op: &QuantumOp) -> QuantumOp {
    match op {
        QuantumOp::Barrier { qubits } => {
            let mut qubits = qubits.clone();
            qubits.sort_by_key(pos);
            QuantumOp::Barrier { qubits }
        }
        other => other.clone(),
    }
}

fn touches(a: &QuantumOp, b: &QuantumOp) -> bool {
    a.qubits().iter().any(|x| b.qubits().contains(x))
}

/// Reference canonical order: rescan every remaining op each round and emit
/// the smallest (first operand, original index) among ops with no earlier
/// remaining op on a shared qubit.
pub fn oracle_canonical_ops(c: &Circuit) -> Vec<QuantumOp> {
    let ops: Vec<QuantumOp> = c.ops().iter().map(normalized).collect();
    let mut remaining: Vec<usize> = (0..ops.len()).collect();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| j < i && touches(&ops[i], &ops[j])))
            .min_by_key(|&i| (pos(ops[i].qubits()[0]), i))
            .unwrap();
        remaining.retain(|&i| i != ready);
        out.push(ops[ready].clone());
    }
    out
}

/// Reference equivalence: same registers and, for every qubit, the same
/// sequence of ops touching it.
pub fn oracle_equivalent(a: &Circuit, b: &Circuit) -> bool {
    if a.qregs() != b.qregs() || a.cregs() != b.cregs() || a.ops().len() != b.ops().len() {
        return false;
    }
    let projection = |c: &Circuit, qubit: &QubitRef| -> Vec<QuantumOp> {
        c.ops()
            .iter()
            .map(normalized)
            .filter(|op| op.qubits().contains(&qubit))
            .collect()
    };
    a.qubits().all(|qb| projection(a, &qb) == projection(b, &qb))
}

/// Ops touching each qubit, in order.
pub fn per_qubit(c: &Circuit) -> Vec<Vec<QuantumOp>> {
    c.qubits()
        .map(|qb| {
            c.ops()
                .iter()
                .filter(|op| op.qubits().contains(&&qb))
                .cloned()
                .collect()
        })
        .collect()
}

/// Dependency edges of the teleport listing worked out by hand.
pub fn teleport_dag_edges() -> BTreeSet<(usize, usize)> {
    [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (2, 5),
        (3, 5),
        (4, 5),
        (5, 6),
        (5, 7),
        (5, 8),
        (6, 7),
        (7, 9),
        (8, 9),
    ]
    .into_iter()
    .collect()
}

fn node_where(m: &UmlModel, pred: impl Fn(&Node) -> bool) -> String {
    m.nodes().iter().find(|n| pred(n)).expect("node exists").id.clone()
}

fn lane(m: &UmlModel, name: &str) -> String {
    m.partitions().iter().find(|p| p.name == name).unwrap().id.clone()
}

fn action_in(m: &UmlModel, kind: NodeKind, lane_name: &str, mnemonic: &str) -> String {
    let p = lane(m, lane_name);
    node_where(m, |n| n.kind == kind && n.partition.as_deref() == Some(p.as_str()) && n.mnemonic() == mnemonic)
}

/// One scripted mutation of the teleport model per rule.
pub fn mutate(rule: RuleId) -> UmlModel {
    let mut m = teleport_model();
    match rule {
        RuleId::R1 => {
            let id = m.activity().id.clone();
            m.remove_stereotype(&id);
        }
        RuleId::R2 => {
            let p = lane(&m, "q0");
            m.remove_stereotype(&p);
        }
        RuleId::R3 => {
            m.add_node(Node::new("extra-initial", NodeKind::InitialNode, "initial")).unwrap();
        }
        RuleId::R4 => {
            let z = action_in(&m, NodeKind::AcceptEventAction, "q2", "z");
            let e = m.edges_of_kind(EdgeKind::Constraint).find(|e| e.target == z).unwrap().id.clone();
            m.remove_edge(&e);
        }
        RuleId::R5 => {
            let h0 = action_in(&m, NodeKind::CallOperationAction, "q0", "h");
            let e = m.edges_of_kind(EdgeKind::ControlFlow).find(|e| e.source == h0).unwrap().id.clone();
            m.remove_edge(&e);
        }
        RuleId::R6 => {
            let join = node_where(&m, |n| n.kind == NodeKind::JoinNode);
            let fin = node_where(&m, |n| n.kind == NodeKind::ActivityFinalNode);
            m.add_edge(Edge::new("extra-flow", EdgeKind::ControlFlow, join, fin)).unwrap();
        }
        RuleId::R7 => {
            let e = m.edges_of_kind(EdgeKind::ObjectFlow).next().unwrap().id.clone();
            m.remove_edge(&e);
        }
        RuleId::R8 => {
            let h0 = action_in(&m, NodeKind::CallOperationAction, "q0", "h");
            let p1 = lane(&m, "q1");
            let measure1 = node_where(&m, |n| {
                n.kind == NodeKind::ValueSpecificationAction && n.partition.as_deref() == Some(p1.as_str())
            });
            m.add_edge(Edge::new("cross-lane", EdgeKind::ControlFlow, h0, measure1)).unwrap();
        }
        RuleId::R9 => {
            let fork = node_where(&m, |n| n.kind == NodeKind::ForkNode);
            m.apply_stereotype(StereotypeKind::Qubit, fork).unwrap();
        }
        RuleId::R10 => {
            let constraints: Vec<Edge> = m.edges_of_kind(EdgeKind::Constraint).cloned().collect();
            let (first, last) = (&constraints[0], &constraints[constraints.len() - 1]);
            m.retarget_edge(&first.id, &last.target).unwrap();
            m.retarget_edge(&last.id, &first.target).unwrap();
        }
        RuleId::R11 => {
            let h1 = action_in(&m, NodeKind::CallOperationAction, "q1", "h");
            m.set_gate_info(
                &h1,
                GateInfo {
                    mnemonic: "swap".into(),
                    params: vec![],
                },
            )
            .unwrap();
        }
        RuleId::Code(_) => unreachable!("not a profile rule"),
    }
    m
}
