use std::collections::HashMap;

use crate::circuit::{Circuit, QuantumOp, QubitRef};
use crate::uml::{Edge, EdgeKind, Node, NodeKind, StereotypeKind, UmlModel};

/// Label carried by every control -> gate constraint edge.
pub const CONSTRAINT_LABEL: &str = "controls";

/// Where a qubit's lane currently ends.
#[derive(Debug, Clone)]
struct LaneCursor {
    partition: String,
    last: String,
}

struct Builder<'c> {
    circuit: &'c Circuit,
    model: UmlModel,
    next: usize,
    lanes: Vec<LaneCursor>,
    stores: HashMap<String, String>,
}

impl<'c> Builder<'c> {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("tmp{}", self.next)
    }

    fn node(&mut self, node: Node) -> String {
        let id = node.id.clone();
        self.model.add_node(node).expect("fresh id and known partition");
        id
    }

    fn stereotype(&mut self, kind: StereotypeKind, base: &str) {
        self.model
            .apply_stereotype(kind, base)
            .expect("fresh element without stereotype");
    }

    fn flow(&mut self, source: &str, target: &str, lane: Option<&str>) {
        let mut edge = Edge::new(self.fresh(), EdgeKind::ControlFlow, source, target);
        if let Some(p) = lane {
            edge = edge.in_partition(p);
        }
        self.model.add_edge(edge).expect("known endpoints");
    }

    fn lane_of(&self, qubit: &QubitRef) -> usize {
        self.circuit
            .qubit_position(qubit)
            .expect("operands of a well-formed circuit are declared")
    }

    /// Adds an action to the end of a lane's chain.
    fn append(&mut self, lane: usize, node: Node, stereotype: StereotypeKind) -> String {
        let id = self.fresh();
        let partition = self.lanes[lane].partition.clone();
        self.node(Node {
            id: id.clone(),
            partition: Some(partition.clone()),
            ..node
        });
        self.stereotype(stereotype, &id);
        let last = std::mem::replace(&mut self.lanes[lane].last, id.clone());
        self.flow(&last, &id, Some(&partition));
        id
    }

    /// Joins the given lanes into one node and returns its id.
    fn join(&mut self, lanes: &[usize]) -> String {
        let join = self.fresh();
        self.node(Node::new(join.clone(), NodeKind::JoinNode, "join"));
        for &l in lanes {
            let LaneCursor { partition, last } = self.lanes[l].clone();
            self.flow(&last, &join, Some(&partition));
        }
        join
    }

    fn op(&mut self, op: &QuantumOp) {
        match op {
            QuantumOp::Gate {
                mnemonic,
                params,
                target,
            } => {
                let lane = self.lane_of(target);
                let node = action(NodeKind::CallOperationAction, mnemonic).with_gate(mnemonic, params.clone());
                self.append(lane, node, StereotypeKind::QuantumGate);
            }
            QuantumOp::ControlledGate {
                base_mnemonic,
                params,
                controls,
                target,
            } => {
                let sends: Vec<String> = controls
                    .iter()
                    .map(|c| {
                        let lane = self.lane_of(c);
                        let node = action(NodeKind::SendSignalAction, "control");
                        self.append(lane, node, StereotypeKind::ControlledQubit)
                    })
                    .collect();
                let lane = self.lane_of(target);
                let node = action(NodeKind::AcceptEventAction, base_mnemonic)
                    .with_gate(base_mnemonic, params.clone());
                let accept = self.append(lane, node, StereotypeKind::QuantumGate);
                for send in sends {
                    let edge = Edge::new(self.fresh(), EdgeKind::Constraint, send, accept.clone())
                        .with_label(CONSTRAINT_LABEL);
                    self.model.add_edge(edge).expect("known endpoints");
                }
            }
            QuantumOp::Measure { qubit, bit } => {
                let lane = self.lane_of(qubit);
                let node = action(NodeKind::ValueSpecificationAction, "measure")
                    .with_measure(&bit.register, bit.index);
                let id = self.append(lane, node, StereotypeKind::Measure);
                let store = self.stores[&bit.register].clone();
                let edge = Edge::new(self.fresh(), EdgeKind::ObjectFlow, id, store)
                    .with_label(bit.to_string());
                self.model.add_edge(edge).expect("known endpoints");
            }
            QuantumOp::Reset { qubit } => {
                let lane = self.lane_of(qubit);
                let node = action(NodeKind::ValueSpecificationAction, "reset");
                self.append(lane, node, StereotypeKind::Reset);
            }
            QuantumOp::Barrier { qubits } => {
                let mut lanes: Vec<usize> = qubits.iter().map(|q| self.lane_of(q)).collect();
                lanes.sort_unstable();
                lanes.dedup();
                if lanes.len() < 2 {
                    return;
                }
                let join = self.join(&lanes);
                let fork = self.fresh();
                self.node(Node::new(fork.clone(), NodeKind::ForkNode, "fork"));
                self.flow(&join, &fork, None);
                for l in lanes {
                    self.lanes[l].last = fork.clone();
                }
            }
        }
    }
}

// id and partition are filled in by `Builder::append`
fn action(kind: NodeKind, name: &str) -> Node {
    Node::new(String::new(), kind, name)
}

/// Maps a circuit onto a profile-conformant activity diagram: one lane per
/// qubit, an action per gate (a send/accept pair with constraints for
/// controlled gates), join+fork pairs for barriers, and one data store per
/// classical register. Element ids are canonical (`e1`, `e2`, ...).
pub fn circuit_to_uml(circuit: &Circuit) -> UmlModel {
    let mut b = Builder {
        circuit,
        model: UmlModel::new("activity", circuit.name()),
        next: 0,
        lanes: Vec::new(),
        stores: HashMap::new(),
    };
    b.stereotype(StereotypeKind::QuantumCircuit, "activity");

    let mut partitions = Vec::new();
    for qubit in circuit.qubits() {
        let id = b.fresh();
        b.model
            .add_partition(id.clone(), format!("{}{}", qubit.register, qubit.index))
            .expect("fresh id");
        b.stereotype(StereotypeKind::Qubit, &id);
        partitions.push(id);
    }

    let initial = b.fresh();
    b.node(Node::new(initial.clone(), NodeKind::InitialNode, "initial"));
    let start = if partitions.len() > 1 {
        let fork = b.fresh();
        b.node(Node::new(fork.clone(), NodeKind::ForkNode, "fork"));
        b.flow(&initial, &fork, None);
        fork
    } else {
        initial
    };
    b.lanes = partitions
        .iter()
        .map(|p| LaneCursor {
            partition: p.clone(),
            last: start.clone(),
        })
        .collect();

    for reg in circuit.cregs() {
        let id = b.fresh();
        b.node(Node::new(id.clone(), NodeKind::DataStoreNode, reg.name.clone()).with_upper_bound(reg.size));
        b.stores.insert(reg.name.clone(), id);
    }

    for op in circuit.ops() {
        b.op(op);
    }

    let final_node = b.fresh();
    if b.lanes.len() > 1 {
        let all: Vec<usize> = (0..b.lanes.len()).collect();
        let join = b.join(&all);
        b.node(Node::new(final_node.clone(), NodeKind::ActivityFinalNode, "final"));
        b.flow(&join, &final_node, None);
    } else {
        b.node(Node::new(final_node.clone(), NodeKind::ActivityFinalNode, "final"));
        let lane = b.lanes.first().cloned();
        match lane {
            Some(LaneCursor { partition, last }) => b.flow(&last, &final_node, Some(&partition)),
            None => b.flow(&start, &final_node, None),
        }
    }
    b.model.renumbered()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::teleport_model;
    use crate::uml::{reachable_from_initial, validate};

    fn count(model: &UmlModel, kind: NodeKind) -> usize {
        model.nodes_of_kind(kind).count()
    }

    #[test]
    fn teleport_census() {
        let m = teleport_model();
        assert_eq!(m.partitions().len(), 3);
        let names: Vec<&str> = m.partitions().iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["q0", "q1", "q2"]);
        let expected = [
            (NodeKind::InitialNode, 1),
            (NodeKind::ActivityFinalNode, 1),
            (NodeKind::ForkNode, 3),
            (NodeKind::JoinNode, 3),
            (NodeKind::CallOperationAction, 2),
            (NodeKind::SendSignalAction, 4),
            (NodeKind::AcceptEventAction, 4),
            (NodeKind::ValueSpecificationAction, 2),
            (NodeKind::DataStoreNode, 2),
        ];
        for (kind, n) in expected {
            assert_eq!(count(&m, kind), n, "{kind:?}");
        }
        assert_eq!(m.nodes().len(), 22);
        assert_eq!(m.edges_of_kind(EdgeKind::Constraint).count(), 4);
        assert_eq!(m.edges_of_kind(EdgeKind::ObjectFlow).count(), 2);
        assert!(m
            .edges_of_kind(EdgeKind::Constraint)
            .all(|e| e.label.as_deref() == Some(CONSTRAINT_LABEL)));
        let flows: Vec<&str> = m
            .edges_of_kind(EdgeKind::ObjectFlow)
            .filter_map(|e| e.label.as_deref())
            .collect();
        assert_eq!(flows, ["msg[0]", "register[0]"]);
        assert_eq!(validate(&m), vec![]);
        assert_eq!(reachable_from_initial(&m).len(), 22);
        assert_eq!(m.renumbered(), m);
    }

    #[test]
    fn empty_single_qubit() {
        let c = Circuit::with_registers("c", &[("q", 1)], &[]).unwrap();
        let m = circuit_to_uml(&c);
        assert_eq!(m.partitions().len(), 1);
        assert_eq!(m.nodes().len(), 2);
        assert_eq!(m.edges().len(), 1);
        assert_eq!(m.stereotypes().len(), 2);
        assert_eq!(validate(&m), vec![]);
        let reach: Vec<String> = reachable_from_initial(&m).into_iter().collect();
        assert_eq!(reach, ["e3", "e4"]);
    }

    #[test]
    fn lane_chains_follow_program_order() {
        let m = teleport_model();
        let chain = |lane: usize| -> Vec<String> {
            m.partition_chain(&m.partitions()[lane].id)
                .iter()
                .map(|n| n.name.clone())
                .collect()
        };
        assert_eq!(chain(0), ["control", "h", "measure", "control"]);
        assert_eq!(chain(1), ["h", "control", "x", "measure", "control"]);
        assert_eq!(chain(2), ["x", "z", "x"]);
    }

    #[test]
    fn single_qubit_barrier_adds_nothing() {
        let mut c = Circuit::with_registers("c", &[("q", 2)], &[]).unwrap();
        c.push(QuantumOp::Barrier {
            qubits: vec![QubitRef::new("q", 1)],
        })
        .unwrap();
        let m = circuit_to_uml(&c);
        assert_eq!(count(&m, NodeKind::ForkNode), 1);
        assert_eq!(count(&m, NodeKind::JoinNode), 1);
    }

    #[test]
    fn unused_creg_still_gets_a_store() {
        let c = Circuit::with_registers("c", &[("q", 1)], &[("a", 2), ("b", 3)]).unwrap();
        let m = circuit_to_uml(&c);
        let stores: Vec<(&str, Option<usize>)> = m
            .nodes_of_kind(NodeKind::DataStoreNode)
            .map(|n| (n.name.as_str(), n.upper_bound))
            .collect();
        assert_eq!(stores, [("a", Some(2)), ("b", Some(3))]);
        assert_eq!(validate(&m), vec![]);
    }
}
