//! Dependency DAG over circuit ops and the canonical linearization built on it.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::circuit::{Circuit, QuantumOp, QubitRef};

/// Precedence graph over op indices. An edge `(i, j)` means op `i` must run
/// before op `j`; only last-op-per-qubit edges are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepDag {
    pub nodes: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DepDag {
    pub fn predecessors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |(_, j)| *j == node)
            .map(|(i, _)| *i)
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .range((node, 0)..(node + 1, 0))
            .map(|(_, j)| *j)
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.nodes];
        for &(_, j) in &self.edges {
            indegree[j] += 1;
        }
        let mut ready: Vec<usize> = (0..self.nodes).filter(|&n| indegree[n] == 0).collect();
        let mut visited = 0;
        while let Some(n) = ready.pop() {
            visited += 1;
            for s in self.successors(n) {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.push(s);
                }
            }
        }
        visited == self.nodes
    }
}

pub fn dependency_dag(circuit: &Circuit) -> DepDag {
    let mut last: HashMap<&QubitRef, usize> = HashMap::new();
    let mut edges = BTreeSet::new();
    for (j, op) in circuit.ops().iter().enumerate() {
        for q in op.qubits() {
            if let Some(i) = last.insert(q, j) {
                edges.insert((i, j));
            }
        }
    }
    DepDag {
        nodes: circuit.ops().len(),
        edges,
    }
}

fn normalize_barrier(circuit: &Circuit, op: &QuantumOp) -> QuantumOp {
    match op {
        QuantumOp::Barrier { qubits } => {
            let mut qubits = qubits.clone();
            qubits.sort_by_key(|q| circuit.qubit_position(q));
            QuantumOp::Barrier { qubits }
        }
        other => other.clone(),
    }
}

/// Reorders ops into the deterministic topological order of the dependency
/// DAG: among ready ops, the one whose first operand comes first in
/// declaration order wins, then the one that came first in the input.
/// Barrier operand lists are sorted into declaration order.
pub fn canonicalize(circuit: &Circuit) -> Circuit {
    let ops: Vec<QuantumOp> = circuit
        .ops()
        .iter()
        .map(|op| normalize_barrier(circuit, op))
        .collect();
    let dag = dependency_dag(circuit);
    let key = |i: usize| {
        let first = ops[i].qubits()[0];
        (circuit.qubit_position(first).unwrap_or(usize::MAX), i)
    };

    let mut indegree = vec![0usize; dag.nodes];
    for &(_, j) in &dag.edges {
        indegree[j] += 1;
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..dag.nodes)
        .filter(|&n| indegree[n] == 0)
        .map(|n| Reverse(key(n)))
        .collect();
    let mut order = Vec::with_capacity(ops.len());
    while let Some(Reverse((_, n))) = ready.pop() {
        order.push(n);
        for s in dag.successors(n) {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(Reverse(key(s)));
            }
        }
    }
    debug_assert_eq!(order.len(), ops.len());
    circuit.with_ops(order.into_iter().map(|i| ops[i].clone()).collect())
}

/// Same registers in the same order, and the same canonical op sequence.
pub fn circuits_equivalent(a: &Circuit, b: &Circuit) -> bool {
    a.qregs() == b.qregs()
        && a.cregs() == b.cregs()
        && a.ops().len() == b.ops().len()
        && canonicalize(a).ops() == canonicalize(b).ops()
}
