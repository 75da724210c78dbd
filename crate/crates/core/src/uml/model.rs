use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::circuit::ParamExpr;
use crate::diagnostics::ErrorCode;

/// The six stereotypes of the quantum circuit profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StereotypeKind {
    QuantumCircuit,
    Qubit,
    QuantumGate,
    ControlledQubit,
    Measure,
    Reset,
}

impl StereotypeKind {
    pub const ALL: [StereotypeKind; 6] = [
        StereotypeKind::QuantumCircuit,
        StereotypeKind::Qubit,
        StereotypeKind::QuantumGate,
        StereotypeKind::ControlledQubit,
        StereotypeKind::Measure,
        StereotypeKind::Reset,
    ];

    /// Display name, as written between guillemets.
    pub fn external_name(self) -> &'static str {
        match self {
            StereotypeKind::QuantumCircuit => "quantum circuit",
            StereotypeKind::Qubit => "qubit",
            StereotypeKind::QuantumGate => "quantum gate",
            StereotypeKind::ControlledQubit => "controlled qubit",
            StereotypeKind::Measure => "measure",
            StereotypeKind::Reset => "reset",
        }
    }

    /// Element name inside the profile namespace.
    pub fn xmi_name(self) -> &'static str {
        match self {
            StereotypeKind::QuantumCircuit => "quantumCircuit",
            StereotypeKind::Qubit => "qubit",
            StereotypeKind::QuantumGate => "quantumGate",
            StereotypeKind::ControlledQubit => "controlledQubit",
            StereotypeKind::Measure => "measure",
            StereotypeKind::Reset => "reset",
        }
    }

    pub fn from_xmi_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.xmi_name() == name)
    }

    /// Metaclasses this stereotype may extend.
    pub fn extends(self) -> &'static [&'static str] {
        match self {
            StereotypeKind::QuantumCircuit => &["Activity"],
            StereotypeKind::Qubit => &["ActivityPartition"],
            StereotypeKind::QuantumGate => &["CallOperationAction", "AcceptEventAction"],
            StereotypeKind::ControlledQubit => &["SendSignalAction"],
            StereotypeKind::Measure | StereotypeKind::Reset => &["ValueSpecificationAction"],
        }
    }
}

impl fmt::Display for StereotypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<{}>>", self.external_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    InitialNode,
    ActivityFinalNode,
    CallOperationAction,
    SendSignalAction,
    AcceptEventAction,
    ValueSpecificationAction,
    ForkNode,
    JoinNode,
    DataStoreNode,
}

impl NodeKind {
    pub const ALL: [NodeKind; 9] = [
        NodeKind::InitialNode,
        NodeKind::ActivityFinalNode,
        NodeKind::CallOperationAction,
        NodeKind::SendSignalAction,
        NodeKind::AcceptEventAction,
        NodeKind::ValueSpecificationAction,
        NodeKind::ForkNode,
        NodeKind::JoinNode,
        NodeKind::DataStoreNode,
    ];

    pub fn metaclass(self) -> &'static str {
        match self {
            NodeKind::InitialNode => "InitialNode",
            NodeKind::ActivityFinalNode => "ActivityFinalNode",
            NodeKind::CallOperationAction => "CallOperationAction",
            NodeKind::SendSignalAction => "SendSignalAction",
            NodeKind::AcceptEventAction => "AcceptEventAction",
            NodeKind::ValueSpecificationAction => "ValueSpecificationAction",
            NodeKind::ForkNode => "ForkNode",
            NodeKind::JoinNode => "JoinNode",
            NodeKind::DataStoreNode => "DataStoreNode",
        }
    }

    pub fn from_metaclass(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.metaclass() == name)
    }

    /// Action nodes live in exactly one partition; all others in none.
    pub fn is_action(self) -> bool {
        matches!(
            self,
            NodeKind::CallOperationAction
                | NodeKind::SendSignalAction
                | NodeKind::AcceptEventAction
                | NodeKind::ValueSpecificationAction
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    ControlFlow,
    Constraint,
    ObjectFlow,
}

impl EdgeKind {
    pub fn metaclass(self) -> &'static str {
        match self {
            EdgeKind::ControlFlow => "ControlFlow",
            EdgeKind::Constraint => "Constraint",
            EdgeKind::ObjectFlow => "ObjectFlow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateInfo {
    pub mnemonic: String,
    pub params: Vec<ParamExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureInfo {
    pub register: String,
    pub bit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub name: String,
    pub partition: Option<String>,
    pub gate_info: Option<GateInfo>,
    pub measure_info: Option<MeasureInfo>,
    /// Capacity of a data store (the classical register size).
    pub upper_bound: Option<usize>,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind,
            name: name.into(),
            partition: None,
            gate_info: None,
            measure_info: None,
            upper_bound: None,
        }
    }

    pub fn in_partition(mut self, partition: impl Into<String>) -> Self {
        self.partition = Some(partition.into());
        self
    }

    pub fn with_gate(mut self, mnemonic: impl Into<String>, params: Vec<ParamExpr>) -> Self {
        self.gate_info = Some(GateInfo {
            mnemonic: mnemonic.into(),
            params,
        });
        self
    }

    pub fn with_measure(mut self, register: impl Into<String>, bit: usize) -> Self {
        self.measure_info = Some(MeasureInfo {
            register: register.into(),
            bit,
        });
        self
    }

    pub fn with_upper_bound(mut self, bound: usize) -> Self {
        self.upper_bound = Some(bound);
        self
    }

    /// Gate mnemonic from the gate info, falling back to the node name.
    pub fn mnemonic(&self) -> &str {
        self.gate_info
            .as_ref()
            .map_or(self.name.as_str(), |g| g.mnemonic.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub kind: EdgeKind,
    pub source: String,
    pub target: String,
    pub label: Option<String>,
    /// Lane a control flow belongs to, when it runs inside one.
    pub partition: Option<String>,
}

impl Edge {
    pub fn new(
        id: impl Into<String>,
        kind: EdgeKind,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            kind,
            source: source.into(),
            target: target.into(),
            label: None,
            partition: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn in_partition(mut self, partition: impl Into<String>) -> Self {
        self.partition = Some(partition.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StereotypeApplication {
    pub base: String,
    pub kind: StereotypeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("id `{0}` is already used")]
    DuplicateId(String),
    #[error("`{0}` does not refer to a known element")]
    DanglingRef(String),
    #[error("action node `{0}` needs a partition")]
    PartitionRequired(String),
    #[error("node `{0}` must not be placed in a partition")]
    PartitionForbidden(String),
    #[error("element `{0}` already has a stereotype")]
    DuplicateStereotype(String),
}

impl ModelError {
    pub fn code(&self) -> ErrorCode {
        match self {
            ModelError::DuplicateId(_) => ErrorCode::DupId,
            ModelError::DanglingRef(_) => ErrorCode::DanglingRef,
            ModelError::PartitionRequired(_) => ErrorCode::PartitionRequired,
            ModelError::PartitionForbidden(_) => ErrorCode::PartitionForbidden,
            ModelError::DuplicateStereotype(_) => ErrorCode::DupStereotype,
        }
    }
}

/// Activity diagram with profile stereotype applications.
///
/// Builders keep the structural invariants (unique ids, resolvable
/// references, partition placement, one stereotype per element). Profile
/// conformance is checked separately by [`validate`](super::validate).
#[derive(Debug, Clone)]
pub struct UmlModel {
    activity: Activity,
    partitions: Vec<Partition>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    stereotypes: Vec<StereotypeApplication>,
    index: HashMap<String, Slot>,
    applied: HashMap<String, StereotypeKind>,
    outgoing: HashMap<String, Vec<usize>>,
    incoming: HashMap<String, Vec<usize>>,
}

/// Position of an element in its owning list.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Activity,
    Partition(usize),
    Node(usize),
    Edge(usize),
}

impl PartialEq for UmlModel {
    fn eq(&self, other: &Self) -> bool {
        self.activity == other.activity
            && self.partitions == other.partitions
            && self.nodes == other.nodes
            && self.edges == other.edges
            && self.stereotypes == other.stereotypes
    }
}

impl Eq for UmlModel {}

impl UmlModel {
    pub fn new(activity_id: impl Into<String>, name: impl Into<String>) -> Self {
        let activity = Activity {
            id: activity_id.into(),
            name: name.into(),
        };
        Self {
            index: HashMap::from([(activity.id.clone(), Slot::Activity)]),
            activity,
            partitions: Vec::new(),
            nodes: Vec::new(),
            edges: Vec::new(),
            stereotypes: Vec::new(),
            applied: HashMap::new(),
            outgoing: HashMap::new(),
            incoming: HashMap::new(),
        }
    }

    fn reindex(&mut self) {
        self.index.clear();
        self.index.insert(self.activity.id.clone(), Slot::Activity);
        for (i, p) in self.partitions.iter().enumerate() {
            self.index.insert(p.id.clone(), Slot::Partition(i));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            self.index.insert(n.id.clone(), Slot::Node(i));
        }
        self.outgoing.clear();
        self.incoming.clear();
        for (i, e) in self.edges.iter().enumerate() {
            self.index.insert(e.id.clone(), Slot::Edge(i));
            self.outgoing.entry(e.source.clone()).or_default().push(i);
            self.incoming.entry(e.target.clone()).or_default().push(i);
        }
        self.applied = self.stereotypes.iter().map(|s| (s.base.clone(), s.kind)).collect();
    }

    pub fn activity(&self) -> &Activity {
        &self.activity
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn stereotypes(&self) -> &[StereotypeApplication] {
        &self.stereotypes
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        match self.index.get(id) {
            Some(Slot::Node(i)) => Some(&self.nodes[*i]),
            _ => None,
        }
    }

    pub fn partition(&self, id: &str) -> Option<&Partition> {
        match self.index.get(id) {
            Some(Slot::Partition(i)) => Some(&self.partitions[*i]),
            _ => None,
        }
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        match self.index.get(id) {
            Some(Slot::Edge(i)) => Some(&self.edges[*i]),
            _ => None,
        }
    }

    pub fn stereotype_of(&self, id: &str) -> Option<StereotypeKind> {
        self.applied.get(id).copied()
    }

    /// UML metaclass of the element with this id.
    pub fn metaclass_of(&self, id: &str) -> Option<&'static str> {
        Some(match self.index.get(id)? {
            Slot::Activity => "Activity",
            Slot::Partition(_) => "ActivityPartition",
            Slot::Node(i) => self.nodes[*i].kind.metaclass(),
            Slot::Edge(i) => self.edges[*i].kind.metaclass(),
        })
    }

    fn contains_id(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    fn fresh(&self, id: &str) -> Result<(), ModelError> {
        if self.contains_id(id) {
            Err(ModelError::DuplicateId(id.to_string()))
        } else {
            Ok(())
        }
    }

    fn partition_ref(&self, id: &str) -> Result<(), ModelError> {
        if self.partition(id).is_some() {
            Ok(())
        } else {
            Err(ModelError::DanglingRef(id.to_string()))
        }
    }

    pub fn add_partition(
        &mut self,
        id: impl Into<String>,
        name: impl Into<String>,
    ) -> Result<(), ModelError> {
        let id = id.into();
        self.fresh(&id)?;
        self.index.insert(id.clone(), Slot::Partition(self.partitions.len()));
        self.partitions.push(Partition {
            id,
            name: name.into(),
        });
        Ok(())
    }

    pub fn add_node(&mut self, node: Node) -> Result<(), ModelError> {
        self.fresh(&node.id)?;
        match (&node.partition, node.kind.is_action()) {
            (None, true) => return Err(ModelError::PartitionRequired(node.id)),
            (Some(_), false) => return Err(ModelError::PartitionForbidden(node.id)),
            (Some(p), true) => self.partition_ref(p)?,
            (None, false) => {}
        }
        self.index.insert(node.id.clone(), Slot::Node(self.nodes.len()));
        self.nodes.push(node);
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<(), ModelError> {
        self.fresh(&edge.id)?;
        for end in [&edge.source, &edge.target] {
            if self.node(end).is_none() {
                return Err(ModelError::DanglingRef(end.clone()));
            }
        }
        if let Some(p) = &edge.partition {
            self.partition_ref(p)?;
        }
        let i = self.edges.len();
        self.index.insert(edge.id.clone(), Slot::Edge(i));
        self.outgoing.entry(edge.source.clone()).or_default().push(i);
        self.incoming.entry(edge.target.clone()).or_default().push(i);
        self.edges.push(edge);
        Ok(())
    }

    pub fn apply_stereotype(
        &mut self,
        kind: StereotypeKind,
        base: impl Into<String>,
    ) -> Result<(), ModelError> {
        let base = base.into();
        if !self.contains_id(&base) {
            return Err(ModelError::DanglingRef(base));
        }
        if self.stereotype_of(&base).is_some() {
            return Err(ModelError::DuplicateStereotype(base));
        }
        self.applied.insert(base.clone(), kind);
        self.stereotypes.push(StereotypeApplication { base, kind });
        Ok(())
    }

    pub fn remove_edge(&mut self, id: &str) -> Option<Edge> {
        let pos = self.edges.iter().position(|e| e.id == id)?;
        let edge = self.edges.remove(pos);
        self.reindex();
        Some(edge)
    }

    pub fn remove_stereotype(&mut self, base: &str) -> Option<StereotypeKind> {
        let pos = self.stereotypes.iter().position(|s| s.base == base)?;
        self.applied.remove(base);
        Some(self.stereotypes.remove(pos).kind)
    }

    /// Points an existing edge at a different target node.
    pub fn retarget_edge(&mut self, id: &str, target: &str) -> Result<(), ModelError> {
        if self.node(target).is_none() {
            return Err(ModelError::DanglingRef(target.to_string()));
        }
        let edge = self
            .edges
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or_else(|| ModelError::DanglingRef(id.to_string()))?;
        edge.target = target.to_string();
        self.reindex();
        Ok(())
    }

    pub fn set_gate_info(&mut self, node: &str, info: GateInfo) -> Result<(), ModelError> {
        let n = self
            .nodes
            .iter_mut()
            .find(|n| n.id == node)
            .ok_or_else(|| ModelError::DanglingRef(node.to_string()))?;
        n.name = info.mnemonic.clone();
        n.gate_info = Some(info);
        Ok(())
    }

    /// Copy of the model with ids `e1`, `e2`, ... assigned in the order
    /// activity, partitions, nodes, edges.
    pub fn renumbered(&self) -> UmlModel {
        let mut map: HashMap<&str, String> = HashMap::new();
        let ids = std::iter::once(self.activity.id.as_str())
            .chain(self.partitions.iter().map(|p| p.id.as_str()))
            .chain(self.nodes.iter().map(|n| n.id.as_str()))
            .chain(self.edges.iter().map(|e| e.id.as_str()));
        for (i, id) in ids.enumerate() {
            map.insert(id, format!("e{}", i + 1));
        }
        let m = |id: &str| map[id].clone();
        let mut out = UmlModel {
            activity: Activity {
                id: m(&self.activity.id),
                name: self.activity.name.clone(),
            },
            partitions: self
                .partitions
                .iter()
                .map(|p| Partition {
                    id: m(&p.id),
                    name: p.name.clone(),
                })
                .collect(),
            nodes: self
                .nodes
                .iter()
                .map(|n| Node {
                    id: m(&n.id),
                    partition: n.partition.as_deref().map(m),
                    ..n.clone()
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: m(&e.id),
                    source: m(&e.source),
                    target: m(&e.target),
                    partition: e.partition.as_deref().map(m),
                    ..e.clone()
                })
                .collect(),
            stereotypes: self
                .stereotypes
                .iter()
                .map(|s| StereotypeApplication {
                    base: m(&s.base),
                    kind: s.kind,
                })
                .collect(),
            index: HashMap::new(),
            applied: HashMap::new(),
            outgoing: HashMap::new(),
            incoming: HashMap::new(),
        };
        out.reindex();
        out
    }

    /// Edges of `kind` leaving `node`, in model order.
    pub fn outgoing(&self, node: &str, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.adjacent(&self.outgoing, node, kind)
    }

    /// Edges of `kind` entering `node`, in model order.
    pub fn incoming(&self, node: &str, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.adjacent(&self.incoming, node, kind)
    }

    fn adjacent<'a>(
        &'a self,
        map: &'a HashMap<String, Vec<usize>>,
        node: &str,
        kind: EdgeKind,
    ) -> impl Iterator<Item = &'a Edge> {
        map.get(node)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
            .filter(move |e| e.kind == kind)
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.kind == kind)
    }

    /// Action nodes of a partition in lane order (following control flow
    /// from the lane's first action).
    pub fn partition_chain(&self, partition: &str) -> Vec<&Node> {
        let in_lane: HashSet<&str> = self
            .nodes
            .iter()
            .filter(|n| n.partition.as_deref() == Some(partition))
            .map(|n| n.id.as_str())
            .collect();
        // order by a topological walk of the whole control flow graph so
        // that barrier hops between lane actions are followed too
        let order = control_flow_order(self);
        order
            .into_iter()
            .filter(|id| in_lane.contains(id.as_str()))
            .filter_map(|id| self.node(&id))
            .collect()
    }
}

/// Node ids in a deterministic topological order of the control flow graph
/// (Kahn's algorithm, ties by position in the node list). Nodes on a cycle
/// are left out.
pub fn control_flow_order(model: &UmlModel) -> Vec<String> {
    let index: HashMap<&str, usize> = model
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();
    let mut indegree = vec![0usize; model.nodes.len()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); model.nodes.len()];
    for e in model.edges_of_kind(EdgeKind::ControlFlow) {
        let (s, t) = (index[e.source.as_str()], index[e.target.as_str()]);
        succ[s].push(t);
        indegree[t] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..model.nodes.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::new();
    while let Some(n) = ready.pop_first() {
        order.push(model.nodes[n].id.clone());
        for &s in &succ[n] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.insert(s);
            }
        }
    }
    order
}

/// Forward closure over control and object flows from every initial node.
pub fn reachable_from_initial(model: &UmlModel) -> BTreeSet<String> {
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in model
        .edges
        .iter()
        .filter(|e| matches!(e.kind, EdgeKind::ControlFlow | EdgeKind::ObjectFlow))
    {
        adj.entry(&e.source).or_default().push(&e.target);
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut queue: VecDeque<&str> = model
        .nodes_of_kind(NodeKind::InitialNode)
        .map(|n| n.id.as_str())
        .collect();
    while let Some(id) = queue.pop_front() {
        if !seen.insert(id.to_string()) {
            continue;
        }
        queue.extend(adj.get(id).into_iter().flatten().copied());
    }
    seen
}
