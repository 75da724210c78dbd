//! Profile well-formedness rules R1..R11.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::model::{EdgeKind, Node, NodeKind, StereotypeKind, UmlModel};
use crate::diagnostics::{ErrorCode, Severity};
use crate::gates;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    Code(ErrorCode),
}

impl RuleId {
    pub const RULES: [RuleId; 11] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::Code(c) => c.as_str(),
        }
    }

    pub fn is_profile_rule(&self) -> bool {
        !matches!(self, RuleId::Code(_))
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub severity: Severity,
    pub elements: Vec<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(rule: RuleId, elements: Vec<String>, message: impl Into<String>) -> Self {
        Self {
            rule,
            severity: Severity::Error,
            elements,
            message: message.into(),
        }
    }

    pub fn warning(rule: RuleId, elements: Vec<String>, message: impl Into<String>) -> Self {
        Self {
            rule,
            severity: Severity::Warning,
            elements,
            message: message.into(),
        }
    }

    pub fn code(code: ErrorCode, elements: Vec<String>, message: impl Into<String>) -> Self {
        Self::error(RuleId::Code(code), elements, message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.rule)?;
        if !self.elements.is_empty() {
            write!(f, " [{}]", self.elements.join(", "))?;
        }
        write!(f, ": {}", self.message)
    }
}

struct Ctx<'a> {
    model: &'a UmlModel,
    out: Vec<Diagnostic>,
    cf_out: HashMap<&'a str, Vec<&'a str>>,
    cf_in: HashMap<&'a str, Vec<&'a str>>,
}

impl<'a> Ctx<'a> {
    fn new(model: &'a UmlModel) -> Self {
        let mut cf_out: HashMap<&str, Vec<&str>> = HashMap::new();
        let mut cf_in: HashMap<&str, Vec<&str>> = HashMap::new();
        for e in model.edges_of_kind(EdgeKind::ControlFlow) {
            cf_out.entry(&e.source).or_default().push(&e.target);
            cf_in.entry(&e.target).or_default().push(&e.source);
        }
        Self {
            model,
            out: Vec::new(),
            cf_out,
            cf_in,
        }
    }

    fn report(&mut self, rule: RuleId, elements: &[&str], message: impl Into<String>) {
        self.out.push(Diagnostic::error(
            rule,
            elements.iter().map(|s| s.to_string()).collect(),
            message,
        ));
    }

    fn outs(&self, id: &str) -> &[&'a str] {
        self.cf_out.get(id).map_or(&[], |v| v.as_slice())
    }

    fn ins(&self, id: &str) -> &[&'a str] {
        self.cf_in.get(id).map_or(&[], |v| v.as_slice())
    }

    fn has(&self, id: &str, kind: StereotypeKind) -> bool {
        self.model.stereotype_of(id) == Some(kind)
    }
}

/// Checks the model against every profile rule. Returns an empty list iff
/// the model conforms; diagnostics are sorted by rule then element ids.
pub fn validate(model: &UmlModel) -> Vec<Diagnostic> {
    let mut cx = Ctx::new(model);
    r1_activity(&mut cx);
    r2_partitions(&mut cx);
    r3_initial_final(&mut cx);
    r4_constraints(&mut cx);
    r5_connected(&mut cx);
    r6_fork_join(&mut cx);
    r7_value_actions(&mut cx);
    r8_lane_chains(&mut cx);
    r9_metaclasses(&mut cx);
    r10_acyclic(&mut cx);
    r11_call_actions(&mut cx);
    let mut out = cx.out;
    out.sort();
    out.dedup();
    out
}

fn r1_activity(cx: &mut Ctx) {
    let id = cx.model.activity().id.as_str();
    if !cx.has(id, StereotypeKind::QuantumCircuit) {
        cx.report(RuleId::R1, &[id], "activity does not bear <<quantum circuit>>");
    }
}

fn r2_partitions(cx: &mut Ctx) {
    if cx.model.partitions().is_empty() {
        let id = cx.model.activity().id.as_str();
        cx.report(RuleId::R2, &[id], "activity has no qubit partitions");
    }
    for p in cx.model.partitions() {
        if !cx.has(&p.id, StereotypeKind::Qubit) {
            cx.report(RuleId::R2, &[&p.id], format!("partition `{}` does not bear <<qubit>>", p.name));
        }
    }
}

fn r3_initial_final(cx: &mut Ctx) {
    for (kind, what) in [
        (NodeKind::InitialNode, "initial node"),
        (NodeKind::ActivityFinalNode, "activity final node"),
    ] {
        let ids: Vec<&str> = cx.model.nodes_of_kind(kind).map(|n| n.id.as_str()).collect();
        if ids.len() != 1 {
            let elements = if ids.is_empty() {
                vec![cx.model.activity().id.as_str()]
            } else {
                ids.clone()
            };
            cx.report(
                RuleId::R3,
                &elements,
                format!("expected exactly one {what}, found {}", ids.len()),
            );
        }
    }
}

fn r4_constraints(cx: &mut Ctx) {
    let model = cx.model;
    let mut incoming: HashMap<&str, usize> = HashMap::new();
    for e in model.edges_of_kind(EdgeKind::Constraint) {
        let source = model.node(&e.source).map(|n| n.kind);
        let target = model.node(&e.target).map(|n| n.kind);
        if source != Some(NodeKind::SendSignalAction) || target != Some(NodeKind::AcceptEventAction) {
            cx.report(
                RuleId::R4,
                &[&e.id],
                "constraint must link a send signal action to an accept event action",
            );
        }
        *incoming.entry(e.target.as_str()).or_default() += 1;
    }
    for send in model.nodes_of_kind(NodeKind::SendSignalAction) {
        if !cx.has(&send.id, StereotypeKind::ControlledQubit) {
            cx.report(RuleId::R4, &[&send.id], "send signal action does not bear <<controlled qubit>>");
        }
        let constraints: Vec<_> = model.outgoing(&send.id, EdgeKind::Constraint).collect();
        if constraints.len() != 1 {
            cx.report(
                RuleId::R4,
                &[&send.id],
                format!(
                    "controlled qubit must constrain exactly one gate, found {}",
                    constraints.len()
                ),
            );
            continue;
        }
        let edge = constraints[0];
        let Some(accept) = model.node(&edge.target) else {
            continue;
        };
        if accept.kind == NodeKind::AcceptEventAction && !cx.has(&accept.id, StereotypeKind::QuantumGate) {
            cx.report(
                RuleId::R4,
                &[&send.id, &accept.id],
                "constrained accept event action does not bear <<quantum gate>>",
            );
        }
        if accept.partition == send.partition {
            cx.report(
                RuleId::R4,
                &[&send.id, &accept.id],
                "control and target of a constraint share a partition",
            );
        }
    }
    for accept in model.nodes_of_kind(NodeKind::AcceptEventAction) {
        if incoming.get(accept.id.as_str()).copied().unwrap_or(0) == 0 {
            cx.report(RuleId::R4, &[&accept.id], "accept event action has no controlling constraint");
        }
    }
}

fn closure<'a>(starts: impl Iterator<Item = &'a str>, adj: &HashMap<&'a str, Vec<&'a str>>) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&str> = starts.collect();
    while let Some(id) = queue.pop_front() {
        if seen.insert(id) {
            queue.extend(adj.get(id).into_iter().flatten().copied());
        }
    }
    seen
}

fn r5_connected(cx: &mut Ctx) {
    let model = cx.model;
    let forward = closure(
        model.nodes_of_kind(NodeKind::InitialNode).map(|n| n.id.as_str()),
        &cx.cf_out,
    );
    let backward = closure(
        model.nodes_of_kind(NodeKind::ActivityFinalNode).map(|n| n.id.as_str()),
        &cx.cf_in,
    );
    for n in model.nodes().iter().filter(|n| n.kind != NodeKind::DataStoreNode) {
        if !forward.contains(n.id.as_str()) {
            cx.report(RuleId::R5, &[&n.id], format!("`{}` is not reachable from the initial node", n.name));
        }
        if !backward.contains(n.id.as_str()) {
            cx.report(RuleId::R5, &[&n.id], format!("`{}` does not reach the activity final node", n.name));
        }
    }
}

fn r6_fork_join(cx: &mut Ctx) {
    let model = cx.model;
    for n in model.nodes() {
        let (ins, outs) = (cx.ins(&n.id).len(), cx.outs(&n.id).len());
        match n.kind {
            NodeKind::ForkNode if ins != 1 || outs < 2 => cx.report(
                RuleId::R6,
                &[&n.id],
                format!("fork needs 1 incoming and at least 2 outgoing flows, has {ins} and {outs}"),
            ),
            NodeKind::JoinNode if ins < 2 || outs != 1 => cx.report(
                RuleId::R6,
                &[&n.id],
                format!("join needs at least 2 incoming and 1 outgoing flow, has {ins} and {outs}"),
            ),
            _ => {}
        }
    }

    // Fork/join nesting depth must be the same along every path into a node,
    // never negative, and back to zero at the final node.
    let mut depth: HashMap<&str, i64> = HashMap::new();
    let mut queue: VecDeque<(&str, i64)> = model
        .nodes_of_kind(NodeKind::InitialNode)
        .map(|n| (n.id.as_str(), 0))
        .collect();
    let mut flagged = BTreeSet::new();
    while let Some((id, d)) = queue.pop_front() {
        match depth.get(id) {
            Some(&known) if known != d => {
                flagged.insert(id);
                continue;
            }
            Some(_) => continue,
            None => {}
        }
        depth.insert(id, d);
        let Some(node) = model.node(id) else { continue };
        let next = match node.kind {
            NodeKind::ForkNode => d + 1,
            NodeKind::JoinNode => d - 1,
            _ => d,
        };
        if next < 0 {
            flagged.insert(id);
            continue;
        }
        for &s in cx.outs(id) {
            queue.push_back((s, next));
        }
    }
    for f in model.nodes_of_kind(NodeKind::ActivityFinalNode) {
        if depth.get(f.id.as_str()).is_some_and(|&d| d != 0) {
            flagged.insert(f.id.as_str());
        }
    }
    for id in flagged {
        cx.report(RuleId::R6, &[id], "fork and join nodes are unbalanced on paths through this node");
    }
}

fn r7_value_actions(cx: &mut Ctx) {
    let model = cx.model;
    for n in model.nodes_of_kind(NodeKind::ValueSpecificationAction) {
        match model.stereotype_of(&n.id) {
            Some(StereotypeKind::Measure) => {
                let flows: Vec<_> = model.outgoing(&n.id, EdgeKind::ObjectFlow).collect();
                let to_store = flows.len() == 1
                    && model
                        .node(&flows[0].target)
                        .is_some_and(|t| t.kind == NodeKind::DataStoreNode);
                if !to_store {
                    cx.report(
                        RuleId::R7,
                        &[&n.id],
                        "measure must have exactly one object flow into a data store",
                    );
                }
            }
            Some(StereotypeKind::Reset) => {}
            _ => cx.report(
                RuleId::R7,
                &[&n.id],
                "value specification action bears neither <<measure>> nor <<reset>>",
            ),
        }
    }
}

fn r8_lane_chains(cx: &mut Ctx) {
    let model = cx.model;
    for n in model.nodes().iter().filter(|n| n.kind.is_action()) {
        let (ins, outs) = (cx.ins(&n.id).len(), cx.outs(&n.id).len());
        if ins > 1 || outs > 1 {
            cx.report(
                RuleId::R8,
                &[&n.id],
                format!("lane branches or merges at `{}` ({ins} in, {outs} out)", n.name),
            );
        }
    }
    for e in model.edges_of_kind(EdgeKind::ControlFlow) {
        let (Some(s), Some(t)) = (model.node(&e.source), model.node(&e.target)) else {
            continue;
        };
        if s.kind.is_action() && t.kind.is_action() && s.partition != t.partition {
            cx.report(RuleId::R8, &[&e.id], "control flow jumps between partitions");
            continue;
        }
        if let Some(lane) = &e.partition {
            let off_lane = |n: &Node| n.kind.is_action() && n.partition.as_ref() != Some(lane);
            if off_lane(s) || off_lane(t) {
                cx.report(RuleId::R8, &[&e.id], "control flow partition disagrees with its action");
            }
        }
    }
}

fn r9_metaclasses(cx: &mut Ctx) {
    let model = cx.model;
    for s in model.stereotypes() {
        let metaclass = model.metaclass_of(&s.base).unwrap_or("?");
        if !s.kind.extends().contains(&metaclass) {
            cx.report(
                RuleId::R9,
                &[&s.base],
                format!("{} cannot be applied to a {metaclass}", s.kind),
            );
        }
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn r10_acyclic(cx: &mut Ctx) {
    let model = cx.model;
    let index: HashMap<&str, usize> = model
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect();
    let count = model.nodes().len();
    let mut parent: Vec<usize> = (0..count).collect();
    for e in model.edges_of_kind(EdgeKind::Constraint) {
        let (a, b) = (find(&mut parent, index[e.source.as_str()]), find(&mut parent, index[e.target.as_str()]));
        parent[a] = b;
    }
    let class: Vec<usize> = (0..count).map(|i| find(&mut parent, i)).collect();
    let mut indegree = vec![0usize; count];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); count];
    for e in model.edges_of_kind(EdgeKind::ControlFlow) {
        let (s, t) = (class[index[e.source.as_str()]], class[index[e.target.as_str()]]);
        succ[s].push(t);
        indegree[t] += 1;
    }
    let mut ready: Vec<usize> = (0..count).filter(|&c| class[c] == c && indegree[c] == 0).collect();
    while let Some(c) = ready.pop() {
        for &s in &succ[c] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(s);
            }
        }
    }
    let stuck: Vec<&str> = (0..count)
        .filter(|&i| indegree[class[i]] > 0)
        .map(|i| model.nodes()[i].id.as_str())
        .collect();
    if !stuck.is_empty() {
        cx.report(
            RuleId::R10,
            &stuck,
            "control flow has a cycle once each controlled gate is collapsed to one step",
        );
    }
}

fn r11_call_actions(cx: &mut Ctx) {
    let model = cx.model;
    for n in model.nodes_of_kind(NodeKind::CallOperationAction) {
        if !cx.has(&n.id, StereotypeKind::QuantumGate) {
            cx.report(RuleId::R11, &[&n.id], "call operation action does not bear <<quantum gate>>");
        }
        if gates::plain_gate(n.mnemonic()).is_none() {
            cx.report(
                RuleId::R11,
                &[&n.id],
                format!("`{}` is not a supported single-qubit gate", n.mnemonic()),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::teleport_model;
    use crate::uml::Edge;

    fn rules(diags: &[Diagnostic]) -> BTreeSet<RuleId> {
        diags.iter().map(|d| d.rule).collect()
    }

    fn cz_constraint(m: &UmlModel) -> (String, String) {
        let accept = m
            .nodes_of_kind(NodeKind::AcceptEventAction)
            .find(|n| n.mnemonic() == "z")
            .unwrap();
        let e = m
            .edges_of_kind(EdgeKind::Constraint)
            .find(|e| e.target == accept.id)
            .unwrap();
        (e.id.clone(), e.source.clone())
    }

    #[test]
    fn teleport_conforms() {
        assert_eq!(validate(&teleport_model()), vec![]);
    }

    #[test]
    fn deleted_cz_constraint_names_the_orphan_send() {
        let mut m = teleport_model();
        let (edge, send) = cz_constraint(&m);
        m.remove_edge(&edge);
        let diags = validate(&m);
        assert_eq!(rules(&diags), BTreeSet::from([RuleId::R4]));
        assert!(diags.iter().any(|d| d.elements == vec![send.clone()]));
    }

    #[test]
    fn second_initial_node() {
        let mut m = teleport_model();
        m.add_node(Node::new("extra", NodeKind::InitialNode, "initial")).unwrap();
        let found = rules(&validate(&m));
        assert!(found.contains(&RuleId::R3));
        assert!(found.iter().all(|r| matches!(r, RuleId::R3 | RuleId::R5)));
    }

    #[test]
    fn output_is_sorted_and_stable() {
        let mut m = teleport_model();
        m.remove_stereotype(&m.activity().id.clone());
        let p = m.partitions()[1].id.clone();
        m.remove_stereotype(&p);
        let first = validate(&m);
        assert_eq!(first, validate(&m));
        let mut sorted = first.clone();
        sorted.sort();
        assert_eq!(first, sorted);
        assert_eq!(first[0].rule, RuleId::R1);
        assert_eq!(first[1].rule, RuleId::R2);
    }

    #[test]
    fn cross_lane_action_flow() {
        let mut m = teleport_model();
        let h0 = m
            .nodes()
            .iter()
            .find(|n| n.kind == NodeKind::CallOperationAction && n.partition.as_deref() == Some("e2"))
            .unwrap()
            .id
            .clone();
        let x = m
            .nodes_of_kind(NodeKind::AcceptEventAction)
            .find(|n| n.partition.as_deref() == Some("e4"))
            .unwrap()
            .id
            .clone();
        m.add_edge(Edge::new("bad", EdgeKind::ControlFlow, h0, x)).unwrap();
        assert!(rules(&validate(&m)).contains(&RuleId::R8));
    }

    #[test]
    fn empty_model_has_no_lanes() {
        let mut m = UmlModel::new("a", "c");
        m.apply_stereotype(StereotypeKind::QuantumCircuit, "a").unwrap();
        m.add_node(Node::new("i", NodeKind::InitialNode, "initial")).unwrap();
        m.add_node(Node::new("f", NodeKind::ActivityFinalNode, "final")).unwrap();
        m.add_edge(Edge::new("x", EdgeKind::ControlFlow, "i", "f")).unwrap();
        assert_eq!(rules(&validate(&m)), BTreeSet::from([RuleId::R2]));
    }
}
