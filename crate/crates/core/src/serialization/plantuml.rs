//! PlantUML activity diagram text with swimlanes.

use std::fmt::Write;

use crate::diagnostics::{ErrorCode, Severity};
use crate::uml::{control_flow_order, validate, Diagnostic, EdgeKind, Node, NodeKind, StereotypeKind, UmlModel};

struct Renderer<'m> {
    model: &'m UmlModel,
    out: String,
}

impl<'m> Renderer<'m> {
    fn line(&mut self, indent: usize, text: &str) {
        let _ = writeln!(self.out, "{:width$}{text}", "", width = indent * 2);
    }

    fn lane_name(&self, partition: &str) -> &'m str {
        self.model.partition(partition).map_or("", |p| p.name.as_str())
    }

    fn successors(&self, id: &str) -> Vec<&'m str> {
        self.model
            .outgoing(id, EdgeKind::ControlFlow)
            .map(|e| e.target.as_str())
            .collect()
    }

    fn action_label(&self, node: &Node) -> String {
        let stereotype = self
            .model
            .stereotype_of(&node.id)
            .map_or(String::new(), |s| format!(" \u{ab}{}\u{bb}", s.external_name()));
        let text = match (node.kind, self.model.stereotype_of(&node.id)) {
            (NodeKind::SendSignalAction, _) => "control".to_string(),
            (NodeKind::ValueSpecificationAction, Some(StereotypeKind::Measure)) => {
                match self.model.outgoing(&node.id, EdgeKind::ObjectFlow).next() {
                    Some(flow) => format!(
                        "measure \u{2192} {}",
                        flow.label.clone().unwrap_or_else(|| self.model.node(&flow.target).map_or(String::new(), |t| t.name.clone()))
                    ),
                    None => "measure".to_string(),
                }
            }
            _ => match &node.gate_info {
                Some(g) if !g.params.is_empty() => {
                    let params: Vec<String> = g.params.iter().map(|p| p.to_string()).collect();
                    format!("{}({})", g.mnemonic, params.join(", "))
                }
                _ => node.mnemonic().to_string(),
            },
        };
        format!(":{text}{stereotype};")
    }

    /// Emits the actions of one lane starting at `first`, stopping at the
    /// first control node.
    fn chain(&mut self, indent: usize, first: &str) {
        let mut current = first;
        while let Some(node) = self.model.node(current).filter(|n| n.kind.is_action()) {
            let label = self.action_label(node);
            self.line(indent, &label);
            for c in self.model.incoming(&node.id, EdgeKind::Constraint) {
                let lane = self
                    .model
                    .node(&c.source)
                    .and_then(|s| s.partition.as_deref())
                    .map_or("", |p| self.lane_name(p));
                self.line(indent, &format!("note right: controlled by {lane}"));
            }
            match self.successors(current).first() {
                Some(next) => current = next,
                None => break,
            }
        }
    }

    fn branch_lane(&self, fork: &str, target: &str) -> Option<&'m str> {
        let edge = self
            .model
            .outgoing(fork, EdgeKind::ControlFlow)
            .find(|e| e.target == target)?;
        edge.partition
            .as_deref()
            .or_else(|| self.model.node(target).and_then(|n| n.partition.as_deref()))
            .map(|p| self.lane_name(p))
    }

    fn fork_region(&mut self, fork: &str) {
        self.line(0, "fork");
        let mut branches: Vec<(Option<&str>, &str)> = self
            .successors(fork)
            .into_iter()
            .map(|t| (self.branch_lane(fork, t), t))
            .collect();
        let position = |lane: Option<&str>| {
            let lanes = self.model.partitions();
            lane.and_then(|l| lanes.iter().position(|p| p.name == l))
                .unwrap_or(lanes.len())
        };
        branches.sort_by_key(|(lane, _)| position(*lane));
        for (i, (lane, target)) in branches.into_iter().enumerate() {
            if i > 0 {
                self.line(0, "fork again");
            }
            if let Some(lane) = lane {
                self.line(1, &format!("|{lane}|"));
            }
            self.chain(1, target);
        }
        self.line(0, "end fork");
    }
}

/// Renders a conformant model as a PlantUML activity diagram, one swimlane
/// per qubit. Non-conformant models are rejected with E-INVALID-MODEL
/// followed by the validation diagnostics.
pub fn write_plantuml(model: &UmlModel) -> Result<String, Vec<Diagnostic>> {
    let diagnostics = validate(model);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        let mut errors = vec![Diagnostic::code(
            ErrorCode::InvalidModel,
            vec![model.activity().id.clone()],
            "model does not conform to the quantum circuit profile",
        )];
        errors.extend(diagnostics);
        return Err(errors);
    }
    let mut r = Renderer {
        model,
        out: String::new(),
    };
    r.line(0, "@startuml");
    if !model.activity().name.is_empty() {
        r.line(0, &format!("title {}", model.activity().name));
    }
    for p in model.partitions() {
        r.line(0, &format!("|{}|", p.name));
    }
    r.line(0, "start");
    let forks: Vec<&str> = control_flow_order(model)
        .into_iter()
        .filter_map(|id| model.node(&id))
        .filter(|n| n.kind == NodeKind::ForkNode)
        .map(|n| n.id.as_str())
        .collect();
    if forks.is_empty() {
        // a single lane runs straight from the initial node
        if let Some(initial) = model.nodes_of_kind(NodeKind::InitialNode).next() {
            if let Some(first) = r.successors(&initial.id).first().copied() {
                r.chain(0, first);
            }
        }
    }
    for fork in forks {
        r.fork_region(fork);
    }
    r.line(0, "stop");
    r.line(0, "@enduml");
    Ok(r.out)
}
