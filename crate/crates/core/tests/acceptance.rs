//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use qcuml_core::uml::{EdgeKind, NodeKind, StereotypeKind};
use qcuml_core::{
    circuit_to_uml, circuits_equivalent, emit, parse_circuit, read_xmi, uml_to_circuit, validate, write_plantuml,
    write_xmi, Circuit, QuantumOp, RuleId,
};

const CORPUS_SIZE: u64 = 1000;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn teleport_round_trip() -> Outcome {
    let start = Instant::now();
    let c = parse_circuit(TELEPORT).map_err(|e| format!("parse failed: {e:?}"))?;
    let count = |f: fn(&QuantumOp) -> bool| c.ops().iter().filter(|op| f(op)).count();
    let census = (
        c.num_qubits(),
        c.ops().len(),
        count(|op| matches!(op, QuantumOp::Gate { .. })),
        count(|op| matches!(op, QuantumOp::ControlledGate { .. })),
        count(|op| matches!(op, QuantumOp::Measure { .. })),
        count(|op| matches!(op, QuantumOp::Barrier { .. })),
    );
    check(census == (3, 10, 2, 4, 2, 2), format!("circuit census {census:?}"))?;
    let xmi = write_xmi(&circuit_to_uml(&c));
    let model = read_xmi(&xmi).map_err(|e| format!("read_xmi: {e:?}"))?.model;
    let text = emit(&uml_to_circuit(&model).map_err(|e| format!("uml_to_circuit: {e:?}"))?);
    let back = parse_circuit(&text).map_err(|e| format!("regenerated text does not parse: {e:?}"))?;
    let elapsed = start.elapsed();
    check(circuits_equivalent(&c, &back), "regenerated circuit is not equivalent")?;
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("3 qubits, 10 ops, equivalent after qasm2uml/uml2qasm in {elapsed:.2?}"))
}

fn teleport_census() -> Outcome {
    let m = teleport_model();
    let qubit_lanes = m
        .partitions()
        .iter()
        .filter(|p| m.stereotype_of(&p.id) == Some(StereotypeKind::Qubit))
        .count();
    check(qubit_lanes == 3, format!("{qubit_lanes} qubit partitions"))?;
    let pairs = m
        .edges_of_kind(EdgeKind::Constraint)
        .filter(|e| {
            m.node(&e.source).map(|n| n.kind) == Some(NodeKind::SendSignalAction)
                && m.node(&e.target).map(|n| n.kind) == Some(NodeKind::AcceptEventAction)
        })
        .count();
    check(pairs == 4, format!("{pairs} send/accept constraint pairs"))?;
    let measures_to_stores = m
        .nodes()
        .iter()
        .filter(|n| m.stereotype_of(&n.id) == Some(StereotypeKind::Measure))
        .filter(|n| {
            m.edges_of_kind(EdgeKind::ObjectFlow)
                .filter(|e| e.source == n.id)
                .any(|e| m.node(&e.target).is_some_and(|t| t.kind == NodeKind::DataStoreNode))
        })
        .count();
    check(measures_to_stores == 2, format!("{measures_to_stores} measures feeding a store"))?;
    // interior barrier: a join whose single successor is a fork
    let barrier_pairs = m
        .nodes_of_kind(NodeKind::JoinNode)
        .filter(|j| {
            m.edges_of_kind(EdgeKind::ControlFlow)
                .filter(|e| e.source == j.id)
                .all(|e| m.node(&e.target).is_some_and(|t| t.kind == NodeKind::ForkNode))
        })
        .count();
    check(barrier_pairs == 2, format!("{barrier_pairs} join+fork barrier pairs"))?;
    let initial = m.nodes_of_kind(NodeKind::InitialNode).count();
    let last = m.nodes_of_kind(NodeKind::ActivityFinalNode).count();
    check(initial == 1 && last == 1, format!("{initial} initial, {last} final"))?;
    let diags = validate(&m);
    check(diags.is_empty(), format!("{} diagnostics", diags.len()))?;
    Ok("3 qubit lanes, 4 constraint pairs, 2 measures, 2 barriers, 1 initial, 1 final, no diagnostics".into())
}

fn corpus() -> Vec<Circuit> {
    (0..CORPUS_SIZE).map(random_circuit).collect()
}

fn property_suite(corpus: &[Circuit]) -> Outcome {
    let start = Instant::now();
    let mut seen = BTreeSet::new();
    for c in corpus {
        check(c.num_qubits() <= 5 && c.ops().len() <= 30, format!("{} is out of bounds", c.name()))?;
        for op in c.ops() {
            seen.insert(op.mnemonic().unwrap_or("?"));
        }
        let m = circuit_to_uml(c);
        let diags = validate(&m);
        check(diags.is_empty(), format!("(a) {}: {}", c.name(), diags.len()))?;
        let back = uml_to_circuit(&m).map_err(|e| format!("(b) {}: {e:?}", c.name()))?;
        check(circuits_equivalent(c, &back), format!("(b) {} not equivalent", c.name()))?;
        let reparsed = parse_circuit(&emit(c)).map_err(|e| format!("(c) {}: {e:?}", c.name()))?;
        check(circuits_equivalent(c, &reparsed), format!("(c) {} not equivalent", c.name()))?;
    }
    let elapsed = start.elapsed();
    for needed in ["barrier", "measure", "reset", "ccx", "cx", "u3"] {
        check(seen.contains(needed), format!("corpus never uses {needed}"))?;
    }
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} circuits, 0 failures, {} distinct ops, {elapsed:.2?}", corpus.len(), seen.len()))
}

fn mutation_coverage() -> Outcome {
    for rule in RuleId::RULES {
        let fired: BTreeSet<RuleId> = validate(&mutate(rule)).into_iter().map(|d| d.rule).collect();
        check(fired.contains(&rule), format!("{rule} mutation fired {fired:?}"))?;
    }
    let empty = Circuit::with_registers("empty", &[("q", 1)], &[]).unwrap();
    for (name, m) in [("teleport", teleport_model()), ("empty", circuit_to_uml(&empty))] {
        let diags = validate(&m);
        check(diags.is_empty(), format!("valid fixture {name} fired {} diagnostics", diags.len()))?;
    }
    Ok("R1..R11 each triggered by a scripted mutation; valid fixtures clean".into())
}

fn serialization_fixed_point(corpus: &[Circuit]) -> Outcome {
    for c in corpus.iter().chain([teleport()].iter()) {
        let m = circuit_to_uml(c);
        let text = write_xmi(&m);
        let read = read_xmi(&text).map_err(|e| format!("{}: {e:?}", c.name()))?;
        check(read.model == m, format!("{}: model differs after reading", c.name()))?;
        check(write_xmi(&read.model) == text, format!("{}: bytes differ", c.name()))?;
    }
    Ok(format!("{} models read back equal and re-serialize byte-identically", corpus.len() + 1))
}

fn plantuml_counts() -> Outcome {
    let text = write_plantuml(&teleport_model()).map_err(|e| format!("{e:?}"))?;
    let headers = text.lines().filter(|l| l.starts_with('|') && l.ends_with('|')).count();
    let start = text.lines().filter(|l| l.trim() == "start").count();
    let stop = text.lines().filter(|l| l.trim() == "stop").count();
    let notes = text.lines().filter(|l| l.trim_start().starts_with("note ")).count();
    let counts = (headers, start, stop, notes);
    check(counts == (3, 1, 1, 4), format!("(headers, start, stop, notes) = {counts:?}"))?;
    Ok("3 swimlane headers, 1 start, 1 stop, 4 constraint notes".into())
}

fn main() -> ExitCode {
    let corpus = corpus();
    let results: [(&str, Outcome); 6] = [
        ("1 teleport golden round trip", teleport_round_trip()),
        ("2 teleport model census", teleport_census()),
        ("3 property suite", property_suite(&corpus)),
        ("4 validator mutation coverage", mutation_coverage()),
        ("5 serialization fixed point", serialization_fixed_point(&corpus)),
        ("6 plantuml render counts", plantuml_counts()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
