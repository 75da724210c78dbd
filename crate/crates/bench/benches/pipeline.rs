use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcuml_bench::{layered_circuit, layered_source};
use qcuml_core::{canonicalize, circuit_to_uml, emit, parse_circuit, read_xmi, uml_to_circuit, validate, write_xmi};

const SIZES: [(usize, usize); 3] = [(3, 4), (5, 20), (10, 50)];

fn forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("qasm_to_xmi");
    for (qubits, layers) in SIZES {
        let source = layered_source(qubits, layers);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{qubits}x{layers}")), &source, |b, s| {
            b.iter(|| write_xmi(&circuit_to_uml(&parse_circuit(black_box(s)).unwrap())))
        });
    }
    group.finish();
}

fn reverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("xmi_to_qasm");
    for (qubits, layers) in SIZES {
        let xmi = write_xmi(&circuit_to_uml(&layered_circuit(qubits, layers)));
        group.bench_with_input(BenchmarkId::from_parameter(format!("{qubits}x{layers}")), &xmi, |b, x| {
            b.iter(|| emit(&uml_to_circuit(&read_xmi(black_box(x)).unwrap().model).unwrap()))
        });
    }
    group.finish();
}

fn stages(c: &mut Criterion) {
    let circuit = layered_circuit(5, 20);
    let model = circuit_to_uml(&circuit);
    c.bench_function("canonicalize/5x20", |b| b.iter(|| canonicalize(black_box(&circuit))));
    c.bench_function("validate/5x20", |b| b.iter(|| validate(black_box(&model))));
}

criterion_group!(benches, forward, reverse, stages);
criterion_main!(benches);
