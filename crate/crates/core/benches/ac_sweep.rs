//! AC sweep throughput, sequential against rayon.

use std::fmt::Write;
use std::hint::black_box;

use ccsim_core::analysis::run_ac_with;
use ccsim_core::netlist::Analysis;
use ccsim_core::{elaborate, parse_deck, Circuit, Execution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// RC ladder with a CCII+ buffer every fourth section.
fn ladder(sections: usize, pts_per_decade: usize) -> (Circuit, ccsim_core::netlist::SweepSpec) {
    let mut text = String::from("ladder\nVIN n0 0 AC 1\n");
    for k in 1..=sections {
        if k % 4 == 0 {
            writeln!(text, "CCII+ U{k} n{} b{k} n{k}", k - 1).unwrap();
            writeln!(text, "RB{k} b{k} 0 1k").unwrap();
            writeln!(text, "RL{k} n{k} 0 1k").unwrap();
        } else {
            writeln!(text, "R{k} n{} n{k} 1k", k - 1).unwrap();
        }
        writeln!(text, "C{k} n{k} 0 10n").unwrap();
    }
    writeln!(text, ".AC DEC {pts_per_decade} 1 1g").unwrap();
    let deck = parse_deck(&text).unwrap();
    let Analysis::Ac(spec) = deck.analysis() else {
        unreachable!()
    };
    (elaborate(&deck).unwrap(), spec)
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("ac_sweep");
    for sections in [8, 32, 64] {
        let (circuit, spec) = ladder(sections, 20);
        for (label, mode) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, sections), &circuit, |b, circuit| {
                b.iter(|| run_ac_with(black_box(circuit), &spec, mode).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
