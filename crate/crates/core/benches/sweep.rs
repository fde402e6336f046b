use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hgmk3::exec::Exec;
use hgmk3::geomver::catalog::find;
use hgmk3::geomver::verify_map;
use hgmk3::rat::parse_q;
use hgmk3::report::{q_range, run_sweep, Check, SweepConfig};

fn grid(exec: Exec, checks: Vec<Check>) -> SweepConfig {
    SweepConfig {
        qs: q_range(3, 101, false),
        ts: ["2", "-1", "5/2", "81/256"].iter().map(|s| parse_q(s).unwrap()).collect(),
        checks,
        exec,
        ..Default::default()
    }
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let name = format!("{exec:?}").to_lowercase();
        g.bench_with_input(BenchmarkId::new("bcm+lemma", &name), &exec, |b, &e| {
            let cfg = grid(e, vec![Check::Bcm, Check::Lemma]);
            b.iter(|| run_sweep(&cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gauss", &name), &exec, |b, &e| {
            let cfg = grid(e, vec![Check::Gauss]);
            b.iter(|| run_sweep(&cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("map psi_chain", &name), &exec, |b, &e| {
            let entry = find("psi_chain").unwrap();
            b.iter(|| verify_map(&entry, 50, 62, 1, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
