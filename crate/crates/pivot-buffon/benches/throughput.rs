//! Sequential vs parallel throw throughput.
//!
//! Both paths tally the identical per-throw streams, so the comparison is
//! pure scheduling overhead vs speedup. Run with `--no-default-features`
//! to bench the sequential path alone.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use pivot_buffon::montecarlo::{self, SimulationConfig};
use pivot_buffon::{Lattice, PivotNeedle};

fn bench_throws(c: &mut Criterion) {
    let needle = PivotNeedle::new(0.3, 0.5).unwrap();
    let lattice = Lattice::new(1.0).unwrap();

    let mut group = c.benchmark_group("montecarlo");
    for &n in &[100_000_u64, 1_000_000] {
        group.throughput(Throughput::Elements(n));

        let mut config = SimulationConfig::new(needle, lattice, n, 42);
        config.n_chunks = 256;

        group.bench_with_input(BenchmarkId::new("sequential", n), &config, |b, cfg| {
            b.iter(|| montecarlo::run_sequential(cfg).unwrap())
        });

        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", n), &config, |b, cfg| {
            b.iter(|| montecarlo::run_parallel(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_throws);
criterion_main!(benches);
