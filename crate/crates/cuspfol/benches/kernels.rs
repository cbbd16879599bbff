//! Benchmarks for the hot kernels: dense-ish multiplication through the
//! sequential and (when the `parallel` feature is on) data-parallel paths,
//! the power expansion behind surface assembly, the integrability test,
//! and the full resolution chain.
//!
//! ```text
//! cargo bench -p cuspfol                            # parallel kernels
//! cargo bench -p cuspfol --no-default-features      # sequential only
//! ```

use criterion::{criterion_group, criterion_main, Criterion};

use cuspfol::{assemble_generator, resolve, CuspidalSpec, GPoly, Poly, QPoly, Rat, Vars};

/// `(1 + x + y + z + x*y*z)^e`: dense enough that the pairwise product
/// count crosses the parallel threshold.
fn dense_power(vars: &Vars, e: u32) -> QPoly {
    let mut base = Poly::int(vars, 1);
    for exps in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]] {
        base = &base + &Poly::term(vars, &exps, Rat::one());
    }
    base.pow(e)
}

fn bench_multiplication(c: &mut Criterion) {
    let vars = Vars::new(&["x", "y", "z"]);
    let a = dense_power(&vars, 6);
    let b = dense_power(&vars, 5);

    let mut group = c.benchmark_group("mul");
    group.bench_function("seq", |bench| {
        bench.iter(|| a.mul_seq(&b));
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |bench| {
        bench.iter(|| a.mul_par(&b));
    });
    group.finish();
}

fn bench_surface_assembly(c: &mut Criterion) {
    let vars = Vars::new(&["x", "y", "z"]);
    let spec = CuspidalSpec::new(
        3,
        5,
        vec![Rat::int(1), Rat::int(-2), Rat::int(3)],
        vec![4, 2, 6],
    )
    .unwrap();
    c.bench_function("surface_power_expansion", |bench| {
        bench.iter(|| spec.surface(&vars));
    });
}

fn bench_integrability(c: &mut Criterion) {
    let vars = Vars::new(&["x", "y", "z"]);
    let spec = CuspidalSpec::new(2, 5, vec![Rat::int(-1), Rat::int(-2)], vec![2, 4]).unwrap();
    let g = GPoly::new([(1, 0, Rat::one()), (0, 1, Rat::int(-2)), (1, 1, Rat::int(3))]);
    let omega = assemble_generator(&spec, &g, &vars);
    c.bench_function("integrability_check", |bench| {
        bench.iter(|| {
            assert!(omega.is_integrable());
        });
    });
}

fn bench_resolution(c: &mut Criterion) {
    let vars = Vars::new(&["x", "y", "z"]);
    let spec = CuspidalSpec::new(
        2,
        3,
        vec![Rat::int(1), Rat::int(-1), Rat::int(2)],
        vec![2, 2, 2],
    )
    .unwrap();
    let g = GPoly::constant(Rat::one());
    c.bench_function("resolution_chain", |bench| {
        bench.iter(|| resolve(&spec, &g, &vars).unwrap());
    });
}

criterion_group!(
    kernels,
    bench_multiplication,
    bench_surface_assembly,
    bench_integrability,
    bench_resolution
);
criterion_main!(kernels);
