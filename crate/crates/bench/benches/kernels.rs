//! Hot-path benchmarks: PBW straightening, pseudoaction normal forms, the
//! singular solver, and reduced-complex assembly.

use criterion::{criterion_group, criterion_main, Criterion};
use liepseudo::algebra::DPrimeModule;
use liepseudo::battery;
use liepseudo::forms;
use liepseudo::hopf::Hopf;
use liepseudo::rat::DetRng;
use liepseudo::singular::solve_singular;
use liepseudo::tensor::{build_csdr_complex, Convention, TensorModule};
use std::hint::black_box;
use std::sync::Arc;

fn bench_pbw_multiply(c: &mut Criterion) {
    let h = Hopf::new(Arc::new(battery::f4()));
    let mut rng = DetRng::new(99);
    let a = h.random_element(&mut rng, 4, 8);
    let b = h.random_element(&mut rng, 4, 8);
    // warm the straightening cache so the steady state is measured
    let _ = h.mul(&a, &b);
    c.bench_function("pbw multiply degree 4 (dim 4, nonabelian)", |bench| {
        bench.iter(|| black_box(h.mul(black_box(&a), black_box(&b))))
    });
}

fn bench_generator_action(c: &mut Criterion) {
    let h = Hopf::new(Arc::new(battery::x2()));
    let tm = TensorModule::new(
        &h,
        DPrimeModule::trivial(&h.alg),
        forms::build_fundamental_rep(&h.alg, 1),
        Convention::VForm,
        "V(k,pi1)",
    )
    .unwrap();
    let v = liepseudo::tensor::ModuleElement::unit(
        tm.fiber_dim(),
        liepseudo::multiindex::MultiIndex(vec![2, 1]),
        0,
    );
    let _ = tm.action_on_element(&v);
    c.bench_function("pseudoaction normal form (dim 2, twisted)", |bench| {
        bench.iter(|| black_box(tm.action_on_element(black_box(&v))))
    });
}

fn bench_singular_solver(c: &mut Criterion) {
    let h = Hopf::new(Arc::new(battery::a2()));
    let tm = TensorModule::new(
        &h,
        DPrimeModule::trivial(&h.alg),
        forms::build_fundamental_rep(&h.alg, 1),
        Convention::VForm,
        "V(k,pi1)",
    )
    .unwrap();
    c.bench_function("singular solver cap 3 (dim 2, vector fiber)", |bench| {
        bench.iter(|| black_box(solve_singular(black_box(&tm), 3)))
    });
}

fn bench_complex_assembly(c: &mut Criterion) {
    let h = Hopf::new(Arc::new(battery::x2()));
    let pi = DPrimeModule::trivial(&h.alg);
    c.bench_function("reduced complex assembly (dim 2, twisted)", |bench| {
        bench.iter(|| black_box(build_csdr_complex(black_box(&h), black_box(&pi))))
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = bench_pbw_multiply, bench_generator_action, bench_singular_solver, bench_complex_assembly
}
criterion_main!(kernels);
