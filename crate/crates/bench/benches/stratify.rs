use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use strata_core::fixtures::{pinched_torus, sundial, torus_mapper};
use strata_core::geometry::{build_nerve, monomials_up_to_degree, VanishingPresheaf};
use strata_core::{
    coarsest_stratification, minimal_homogeneous_stratification, DeltaMap, FieldSpec,
    LocalHomologySheaf,
};

fn local_homology(c: &mut Criterion) {
    let x = sundial();
    c.bench_function("sundial local homology delta", |b| {
        b.iter(|| {
            let lh = LocalHomologySheaf::new(&x, FieldSpec::Prime(2)).unwrap();
            black_box(DeltaMap::from_oracle(&x, &lh))
        })
    });
    let t = pinched_torus(8, 6);
    c.bench_function("pinched torus local homology delta", |b| {
        b.iter(|| {
            let lh = LocalHomologySheaf::new(&t.space, FieldSpec::Prime(2)).unwrap();
            black_box(DeltaMap::from_oracle(&t.space, &lh))
        })
    });
}

fn peeling(c: &mut Criterion) {
    let t = pinched_torus(8, 6);
    let lh = LocalHomologySheaf::new(&t.space, FieldSpec::Prime(2)).unwrap();
    let dm = DeltaMap::from_oracle(&t.space, &lh);
    c.bench_function("pinched torus coarsest", |b| {
        b.iter(|| black_box(coarsest_stratification(&t.space, &dm).unwrap()))
    });
    c.bench_function("pinched torus minimal homogeneous", |b| {
        b.iter(|| black_box(minimal_homogeneous_stratification(&t.space, &dm).unwrap()))
    });
}

fn vanishing(c: &mut Criterion) {
    let s = torus_mapper();
    let cover = s.cover();
    let nerve = build_nerve(&cover, cover.len() - 1).unwrap();
    let m = monomials_up_to_degree(3, 4).unwrap();
    let mut group = c.benchmark_group("vanishing");
    group.sample_size(10);
    group.bench_function("torus mapper presheaf", |b| {
        b.iter(|| {
            black_box(
                VanishingPresheaf::new(&nerve, &s.cloud, &m, Default::default(), Default::default())
                    .unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(benches, local_homology, peeling, vanishing);
criterion_main!(benches);
