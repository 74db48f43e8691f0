use criterion::{criterion_group, criterion_main, Criterion};

use lieclass_core::catalog::{basis_presentation, optimal_system_catalog, optimal_system_fields, table3_rows};
use lieclass_core::determining::{determining_system, PdeInstance};
use lieclass_core::invclass::audit_table3;
use lieclass_core::liealg::adjoint_exp;
use lieclass_core::optsys::{audit_optimal_system, AdjointGroup, AuditConfig, CoeffVector};
use lieclass_core::{parse_chart, parse_field};

fn structure(c: &mut Criterion) {
    c.bench_function("structure_constants", |b| b.iter(|| basis_presentation(false).unwrap()));
    let p = basis_presentation(false).unwrap();
    c.bench_function("adjoint_table", |b| {
        b.iter(|| (0..p.dim()).map(|i| adjoint_exp(&p, i).unwrap()).collect::<Vec<_>>())
    });
}

fn determining(c: &mut Criterion) {
    let chart = parse_chart(
        "vars x y t; dep u; class f; fun F(x,y,u,u_x,u_y), X1(x,y,t,u), X2(x,y,t,u), X3(x,y,t,u), P(x,y,t,u);",
    )
    .unwrap();
    let ansatz = parse_field("X1(x,y,t,u)*d_x + X2(x,y,t,u)*d_y + X3(x,y,t,u)*d_t + P(x,y,t,u)*d_u", &chart).unwrap();
    let pde = PdeInstance::arbitrary();
    c.bench_function("determining_system_general", |b| b.iter(|| determining_system(&ansatz, &pde).unwrap()));
}

fn audits(c: &mut Criterion) {
    let g = AdjointGroup::new(basis_presentation(false).unwrap()).unwrap();
    let reps: Vec<(String, CoeffVector)> =
        optimal_system_catalog().unwrap().into_iter().map(|(n, v)| (n, CoeffVector(v))).collect();
    let config = AuditConfig { samples: 100, ..AuditConfig::default() };
    let mut group = c.benchmark_group("audits");
    group.sample_size(10);
    group.bench_function("optsys_100_samples", |b| b.iter(|| audit_optimal_system(&g, &reps, &config)));
    let rows = table3_rows().unwrap();
    let items = optimal_system_fields(false).unwrap();
    group.bench_function("table3", |b| b.iter(|| audit_table3(&rows, &items).unwrap()));
    group.finish();
}

criterion_group!(benches, structure, determining, audits);
criterion_main!(benches);
