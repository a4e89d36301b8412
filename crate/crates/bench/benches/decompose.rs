use criterion::{criterion_group, criterion_main, Criterion};
use maskforge::subdivision::{check_convergence, difference_symbol, operator_norm, power_symbol};
use maskforge::{algorithm1, decompose, zero_condition_order, DilationContext, IntMatrix};
use maskforge_bench::{class_mask, worked_context, worked_mask};
use std::hint::black_box;

fn worked_example(c: &mut Criterion) {
    let ctx = worked_context();
    let t = worked_mask();
    c.bench_function("polyphase_split", |b| {
        b.iter(|| black_box(&t).polyphase_split(&ctx).unwrap())
    });
    c.bench_function("zero_condition_order", |b| {
        b.iter(|| zero_condition_order(black_box(&t), &ctx, 3).unwrap())
    });
    c.bench_function("algorithm1", |b| {
        b.iter(|| algorithm1(black_box(&t), &ctx).unwrap())
    });
    let (_, sym) = difference_symbol(&t, &ctx).unwrap();
    c.bench_function("operator_norm", |b| {
        b.iter(|| operator_norm(black_box(&sym), ctx.matrix(), 128))
    });
    c.bench_function("power_symbol_3", |b| {
        b.iter(|| power_symbol(black_box(&sym), ctx.matrix(), 3))
    });
    c.bench_function("check_convergence", |b| {
        b.iter(|| check_convergence(black_box(&t), &ctx, 4, 128).unwrap())
    });
}

fn higher_order(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose_order_2");
    for (name, ctx) in [
        ("worked", worked_context()),
        ("2I", DilationContext::new(IntMatrix::scalar(2, 2)).unwrap()),
    ] {
        let t = class_mask(&ctx, 2);
        group.bench_function(name, |b| {
            b.iter(|| decompose(black_box(&t), &ctx, 2).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, worked_example, higher_order);
criterion_main!(benches);
