use criterion::{criterion_group, criterion_main, Criterion};
use dimgraph::dsl::load;
use dimgraph::graph::{grow, topo_order};
use dimgraph::pipeline::{check, prove, RunConfig};
use dimgraph::rules::{discover, Caps};
use dimgraph::scene::{build_scene, SampleRange, Witness};

const FIXTURES: [(&str, &str); 2] = [
    ("parallelogram", include_str!("../../../fixtures/parallelogram.gthm")),
    ("imo2012", include_str!("../../../fixtures/imo2012.gthm")),
];

fn stages(c: &mut Criterion) {
    for (name, text) in FIXTURES {
        let model = load(text).unwrap();
        let scene = build_scene(&model).unwrap();
        let range = SampleRange::default();
        let witness = Witness::draw(&scene, 42, &range).unwrap();
        let growth = grow(&model, &scene, &witness, &Caps::default());

        c.bench_function(&format!("{name}/load"), |b| b.iter(|| load(text).unwrap()));
        c.bench_function(&format!("{name}/witness"), |b| b.iter(|| Witness::draw(&scene, 42, &range).unwrap()));
        c.bench_function(&format!("{name}/discover"), |b| b.iter(|| discover(&model, &scene, &witness, &Caps::default())));
        c.bench_function(&format!("{name}/topo_order"), |b| b.iter(|| topo_order(&growth.graph).unwrap()));
    }
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("end_to_end");
    group.sample_size(10);
    let cfg = RunConfig { samples: 20, ..RunConfig::default() };
    for (name, text) in FIXTURES {
        group.bench_function(format!("{name}/prove"), |b| b.iter(|| prove(name, text, &cfg).unwrap()));
        group.bench_function(format!("{name}/check"), |b| b.iter(|| check(name, text, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, stages, end_to_end);
criterion_main!(benches);
