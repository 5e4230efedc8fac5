use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wlkit::synth::{random_domain, random_problem, random_state, TaskShape};
use wlkit::{Dataset, DatasetEntry, Execution, FeatureModel, Kernel, KernelKind};

fn dataset(states_per_problem: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let shape = TaskShape {
        predicates: 4,
        functions: 2,
        constants: 0,
        objects: 40,
        goals: 8,
        numeric_goals: 2,
    };
    let domain = random_domain(&mut rng, &shape);
    let entries = (0..10)
        .map(|_| {
            let problem = random_problem(&mut rng, &domain, &shape);
            let states = (0..states_per_problem)
                .map(|_| random_state(&mut rng, &domain, &problem))
                .collect();
            DatasetEntry {
                problem,
                states,
                labels: None,
            }
        })
        .collect();
    Dataset { domain, entries }
}

fn embed(c: &mut Criterion) {
    let ds = dataset(50);
    let mut group = c.benchmark_group("embed_dataset");
    group.sample_size(20);
    for (kind, l) in [
        (KernelKind::Wl, 2),
        (KernelKind::Iwl, 1),
        (KernelKind::Ccwl, 2),
    ] {
        let mut model = FeatureModel::new(ds.domain.clone(), Kernel::new(kind, l));
        model.collect(&ds).unwrap();
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(
                BenchmarkId::new(name, format!("{kind}-L{l}")),
                &exec,
                |b, &exec| b.iter(|| model.embed_dataset_with(&ds, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn distinguish(c: &mut Criterion) {
    let mut ds = dataset(50);
    for e in &mut ds.entries {
        e.labels = Some((0..e.states.len()).map(|i| i as f64).collect());
    }
    let mut model = FeatureModel::new(ds.domain.clone(), Kernel::new(KernelKind::Wl, 2));
    model.collect(&ds).unwrap();
    c.bench_function("distinguish/500_states", |b| {
        b.iter(|| model.distinguish(&ds, 0.0).unwrap())
    });
}

criterion_group!(benches, embed, distinguish);
criterion_main!(benches);
