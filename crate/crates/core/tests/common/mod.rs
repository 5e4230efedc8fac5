#![allow(dead_code)]

pub mod blocks;
pub mod oracle;

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wlkit::synth::{random_graph, random_problem, random_state, TaskShape};
use wlkit::{ColourMultiset, ColourRegistry, Graph, IlgGenerator, Kernel, KernelKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    let labelled: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
    Graph::from_edges(vec![0; n], vec![0.0; n], &labelled).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn two_triangles() -> Graph {
    graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
}

pub fn complete(n: usize) -> Graph {
    graph(
        n,
        &(0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect::<Vec<_>>(),
    )
}

/// A random νILG together with the size of its colour table.
pub struct Sample {
    pub graph: Graph,
    pub base: u32,
}

/// νILGs of random tasks and states with at most `max_nodes` nodes.
pub fn ilg_corpus(seed: u64, count: usize, max_nodes: usize) -> Vec<Sample> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let shape = TaskShape {
            predicates: rng.gen_range(1..=4),
            functions: rng.gen_range(0..=2),
            constants: rng.gen_range(0..=2),
            objects: rng.gen_range(1..=8),
            goals: rng.gen_range(0..=4),
            numeric_goals: rng.gen_range(0..=2),
        };
        let domain = wlkit::synth::random_domain(&mut rng, &shape);
        let problem = random_problem(&mut rng, &domain, &shape);
        let state = random_state(&mut rng, &domain, &problem);
        let mut generator = IlgGenerator::new(domain);
        generator.set_problem(&problem).unwrap();
        let graph = generator.to_graph(&state).unwrap();
        if graph.node_count() <= max_nodes {
            let base = generator.colour_table().len() as u32;
            out.push(Sample { graph, base });
        }
    }
    out
}

/// `count` random pairs of small graphs on the same number of nodes.
pub fn small_graph_pairs(seed: u64, count: usize) -> Vec<(Graph, Graph)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=7);
            let colours = rng.gen_range(1..=2);
            let g = random_graph(&mut rng, n, colours, 2, 2.0);
            let h = random_graph(&mut rng, n, colours, 2, 2.0);
            (g, h)
        })
        .collect()
}

pub fn run(kind: KernelKind, g: &Graph, l: usize, registry: &mut ColourRegistry) -> ColourMultiset {
    Kernel::new(kind, l)
        .run(g, &mut registry.collector())
        .unwrap()
        .colours
}

pub fn run_oracle(kind: KernelKind, graphs: &[&Graph], l: usize) -> Vec<Vec<String>> {
    match kind {
        KernelKind::Wl | KernelKind::Ccwl => oracle::wl(graphs, l),
        KernelKind::TwoWl => oracle::two_wl(graphs, l),
        KernelKind::TwoLwl => oracle::two_lwl(graphs, l),
        KernelKind::Iwl => oracle::iwl(graphs, l),
    }
}

/// For every colour, its multiplicity in each of the graphs; sorted. Two
/// labellings agree up to renaming exactly when these coincide.
pub fn joint_profile_kernel(multisets: &[ColourMultiset]) -> Vec<Vec<u64>> {
    let mut by_colour: HashMap<u32, Vec<u64>> = HashMap::new();
    for (i, m) in multisets.iter().enumerate() {
        for (c, n) in m.iter() {
            by_colour
                .entry(c)
                .or_insert_with(|| vec![0; multisets.len()])[i] = n;
        }
    }
    let mut v: Vec<_> = by_colour.into_values().collect();
    v.sort();
    v
}

pub fn joint_profile_oracle(labels: &[Vec<String>]) -> Vec<Vec<u64>> {
    let mut by_label: HashMap<&String, Vec<u64>> = HashMap::new();
    for (i, ls) in labels.iter().enumerate() {
        for s in ls {
            by_label.entry(s).or_insert_with(|| vec![0; labels.len()])[i] += 1;
        }
    }
    let mut v: Vec<_> = by_label.into_values().collect();
    v.sort();
    v
}

/// Outcome of comparing one kernel with its oracle on a graph pair.
pub struct PairCheck {
    pub kernel_distinguishes: bool,
    pub oracle_distinguishes: bool,
    pub profiles_agree: bool,
}

pub fn check_pair(kind: KernelKind, g: &Graph, h: &Graph, l: usize, base: u32) -> PairCheck {
    let mut registry = ColourRegistry::new(base);
    let mg = run(kind, g, l, &mut registry);
    let mh = run(kind, h, l, &mut registry);
    let labels = run_oracle(kind, &[g, h], l);
    PairCheck {
        kernel_distinguishes: mg != mh,
        oracle_distinguishes: oracle::multiset(&labels[0]) != oracle::multiset(&labels[1]),
        profiles_agree: joint_profile_kernel(&[mg, mh]) == joint_profile_oracle(&labels),
    }
}
