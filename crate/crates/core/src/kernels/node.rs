//! Node-level refinement: WL, iWL and ccWL.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::{validate, Aggregator, ColourMultiset, ColourSource, KEY_NODE};
use crate::error::Result;
use crate::graph::{Colour, Graph};

/// Runs `iterations` rounds of refinement from `colours`, calling `visit` for
/// every `(node, colour)` of every round including round 0.
fn refine<S: ColourSource>(
    g: &Graph,
    iterations: usize,
    source: &mut S,
    mut colours: Vec<Colour>,
    mut visit: impl FnMut(usize, Colour),
) {
    let n = g.node_count();
    let adjacency = g.adjacency();
    for (v, &c) in colours.iter().enumerate() {
        visit(v, c);
    }
    let mut next = vec![0; n];
    let mut neighbourhood: Vec<(Colour, u32)> = Vec::new();
    let mut key: Vec<u32> = Vec::new();
    for _ in 0..iterations {
        for v in 0..n {
            neighbourhood.clear();
            neighbourhood.extend(adjacency[v].iter().map(|&(u, l)| (colours[u as usize], l)));
            neighbourhood.sort_unstable();
            key.clear();
            key.push(KEY_NODE);
            key.push(colours[v]);
            for &(c, l) in &neighbourhood {
                key.push(c);
                key.push(l);
            }
            next[v] = source.colour(&key);
        }
        std::mem::swap(&mut colours, &mut next);
        for (v, &c) in colours.iter().enumerate() {
            visit(v, c);
        }
    }
}

/// Colour refinement with edge labels. Returns every node colour of rounds
/// `0..=iterations`.
pub fn wl<S: ColourSource>(g: &Graph, iterations: usize, source: &mut S) -> Result<ColourMultiset> {
    validate(g, source.registry())?;
    let mut out = ColourMultiset::new();
    refine(g, iterations, source, g.categorical().to_vec(), |_, c| {
        out.insert(c)
    });
    Ok(out)
}

/// WL run once per node with that node recoloured to the individualisation
/// colour; the union of all runs.
pub fn iwl<S: ColourSource>(
    g: &Graph,
    iterations: usize,
    source: &mut S,
) -> Result<ColourMultiset> {
    validate(g, source.registry())?;
    let marker = source.registry().individualised();
    let mut out = ColourMultiset::new();
    for w in 0..g.node_count() {
        let mut initial = g.categorical().to_vec();
        initial[w] = marker;
        refine(g, iterations, source, initial, |_, c| out.insert(c));
    }
    Ok(out)
}

struct Accumulated {
    nodes: usize,
    sum: f64,
    max: f64,
}

/// WL plus, for every colour, the aggregate of the continuous features of the
/// nodes that carried it in any round. Unseen colours get no feature.
pub fn ccwl<S: ColourSource>(
    g: &Graph,
    iterations: usize,
    source: &mut S,
    aggregator: Aggregator,
) -> Result<(ColourMultiset, IndexMap<Colour, f64>)> {
    validate(g, source.registry())?;
    let unseen = source.registry().unseen();
    let features = g.continuous();
    let mut out = ColourMultiset::new();
    let mut members: HashSet<(Colour, usize)> = HashSet::new();
    let mut acc: IndexMap<Colour, Accumulated> = IndexMap::new();
    refine(g, iterations, source, g.categorical().to_vec(), |v, c| {
        out.insert(c);
        if c == unseen || !members.insert((c, v)) {
            return;
        }
        let x = features[v];
        let a = acc.entry(c).or_insert(Accumulated {
            nodes: 0,
            sum: 0.0,
            max: f64::NEG_INFINITY,
        });
        a.nodes += 1;
        a.sum += x;
        a.max = a.max.max(x);
    });
    let continuous = acc
        .into_iter()
        .map(|(c, a)| {
            let value = match aggregator {
                Aggregator::Sum => a.sum,
                Aggregator::Mean => a.sum / a.nodes as f64,
                Aggregator::Max => a.max,
            };
            (c, value)
        })
        .collect();
    Ok((out, continuous))
}
