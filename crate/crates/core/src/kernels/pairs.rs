//! Pair-level refinement: 2-WL over ordered pairs and 2-LWL over local
//! unordered pairs.

use std::collections::HashMap;

use super::{
    validate, ColourMultiset, ColourSource, KEY_PAIR, KEY_PAIR_INIT, KEY_SET, KEY_SET_INIT,
};
use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};

/// Sorted edge labels per adjacent ordered pair; absent pairs have none (⊥).
fn pair_labels(g: &Graph) -> HashMap<(u32, u32), Vec<u32>> {
    let mut labels: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for (v, adj) in g.adjacency().iter().enumerate() {
        for &(u, l) in adj {
            labels.entry((v as u32, u)).or_default().push(l);
        }
    }
    for ls in labels.values_mut() {
        ls.sort_unstable();
    }
    labels
}

fn initial_key(tag: u32, a: Colour, b: Colour, labels: Option<&Vec<u32>>, key: &mut Vec<u32>) {
    key.clear();
    key.extend([tag, a, b]);
    match labels {
        Some(ls) => {
            key.push(ls.len() as u32);
            key.extend(ls);
        }
        None => key.push(0),
    }
}

fn check_budget(pairs: usize, budget: usize) -> Result<()> {
    if pairs > budget {
        return Err(Error::NodeBudgetExceeded {
            needed: pairs,
            budget,
        });
    }
    Ok(())
}

/// 2-WL over all ordered pairs `(v, u)`, self-pairs included. A pair's
/// neighbourhood is the multiset of `(c(w, u), c(v, w))` over every node `w`.
pub fn two_wl<S: ColourSource>(
    g: &Graph,
    iterations: usize,
    source: &mut S,
    pair_budget: usize,
) -> Result<ColourMultiset> {
    validate(g, source.registry())?;
    let n = g.node_count();
    check_budget(n * n, pair_budget)?;
    let cat = g.categorical();
    let labels = pair_labels(g);
    let mut out = ColourMultiset::new();
    let mut key = Vec::new();

    let mut colours = vec![0; n * n];
    for v in 0..n {
        for u in 0..n {
            initial_key(
                KEY_PAIR_INIT,
                cat[v],
                cat[u],
                labels.get(&(v as u32, u as u32)),
                &mut key,
            );
            colours[v * n + u] = source.colour(&key);
        }
    }
    colours.iter().for_each(|&c| out.insert(c));

    let mut next = vec![0; n * n];
    let mut neighbourhood: Vec<(Colour, Colour)> = Vec::with_capacity(n);
    for _ in 0..iterations {
        for v in 0..n {
            for u in 0..n {
                neighbourhood.clear();
                neighbourhood.extend((0..n).map(|w| (colours[w * n + u], colours[v * n + w])));
                neighbourhood.sort_unstable();
                key.clear();
                key.push(KEY_PAIR);
                key.push(colours[v * n + u]);
                for &(a, b) in &neighbourhood {
                    key.push(a);
                    key.push(b);
                }
                next[v * n + u] = source.colour(&key);
            }
        }
        std::mem::swap(&mut colours, &mut next);
        colours.iter().for_each(|&c| out.insert(c));
    }
    Ok(out)
}

/// 2-LWL over unordered pairs `{v, u}`, `v != u`. A pair's neighbourhood is
/// the multiset of `{c{w, u}, c{v, w}}` over `w ∈ N(v) ∪ N(u)`, skipping
/// `w ∈ {v, u}` where one of the two sets would not be a pair.
pub fn two_lwl<S: ColourSource>(
    g: &Graph,
    iterations: usize,
    source: &mut S,
    pair_budget: usize,
) -> Result<ColourMultiset> {
    validate(g, source.registry())?;
    if !g.is_symmetric() {
        return Err(Error::InvalidGraph(
            "2-LWL needs symmetric edge labels".into(),
        ));
    }
    let n = g.node_count();
    check_budget(n * n.saturating_sub(1) / 2, pair_budget)?;
    let cat = g.categorical();
    let adjacency = g.adjacency();
    let labels = pair_labels(g);
    let mut out = ColourMultiset::new();
    let mut key = Vec::new();

    // full symmetric matrix; only v != u is meaningful
    let mut colours = vec![0; n * n];
    for v in 0..n {
        for u in v + 1..n {
            let (a, b) = (cat[v].min(cat[u]), cat[v].max(cat[u]));
            initial_key(
                KEY_SET_INIT,
                a,
                b,
                labels.get(&(v as u32, u as u32)),
                &mut key,
            );
            let c = source.colour(&key);
            colours[v * n + u] = c;
            colours[u * n + v] = c;
            out.insert(c);
        }
    }

    let mut next = vec![0; n * n];
    let mut stamp = vec![usize::MAX; n];
    let mut neighbourhood: Vec<(Colour, Colour)> = Vec::new();
    for _ in 0..iterations {
        let mut pair_id = 0;
        for v in 0..n {
            for u in v + 1..n {
                neighbourhood.clear();
                for &(w, _) in adjacency[v].iter().chain(&adjacency[u]) {
                    let w = w as usize;
                    if w == v || w == u || stamp[w] == pair_id {
                        continue;
                    }
                    stamp[w] = pair_id;
                    let a = colours[w * n + u];
                    let b = colours[v * n + w];
                    neighbourhood.push((a.min(b), a.max(b)));
                }
                pair_id += 1;
                neighbourhood.sort_unstable();
                key.clear();
                key.push(KEY_SET);
                key.push(colours[v * n + u]);
                for &(a, b) in &neighbourhood {
                    key.push(a);
                    key.push(b);
                }
                let c = source.colour(&key);
                next[v * n + u] = c;
                next[u * n + v] = c;
            }
        }
        std::mem::swap(&mut colours, &mut next);
        for v in 0..n {
            for u in v + 1..n {
                out.insert(colours[v * n + u]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{ColourRegistry, DEFAULT_PAIR_BUDGET};

    const B: usize = DEFAULT_PAIR_BUDGET;

    #[test]
    fn two_wl_single_node() {
        let mut reg = ColourRegistry::new(1);
        let m = two_wl(&Graph::uniform(1, 0), 0, &mut reg.collector(), B).unwrap();
        let aa_bottom = reg.get(&[KEY_PAIR_INIT, 0, 0, 0]).unwrap();
        assert_eq!(m.sorted(), vec![(aa_bottom, 1)]);
    }

    #[test]
    fn two_wl_edgeless_pair() {
        let mut reg = ColourRegistry::new(1);
        let m = two_wl(&Graph::uniform(2, 0), 0, &mut reg.collector(), B).unwrap();
        // every pair, diagonal included, starts as (a, a, ⊥)
        assert_eq!(m.total(), 4);
        assert_eq!(m.len(), 1);
        // self-pairs carry ⊥ like non-edges, so nothing ever splits
        let m1 = two_wl(&Graph::uniform(2, 0), 1, &mut reg.collector(), B).unwrap();
        assert_eq!(m1.total(), 8);
        assert_eq!(
            m1.sorted().iter().map(|&(_, n)| n).collect::<Vec<_>>(),
            vec![4, 4]
        );
    }

    #[test]
    fn two_lwl_small_cases() {
        let mut reg = ColourRegistry::new(1);
        let m = two_lwl(&Graph::uniform(2, 0), 0, &mut reg.collector(), B).unwrap();
        assert_eq!(
            m.sorted(),
            vec![(reg.get(&[KEY_SET_INIT, 0, 0, 0]).unwrap(), 1)]
        );
        let tri = Graph::from_edges(vec![0; 3], vec![0.0; 3], &[(0, 1, 1), (1, 2, 1), (0, 2, 1)])
            .unwrap();
        let m = two_lwl(&tri, 1, &mut reg.collector(), B).unwrap();
        assert_eq!(m.total(), 6);
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|(_, n)| n == 3));
    }

    #[test]
    fn budgets() {
        let g = Graph::uniform(4, 0);
        let mut reg = ColourRegistry::new(1);
        assert!(matches!(
            two_wl(&g, 1, &mut reg.collector(), 15),
            Err(Error::NodeBudgetExceeded {
                needed: 16,
                budget: 15
            })
        ));
        assert!(two_lwl(&g, 1, &mut reg.collector(), 6).is_ok());
        assert!(two_lwl(&g, 1, &mut reg.collector(), 5).is_err());
    }

    #[test]
    fn repeated_argument_labels_are_kept_apart() {
        // on(a, a) style: two labels between the same pair
        let both = Graph::from_edges(vec![0, 1], vec![0.0; 2], &[(0, 1, 1), (0, 1, 2)]).unwrap();
        let one = Graph::from_edges(vec![0, 1], vec![0.0; 2], &[(0, 1, 1)]).unwrap();
        let mut reg = ColourRegistry::new(2);
        assert_ne!(
            two_wl(&both, 0, &mut reg.collector(), B).unwrap(),
            two_wl(&one, 0, &mut reg.collector(), B).unwrap()
        );
        assert_ne!(
            two_lwl(&both, 0, &mut reg.collector(), B).unwrap(),
            two_lwl(&one, 0, &mut reg.collector(), B).unwrap()
        );
    }
}
