//! Brute-force refinement with string labels.
//!
//! Every round builds the full textual label of each node (or pair) and then
//! renames labels jointly over all graphs of one comparison, so equal strings
//! always get equal names and different strings different names. Outputs are
//! the label lists of rounds `0..=L`, one list per graph.

use std::collections::{BTreeSet, HashMap};

use wlkit::Graph;

fn compress(round: usize, raw: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let distinct: BTreeSet<&String> = raw.iter().flatten().collect();
    let names: HashMap<&String, String> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, format!("r{round}#{i}")))
        .collect();
    raw.iter()
        .map(|labels| labels.iter().map(|s| names[s].clone()).collect())
        .collect()
}

fn labels_text(g: &Graph, v: usize, u: usize) -> String {
    let mut ls = g.labels_between(v, u);
    ls.sort_unstable();
    ls.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// Node refinement from explicit initial labels; one run per entry.
fn node_runs(runs: &[(&Graph, Vec<String>)], l: usize) -> Vec<Vec<String>> {
    let mut current: Vec<Vec<String>> = runs.iter().map(|(_, init)| init.clone()).collect();
    let mut out = current.clone();
    for round in 1..=l {
        let raw = runs
            .iter()
            .zip(&current)
            .map(|((g, _), colours)| {
                (0..g.node_count())
                    .map(|v| {
                        let mut neighbourhood: Vec<String> = g
                            .neighbours(v)
                            .unwrap()
                            .iter()
                            .map(|&(u, label)| format!("{}~{label}", colours[u as usize]))
                            .collect();
                        neighbourhood.sort();
                        format!("{}|{}", colours[v], neighbourhood.join(","))
                    })
                    .collect()
            })
            .collect();
        current = compress(round, raw);
        for (o, c) in out.iter_mut().zip(&current) {
            o.extend(c.iter().cloned());
        }
    }
    out
}

fn categorical_labels(g: &Graph) -> Vec<String> {
    g.categorical().iter().map(|c| format!("c{c}")).collect()
}

pub fn wl(graphs: &[&Graph], l: usize) -> Vec<Vec<String>> {
    let runs: Vec<_> = graphs.iter().map(|&g| (g, categorical_labels(g))).collect();
    node_runs(&runs, l)
}

/// One WL run per (graph, node) with that node relabelled `*`, pooled per graph.
pub fn iwl(graphs: &[&Graph], l: usize) -> Vec<Vec<String>> {
    let mut runs = Vec::new();
    let mut owner = Vec::new();
    for (i, &g) in graphs.iter().enumerate() {
        for w in 0..g.node_count() {
            let mut init = categorical_labels(g);
            init[w] = "*".to_string();
            runs.push((g, init));
            owner.push(i);
        }
    }
    let mut out = vec![Vec::new(); graphs.len()];
    for (labels, i) in node_runs(&runs, l).into_iter().zip(owner) {
        out[i].extend(labels);
    }
    out
}

/// Refinement over all ordered pairs, diagonal included.
pub fn two_wl(graphs: &[&Graph], l: usize) -> Vec<Vec<String>> {
    let mut current: Vec<Vec<String>> = graphs
        .iter()
        .map(|g| {
            let n = g.node_count();
            let cat = g.categorical();
            let mut labels = Vec::with_capacity(n * n);
            for v in 0..n {
                for u in 0..n {
                    labels.push(format!("c{}|c{}|{}", cat[v], cat[u], labels_text(g, v, u)));
                }
            }
            labels
        })
        .collect();
    let mut out = current.clone();
    for round in 1..=l {
        let raw = graphs
            .iter()
            .zip(&current)
            .map(|(g, c)| {
                let n = g.node_count();
                let mut labels = Vec::with_capacity(n * n);
                for v in 0..n {
                    for u in 0..n {
                        let mut neighbourhood: Vec<String> = (0..n)
                            .map(|w| format!("({},{})", c[w * n + u], c[v * n + w]))
                            .collect();
                        neighbourhood.sort();
                        labels.push(format!("{}|{}", c[v * n + u], neighbourhood.join(",")));
                    }
                }
                labels
            })
            .collect();
        current = compress(round, raw);
        for (o, c) in out.iter_mut().zip(&current) {
            o.extend(c.iter().cloned());
        }
    }
    out
}

fn unordered(a: &str, b: &str) -> String {
    if a <= b {
        format!("{{{a},{b}}}")
    } else {
        format!("{{{b},{a}}}")
    }
}

/// Refinement over unordered pairs `{v, u}`, neighbours `w ∈ N(v) ∪ N(u) \ {v, u}`.
pub fn two_lwl(graphs: &[&Graph], l: usize) -> Vec<Vec<String>> {
    let pairs = |n: usize| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|v| (v + 1..n).map(move |u| (v, u)))
            .collect()
    };
    let mut current: Vec<HashMap<(usize, usize), String>> = graphs
        .iter()
        .map(|g| {
            let cat = g.categorical();
            pairs(g.node_count())
                .into_iter()
                .map(|(v, u)| {
                    let ends = unordered(&format!("c{}", cat[v]), &format!("c{}", cat[u]));
                    ((v, u), format!("{ends}|{}", labels_text(g, v, u)))
                })
                .collect()
        })
        .collect();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let flatten = |g: &Graph, c: &HashMap<(usize, usize), String>| -> Vec<String> {
        pairs(g.node_count()).iter().map(|p| c[p].clone()).collect()
    };
    let mut out: Vec<Vec<String>> = graphs
        .iter()
        .zip(&current)
        .map(|(g, c)| flatten(g, c))
        .collect();
    for round in 1..=l {
        let raw: Vec<Vec<String>> = graphs
            .iter()
            .zip(&current)
            .map(|(g, c)| {
                pairs(g.node_count())
                    .into_iter()
                    .map(|(v, u)| {
                        let mut ws: BTreeSet<usize> = BTreeSet::new();
                        for x in [v, u] {
                            ws.extend(g.neighbours(x).unwrap().iter().map(|&(w, _)| w as usize));
                        }
                        ws.remove(&v);
                        ws.remove(&u);
                        let mut neighbourhood: Vec<String> = ws
                            .into_iter()
                            .map(|w| unordered(&c[&key(w, u)], &c[&key(v, w)]))
                            .collect();
                        neighbourhood.sort();
                        format!("{}|{}", c[&(v, u)], neighbourhood.join(","))
                    })
                    .collect()
            })
            .collect();
        let renamed = compress(round, raw);
        for ((g, c), names) in graphs.iter().zip(current.iter_mut()).zip(&renamed) {
            for (p, name) in pairs(g.node_count()).into_iter().zip(names) {
                c.insert(p, name.clone());
            }
        }
        for ((o, g), c) in out.iter_mut().zip(graphs).zip(&current) {
            o.extend(flatten(g, c));
        }
    }
    out
}

/// Label multiset as sorted `(label, count)` pairs.
pub fn multiset(labels: &[String]) -> Vec<(String, usize)> {
    let mut counts: HashMap<&String, usize> = HashMap::new();
    for s in labels {
        *counts.entry(s).or_default() += 1;
    }
    let mut v: Vec<_> = counts.into_iter().map(|(s, n)| (s.clone(), n)).collect();
    v.sort();
    v
}

/// Shape of a multiset that ignores label names: sorted multiplicities.
pub fn profile(counts: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = counts.into_iter().collect();
    v.sort_unstable();
    v
}
