//! Three-block Blocksworld with move actions, labelled by exhaustive search.

use std::collections::{HashMap, VecDeque};

use wlkit::{Dataset, DatasetEntry, Domain, ProblemBuilder, State, Symbol};

pub const BLOCKS: [&str; 3] = ["a", "b", "c"];

/// `below[i]` is the block under block `i`, or `None` for the table.
pub type Config = [Option<usize>; 3];

fn valid(config: &Config) -> bool {
    for (i, b) in config.iter().enumerate() {
        if *b == Some(i) {
            return false;
        }
        // no block carries two blocks
        if let Some(b) = b {
            if config.iter().filter(|&&x| x == Some(*b)).count() > 1 {
                return false;
            }
        }
    }
    // no cycles: every chain reaches the table within three steps
    (0..3).all(|start| {
        let mut at = Some(start);
        for _ in 0..4 {
            match at {
                None => return true,
                Some(i) => at = config[i],
            }
        }
        false
    })
}

pub fn all_configs() -> Vec<Config> {
    let choices = [None, Some(0), Some(1), Some(2)];
    let mut out = Vec::new();
    for a in choices {
        for b in choices {
            for c in choices {
                let config = [a, b, c];
                if valid(&config) {
                    out.push(config);
                }
            }
        }
    }
    out
}

fn clear(config: &Config, i: usize) -> bool {
    !config.contains(&Some(i))
}

fn successors(config: &Config) -> Vec<Config> {
    let mut out = Vec::new();
    for x in 0..3 {
        if !clear(config, x) {
            continue;
        }
        let mut targets: Vec<Option<usize>> = vec![None];
        targets.extend((0..3).filter(|&y| y != x && clear(config, y)).map(Some));
        for t in targets {
            if config[x] != t {
                let mut next = *config;
                next[x] = t;
                out.push(next);
            }
        }
    }
    out
}

/// The goal tower a on b on c.
pub const GOAL: Config = [Some(1), Some(2), None];

/// Optimal number of moves to [`GOAL`] for every configuration. Moves are
/// reversible, so a search from the goal gives cost-to-go.
pub fn cost_to_go() -> HashMap<Config, usize> {
    let mut dist = HashMap::from([(GOAL, 0)]);
    let mut queue = VecDeque::from([GOAL]);
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        for n in successors(&c) {
            dist.entry(n).or_insert_with(|| {
                queue.push_back(n);
                d + 1
            });
        }
    }
    dist
}

pub fn domain() -> Domain {
    Domain::new(
        "blocksworld",
        vec![
            Symbol::new("on", 2),
            Symbol::new("ontable", 1),
            Symbol::new("clear", 1),
        ],
        vec![],
        vec![],
    )
    .unwrap()
}

fn state(builder: &ProblemBuilder<'_>, config: &Config) -> State {
    let mut sb = builder.state_builder();
    for (i, below) in config.iter().enumerate() {
        match below {
            Some(j) => sb.proposition("on", &[BLOCKS[i], BLOCKS[*j]]).unwrap(),
            None => sb.proposition("ontable", &[BLOCKS[i]]).unwrap(),
        };
        if clear(config, i) {
            sb.proposition("clear", &[BLOCKS[i]]).unwrap();
        }
    }
    sb.build()
}

/// Every reachable state once, labelled with its cost-to-go.
pub fn dataset() -> Dataset {
    let d = domain();
    let mut b = ProblemBuilder::new(&d, "tower");
    for o in BLOCKS {
        b.object(o).unwrap();
    }
    b.goal("on", &["a", "b"], true).unwrap();
    b.goal("on", &["b", "c"], true).unwrap();
    let dist = cost_to_go();
    let mut configs = all_configs();
    configs.sort();
    let states: Vec<State> = configs.iter().map(|c| state(&b, c)).collect();
    b.set_initial_state(states[0].clone());
    let labels = configs.iter().map(|c| dist[c] as f64).collect();
    let problem = b.build().unwrap();
    Dataset {
        domain: d,
        entries: vec![DatasetEntry {
            problem,
            states,
            labels: Some(labels),
        }],
    }
}

/// Two copies of one state with different labels.
pub fn degenerate_dataset() -> Dataset {
    let mut ds = dataset();
    let entry = &mut ds.entries[0];
    entry.states = vec![entry.states[0].clone(), entry.states[0].clone()];
    entry.labels = Some(vec![0.0, 1.0]);
    ds
}
