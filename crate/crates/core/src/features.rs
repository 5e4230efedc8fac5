//! Dataset-level colour collection, fixed-size embeddings and model files.
//!
//! A [`FeatureModel`] collects the colours a kernel produces over a dataset
//! (in first-seen order) and then embeds any state as the vector of counts of
//! those colours. Colours outside the collected set are ignored. For ccWL the
//! count block is followed by one aggregated continuous feature per colour.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};
use crate::ilg::{ColourTable, IlgGenerator, DEFAULT_NODE_BUDGET};
use crate::kernels::{ColourRegistry, Kernel, KernelKind, KernelOutput};
use crate::task_json::{domain_from_value, domain_to_value};
use crate::task_model::{Domain, Problem, State};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub problem: Problem,
    pub states: Vec<State>,
    /// One label per state when present.
    pub labels: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub domain: Domain,
    pub entries: Vec<DatasetEntry>,
}

impl Dataset {
    pub fn new(domain: Domain) -> Self {
        Dataset {
            domain,
            entries: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.entries.iter().map(|e| e.states.len()).sum()
    }

    /// `(problem_index, state_index)` of every state in serial order.
    pub fn state_refs(&self) -> Vec<StateRef> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(p, e)| {
                (0..e.states.len()).map(move |s| StateRef {
                    problem: p,
                    state: s,
                })
            })
            .collect()
    }

    /// Labels flattened in serial order; fails on the first unlabelled entry.
    pub fn labels(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.num_states());
        for (i, e) in self.entries.iter().enumerate() {
            match &e.labels {
                Some(l) if l.len() == e.states.len() => out.extend(l),
                _ => return Err(Error::MissingLabels(i)),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateRef {
    pub problem: usize,
    pub state: usize,
}

/// How dataset rows are embedded. Without the `parallel` feature both run
/// sequentially.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

fn map_rows<T, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<Vec<f64>>>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<f64>> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishReport {
    pub pairs_total: usize,
    pub pairs_indistinguishable: usize,
    /// Pairs with different labels but equal embeddings.
    pub offending: Vec<(StateRef, StateRef)>,
}

/// Kernel configuration, collected colours and optional linear weights.
#[derive(Debug, Clone)]
pub struct FeatureModel {
    generator: IlgGenerator,
    kernel: Kernel,
    registry: ColourRegistry,
    collected: Vec<Colour>,
    index: HashMap<Colour, usize>,
    is_collected: bool,
    weights: Option<Vec<f64>>,
    bias: Option<f64>,
}

impl PartialEq for FeatureModel {
    fn eq(&self, other: &Self) -> bool {
        self.domain() == other.domain()
            && self.kernel == other.kernel
            && self.registry == other.registry
            && self.collected == other.collected
            && self.is_collected == other.is_collected
            && self.weights == other.weights
            && self.bias == other.bias
    }
}

impl FeatureModel {
    pub fn new(domain: Domain, kernel: Kernel) -> Self {
        let generator = IlgGenerator::new(domain);
        let registry = ColourRegistry::new(generator.colour_table().len() as u32);
        FeatureModel {
            generator,
            kernel,
            registry,
            collected: Vec::new(),
            index: HashMap::new(),
            is_collected: false,
            weights: None,
            bias: None,
        }
    }

    /// Caps νILG node counts and pair-kernel pair counts.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.generator = self.generator.with_node_budget(budget);
        self.kernel = self.kernel.with_pair_budget(budget);
        self
    }

    pub fn domain(&self) -> &Domain {
        self.generator.domain()
    }

    pub fn colour_table(&self) -> &ColourTable {
        self.generator.colour_table()
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn registry(&self) -> &ColourRegistry {
        &self.registry
    }

    /// Collected colours in feature order.
    pub fn collected(&self) -> &[Colour] {
        &self.collected
    }

    pub fn is_collected(&self) -> bool {
        self.is_collected
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn bias(&self) -> Option<f64> {
        self.bias
    }

    /// Length of an embedding.
    pub fn dimension(&self) -> usize {
        match self.kernel.kind {
            KernelKind::Ccwl => 2 * self.collected.len(),
            _ => self.collected.len(),
        }
    }

    fn check_domain(&self, domain_name: &str) -> Result<()> {
        if domain_name != self.domain().name {
            return Err(Error::DomainMismatch {
                expected: self.domain().name.clone(),
                found: domain_name.to_string(),
            });
        }
        Ok(())
    }

    fn check_dataset(&self, dataset: &Dataset) -> Result<()> {
        if &dataset.domain != self.domain() {
            return Err(Error::DomainMismatch {
                expected: self.domain().name.clone(),
                found: dataset.domain.name.clone(),
            });
        }
        Ok(())
    }

    fn record(&mut self, output: &KernelOutput) {
        for (c, _) in output.colours.iter() {
            if !self.index.contains_key(&c) {
                self.index.insert(c, self.collected.len());
                self.collected.push(c);
            }
        }
    }

    /// Runs the kernel over every state in collect mode and appends unseen
    /// colours to the feature list. Repeated calls extend the list.
    pub fn collect(&mut self, dataset: &Dataset) -> Result<()> {
        self.check_dataset(dataset)?;
        let mut generator = self.generator.clone();
        for entry in &dataset.entries {
            generator.set_problem(&entry.problem)?;
            for state in &entry.states {
                let graph = generator.to_graph(state)?;
                let output = self.kernel.run(&graph, &mut self.registry.collector())?;
                self.record(&output);
            }
        }
        self.is_collected = true;
        Ok(())
    }

    /// Collects directly from graphs whose colours come from this model's table.
    pub fn collect_graphs(&mut self, graphs: &[Graph]) -> Result<()> {
        for graph in graphs {
            let output = self.kernel.run(graph, &mut self.registry.collector())?;
            self.record(&output);
        }
        self.is_collected = true;
        Ok(())
    }

    /// Raw kernel output against the frozen registry.
    pub fn kernel_output(&self, graph: &Graph) -> Result<KernelOutput> {
        self.kernel.run(graph, &mut self.registry.embedder())
    }

    pub fn embed_graph(&self, graph: &Graph) -> Result<Vec<f64>> {
        if !self.is_collected {
            return Err(Error::ModelNotCollected);
        }
        let output = self.kernel_output(graph)?;
        let n = self.collected.len();
        let mut x = vec![0.0; self.dimension()];
        for (c, count) in output.colours.iter() {
            if let Some(&i) = self.index.get(&c) {
                x[i] = count as f64;
            }
        }
        if let Some(continuous) = &output.continuous {
            for (c, value) in continuous {
                if let Some(&i) = self.index.get(c) {
                    x[n + i] = *value;
                }
            }
        }
        Ok(x)
    }

    pub fn embed_graphs(&self, graphs: &[Graph], exec: Execution) -> Result<Vec<Vec<f64>>> {
        map_rows(exec, graphs, |g| self.embed_graph(g))
    }

    pub fn to_graph(&self, problem: &Problem, state: &State) -> Result<Graph> {
        self.check_domain(&problem.domain_name)?;
        let mut generator = self.generator.clone();
        generator.set_problem(problem)?;
        generator.to_graph(state)
    }

    pub fn embed_state(&self, problem: &Problem, state: &State) -> Result<Vec<f64>> {
        if !self.is_collected {
            return Err(Error::ModelNotCollected);
        }
        self.embed_graph(&self.to_graph(problem, state)?)
    }

    /// One row per state, in dataset order.
    pub fn embed_dataset(&self, dataset: &Dataset) -> Result<Vec<Vec<f64>>> {
        self.embed_dataset_with(dataset, Execution::default())
    }

    pub fn embed_dataset_with(&self, dataset: &Dataset, exec: Execution) -> Result<Vec<Vec<f64>>> {
        if !self.is_collected {
            return Err(Error::ModelNotCollected);
        }
        self.check_dataset(dataset)?;
        let generators = dataset
            .entries
            .iter()
            .map(|e| {
                let mut g = self.generator.clone();
                g.set_problem(&e.problem).map(|_| g)
            })
            .collect::<Result<Vec<_>>>()?;
        let refs = dataset.state_refs();
        map_rows(exec, &refs, |r| {
            let state = &dataset.entries[r.problem].states[r.state];
            self.embed_graph(&generators[r.problem].to_graph(state)?)
        })
    }

    pub fn set_weights(&mut self, weights: Vec<f64>, bias: Option<f64>) -> Result<()> {
        if weights.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: weights.len(),
            });
        }
        self.weights = Some(weights);
        self.bias = bias;
        Ok(())
    }

    pub fn clear_weights(&mut self) {
        self.weights = None;
        self.bias = None;
    }

    /// `weights · x + bias` for an embedding `x`.
    pub fn predict_embedding(&self, x: &[f64]) -> Result<f64> {
        let w = self.weights.as_ref().ok_or(Error::NoWeights)?;
        if w.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: w.len(),
            });
        }
        Ok(w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.bias.unwrap_or(0.0))
    }

    pub fn predict(&self, problem: &Problem, state: &State) -> Result<f64> {
        if self.weights.is_none() {
            return Err(Error::NoWeights);
        }
        self.predict_embedding(&self.embed_state(problem, state)?)
    }

    /// Counts state pairs with different labels whose embeddings agree
    /// component-wise within `tolerance`.
    pub fn distinguish(&self, dataset: &Dataset, tolerance: f64) -> Result<DistinguishReport> {
        let labels = dataset.labels()?;
        let rows = self.embed_dataset(dataset)?;
        Ok(count_indistinguishable(
            &rows,
            &labels,
            &dataset.state_refs(),
            tolerance,
        ))
    }

    pub fn to_json(&self) -> Result<String> {
        if !self.is_collected {
            return Err(Error::ModelNotCollected);
        }
        let kind = self.kernel.kind;
        let aggregator = match kind {
            KernelKind::Ccwl => Value::from(self.kernel.aggregator.name()),
            _ => Value::Null,
        };
        let table: Vec<String> = self
            .colour_table()
            .colours()
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut out = String::from("{\n");
        let mut field = |name: &str, value: String, last: bool| {
            out.push_str(&format!(
                "  \"{name}\": {value}{}\n",
                if last { "" } else { "," }
            ));
        };
        field("schema_version", j(&SCHEMA_VERSION), false);
        field("domain", j(&domain_to_value(self.domain())), false);
        field("kernel", j(&kind.name()), false);
        field("iterations", j(&self.kernel.iterations), false);
        field("aggregator", j(&aggregator), false);
        field("colour_table", j(&table), false);
        let entries = self.registry.entries();
        let registry = if entries.is_empty() {
            "[]".to_string()
        } else {
            let lines: Vec<String> = entries.iter().map(|e| format!("    {}", j(e))).collect();
            format!("[\n{}\n  ]", lines.join(",\n"))
        };
        field("registry", registry, false);
        field("collected", j(&self.collected), false);
        field("weights", j(&self.weights), false);
        field("bias", j(&self.bias), true);
        out.push_str("}\n");
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text)?;
        match raw.get("schema_version").and_then(Value::as_u64) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            other => {
                return Err(Error::SchemaVersionMismatch(format!(
                    "expected schema_version {SCHEMA_VERSION}, found {other:?}"
                )))
            }
        }
        let file: ModelFile = serde_json::from_value(raw)?;
        let kind: KernelKind = file.kernel.parse()?;
        let mut kernel = Kernel::new(kind, file.iterations);
        if let Some(a) = &file.aggregator {
            kernel = kernel.with_aggregator(a.parse()?);
        }
        let domain = domain_from_value(&file.domain)?;
        let mut model = FeatureModel::new(domain, kernel);
        let table: Vec<String> = model
            .colour_table()
            .colours()
            .iter()
            .map(ToString::to_string)
            .collect();
        if table != file.colour_table {
            return Err(Error::CorruptRegistry(
                "colour table does not match the domain".into(),
            ));
        }
        let base = table.len() as u32;
        model.registry = ColourRegistry::from_entries(base, file.registry)?;
        for &c in &file.collected {
            let known = c <= model.registry.individualised()
                || (c > model.registry.unseen() && c < base + 2 + model.registry.len() as u32);
            if !known {
                return Err(Error::CorruptRegistry(format!(
                    "collected colour {c} is unknown"
                )));
            }
            if model.index.insert(c, model.collected.len()).is_some() {
                return Err(Error::CorruptRegistry(format!(
                    "collected colour {c} repeats"
                )));
            }
            model.collected.push(c);
        }
        model.is_collected = true;
        if let Some(w) = file.weights {
            model.set_weights(w, file.bias)?;
        } else if file.bias.is_some() {
            return Err(Error::Schema("bias without weights".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

fn j<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("model fields serialise")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    #[allow(dead_code)]
    schema_version: u32,
    domain: Value,
    kernel: String,
    iterations: usize,
    aggregator: Option<String>,
    colour_table: Vec<String>,
    registry: Vec<(Vec<u32>, Colour)>,
    collected: Vec<Colour>,
    weights: Option<Vec<f64>>,
    bias: Option<f64>,
}

fn rows_match(a: &[f64], b: &[f64], tolerance: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tolerance)
}

/// Pairwise check behind [`FeatureModel::distinguish`].
pub fn count_indistinguishable(
    rows: &[Vec<f64>],
    labels: &[f64],
    refs: &[StateRef],
    tolerance: f64,
) -> DistinguishReport {
    let n = rows.len();
    let offending_from = |i: usize| -> Vec<(StateRef, StateRef)> {
        (i + 1..n)
            .filter(|&j| labels[i] != labels[j] && rows_match(&rows[i], &rows[j], tolerance))
            .map(|j| (refs[i], refs[j]))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let offending: Vec<_> = {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .flat_map_iter(offending_from)
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let offending: Vec<_> = (0..n).flat_map(offending_from).collect();
    DistinguishReport {
        pairs_total: n * n.saturating_sub(1) / 2,
        pairs_indistinguishable: offending.len(),
        offending,
    }
}

/// Writes `problem_index,state_index,f0..f{d-1}[,label]` rows.
pub fn write_embedding_csv(
    mut out: impl Write,
    dataset: &Dataset,
    rows: &[Vec<f64>],
    with_labels: bool,
) -> Result<()> {
    let labels = if with_labels {
        Some(dataset.labels()?)
    } else {
        None
    };
    let dim = rows.first().map_or(0, Vec::len);
    let mut header = String::from("problem_index,state_index");
    for i in 0..dim {
        header.push_str(&format!(",f{i}"));
    }
    if with_labels {
        header.push_str(",label");
    }
    writeln!(out, "{header}")?;
    for (k, (r, row)) in dataset.state_refs().iter().zip(rows).enumerate() {
        let mut line = format!("{},{}", r.problem, r.state);
        for x in row {
            line.push_str(&format!(",{x}"));
        }
        if let Some(l) = &labels {
            line.push_str(&format!(",{}", l[k]));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Budget read from `WLKIT_NODE_BUDGET`, falling back to the default.
pub fn budget_from_env() -> Result<usize> {
    match std::env::var("WLKIT_NODE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("WLKIT_NODE_BUDGET=`{v}` is not a count"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Aggregator;
    use crate::task_model::{ProblemBuilder, Symbol};

    fn domain() -> Domain {
        Domain::new(
            "d",
            vec![Symbol::new("p", 1), Symbol::new("q", 2)],
            vec![],
            vec![],
        )
        .unwrap()
    }

    fn dataset(states: &[&[(&str, &[&str])]], labels: Option<Vec<f64>>) -> Dataset {
        let d = domain();
        let mut b = ProblemBuilder::new(&d, "p0");
        for o in ["a", "b", "c"] {
            b.object(o).unwrap();
        }
        b.goal("p", &["a"], true).unwrap();
        let built: Vec<State> = states
            .iter()
            .map(|facts| {
                let mut sb = b.state_builder();
                for (pred, args) in facts.iter() {
                    sb.proposition(pred, args).unwrap();
                }
                sb.build()
            })
            .collect();
        let problem = b.build().unwrap();
        Dataset {
            domain: d,
            entries: vec![DatasetEntry {
                problem,
                states: built,
                labels,
            }],
        }
    }

    #[test]
    fn empty_dataset_collects_nothing() {
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 2));
        m.collect(&Dataset::new(domain())).unwrap();
        assert!(m.collected().is_empty());
        assert!(m.is_collected());
    }

    #[test]
    fn round_zero_collects_initial_colours() {
        let ds = dataset(&[&[("q", &["a", "b"])]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 0));
        m.collect(&ds).unwrap();
        let t = m.colour_table().clone();
        use crate::ilg::PropositionStatus::*;
        assert_eq!(
            m.collected(),
            &[
                t.object(),
                t.proposition(1, AchievedNonGoal),
                t.proposition(0, UnachievedGoal)
            ]
        );
    }

    #[test]
    fn collection_is_idempotent_and_monotone() {
        let ds = dataset(&[&[("q", &["a", "b"])], &[("p", &["a"])]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 2));
        m.collect(&ds).unwrap();
        let first = m.collected().to_vec();
        m.collect(&ds).unwrap();
        assert_eq!(m.collected(), &first[..]);
        let more = dataset(&[&[("q", &["b", "c"]), ("q", &["c", "a"])]], None);
        m.collect(&more).unwrap();
        assert!(m.collected().len() > first.len());
        assert_eq!(&m.collected()[..first.len()], &first[..]);
    }

    #[test]
    fn embedding_counts_and_unseen() {
        let ds = dataset(&[&[("q", &["a", "b"])]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 1));
        assert!(matches!(
            m.embed_dataset(&ds),
            Err(Error::ModelNotCollected)
        ));
        m.collect(&ds).unwrap();
        let x = m.embed_dataset(&ds).unwrap();
        // 3 objects + q(a,b) + goal p(a), two rounds
        assert_eq!(x[0].iter().sum::<f64>(), 2.0 * 5.0);
        // a state whose colours were never collected at round 1
        let other = dataset(
            &[&[("q", &["a", "a"]), ("q", &["b", "c"]), ("p", &["a"])]],
            None,
        );
        let y = m.embed_dataset(&other).unwrap();
        let total: f64 = y[0].iter().sum();
        assert!(total < 2.0 * 6.0);
    }

    #[test]
    fn weights_and_predict() {
        let ds = dataset(&[&[("q", &["a", "b"])]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 1));
        m.collect(&ds).unwrap();
        let (p, s) = (&ds.entries[0].problem, &ds.entries[0].states[0]);
        assert!(matches!(m.predict(p, s), Err(Error::NoWeights)));
        assert!(m.set_weights(vec![1.0], None).is_err());
        m.set_weights(vec![0.0; m.dimension()], None).unwrap();
        assert_eq!(m.predict(p, s).unwrap(), 0.0);
        let x = m.embed_state(p, s).unwrap();
        let mut one_hot = vec![0.0; m.dimension()];
        one_hot[0] = 1.0;
        m.set_weights(one_hot, Some(0.5)).unwrap();
        assert_eq!(m.predict(p, s).unwrap(), x[0] + 0.5);
    }

    #[test]
    fn distinguish_counts_label_conflicts() {
        let rows = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
        let refs: Vec<_> = (0..3)
            .map(|s| StateRef {
                problem: 0,
                state: s,
            })
            .collect();
        let r = count_indistinguishable(&rows, &[1.0, 2.0, 3.0], &refs, 0.0);
        assert_eq!((r.pairs_total, r.pairs_indistinguishable), (3, 1));
        assert_eq!(r.offending, vec![(refs[0], refs[1])]);
        let distinct = vec![vec![1.0], vec![2.0], vec![3.0]];
        assert_eq!(
            count_indistinguishable(&distinct, &[1.0, 2.0, 3.0], &refs, 0.0)
                .pairs_indistinguishable,
            0
        );
        // equal labels never count
        assert_eq!(
            count_indistinguishable(&rows, &[1.0, 1.0, 3.0], &refs, 0.0).pairs_indistinguishable,
            0
        );
        // tolerance merges close rows
        let close = vec![vec![1.0], vec![1.05], vec![3.0]];
        assert_eq!(
            count_indistinguishable(&close, &[1.0, 2.0, 3.0], &refs, 0.1).pairs_indistinguishable,
            1
        );
    }

    #[test]
    fn distinguish_requires_labels() {
        let ds = dataset(&[&[]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 1));
        m.collect(&ds).unwrap();
        assert!(matches!(
            m.distinguish(&ds, 0.0),
            Err(Error::MissingLabels(0))
        ));
    }

    #[test]
    fn model_json_round_trip() {
        let ds = dataset(
            &[&[("q", &["a", "b"])], &[("p", &["a"])]],
            Some(vec![1.0, 0.0]),
        );
        let mut m = FeatureModel::new(
            domain(),
            Kernel::new(KernelKind::Ccwl, 2).with_aggregator(Aggregator::Mean),
        );
        m.collect(&ds).unwrap();
        m.set_weights(
            (0..m.dimension()).map(|i| i as f64 * 0.1).collect(),
            Some(-1.5),
        )
        .unwrap();
        let text = m.to_json().unwrap();
        let back = FeatureModel::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back, m);
    }

    #[test]
    fn model_json_errors() {
        let ds = dataset(&[&[("q", &["a", "b"])]], None);
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Wl, 1));
        assert!(matches!(m.to_json(), Err(Error::ModelNotCollected)));
        m.collect(&ds).unwrap();
        let text = m.to_json().unwrap();
        let bad_kernel = text.replace("\"kernel\": \"wl\"", "\"kernel\": \"3wl\"");
        assert!(matches!(
            FeatureModel::from_json(&bad_kernel),
            Err(Error::SchemaVersionMismatch(_))
        ));
        let bad_version = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(
            FeatureModel::from_json(&bad_version),
            Err(Error::SchemaVersionMismatch(_))
        ));
        let entries = m.registry().entries();
        let (k0, id0) = (&entries[0].0, entries[0].1);
        let (k1, id1) = (&entries[1].0, entries[1].1);
        let dup = text.replace(
            &format!("[{},{id1}]", serde_json::to_string(k1).unwrap()),
            &format!("[{},{id0}]", serde_json::to_string(k1).unwrap()),
        );
        assert_ne!(dup, text);
        let _ = k0;
        assert!(matches!(
            FeatureModel::from_json(&dup),
            Err(Error::CorruptRegistry(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let ds = dataset(&[&[], &[("p", &["a"])]], Some(vec![1.0, 0.0]));
        let rows = vec![vec![1.0, 2.5], vec![0.0, 3.0]];
        let mut buf = Vec::new();
        write_embedding_csv(&mut buf, &ds, &rows, true).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "problem_index,state_index,f0,f1,label\n0,0,1,2.5,1\n0,1,0,3,0\n"
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let ds = dataset(
            &[
                &[("q", &["a", "b"])],
                &[("p", &["a"]), ("q", &["c", "b"])],
                &[],
                &[("p", &["b"])],
            ],
            None,
        );
        let mut m = FeatureModel::new(domain(), Kernel::new(KernelKind::Iwl, 2));
        m.collect(&ds).unwrap();
        assert_eq!(
            m.embed_dataset_with(&ds, Execution::Sequential).unwrap(),
            m.embed_dataset_with(&ds, Execution::Parallel).unwrap()
        );
    }
}
