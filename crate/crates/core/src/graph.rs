//! Node-featured, edge-labelled undirected graphs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge label. `0` is reserved for numeric-goal edges, `i >= 1` for argument
/// position `i`.
pub type EdgeLabel = u32;

/// Categorical node colour / refined colour id.
pub type Colour = u32;

/// Undirected graph with one categorical and one continuous feature per node.
///
/// Adjacency is symmetric. A node pair may be joined by several edges only if
/// their labels differ, which happens when an atom repeats an argument
/// (`on(a, a)`).
#[derive(Debug, Clone)]
pub struct Graph {
    categorical: Vec<Colour>,
    continuous: Vec<f64>,
    adjacency: Vec<Vec<(u32, EdgeLabel)>>,
    names: Option<Vec<String>>,
}

/// Graphs are equal when features, names and edge sets agree, whatever the
/// order edges were added in.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.categorical == other.categorical
            && self.continuous == other.continuous
            && self.names == other.names
            && self.edges() == other.edges()
    }
}

impl Graph {
    /// `categorical` and `continuous` must have equal length.
    pub fn new(categorical: Vec<Colour>, continuous: Vec<f64>) -> Result<Self> {
        if categorical.len() != continuous.len() {
            return Err(Error::InvalidGraph(format!(
                "{} categorical vs {} continuous features",
                categorical.len(),
                continuous.len()
            )));
        }
        let n = categorical.len();
        Ok(Graph {
            categorical,
            continuous,
            adjacency: vec![Vec::new(); n],
            names: None,
        })
    }

    /// Graph with `n` nodes of one colour and zero continuous features.
    pub fn uniform(n: usize, colour: Colour) -> Self {
        Graph::new(vec![colour; n], vec![0.0; n]).expect("lengths agree")
    }

    /// Builds from an undirected edge list.
    pub fn from_edges(
        categorical: Vec<Colour>,
        continuous: Vec<f64>,
        edges: &[(usize, usize, EdgeLabel)],
    ) -> Result<Self> {
        let mut g = Graph::new(categorical, continuous)?;
        for &(u, v, l) in edges {
            g.add_edge(u, v, l)?;
        }
        Ok(g)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.node_count() {
            return Err(Error::InvalidGraph(format!(
                "{} names for {} nodes",
                names.len(),
                self.node_count()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Adds an undirected edge. Self-loops and repeated (pair, label) edges are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize, label: EdgeLabel) -> Result<()> {
        let n = self.node_count();
        for node in [u, v] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, count: n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
        }
        if self.adjacency[u].contains(&(v as u32, label)) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {u}-{v} with label {label}"
            )));
        }
        self.adjacency[u].push((v as u32, label));
        self.adjacency[v].push((u as u32, label));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.categorical.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn categorical(&self) -> &[Colour] {
        &self.categorical
    }

    pub fn continuous(&self) -> &[f64] {
        &self.continuous
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn neighbours(&self, u: usize) -> Result<&[(u32, EdgeLabel)]> {
        self.adjacency
            .get(u)
            .map(Vec::as_slice)
            .ok_or(Error::NodeOutOfRange {
                node: u,
                count: self.node_count(),
            })
    }

    /// Unchecked adjacency access for the kernels' inner loops.
    pub(crate) fn adjacency(&self) -> &[Vec<(u32, EdgeLabel)>] {
        &self.adjacency
    }

    /// Each undirected edge once, as `(min, max, label)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeLabel)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| {
                adj.iter()
                    .filter(move |(v, _)| (*v as usize) > u)
                    .map(move |&(v, l)| (u, v as usize, l))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted labels of the edges between `u` and `v`.
    pub fn labels_between(&self, u: usize, v: usize) -> Vec<EdgeLabel> {
        let mut ls: Vec<_> = self.adjacency[u]
            .iter()
            .filter(|(w, _)| *w as usize == v)
            .map(|&(_, l)| l)
            .collect();
        ls.sort_unstable();
        ls
    }

    /// True when every edge appears in both endpoint lists with the same label.
    pub fn is_symmetric(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(u, adj)| {
            adj.iter()
                .all(|&(v, l)| self.adjacency[v as usize].contains(&(u as u32, l)))
        })
    }

    /// Returns the graph with node `i` moved to position `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidGraph("not a permutation".into()));
        }
        let mut categorical = vec![0; n];
        let mut continuous = vec![0.0; n];
        for i in 0..n {
            categorical[perm[i]] = self.categorical[i];
            continuous[perm[i]] = self.continuous[i];
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, adj) in self.adjacency.iter().enumerate() {
            adjacency[perm[u]] = adj
                .iter()
                .map(|&(v, l)| (perm[v as usize] as u32, l))
                .collect();
        }
        let names = self.names.as_ref().map(|names| {
            let mut out = vec![String::new(); n];
            for (i, name) in names.iter().enumerate() {
                out[perm[i]] = name.clone();
            }
            out
        });
        Ok(Graph {
            categorical,
            continuous,
            adjacency,
            names,
        })
    }

    /// DOT rendering with numeric colour ids as labels.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|c| c.to_string())
    }

    /// DOT rendering; `colour_name` turns categorical ids into readable labels.
    /// Nodes are emitted in id order and edges in [`edges`](Self::edges) order.
    pub fn to_dot_with(&self, colour_name: impl Fn(Colour) -> String) -> String {
        let mut out = String::from("graph G {\n");
        for i in 0..self.node_count() {
            let colour = colour_name(self.categorical[i]);
            let label = match &self.names {
                Some(names) => format!("{}\\n{}", escape(&names[i]), escape(&colour)),
                None => escape(&colour),
            };
            let _ = write!(out, "  n{i} [label=\"{label}\"");
            if self.continuous[i] != 0.0 {
                let _ = write!(out, ", value={}", self.continuous[i]);
            }
            out.push_str("];\n");
        }
        for (u, v, l) in self.edges() {
            let _ = writeln!(out, "  n{u} -- n{v} [label=\"{l}\"];");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphJson::from(self)).expect("graph serialises")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(text)?;
        if raw.categorical.len() != raw.node_count {
            return Err(Error::InvalidGraph(
                "node_count disagrees with features".into(),
            ));
        }
        let mut g = Graph::from_edges(raw.categorical, raw.continuous, &raw.edges)?;
        if let Some(names) = raw.names {
            g = g.with_names(names)?;
        }
        Ok(g)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    node_count: usize,
    categorical: Vec<Colour>,
    continuous: Vec<f64>,
    edges: Vec<(usize, usize, EdgeLabel)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            node_count: g.node_count(),
            categorical: g.categorical.clone(),
            continuous: g.continuous.clone(),
            edges: g.edges(),
            names: g.names.clone(),
        }
    }
}
