//! Colour refinement kernels over [`Graph`]s.
//!
//! All kernels share a [`ColourRegistry`]. Collecting goes through
//! [`ColourRegistry::collector`] (exclusive), embedding through
//! [`ColourRegistry::embedder`] (shared, read-only).

mod node;
mod pairs;
mod registry;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::graph::{Colour, Graph};

pub use node::{ccwl, iwl, wl};
pub use pairs::{two_lwl, two_wl};
pub use registry::{Collector, ColourRegistry, ColourSource, Embedder};

/// Default cap on the number of node pairs the pair kernels refine.
pub const DEFAULT_PAIR_BUDGET: usize = 1_000_000;

// Leading tag of every registry key, so keys of different shapes never meet.
pub(crate) const KEY_NODE: u32 = 0;
pub(crate) const KEY_PAIR_INIT: u32 = 1;
pub(crate) const KEY_PAIR: u32 = 2;
pub(crate) const KEY_SET_INIT: u32 = 3;
pub(crate) const KEY_SET: u32 = 4;

/// Multiset of colours, iterated in first-insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColourMultiset {
    counts: IndexMap<Colour, u64>,
}

impl ColourMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, colour: Colour) {
        *self.counts.entry(colour).or_insert(0) += 1;
    }

    pub fn count(&self, colour: Colour) -> u64 {
        self.counts.get(&colour).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of distinct colours.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Colour, u64)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    /// `(colour, count)` sorted by colour.
    pub fn sorted(&self) -> Vec<(Colour, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Wl,
    TwoWl,
    TwoLwl,
    Iwl,
    Ccwl,
}

impl KernelKind {
    pub const ALL: [KernelKind; 5] = [
        KernelKind::Wl,
        KernelKind::TwoWl,
        KernelKind::TwoLwl,
        KernelKind::Iwl,
        KernelKind::Ccwl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Wl => "wl",
            KernelKind::TwoWl => "2wl",
            KernelKind::TwoLwl => "2lwl",
            KernelKind::Iwl => "iwl",
            KernelKind::Ccwl => "ccwl",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::SchemaVersionMismatch(format!("unknown kernel `{s}`")))
    }
}

/// How ccWL combines the continuous features of the nodes sharing a colour.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Aggregator {
    #[default]
    Sum,
    Mean,
    Max,
}

impl Aggregator {
    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Sum => "sum",
            Aggregator::Mean => "mean",
            Aggregator::Max => "max",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Aggregator::Sum),
            "mean" => Ok(Aggregator::Mean),
            "max" => Ok(Aggregator::Max),
            _ => Err(Error::SchemaVersionMismatch(format!(
                "unknown aggregator `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelOutput {
    pub colours: ColourMultiset,
    /// Per-colour aggregated continuous feature; ccWL only.
    pub continuous: Option<IndexMap<Colour, f64>>,
}

/// A configured kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kernel {
    pub kind: KernelKind,
    pub iterations: usize,
    pub aggregator: Aggregator,
    pub pair_budget: usize,
}

impl Kernel {
    pub fn new(kind: KernelKind, iterations: usize) -> Self {
        Kernel {
            kind,
            iterations,
            aggregator: Aggregator::Sum,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }

    pub fn with_aggregator(mut self, aggregator: Aggregator) -> Self {
        self.aggregator = aggregator;
        self
    }

    pub fn with_pair_budget(mut self, budget: usize) -> Self {
        self.pair_budget = budget;
        self
    }

    pub fn run<S: ColourSource>(&self, g: &Graph, source: &mut S) -> Result<KernelOutput> {
        let l = self.iterations;
        let colours = match self.kind {
            KernelKind::Wl => wl(g, l, source)?,
            KernelKind::TwoWl => two_wl(g, l, source, self.pair_budget)?,
            KernelKind::TwoLwl => two_lwl(g, l, source, self.pair_budget)?,
            KernelKind::Iwl => iwl(g, l, source)?,
            KernelKind::Ccwl => {
                let (colours, continuous) = ccwl(g, l, source, self.aggregator)?;
                return Ok(KernelOutput {
                    colours,
                    continuous: Some(continuous),
                });
            }
        };
        Ok(KernelOutput {
            colours,
            continuous: None,
        })
    }
}

/// Node colours must be table colours or the individualisation colour.
pub(crate) fn validate(g: &Graph, registry: &ColourRegistry) -> Result<()> {
    let limit = registry.individualised();
    match g.categorical().iter().find(|&&c| c > limit) {
        Some(&c) => Err(Error::InvalidGraph(format!(
            "categorical colour {c} outside the {} base colours",
            registry.base_colours()
        ))),
        None => Ok(()),
    }
}
