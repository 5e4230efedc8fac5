use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::Colour;

/// Lazily built injective map from canonical refinement keys to colour ids.
///
/// Ids `0..base` are the categorical node features. `base` is the
/// individualisation colour and `base + 1` marks unseen keys; refined colours
/// are numbered densely from `base + 2` in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourRegistry {
    base: u32,
    ids: HashMap<Vec<u32>, Colour>,
    next: Colour,
}

impl ColourRegistry {
    pub fn new(base_colours: u32) -> Self {
        ColourRegistry {
            base: base_colours,
            ids: HashMap::new(),
            next: base_colours + 2,
        }
    }

    /// Number of categorical colours the registry sits on top of.
    pub fn base_colours(&self) -> u32 {
        self.base
    }

    pub fn individualised(&self) -> Colour {
        self.base
    }

    pub fn unseen(&self) -> Colour {
        self.base + 1
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, key: &[u32]) -> Option<Colour> {
        self.ids.get(key).copied()
    }

    /// Exclusive handle that assigns fresh ids to new keys.
    pub fn collector(&mut self) -> Collector<'_> {
        Collector(self)
    }

    /// Shared, read-only handle; unknown keys map to [`unseen`](Self::unseen).
    pub fn embedder(&self) -> Embedder<'_> {
        Embedder(self)
    }

    /// All `(key, id)` pairs sorted by key.
    pub fn entries(&self) -> Vec<(Vec<u32>, Colour)> {
        let mut out: Vec<_> = self.ids.iter().map(|(k, &v)| (k.clone(), v)).collect();
        out.sort_unstable();
        out
    }

    /// Rebuilds a registry, re-checking that ids are distinct and dense.
    pub fn from_entries(base_colours: u32, entries: Vec<(Vec<u32>, Colour)>) -> Result<Self> {
        let first = base_colours + 2;
        let mut ids = HashMap::with_capacity(entries.len());
        let mut seen = HashSet::with_capacity(entries.len());
        for (key, id) in entries {
            if id < first {
                return Err(Error::CorruptRegistry(format!(
                    "id {id} collides with a reserved colour (< {first})"
                )));
            }
            if !seen.insert(id) {
                return Err(Error::CorruptRegistry(format!("id {id} is assigned twice")));
            }
            if ids.insert(key.clone(), id).is_some() {
                return Err(Error::CorruptRegistry(format!("key {key:?} appears twice")));
            }
        }
        let next = first + ids.len() as u32;
        if let Some(&bad) = seen.iter().find(|&&id| id >= next) {
            return Err(Error::CorruptRegistry(format!(
                "ids are not dense: {bad} with only {} entries",
                ids.len()
            )));
        }
        Ok(ColourRegistry {
            base: base_colours,
            ids,
            next,
        })
    }
}

/// Access to colour ids during refinement.
pub trait ColourSource {
    fn registry(&self) -> &ColourRegistry;
    fn colour(&mut self, key: &[u32]) -> Colour;
}

pub struct Collector<'a>(&'a mut ColourRegistry);

impl ColourSource for Collector<'_> {
    fn registry(&self) -> &ColourRegistry {
        self.0
    }

    fn colour(&mut self, key: &[u32]) -> Colour {
        if let Some(&id) = self.0.ids.get(key) {
            return id;
        }
        let id = self.0.next;
        self.0.next += 1;
        self.0.ids.insert(key.to_vec(), id);
        id
    }
}

#[derive(Clone, Copy)]
pub struct Embedder<'a>(&'a ColourRegistry);

impl ColourSource for Embedder<'_> {
    fn registry(&self) -> &ColourRegistry {
        self.0
    }

    fn colour(&mut self, key: &[u32]) -> Colour {
        self.0.ids.get(key).copied().unwrap_or(self.0.base + 1)
    }
}
