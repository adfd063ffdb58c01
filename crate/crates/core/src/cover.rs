use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{Graph, VertexSet};

/// Where a cover vertex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Peeled by Local-Peeling on `machine` during compressed `phase` (both 1-based).
    /// When several machines peel the same vertex, the lowest index is kept.
    Machine { phase: usize, machine: usize },
    /// Removed by the post-phase high-degree sweep of `phase`.
    Cleanup { phase: usize },
    /// Added by the final phase.
    Final,
    /// Peeled by the sequential process at `iteration` (1-based).
    Sequential { iteration: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverResult {
    pub cover: VertexSet,
    #[serde(serialize_with = "provenance_as_list")]
    pub provenance: BTreeMap<usize, Provenance>,
    pub size: usize,
}

fn provenance_as_list<S: serde::Serializer>(
    map: &BTreeMap<usize, Provenance>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        vertex: usize,
        #[serde(flatten)]
        source: &'a Provenance,
    }
    serializer.collect_seq(map.iter().map(|(&vertex, source)| Entry { vertex, source }))
}

impl CoverResult {
    pub fn new(universe: usize) -> Self {
        CoverResult { cover: VertexSet::empty(universe), provenance: BTreeMap::new(), size: 0 }
    }

    /// Adds `v` unless it is already present; the first provenance wins.
    pub fn add(&mut self, v: usize, source: Provenance) {
        if !self.cover.contains(v) {
            self.cover.insert(v);
            self.provenance.insert(v, source);
            self.size += 1;
        }
    }

    pub fn extend(&mut self, vs: &VertexSet, source: Provenance) {
        for v in vs.iter() {
            self.add(v, source);
        }
    }

    /// Fails with an invariant error naming an uncovered edge.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match g.uncovered_edge(&self.cover) {
            None => Ok(()),
            Some((u, v)) => Err(Error::Invariant(format!("edge ({u}, {v}) left uncovered"))),
        }
    }
}
