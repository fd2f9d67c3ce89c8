//! Isomorphism-invariant summaries of a system.

use super::canon::canonical_form;
use super::{IsoMode, System};
use crate::system::refine::for_each_tuple;

/// The multiset of `(measure, position, sign)` occurrences of one vertex,
/// sorted.
pub type VertexProfile = Vec<(usize, usize, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAttributes {
    pub vertex_count: usize,
    pub measure_arities: Vec<usize>,
    pub realized_sign_counts: Vec<usize>,
    pub block_counts: Vec<usize>,
    /// One profile per vertex, sorted, so the list is itself a multiset.
    pub vertex_profiles: Vec<VertexProfile>,
    /// Digest of the value-preserving certificate; absent for systems with
    /// nested members.
    pub certificate_digest: Option<String>,
}

pub fn structure_attributes(system: &System) -> StructureAttributes {
    let n = system.vertices().len();
    let measures = system.measures();
    let mut profiles: Vec<VertexProfile> = vec![Vec::new(); n];
    for (m, q) in measures.iter().enumerate() {
        for_each_tuple(n, q.arity(), |rank, t| {
            for (p, &v) in t.iter().enumerate() {
                profiles[v].push((m, p, q.sign_at(rank).to_string()));
            }
        });
    }
    for p in &mut profiles {
        p.sort();
    }
    profiles.sort();
    StructureAttributes {
        vertex_count: n,
        measure_arities: measures.iter().map(|q| q.arity()).collect(),
        realized_sign_counts: measures.iter().map(|q| q.realized_count()).collect(),
        block_counts: measures
            .iter()
            .map(|q| q.induced_partition().block_count())
            .collect(),
        vertex_profiles: profiles,
        certificate_digest: canonical_form(system, IsoMode::ValuePreserving)
            .ok()
            .map(|c| c.digest()),
    }
}

impl StructureAttributes {
    /// Sizes of the groups of vertices sharing a profile, largest first.
    pub fn profile_class_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self
            .vertex_profiles
            .chunk_by(|a, b| a == b)
            .map(<[_]>::len)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}
