//! Systems `⟨V, R⟩`: a vertex set with an ordered tuple of quantities over it.

mod attributes;
mod canon;
mod iso;
mod refine;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantity::Quantity;
use crate::universe::Universe;

pub use attributes::{structure_attributes, StructureAttributes, VertexProfile};
pub use canon::{canonical_form, Certificate};
pub use iso::{find_isomorphism, is_homomorphism, Isomorphism};

/// How values must correspond under a vertex map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsoMode {
    /// `R_B(F(x)) = R_A(x)` with identical sign sets.
    #[default]
    ValuePreserving,
    /// `R_B(F(x)) = g(R_A(x))` for some sign bijection `g` per measure.
    SignRelabelling,
}

impl fmt::Display for IsoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoMode::ValuePreserving => "value-preserving",
            IsoMode::SignRelabelling => "sign-relabelling",
        })
    }
}

#[derive(Clone)]
pub struct System {
    vertices: Universe,
    members: Vec<Option<Arc<System>>>,
    measures: Vec<Quantity>,
    strict: bool,
}

impl System {
    /// Every measure must be defined on `vertices`. With `strict`, at least
    /// one measure must be a relation quantity (arity > 1).
    pub fn new(vertices: Universe, measures: Vec<Quantity>, strict: bool) -> Result<Self> {
        if measures.iter().any(|q| q.universe() != &vertices) {
            return Err(Error::UniverseMismatch);
        }
        if strict && !measures.iter().any(|q| q.arity() > 1) {
            return Err(Error::NoRelationQuantity);
        }
        Ok(System {
            members: vec![None; vertices.len()],
            vertices,
            measures,
            strict,
        })
    }

    /// Makes the vertex `id` stand for another system.
    ///
    /// Systems are immutable once built, so a system can only contain
    /// systems that already exist and nesting can never form a cycle.
    pub fn with_member(mut self, id: &str, system: Arc<System>) -> Result<Self> {
        let pos = self
            .vertices
            .position(id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))?;
        self.members[pos] = Some(system);
        Ok(self)
    }

    pub fn vertices(&self) -> &Universe {
        &self.vertices
    }

    pub fn measures(&self) -> &[Quantity] {
        &self.measures
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn member(&self, id: &str) -> Option<&Arc<System>> {
        self.vertices
            .position(id)
            .and_then(|p| self.members[p].as_ref())
    }

    /// No vertex stands for a nested system.
    pub fn is_flat(&self) -> bool {
        self.members.iter().all(Option::is_none)
    }
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("System")
            .field("vertices", &self.vertices)
            .field(
                "measures",
                &self.measures.iter().map(Quantity::name).collect::<Vec<_>>(),
            )
            .field("strict", &self.strict)
            .field(
                "nested",
                &self.members.iter().filter(|m| m.is_some()).count(),
            )
            .finish()
    }
}

/// `sa` appears (by identity) among the vertices of `sb`.
pub fn is_subsystem(sa: &System, sb: &System) -> bool {
    sb.members
        .iter()
        .flatten()
        .any(|m| std::ptr::eq(m.as_ref(), sa))
}

/// `sub` equals `parent` restricted to `sub`'s universe (names ignored).
fn agrees_with_restriction(sub: &Quantity, parent: &Quantity) -> bool {
    sub.arity() == parent.arity()
        && parent
            .restrict(sub.universe())
            .is_ok_and(|r| r.same_map(sub))
}

/// `V_SA ⊆ V_SB` and each measure of `sa` is the corresponding measure of
/// `sb` restricted to `V_SA`. Equal vertex sets are accepted; see
/// [`is_proper_part`].
pub fn is_part(sa: &System, sb: &System) -> bool {
    sa.vertices.is_subset_of(&sb.vertices)
        && sa.measures.len() == sb.measures.len()
        && sa
            .measures
            .iter()
            .zip(&sb.measures)
            .all(|(a, b)| agrees_with_restriction(a, b))
}

pub fn is_proper_part(sa: &System, sb: &System) -> bool {
    is_part(sa, sb) && sa.vertices.len() < sb.vertices.len()
}

/// `sb` has the same vertex set as `sa` and `sa`'s measures occur in `sb`'s
/// measure tuple as a subsequence (equality allowed).
pub fn is_concretion(sb: &System, sa: &System) -> bool {
    if sa.vertices.len() != sb.vertices.len() || !sa.vertices.is_subset_of(&sb.vertices) {
        return false;
    }
    let mut rest = sb.measures.iter();
    sa.measures
        .iter()
        .all(|a| rest.any(|b| agrees_with_restriction(a, b)))
}

/// The measure at `r_index` of `sb` is constant on the part `sa`.
pub fn is_uniform(sa: &System, sb: &System, r_index: usize) -> Result<bool> {
    if !is_part(sa, sb) {
        return Err(Error::NotAPart);
    }
    let measure = sb.measures.get(r_index).ok_or(Error::BadIndex(r_index))?;
    Ok(measure.restrict(&sa.vertices)?.is_constant())
}

/// A total map from the vertices of one system to those of another, by
/// vertex position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    images: Vec<usize>,
    target_len: usize,
    bijective: bool,
}

impl VertexMap {
    pub fn new(images: Vec<usize>, target_len: usize) -> Result<Self> {
        if let Some(bad) = images.iter().find(|&&i| i >= target_len) {
            return Err(Error::UnknownObject(format!("#{bad}")));
        }
        let mut hit = vec![false; target_len];
        let mut injective = true;
        for &i in &images {
            injective &= !std::mem::replace(&mut hit[i], true);
        }
        let bijective = injective && images.len() == target_len;
        Ok(VertexMap {
            images,
            target_len,
            bijective,
        })
    }

    /// Builds a map from id pairs; every id of `from` needs an image.
    pub fn from_ids<'a, I>(from: &Universe, to: &Universe, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut images: Vec<Option<usize>> = vec![None; from.len()];
        for (a, b) in pairs {
            let pa = from
                .position(a)
                .ok_or_else(|| Error::UnknownObject(a.to_string()))?;
            let pb = to
                .position(b)
                .ok_or_else(|| Error::UnknownObject(b.to_string()))?;
            images[pa] = Some(pb);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::MapNotTotal(from.id(i).to_string())))
            .collect::<Result<Vec<_>>>()?;
        VertexMap::new(images, to.len())
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            images: (0..n).collect(),
            target_len: n,
            bijective: true,
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, vertex: usize) -> usize {
        self.images[vertex]
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &VertexMap) -> Result<VertexMap> {
        if next.images.len() != self.target_len {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose a map into {} vertices with a map from {}",
                self.target_len,
                next.images.len()
            )));
        }
        VertexMap::new(
            self.images.iter().map(|&i| next.images[i]).collect(),
            next.target_len,
        )
    }

    pub fn inverse(&self) -> Option<VertexMap> {
        if !self.bijective {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        VertexMap::new(inv, self.images.len()).ok()
    }
}

fn check_shape(sa: &System, sb: &System) -> Result<()> {
    if sa.measures.len() != sb.measures.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} measures",
            sa.measures.len(),
            sb.measures.len()
        )));
    }
    for (i, (a, b)) in sa.measures.iter().zip(&sb.measures).enumerate() {
        if a.arity() != b.arity() {
            return Err(Error::ShapeMismatch(format!(
                "measure {i} has arity {} vs {}",
                a.arity(),
                b.arity()
            )));
        }
    }
    Ok(())
}
