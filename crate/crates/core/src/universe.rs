//! Ordered finite object sets and lexicographic tuple ranking.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::checked_table_len;

/// An ordered, nonempty set of distinct object identifiers.
///
/// The order is fixed at construction; it defines how k-tuples are ranked
/// (leftmost coordinate most significant). Cloning is cheap.
#[derive(Clone)]
pub struct Universe {
    inner: Arc<Inner>,
}

struct Inner {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (pos, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), pos).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Universe {
            inner: Arc::new(Inner { ids, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> &[String] {
        &self.inner.ids
    }

    pub fn id(&self, pos: usize) -> &str {
        &self.inner.ids[pos]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.inner.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.inner.index.contains_key(id)
    }

    /// `|A|^k`, guarded by the global size cap.
    pub fn tuple_count(&self, arity: usize) -> Result<usize> {
        checked_table_len(self.len(), arity)
    }

    /// Rank of a tuple given by object positions.
    pub fn rank_positions(&self, positions: &[usize]) -> usize {
        let n = self.len();
        positions.iter().fold(0, |acc, &p| acc * n + p)
    }

    /// Rank of a tuple given by object ids.
    pub fn rank<S: AsRef<str>>(&self, tuple: &[S]) -> Result<usize> {
        let n = self.len();
        let mut rank = 0usize;
        for id in tuple {
            let id = id.as_ref();
            let pos = self
                .position(id)
                .ok_or_else(|| Error::UnknownObject(id.to_string()))?;
            rank = rank * n + pos;
        }
        Ok(rank)
    }

    /// Object positions of the tuple with the given rank.
    pub fn unrank(&self, mut rank: usize, arity: usize) -> Vec<usize> {
        let n = self.len();
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = rank % n;
            rank /= n;
        }
        out
    }

    pub fn unrank_ids(&self, rank: usize, arity: usize) -> Vec<&str> {
        self.unrank(rank, arity)
            .into_iter()
            .map(|p| self.id(p))
            .collect()
    }

    /// Iterator over all k-tuples of positions in rank order.
    pub fn tuples(&self, arity: usize) -> Result<Tuples> {
        let total = self.tuple_count(arity)?;
        Ok(Tuples {
            base: self.len(),
            current: vec![0; arity],
            remaining: total,
        })
    }

    /// All k-tuples as id sequences, in lexicographic order.
    pub fn enumerate_tuples(&self, arity: usize) -> Result<Vec<Vec<&str>>> {
        Ok(self
            .tuples(arity)?
            .map(|t| t.into_iter().map(|p| self.id(p)).collect())
            .collect())
    }

    /// Whether every id of `self` occurs in `other`.
    pub fn is_subset_of(&self, other: &Universe) -> bool {
        self.ids().iter().all(|id| other.contains(id))
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.ids == other.inner.ids
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Universe").field(&self.inner.ids).finish()
    }
}

/// Odometer over `{0..base}^k`.
pub struct Tuples {
    base: usize,
    current: Vec<usize>,
    remaining: usize,
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone();
        for slot in self.current.iter_mut().rev() {
            *slot += 1;
            if *slot < self.base {
                break;
            }
            *slot = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Tuples {}
