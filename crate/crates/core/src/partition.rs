//! Set partitions of an index space `[0, N)` and their lattice operations.
//!
//! Block ids are canonical: they are assigned in order of first occurrence
//! over the index order, so two `Partition` values are equal exactly when
//! they describe the same set partition.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<u32>,
    block_count: u32,
}

impl Partition {
    /// Groups indices by equal label (the fibers of the labeling).
    pub fn from_labeling<T: Hash + Eq>(labels: &[T]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut ids: HashMap<&T, u32> = HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Ok(Partition {
            block_of,
            block_count: ids.len() as u32,
        })
    }

    /// Re-canonicalizes a raw block assignment.
    pub(crate) fn from_raw(raw: &[u32]) -> Self {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let block_of = raw
            .iter()
            .map(|b| {
                let next = remap.len() as u32;
                *remap.entry(*b).or_insert(next)
            })
            .collect();
        Partition {
            block_of,
            block_count: remap.len() as u32,
        }
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Partition {
            block_of: (0..n as u32).collect(),
            block_count: n as u32,
        })
    }

    /// One block holding everything.
    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Partition {
            block_of: vec![0; n],
            block_count: 1,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count as usize
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.block_of
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count() == self.domain_size()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_count == 1
    }

    /// Blocks in block-id order, each listing its indices ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, b) in self.block_of.iter().enumerate() {
            blocks[*b as usize].push(i);
        }
        blocks
    }

    fn check_domain(&self, other: &Partition) -> Result<()> {
        if self.domain_size() != other.domain_size() {
            return Err(Error::DomainMismatch {
                left: self.domain_size(),
                right: other.domain_size(),
            });
        }
        Ok(())
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn is_refinement(&self, other: &Partition) -> Result<bool> {
        self.check_domain(other)?;
        let mut target: Vec<Option<u32>> = vec![None; self.block_count()];
        for (b, ob) in self.block_of.iter().zip(&other.block_of) {
            match target[*b as usize] {
                None => target[*b as usize] = Some(*ob),
                Some(t) if t != *ob => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// Common refinement: nonempty intersections of blocks.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_domain(other)?;
        let pairs: Vec<(u32, u32)> = self
            .block_of
            .iter()
            .copied()
            .zip(other.block_of.iter().copied())
            .collect();
        Partition::from_labeling(&pairs)
    }

    /// Finest common coarsening: connected components of co-membership.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_domain(other)?;
        let n = self.domain_size();
        let mut uf = UnionFind::new(n);
        let mut first_p: Vec<Option<usize>> = vec![None; self.block_count()];
        let mut first_q: Vec<Option<usize>> = vec![None; other.block_count()];
        for i in 0..n {
            let bp = self.block_of[i] as usize;
            let bq = other.block_of[i] as usize;
            match first_p[bp] {
                Some(j) => {
                    uf.union(i, j);
                }
                None => first_p[bp] = Some(i),
            }
            match first_q[bq] {
                Some(j) => {
                    uf.union(i, j);
                }
                None => first_q[bq] = Some(i),
            }
        }
        let roots: Vec<u32> = (0..n).map(|i| uf.find(i) as u32).collect();
        Ok(Partition::from_raw(&roots))
    }

    /// The partition induced on a subset of indices, renumbered `0..indices.len()`.
    pub fn restrict(&self, indices: &[usize]) -> Result<Partition> {
        let labels: Vec<u32> = indices.iter().map(|&i| self.block_of[i]).collect();
        Partition::from_labeling(&labels)
    }
}

/// Every set partition of `[0, n)`, generated as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition {
                block_of: prefix.clone(),
                block_count: max,
            });
            return;
        }
        for b in 0..=max {
            prefix.push(b);
            grow(prefix, max.max(b + 1), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    grow(&mut vec![0], 1, n, &mut out);
    out
}

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
