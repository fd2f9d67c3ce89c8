//! Relations between quantities on a shared universe: value-level
//! correspondences, independence, dependence, equivalence, meet/join and
//! complete sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::quantity::{Quantity, SignSet};

pub const DEFAULT_MAX_COMPLETE_SET_SIZE: usize = 4;

/// Which signs the universal quantifiers range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignScope {
    /// Only signs that some tuple actually takes.
    #[default]
    Realized,
    /// Every declared sign, used or not.
    Declared,
}

/// How the fibers of two single values relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueCorrespondence {
    /// Fibers intersect (Z-Z).
    pub zz: bool,
    /// Left fiber is nonempty and inside the right fiber (Z->Z).
    pub forward: bool,
    pub backward: bool,
    /// Both directions (Z<->Z).
    pub bidirectional: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantityRelation {
    pub left_constant: bool,
    pub right_constant: bool,
    pub independent: bool,
    /// `L ->_A S`: the left quantity determines the right one.
    pub left_determines_right: bool,
    pub right_determines_left: bool,
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompleteSetFailure {
    /// The meet of the members does not separate every tuple.
    NotATagMeet,
    ConstantMember(usize),
    /// Members `i` and `j` are not independent.
    DependentPair(usize, usize),
}

impl fmt::Display for CompleteSetFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompleteSetFailure::NotATagMeet => f.write_str("not-a-tag-meet"),
            CompleteSetFailure::ConstantMember(i) => write!(f, "constant-member({i})"),
            CompleteSetFailure::DependentPair(i, j) => write!(f, "dependent-pair({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSetReport {
    pub members: Vec<String>,
    pub is_complete: bool,
    pub failures: Vec<CompleteSetFailure>,
}

fn check_pair(left: &Quantity, right: &Quantity) -> Result<()> {
    if left.arity() != right.arity() {
        return Err(Error::ArityMismatch {
            expected: left.arity(),
            found: right.arity(),
        });
    }
    if left.universe() != right.universe() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

fn sign_index(q: &Quantity, sign: &str) -> Result<u32> {
    q.signs()
        .index_of(sign)
        .ok_or_else(|| Error::UnknownSign(sign.to_string()))
}

pub fn value_correspondence(
    left: &Quantity,
    right: &Quantity,
    left_sign: &str,
    right_sign: &str,
) -> Result<ValueCorrespondence> {
    check_pair(left, right)?;
    let li = sign_index(left, left_sign)?;
    let ri = sign_index(right, right_sign)?;
    let (mut left_nonempty, mut right_nonempty) = (false, false);
    let (mut zz, mut left_inside, mut right_inside) = (false, true, true);
    for (&l, &r) in left.table().iter().zip(right.table()) {
        let (in_l, in_r) = (l == li, r == ri);
        left_nonempty |= in_l;
        right_nonempty |= in_r;
        zz |= in_l && in_r;
        left_inside &= !in_l || in_r;
        right_inside &= !in_r || in_l;
    }
    let forward = left_nonempty && left_inside;
    let backward = right_nonempty && right_inside;
    Ok(ValueCorrespondence {
        zz,
        forward,
        backward,
        bidirectional: forward && backward,
    })
}

pub fn is_constant(q: &Quantity) -> bool {
    q.is_constant()
}

/// Co-occurrence matrix of sign pairs, row-major over `left`'s signs.
fn co_occurrence(left: &Quantity, right: &Quantity) -> Vec<bool> {
    let width = right.signs().len();
    let mut seen = vec![false; left.signs().len() * width];
    for (&l, &r) in left.table().iter().zip(right.table()) {
        seen[l as usize * width + r as usize] = true;
    }
    seen
}

/// Every pair of signs in scope co-occurs on some tuple.
pub fn is_independent(left: &Quantity, right: &Quantity, scope: SignScope) -> Result<bool> {
    check_pair(left, right)?;
    let seen = co_occurrence(left, right);
    let width = right.signs().len();
    let (lu, ru) = match scope {
        SignScope::Realized => (left.realized(), right.realized()),
        SignScope::Declared => (vec![true; left.signs().len()], vec![true; width]),
    };
    Ok(lu.iter().enumerate().filter(|(_, u)| **u).all(|(i, _)| {
        ru.iter()
            .enumerate()
            .filter(|(_, u)| **u)
            .all(|(j, _)| seen[i * width + j])
    }))
}

/// `L ->_A S`: every nonempty fiber of `left` lies inside one fiber of `right`.
pub fn is_dependent(left: &Quantity, right: &Quantity) -> Result<bool> {
    check_pair(left, right)?;
    let mut image: Vec<Option<u32>> = vec![None; left.signs().len()];
    for (&l, &r) in left.table().iter().zip(right.table()) {
        match image[l as usize] {
            None => image[l as usize] = Some(r),
            Some(prev) if prev != r => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Both quantities induce the same partition.
pub fn are_equivalent(left: &Quantity, right: &Quantity) -> Result<bool> {
    check_pair(left, right)?;
    Ok(left.induced_partition() == right.induced_partition())
}

pub fn relate(left: &Quantity, right: &Quantity, scope: SignScope) -> Result<QuantityRelation> {
    check_pair(left, right)?;
    let forward = is_dependent(left, right)?;
    let backward = is_dependent(right, left)?;
    Ok(QuantityRelation {
        left_constant: left.is_constant(),
        right_constant: right.is_constant(),
        independent: is_independent(left, right, scope)?,
        left_determines_right: forward,
        right_determines_left: backward,
        equivalent: forward && backward,
    })
}

/// Greatest lower bound. Signs are pair labels `⟨l,s⟩` for the co-occurring
/// sign pairs, ordered by the operands' sign order.
pub fn quantity_meet(left: &Quantity, right: &Quantity) -> Result<Quantity> {
    check_pair(left, right)?;
    let width = right.signs().len();
    let seen = co_occurrence(left, right);
    let mut code = vec![u32::MAX; seen.len()];
    let mut labels = Vec::new();
    for (cell, _) in seen.iter().enumerate().filter(|(_, s)| **s) {
        code[cell] = labels.len() as u32;
        labels.push(format!(
            "⟨{},{}⟩",
            left.signs().get((cell / width) as u32),
            right.signs().get((cell % width) as u32)
        ));
    }
    let table = left
        .table()
        .iter()
        .zip(right.table())
        .map(|(&l, &r)| code[l as usize * width + r as usize])
        .collect();
    Quantity::from_table(
        format!("{}∧{}", left.name(), right.name()),
        left.universe().clone(),
        left.arity(),
        SignSet::new(labels)?,
        table,
    )
}

/// Least upper bound, with fresh block labels `J0, J1, ...`.
pub fn quantity_join(left: &Quantity, right: &Quantity) -> Result<Quantity> {
    check_pair(left, right)?;
    let joined = left.induced_partition().join(&right.induced_partition())?;
    let labels = (0..joined.block_count()).map(|b| format!("J{b}"));
    Quantity::from_table(
        format!("{}∨{}", left.name(), right.name()),
        left.universe().clone(),
        left.arity(),
        SignSet::new(labels)?,
        joined.labels().to_vec(),
    )
}

fn check_pool(qs: &[Quantity], arity: usize) -> Result<()> {
    let first = qs.first().ok_or(Error::EmptySet)?;
    for q in qs {
        if q.arity() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: q.arity(),
            });
        }
        if q.universe() != first.universe() {
            return Err(Error::UniverseMismatch);
        }
    }
    Ok(())
}

fn meet_partition<'a>(parts: impl Iterator<Item = &'a Partition>) -> Partition {
    let mut parts = parts;
    let first = parts.next().expect("nonempty").clone();
    parts.fold(first, |acc, p| acc.meet(p).expect("same domain"))
}

/// Checks the three conditions of an n-ary complete set: the meet is a tag,
/// no member is constant, members are pairwise independent.
pub fn is_complete_set(
    qs: &[Quantity],
    arity: usize,
    scope: SignScope,
) -> Result<CompleteSetReport> {
    check_pool(qs, arity)?;
    let mut failures = Vec::new();
    let parts: Vec<Partition> = qs.iter().map(Quantity::induced_partition).collect();
    if !meet_partition(parts.iter()).is_discrete() {
        failures.push(CompleteSetFailure::NotATagMeet);
    }
    for (i, q) in qs.iter().enumerate() {
        if q.is_constant() {
            failures.push(CompleteSetFailure::ConstantMember(i));
        }
    }
    for i in 0..qs.len() {
        for j in i + 1..qs.len() {
            if !is_independent(&qs[i], &qs[j], scope)? {
                failures.push(CompleteSetFailure::DependentPair(i, j));
            }
        }
    }
    Ok(CompleteSetReport {
        members: qs.iter().map(|q| q.name().to_string()).collect(),
        is_complete: failures.is_empty(),
        failures,
    })
}

/// All inclusion-minimal complete subsets of size at most `max_size`, as
/// ascending index lists in lexicographic order.
pub fn find_complete_sets(
    qs: &[Quantity],
    arity: usize,
    max_size: usize,
    scope: SignScope,
) -> Result<Vec<Vec<usize>>> {
    check_pool(qs, arity)?;
    let n = qs.len();
    let parts: Vec<Partition> = qs.iter().map(Quantity::induced_partition).collect();
    let usable: Vec<bool> = qs.iter().map(|q| !q.is_constant()).collect();
    let mut independent = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let ind = usable[i] && usable[j] && is_independent(&qs[i], &qs[j], scope)?;
            independent[i * n + j] = ind;
            independent[j * n + i] = ind;
        }
    }

    struct Search<'a> {
        n: usize,
        parts: &'a [Partition],
        usable: &'a [bool],
        independent: &'a [bool],
        found: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn contains_found(&self, chosen: &[usize]) -> bool {
            self.found
                .iter()
                .any(|f| f.iter().all(|x| chosen.binary_search(x).is_ok()))
        }

        fn extend(&mut self, chosen: &mut Vec<usize>, meet: Option<&Partition>, size: usize) {
            if chosen.len() == size {
                if meet.is_some_and(Partition::is_discrete) && !self.contains_found(chosen) {
                    self.found.push(chosen.clone());
                }
                return;
            }
            let start = chosen.last().map_or(0, |l| l + 1);
            for next in start..self.n {
                if !self.usable[next]
                    || !chosen.iter().all(|&c| self.independent[c * self.n + next])
                {
                    continue;
                }
                chosen.push(next);
                if !self.contains_found(chosen) {
                    let m = match meet {
                        Some(m) => m.meet(&self.parts[next]).expect("same domain"),
                        None => self.parts[next].clone(),
                    };
                    self.extend(chosen, Some(&m), size);
                }
                chosen.pop();
            }
        }
    }

    let mut search = Search {
        n,
        parts: &parts,
        usable: &usable,
        independent: &independent,
        found: Vec::new(),
    };
    for size in 1..=max_size.min(n) {
        search.extend(&mut Vec::new(), None, size);
    }
    let mut found = search.found;
    found.sort();
    Ok(found)
}
