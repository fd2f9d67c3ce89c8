//! Quantities: total maps from the k-tuples of a universe into a sign set.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::universe::Universe;

/// An ordered, nonempty set of distinct sign identifiers.
#[derive(Clone)]
pub struct SignSet {
    inner: Arc<SignInner>,
}

struct SignInner {
    signs: Vec<String>,
    index: HashMap<String, u32>,
}

impl SignSet {
    pub fn new<I, S>(signs: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let signs: Vec<String> = signs.into_iter().map(Into::into).collect();
        if signs.is_empty() {
            return Err(Error::EmptySignSet);
        }
        let mut index = HashMap::with_capacity(signs.len());
        for (i, s) in signs.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::DuplicateSign(s.clone()));
            }
        }
        Ok(SignSet {
            inner: Arc::new(SignInner { signs, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn signs(&self) -> &[String] {
        &self.inner.signs
    }

    pub fn get(&self, index: u32) -> &str {
        &self.inner.signs[index as usize]
    }

    pub fn index_of(&self, sign: &str) -> Option<u32> {
        self.inner.index.get(sign).copied()
    }

    pub fn contains(&self, sign: &str) -> bool {
        self.inner.index.contains_key(sign)
    }

    /// Same signs, order ignored.
    pub fn same_members(&self, other: &SignSet) -> bool {
        self.len() == other.len() && self.signs().iter().all(|s| other.contains(s))
    }
}

impl PartialEq for SignSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.signs == other.inner.signs
    }
}

impl Eq for SignSet {}

impl fmt::Debug for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SignSet").field(&self.inner.signs).finish()
    }
}

/// A named total function `F: A^k -> R`, stored as a dense table of sign
/// indices in lexicographic tuple-rank order.
#[derive(Clone, PartialEq, Eq)]
pub struct Quantity {
    name: String,
    universe: Universe,
    arity: usize,
    signs: SignSet,
    table: Arc<[u32]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// k = 0
    Scalar,
    /// k = 1
    Attribute,
    /// k > 1
    Relation,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Scalar => "scalar",
            Kind::Attribute => "attribute",
            Kind::Relation => "relation-quantity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: Kind,
    /// F is not injective.
    pub degenerate: bool,
    /// F is a bijection onto the declared sign set.
    pub is_tag: bool,
    /// F is a bijection onto the signs it actually uses.
    pub bijective_onto_realized: bool,
    /// Number of realized signs (the size of the image of F).
    pub element_count: usize,
    pub declared_count: usize,
    pub is_constant: bool,
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() {
        Err(Error::EmptyName)
    } else {
        Ok(())
    }
}

fn check_disjoint(universe: &Universe, signs: &SignSet) -> Result<()> {
    match signs.signs().iter().find(|s| universe.contains(s)) {
        Some(s) => Err(Error::SignObjectClash(s.clone())),
        None => Ok(()),
    }
}

fn describe(universe: &Universe, rank: usize, arity: usize) -> String {
    universe.unrank_ids(rank, arity).join(",")
}

impl Quantity {
    /// Builds a quantity from a dense table of sign indices.
    pub fn from_table(
        name: impl Into<String>,
        universe: Universe,
        arity: usize,
        signs: SignSet,
        table: Vec<u32>,
    ) -> Result<Self> {
        let name = name.into();
        check_name(&name)?;
        check_disjoint(&universe, &signs)?;
        let expected = universe.tuple_count(arity)?;
        if table.len() < expected {
            return Err(Error::IncompleteMap(describe(
                &universe,
                table.len(),
                arity,
            )));
        }
        if table.len() > expected {
            return Err(Error::TableLength {
                expected,
                found: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|&&s| s as usize >= signs.len()) {
            return Err(Error::UnknownSign(format!("#{bad}")));
        }
        Ok(Quantity {
            name,
            universe,
            arity,
            signs,
            table: table.into(),
        })
    }

    /// Builds a quantity from an explicit tuple-to-sign assignment that must
    /// cover every tuple exactly once.
    pub fn from_assignments<I, T, S, V>(
        name: impl Into<String>,
        universe: Universe,
        arity: usize,
        signs: SignSet,
        assignments: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (T, V)>,
        T: AsRef<[S]>,
        S: AsRef<str>,
        V: AsRef<str>,
    {
        let name = name.into();
        check_name(&name)?;
        check_disjoint(&universe, &signs)?;
        let total = universe.tuple_count(arity)?;
        let mut table: Vec<Option<u32>> = vec![None; total];
        for (tuple, sign) in assignments {
            let tuple = tuple.as_ref();
            if tuple.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: tuple.len(),
                });
            }
            let rank = universe.rank(tuple)?;
            let sign = sign.as_ref();
            let s = signs
                .index_of(sign)
                .ok_or_else(|| Error::UnknownSign(sign.to_string()))?;
            if table[rank].replace(s).is_some() {
                return Err(Error::DuplicateAssignment(describe(&universe, rank, arity)));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(rank, s)| {
                s.ok_or_else(|| Error::IncompleteMap(describe(&universe, rank, arity)))
            })
            .collect::<Result<Vec<u32>>>()?;
        Quantity::from_table(name, universe, arity, signs, table)
    }

    /// Materializes a rule over every tuple of `A^k`.
    pub fn from_fn<F, V>(
        name: impl Into<String>,
        universe: Universe,
        arity: usize,
        signs: SignSet,
        mut rule: F,
    ) -> Result<Self>
    where
        F: FnMut(&[&str]) -> V,
        V: AsRef<str>,
    {
        let mut table = Vec::with_capacity(universe.tuple_count(arity)?);
        for t in universe.tuples(arity)? {
            let ids: Vec<&str> = t.iter().map(|&p| universe.id(p)).collect();
            let v = rule(&ids);
            let v = v.as_ref();
            table.push(
                signs
                    .index_of(v)
                    .ok_or_else(|| Error::UnknownSign(v.to_string()))?,
            );
        }
        Quantity::from_table(name, universe, arity, signs, table)
    }

    /// Like [`Quantity::from_fn`], with the sign set taken from the values
    /// the rule produces, in first-occurrence order.
    pub fn from_rule<F, V>(
        name: impl Into<String>,
        universe: Universe,
        arity: usize,
        mut rule: F,
    ) -> Result<Self>
    where
        F: FnMut(&[&str]) -> V,
        V: Into<String>,
    {
        let mut seen: HashMap<String, u32> = HashMap::new();
        let mut order = Vec::new();
        let mut table = Vec::with_capacity(universe.tuple_count(arity)?);
        for t in universe.tuples(arity)? {
            let ids: Vec<&str> = t.iter().map(|&p| universe.id(p)).collect();
            let v: String = rule(&ids).into();
            let next = seen.len() as u32;
            let idx = *seen.entry(v.clone()).or_insert_with(|| {
                order.push(v);
                next
            });
            table.push(idx);
        }
        Quantity::from_table(name, universe, arity, SignSet::new(order)?, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn signs(&self) -> &SignSet {
        &self.signs
    }

    /// Sign indices in tuple-rank order.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn tuple_count(&self) -> usize {
        self.table.len()
    }

    pub fn sign_at(&self, rank: usize) -> &str {
        self.signs.get(self.table[rank])
    }

    pub fn renamed(&self, name: impl Into<String>) -> Result<Quantity> {
        let name = name.into();
        check_name(&name)?;
        Ok(Quantity {
            name,
            ..self.clone()
        })
    }

    /// Same universe, arity, sign set and table; the name is ignored.
    pub fn same_map(&self, other: &Quantity) -> bool {
        self.arity == other.arity
            && self.universe == other.universe
            && self.signs == other.signs
            && self.table == other.table
    }

    /// `R(x_1, ..., x_k)`.
    pub fn evaluate<S: AsRef<str>>(&self, tuple: &[S]) -> Result<&str> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: tuple.len(),
            });
        }
        Ok(self.sign_at(self.universe.rank(tuple)?))
    }

    fn sign_index(&self, sign: &str) -> Result<u32> {
        self.signs
            .index_of(sign)
            .ok_or_else(|| Error::UnknownSign(sign.to_string()))
    }

    /// Ranks of `{x in A^k | R(x) = sign}`.
    pub fn preimage_ranks(&self, sign: &str) -> Result<Vec<usize>> {
        let s = self.sign_index(sign)?;
        Ok(self
            .table
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == s)
            .map(|(r, _)| r)
            .collect())
    }

    /// `{x in A^k | R(x) = sign}` as id tuples; empty for unused signs.
    pub fn preimage(&self, sign: &str) -> Result<Vec<Vec<&str>>> {
        Ok(self
            .preimage_ranks(sign)?
            .into_iter()
            .map(|r| self.universe.unrank_ids(r, self.arity))
            .collect())
    }

    /// Fibers of the table as a partition of the rank space.
    pub fn induced_partition(&self) -> Partition {
        Partition::from_raw(&self.table)
    }

    /// Which declared signs occur in the table.
    pub fn realized(&self) -> Vec<bool> {
        let mut used = vec![false; self.signs.len()];
        for &s in self.table.iter() {
            used[s as usize] = true;
        }
        used
    }

    pub fn realized_count(&self) -> usize {
        self.realized().into_iter().filter(|u| *u).count()
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&s| s == self.table[0])
    }

    pub fn classify(&self) -> Classification {
        let kind = match self.arity {
            0 => Kind::Scalar,
            1 => Kind::Attribute,
            _ => Kind::Relation,
        };
        let element_count = self.realized_count();
        let injective = element_count == self.table.len();
        Classification {
            kind,
            degenerate: !injective,
            is_tag: injective && element_count == self.signs.len(),
            bijective_onto_realized: injective,
            element_count,
            declared_count: self.signs.len(),
            is_constant: element_count == 1,
        }
    }

    /// The same rule on a subset `B` of the universe, over `B^k` in `B`'s order.
    pub fn restrict(&self, sub: &Universe) -> Result<Quantity> {
        let to_parent = sub
            .ids()
            .iter()
            .map(|id| {
                self.universe
                    .position(id)
                    .ok_or_else(|| Error::NotASubset(id.clone()))
            })
            .collect::<Result<Vec<usize>>>()?;
        let table = sub
            .tuples(self.arity)?
            .map(|t| {
                let parent: Vec<usize> = t.iter().map(|&p| to_parent[p]).collect();
                self.table[self.universe.rank_positions(&parent)]
            })
            .collect();
        Quantity::from_table(
            self.name.clone(),
            sub.clone(),
            self.arity,
            self.signs.clone(),
            table,
        )
    }

    /// Lifts to arity `m` by projecting onto `coords`:
    /// `Q(y_0, ..., y_{m-1}) = R(y_{coords[0]}, ..., y_{coords[k-1]})`.
    pub fn lift(&self, m: usize, coords: &[usize]) -> Result<Quantity> {
        if m <= self.arity {
            return Err(Error::ArityNotLarger {
                arity: self.arity,
                target: m,
            });
        }
        if coords.len() != self.arity {
            return Err(Error::BadCoordinates(format!(
                "expected {} coordinates, got {}",
                self.arity,
                coords.len()
            )));
        }
        let mut seen = vec![false; m];
        for &c in coords {
            if c >= m {
                return Err(Error::BadCoordinates(format!("{c} is out of range 0..{m}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::BadCoordinates(format!("{c} is repeated")));
            }
        }
        let table = self
            .universe
            .tuples(m)?
            .map(|t| {
                let projected: Vec<usize> = coords.iter().map(|&c| t[c]).collect();
                self.table[self.universe.rank_positions(&projected)]
            })
            .collect();
        Quantity::from_table(
            format!("{}@{}", self.name, m),
            self.universe.clone(),
            m,
            self.signs.clone(),
            table,
        )
    }

    /// Lift using the first `k` coordinates.
    pub fn lift_default(&self, m: usize) -> Result<Quantity> {
        let coords: Vec<usize> = (0..self.arity).collect();
        self.lift(m, &coords)
    }

    /// Composes `outer: L^m -> R` after `self: A^n -> L`, giving an
    /// `(n*m)`-ary quantity on `A`:
    /// `C(x_1, ..., x_m) = outer(self(x_1), ..., self(x_m))` with each `x_j`
    /// an n-tuple.
    pub fn compose(&self, outer: &Quantity) -> Result<Quantity> {
        let inner_signs = &self.signs;
        let outer_objects = outer.universe();
        if outer_objects.len() != inner_signs.len()
            || !inner_signs
                .signs()
                .iter()
                .all(|s| outer_objects.contains(s))
        {
            return Err(Error::UniverseSignMismatch);
        }
        let to_outer: Vec<usize> = inner_signs
            .signs()
            .iter()
            .map(|s| outer_objects.position(s).expect("checked above"))
            .collect();
        let n = self.arity;
        let m = outer.arity;
        let arity = n * m;
        let table = self
            .universe
            .tuples(arity)?
            .map(|t| {
                let outer_tuple: Vec<usize> = (0..m)
                    .map(|j| {
                        let chunk = &t[j * n..(j + 1) * n];
                        to_outer[self.table[self.universe.rank_positions(chunk)] as usize]
                    })
                    .collect();
                outer.table[outer_objects.rank_positions(&outer_tuple)]
            })
            .collect();
        Quantity::from_table(
            format!("{}∘{}", outer.name, self.name),
            self.universe.clone(),
            arity,
            outer.signs.clone(),
            table,
        )
    }
}

impl fmt::Debug for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quantity")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("universe", &self.universe)
            .field("signs", &self.signs)
            .field("table", &self.table)
            .finish()
    }
}
