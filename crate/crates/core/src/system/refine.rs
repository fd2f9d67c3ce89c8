//! Flattened systems and iterated color refinement.

use super::{IsoMode, System};

pub(crate) struct FlatMeasure {
    pub arity: usize,
    /// Per-tuple code compared between systems: the sign's rank in the
    /// sorted declared sign list (value-preserving) or the raw sign index
    /// (sign-relabelling).
    pub table: Vec<u32>,
    /// Per-tuple value seen by refinement; invariant under the mode's
    /// notion of isomorphism.
    pub value: Vec<u32>,
}

pub(crate) struct Flat {
    pub n: usize,
    pub measures: Vec<FlatMeasure>,
}

impl Flat {
    pub fn new(system: &System, mode: IsoMode) -> Flat {
        let measures = system
            .measures()
            .iter()
            .map(|q| {
                let raw = q.table();
                match mode {
                    IsoMode::ValuePreserving => {
                        let mut order: Vec<u32> = (0..q.signs().len() as u32).collect();
                        order.sort_by(|a, b| q.signs().get(*a).cmp(q.signs().get(*b)));
                        let mut code = vec![0; order.len()];
                        for (rank, s) in order.into_iter().enumerate() {
                            code[s as usize] = rank as u32;
                        }
                        let table: Vec<u32> = raw.iter().map(|&s| code[s as usize]).collect();
                        FlatMeasure {
                            arity: q.arity(),
                            value: table.clone(),
                            table,
                        }
                    }
                    IsoMode::SignRelabelling => {
                        let mut fiber = vec![0u32; q.signs().len()];
                        for &s in raw {
                            fiber[s as usize] += 1;
                        }
                        FlatMeasure {
                            arity: q.arity(),
                            table: raw.to_vec(),
                            value: raw.iter().map(|&s| fiber[s as usize]).collect(),
                        }
                    }
                }
            })
            .collect();
        Flat {
            n: system.vertices().len(),
            measures,
        }
    }
}

/// Calls `f(rank, tuple)` for every tuple of `{0..n}^k` in rank order.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(usize, &[usize])) {
    let total = n.pow(k as u32);
    let mut t = vec![0usize; k];
    for rank in 0..total {
        f(rank, &t);
        for slot in t.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
}

pub(crate) fn rank_of(n: usize, tuple: impl IntoIterator<Item = usize>) -> usize {
    tuple.into_iter().fold(0, |acc, p| acc * n + p)
}

pub(crate) type Signature = Vec<Vec<u32>>;

/// For each vertex, the sorted multiset of
/// `(measure, position, value, colors of the tuple)` over the tuples it
/// occurs in, prefixed by its current color.
pub(crate) fn signatures(flat: &Flat, colors: &[u32]) -> Vec<Signature> {
    let mut sigs: Vec<Signature> = (0..flat.n).map(|v| vec![vec![colors[v]]]).collect();
    for (m, measure) in flat.measures.iter().enumerate() {
        for_each_tuple(flat.n, measure.arity, |rank, t| {
            let mut entry = Vec::with_capacity(3 + t.len());
            entry.push(m as u32);
            entry.push(0);
            entry.push(measure.value[rank]);
            entry.extend(t.iter().map(|&v| colors[v]));
            for (p, &v) in t.iter().enumerate() {
                entry[1] = p as u32;
                sigs[v].push(entry.clone());
            }
        });
    }
    for s in &mut sigs {
        s[1..].sort_unstable();
    }
    sigs
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Refines an ordered coloring to the coarsest stable one below it.
///
/// Colors are cell offsets: a vertex's color is the number of vertices in
/// strictly smaller cells, so a discrete coloring is a vertex ordering.
pub(crate) fn refine(flat: &Flat, colors: &mut [u32]) {
    let mut count = distinct(colors);
    loop {
        let sigs = signatures(flat, colors);
        let mut order: Vec<usize> = (0..flat.n).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut next = vec![0u32; flat.n];
        for (i, &v) in order.iter().enumerate() {
            next[v] = if i > 0 && sigs[order[i - 1]] == sigs[v] {
                next[order[i - 1]]
            } else {
                i as u32
            };
        }
        colors.copy_from_slice(&next);
        let refined = distinct(colors);
        if refined == count {
            return;
        }
        count = refined;
    }
}
