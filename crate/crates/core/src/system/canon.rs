//! Canonical certificates by individualization and refinement.
//!
//! The search tree branches on the vertices of the first largest
//! non-singleton cell of the refined coloring. Each leaf is a vertex order;
//! the certificate is the lexicographically smallest table encoding over
//! all leaves. Automorphisms found at equal leaves prune sibling branches
//! in the same orbit and cut back to the divergence point.

use std::fmt;

use sha2::{Digest, Sha256};

use super::refine::{for_each_tuple, rank_of, refine, Flat};
use super::{IsoMode, System};
use crate::error::{Error, Result};
use crate::partition::UnionFind;

/// Byte encoding of a system up to vertex renaming; equal iff isomorphic
/// in the mode it was computed for.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// SHA-256 of the certificate bytes, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.0))
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({})", self.to_hex())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical_form(system: &System, mode: IsoMode) -> Result<Certificate> {
    if !system.is_flat() {
        return Err(Error::NestedSystem);
    }
    let (encoding, _) = canonical_labeling(system, mode);
    let mut bytes = header(system, mode);
    for code in encoding {
        bytes.extend_from_slice(&code.to_le_bytes());
    }
    Ok(Certificate(bytes))
}

fn push_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_le_bytes());
}

fn header(system: &System, mode: IsoMode) -> Vec<u8> {
    let mut out = b"GSC1".to_vec();
    out.push(match mode {
        IsoMode::ValuePreserving => 0,
        IsoMode::SignRelabelling => 1,
    });
    push_u32(&mut out, system.vertices().len());
    push_u32(&mut out, system.measures().len());
    for q in system.measures() {
        push_u32(&mut out, q.arity());
        push_u32(&mut out, q.signs().len());
        if mode == IsoMode::ValuePreserving {
            let mut signs: Vec<&String> = q.signs().signs().iter().collect();
            signs.sort();
            for s in signs {
                push_u32(&mut out, s.len());
                out.extend_from_slice(s.as_bytes());
            }
        }
    }
    out
}

/// Tables of every measure read through `order` (position -> vertex).
fn encode(flat: &Flat, order: &[usize], mode: IsoMode) -> Vec<u32> {
    let mut out = Vec::new();
    for m in &flat.measures {
        let width = m.table.iter().max().map_or(0, |x| *x as usize + 1);
        let mut relabel: Vec<Option<u32>> = vec![None; width];
        let mut next = 0u32;
        for_each_tuple(flat.n, m.arity, |_, t| {
            let code = m.table[rank_of(flat.n, t.iter().map(|&p| order[p]))];
            out.push(match mode {
                IsoMode::ValuePreserving => code,
                IsoMode::SignRelabelling => *relabel[code as usize].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                }),
            });
        });
    }
    out
}

struct Leaf {
    encoding: Vec<u32>,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    flat: &'a Flat,
    mode: IsoMode,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    /// Returns `Some(level)` to unwind to the node at depth `level`.
    fn visit(&mut self, mut colors: Vec<u32>, path: &mut Vec<usize>) -> Option<usize> {
        refine(self.flat, &mut colors);
        let n = self.flat.n;

        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            cells[colors[v] as usize].push(v);
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
            .map(|(i, _)| i);

        let Some(cell_color) = target else {
            return self.leaf(&colors, path);
        };
        let cell = std::mem::take(&mut cells[cell_color]);
        let depth = path.len();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &cell {
            if !tried.is_empty() {
                let mut orbits = UnionFind::new(n);
                for a in self
                    .automorphisms
                    .iter()
                    .filter(|a| path.iter().all(|&p| a[p] == p))
                {
                    for (v, &img) in a.iter().enumerate() {
                        orbits.union(v, img);
                    }
                }
                let root = orbits.find(w);
                if tried.iter().any(|&t| orbits.find(t) == root) {
                    continue;
                }
            }
            tried.push(w);
            let mut child = colors.clone();
            for &u in &cell {
                if u != w {
                    child[u] = cell_color as u32 + 1;
                }
            }
            path.push(w);
            let jump = self.visit(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colors: &[u32], path: &[usize]) -> Option<usize> {
        let mut order = vec![0; self.flat.n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let encoding = encode(self.flat, &order, self.mode);
        let leaf = Leaf {
            encoding,
            order,
            path: path.to_vec(),
        };
        if self.first.is_none() {
            self.first = Some(Leaf {
                encoding: leaf.encoding.clone(),
                order: leaf.order.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        }
        for reference in [self.first.as_ref(), self.best.as_ref()]
            .into_iter()
            .flatten()
        {
            if reference.encoding == leaf.encoding {
                // vertex at position p here plays the role of reference.order[p]
                let mut auto = vec![0; self.flat.n];
                for (p, &v) in leaf.order.iter().enumerate() {
                    auto[v] = reference.order[p];
                }
                let level = common_prefix(&reference.path, &leaf.path);
                self.automorphisms.push(auto);
                return Some(level);
            }
        }
        if self
            .best
            .as_ref()
            .is_some_and(|b| leaf.encoding < b.encoding)
        {
            self.best = Some(leaf);
        }
        None
    }
}

/// Smallest leaf encoding and the vertex order producing it.
pub(crate) fn canonical_labeling(system: &System, mode: IsoMode) -> (Vec<u32>, Vec<usize>) {
    let flat = Flat::new(system, mode);
    let mut search = Search {
        flat: &flat,
        mode,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(vec![0; flat.n], &mut Vec::new());
    let best = search.best.expect("search reaches at least one leaf");
    (best.encoding, best.order)
}
