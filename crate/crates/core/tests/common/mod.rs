//! Generators and brute-force oracles shared by the integration tests.
//! Nothing here calls into the library's partition, lattice or isomorphism
//! routines; the oracles work from evaluated values only.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use gensys::{IsoMode, Quantity, SignSet, System, Universe};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn universe(n: usize) -> Universe {
    Universe::new((0..n).map(|i| format!("o{i}"))).unwrap()
}

pub fn signs(k: usize, prefix: &str) -> SignSet {
    SignSet::new((0..k).map(|i| format!("{prefix}{i}"))).unwrap()
}

pub fn random_quantity<R: Rng>(
    rng: &mut R,
    name: &str,
    u: &Universe,
    arity: usize,
    max_signs: usize,
) -> Quantity {
    let k = rng.random_range(1..=max_signs);
    let total = u.len().pow(arity as u32);
    let table = (0..total).map(|_| rng.random_range(0..k as u32)).collect();
    Quantity::from_table(name, u.clone(), arity, signs(k, "s"), table).unwrap()
}

/// Every tuple of `u^k` as id vectors, built by plain nested extension.
pub fn all_tuples(u: &Universe, k: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<String>| {
                u.ids().iter().map(move |id| {
                    let mut t = t.clone();
                    t.push(id.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Fibers of `q` computed by grouping evaluated tuples, as sets of tuples.
pub fn brute_fibers(q: &Quantity) -> BTreeSet<BTreeSet<Vec<String>>> {
    let mut groups: HashMap<String, BTreeSet<Vec<String>>> = HashMap::new();
    for t in all_tuples(q.universe(), q.arity()) {
        let s = q.evaluate(&t).unwrap().to_string();
        groups.entry(s).or_default().insert(t);
    }
    groups.into_values().collect()
}

/// Whether block `a` of one labeling lies inside some block of another,
/// by pairwise comparison over indices.
pub fn brute_refines(p: &[u32], q: &[u32]) -> bool {
    (0..p.len()).all(|i| (0..p.len()).all(|j| p[i] != p[j] || q[i] == q[j]))
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Does `perm` (position in A -> position in B) carry `a` onto `b`?
pub fn brute_check(a: &System, b: &System, perm: &[usize], mode: IsoMode) -> bool {
    for (qa, qb) in a.measures().iter().zip(b.measures()) {
        let mut fwd: HashMap<String, String> = HashMap::new();
        let mut bwd: HashMap<String, String> = HashMap::new();
        for t in all_tuples(a.vertices(), qa.arity()) {
            let image: Vec<&str> = t
                .iter()
                .map(|id| b.vertices().id(perm[a.vertices().position(id).unwrap()]))
                .collect();
            let va = qa.evaluate(&t).unwrap();
            let vb = qb.evaluate(&image).unwrap();
            match mode {
                IsoMode::ValuePreserving => {
                    if va != vb {
                        return false;
                    }
                }
                IsoMode::SignRelabelling => {
                    let f = fwd.entry(va.to_string()).or_insert_with(|| vb.to_string());
                    let g = bwd.entry(vb.to_string()).or_insert_with(|| va.to_string());
                    if f != vb || g != va {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exhaustive isomorphism test over all vertex permutations.
pub fn brute_isomorphic(a: &System, b: &System, mode: IsoMode) -> bool {
    if a.vertices().len() != b.vertices().len() || a.measures().len() != b.measures().len() {
        return false;
    }
    for (qa, qb) in a.measures().iter().zip(b.measures()) {
        if qa.arity() != qb.arity() {
            return false;
        }
        let declared_ok = match mode {
            IsoMode::ValuePreserving => {
                let sa: BTreeSet<&String> = qa.signs().signs().iter().collect();
                let sb: BTreeSet<&String> = qb.signs().signs().iter().collect();
                sa == sb
            }
            IsoMode::SignRelabelling => qa.signs().len() == qb.signs().len(),
        };
        if !declared_ok {
            return false;
        }
    }
    permutations(a.vertices().len())
        .iter()
        .any(|p| brute_check(a, b, p, mode))
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub n: usize,
    pub arities: Vec<usize>,
    pub sign_counts: Vec<usize>,
}

pub fn random_shape<R: Rng>(rng: &mut R, max_n: usize) -> Shape {
    let measures = rng.random_range(1..=2);
    Shape {
        n: rng.random_range(1..=max_n),
        arities: (0..measures).map(|_| rng.random_range(0..=2)).collect(),
        sign_counts: (0..measures).map(|_| rng.random_range(1..=3)).collect(),
    }
}

pub fn random_system<R: Rng>(rng: &mut R, shape: &Shape, id_prefix: &str) -> System {
    let u = Universe::new((0..shape.n).map(|i| format!("{id_prefix}{i}"))).unwrap();
    let measures = shape
        .arities
        .iter()
        .zip(&shape.sign_counts)
        .enumerate()
        .map(|(m, (&arity, &k))| {
            let total = shape.n.pow(arity as u32);
            // bias toward few realized values so coincidences happen
            let used = rng.random_range(1..=k) as u32;
            let table = (0..total).map(|_| rng.random_range(0..used)).collect();
            Quantity::from_table(format!("m{m}"), u.clone(), arity, signs(k, "s"), table).unwrap()
        })
        .collect();
    System::new(u, measures, false).unwrap()
}

/// A copy of `s` with vertices renamed and shuffled; returns the copy.
pub fn shuffled_copy<R: Rng>(rng: &mut R, s: &System, id_prefix: &str) -> System {
    let n = s.vertices().len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // new universe lists renamed vertices in a shuffled order
    let new_ids: Vec<String> = (0..n).map(|i| format!("{id_prefix}{i}")).collect();
    let order: Vec<String> = perm.iter().map(|&p| new_ids[p].clone()).collect();
    let u = Universe::new(order).unwrap();
    let rename = |old: &str| new_ids[s.vertices().position(old).unwrap()].clone();
    let measures = s
        .measures()
        .iter()
        .map(|q| {
            let tuples = all_tuples(s.vertices(), q.arity());
            Quantity::from_assignments(
                q.name(),
                u.clone(),
                q.arity(),
                q.signs().clone(),
                tuples.iter().map(|t| {
                    let renamed: Vec<String> = t.iter().map(|id| rename(id)).collect();
                    (renamed, q.evaluate(t).unwrap().to_string())
                }),
            )
            .unwrap()
        })
        .collect();
    System::new(u, measures, false).unwrap()
}

/// A copy of `s` whose signs are renamed through a random bijection per
/// measure (same vertices).
pub fn relabelled_copy<R: Rng>(rng: &mut R, s: &System) -> System {
    let measures = s
        .measures()
        .iter()
        .map(|q| {
            let mut names: Vec<String> = (0..q.signs().len()).map(|i| format!("z{i}")).collect();
            names.shuffle(rng);
            Quantity::from_table(
                q.name(),
                s.vertices().clone(),
                q.arity(),
                SignSet::new(names).unwrap(),
                q.table().to_vec(),
            )
            .unwrap()
        })
        .collect();
    System::new(s.vertices().clone(), measures, false).unwrap()
}

/// Every set partition of `0..len` as a restricted growth string.
pub fn labelings(len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, cur: &mut Vec<u32>, max: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max {
            cur.push(v);
            go(len, cur, if v == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    if len == 0 {
        out.push(Vec::new());
    } else {
        go(len, &mut cur, 0, &mut out);
    }
    out
}

/// One representative quantity per partition of `u^arity`.
pub fn representative_quantities(u: &Universe, arity: usize) -> Vec<Quantity> {
    let total = u.len().pow(arity as u32);
    labelings(total)
        .into_iter()
        .enumerate()
        .map(|(i, lab)| {
            let k = lab.iter().max().map_or(1, |m| *m as usize + 1);
            Quantity::from_table(format!("p{i}"), u.clone(), arity, signs(k, "b"), lab).unwrap()
        })
        .collect()
}

/// Labels of a quantity's tuples by evaluated sign, in enumeration order.
pub fn value_labels(q: &Quantity) -> Vec<String> {
    all_tuples(q.universe(), q.arity())
        .iter()
        .map(|t| q.evaluate(t).unwrap().to_string())
        .collect()
}

/// Whether equal values under `fine` imply equal values under `coarse`.
pub fn brute_determines(fine: &Quantity, coarse: &Quantity) -> bool {
    let f = value_labels(fine);
    let c = value_labels(coarse);
    (0..f.len()).all(|i| (0..f.len()).all(|j| f[i] != f[j] || c[i] == c[j]))
}

/// Every pair of realized values co-occurs on some tuple.
pub fn brute_independent(l: &Quantity, s: &Quantity) -> bool {
    let lv = value_labels(l);
    let sv = value_labels(s);
    let ls: BTreeSet<&String> = lv.iter().collect();
    let ss: BTreeSet<&String> = sv.iter().collect();
    let pairs: BTreeSet<(&String, &String)> = lv.iter().zip(&sv).collect();
    ls.iter()
        .all(|a| ss.iter().all(|b| pairs.contains(&(*a, *b))))
}
