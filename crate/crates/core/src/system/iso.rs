//! Isomorphism search and homomorphism checks between systems.

use std::collections::BTreeMap;

use super::refine::{for_each_tuple, rank_of, signatures, Flat, Signature};
use super::{check_shape, IsoMode, System, VertexMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: VertexMap,
    /// Per measure position, the sign bijection as `(sign in A, sign in B)`
    /// pairs in A's declared order. Identity pairs in value-preserving mode.
    pub sign_maps: Vec<Vec<(String, String)>>,
}

/// Refines both systems with a shared color vocabulary. Returns `None` as
/// soon as the color histograms differ.
fn joint_refine(fa: &Flat, fb: &Flat) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut ca = vec![0u32; fa.n];
    let mut cb = vec![0u32; fb.n];
    let mut classes = 1;
    loop {
        let sa = signatures(fa, &ca);
        let sb = signatures(fb, &cb);
        let mut vocab: BTreeMap<&Signature, u32> = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            vocab.insert(s, 0);
        }
        for (i, v) in vocab.values_mut().enumerate() {
            *v = i as u32;
        }
        ca = sa.iter().map(|s| vocab[s]).collect();
        cb = sb.iter().map(|s| vocab[s]).collect();
        let mut ha = ca.clone();
        let mut hb = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        if vocab.len() == classes {
            return Some((ca, cb));
        }
        classes = vocab.len();
    }
}

struct SignMaps {
    forward: Vec<Vec<Option<u32>>>,
    backward: Vec<Vec<Option<u32>>>,
    log: Vec<(usize, u32, u32)>,
}

impl SignMaps {
    fn new(sa: &System, sb: &System) -> Self {
        SignMaps {
            forward: sa
                .measures()
                .iter()
                .map(|q| vec![None; q.signs().len()])
                .collect(),
            backward: sb
                .measures()
                .iter()
                .map(|q| vec![None; q.signs().len()])
                .collect(),
            log: Vec::new(),
        }
    }

    /// Records `a -> b` for measure `m`, or reports a conflict.
    fn bind(&mut self, m: usize, a: u32, b: u32) -> bool {
        match (self.forward[m][a as usize], self.backward[m][b as usize]) {
            (Some(x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                self.forward[m][a as usize] = Some(b);
                self.backward[m][b as usize] = Some(a);
                self.log.push((m, a, b));
                true
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (m, a, b) = self.log.pop().expect("nonempty");
            self.forward[m][a as usize] = None;
            self.backward[m][b as usize] = None;
        }
    }
}

struct Matcher<'a> {
    fa: &'a Flat,
    fb: &'a Flat,
    mode: IsoMode,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    signs: SignMaps,
}

impl Matcher<'_> {
    /// Checks every tuple over the assigned prefix `0..=v` that mentions `v`.
    fn consistent(&mut self, v: usize) -> bool {
        let assigned = v + 1;
        for (m, (ma, mb)) in self.fa.measures.iter().zip(&self.fb.measures).enumerate() {
            if ma.arity == 0 {
                continue;
            }
            let mut ok = true;
            for_each_tuple(assigned, ma.arity, |_, t| {
                if !ok || !t.contains(&v) {
                    return;
                }
                let a = ma.table[rank_of(self.fa.n, t.iter().copied())];
                let b = mb.table[rank_of(self.fb.n, t.iter().map(|&x| self.map[x]))];
                ok = match self.mode {
                    IsoMode::ValuePreserving => a == b,
                    IsoMode::SignRelabelling => self.signs.bind(m, a, b),
                };
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, v: usize) -> bool {
        if v == self.fa.n {
            return true;
        }
        for i in 0..self.candidates[v].len() {
            let w = self.candidates[v][i];
            if self.used[w] {
                continue;
            }
            let mark = self.signs.log.len();
            self.map[v] = w;
            self.used[w] = true;
            if self.consistent(v) && self.extend(v + 1) {
                return true;
            }
            self.used[w] = false;
            self.signs.undo_to(mark);
        }
        false
    }
}

/// Searches for a vertex bijection carrying `sa` onto `sb`.
///
/// Candidates are restricted to vertices of equal refined color and tried
/// in ascending vertex order, so a system matched against itself yields
/// the identity.
pub fn find_isomorphism(sa: &System, sb: &System, mode: IsoMode) -> Result<Option<Isomorphism>> {
    check_shape(sa, sb)?;
    if sa.vertices().len() != sb.vertices().len() {
        return Ok(None);
    }
    for (qa, qb) in sa.measures().iter().zip(sb.measures()) {
        let compatible = match mode {
            IsoMode::ValuePreserving => qa.signs().same_members(qb.signs()),
            IsoMode::SignRelabelling => qa.signs().len() == qb.signs().len(),
        };
        if !compatible {
            return Ok(None);
        }
    }
    let fa = Flat::new(sa, mode);
    let fb = Flat::new(sb, mode);
    let mut signs = SignMaps::new(sa, sb);
    for (m, (ma, mb)) in fa.measures.iter().zip(&fb.measures).enumerate() {
        if ma.arity == 0 {
            let ok = match mode {
                IsoMode::ValuePreserving => ma.table[0] == mb.table[0],
                IsoMode::SignRelabelling => signs.bind(m, ma.table[0], mb.table[0]),
            };
            if !ok {
                return Ok(None);
            }
        }
    }
    let Some((ca, cb)) = joint_refine(&fa, &fb) else {
        return Ok(None);
    };
    let candidates = ca
        .iter()
        .map(|c| (0..fb.n).filter(|&w| cb[w] == *c).collect())
        .collect();
    let mut matcher = Matcher {
        fa: &fa,
        fb: &fb,
        mode,
        candidates,
        map: vec![0; fa.n],
        used: vec![false; fb.n],
        signs,
    };
    if !matcher.extend(0) {
        return Ok(None);
    }
    let vertex_map = VertexMap::new(matcher.map, fb.n)?;
    let sign_maps = sa
        .measures()
        .iter()
        .zip(sb.measures())
        .enumerate()
        .map(|(m, (qa, qb))| match mode {
            IsoMode::ValuePreserving => qa
                .signs()
                .signs()
                .iter()
                .map(|s| (s.clone(), s.clone()))
                .collect(),
            IsoMode::SignRelabelling => {
                // pair unused signs off in declared order
                let forward = &matcher.signs.forward[m];
                let mut free_b = (0..qb.signs().len() as u32)
                    .filter(|b| matcher.signs.backward[m][*b as usize].is_none());
                (0..qa.signs().len() as u32)
                    .map(|a| {
                        let b = forward[a as usize]
                            .unwrap_or_else(|| free_b.next().expect("equal sign counts"));
                        (qa.signs().get(a).to_string(), qb.signs().get(b).to_string())
                    })
                    .collect()
            }
        })
        .collect();
    Ok(Some(Isomorphism {
        vertex_map,
        sign_maps,
    }))
}

/// Whether `map` carries every value of `sa` onto `sb`; bijectivity is not
/// required. In sign-relabelling mode the induced sign correspondence must
/// be a well-defined injective map per measure.
pub fn is_homomorphism(map: &VertexMap, sa: &System, sb: &System, mode: IsoMode) -> Result<bool> {
    check_shape(sa, sb)?;
    if map.images().len() != sa.vertices().len() {
        return Err(Error::MapNotTotal(format!(
            "map covers {} of {} vertices",
            map.images().len(),
            sa.vertices().len()
        )));
    }
    if map.target_len() != sb.vertices().len() {
        return Err(Error::ShapeMismatch(format!(
            "map targets {} vertices, system has {}",
            map.target_len(),
            sb.vertices().len()
        )));
    }
    let (na, nb) = (sa.vertices().len(), sb.vertices().len());
    let mut signs = SignMaps::new(sa, sb);
    for (m, (qa, qb)) in sa.measures().iter().zip(sb.measures()).enumerate() {
        let mut ok = true;
        for_each_tuple(na, qa.arity(), |rank, t| {
            if !ok {
                return;
            }
            let b_rank = rank_of(nb, t.iter().map(|&x| map.image(x)));
            ok = match mode {
                IsoMode::ValuePreserving => qa.sign_at(rank) == qb.sign_at(b_rank),
                IsoMode::SignRelabelling => signs.bind(m, qa.table()[rank], qb.table()[b_rank]),
            };
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::{Quantity, SignSet};
    use crate::universe::Universe;

    fn graph(ids: &[&str], edges: &[(usize, usize)]) -> System {
        let u = Universe::new(ids.iter().copied()).unwrap();
        let pos = |s: &str| ids.iter().position(|x| *x == s).unwrap();
        let adj = Quantity::from_fn(
            "adj",
            u.clone(),
            2,
            SignSet::new(["0", "1"]).unwrap(),
            |t| {
                let (a, b) = (pos(t[0]), pos(t[1]));
                if edges.contains(&(a, b)) || edges.contains(&(b, a)) {
                    "1"
                } else {
                    "0"
                }
            },
        )
        .unwrap();
        System::new(u, vec![adj], true).unwrap()
    }

    fn unary(ids: &[&str], values: &[&str], signs: &[&str]) -> System {
        let u = Universe::new(ids.iter().copied()).unwrap();
        let q = Quantity::from_assignments(
            "c",
            u.clone(),
            1,
            SignSet::new(signs.iter().copied()).unwrap(),
            ids.iter().zip(values).map(|(i, v)| ([*i], *v)),
        )
        .unwrap();
        System::new(u, vec![q], false).unwrap()
    }

    #[test]
    fn three_cycles_are_isomorphic() {
        let c1 = graph(&["a", "b", "c"], &[(0, 1), (1, 2), (2, 0)]);
        let c2 = graph(&["x", "y", "z"], &[(0, 1), (1, 2), (2, 0)]);
        let iso = find_isomorphism(&c1, &c2, IsoMode::ValuePreserving)
            .unwrap()
            .unwrap();
        assert!(iso.vertex_map.is_bijective());
        assert!(is_homomorphism(&iso.vertex_map, &c1, &c2, IsoMode::ValuePreserving).unwrap());
    }

    #[test]
    fn cycle_and_path_are_not() {
        let c = graph(&["a", "b", "c"], &[(0, 1), (1, 2), (2, 0)]);
        let p = graph(&["a", "b", "c"], &[(0, 1), (1, 2)]);
        for mode in [IsoMode::ValuePreserving, IsoMode::SignRelabelling] {
            assert!(find_isomorphism(&c, &p, mode).unwrap().is_none());
        }
    }

    #[test]
    fn self_match_is_identity() {
        let p = graph(&["a", "b", "c", "d"], &[(0, 1), (2, 3)]);
        let iso = find_isomorphism(&p, &p, IsoMode::ValuePreserving)
            .unwrap()
            .unwrap();
        assert_eq!(iso.vertex_map, VertexMap::identity(4));
    }

    #[test]
    fn shape_mismatch() {
        let c = graph(&["a", "b"], &[(0, 1)]);
        let u = unary(&["a", "b"], &["r", "r"], &["r"]);
        assert!(matches!(
            find_isomorphism(&c, &u, IsoMode::ValuePreserving),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn relabelling_finds_sign_bijection() {
        let a = unary(
            &["p", "q", "r"],
            &["red", "red", "blue"],
            &["red", "blue", "green"],
        );
        let b = unary(
            &["x", "y", "z"],
            &["one", "two", "two"],
            &["one", "two", "three"],
        );
        assert!(find_isomorphism(&a, &b, IsoMode::ValuePreserving)
            .unwrap()
            .is_none());
        let iso = find_isomorphism(&a, &b, IsoMode::SignRelabelling)
            .unwrap()
            .unwrap();
        assert_eq!(
            iso.sign_maps[0],
            vec![
                ("red".to_string(), "two".to_string()),
                ("blue".to_string(), "one".to_string()),
                ("green".to_string(), "three".to_string())
            ]
        );
    }

    #[test]
    fn homomorphism_examples() {
        let two = unary(&["a", "b"], &["k", "k"], &["k"]);
        let one = unary(&["z"], &["k"], &["k"]);
        let collapse = VertexMap::new(vec![0, 0], 1).unwrap();
        assert!(is_homomorphism(&collapse, &two, &one, IsoMode::ValuePreserving).unwrap());

        let edge = graph(&["a", "b"], &[(0, 1)]);
        let loopless = graph(&["x", "y"], &[]);
        let id = VertexMap::identity(2);
        assert!(!is_homomorphism(&id, &edge, &loopless, IsoMode::ValuePreserving).unwrap());

        let short = VertexMap::new(vec![0], 2).unwrap();
        assert!(matches!(
            is_homomorphism(&short, &edge, &loopless, IsoMode::ValuePreserving),
            Err(Error::MapNotTotal(_))
        ));
    }
}
