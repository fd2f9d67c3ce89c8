//! Acceptance suite. Each criterion runs with a fixed seed and a wall-clock
//! budget and prints one PASS/FAIL line; the process fails if any does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use gensys::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fibers_of_partition(
    q: &Quantity,
) -> std::collections::BTreeSet<std::collections::BTreeSet<Vec<String>>> {
    q.induced_partition()
        .blocks()
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|r| {
                    q.universe()
                        .unrank_ids(r, q.arity())
                        .into_iter()
                        .map(String::from)
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn induced_partition_theorem() -> Result<String, String> {
    let mut r = rng(1);
    for i in 0..1000 {
        let u = universe(r.random_range(1..=6));
        let arity = r.random_range(0..=2);
        let q = random_quantity(&mut r, "q", &u, arity, 4);
        ensure!(
            fibers_of_partition(&q) == brute_fibers(&q),
            "quantity {i}: blocks differ from fibers"
        );
    }
    Ok("1000 quantities".into())
}

fn restriction_theorem() -> Result<String, String> {
    let mut r = rng(2);
    let mut tuples = 0;
    for i in 0..500 {
        let n = r.random_range(1..=6);
        let u = universe(n);
        let arity = r.random_range(0..=2);
        let q = random_quantity(&mut r, "q", &u, arity, 4);
        let mut keep: Vec<String> = u
            .ids()
            .iter()
            .filter(|_| r.random_bool(0.5))
            .cloned()
            .collect();
        if keep.is_empty() {
            keep.push(u.id(r.random_range(0..n)).to_string());
        }
        let sub = Universe::new(keep).unwrap();
        let restricted = q.restrict(&sub).map_err(|e| e.to_string())?;
        let sub_tuples = all_tuples(&sub, arity);
        for t in &sub_tuples {
            ensure!(
                restricted.evaluate(t).unwrap() == q.evaluate(t).unwrap(),
                "pair {i}: value differs at {t:?}"
            );
        }
        tuples += sub_tuples.len();
        let ranks: Vec<usize> = sub_tuples.iter().map(|t| u.rank(t).unwrap()).collect();
        ensure!(
            restricted.induced_partition() == q.induced_partition().restrict(&ranks).unwrap(),
            "pair {i}: partitions do not commute"
        );
    }
    Ok(format!("500 pairs, {tuples} tuples"))
}

fn lifting_theorem() -> Result<String, String> {
    let mut r = rng(3);
    for i in 0..500 {
        let u = universe(r.random_range(1..=4));
        let n = r.random_range(0..=2);
        let m = n + r.random_range(1..=2);
        let q = random_quantity(&mut r, "q", &u, n, 4);
        let mut pool: Vec<usize> = (0..m).collect();
        let coords: Vec<usize> = (0..n)
            .map(|_| pool.remove(r.random_range(0..pool.len())))
            .collect();
        let lifted = q.lift(m, &coords).map_err(|e| e.to_string())?;
        let y: Vec<String> = (0..m)
            .map(|_| u.id(r.random_range(0..u.len())).to_string())
            .collect();
        let projected: Vec<String> = coords.iter().map(|&c| y[c].clone()).collect();
        ensure!(
            lifted.evaluate(&y).unwrap() == q.evaluate(&projected).unwrap(),
            "evaluation {i}: projection law fails"
        );
    }
    Ok("500 evaluations".into())
}

fn correspondence_theorem() -> Result<String, String> {
    let mut r = rng(4);
    let mut forward = 0;
    for i in 0..500 {
        let u = universe(r.random_range(1..=5));
        let arity = r.random_range(1..=2);
        let l = random_quantity(&mut r, "L", &u, arity, 4);
        let s = random_quantity(&mut r, "S", &u, arity, 4);
        for a in l.signs().signs() {
            for b in s.signs().signs() {
                let c = value_correspondence(&l, &s, a, b).unwrap();
                forward += c.forward as usize;
                ensure!(
                    !c.forward || c.zz,
                    "pair {i}: {a} -> {b} without intersection"
                );
            }
        }
    }
    Ok(format!("500 pairs, {forward} forward correspondences"))
}

fn dependence_and_equivalence() -> Result<String, String> {
    let mut r = rng(5);
    let mut dependent = 0;
    for i in 0..1000 {
        let u = universe(r.random_range(1..=4));
        let arity = r.random_range(1..=2);
        let l = random_quantity(&mut r, "L", &u, arity, 3);
        let s = random_quantity(&mut r, "S", &u, arity, 3);
        let dep = is_dependent(&l, &s).unwrap();
        dependent += dep as usize;
        ensure!(
            dep == l
                .induced_partition()
                .is_refinement(&s.induced_partition())
                .unwrap(),
            "pair {i}: dependence differs from refinement"
        );
        ensure!(
            dep == brute_determines(&l, &s),
            "pair {i}: dependence differs from oracle"
        );
        if dep && is_dependent(&s, &l).unwrap() {
            ensure!(
                are_equivalent(&l, &s).unwrap(),
                "pair {i}: antisymmetry fails"
            );
        }
    }
    let mut chains = 0;
    for i in 0..300 {
        let u = universe(r.random_range(1..=3));
        let qs: Vec<Quantity> = (0..3)
            .map(|j| random_quantity(&mut r, &format!("q{j}"), &u, 1, 2))
            .collect();
        let eq = |a: usize, b: usize| are_equivalent(&qs[a], &qs[b]).unwrap();
        ensure!(eq(0, 0), "triple {i}: not reflexive");
        ensure!(eq(0, 1) == eq(1, 0), "triple {i}: not symmetric");
        if eq(0, 1) && eq(1, 2) {
            chains += 1;
            ensure!(eq(0, 2), "triple {i}: not transitive");
        }
    }
    Ok(format!(
        "1000 pairs ({dependent} dependent), 300 triples ({chains} chains)"
    ))
}

fn lattice_exactness() -> Result<String, String> {
    let labs = labelings(4);
    ensure!(
        labs.len() == 15,
        "expected 15 partitions, got {}",
        labs.len()
    );
    for a in &labs {
        for b in &labs {
            let pa = Partition::from_labeling(a).unwrap();
            let pb = Partition::from_labeling(b).unwrap();
            let lower: Vec<&Vec<u32>> = labs
                .iter()
                .filter(|c| brute_refines(c, a) && brute_refines(c, b))
                .collect();
            let upper: Vec<&Vec<u32>> = labs
                .iter()
                .filter(|c| brute_refines(a, c) && brute_refines(b, c))
                .collect();
            let glb = lower
                .iter()
                .find(|c| lower.iter().all(|d| brute_refines(d, c)));
            let lub = upper
                .iter()
                .find(|c| upper.iter().all(|d| brute_refines(c, d)));
            ensure!(
                Some(pa.meet(&pb).unwrap()) == glb.map(|g| Partition::from_labeling(g).unwrap()),
                "meet of {a:?} {b:?}"
            );
            ensure!(
                Some(pa.join(&pb).unwrap()) == lub.map(|g| Partition::from_labeling(g).unwrap()),
                "join of {a:?} {b:?}"
            );
        }
    }
    for (n, arity) in [(4, 1), (2, 2)] {
        let reps = representative_quantities(&universe(n), arity);
        for l in &reps {
            for s in &reps {
                let m = quantity_meet(l, s).unwrap();
                let j = quantity_join(l, s).unwrap();
                let (pl, ps) = (l.induced_partition(), s.induced_partition());
                ensure!(
                    m.induced_partition() == pl.meet(&ps).unwrap(),
                    "quantity meet partition"
                );
                ensure!(
                    j.induced_partition() == pl.join(&ps).unwrap(),
                    "quantity join partition"
                );
                ensure!(is_dependent(&m, l).unwrap(), "clause 1 fails");
                ensure!(is_dependent(&m, s).unwrap(), "clause 2 fails");
                for k in &reps {
                    if brute_determines(k, l) && brute_determines(k, s) {
                        ensure!(is_dependent(k, &m).unwrap(), "clause 3 fails");
                    }
                }
            }
        }
    }
    Ok("15 partitions, both 4-tuple spaces".into())
}

fn complete_set_theorems() -> Result<String, String> {
    let mut spaces = Vec::new();
    for n in 2..=6 {
        spaces.push((n, 1));
    }
    spaces.push((2, 2));
    let (mut tags, mut sets) = (0, 0);
    for (n, arity) in spaces {
        let reps = representative_quantities(&universe(n), arity);
        for l in reps.iter().filter(|q| q.induced_partition().is_discrete()) {
            tags += 1;
            for s in reps.iter().filter(|q| !q.is_constant()) {
                ensure!(
                    !is_independent(l, s, SignScope::Realized).unwrap(),
                    "|A|={n}, n={arity}: {} is independent of a tag",
                    s.name()
                );
            }
        }
        // each member of a minimal complete set strictly refines the meet of
        // the ones before it, so no such set has more members than tuples
        let tuples = n.pow(arity as u32);
        for set in find_complete_sets(&reps, arity, tuples, SignScope::Realized).unwrap() {
            sets += 1;
            let members: Vec<Quantity> = set.iter().map(|&i| reps[i].clone()).collect();
            let meet = members[1..]
                .iter()
                .fold(members[0].clone(), |acc, q| quantity_meet(&acc, q).unwrap());
            for u in &reps {
                ensure!(
                    brute_determines(&meet, u),
                    "|A|={n}, n={arity}: meet of {set:?} misses {}",
                    u.name()
                );
            }
        }
    }
    Ok(format!("{tags} tags, {sets} complete sets"))
}

fn composition_theorem() -> Result<String, String> {
    let mut r = rng(8);
    let mut tuples = 0;
    for size in 1..=4 {
        let a = universe(size);
        for n in 1..=2 {
            for m in 1..=2 {
                for _ in 0..4 {
                    let inner = random_quantity(&mut r, "f", &a, n, 3);
                    let outer_u = Universe::new(inner.signs().signs().iter().cloned()).unwrap();
                    // outer signs must not collide with its objects, the inner signs
                    let k = r.random_range(1..=3usize);
                    let table = (0..outer_u.len().pow(m as u32))
                        .map(|_| r.random_range(0..k as u32))
                        .collect();
                    let outer =
                        Quantity::from_table("g", outer_u, m, signs(k, "r"), table).unwrap();
                    let c = inner.compose(&outer).map_err(|e| e.to_string())?;
                    ensure!(c.arity() == n * m, "arity {} != {n}*{m}", c.arity());
                    for x in all_tuples(&a, n * m) {
                        let mids: Vec<String> = x
                            .chunks(n)
                            .map(|b| inner.evaluate(b).unwrap().to_string())
                            .collect();
                        ensure!(
                            c.evaluate(&x).unwrap() == outer.evaluate(&mids).unwrap(),
                            "mismatch at {x:?}"
                        );
                        tuples += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{tuples} tuples"))
}

fn isomorphic_pairs() -> Vec<(System, System)> {
    let mut r = rng(9);
    (0..50)
        .map(|_| {
            let shape = random_shape(&mut r, 6);
            let a = random_system(&mut r, &shape, "a");
            let b = shuffled_copy(&mut r, &a, "b");
            (a, b)
        })
        .collect()
}

fn certificate_oracle() -> Result<String, String> {
    let mut r = rng(10);
    let mut pairs: Vec<(System, System)> = (0..200)
        .map(|_| {
            let shape = random_shape(&mut r, 6);
            (
                random_system(&mut r, &shape, "a"),
                random_system(&mut r, &shape, "b"),
            )
        })
        .collect();
    pairs.extend(isomorphic_pairs());
    let mut positive = [0; 2];
    for (i, (a, b)) in pairs.iter().enumerate() {
        for (k, mode) in [IsoMode::ValuePreserving, IsoMode::SignRelabelling]
            .into_iter()
            .enumerate()
        {
            let expected = brute_isomorphic(a, b, mode);
            let same = canonical_form(a, mode).unwrap() == canonical_form(b, mode).unwrap();
            ensure!(
                same == expected,
                "pair {i} {mode:?}: certificate {same}, brute force {expected}"
            );
            positive[k] += expected as usize;
        }
    }
    Ok(format!(
        "250 pairs, isomorphic: {} value-preserving, {} relabelling",
        positive[0], positive[1]
    ))
}

fn attribute_invariance() -> Result<String, String> {
    for (i, (a, b)) in isomorphic_pairs().iter().enumerate() {
        ensure!(
            structure_attributes(a) == structure_attributes(b),
            "pair {i}: attributes differ"
        );
    }
    Ok("50 pairs".into())
}

fn cli_end_to_end() -> Result<String, String> {
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_gensys"))
            .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let text = String::from_utf8(o.stdout).map_err(|e| e.to_string())?;
        Ok::<_, String>((o.status.code(), text))
    };
    let body = |s: &str| {
        s.split_once("---\n")
            .map(|(_, b)| b.to_string())
            .unwrap_or_default()
    };
    let doc = "data/parity_mod3.json";
    let complete = ["--doc", doc, "complete", "--arity", "1"];
    let join = ["--doc", doc, "join", "parity", "mod3"];
    let fd = ["fd", "data/parity_mod3.csv", "--key", "n"];

    let (code, out) = run(&complete)?;
    ensure!(
        code == Some(0) && out.contains("  {parity, mod3}\n"),
        "complete output:\n{out}"
    );
    let (code, out) = run(&join)?;
    ensure!(
        code == Some(0) && out.contains("constant: true\n"),
        "join output:\n{out}"
    );
    let (code, fd_out) = run(&fd)?;
    ensure!(code == Some(0), "fd failed");
    ensure!(
        fd_out.contains("independent: true\n"),
        "fd relation differs"
    );
    ensure!(
        body(&fd_out).ends_with(&body(&run(&complete)?.1)),
        "fd complete sets differ"
    );
    for args in [&complete[..], &join[..], &fd[..]] {
        ensure!(run(args)? == run(args)?, "{args:?} not byte-stable");
    }
    Ok("complete, join, fd, stability".into())
}

fn main() {
    let criteria: [(&str, Check, u64); 11] = [
        (
            "induced partitions equal fibers",
            induced_partition_theorem,
            5,
        ),
        ("restriction agrees and commutes", restriction_theorem, 5),
        ("lifting is projection", lifting_theorem, 2),
        (
            "forward correspondence implies intersection",
            correspondence_theorem,
            5,
        ),
        (
            "dependence is refinement, equivalence laws",
            dependence_and_equivalence,
            5,
        ),
        ("lattice exactness", lattice_exactness, 2),
        ("complete-set theorems", complete_set_theorems, 30),
        ("composition law", composition_theorem, 5),
        ("certificates match brute force", certificate_oracle, 60),
        (
            "structure attributes are invariant",
            attribute_invariance,
            5,
        ),
        ("cli end to end", cli_end_to_end, 30),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*budget) => {
                Err(format!("took {elapsed:.2?}, budget {budget} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
