//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use lcs_threshold::lcs::{
    dp_oracle, is_common_subsequence, lcs_vector_scan_profiled, shadow_run, ShadowState,
};
use lcs_threshold::{
    lcs_length, lcs_reconstruct, new_threshold_set, Backend, ReconstructOptions, Sequence, VebTree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn all_strings(alphabet: &[u32], max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &a in alphabet {
                let mut t: Vec<u32> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn exhaustive_pairs() -> Vec<(Sequence, Sequence)> {
    let mut pairs = Vec::new();
    for (alphabet, max_len) in [(&[0u32, 1][..], 6), (&[0u32, 1, 2][..], 4)] {
        let strings = all_strings(alphabet, max_len);
        for x in &strings {
            for y in &strings {
                pairs.push((
                    Sequence::from_tokens(x.clone()),
                    Sequence::from_tokens(y.clone()),
                ));
            }
        }
    }
    pairs
}

fn random_pairs(count: usize, max_len: usize, seed: u64) -> Vec<(Sequence, Sequence)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let sigma = [2u32, 4, 26][k % 3];
            let gen = |rng: &mut ChaCha8Rng| {
                let len = rng.gen_range(0..=max_len);
                Sequence::from_tokens((0..len).map(|_| rng.gen_range(0..sigma)).collect())
            };
            let x = gen(&mut rng);
            let y = gen(&mut rng);
            (x, y)
        })
        .collect()
}

fn describe(x: &Sequence, y: &Sequence) -> String {
    format!("X = {:?}, Y = {:?}", x.symbols(), y.symbols())
}

fn lengths_agree(pairs: &[(Sequence, Sequence)], reconstruct: bool) -> Outcome {
    for (x, y) in pairs {
        let truth = dp_oracle(x, y, u64::MAX).unwrap().length();
        for backend in Backend::ALL {
            let got = lcs_length(x, y, backend).length;
            if got != truth {
                return Err(format!(
                    "{backend} length {got}, DP {truth}; {}",
                    describe(x, y)
                ));
            }
            if reconstruct {
                let r = lcs_reconstruct(
                    x,
                    y,
                    ReconstructOptions {
                        backend,
                        ..Default::default()
                    },
                )
                .unwrap();
                let sub = r.subsequence.unwrap();
                if r.length != truth
                    || sub.len() != truth
                    || !is_common_subsequence(&sub, x.symbols(), y.symbols())
                {
                    return Err(format!(
                        "{backend} reconstruction {sub:?} invalid; {}",
                        describe(x, y)
                    ));
                }
            }
        }
        let scan = lcs_vector_scan_profiled(x, y).0.length;
        if scan != truth {
            return Err(format!(
                "vector scan length {scan}, DP {truth}; {}",
                describe(x, y)
            ));
        }
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn criterion_1() -> Outcome {
    lengths_agree(&exhaustive_pairs(), false)
}

fn criterion_2(pairs: &[(Sequence, Sequence)]) -> Outcome {
    lengths_agree(pairs, true)
}

fn criterion_3() -> Outcome {
    let mut state = ShadowState::from_prefix_maxima(&[0, 1, 2, 2, 2, 2, 2]);
    let mut set = new_threshold_set(7, Backend::Veb);
    set.update(2).unwrap();
    set.update(3).unwrap();
    if set.contents() != [2, 3] {
        return Err(format!("initial S = {:?}", set.contents()));
    }
    let t = state.apply_match(6);
    set.update(6).unwrap();
    let expected_q = [0, 1, 2, 2, 2, 3, 3];
    if t != 3 || state.q != expected_q || set.contents() != [2, 3, 6] {
        return Err(format!(
            "T = {t}, Q = {:?}, S = {:?}",
            state.q,
            set.contents()
        ));
    }
    Ok("T = 3, Q = (0,1,2,2,2,3,3), S = (2,3,6)".into())
}

fn criterion_4() -> Outcome {
    let pairs = random_pairs(200, 128, 4);
    for (x, y) in &pairs {
        for backend in Backend::ALL {
            if let Err(e) = shadow_run(x, y, backend) {
                return Err(format!("{backend}: {e}; {}", describe(x, y)));
            }
        }
    }
    Ok(format!("{} instances, 3 backends", pairs.len()))
}

fn criterion_5(pairs: &[(Sequence, Sequence)]) -> Outcome {
    let mut checked = 0;
    for (x, y) in exhaustive_pairs().iter().chain(pairs) {
        let r = lcs_reconstruct(x, y, ReconstructOptions::default()).unwrap();
        let c = r.counters;
        let bound = 4 * r.stats.matches;
        if c.primitive_total() > bound || c.delete > c.insert {
            return Err(format!(
                "{} primitives (bound {bound}), {} deletes, {} inserts; {}",
                c.primitive_total(),
                c.delete,
                c.insert,
                describe(x, y)
            ));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn criterion_6(pairs: &[(Sequence, Sequence)]) -> Outcome {
    let mut rows_checked = 0;
    for (x, y) in pairs {
        let (result, rows) = lcs_vector_scan_profiled(x, y);
        for (i, row) in rows.iter().enumerate() {
            if row.comparisons > row.budget() {
                return Err(format!("row {}: {:?}; {}", i + 1, row, describe(x, y)));
            }
        }
        rows_checked += rows.len();
        let n = x.len().max(y.len()) as u64;
        let bound = n * result.length as u64 + result.stats.matches + n;
        if result.counters.comparisons > bound {
            return Err(format!(
                "{} comparisons, bound {bound}; {}",
                result.counters.comparisons,
                describe(x, y)
            ));
        }
    }
    Ok(format!("{} instances, {rows_checked} rows", pairs.len()))
}

fn criterion_7() -> Outcome {
    let universe = 1024u64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tree = VebTree::new(universe).unwrap();
    let mut oracle = BTreeSet::new();
    for step in 0..10_000 {
        let key = rng.gen_range(0..universe);
        if rng.gen_bool(0.55) {
            tree.insert(key).unwrap();
            oracle.insert(key);
        } else {
            tree.delete(key).unwrap();
            oracle.remove(&key);
        }
        let fail = |what: &str| Err(format!("{what} disagrees after operation {step}"));
        if tree.len() != oracle.len() as u64 {
            return fail("size");
        }
        if tree.min() != oracle.first().copied() || tree.max() != oracle.last().copied() {
            return fail("min/max");
        }
        for x in 0..universe {
            if tree.contains(x).unwrap() != oracle.contains(&x) {
                return fail("member");
            }
            if tree.successor(x).unwrap() != oracle.range(x + 1..).next().copied() {
                return fail("successor");
            }
            if tree.predecessor(x).unwrap() != oracle.range(..x).next_back().copied() {
                return fail("predecessor");
            }
        }
    }
    Ok("10000 operations, universe 1024".into())
}

fn tlcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlcs"))
        .args(args)
        .output()
        .expect("spawn tlcs")
}

fn reported_length(out: &Output) -> Option<usize> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .find_map(|l| l.strip_prefix("L: ")?.trim().parse().ok())
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: &[u8]| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let x = write("x", b"abcbdab");
    let y = write("y", b"bdcaba");
    let e1 = write("e1", b"");
    let e2 = write("e2", b"");
    let body = b"the quick brown fox jumps over the lazy dog";
    let same1 = write("s1", body);
    let same2 = write("s2", body);

    let cases: [(&Path, &Path, usize); 3] =
        [(&x, &y, 4), (&e1, &e2, 0), (&same1, &same2, body.len())];
    for (a, b, want) in cases {
        let out = tlcs(&["length", path_str(a), path_str(b)]);
        if out.status.code() != Some(0) || reported_length(&out) != Some(want) {
            return Err(format!(
                "length {} {}: {:?}, expected L = {want}",
                a.display(),
                b.display(),
                out
            ));
        }
    }

    let missing = dir.path().join("missing");
    let exits = [
        (
            tlcs(&["length", path_str(&missing), path_str(&y)]),
            2,
            "missing input",
        ),
        (tlcs(&["length"]), 2, "missing arguments"),
        (
            tlcs(&["length", "--backend", "nope", path_str(&x), path_str(&y)]),
            2,
            "bad flag value",
        ),
        (
            tlcs(&["subseq", "--memory-cap", "3", path_str(&x), path_str(&y)]),
            3,
            "memory cap",
        ),
        (
            tlcs(&["verify", "--simulate-max-guard-bug", "--inline", "ba", "ab"]),
            1,
            "simulated guard bug",
        ),
        (tlcs(&["verify", path_str(&x), path_str(&y)]), 0, "verify"),
    ];
    for (out, code, what) in &exits {
        if out.status.code() != Some(*code) {
            return Err(format!(
                "{what}: exit {:?}, expected {code}",
                out.status.code()
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..50 {
        let sigma = [2u8, 4, 26][k % 3];
        let gen = |rng: &mut ChaCha8Rng| -> Vec<u8> {
            (0..rng.gen_range(0..=120))
                .map(|_| b'a' + rng.gen_range(0..sigma))
                .collect()
        };
        let a = write(&format!("a{k}"), &gen(&mut rng));
        let b = write(&format!("b{k}"), &gen(&mut rng));
        let out = tlcs(&["verify", path_str(&a), path_str(&b)]);
        if out.status.code() != Some(0) {
            return Err(format!(
                "verify on pair {k} exited {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stdout)
            ));
        }
    }
    Ok("length examples, exit codes 0/1/2/3, verify on 50 random pairs".into())
}

fn main() {
    let c2_pairs = random_pairs(1000, 200, 2);
    let criteria: Vec<Criterion> = vec![
        (
            "1 exhaustive small inputs: all backends equal DP",
            Box::new(criterion_1),
        ),
        (
            "2 random inputs: lengths agree, reconstructions valid",
            Box::new(|| criterion_2(&c2_pairs)),
        ),
        ("3 worked match example", Box::new(criterion_3)),
        (
            "4 shadow invariants on random inputs",
            Box::new(criterion_4),
        ),
        (
            "5 vEB driver uses at most 4R primitives",
            Box::new(|| criterion_5(&c2_pairs)),
        ),
        (
            "6 vector scan comparison budgets",
            Box::new(|| criterion_6(&c2_pairs)),
        ),
        ("7 vEB tree against a sorted set", Box::new(criterion_7)),
        ("8 command line end to end", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("[PASS] criterion {name} ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
