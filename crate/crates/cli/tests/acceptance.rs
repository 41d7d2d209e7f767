//! One line per acceptance criterion. Criteria 3 and 5 are known to fail for
//! the shipped gadget (see the README); the run fails only if the set of
//! failing criteria changes.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use princ::enumerate::lattices_up_to;
use princ::fuzz::{fuzz, FuzzConfig};
use princ::random::random_lattice;
use princ::{
    all_congruences, assemble_k, base, beta_h, is_i_congruence, join_congruences, lattice_iso,
    order_iso, princ_order, principal_congruence, valuation, BoundedPoset, Congruence,
    Construction, FiniteLattice, Poset, Templates,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: [u32; 2] = [3, 5];
const FUZZ: FuzzConfig = FuzzConfig {
    max_size: 8,
    samples: 200,
    seed: 20240901,
    jobs: 0,
};
const FUZZ_BUDGET: Duration = Duration::from_secs(300);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Nonempty down sets by testing every subset.
fn count_down_sets(p: &Poset) -> usize {
    let n = p.len();
    (1u64..1 << n)
        .filter(|&set| {
            (0..n)
                .all(|y| set & (1 << y) == 0 || (0..n).all(|x| !p.leq(x, y) || set & (1 << x) != 0))
        })
        .count()
}

fn m3_through(l: &FiniteLattice, x: usize) -> bool {
    let (o, i) = (l.bottom(), l.top());
    let complement = |a: usize, b: usize| a != b && l.meet(a, b) == o && l.join(a, b) == i;
    (0..l.len()).any(|y| {
        complement(x, y) && (0..l.len()).any(|z| z != x && complement(x, z) && complement(y, z))
    })
}

/// Every nonempty down set of P⁻, as sorted positions of P.
fn interior_down_sets(p: &BoundedPoset) -> Vec<Vec<usize>> {
    let inner = p.interior();
    (0u64..1 << inner.len())
        .map(|mask| {
            inner
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &x)| x)
                .collect::<Vec<_>>()
        })
        .filter(|h| {
            h.iter().all(|&y| {
                inner
                    .iter()
                    .all(|&x| !p.poset().leq(x, y) || h.contains(&x))
            })
        })
        .collect()
}

fn structural(k: &Construction, t: &Templates) -> Result<(), String> {
    let l = k.lattice();
    let p = k.source();
    for x in 0..l.len() {
        if x != l.bottom() && x != l.top() && !m3_through(l, x) {
            return Err(format!("no M3 through {}", l.name(x)));
        }
    }
    for c in all_congruences(l).congruences() {
        if !(c.is_zero() || c.is_one() || is_i_congruence(l, c)) {
            return Err(format!(
                "congruence {:?} is not 0, 1 or isolating",
                c.nontrivial_named_blocks(l)
            ));
        }
        if is_i_congruence(l, c) {
            let b = base(k, c).map_err(|e| e.to_string())?;
            for &y in &b {
                for &x in p.interior() {
                    if p.poset().leq(x, y) && !b.contains(&x) {
                        return Err(format!("Base misses {}", p.poset().name(x)));
                    }
                }
            }
        }
    }
    for h in interior_down_sets(p) {
        let beta = beta_h(k, t, &h).map_err(|e| e.to_string())?;
        if !beta.is_congruence_of(l) {
            return Err("β_H fails substitution".into());
        }
        for b in beta.blocks() {
            let chain = b
                .iter()
                .all(|&x| b.iter().all(|&y| l.leq(x, y) || l.leq(y, x)));
            if b.len() > 3 || !chain {
                return Err(format!("β_H block of size {} (chain: {chain})", b.len()));
            }
        }
    }
    Ok(())
}

fn oracle_lattices(t: &Templates) -> Vec<FiniteLattice> {
    let mut v = lattices_up_to(7);
    v.push(FiniteLattice::m3());
    v.push(FiniteLattice::c2xc3());
    v.push(t.s().lattice().clone());
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    v.extend((0..50).map(|_| random_lattice(&mut rng, 10)));
    v
}

fn principal_matches_intersection(l: &FiniteLattice) -> bool {
    let con = all_congruences(l);
    (0..l.len()).all(|x| {
        (0..l.len()).all(|y| {
            let meet = con
                .congruences()
                .iter()
                .filter(|c| c.related(x, y))
                .fold(Congruence::one(l.len()), |m, c| m.meet(c));
            principal_congruence(l, x, y) == meet
        })
    })
}

fn valuation_holds(l: &FiniteLattice) -> Result<(), String> {
    let v = valuation(l).map_err(|e| e.to_string())?;
    let con = v.order();
    if v.value(&Congruence::zero(l.len())) != Some(0) {
        return Err("v(0) ≠ 0".into());
    }
    for a in 0..con.len() {
        for b in 0..con.len() {
            let j = join_congruences(l, con.get(a), con.get(b));
            if v.value(&j).unwrap_or(usize::MAX) > v.values()[a] + v.values()[b] {
                return Err("subadditivity".into());
            }
        }
    }
    let mut low: Vec<Congruence> = (0..con.len())
        .filter(|&k| v.values()[k] <= 1)
        .map(|k| con.get(k).clone())
        .collect();
    let mut princ = princ_order(l).congruences().to_vec();
    low.sort();
    princ.sort();
    if low != princ {
        return Err("{v ≤ 1} ≠ Princ".into());
    }
    Ok(())
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_all(dir: &Path, tag: &str, jobs: &str) -> Vec<Vec<u8>> {
    let bin = env!("CARGO_BIN_EXE_princ");
    let k = dir.join(format!("k-{tag}.json"));
    let dot = dir.join(format!("k-{tag}.dot"));
    let order = dir.join(format!("princ-{tag}.json"));
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    let commands: Vec<Vec<String>> = vec![
        vec![
            "build".into(),
            "--poset".into(),
            s(&fixture("vee.json")),
            "--out".into(),
            s(&k),
        ],
        vec!["verify".into(), "--poset".into(), s(&fixture("b2.json"))],
        vec![
            "fuzz",
            "--max-size",
            "8",
            "--samples",
            "30",
            "--seed",
            "77",
            "--jobs",
            jobs,
        ]
        .into_iter()
        .map(String::from)
        .collect(),
        vec!["con".into(), "--lattice".into(), s(&k)],
        vec![
            "princ".into(),
            "--lattice".into(),
            s(&k),
            "--out".into(),
            s(&order),
        ],
        vec!["valuation".into(), "--lattice".into(), s(&k)],
        vec![
            "export-dot".into(),
            "--lattice".into(),
            s(&k),
            "--out".into(),
            s(&dot),
        ],
    ];
    let mut out = Vec::new();
    for args in commands {
        let o = Command::new(bin)
            .args(&args)
            .env_remove("PRINC_TEMPLATES")
            .output()
            .expect("binary runs");
        out.push(o.stdout);
        out.push(o.status.code().unwrap_or(-1).to_string().into_bytes());
    }
    for f in [k, dot, order] {
        out.push(std::fs::read(f).unwrap_or_default());
    }
    out
}

fn main() {
    let t = Templates::builtin().expect("builtin templates load");
    let mut results: Vec<(u32, Outcome)> = Vec::new();

    let start = Instant::now();
    let run = fuzz(&FUZZ, &t).expect("fuzz runs");
    let elapsed = start.elapsed();
    results.push((
        1,
        outcome(
            run.failed() == 0 && elapsed < FUZZ_BUDGET,
            format!(
                "{} samples |P| ≤ {}: pass={} fail={} in {:.1}s (budget {}s)",
                FUZZ.samples,
                FUZZ.max_size,
                run.passed(),
                run.failed(),
                elapsed.as_secs_f64(),
                FUZZ_BUDGET.as_secs()
            ),
        ),
    ));

    let mismatches: Vec<usize> = run
        .samples
        .iter()
        .filter(|s| s.report.con_count != count_down_sets(s.poset.poset()))
        .map(|s| s.index)
        .collect();
    results.push((
        2,
        outcome(
            mismatches.is_empty(),
            format!(
                "|Con K| = |Down⁻P| on {} samples; mismatches {mismatches:?}",
                run.samples.len()
            ),
        ),
    ));

    let s = t.s();
    let sl = s.lattice();
    let cons = all_congruences(sl);
    let icons: Vec<&Congruence> = cons
        .congruences()
        .iter()
        .filter(|c| is_i_congruence(sl, c))
        .collect();
    let cp = principal_congruence(sl, s.at("a_p"), s.at("b_p"));
    let cq = principal_congruence(sl, s.at("a_q"), s.at("b_q"));
    let two = icons.len() == 2
        && icons.contains(&&cp)
        && icons.contains(&&cq)
        && cp.refines(&cq)
        && cp != cq;
    let primes = sl.prime_intervals().len();
    let quotient = sl
        .quotient(&cq)
        .ok()
        .and_then(|q| lattice_iso(&q, &FiniteLattice::c2xc3()))
        .is_some();
    let de = principal_congruence(sl, s.at("d"), s.at("e")) == cp;
    results.push((
        3,
        outcome(
            two && primes == 12 && quotient && de,
            format!(
                "two I-congruences con(a_p,b_p) < con(a_q,b_q): {two}; prime intervals = {primes} (want 12); S/con(a_q,b_q) ≅ C2×C3: {quotient}; con(d,e) = con(a_p,b_p): {de}"
            ),
        ),
    ));

    let mut degenerate = Vec::new();
    for n in [1usize, 2] {
        let names = ["0", "1"];
        let covers: Vec<(&str, &str)> = if n == 2 { vec![("0", "1")] } else { vec![] };
        let p = BoundedPoset::new(Poset::from_covers(&names[..n], &covers).unwrap()).unwrap();
        let k = assemble_k(&p, &t).unwrap();
        let l = k.lattice();
        let is_chain = l.len() == n && l.length() == n - 1;
        let iso = order_iso(&princ_order(l).to_poset(l), p.poset()).is_some();
        degenerate.push(is_chain && iso);
    }
    results.push((
        4,
        outcome(
            degenerate.iter().all(|&b| b),
            format!("|P| = 1: {}; |P| = 2: {}", degenerate[0], degenerate[1]),
        ),
    ));

    let mut broken = Vec::new();
    let mut too_long = Vec::new();
    let mut not_five = Vec::new();
    for smp in &run.samples {
        if smp.poset.interior().is_empty() {
            continue;
        }
        let k = assemble_k(&smp.poset, &t).unwrap();
        if let Err(e) = structural(&k, &t) {
            broken.push(format!("sample {}: {e}", smp.index));
        }
        let len = k.lattice().length();
        if len > 5 {
            too_long.push((smp.index, len));
        } else if !smp.poset.interior_comparabilities().is_empty() && len != 5 {
            not_five.push((smp.index, len));
        }
    }
    let max_len = too_long.iter().map(|x| x.1).max().unwrap_or(5);
    results.push((
        5,
        outcome(
            broken.is_empty() && too_long.is_empty() && not_five.is_empty(),
            format!(
                "M3/0-1-I/Base/β_H failures: {}; length > 5 on {} samples (max {max_len}); length ≠ 5 with a comparable pair on {}",
                broken.len(),
                too_long.len(),
                not_five.len()
            ),
        ),
    ));

    let lattices = oracle_lattices(&t);
    let start = Instant::now();
    let bad = lattices
        .iter()
        .filter(|l| !principal_matches_intersection(l))
        .count();
    let elapsed = start.elapsed();
    results.push((
        6,
        outcome(
            bad == 0 && elapsed < ORACLE_BUDGET,
            format!(
                "{} lattices, {bad} mismatches, {:.2}s (budget {}s)",
                lattices.len(),
                elapsed.as_secs_f64(),
                ORACLE_BUDGET.as_secs()
            ),
        ),
    ));

    let mut with_k = lattices.clone();
    with_k.extend(
        run.samples
            .iter()
            .map(|s| assemble_k(&s.poset, &t).unwrap().lattice().clone()),
    );
    let val_fail: Vec<String> = with_k
        .iter()
        .filter_map(|l| valuation_holds(l).err())
        .collect();
    let v2 = lattices_up_to(7)
        .iter()
        .find(|l| {
            valuation(l)
                .map(|v| v.values().contains(&2))
                .unwrap_or(false)
        })
        .map(|l| l.len());
    results.push((
        7,
        outcome(
            val_fail.is_empty() && v2.is_some(),
            format!("{} lattices, failures {val_fail:?}; smallest lattice with v = 2 has {v2:?} elements", with_k.len()),
        ),
    ));

    let dir = std::env::temp_dir().join(format!("princ-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = run_all(&dir, "a", "1");
    let b = run_all(&dir, "b", "4");
    let _ = std::fs::remove_dir_all(&dir);
    results.push((
        8,
        outcome(
            a == b,
            format!("{} outputs compared across two runs (jobs 1 vs 4)", a.len()),
        ),
    ));

    let mut failing = BTreeSet::new();
    for (n, o) in &results {
        println!(
            "criterion {n}: {} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.passed {
            failing.insert(*n);
        }
    }
    let known: BTreeSet<u32> = KNOWN_FAILURES.into_iter().collect();
    println!("failing {failing:?}, known {known:?}");
    if failing != known {
        eprintln!("the set of failing criteria changed");
        std::process::exit(1);
    }
}
