//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use ipstar::corpus::{all_of_order, named_families};
use ipstar::partition::all_colorings;
use ipstar::{
    brute_force_subsystem, finite_products, finite_sums, group_check, hindman_finite,
    hindman_threshold, ideal_structure, idempotent_order, idempotents, ip_star_refute, parse_spec,
    product_formula_check, scale_witness, search_subsystem, state_of, Coloring, Document,
    FiniteSemigroup, FsFpState, SearchBudget, SearchOutcome, Sequence, SetSpec,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

/// Minimal N at which every 2-colouring of 1..=N has a monochromatic
/// {x, y, x+y}, as measured by the exhaustive oracle below.
const HINDMAN_THRESHOLD_R2_K2: usize = 9;

fn main() {
    let criteria: [Criterion; 8] = [
        ("congruence corpus search", congruence_corpus),
        ("punctured target", punctured_target),
        ("search agrees with brute force", oracle_equivalence),
        ("witness scaling", witness_scaling),
        ("FS/FP algebra", fsfp_algebra),
        ("pigeonhole consistency", pigeonhole),
        ("finite semigroup sweep", semigroup_sweep),
        ("finite Hindman", hindman),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {}. {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name} ({secs:.2}s): {why}", i + 1);
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

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn subset_sums(ys: &[u128]) -> BTreeSet<u128> {
    (1u32..1 << ys.len())
        .map(|mask| {
            (0..ys.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| ys[i])
                .sum()
        })
        .collect()
}

fn subset_products(ys: &[u128]) -> BTreeSet<u128> {
    (1u32..1 << ys.len())
        .map(|mask| {
            (0..ys.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| ys[i])
                .product()
        })
        .collect()
}

fn to_u128(v: &BigUint) -> u128 {
    u128::try_from(v).expect("fits in u128")
}

fn to_big(set: &BTreeSet<u128>) -> BTreeSet<BigUint> {
    set.iter().map(|&v| BigUint::from(v)).collect()
}

/// Runs `ipstar search`, then `ipstar verify`, then rechecks the emitted
/// document with plain integer arithmetic against `member`.
fn search_and_check(
    seq: &str,
    spec: &str,
    depth: usize,
    window: Option<usize>,
    member: impl Fn(u128) -> bool,
) -> Result<(Duration, Vec<Vec<usize>>), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("cert.json");
    let depth_s = depth.to_string();
    let mut args = vec!["search", "--seq", seq, "--spec", spec, "--depth", &depth_s];
    let window_s = window.map(|w| w.to_string());
    if let Some(w) = &window_s {
        args.extend(["--window", w]);
    }
    args.extend(["--json", path.to_str().unwrap()]);

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ipstar"))
        .args(&args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || {
        format!(
            "{spec}: search exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        )
    })?;
    let v = Command::new(env!("CARGO_BIN_EXE_ipstar"))
        .args(["verify", "--cert", path.to_str().unwrap()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(v.status.code() == Some(0), || {
        format!("{spec}: verify exited {:?}", v.status.code())
    })?;

    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let doc = Document::from_json(&text).map_err(|e| e.to_string())?;
    let blocks = doc.blocks.clone().ok_or("no blocks")?;
    let x: Vec<u128> = doc
        .x
        .as_ref()
        .ok_or("no x")?
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    ensure(blocks.len() == depth, || {
        format!("{spec}: {} blocks, wanted {depth}", blocks.len())
    })?;
    for w in blocks.windows(2) {
        ensure(w[0].iter().max() < w[1].iter().min(), || {
            format!("{spec}: blocks out of order {blocks:?}")
        })?;
    }
    let ys: Vec<u128> = blocks
        .iter()
        .map(|b| b.iter().map(|&i| x[i - 1]).sum())
        .collect();
    let recorded: Vec<u128> = doc
        .ys
        .as_ref()
        .ok_or("no ys")?
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    ensure(ys == recorded, || {
        format!("{spec}: ys {recorded:?} recomputed as {ys:?}")
    })?;
    for v in subset_sums(&ys).into_iter().chain(subset_products(&ys)) {
        ensure(member(v), || format!("{spec}: {v} escapes the target"))?;
    }
    Ok((elapsed, blocks))
}

fn congruence_corpus() -> Check {
    let mut notes = Vec::new();
    for (spec, m, depth) in [
        ("mod(6,0)", 6u128, 5),
        ("mod(4,0)", 4, 4),
        ("mod(9,0)", 9, 4),
    ] {
        let (elapsed, blocks) = search_and_check("nat:64", spec, depth, None, |v| v % m == 0)?;
        ensure(elapsed < Duration::from_secs(5), || {
            format!("{spec}: took {elapsed:?}")
        })?;
        notes.push(format!("{spec} {blocks:?}"));
    }
    Ok(notes.join("; "))
}

fn punctured_target() -> Check {
    let spec = "and(mod(6,0), not(bits(6 12 36; 1000000)))";
    let (_, blocks) = search_and_check("nat:128", spec, 4, Some(128), |v| {
        v % 6 == 0 && ![6, 12, 36].contains(&v)
    })?;
    Ok(format!("{blocks:?}"))
}

fn random_spec(rng: &mut ChaCha8Rng, depth: u32) -> SetSpec {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..8) {
            0..=4 => {
                let m = rng.gen_range(1..=8u64);
                SetSpec::congruence(m, rng.gen_range(0..m)).unwrap()
            }
            5 => SetSpec::at_least(rng.gen_range(1..=20)).unwrap(),
            _ => {
                let lo = rng.gen_range(1..=20u64);
                SetSpec::interval(lo, Some(BigUint::from(lo + rng.gen_range(0..200u64)))).unwrap()
            }
        };
    }
    let kids = |rng: &mut ChaCha8Rng| {
        (0..rng.gen_range(2..=3))
            .map(|_| random_spec(rng, depth - 1))
            .collect()
    };
    match rng.gen_range(0..3) {
        0 => random_spec(rng, depth - 1).complement(),
        1 => SetSpec::and(kids(rng)),
        _ => SetSpec::or(kids(rng)),
    }
}

fn oracle_equivalence() -> Check {
    let x = Sequence::naturals(8).unwrap();
    let budget = SearchBudget::new(2, 8, 3, 10_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b5);
    let mut found = 0;
    for i in 0..20 {
        let spec = random_spec(&mut rng, 2);
        let fast = search_subsystem(&x, &spec, budget).map_err(|e| e.to_string())?;
        let slow = brute_force_subsystem(&x, &spec, budget).map_err(|e| e.to_string())?;
        ensure(fast.kind() == slow.kind(), || {
            format!("spec #{i} {spec}: {} vs {}", fast.kind(), slow.kind())
        })?;
        if let (Some(a), Some(b)) = (fast.certificate(), slow.certificate()) {
            ensure(a == b, || {
                format!("spec #{i} {spec}: {:?} vs {:?}", a.blocks, b.blocks)
            })?;
            found += 1;
        }
        ensure(!matches!(fast, SearchOutcome::NodeLimitReached), || {
            format!("spec #{i} hit the node limit")
        })?;
    }
    Ok(format!("20/20 agree, {found} found"))
}

fn witness_scaling() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut refuted = 0;
    for _ in 0..50 {
        let m = rng.gen_range(1..=12u64);
        let n = rng.gen_range(1..=10u64);
        let k = rng.gen_range(1..=4usize);
        let a = SetSpec::multiples(m).unwrap();
        let pre = a
            .dilation_preimage(&BigUint::from(n))
            .map_err(|e| e.to_string())?;
        let Some(w) = ip_star_refute(&pre, k, 200).map_err(|e| e.to_string())? else {
            continue;
        };
        let scaled = scale_witness(&w, &BigUint::from(n)).map_err(|e| e.to_string())?;
        let terms: Vec<u128> = scaled.terms().iter().map(to_u128).collect();
        ensure(terms.len() == k, || {
            format!("m={m} n={n}: scaled witness has {} terms", terms.len())
        })?;
        for v in subset_sums(&terms) {
            ensure(v % m as u128 != 0, || {
                format!("m={m} n={n} k={k}: {v} lands in A")
            })?;
        }
        let again = ip_star_refute(&a, k, 200 * n).map_err(|e| e.to_string())?;
        ensure(again.is_some(), || {
            format!("m={m} n={n} k={k}: A not refuted at all")
        })?;
        refuted += 1;
    }
    Ok(format!(
        "{refuted}/50 triples produced witnesses, all scaled witnesses avoid A"
    ))
}

fn fsfp_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf5f9);
    for case in 0..1000 {
        let len = rng.gen_range(1..=10);
        let ys: Vec<u128> = (0..len).map(|_| rng.gen_range(1..=1000u128)).collect();
        let big: Vec<BigUint> = ys.iter().map(|&v| BigUint::from(v)).collect();
        let st = state_of(&big).map_err(|e| e.to_string())?;
        ensure(*st.fs() == to_big(&subset_sums(&ys)), || {
            format!("case {case}: FS mismatch for {ys:?}")
        })?;
        ensure(*st.fp() == to_big(&subset_products(&ys)), || {
            format!("case {case}: FP mismatch for {ys:?}")
        })?;
        ensure(st.fs().len() < 1 << len, || {
            format!("case {case}: |FS| = {}", st.fs().len())
        })?;
        ensure(st.fp().len() < 1 << len, || {
            format!("case {case}: |FP| = {}", st.fp().len())
        })?;
        ensure(
            finite_sums(&big).map_err(|e| e.to_string())? == *st.fs(),
            || format!("case {case}: finite_sums"),
        )?;
        ensure(
            finite_products(&big).map_err(|e| e.to_string())? == *st.fp(),
            || format!("case {case}: finite_products"),
        )?;

        let (head, y) = (&ys[..len - 1], ys[len - 1]);
        let (fs0, fp0) = (subset_sums(head), subset_products(head));
        let mut fs: BTreeSet<u128> = fs0.iter().map(|t| t + y).collect();
        fs.extend(&fs0);
        fs.insert(y);
        let mut fp: BTreeSet<u128> = fp0.iter().map(|s| s * y).collect();
        fp.extend(&fp0);
        fp.insert(y);
        ensure(*st.fs() == to_big(&fs) && *st.fp() == to_big(&fp), || {
            format!("case {case}: one-step identity")
        })?;

        let mut inc = FsFpState::empty();
        for b in &big {
            inc.push(b.clone()).map_err(|e| e.to_string())?;
        }
        ensure(inc == st, || {
            format!("case {case}: incremental state differs")
        })?;
    }
    Ok("1000 sequences".into())
}

fn pigeonhole() -> Check {
    let a = parse_spec("mod(6,0)").map_err(|e| e.to_string())?;
    let none = ip_star_refute(&a, 6, 60).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || {
        format!("k=6 refuted by {:?}", none.unwrap().terms())
    })?;
    let w = ip_star_refute(&a, 3, 60)
        .map_err(|e| e.to_string())?
        .ok_or("k=3 found nothing")?;
    let terms: Vec<u128> = w.terms().iter().map(to_u128).collect();
    ensure(terms == [1, 2, 7], || format!("k=3 witness {terms:?}"))?;
    Ok("k=6 none, k=3 (1,2,7)".into())
}

fn check_semigroup(s: &FiniteSemigroup, label: &str, formula: bool) -> Result<(), String> {
    let err = |e: ipstar::Error| format!("{label}: {e}");
    let ids = idempotents(s);
    ensure(!ids.is_empty(), || format!("{label}: no idempotents"))?;
    let st = ideal_structure(s).map_err(err)?;
    let left: BTreeSet<usize> = st.minimal_left.iter().flatten().copied().collect();
    let right: BTreeSet<usize> = st.minimal_right.iter().flatten().copied().collect();
    ensure(left == st.kernel && right == st.kernel, || {
        format!("{label}: K, minL, minR disagree")
    })?;
    // the kernel is the smallest two-sided ideal: S K S within K, and K
    // inside every S a S
    let n = s.order();
    for &k in &st.kernel {
        for a in 0..n {
            ensure(
                st.kernel.contains(&s.mul(a, k)) && st.kernel.contains(&s.mul(k, a)),
                || format!("{label}: kernel not an ideal"),
            )?;
        }
    }
    for a in 0..n {
        let mut ideal: BTreeSet<usize> = BTreeSet::from([a]);
        for u in 0..n {
            ideal.insert(s.mul(u, a));
            ideal.insert(s.mul(a, u));
            for v in 0..n {
                ideal.insert(s.mul(s.mul(u, a), v));
            }
        }
        ensure(st.kernel.is_subset(&ideal), || {
            format!("{label}: kernel not minimal")
        })?;
    }
    let order = idempotent_order(s).map_err(err)?;
    let min_ids: BTreeSet<usize> = ids
        .iter()
        .copied()
        .filter(|&e| st.kernel.contains(&e))
        .collect();
    ensure(order.minimal == min_ids, || {
        format!(
            "{label}: minimal idempotents {:?} vs {min_ids:?}",
            order.minimal
        )
    })?;
    for l in &st.minimal_left {
        for r in &st.minimal_right {
            ensure(group_check(s, l, r).map_err(err)?, || {
                format!("{label}: L={l:?} R={r:?} not a group")
            })?;
        }
    }
    if formula {
        for mask in 0u32..1 << n {
            let a: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            for p in 0..n {
                for q in 0..n {
                    ensure(product_formula_check(s, p, q, &a).map_err(err)?, || {
                        format!("{label}: product formula fails at p={p} q={q} A={a:?}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn semigroup_sweep() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=3 {
        for (i, s) in all_of_order(n).iter().enumerate() {
            check_semigroup(s, &format!("order {n} #{i}"), true)?;
            count += 1;
        }
    }
    for (name, s) in named_families(6) {
        check_semigroup(&s, &name, s.order() <= 3)?;
        count += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{count} semigroups"))
}

/// Lexicographically first monochromatic x < y with x + y <= N.
fn pair_oracle(c: &Coloring) -> Option<(u32, Vec<usize>)> {
    let n = c.bound();
    let col = |v: usize| c.color(v).unwrap();
    for x in 1..=n {
        for y in x + 1..=n {
            if x + y <= n && col(x) == col(y) && col(y) == col(x + y) {
                return Some((col(x), vec![x, y]));
            }
        }
    }
    None
}

fn hindman() -> Check {
    let mut oracle_threshold = None;
    for n in 1..=12 {
        let mut all = true;
        for c in all_colorings(n, 2) {
            let want = pair_oracle(&c);
            let got = hindman_finite(&c, 2)
                .map_err(|e| e.to_string())?
                .map(|(col, w)| {
                    (
                        col,
                        w.terms()
                            .iter()
                            .map(|t| to_u128(t) as usize)
                            .collect::<Vec<_>>(),
                    )
                });
            ensure(got == want, || {
                format!("N={n} {:?}: {got:?} vs {want:?}", c.colors())
            })?;
            all &= want.is_some();
        }
        if all && oracle_threshold.is_none() {
            oracle_threshold = Some(n);
        }
    }
    let lib = hindman_threshold(2, 2, 12).map_err(|e| e.to_string())?;
    ensure(lib == oracle_threshold, || {
        format!("threshold {lib:?} vs oracle {oracle_threshold:?}")
    })?;
    ensure(lib == Some(HINDMAN_THRESHOLD_R2_K2), || {
        format!("threshold {lib:?} moved from snapshot")
    })?;
    Ok(format!(
        "all colourings N<=12 agree, threshold {HINDMAN_THRESHOLD_R2_K2}"
    ))
}
