//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! All comparisons are exact over rationals; the numeric tolerance is zero
//! everywhere. Reference values are recomputed by independent test-side
//! oracles (naive powers, hash-based Boolean period detection, brute-force
//! sequence evaluation) rather than by the library routine under test.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use maxplus::bounds::{bg_primitive, cbfn_matrix, cbfn_system, ha_matrix, ha_system, kim, syk};
use maxplus::graph::{digraph_of, pigeonhole_subcollection, reduce_walk, reduced_length_bound, Digraph, Walk};
use maxplus::nachtigall::{component_transient_limit, decompose, verify_decomposition};
use maxplus::periodicity::{
    ep_gcd_refine, ep_max, ep_max_lemma_bound, exact_transient_system_with, matrix_transient, minimal_period,
    EPSeq, HorizonPolicy, OracleOptions,
};
use maxplus::spectral::critical_report;
use maxplus::toolkit::compare::{analyze_instance, instance_seeds, ExperimentRow};
use maxplus::toolkit::{gen_prime_cycles, gen_random_irreducible, gen_random_vector, gen_wielandt, RandomSpec};
use maxplus::{rat, MaxPlus, MaxPlusMatrix, MaxPlusVector, Rational};

/// Exact comparisons only.
const TOLERANCE: i128 = 0;

const SWEEP_SEED: u64 = 20_240_601;
const SWEEP_COUNT: usize = 500;
const VECTORS_PER_INSTANCE: usize = 2;

struct SweepInstance {
    a: MaxPlusMatrix,
    row: ExperimentRow,
    systems: Vec<SystemCheck>,
}

struct SystemCheck {
    transient: u64,
    bounds: Vec<(&'static str, Rational)>,
}

fn loosest() -> OracleOptions {
    OracleOptions { policy: HorizonPolicy::Loosest, ..OracleOptions::default() }
}

fn sweep() -> Vec<SweepInstance> {
    let densities = [0.4, 0.7, 1.0];
    instance_seeds(SWEEP_SEED, SWEEP_COUNT)
        .into_par_iter()
        .enumerate()
        .map(|(id, seed)| {
            let spec = RandomSpec {
                n: 2 + id % 6,
                seed,
                wmin: rat(-5),
                wmax: rat(5),
                density: densities[(id / 6) % 3],
            };
            let a = gen_random_irreducible(&spec).expect("valid generator parameters");
            let row = analyze_instance(id, seed, &a).expect("irreducible instance");
            let systems = (0..VECTORS_PER_INSTANCE as u64)
                .map(|t| {
                    let v = gen_random_vector(a.dim(), seed ^ (t + 1), rat(-5), rat(5)).unwrap();
                    let cert = exact_transient_system_with(&a, &v, &loosest()).expect("system oracle");
                    let (girth, cyc) = cbfn_system(&a, &v).unwrap();
                    SystemCheck {
                        transient: cert.transient,
                        bounds: vec![
                            ("ha_system", ha_system(&a, &v).unwrap()),
                            ("cbfn_system_girth", girth),
                            ("cbfn_system_cyclicity", cyc),
                        ],
                    }
                })
                .collect();
            SweepInstance { a, row, systems }
        })
        .collect()
}

fn criterion_1(sweep: &[SweepInstance]) -> Result<String, String> {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for inst in sweep {
        let t = rat(inst.row.exact_transient as i128);
        for e in inst.row.bounds.entries.iter().filter(|e| !e.system) {
            if let Some(v) = e.value {
                checked += 1;
                if v - t < rat(-TOLERANCE) {
                    failures.push((format!("instance {}: {} = {v} < {t}", inst.row.instance_id, e.name), v.ceil() >= t));
                }
            }
        }
        for s in &inst.systems {
            for (name, v) in &s.bounds {
                checked += 1;
                let t = rat(s.transient as i128);
                if *v < t {
                    failures.push((format!("instance {}: {name} = {v} < {t}", inst.row.instance_id), v.ceil() >= t));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{} instances, {checked} bound evaluations, 0 violations", sweep.len()))
    } else {
        let rounding = failures.iter().filter(|f| f.1).count();
        let listed: Vec<&str> = failures.iter().map(|f| f.0.as_str()).collect();
        Err(format!(
            "{} violations, {rounding} of them covered by the ceiling of the bound: {}",
            failures.len(),
            listed.join("; ")
        ))
    }
}

fn shifted(a: &MaxPlusMatrix, by: Rational) -> MaxPlusMatrix {
    a.map(|x| x.shift(by))
}

fn criterion_2(sweep: &[SweepInstance]) -> Result<String, String> {
    for inst in sweep {
        let a = &inst.a;
        let report = critical_report(a).unwrap();
        let p = report.gamma_c;
        let step = report.lambda * Rational::from_integer(p as i128);
        let k0 = inst.row.exact_transient;
        let start = k0.saturating_sub(1);
        // naive powers from A^{start} onward
        let mut window: Vec<MaxPlusMatrix> = vec![a.power(start)];
        for _ in 0..(4 * p + 1) {
            let next = window.last().unwrap().mul(a).unwrap();
            window.push(next);
        }
        let at = |k: u64| &window[(k - start) as usize];
        for k in k0..=k0 + 3 * p {
            if *at(k + p) != shifted(at(k), step) {
                return Err(format!("instance {}: relation fails at k = {k} ≥ K = {k0}", inst.row.instance_id));
            }
        }
        if k0 > 0 && *at(k0 - 1 + p) == shifted(at(k0 - 1), step) {
            return Err(format!("instance {}: relation already holds at K − 1 = {}", inst.row.instance_id, k0 - 1));
        }
    }
    Ok(format!("{} instances, relation exact on [K, K+3γc] and failing at K−1", sweep.len()))
}

/// Boolean power sequence run until the first repeated matrix; returns
/// the index at which the cycle is entered and the cycle length.
fn naive_index_and_period(g: &Digraph) -> (usize, usize) {
    let n = g.node_count();
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect();
    let mut current: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut seen: HashMap<Vec<Vec<bool>>, usize> = HashMap::new();
    for k in 0.. {
        if let Some(&first) = seen.get(&current) {
            return (first, k - first);
        }
        seen.insert(current.clone(), k);
        current = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|h| current[i][h] && adj[h][j])).collect())
            .collect();
    }
    unreachable!()
}

fn criterion_3() -> Result<String, String> {
    let expected = [2usize, 5, 10, 17, 26, 37, 50];
    let mut got = Vec::new();
    for n in 2..=8 {
        let g = digraph_of(&gen_wielandt(n).unwrap());
        let (index, period) = naive_index_and_period(&g);
        let (lib_index, _) = g.boolean_index().map_err(|e| e.to_string())?;
        if period != 1 || lib_index as usize != index {
            return Err(format!("n = {n}: naive ({index}, period {period}) vs library {lib_index}"));
        }
        got.push(index);
    }
    if got == expected {
        Ok(format!("indices {got:?}"))
    } else {
        Err(format!("indices {got:?}, expected {expected:?}"))
    }
}

fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let densities = [0.1, 0.25, 0.5];
    for t in 0..200 {
        let n = 1 + t % 8;
        let spec = RandomSpec {
            n,
            seed: rng.gen(),
            wmin: rat(0),
            wmax: rat(0),
            density: densities[(t / 8) % 3],
        };
        let g = digraph_of(&gen_random_irreducible(&spec).unwrap());
        let (index, period) = naive_index_and_period(&g);
        let girth = g.girth().unwrap() as u64;
        let cyclicity = g.cyclicity().unwrap();
        if period as u64 != cyclicity {
            return Err(format!("instance {t}: naive period {period} vs cyclicity {cyclicity}"));
        }
        if girth < cyclicity {
            return Err(format!("instance {t}: girth {girth} < cyclicity {cyclicity}"));
        }
        let bound = kim(n as u64, girth, cyclicity).map_err(|e| e.to_string())?;
        if index as u64 > bound {
            return Err(format!("instance {t}: index {index} > kim {bound} (n={n}, g={girth}, γ={cyclicity})"));
        }
    }
    Ok("200 digraphs, index ≤ kim bound and girth ≥ cyclicity".into())
}

fn random_square(rng: &mut ChaCha8Rng, n: usize, density: f64) -> MaxPlusMatrix {
    let data = (0..n * n)
        .map(|_| if rng.gen_bool(density) { MaxPlus::int(rng.gen_range(-5..=5)) } else { MaxPlus::Bottom })
        .collect();
    MaxPlusMatrix::new(n, data).unwrap()
}

fn criterion_5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut reducible = 0;
    for t in 0..100 {
        let n = 1 + t % 6;
        let a = random_square(&mut rng, n, [0.2, 0.4, 0.7][t % 3]);
        if !maxplus::graph::is_irreducible(&a) {
            reducible += 1;
        }
        let d = decompose(&a);
        let horizon = 3 * n * n + 10;
        let report = verify_decomposition(&a, &d, horizon);
        if let Some((k, i, j)) = report.mismatch {
            return Err(format!("instance {t}: mismatch at k = {k}, entry ({i}, {j})"));
        }
        // independent recheck with naive powers
        let mut power = MaxPlusMatrix::identity(n);
        for k in 0..=horizon {
            if d.eval(k).unwrap() != power {
                return Err(format!("instance {t}: naive mismatch at k = {k}"));
            }
            power = power.mul(&a).unwrap();
        }
        let limit = component_transient_limit(n);
        if let Some(c) = d.components.iter().find(|c| c.transient() > limit) {
            return Err(format!("instance {t}: component transient {} > {limit}", c.transient()));
        }
    }
    Ok(format!("100 matrices ({reducible} reducible), equality to k = 3n²+10, transients ≤ 2n²−n"))
}

fn brute_transient(values: &dyn Fn(usize) -> MaxPlus, p: usize, ratio: Rational, horizon: usize) -> usize {
    let step = ratio * Rational::from_integer(p as i128);
    (0..horizon).rev().find(|&k| values(k + p) != values(k).shift(step)).map_or(0, |k| k + 1)
}

fn criterion_6() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    // (a) two valid periods refine to their gcd
    for t in 0..200 {
        let g = rng.gen_range(1..=4usize);
        let (p, q) = (g * rng.gen_range(1..=4usize), g * rng.gen_range(1..=4usize));
        let ratio = Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        let k_true = rng.gen_range(0..6usize);
        let base: Vec<MaxPlus> = (0..g).map(|_| MaxPlus::int(rng.gen_range(-4..=4))).collect();
        let noise: Vec<MaxPlus> = (0..k_true).map(|_| MaxPlus::int(rng.gen_range(-9..=9))).collect();
        let value = |k: usize| {
            if k < k_true {
                noise[k]
            } else {
                base[k % g].shift(ratio * Rational::from_integer(k as i128))
            }
        };
        let samples: Vec<MaxPlus> = (0..k_true + 2 * p + 2 * q).map(value).collect();
        let s = EPSeq::from_samples(&samples, p, ratio).unwrap();
        let kq = k_true + rng.gen_range(0..3);
        let r = ep_gcd_refine(&s, q, kq).map_err(|e| format!("(a) case {t}: {e}"))?;
        let gcd = num_integer::gcd(p, q);
        if r.period() != gcd || r.transient() > s.transient().max(kq) {
            return Err(format!("(a) case {t}: period {} transient {}", r.period(), r.transient()));
        }
        if let Some(k) = (0..k_true + 4 * p * q).find(|&k| r.eval(k) != value(k)) {
            return Err(format!("(a) case {t}: value differs at {k}"));
        }
    }

    // (b) maximum of sequences with different ratios
    let mut nonzero_delta = 0;
    let mut literal_exceed = Vec::new();
    for t in 0..200 {
        let pa = rng.gen_range(1..=3usize);
        let pb = rng.gen_range(1..=3usize);
        let ra = Rational::new(rng.gen_range(-2..=2), rng.gen_range(1..=3));
        let rb = ra - Rational::new(rng.gen_range(1..=3), rng.gen_range(1..=4));
        let ka = rng.gen_range(0..5usize);
        let kb = rng.gen_range(0..5usize);
        let a_prefix: Vec<MaxPlus> = (0..ka + pa).map(|_| MaxPlus::int(rng.gen_range(-6..=6))).collect();
        let b_prefix: Vec<MaxPlus> = (0..kb + pb)
            .map(|_| if rng.gen_bool(0.2) { MaxPlus::Bottom } else { MaxPlus::int(rng.gen_range(-6..=12)) })
            .collect();
        let a = EPSeq::from_samples(&a_prefix, pa, ra).unwrap();
        let b = EPSeq::from_samples(&b_prefix, pb, rb).unwrap();
        if a.is_eventually_bottom() || b.is_eventually_bottom() {
            continue;
        }
        let c = ep_max(&a, &b).map_err(|e| format!("(b) case {t}: {e}"))?;
        let brute = |k: usize| a.eval(k).oplus(b.eval(k));
        let horizon = a.transient() + b.transient() + 1000;
        let truth = brute_transient(&brute, c.period(), c.ratio(), horizon);
        if truth != c.transient() || (0..horizon).any(|k| c.eval(k) != brute(k)) {
            return Err(format!("(b) case {t}: ep_max disagrees with brute force"));
        }
        let k0 = a.transient().max(b.transient());
        let p = pa.max(pb);
        let literal = literal_lemma_bound(&a, &b, k0, p);
        if Rational::from_integer(truth as i128) > literal {
            literal_exceed.push((t, truth, literal));
        }
        let sound = ep_max_lemma_bound(&a, &b).unwrap();
        if Rational::from_integer(truth as i128) > sound {
            return Err(format!("(b) case {t}: transient {truth} > library bound {sound}"));
        }
        if literal > Rational::from_integer((k0 + p - 1) as i128) {
            nonzero_delta += 1;
        }
    }

    // (c) pigeonhole subcollections
    for t in 0..500 {
        let d = rng.gen_range(1..=10usize);
        let xs: Vec<i64> = (0..d).map(|_| rng.gen_range(-50..=50)).collect();
        let idx = pigeonhole_subcollection(&xs, d as u64).map_err(|e| e.to_string())?;
        let sum: i64 = idx.iter().map(|&i| xs[i]).sum();
        let distinct = idx.windows(2).all(|w| w[0] < w[1]) && idx.iter().all(|&i| i < d);
        if idx.is_empty() || sum.rem_euclid(d as i64) != 0 || !distinct {
            return Err(format!("(c) case {t}: {xs:?} -> {idx:?}"));
        }
    }

    // (d) walk reduction
    for t in 0..500 {
        let n = rng.gen_range(1..=6usize);
        let spec = RandomSpec { n, seed: rng.gen(), wmin: rat(0), wmax: rat(0), density: 0.35 };
        let g = digraph_of(&gen_random_irreducible(&spec).unwrap());
        let len = rng.gen_range(0..80usize);
        let mut nodes = vec![rng.gen_range(0..n)];
        for _ in 0..len {
            let succ = g.successors(*nodes.last().unwrap());
            nodes.push(succ[rng.gen_range(0..succ.len())]);
        }
        let h = nodes[rng.gen_range(0..nodes.len())];
        let d = rng.gen_range(1..=5u64);
        let w = Walk::new(&g, nodes.clone()).unwrap();
        let r = reduce_walk(&w, d, h).map_err(|e| format!("(d) case {t}: {e}"))?;
        let ok_h = r.nodes().contains(&h);
        let ok_mod = (r.len() as u64) % d == (w.len() as u64) % d;
        let ok_len = (r.len() as u64) <= reduced_length_bound(n, d);
        let ok_del = deletes_only_cycles(&nodes, r.nodes());
        if !(ok_h && ok_mod && ok_len && ok_del) {
            return Err(format!("(d) case {t}: h {ok_h}, mod {ok_mod}, length {ok_len}, deletion {ok_del}"));
        }
    }
    let summary = format!(
        "(a) 200 gcd refinements, (b) 200 maxima ({nonzero_delta} with positive Δ term), (c) 500 subcollections, (d) 500 reductions"
    );
    match literal_exceed.first() {
        None => Ok(summary),
        Some((t, truth, literal)) => {
            let fractional = literal_exceed.iter().filter(|(_, truth, b)| rat(*truth as i128) <= b.ceil()).count();
            Err(format!(
                "{summary}; (b) transient exceeds K+p-1+Δ/(ϱa-ϱb) on {} of 200 pairs, {fractional} only through a fractional threshold and the rest with Δ < 0; first case {t}: transient {truth} > {literal}",
                literal_exceed.len()
            ))
        }
    }
}

/// `K + p − 1 + Δ/(ϱa − ϱb)` computed straight from samples, with `Δ` the
/// largest `b(k) − a(l)` over `k, l ∈ [K, K+p−1]` after removing the drift
/// `ϱa·k` from both sequences.
fn literal_lemma_bound(a: &EPSeq, b: &EPSeq, k0: usize, p: usize) -> Rational {
    let level = |s: &EPSeq, k: usize| s.eval(k).finite().map(|x| x - a.ratio() * Rational::from_integer(k as i128));
    let window = k0..k0 + p;
    let delta = window
        .clone()
        .filter_map(|k| level(b, k))
        .flat_map(|bk| window.clone().filter_map(move |l| level(a, l)).map(move |al| bk - al))
        .max()
        .expect("a is finite on its periodic part");
    Rational::from_integer((k0 + p - 1) as i128) + delta / (a.ratio() - b.ratio())
}

/// `short` arises from `long` by deleting closed sub-walks iff its edges
/// embed in order into the edges of `long` and both walks share endpoints;
/// the gaps between embedded edges then start and end at the same node.
fn deletes_only_cycles(long: &[usize], short: &[usize]) -> bool {
    if long.first() != short.first() || long.last() != short.last() {
        return false;
    }
    let mut pos = 0;
    for e in short.windows(2) {
        match (pos..long.len() - 1).find(|&i| long[i] == e[0] && long[i + 1] == e[1]) {
            Some(i) => pos = i + 1,
            None => return false,
        }
    }
    true
}

fn criterion_7() -> Result<String, String> {
    let a = MaxPlusMatrix::parse_rows(&["0 -1", "-1 -1"]).unwrap();
    let matrix = matrix_transient(&a, &OracleOptions::default()).map_err(|e| e.to_string())?.transient;
    let system = exact_transient_system_with(&a, &MaxPlusVector::zeros(2), &OracleOptions::default())
        .map_err(|e| e.to_string())?
        .transient;
    let got = (
        matrix,
        system,
        bg_primitive(&a).unwrap(),
        ha_matrix(&a).unwrap(),
        syk(&a).unwrap(),
        cbfn_matrix(&a).unwrap(),
    );
    let expected = (2, 1, rat(2), rat(8), rat(8), rat(4));
    if got == expected {
        Ok("transient 2, system 1, bg 2, ha 8, syk 8, cbfn 4".into())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn criterion_8() -> Result<String, String> {
    let families: [&[u64]; 4] = [&[2], &[2, 3], &[2, 3, 5], &[2, 3, 5, 7]];
    let mut periods = Vec::new();
    for primes in families {
        let a = gen_prime_cycles(primes, rat(1)).unwrap();
        let r = critical_report(&a).unwrap();
        if r.lambda != rat(0) {
            return Err(format!("{primes:?}: λ = {}", r.lambda));
        }
        let connectors = r.critical_edges.iter().any(|&(i, j)| a.get(i, j) != MaxPlus::ZERO);
        if connectors {
            return Err(format!("{primes:?}: a connector edge is critical"));
        }
        periods.push(r.gamma_c);
    }
    if periods != [2, 6, 30, 210] {
        return Err(format!("γ_c sequence {periods:?}"));
    }
    let a = gen_prime_cycles(&[2, 3, 5], rat(1)).unwrap();
    let minimal = minimal_period(&a, &OracleOptions::default()).map_err(|e| e.to_string())?;
    let naive = naive_minimal_period(&a, 30);
    if minimal != 30 || naive != 30 {
        return Err(format!("minimal period {minimal}, naive {naive}"));
    }
    Ok(format!("γ_c {periods:?}, minimal period of {{2,3,5}} = 30"))
}

/// Smallest `q ≤ max_q` with `A^{⊗(k+q)} = A^{⊗k}` at a large `k`, by plain
/// repeated multiplication (λ = 0 for this family).
fn naive_minimal_period(a: &MaxPlusMatrix, max_q: usize) -> u64 {
    let mut m = a.power(400);
    let base = m.clone();
    for q in 1..=max_q {
        m = m.mul(a).unwrap();
        if m == base {
            return q as u64;
        }
    }
    0
}

fn criterion_9(sweep: &[SweepInstance]) -> Result<String, String> {
    let mut pairs = 0;
    for inst in sweep {
        for s in &inst.systems {
            pairs += 1;
            if s.transient > inst.row.exact_transient {
                return Err(format!(
                    "instance {}: system {} > matrix {}",
                    inst.row.instance_id, s.transient, inst.row.exact_transient
                ));
            }
        }
    }
    Ok(format!("{pairs} (matrix, vector) pairs"))
}

fn criterion_10() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_maxplus"))
            .args(["compare", "--count", "40", "--n", "5", "--seed", "42", "--csv"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("compare exited with {}", status.status));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    if outputs[0] == outputs[1] && !outputs[0].is_empty() {
        Ok(format!("two runs, {} identical bytes", outputs[0].len()))
    } else {
        Err("CSV outputs differ".into())
    }
}

type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;

fn main() -> ExitCode {
    let data = sweep();
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("soundness sweep", Box::new(|| criterion_1(&data))),
        ("periodicity relation", Box::new(|| criterion_2(&data))),
        ("wielandt tightness", Box::new(criterion_3)),
        ("kim bound", Box::new(criterion_4)),
        ("nachtigall decomposition", Box::new(criterion_5)),
        ("lemma suite", Box::new(criterion_6)),
        ("worked instance", Box::new(criterion_7)),
        ("prime cycles", Box::new(criterion_8)),
        ("system vs matrix", Box::new(|| criterion_9(&data))),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}; tolerance {TOLERANCE})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
