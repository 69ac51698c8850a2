//! Acceptance suite: ten end-to-end criteria, each run at its stated scale
//! and time limit. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_graphs, hintikka_sentences, random_bounded_graph, random_sentence, random_with_s};
use succinv::canon::canonical_form;
use succinv::fixtures::{mix, relabel, tri};
use succinv::io::{successor_files, weave_report, write_successor};
use succinv::layering::is_cycle_through_s;
use succinv::logic::{
    ef_equivalent, linsucc_to_succ, model_check, succ_to_linsucc, verify_weave, Formula, Status,
    WeaveCertificate,
};
use succinv::structure::{Elem, Structure};
use succinv::weaver::Branch;
use succinv::{
    canonical_type, fractal_build, layered_neighborhoods, neighborhood, safe_to_add, short_cycle_through_s,
    type_census, weave_pair, FractalMode, ParamsBundle, PointedStructure,
};

type Outcome = Result<String, String>;

/// Name, time limit and body of one criterion.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("layering duality", Duration::from_secs(30), layering_duality),
        ("edge addition keeps layering", Duration::from_secs(30), edge_addition),
        ("weave TRI(30), one frequent type", Duration::from_secs(60), weave_tri30),
        ("weave MIX(71), one rare type", Duration::from_secs(300), weave_mix71),
        ("empirical EF certificate on TRI(8)", Duration::from_secs(120), ef_certificate),
        ("fractal base case and self-similarity", Duration::from_secs(60), fractal_properties),
        ("successor-flavor rewritings", Duration::from_secs(300), rewritings),
        ("isomorphism branch", Duration::from_secs(10), isomorphism_branch),
        ("EF game vs rank-2 sentence enumeration", Duration::from_secs(300), oracle_cross_validation),
        ("determinism", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > *limit => Err(format!("{d}; took {took:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn layering_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut unlayered) = (0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.03..0.25);
        let k = rng.gen_range(1..=4);
        let s = random_with_s(&mut rng, n, p, k);
        for r in [1, 2] {
            let by_definition = layered_neighborhoods(&s, r);
            let witness = short_cycle_through_s(&s, r);
            if let Some(c) = &witness {
                ensure(is_cycle_through_s(&s, c) && c.len() <= 2 * r + 1, || {
                    format!("invalid witness {c:?} at r={r}")
                })?;
                unlayered += 1;
            }
            ensure(by_definition == witness.is_none(), || {
                format!("disagreement at r={r} on {n} elements, witness {witness:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (structure, r) cases agree, {unlayered} not layered"))
}

fn edge_addition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut instances, mut additions, mut rejected) = (0, 0, 0);
    while instances < 1000 {
        let n = rng.gen_range(3..=12);
        let r = rng.gen_range(1..=2);
        let (p, k) = (rng.gen_range(0.02..0.12), rng.gen_range(0..=3));
        let s = random_with_s(&mut rng, n, p, k);
        if !layered_neighborhoods(&s, r) {
            continue;
        }
        instances += 1;
        for _ in 0..5 {
            let x = rng.gen_range(0..n) as Elem;
            let y = rng.gen_range(0..n) as Elem;
            if x == y {
                continue;
            }
            if !safe_to_add(&s, x, y, r) {
                rejected += 1;
                continue;
            }
            let grown = s.add_succ_pairs(&[(x, y)]).map_err(|e| e.to_string())?;
            ensure(layered_neighborhoods(&grown, r), || {
                format!("adding ({x}, {y}) at r={r} broke the layering")
            })?;
            additions += 1;
        }
    }
    Ok(format!(
        "{instances} layered instances, {additions} safe additions kept the layering, {rejected} candidates rejected"
    ))
}

const FULL_CHECKS: [&str; 8] = [
    "circular_successor",
    "layered",
    "edge_type_homogeneity",
    "fractal_regularity",
    "transfer_type_preservation",
    "threshold_equivalence",
    "segment_structure",
    "rare_flanking",
];

/// Weaves `g1` against a relabeled copy at r = 1, t = 2, d = 2 with `g`
/// derived from the number of occurring types, and verifies every check.
fn weave_and_verify(g1: &Structure, expect_beta: u64, expect_rare: usize) -> Outcome {
    let g2 = relabel(g1, 7);
    let n_occ = type_census(g1, 1, false).counts.len() as u64;
    let params = ParamsBundle::explicit(2, 1, 2, n_occ, None);
    let res = weave_pair(g1, &g2, &params).map_err(|e| e.to_string())?;
    ensure(res.branch == Branch::General, || format!("took the {:?} branch", res.branch))?;
    let cls = &res.classification;
    ensure(cls.beta == expect_beta && cls.rare.len() == expect_rare && cls.frequent.len() == 1, || {
        format!(
            "classification: beta={}, {} rare, {} frequent",
            cls.beta,
            cls.rare.len(),
            cls.frequent.len()
        )
    })?;
    let rep = verify_weave(&res, g1, &g2, 1, 2, None).map_err(|e| e.to_string())?;
    for prefix in &FULL_CHECKS {
        let matching: Vec<_> = rep.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
        ensure(!matching.is_empty(), || format!("check {prefix} missing"))?;
        for c in matching {
            ensure(c.status == Status::Pass, || format!("{}: {:?} ({})", c.name, c.status, c.detail))?;
        }
    }
    ensure(rep.passed, || "report not passed".into())?;
    Ok(format!(
        "g(beta)={}, greedy edges {:?}/{:?}, splices {:?}/{:?}, {} checks pass",
        cls.g_beta,
        res.state1.diagnostics.greedy_edges,
        res.state2.diagnostics.greedy_edges,
        res.state1.diagnostics.splices,
        res.state2.diagnostics.splices,
        rep.checks.len()
    ))
}

fn weave_tri30() -> Outcome {
    let g = tri(30);
    let n_occ = type_census(&g, 1, false).counts.len() as u64;
    let g0 = ParamsBundle::explicit(2, 1, 2, n_occ, None).g(0);
    ensure(g0 == 79, || format!("g(0) = {g0}, expected 79"))?;
    weave_and_verify(&g, 0, 0)
}

fn weave_mix71() -> Outcome {
    let g = mix(71);
    let p = ParamsBundle::explicit(2, 1, 2, type_census(&g, 1, false).counts.len() as u64, None);
    ensure(p.g(0) == 89 && p.g(4) == 213, || format!("g(0) = {}, g(4) = {}", p.g(0), p.g(4)))?;
    weave_and_verify(&g, 4, 1)
}

fn enriched(g: &Structure, succ: &[Elem]) -> Result<Structure, String> {
    g.with_successor_map(succ).map_err(|e| e.to_string())
}

fn ef_certificate() -> Outcome {
    let g1 = tri(8);
    let g2 = relabel(&g1, 11);
    let params = ParamsBundle::explicit(2, 1, 1, 1, Some(8));
    let res = weave_pair(&g1, &g2, &params).map_err(|e| e.to_string())?;
    let rep = verify_weave(&res, &g1, &g2, 1, 1, Some(2)).map_err(|e| e.to_string())?;
    let ef = rep.check("ef_equivalence").ok_or("no EF check in the report")?;
    ensure(ef.empirical, || "EF check not labeled empirical".into())?;
    ensure(ef.status == Status::Pass, || format!("EF check: {:?} ({})", ef.status, ef.detail))?;
    let direct = ef_equivalent(&enriched(&g1, &res.succ1)?, &enriched(&g2, &res.succ2)?, 2)
        .map_err(|e| e.to_string())?;
    ensure(direct, || "direct EF call disagrees".into())?;
    let others = rep.failures().map(|c| c.name.clone()).collect::<Vec<_>>();
    Ok(format!(
        "Duplicator wins 2 rounds on the 24-element enriched pair (empirical); other failed checks: {others:?}"
    ))
}

fn random_type(rng: &mut ChaCha8Rng, radius: usize) -> PointedStructure {
    let n = rng.gen_range(4..=12);
    let g = random_bounded_graph(rng, n, 3, 3 * n);
    let x = rng.gen_range(0..n) as Elem;
    neighborhood(&g, x, radius, false).expect("element in range")
}

fn fractal_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..20 {
        let radius = rng.gen_range(0..=2);
        let tau = random_type(&mut rng, radius);
        for mode in [FractalMode::Both, FractalMode::Upper, FractalMode::Lower] {
            let f = fractal_build(&tau, 0, mode).map_err(|e| e.to_string())?;
            ensure(f.structure.succ_pairs().is_empty(), || format!("type {i}: base case has S-edges"))?;
            let same = canonical_form(&f.structure.without_succ(), Some(f.center), false).code
                == canonical_form(&tau.structure, Some(tau.center), false).code;
            ensure(same, || format!("type {i}: base case differs from the type ({mode:?})"))?;
        }
    }
    let mut max_size = 0;
    for i in 0..20 {
        let k = rng.gen_range(1..=2);
        let tau = random_type(&mut rng, k);
        let f = fractal_build(&tau, k, FractalMode::Both).map_err(|e| e.to_string())?;
        max_size = max_size.max(f.structure.size());
        let next = f
            .structure
            .succ_pairs()
            .into_iter()
            .find(|&(a, _)| a == f.center)
            .map(|(_, b)| b)
            .ok_or_else(|| format!("pair {i}: center has no successor"))?;
        let around_next = neighborhood(&f.structure, next, k - 1, true).map_err(|e| e.to_string())?;
        let restricted = neighborhood(&tau.structure, tau.center, k - 1, false).map_err(|e| e.to_string())?;
        let smaller = fractal_build(&restricted, k - 1, FractalMode::Both).map_err(|e| e.to_string())?;
        ensure(
            canonical_type(&around_next, k - 1, true) == canonical_type(&smaller, k - 1, true),
            || format!("pair {i} (k={k}): radius coherence fails"),
        )?;
        ensure(short_cycle_through_s(&f.structure, k).is_none(), || {
            format!("pair {i}: fractal not layered")
        })?;
    }
    Ok(format!("20 base cases in 3 modes, 20 coherence pairs (largest fractal {max_size} elements)"))
}

/// Circular successor `i -> i+1 mod n` and linear successor with the edge
/// into `min` removed.
fn circular(n: usize) -> Vec<(Elem, Elem)> {
    (0..n).map(|i| (i as Elem, ((i + 1) % n) as Elem)).collect()
}

fn rewritings() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let to_lin: Vec<Formula> = (0..50)
        .map(|_| random_sentence(&mut rng, 2, &[("E", 2), ("S", 2)]))
        .collect();
    let to_circ: Vec<Formula> = (0..50)
        .map(|_| random_sentence(&mut rng, 2, &[("E", 2), ("Sbar", 2)]))
        .collect();
    let lin_rewritten: Vec<Formula> =
        to_lin.iter().map(succ_to_linsucc).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let circ_rewritten: Vec<Formula> =
        to_circ.iter().map(linsucc_to_succ).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut evaluations = 0u64;
    for n in 0..=4 {
        let circ = circular(n);
        // linear successors obtained by cutting the edge into each possible minimum
        let cuts: Vec<Vec<(Elem, Elem)>> = (0..n)
            .map(|m| circ.iter().copied().filter(|&(_, b)| b as usize != m).collect())
            .collect();
        let index_path: Vec<(Elem, Elem)> = circ.iter().copied().filter(|&(_, b)| b != 0).collect();
        for g in all_graphs(n) {
            let with_circ = g.with_succ(&circ).map_err(|e| e.to_string())?;
            let with_path = g.with_succ(&index_path).map_err(|e| e.to_string())?;
            let cut_structures: Vec<Structure> =
                cuts.iter().map(|c| g.with_succ(c).unwrap()).collect();
            for (phi, out) in to_lin.iter().zip(&lin_rewritten) {
                let a = model_check(&with_circ, phi).map_err(|e| e.to_string())?;
                let b = model_check(&with_path, out).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("succ_to_linsucc differs on n={n} for {phi}"))?;
                evaluations += 2;
            }
            for (psi, out) in to_circ.iter().zip(&circ_rewritten) {
                let a = model_check(&with_circ, out).map_err(|e| e.to_string())?;
                let mut b = false;
                for s in &cut_structures {
                    evaluations += 1;
                    if model_check(s, psi).map_err(|e| e.to_string())? {
                        b = true;
                        break;
                    }
                }
                ensure(a == b, || format!("linsucc_to_succ differs on n={n} for {psi}"))?;
                evaluations += 1;
            }
        }
    }
    Ok(format!("100 sentences on all 66067 structures with n <= 4, {evaluations} evaluations"))
}

fn isomorphism_branch() -> Outcome {
    let g1 = Structure::graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)]).map_err(|e| e.to_string())?;
    let g2 = relabel(&g1, 3);
    let params = ParamsBundle::explicit(3, 1, 1, 5, Some(1000));
    let res = weave_pair(&g1, &g2, &params).map_err(|e| e.to_string())?;
    ensure(res.branch == Branch::Isomorphism && res.isomorphism_branch, || {
        format!("took the {:?} branch", res.branch)
    })?;
    let (e1, e2) = (enriched(&g1, &res.succ1)?, enriched(&g2, &res.succ2)?);
    ensure(ef_equivalent(&e1, &e2, 3).map_err(|e| e.to_string())?, || "EF depth 3 fails".into())?;
    ensure(
        canonical_form(&e1, None, true).code == canonical_form(&e2, None, true).code,
        || "enriched structures not isomorphic".into(),
    )?;
    let rep = verify_weave(&res, &g1, &g2, 1, 1, Some(3)).map_err(|e| e.to_string())?;
    ensure(rep.passed, || format!("verification failed: {:?}", rep.failures().collect::<Vec<_>>()))?;
    Ok(format!(
        "{} rare types, enriched pairs isomorphic and 3-round EF equivalent",
        res.classification.rare.len()
    ))
}

fn oracle_cross_validation() -> Outcome {
    let structures: Vec<Structure> = (0..=3).flat_map(all_graphs).collect();
    let mut pairs = 0u64;
    for k in 1..=2 {
        let sentences = hintikka_sentences(k);
        let profiles: Vec<Vec<bool>> = structures
            .iter()
            .map(|s| sentences.iter().map(|f| model_check(s, f).unwrap()).collect())
            .collect();
        for (i, a) in structures.iter().enumerate() {
            for (j, b) in structures.iter().enumerate() {
                let by_game = ef_equivalent(a, b, k).map_err(|e| e.to_string())?;
                let by_sentences = profiles[i] == profiles[j];
                ensure(by_game == by_sentences, || {
                    format!("k={k}: structures {i} and {j}: game says {by_game}, sentences say {by_sentences}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} structures, {pairs} (pair, k) cases agree", structures.len()))
}

fn determinism() -> Outcome {
    let run = || -> Result<(String, String, String), String> {
        let g1 = tri(30);
        let g2 = relabel(&g1, 7);
        let res = weave_pair(&g1, &g2, &ParamsBundle::explicit(2, 1, 2, 1, None)).map_err(|e| e.to_string())?;
        let rep = verify_weave(&res, &g1, &g2, 1, 2, None).map_err(|e| e.to_string())?;
        let (f1, f2) = successor_files(&WeaveCertificate::from_result(&res));
        Ok((write_successor(&f1), write_successor(&f2), weave_report(&res, &rep)))
    };
    let a = run()?;
    let b = run()?;
    ensure(a == b, || "outputs differ between runs".into())?;
    Ok(format!(
        "successor files ({} + {} bytes) and report ({} bytes) identical",
        a.0.len(),
        a.1.len(),
        a.2.len()
    ))
}
