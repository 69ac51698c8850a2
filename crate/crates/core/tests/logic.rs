mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_graphs, graph_from_bits, hintikka_sentences, random_graph, random_sentence, table_eval};
use succinv::fixtures::{directed_cycle, mix, relabel, tri};
use succinv::logic::{
    ef_equivalent, ef_equivalent_with, is_circular_successor, linsucc_to_succ, model_check, succ_to_linsucc,
    verify_certificate, verify_weave, EfOptions, Formula, Status, WeaveCertificate,
};
use succinv::{structure_degree, type_census, weave_pair, Elem, Error, ParamsBundle, Signature, Structure};

fn parse(text: &str) -> Formula {
    Formula::parse(text).unwrap()
}

fn circular(n: usize) -> Vec<(Elem, Elem)> {
    (0..n).map(|i| (i as Elem, ((i + 1) % n) as Elem)).collect()
}

#[test]
fn model_checking_examples() {
    assert!(!model_check(&tri(1), &parse("(exists x (E x x))")).unwrap());
    let triangle = parse("(exists x (exists y (exists z (and (E x y) (E y z) (E z x)))))");
    assert!(model_check(&tri(1), &triangle).unwrap());
    assert!(!model_check(&directed_cycle(4), &triangle).unwrap());
    let total = parse("(forall x (exists y (E x y)))");
    for k in 1..6 {
        assert!(model_check(&tri(k), &total).unwrap());
    }
}

#[test]
fn model_checking_errors() {
    let s = tri(1);
    assert!(matches!(model_check(&s, &parse("(exists x (F x))")), Err(Error::Input(_))));
    assert!(matches!(model_check(&s, &parse("(exists x (E x))")), Err(Error::Input(_))));
    assert!(matches!(model_check(&s, &parse("(E x y)")), Err(Error::Input(_))));
    assert!(matches!(model_check(&s, &parse("(exists x (S x x))")), Err(Error::Input(_))));
}

#[test]
fn empty_universe_semantics() {
    let empty = Structure::graph(0, &[]).unwrap();
    assert!(!model_check(&empty, &parse("(exists x (= x x))")).unwrap());
    assert!(model_check(&empty, &parse("(forall x (E x x))")).unwrap());
    assert!(model_check(&empty, &parse("(and)")).unwrap());
}

#[test]
fn model_check_agrees_with_truth_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let ternary = std::sync::Arc::new(Signature::new([("E", 2), ("P", 1), ("R", 3)]).unwrap());
    let mut trues = 0;
    for i in 0..600 {
        let n = rng.gen_range(0..=6);
        let s = if i % 2 == 0 {
            let p = rng.gen_range(0.1..0.5);
            random_graph(&mut rng, n, p)
        } else {
            let mut tables = vec![Vec::new(), Vec::new(), Vec::new()];
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    if rng.gen_bool(0.3) {
                        tables[0].push(vec![a, b]);
                    }
                    if rng.gen_bool(0.1) {
                        tables[2].push(vec![a, b, rng.gen_range(0..n) as Elem]);
                    }
                }
                if rng.gen_bool(0.5) {
                    tables[1].push(vec![a]);
                }
            }
            Structure::new(ternary.clone(), n, tables).unwrap()
        };
        let s = if n > 0 && rng.gen_bool(0.5) { s.with_succ(&circular(n)).unwrap() } else { s };
        let mut rels = vec![("E", 2)];
        if i % 2 == 1 {
            rels.extend([("P", 1), ("R", 3)]);
        }
        if s.succ().is_some() {
            rels.push(("S", 2));
        }
        let rank = rng.gen_range(0..=3);
        let phi = random_sentence(&mut rng, rank, &rels);
        let got = model_check(&s, &phi).unwrap();
        assert_eq!(got, table_eval(&s, &phi, &["S"]), "{phi} on {n} elements");
        trues += got as usize;
    }
    assert!(trues > 60 && trues < 540, "sentences too uniform: {trues} true");
}

#[test]
fn ef_examples() {
    let (c3, c4) = (directed_cycle(3), directed_cycle(4));
    assert!(!ef_equivalent(&c3, &c4, 3).unwrap());
    for k in 0..4 {
        assert!(ef_equivalent(&c4, &c4, k).unwrap());
        assert!(ef_equivalent(&mix(2), &relabel(&mix(2), 3), k).unwrap());
    }
    // different signatures cannot be compared
    let other = Structure::new(std::sync::Arc::new(Signature::new([("F", 2)]).unwrap()), 3, vec![vec![]]).unwrap();
    assert!(matches!(ef_equivalent(&c3, &other, 1), Err(Error::Input(_))));
}

#[test]
fn ef_tiny_state_budget_is_a_resource_error() {
    let opts = EfOptions { prune: false, max_states: 3 };
    let err = ef_equivalent_with(&tri(3), &tri(4), 3, opts).unwrap_err();
    assert!(matches!(err, Error::Resource(_)), "{err}");
}

#[test]
fn ef_matches_rank_two_sentences_on_sampled_four_element_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let sentences: Vec<Vec<Formula>> = (0..=2).map(hintikka_sentences).collect();
    let mut graphs: Vec<Structure> = (0..=2).flat_map(all_graphs).collect();
    graphs.extend((0..300).map(|_| graph_from_bits(4, rng.gen_range(0..1 << 16))));
    graphs.extend((0..100).map(|_| graph_from_bits(3, rng.gen_range(0..1 << 9))));
    for _ in 0..600 {
        let a = &graphs[rng.gen_range(0..graphs.len())];
        let b = &if rng.gen_bool(0.3) {
            relabel(a, rng.gen())
        } else {
            graphs[rng.gen_range(0..graphs.len())].clone()
        };
        for k in 0..=2 {
            let profile = |s: &Structure| -> Vec<bool> {
                let mut p: Vec<bool> = sentences[k].iter().map(|phi| model_check(s, phi).unwrap()).collect();
                p.push(s.size() == 0);
                p
            };
            let by_sentences = if k == 0 { true } else { profile(a) == profile(b) };
            assert_eq!(ef_equivalent(a, b, k).unwrap(), by_sentences, "k={k}");
        }
    }
}

#[test]
fn ef_is_monotone_and_pruning_is_transparent() {
    let mut rng = ChaCha8Rng::seed_from_u64(92);
    for _ in 0..150 {
        let n = rng.gen_range(1..=5);
        let m = if rng.gen_bool(0.5) { n } else { rng.gen_range(1..=5) };
        let p = rng.gen_range(0.1..0.5);
        let a = random_graph(&mut rng, n, p);
        let b = if rng.gen_bool(0.3) { relabel(&a, rng.gen()) } else { random_graph(&mut rng, m, p) };
        let (a, b) = if rng.gen_bool(0.3) {
            (a.with_succ(&circular(n)).unwrap(), b.with_succ(&circular(b.size())).unwrap())
        } else {
            (a, b)
        };
        let mut prev = true;
        for k in 0..=3 {
            let pruned = ef_equivalent_with(&a, &b, k, EfOptions { prune: true, ..Default::default() }).unwrap();
            let plain = ef_equivalent_with(&a, &b, k, EfOptions { prune: false, ..Default::default() }).unwrap();
            assert_eq!(pruned, plain);
            assert!(prev || !pruned, "equivalent at {k} rounds but not at {}", k - 1);
            prev = pruned;
        }
    }
}

#[test]
fn ef_equivalence_implies_agreement_on_sentences_with_successor() {
    let mut rng = ChaCha8Rng::seed_from_u64(93);
    let (mut copies, mut others) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(2..=5);
        let a = random_graph(&mut rng, n, 0.1).with_succ(&circular(n)).unwrap();
        let copy = rng.gen_bool(0.3);
        let b = if copy {
            relabel(&a, rng.gen())
        } else {
            random_graph(&mut rng, n, 0.1).with_succ(&circular(n)).unwrap()
        };
        if !ef_equivalent(&a, &b, 2).unwrap() {
            continue;
        }
        if copy {
            copies += 1;
        } else {
            others += 1;
        }
        for _ in 0..20 {
            let phi = random_sentence(&mut rng, 2, &[("E", 2), ("S", 2)]);
            assert_eq!(model_check(&a, &phi).unwrap(), model_check(&b, &phi).unwrap(), "{phi}");
        }
    }
    assert!(copies > 5 && others > 5, "{copies} copies, {others} others");
}

#[test]
fn rewriting_examples() {
    let out = succ_to_linsucc(&parse("(S x y)")).unwrap();
    assert_eq!(out, parse("(or (Sbar x y) (not (exists z (or (Sbar x z) (Sbar z y)))))"));
    let plain = parse("(exists x (E x x))");
    assert_eq!(succ_to_linsucc(&plain).unwrap(), plain);
    let back = linsucc_to_succ(&parse("(Sbar x y)")).unwrap();
    assert_eq!(back, parse("(exists min (and (S x y) (not (= y min))))"));
    assert_eq!(linsucc_to_succ(&plain).unwrap(), Formula::exists("min", plain.clone()));
    // the fresh variable avoids names already in use
    let out = succ_to_linsucc(&parse("(exists z (S z z))")).unwrap();
    assert_eq!(
        out,
        parse("(exists z (or (Sbar z z) (not (exists z1 (or (Sbar z z1) (Sbar z1 z))))))")
    );
    assert!(matches!(succ_to_linsucc(&parse("(Sbar x y)")), Err(Error::Input(_))));
    assert!(matches!(linsucc_to_succ(&parse("(S x y)")), Err(Error::Input(_))));
}

/// Both rewrites on every cut of the index cycle over sampled five-element
/// structures (the four-element case is exhaustive in the acceptance suite).
#[test]
fn rewritings_preserve_truth_on_five_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(94);
    let s_sentences: Vec<Formula> =
        (0..15).map(|_| random_sentence(&mut rng, 2, &[("E", 2), ("S", 2)])).collect();
    let lin_sentences: Vec<Formula> =
        (0..15).map(|_| random_sentence(&mut rng, 2, &[("E", 2), ("Sbar", 2)])).collect();
    let to_lin: Vec<Formula> = s_sentences.iter().map(|f| succ_to_linsucc(f).unwrap()).collect();
    let to_circ: Vec<Formula> = lin_sentences.iter().map(|f| linsucc_to_succ(f).unwrap()).collect();
    let circ = circular(5);
    for _ in 0..300 {
        let p = rng.gen_range(0.05..0.6);
        let g = random_graph(&mut rng, 5, p);
        let with_circ = g.with_succ(&circ).unwrap();
        for min in 0..5 {
            let cut: Vec<_> = circ.iter().copied().filter(|&(_, b)| b != min).collect();
            let with_lin = g.with_succ(&cut).unwrap();
            for (phi, psi) in s_sentences.iter().zip(&to_lin) {
                assert_eq!(
                    model_check(&with_circ, phi).unwrap(),
                    model_check(&with_lin, psi).unwrap(),
                    "{phi}"
                );
            }
        }
        for (psi, phi) in lin_sentences.iter().zip(&to_circ) {
            let on_cuts: Vec<bool> = (0..5)
                .map(|min| {
                    let cut: Vec<_> = circ.iter().copied().filter(|&(_, b)| b != min).collect();
                    model_check(&g.with_succ(&cut).unwrap(), psi).unwrap()
                })
                .collect();
            // ∃min Cut(ψ) holds iff ψ holds for some choice of the cut
            assert_eq!(model_check(&with_circ, phi).unwrap(), on_cuts.iter().any(|&v| v), "{psi}");
        }
    }
}

#[test]
fn circularity_examples() {
    assert!(is_circular_successor(&[(0, 1), (1, 2), (2, 0)], 3));
    assert!(!is_circular_successor(&[(0, 1), (1, 0), (2, 3), (3, 2)], 4));
    assert!(!is_circular_successor(&[(0, 0), (1, 1)], 2));
    assert!(is_circular_successor(&[(0, 0)], 1));
    assert!(is_circular_successor(&[], 0));
    assert!(!is_circular_successor(&[(0, 1), (1, 2)], 3));
}

fn mix_weave() -> (Structure, Structure, succinv::WeaveResult) {
    let g1 = mix(71);
    let g2 = relabel(&g1, 12);
    let n_occ = type_census(&g1, 1, false).counts.len() as u64;
    let p = ParamsBundle::explicit(structure_degree(&g1, false) as u64, 1, 2, n_occ, None);
    let res = weave_pair(&g1, &g2, &p).unwrap();
    (g1, g2, res)
}

#[test]
fn verifier_passes_mix71_with_fractal_regularity() {
    let (g1, g2, res) = mix_weave();
    let rep = verify_weave(&res, &g1, &g2, 1, 2, None).unwrap();
    assert!(rep.passed);
    for name in ["fractal_regularity_1", "fractal_regularity_2", "rare_flanking_1", "segment_structure_2"] {
        assert_eq!(rep.check(name).unwrap().status, Status::Pass, "{name}");
    }
    assert!(rep.check("ef_equivalence").is_none());
}

#[test]
fn verifier_catches_swapped_targets() {
    let (g1, g2, res) = mix_weave();
    let mut cert = WeaveCertificate::from_result(&res);
    let (a, b) = (10usize, 100usize);
    cert.succ2.swap(a, b);
    let rep = verify_certificate(&g1, &g2, &cert, 1, 2, None).unwrap();
    assert!(!rep.passed);
    let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
    assert!(
        failed.iter().any(|n| n.starts_with("circular_successor") || n.starts_with("edge_type_homogeneity")),
        "{failed:?}"
    );
    for c in rep.failures() {
        assert!(!c.detail.is_empty(), "{} has no witness", c.name);
    }
}

#[test]
fn verifier_catches_a_broken_layering() {
    // the index cycle is circular but runs along triangle edges, closing
    // 3-cycles through S-edges
    let g = tri(30);
    let succ: Vec<Elem> = (0..90).map(|i| (i + 1) % 90).collect();
    let res = weave_pair(&g, &g, &ParamsBundle::explicit(2, 1, 2, 1, None)).unwrap();
    let mut cert = WeaveCertificate::from_result(&res);
    cert.succ1 = succ;
    let rep = verify_certificate(&g, &g, &cert, 1, 2, None).unwrap();
    assert_eq!(rep.check("circular_successor_1").unwrap().status, Status::Pass);
    assert_eq!(rep.check("layered_1").unwrap().status, Status::Fail);
    assert!(!rep.passed);
}
