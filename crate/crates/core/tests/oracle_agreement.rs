//! The finder against the naive enumerator of the oracle crate.

use deon::corpus::Corpus;
use deon::{enumerate_models, search_cardinality, Formula, Problem, QueryKind, Signature, TheoryId};
use deon_oracle::gen::{random_problem, signature, FormulaGen};
use deon_oracle::naive::{count_models, exists_model, query_witness_exists};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn finder_count(p: &Problem, n: usize) -> usize {
    enumerate_models(p, n, None, None).unwrap().len()
}

#[test]
fn sdl_one_world_one_atom_has_two_models() {
    let p = Problem::new(Signature::with_atoms(TheoryId::Sdl, &["p"]));
    assert_eq!(finder_count(&p, 1), 2);
    assert_eq!(count_models(&p, None, 1).unwrap(), 2);
}

#[test]
fn cjddl_one_world_has_two_frames() {
    let p = Problem::new(Signature::new(TheoryId::Cjddl));
    assert_eq!(finder_count(&p, 1), 2);
    assert_eq!(count_models(&p, None, 1).unwrap(), 2);
}

#[test]
fn tds_has_no_small_models() {
    let p = Problem::new(Signature::new(TheoryId::Tds));
    for n in 1..=3 {
        assert_eq!(finder_count(&p, n), 0);
    }
}

#[test]
fn frame_counts_match_at_two_worlds() {
    for (theory, atoms) in
        [(TheoryId::Sdl, 0), (TheoryId::Sdl, 1), (TheoryId::Cjddl, 0), (TheoryId::Cjddl, 1)]
    {
        let p = Problem::new(signature(theory, atoms, &[]));
        assert_eq!(finder_count(&p, 2), count_models(&p, None, 2).unwrap(), "{theory} with {atoms} atoms");
    }
}

#[test]
fn random_problems_have_the_same_model_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theory in [TheoryId::Sdl, TheoryId::Cjddl] {
        for case in 0..60 {
            let sig = signature(theory, 1 + case % 2, &[]);
            let p = random_problem(&mut rng, &sig, 3, 3);
            for n in 1..=2 {
                assert_eq!(finder_count(&p, n), count_models(&p, None, n).unwrap(), "{theory} n={n} {p:?}");
            }
        }
    }
}

#[test]
fn random_problems_agree_on_satisfiability_and_countermodels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for theory in [TheoryId::Sdl, TheoryId::Cjddl] {
        for case in 0..150 {
            let sig = signature(theory, 1 + case % 2, &[]);
            let p = random_problem(&mut rng, &sig, 3, 3);
            let goal = FormulaGen::new(&sig).formula(&mut rng, 3);
            for n in 1..=2 {
                let finder = search_cardinality(&p, None, n, None).unwrap().is_some();
                assert_eq!(finder, exists_model(&p, None, n).unwrap(), "{theory} n={n} {p:?}");
                let finder = search_cardinality(&p, Some(&goal), n, None).unwrap().is_some();
                assert_eq!(
                    finder,
                    exists_model(&p, Some(&goal), n).unwrap(),
                    "{theory} n={n} {p:?} {goal:?}"
                );
            }
        }
    }
}

#[test]
fn small_corpus_queries_agree() {
    let corpus = Corpus::Embedded;
    for name in corpus.list_problems().unwrap() {
        let p = corpus.load_problem(&name).unwrap();
        if !matches!(p.theory(), TheoryId::Sdl | TheoryId::Cjddl) || p.signature.atoms().len() > 3 {
            continue;
        }
        for q in &p.queries {
            let pq = p.for_query(q);
            let goal: Option<&Formula> = match &q.kind {
                QueryKind::Entails(g) => Some(g),
                QueryKind::Consistent => None,
            };
            for n in 1..=2 {
                let finder = search_cardinality(&pq, goal, n, None).unwrap().is_some();
                assert_eq!(
                    finder,
                    query_witness_exists(&p, &q.label, n).unwrap(),
                    "{name} {} n={n}",
                    q.label
                );
            }
        }
    }
}

#[test]
fn ddl_lemma_expectations_follow_from_enumeration() {
    let p = Corpus::Embedded.load_problem("ddl_lemmas").unwrap();
    let witness = |label: &str| (1..=2).any(|n| query_witness_exists(&p, label, n).unwrap());
    assert!(!witness("L1"));
    assert!(!witness("L2"));
    assert!(witness("L3"));
}
