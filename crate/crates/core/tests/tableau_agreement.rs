use deon::tableau::replay;
use deon::{
    check_entailment, check_frame, eval, prove_sdl, verify_problem, Formula, SearchBudget, TableauVerdict,
    TheoryId, Verdict,
};
use deon_oracle::gen::{random_problem, signature, FormulaGen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agreement_on(seed: u64, count: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = signature(TheoryId::Sdl, 3, &[]);
    let gen = FormulaGen::new(&sig);
    let th = sig.theory_spec();
    let (mut proofs, mut refuted) = (0, 0);
    for i in 0..count {
        let p = random_problem(&mut rng, &sig, 3, 3);
        let goal = gen.formula(&mut rng, 3);
        let finder = check_entailment(&p, &goal, &SearchBudget::new(3)).unwrap();
        match prove_sdl(&p, &goal).unwrap() {
            TableauVerdict::Proof(proof) => {
                proofs += 1;
                replay(&p, &goal, &proof).unwrap_or_else(|e| panic!("case {i}: proof does not replay: {e}"));
                assert!(
                    matches!(finder, Verdict::BoundedValid { .. }),
                    "case {i}: tableau proves {goal:?} but the finder refutes it"
                );
            }
            TableauVerdict::Refuted(model) => {
                refuted += 1;
                assert!(check_frame(&model, &th).is_empty(), "case {i}: open branch is not a KD frame");
                assert!(verify_problem(&model, &p), "case {i}: open branch violates an assumption");
                assert!(!eval(&model, &th, model.actual, &goal).unwrap(), "case {i}: goal holds");
            }
        }
    }
    (proofs, refuted)
}

#[test]
fn tableau_and_finder_agree_on_random_sdl_problems() {
    let (proofs, refuted) = agreement_on(2024, 300);
    assert!(proofs > 20 && refuted > 20, "unbalanced sample: {proofs} proofs, {refuted} refutations");
}

#[test]
fn tautologies_have_replayable_proofs() {
    let sig = signature(TheoryId::Sdl, 2, &[]);
    let p = deon::Problem::new(sig);
    let d = Formula::implies(Formula::ob(Formula::prop("p")), Formula::perm(Formula::prop("p")));
    let TableauVerdict::Proof(proof) = prove_sdl(&p, &d).unwrap() else { panic!("D axiom refuted") };
    replay(&p, &d, &proof).unwrap();
    let json = serde_json::to_string(&proof).unwrap();
    assert_eq!(serde_json::from_str::<deon::ProofObject>(&json).unwrap(), proof);
}
