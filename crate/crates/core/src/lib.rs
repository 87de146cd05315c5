//! Deontic logic workbench: formulas, finite-model semantics for a family
//! of deontic theories, a bounded model finder and a tableau prover.

pub mod corpus;
pub mod finder;
pub mod logic;
pub mod semantics;
pub mod syntax;
pub mod tableau;
pub mod theories;

pub use finder::{
    check_entailment, enumerate_models, find_model, search_cardinality, verify, FinderError, SearchBudget,
    Verdict, VerdictKind,
};
pub use logic::{
    free_atoms, subformula_closure, well_formed, well_formed_in, AgentId, Atom, Axiom, Formula, OpKind,
    Problem, Query, QueryKind, RelId, Signature, TheoryId,
};
pub use semantics::{
    check_frame, eval, extension, verify_problem, AgentTag, EvalError, FiniteModel, Violation, WorldSet,
};
pub use syntax::{parse_formula, parse_problem, print_formula, print_problem, Diagnostic, DiagnosticKind};
pub use tableau::{prove_sdl, ProofObject, TableauError, TableauVerdict};
pub use theories::{builtin_theory, condition_holds, FrameCondition, TheorySpec};
