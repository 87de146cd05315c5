use std::path::PathBuf;
use std::process::Command;

use deon::corpus::{Bound, Corpus};
use deon::syntax::model_from_json_value;
use deon::{parse_problem, VerdictKind};
use deon_cli::{exit, run};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn deon(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv: Vec<&str> = std::iter::once("deon").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("deon-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_accepts_the_article_5_fixture() {
    let r = deon(&["check", "corpus/art5_sdl.deon"]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    assert_eq!(r.out, "ok: theory sdl, 10 atoms, 3 globals, 3 locals, 2 queries\n");
}

#[test]
fn check_reports_ill_formed_problems_with_exit_1() {
    let path = scratch("undeclared.deon", "theory sdl\natom p\nglobal A: O q\n");
    let r = deon(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, exit::FAIL);
    assert!(r.out.contains("3:13: undeclared atom `q`"), "{}", r.out);
}

#[test]
fn syntax_errors_exit_65_with_diagnostics_on_stderr() {
    let path = scratch("broken.deon", "theory sdl\natom p\nglobal A: p & & p\n");
    for cmd in ["check", "solve", "print"] {
        let r = deon(&[cmd, path.to_str().unwrap()]);
        assert_eq!(r.code, exit::DATA, "{cmd}");
        assert!(r.out.is_empty());
        assert!(r.err.contains("broken.deon:3:15: expected a formula"), "{}", r.err);
    }
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(deon(&["frobnicate"]).code, exit::USAGE);
    assert_eq!(deon(&["solve", "tds_base", "--bound", "0"]).code, exit::USAGE);
    assert_eq!(deon(&["entail", "art5_sdl"]).code, exit::USAGE);
    assert_eq!(deon(&["entail", "art5_sdl", "--query", "G9"]).code, exit::USAGE);
    assert_eq!(deon(&["entail", "tds_base", "--query", "C1"]).code, exit::USAGE);
    assert_eq!(deon(&["entail", "art5_ddl", "--query", "G1", "--prover", "tableau"]).code, exit::USAGE);
    assert_eq!(deon(&["solve", "art5_ddl", "--bound", "7"]).code, exit::USAGE);
    assert_eq!(deon(&["suite", "nosuch"]).code, exit::USAGE);
    assert_eq!(deon(&["solve", "no_such_problem"]).code, exit::NO_INPUT);
}

#[test]
fn help_and_version_go_to_stdout() {
    let r = deon(&["--help"]);
    assert_eq!(r.code, exit::OK);
    assert!(r.out.contains("entail") && r.err.is_empty());
    assert!(deon(&["--version"]).out.starts_with("deon "));
}

#[test]
fn article_5_countermodel_as_json() {
    let r = deon(&["entail", "corpus/art5_sdl.deon", "--query", "G2", "--bound", "2", "--format", "json"]);
    assert_eq!(r.code, exit::NEGATIVE, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["verdict"], "Countermodel");
    assert!(v["worlds"].as_u64().unwrap() <= 2);
    let model = model_from_json_value(v["model"].clone()).unwrap();
    assert!(!model.valuation.get(&"causes_harm".parse().unwrap()).is_some_and(|s| s.contains(model.actual)));
}

#[test]
fn article_5_proof_with_the_tableau() {
    let r = deon(&["entail", "art5_sdl", "--query", "G1", "--prover", "tableau", "--format", "json"]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["verdict"], "Proof");
    assert!(v["proof"]["tree"].is_object());
    let r = deon(&["entail", "art5_sdl", "--query", "G2", "--prover", "tableau"]);
    assert_eq!(r.code, exit::NEGATIVE);
    assert!(r.out.starts_with("refuted: "));
}

#[test]
fn tds_has_no_model_up_to_three_worlds() {
    let r = deon(&["solve", "corpus/tds_base.deon", "--bound", "3"]);
    assert_eq!(r.code, exit::NEGATIVE);
    assert_eq!(r.out, "no-model-up-to: 3 (exhaustive)\n");
}

#[test]
fn exhausted_budgets_are_inconclusive() {
    let r = deon(&["solve", "tds_base", "--bound", "3", "--node-limit", "1"]);
    assert_eq!(r.code, exit::INCONCLUSIVE);
    assert_eq!(r.out, "no-model-up-to: 3 (budget exhausted)\n");
    let r = deon(&["entail", "ctd_art16_20", "--query", "E1", "--bound", "3", "--node-limit", "5"]);
    assert_eq!(r.code, exit::INCONCLUSIVE);
    assert!(r.err.starts_with("inconclusive"), "{}", r.err);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["solve", "ctd_art16_20", "--bound", "3", "--format", "json"][..],
        &["entail", "art5_ddl", "--query", "G2", "--format", "json"][..],
        &["entail", "art5_sdl", "--query", "G1", "--prover", "tableau", "--format", "json"][..],
        &["suite", "frontiers", "--format", "json"][..],
    ] {
        let first = deon(args);
        assert_eq!(first.out, deon(args).out, "{args:?}");
        assert!(!first.out.is_empty());
    }
}

#[test]
fn suites_pass_and_report_rows() {
    for name in ["sdl", "ctd", "ddl", "frontiers"] {
        let r = deon(&["suite", name]);
        assert_eq!(r.code, exit::OK, "{}", r.out);
        assert!(r.out.ends_with("rows)\n") && !r.out.contains("FAIL"), "{}", r.out);
    }
    let v: Value = serde_json::from_str(&deon(&["suite", "sdl", "--format", "json"]).out).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["rows"][0].get("elapsed_ms").is_none());
    let v: Value =
        serde_json::from_str(&deon(&["suite", "sdl", "--format", "json", "--timings"]).out).unwrap();
    assert!(v["rows"][0]["elapsed_ms"].is_number());
}

#[test]
fn a_lowered_bound_fails_the_ctd_suite() {
    let r = deon(&["suite", "ctd", "--bound", "2"]);
    assert_eq!(r.code, exit::FAIL);
    assert!(r.out.contains("FAIL ctd_art16_20 C1"), "{}", r.out);
}

#[test]
fn printed_problems_parse_back() {
    for name in Corpus::Embedded.list_problems().unwrap() {
        let r = deon(&["print", &name]);
        assert_eq!(r.code, exit::OK);
        assert_eq!(parse_problem(&r.out).unwrap(), Corpus::Embedded.load_problem(&name).unwrap(), "{name}");
        let json: Value = serde_json::from_str(&deon(&["print", &name, "--format", "json"]).out).unwrap();
        assert!(json["signature"].is_object());
    }
}

#[test]
fn list_names_every_fixture_and_suite() {
    let r = deon(&["list"]);
    for name in ["art5_sdl", "ctd_art16_24", "xddl2_base", "tds_base"] {
        assert!(r.out.contains(&format!("problem {name}\n")), "{name}");
    }
    assert!(r.out.contains("suite frontiers\n"));
}

/// Each expectation of the suites follows from the exit code of one call.
#[test]
fn corpus_expectations_are_checkable_from_exit_codes() {
    let corpus = Corpus::Embedded;
    for suite in corpus.list_suites().unwrap() {
        for row in corpus.suite_rows(&suite).unwrap() {
            let Bound::UpTo(n) = row.bound else { continue };
            let p = corpus.load_problem(&row.problem).unwrap();
            let consistency = matches!(p.query(&row.query).unwrap().kind, deon::QueryKind::Consistent);
            let bound = n.to_string();
            let mut args = if consistency {
                vec!["solve", row.problem.as_str(), "--bound", bound.as_str()]
            } else {
                vec!["entail", row.problem.as_str(), "--query", row.query.as_str(), "--bound", bound.as_str()]
            };
            if matches!(row.expected, VerdictKind::Proof | VerdictKind::Refuted) {
                args.extend(["--prover", "tableau"]);
            }
            let expected_code = match row.expected {
                VerdictKind::ModelFound | VerdictKind::BoundedValid | VerdictKind::Proof => exit::OK,
                VerdictKind::NoModel | VerdictKind::Countermodel | VerdictKind::Refuted => exit::NEGATIVE,
                VerdictKind::Inconclusive => exit::INCONCLUSIVE,
            };
            assert_eq!(deon(&args).code, expected_code, "{args:?}");
        }
    }
}

#[test]
fn binary_reads_the_corpus_directory_override() {
    let dir = std::env::temp_dir().join(format!("deon-cli-corpus-{}", std::process::id()));
    std::fs::create_dir_all(dir.join("suites")).unwrap();
    std::fs::write(dir.join("only.deon"), "theory sdl\natom p\nlocal F: p & ~p\nquery C: consistent\n")
        .unwrap();
    std::fs::write(dir.join("provenance.tsv"), "problem\tlabel\tcitation\nonly\tF\tnone\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_deon");
    let out = Command::new(bin).args(["solve", "only"]).env("DEON_CORPUS_DIR", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::NEGATIVE));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "no-model-up-to: 3 (exhaustive)\n");
    let out = Command::new(bin).args(["solve", "art5_sdl"]).env("DEON_CORPUS_DIR", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::NO_INPUT));
    let out = Command::new(bin).args(["check", "art5_sdl"]).env_remove("DEON_CORPUS_DIR").output().unwrap();
    assert_eq!(out.status.code(), Some(exit::OK));
}
