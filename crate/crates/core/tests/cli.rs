//! Golden-file tests for every command. Set `UPDATE_GOLDEN=1` to rewrite
//! the expected files after an intended output change.

use std::path::{Path, PathBuf};

use serde_json::Value;
use succmso::cli::run;
use succmso::graph::{Digraph, GraphObject};

const CASES: &[(&str, &[&str])] = &[
    ("sgr_materialize", &["sgr", "materialize", "--sgr", "tests/data/toy_v1.sgr.json"]),
    ("sgr_edge", &["sgr", "edge", "--sgr", "tests/data/toy_v1.sgr.json", "--x", "2", "--y", "2"]),
    ("sgr_edge_absent", &["sgr", "edge", "--sgr", "tests/data/toy_v1.sgr.json", "--x", "4", "--y", "0"]),
    ("sgr_edge_out_of_range", &["sgr", "edge", "--sgr", "tests/data/toy_v1.sgr.json", "--x", "5", "--y", "0"]),
    ("sgr_check_size", &["sgr", "check-size", "--sgr", "tests/data/toy_v1.sgr.json"]),
    ("mso_check", &["mso", "check", "--graph", "tests/data/loop.txt", "--formula", "ex x. E(x,x)"]),
    ("mso_check_false", &["mso", "check", "--graph", "tests/data/path3.txt", "--formula", "ex x. E(x,x)"]),
    ("mso_check_scope", &["mso", "check", "--graph", "tests/data/path3.txt", "--formula", "E(x,x)"]),
    ("mso_rank", &["mso", "rank", "--formula", "all x. all y. all z. ((E(x,y) & E(x,z)) -> y=z)"]),
    ("mso_parse", &["mso", "parse", "--formula", "ex X. ((ex x. x in X) & all x. (x in X -> ex y. (y in X & E(x,y))))"]),
    ("mso_parse_error", &["mso", "parse", "--formula", "ex x E(x,x)"]),
    ("td_validate", &["td", "validate", "--graph", "tests/data/path3.txt", "--td", "tests/data/path3.td.json"]),
    ("td_validate_broken", &["td", "validate", "--graph", "tests/data/path3.txt", "--td", "tests/data/path3_broken.td.json"]),
    ("td_width", &["td", "width", "--td", "tests/data/star.td.json"]),
    ("td_normalize3", &["td", "normalize3", "--td", "tests/data/star.td.json"]),
    ("td_treewidth", &["td", "treewidth", "--graph", "tests/data/k4.txt"]),
    (
        "td_of_delta",
        &[
            "td",
            "of-delta",
            "--family",
            "tests/data/family.json",
            "--decompositions",
            "tests/data/decompositions.json",
            "--word",
            "2113",
        ],
    ),
    ("ef_equiv", &["ef", "equiv", "--left", "tests/data/vertex.txt", "--right", "tests/data/two_vertices.txt", "--m", "1"]),
    ("ef_equiv_false", &["ef", "equiv", "--left", "tests/data/vertex.txt", "--right", "tests/data/two_vertices.txt", "--m", "2"]),
    ("ef_qsearch", &["ef", "qsearch", "--graph", "tests/data/vertex.txt", "--m", "2"]),
    ("ef_qbound", &["ef", "qbound", "--size", "1", "--m", "2"]),
    ("ef_qbound_split", &["ef", "qbound", "--size", "2", "--point-moves", "1", "--set-moves", "1"]),
    ("ef_saturate", &["ef", "saturate", "--omega", "tests/data/loop.txt", "--formula", "ex x. E(x,x)"]),
    ("graph_glue", &["graph", "glue", "--left", "tests/data/edge.txt", "--right", "tests/data/edge.txt"]),
    ("graph_delta", &["graph", "delta", "--family", "tests/data/family.json", "--word", "2113"]),
    ("graph_delta_unknown_letter", &["graph", "delta", "--family", "tests/data/family.json", "--word", "205"]),
    ("graph_union", &["graph", "union", "--left", "tests/data/loop.txt", "--right", "tests/data/path3.txt"]),
    ("graph_iso", &["graph", "iso", "--left", "tests/data/path3.txt", "--right", "tests/data/path3_reversed.txt"]),
    ("reduce_sat2sgr", &["reduce", "sat2sgr", "--cnf", "tests/data/v1.cnf", "--gadgets", "tests/data/toy_quad.json", "--out", "{tmp}/c.sgr.json"]),
    ("reduce_sat2sgr_invalid", &["reduce", "sat2sgr", "--cnf", "tests/data/v1.cnf", "--gadgets", "tests/data/bad_quad.json"]),
    ("reduce_loop", &["reduce", "loop", "--cnf", "tests/data/contra.cnf", "--out", "{tmp}/loop.sgr.json"]),
    ("reduce_clique", &["reduce", "clique", "--cnf", "tests/data/v1.cnf", "--variant", "irreflexive", "--out", "{tmp}/clique.sgr.json"]),
    ("reduce_build_quad", &["reduce", "build-quad", "--triple", "tests/data/path_triple.json", "--omega", "tests/data/loop.txt"]),
    ("reduce_validate_quad", &["reduce", "validate-quad", "--gadgets", "tests/data/toy_quad.json"]),
    ("reduce_validate_quad_bad", &["reduce", "validate-quad", "--gadgets", "tests/data/bad_quad.json"]),
    (
        "reduce_pump_check",
        &["reduce", "pump-check", "--triple", "tests/data/path_triple.json", "--formula", "ex x. E(x,x)", "--expected", "false", "--n-max", "5"],
    ),
    (
        "reduce_pump_check_mismatch",
        &["reduce", "pump-check", "--triple", "tests/data/looped_triple.json", "--formula", "ex x. E(x,x)", "--expected", "false"],
    ),
    ("reduce_succ_ref", &["reduce", "succ-ref", "--gadgets", "tests/data/toy_quad.json", "--cnf", "tests/data/v1.cnf", "--x", "2"]),
    ("verify_sat", &["verify", "sat", "--cnf", "tests/data/v1.cnf"]),
    ("verify_sat_unsat", &["verify", "sat", "--cnf", "tests/data/unsat3.cnf"]),
    ("verify_sat_bad_dimacs", &["verify", "sat", "--cnf", "tests/data/bad.cnf"]),
    ("verify_delta_layout", &["verify", "delta-layout", "--gadgets", "tests/data/toy_quad.json", "--cnf", "tests/data/contra.cnf"]),
    (
        "verify_end2end",
        &[
            "verify",
            "end2end",
            "--gadgets",
            "tests/data/toy_quad.json",
            "--formula",
            "ex x. E(x,x)",
            "--battery",
            "tests/data/v1.cnf",
            "tests/data/contra.cnf",
            "tests/data/unsat3.cnf",
        ],
    ),
    (
        "verify_end2end_builtin",
        &["verify", "end2end", "--gadgets", "tests/data/toy_quad.json", "--formula", "ex x. E(x,x)", "--battery", "builtin"],
    ),
    (
        "verify_end2end_reseeded",
        &["--seed", "7", "verify", "end2end", "--gadgets", "tests/data/toy_quad.json", "--formula", "ex x. E(x,x)", "--battery", "builtin"],
    ),
    ("usage_unknown_command", &["frobnicate"]),
    ("usage_missing_flag", &["mso", "check", "--graph", "tests/data/loop.txt"]),
];

fn temp_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("succmso-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn invoke(args: &[&str], json: bool, tmp: &Path) -> (i32, String, String) {
    let mut argv = vec!["succmso".to_string()];
    if json {
        argv.push("--json".into());
    }
    argv.extend(args.iter().map(|a| a.replace("{tmp}", &tmp.display().to_string())));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Blanks out wall-clock timings.
fn normalize(text: &str) -> String {
    text.split_inclusive(char::is_whitespace)
        .map(|tok| {
            let word = tok.trim_end();
            match word.strip_suffix("us") {
                Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                    tok.replacen(word, "<t>us", 1)
                }
                _ => tok.to_string(),
            }
        })
        .collect()
}

fn render(code: i32, out: &str, err: &str) -> String {
    format!("exit: {code}\n--- stdout\n{}--- stderr\n{err}", normalize(out))
}

#[test]
fn golden_outputs() {
    let tmp = temp_dir();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let (code, out, err) = invoke(args, false, &tmp);
        let actual = render(code, &out, &err);
        let path = Path::new("tests/golden").join(format!("{name}.txt"));
        if update {
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if expected != actual {
            mismatches.push(format!("{name}:\n--- expected\n{expected}--- actual\n{actual}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn every_documented_subcommand_has_a_case() {
    let table = "sgr materialize|edge|check-size; mso check|rank|parse; td validate|width|normalize3|treewidth|of-delta; \
                 ef equiv|qsearch|qbound|saturate; graph glue|delta|union|iso; \
                 reduce sat2sgr|loop|clique|build-quad|validate-quad|pump-check|succ-ref; verify sat|delta-layout|end2end";
    for group in table.split(';') {
        let (head, subs) = group.trim().split_once(' ').unwrap();
        for sub in subs.split('|') {
            assert!(
                CASES.iter().any(|(_, args)| args.windows(2).any(|w| w[0] == head && w[1] == sub)),
                "no golden case for `{head} {sub}`"
            );
        }
    }
}

#[test]
fn json_outputs_round_trip() {
    let tmp = temp_dir();
    for (name, args) in CASES.iter().filter(|(n, _)| !n.starts_with("usage")) {
        let (code, out, _) = invoke(args, true, &tmp);
        let (text_code, _, _) = invoke(args, false, &tmp);
        assert_eq!(code, text_code, "{name}: exit code depends on --json");
        let value: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{name}: {e}\n{out}"));
        let again = serde_json::to_string_pretty(&value).unwrap();
        assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), value, "{name}");
        assert_eq!(format!("{again}\n"), out, "{name}: output is not in canonical form");
    }
}

#[test]
fn graph_outputs_agree_between_formats() {
    let tmp = temp_dir();
    for (name, args) in CASES {
        if !matches!(*name, "sgr_materialize" | "graph_union" | "verify_delta_layout") {
            continue;
        }
        let (_, text, _) = invoke(args, false, &tmp);
        let (_, json, _) = invoke(args, true, &tmp);
        let obj: GraphObject = serde_json::from_str(&json).unwrap();
        let from_json = Digraph::from_edges(obj.n, obj.edges).unwrap();
        assert_eq!(Digraph::from_text(&text).unwrap(), from_json, "{name}");
    }
}

#[test]
fn written_bundles_load_back() {
    let tmp = temp_dir();
    let (code, out, _) = invoke(CASES.iter().find(|c| c.0 == "reduce_sat2sgr").unwrap().1, false, &tmp);
    assert_eq!((code, out.trim()), (0, "5"));
    let written = std::fs::read_to_string(tmp.join("c.sgr.json")).unwrap();
    let committed = std::fs::read_to_string("tests/data/toy_v1.sgr.json").unwrap();
    assert_eq!(written, committed);
    let sgr = succmso::sgr::Sgr::from_json(&written).unwrap();
    assert_eq!(sgr.to_json(), written);
}

#[test]
fn threads_flag_and_environment_are_accepted() {
    let tmp = temp_dir();
    let args = ["--threads", "2", "mso", "check", "--graph", "tests/data/loop.txt", "--formula", "ex x. E(x,x)"];
    assert_eq!(invoke(&args, false, &tmp).0, 0);
    let (code, _, err) = invoke(&["--threads", "many", "mso", "rank", "--formula", "ex x. x=x"], false, &tmp);
    assert_eq!(code, 2, "{err}");
}
