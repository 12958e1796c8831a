//! End-to-end runs of the `simpla` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn simpla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simpla"))
        .args(args)
        .env_remove("SIMPLA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CLAUSE_I: &str = "<x:=a> K{x} [y:=b] K{y} <z:=c> p(z)";

#[test]
fn check_clarification_on_intro() {
    let o = simpla(&["check", &fixture("intro.json"), "--point", "F", "--formula", CLAUSE_I]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn check_false_exits_one() {
    let o = simpla(&[
        "check",
        &fixture("intro.json"),
        "--point",
        "G",
        "--formula",
        "<x:=b> top",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn check_ignores_bindings_for_sentences() {
    let with = simpla(&[
        "check",
        &fixture("intro.json"),
        "--point",
        "F",
        "--formula",
        CLAUSE_I,
        "--assign",
        "x=d",
    ]);
    assert_eq!(with.status.code(), Some(0));
    assert_eq!(stdout(&with).trim(), "true");
}

#[test]
fn open_formulas_need_admissible_bindings() {
    let intro = fixture("intro.json");
    let ok = simpla(&["check", &intro, "--point", "F", "--formula", "p(x)", "--assign", "x=c"]);
    assert_eq!((ok.status.code(), stdout(&ok).trim()), (Some(0), "true"));
    let missing = simpla(&["check", &intro, "--point", "F", "--formula", "p(x)"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("not assigned"));
    let dead = simpla(&["check", &intro, "--point", "F", "--formula", "p(x)", "--assign", "x=d"]);
    assert_eq!(dead.status.code(), Some(2));
    assert!(stderr(&dead).contains("inadmissible"));
}

#[test]
fn formula_file_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "<x:=b> top\n").unwrap();
    let o = simpla(&[
        "check",
        &fixture("intro.json"),
        "--formula-file",
        path.to_str().unwrap(),
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"]["F"], true);
    assert_eq!(v["points"]["G"], false);
    assert_eq!(v["result"], false);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_print_the_grammar() {
    let o = simpla(&["check", &fixture("intro.json"), "--point", "F", "--formula", "(p(x) &"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("formula grammar"));
}

#[test]
fn usage_errors_exit_two() {
    let o = simpla(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model files"));
    let o = simpla(&["check", &fixture("intro.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convert_then_iso_against_the_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    let o = simpla(&["convert", &fixture("hex_simplicial.json"), "--to", "kripke"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("hex.json");
    fs::write(&out, &o.stdout).unwrap();
    let iso = simpla(&["iso", out.to_str().unwrap(), &fixture("hex_kripke.json")]);
    assert_eq!(iso.status.code(), Some(0));
    let w: serde_json::Value = serde_json::from_slice(&iso.stdout).unwrap();
    assert_eq!(w["mapping"].as_object().unwrap().len(), 6);

    let back = simpla(&["convert", &fixture("hex_kripke.json"), "--to", "simplicial"]);
    let out = dir.path().join("back.json");
    fs::write(&out, &back.stdout).unwrap();
    let iso = simpla(&["iso", out.to_str().unwrap(), &fixture("hex_simplicial.json")]);
    assert_eq!(iso.status.code(), Some(0));
}

#[test]
fn iso_negative_and_kind_mismatch() {
    let o = simpla(&["iso", &fixture("intro.json"), &fixture("hex_simplicial.json")]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));
    let o = simpla(&["iso", &fixture("intro.json"), &fixture("hex_kripke.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bisim_and_distinguish_on_intro() {
    let intro = fixture("intro.json");
    let o = simpla(&["bisim", &intro, "F", &intro, "G"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));
    let o = simpla(&["bisim", &intro, "F", &intro, "F"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));

    let o = simpla(&["distinguish", &intro, "F", &intro, "G"]);
    assert_eq!(o.status.code(), Some(0));
    let d = stdout(&o).trim().to_owned();
    let at_f = simpla(&["check", &intro, "--point", "F", "--formula", &d]);
    let at_g = simpla(&["check", &intro, "--point", "G", "--formula", &d]);
    assert_eq!((stdout(&at_f).trim(), stdout(&at_g).trim()), ("true", "false"));

    let o = simpla(&["distinguish", &intro, "G", &intro, "G"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "none"));
}

#[test]
fn kripke_lep_failure_loads_for_check_but_not_convert() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"kind":"kripke","agents":["a"],
            "worlds":[{"id":"u","domain":["a"]},{"id":"v","domain":["a"],"interp":{"p":["a"]}}],
            "relations":{"a":[["u","u"],["v","v"],["u","v"]]}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = simpla(&["check", p, "--point", "u", "--formula", "top"]);
    assert_eq!(o.status.code(), Some(0));
    let o = simpla(&["convert", p, "--to", "simplicial"]);
    assert_eq!(o.status.code(), Some(2));
    let o = simpla(&["validate", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn malformed_model_reports_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["w"]]}"#,
    )
    .unwrap();
    let o = simpla(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('w'), "{}", stderr(&o));
}

#[test]
fn properize_output_is_proper() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("twin.json");
    fs::write(
        &path,
        r#"{"kind":"kripke","agents":["a"],
            "worlds":[{"id":"u","domain":["a"]},{"id":"v","domain":["a"]}],
            "relations":{"a":[["u","u"],["v","v"],["u","v"],["v","u"]]}}"#,
    )
    .unwrap();
    let o = simpla(&["properize", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("pr.json");
    fs::write(&out, &o.stdout).unwrap();
    let v = simpla(&["validate", out.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["proper"], true);
    assert_eq!(report["worlds"], 1);
}

#[test]
fn nf_prints_normal_form_and_agreement() {
    let o = simpla(&["nf", "--formula", "<x:=a> top"]);
    assert_eq!(stdout(&o).trim(), "<x:=a> top");
    let o = simpla(&["nf", "--formula", "(<x:=a> top & top)", "--simplify"]);
    assert_eq!(stdout(&o).trim(), "<x:=a> top");
    let o = simpla(&[
        "nf",
        "--formula",
        "<x:=a> (p(x) & [y:=b] ~p(y))",
        "--trials",
        "10",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["disagreements"].as_array().unwrap().len(), 0);
    let o = simpla(&["nf", "--formula", "p(x)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kphi_direct_and_expanded_agree() {
    let intro = fixture("intro.json");
    let args = ["--phi", "p(x)", "--formula", "<z:=c> p(z)"];
    let o = simpla(&[&["kphi", intro.as_str(), "--point", "F"][..], &args[..]].concat());
    let direct = stdout(&o).trim().to_owned();
    let o = simpla(&[&["kphi", intro.as_str(), "--expand"][..], &args[..]].concat());
    let expansion = stdout(&o).trim().to_owned();
    let o = simpla(&["check", &intro, "--point", "F", "--formula", &expansion]);
    assert_eq!(stdout(&o).trim(), direct);
}

#[test]
fn introspect_finds_a_negative_witness() {
    let o = simpla(&["introspect", "--phi", "p(x)", "--trials", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["in_grammar"], true);
    assert!(v["negative_witness"].is_object());
}

#[test]
fn axioms_report_and_mutant_dump() {
    let o = simpla(&[
        "axioms", "--schema", "T^K", "--schema", "KNI", "--trials", "20", "--models", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("schema,instances,models,failures"));
    let dir = tempfile::tempdir().unwrap();
    let o = simpla(&[
        "axioms",
        "--schema",
        "eni-unguarded",
        "--trials",
        "50",
        "--models",
        "10",
        "--dump",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(fs::read_dir(dir.path()).unwrap().count() >= 2);
}

#[test]
fn sat_verdicts() {
    let o = simpla(&["sat", "--formula", "<x:=a> top", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "sat");
    let o = simpla(&["sat", "--formula", "(<x:=a> top & [x:=a] bot)", "--max-facets", "2"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "unsat up to 2 facets"));
}

#[test]
fn seed_from_environment_matches_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_simpla"));
        cmd.args(["introspect", "--phi", "p(x)", "--trials", "3", "--json"]);
        cmd.env_remove("SIMPLA_SEED");
        if let Some(s) = env {
            cmd.env("SIMPLA_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("17"), None), run(None, Some("17")));
    assert_eq!(run(None, Some("17")), run(None, Some("17")));
}
