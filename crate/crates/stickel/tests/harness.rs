use stickel::harness::{run, ConfigFile, RunOptions, Status};

const BASE: &str = r#"
[[experiment]]
id = "base"
q = 3
s = ["inf", [0, 1]]
t = [[2, 1]]
s0 = [[0, 1]]
layers = [{ constant_degree = 9 }]
"#;

fn run_text(kind: &str, text: &str) -> stickel::harness::ReportSet {
    run(kind, &ConfigFile::parse(text).unwrap(), &RunOptions::default()).unwrap()
}

#[test]
fn stark_verifies_supplied_eps() {
    let text = format!("{BASE}eps = [{{ units = [0], num = \"1\" }}]\n");
    let set = run_text("stark-check", &text);
    let r = &set.reports[0];
    assert_eq!(r.find("layer0.stark").unwrap().status, Status::VerifiedExact);
}

#[test]
fn stark_rejects_wrong_eps() {
    let text = format!("{BASE}eps = [{{ units = [0], num = \"2\" }}]\n");
    let set = run_text("stark-check", &text);
    let c = set.reports[0].find("layer0.stark").unwrap();
    assert_eq!(c.status, Status::Failed);
    assert!(c.witness.is_some());
}

#[test]
fn stark_rejects_non_integral_eps() {
    let text = format!("{BASE}eps = [{{ units = [0], num = \"1\", den = \"3\" }}]\n");
    let set = run_text("stark-check", &text);
    assert_eq!(set.reports[0].find("eps").unwrap().status, Status::Failed);
}

#[test]
fn stark_without_eps_for_n2_is_out_of_scope() {
    let text = r#"
[[experiment]]
id = "n2"
q = 3
s = ["inf", [0, 1], [1, 1]]
t = [[2, 1]]
s0 = [[0, 1], [1, 1]]
layers = [{ constant_degree = 9 }]
"#;
    let set = run_text("stark-check", text);
    assert_eq!(set.reports[0].find("solve").unwrap().status, Status::OutOfScope);
    assert!(set.passed());
}

#[test]
fn supplied_units_match_computed() {
    let text = format!("{BASE}units = [{{ constant = 1, factors = [[[0, 1], -1]] }}]\n");
    let set = run_text("gross-check", &text);
    assert!(set.passed());
    let bad = format!("{BASE}units = [{{ constant = 1, factors = [[[0, 1], -2]] }}]\n");
    let set = run_text("gross-check", &bad);
    assert_eq!(set.reports[0].find("units").unwrap().status, Status::Failed);
}

#[test]
fn reports_sorted_by_id() {
    let text = format!("{}{}", BASE.replace("\"base\"", "\"zz\""), BASE.replace("\"base\"", "\"aa\""));
    let set = run_text("theta", &text);
    let ids: Vec<&str> = set.reports.iter().map(|r| r.experiment.as_str()).collect();
    assert_eq!(ids, ["aa", "zz"]);
}

#[test]
fn unknown_kind_is_an_error() {
    let file = ConfigFile::parse(BASE).unwrap();
    assert!(run("nonsense", &file, &RunOptions::default()).is_err());
}
