use std::path::Path;
use std::process::{Command, Output};

use elq_core::encode::parse_dimacs;
use elq_core::pac::occam_sample_size;
use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elq-forge"))
        .args(args)
        .env_remove("ELQ_FORGE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// The three examples of E0 as a job directory.
fn e0_job(dir: &Path) -> String {
    write(dir, "p1.db", "r(a,a)\nA(a)\nB(a)\n");
    write(dir, "p2.db", "A(a)\nr(a,b)\nB(b)\n");
    write(dir, "n1.db", "r(a,b)\n");
    write(
        dir,
        "job.json",
        r#"{"ontology": null, "examples": [
            {"db": "p1.db", "individual": "a", "label": "+"},
            {"db": "p2.db", "individual": "a", "label": "+"},
            {"db": "n1.db", "individual": "b", "label": "-"}]}"#,
    )
}

#[test]
fn fit_example_one() {
    let dir = tempfile::tempdir().unwrap();
    let job = e0_job(dir.path());
    let v = json(&forge(&["fit", "--job", &job]));
    assert_eq!(v["query"], "A");
    assert_eq!(v["rounds"], 1);
    assert_eq!(v["status"], "found");
    let inputs = v["provenance"]["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 4);
    assert!(inputs.iter().all(|i| i["sha256"].as_str().unwrap().len() == 64));
}

#[test]
fn fit_modes() {
    let dir = tempfile::tempdir().unwrap();
    let job = e0_job(dir.path());
    let v = json(&forge(&["fit", "--job", &job, "--mode", "product"]));
    assert_eq!(v["query"], "(and A (ex r B))");
    for mode in ["refine-rho1", "refine-rho2"] {
        let v = json(&forge(&["fit", "--job", &job, "--mode", mode]));
        assert_eq!(v["query"], "A", "{mode}");
    }
}

#[test]
fn dump_dimacs_writes_parseable_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let job = e0_job(dir.path());
    write(dir.path(), "n2.db", "A(a)\n");
    let text = std::fs::read_to_string(&job)
        .unwrap()
        .replace("]}", ", {\"db\": \"n2.db\", \"individual\": \"a\", \"label\": \"-\"}]}");
    let job = write(dir.path(), "job2.json", &text);
    let cnf = dir.path().join("cnf");
    let v = json(&forge(&["fit", "--job", &job, "--dump-dimacs", cnf.to_str().unwrap()]));
    assert_eq!(v["round"], 2);
    for n in [1, 2] {
        let text = std::fs::read_to_string(cnf.join(format!("round-{n}.cnf"))).unwrap();
        let (vars, clauses) = parse_dimacs(&text).unwrap();
        assert!(vars > 0 && !clauses.is_empty());
        assert!(cnf.join(format!("round-{n}.cnf.varmap")).exists());
    }
}

#[test]
fn eval_membership() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "d.db", "A(a)\nr(a,b)\nB(b)\n");
    assert_eq!(json(&forge(&["eval", "--query", "(ex r B)", "--database", &db, "--individual", "a"]))["holds"], true);
    assert_eq!(json(&forge(&["eval", "--query", "(ex r A)", "--database", &db, "--individual", "a"]))["holds"], false);
    let o = write(dir.path(), "o.txt", "CI B (and C (ex s top))\n");
    let v = json(&forge(&["eval", "--query", "(ex r (ex s top))", "--database", &db, "--individual", "a", "--ontology", &o]));
    assert_eq!(v["holds"], true);
}

#[test]
fn pac_matches_the_formula() {
    let v = json(&forge(&["pac", "--epsilon", "0.5", "--delta", "0.5", "--sigma-size", "3", "--restrictions", "2"]));
    assert_eq!(v["sample_size"].as_u64().unwrap(), occam_sample_size(0.5, 0.5, 16.0));
    let out = forge(&["pac", "--epsilon", "1.5", "--delta", "0.5", "--sigma-size", "3", "--size", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "bad.db", "A(a)\nr(a,\n");
    let out = forge(&["eval", "--query", "A", "--database", &db, "--individual", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.db:2:5"), "{}", stderr(&out));

    let job = write(dir.path(), "job.json", "{\"examples\": [\n  {\"db\": 3}\n]}");
    let out = forge(&["fit", "--job", &job]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("job.json:2:"), "{}", stderr(&out));

    let out = forge(&["eval", "--query", "(ex r", "--database", &db, "--individual", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--query:1:"), "{}", stderr(&out));
}

#[test]
fn usage_and_domain_exit_codes() {
    assert_eq!(forge(&["fit"]).status.code(), Some(2));
    assert_eq!(forge(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let db = write(dir.path(), "cyc.db", "r(a,b)\nr(b,a)\n");
    let out = forge(&["dual", "--database", &db, "--individual", "a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cyclic"));
}

#[test]
fn no_fitting_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d.db", "A(a)\n");
    let job = write(
        dir.path(),
        "job.json",
        r#"{"examples": [{"db": "d.db", "individual": "a", "label": "+"},
                         {"db": "d.db", "individual": "a", "label": "-"}]}"#,
    );
    let v = json(&forge(&["fit", "--job", &job]));
    assert_eq!(v["status"], "exhausted");
    assert!(v["query"].is_null());
}

#[test]
fn dual_of_a_name() {
    let v = json(&forge(&["dual", "--query", "A", "--roles", "r"]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["size"], 3);
}

#[test]
fn bench_jobs_round_trip_and_are_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kpath");
    json(&forge(&["bench", "--family", "kpath", "--k", "3", "--out", out.to_str().unwrap()]));
    let v = json(&forge(&["fit", "--job", out.join("job.json").to_str().unwrap()]));
    assert_eq!(v["query"], "(ex r (ex r (ex r top)))");
    assert!(std::fs::read_to_string(out.join("README.md")).unwrap().contains("sha256"));

    let planted = |name: &str, seed: &str| {
        let d = dir.path().join(name);
        let st = Command::new(env!("CARGO_BIN_EXE_elq-forge"))
            .args(["bench", "--family", "planted", "--target", "(and A (ex r B))", "--out", d.to_str().unwrap()])
            .env("ELQ_FORGE_SEED", seed)
            .output()
            .unwrap();
        assert!(st.status.success());
        let mut files: Vec<(String, String)> = std::fs::read_dir(d.join("db"))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read_to_string(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let a = planted("p1", "5");
    assert_eq!(a, planted("p2", "5"));
    assert_ne!(a, planted("p3", "6"));
    let v = json(&forge(&["fit", "--job", dir.path().join("p1/job.json").to_str().unwrap()]));
    assert_eq!(v["status"], "found");
}

#[test]
fn experiment_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp");
    let v = json(&forge(&[
        "experiment",
        "--suite",
        "most-specific:4",
        "--learners",
        "bounded_fit,product",
        "--ms",
        "4,8",
        "--trials",
        "3",
        "--jobs",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(out.join("trials.csv")).unwrap();
    assert!(csv.starts_with("trial,m,learner,accuracy,time_ms\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 3);
    assert!(out.join("summary.json").exists());
}
