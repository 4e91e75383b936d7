use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hcl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcl")).current_dir(dir).args(args).output().expect("hcl runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn gen_clique(dir: &Path, n: &str, name: &str) {
    let o = hcl(dir, &["gen", "--family", "clique", "--n", n, "--r", "2", "--out", name]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gen_clique_file_and_manifest() {
    let d = tempfile::tempdir().unwrap();
    gen_clique(d.path(), "4", "k4.json");
    let h = json(d.path().join("k4.json"));
    assert_eq!(h["vertex_count"], 6);
    assert_eq!(h["uniformity"], 3);
    assert_eq!(h["edges"].as_array().unwrap().len(), 4);
    let m = json(d.path().join("k4.json.manifest.json"));
    assert_eq!(m["subcommand"], "gen");
    assert_eq!(m["params"]["n"], "4");
    assert_eq!(m["outputs"][0], "k4.json");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn gen_rejects_bad_parameters() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&hcl(d.path(), &["gen", "--family", "clique", "--n", "2", "--r", "2", "--out", "x.json"])), 2);
    assert!(!d.path().join("x.json").exists());
    assert_eq!(code(&hcl(d.path(), &["gen", "--family", "gridlines", "--m", "3", "--big-m", "4", "--s", "2", "--h-max", "1", "--out", "g.json"])), 2);
    assert_eq!(code(&hcl(d.path(), &["gen", "--family", "random", "--v", "6", "--s", "3", "--out", "r.json"])), 2);
    assert_eq!(code(&hcl(d.path(), &["gen", "--family", "nonsense", "--out", "r.json"])), 2);
}

#[test]
fn gen_families() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&hcl(p, &["gen", "--family", "gridlines", "--m", "3", "--big-m", "5", "--s", "3", "--h-max", "2", "--out", "g.json"])), 0);
    assert_eq!(json(p.join("g.json"))["edges"].as_array().unwrap().len(), 120);
    assert_eq!(code(&hcl(p, &["gen", "--family", "folkman", "--big-n", "3", "--n", "3", "--k", "2", "--out", "f.json"])), 0);
    assert_eq!(json(p.join("f.json"))["edges"].as_array().unwrap().len(), 2);
    std::fs::write(p.join("path.json"), r#"{"uniformity":2,"vertex_count":3,"edges":[{"set":[0,1],"mult":1},{"set":[1,2],"mult":1}]}"#).unwrap();
    assert_eq!(code(&hcl(p, &["gen", "--family", "induced", "--big-n", "3", "--k", "1", "--pattern", "path.json", "--out", "i.json"])), 0);
    let i = json(p.join("i.json"));
    assert_eq!((i["vertex_count"].as_u64(), i["edges"].as_array().unwrap().len()), (Some(6), 3));
    assert_eq!(json(p.join("i.json.manifest.json"))["inputs"][0], "path.json");
}

#[test]
fn random_generation_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["gen", "--family", "random", "--v", "6", "--s", "3", "--edges", "10", "--seed", "42", "--out", out];
    assert_eq!(code(&hcl(d.path(), &args("a.json"))), 0);
    assert_eq!(code(&hcl(d.path(), &args("b.json"))), 0);
    let a = std::fs::read(d.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.path().join("b.json")).unwrap());
    assert_eq!(json(d.path().join("a.json"))["edges"].as_array().unwrap().len(), 10);
    assert_eq!(json(d.path().join("a.json.manifest.json"))["seed"], 42);
}

#[test]
fn packaged_forced_tree_covers_k5() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "5", "k5.json");
    let args = ["contain", "-i", "k5.json", "--mode", "packaged", "--alpha", "1/10", "--beta", "1/20", "--q", "1/2", "--E", "10", "--force", "-o", "tree.json"];
    let o = hcl(p, &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let tree = json(p.join("tree.json"));
    assert_eq!(tree["tree"]["C"].as_array().unwrap().len(), 10);
    assert!(tree["stats"]["nodes"].as_u64().unwrap() >= 1);
    let m = json(p.join("tree.json.manifest.json"));
    assert_eq!(m["hypothesis"]["holds"], false);
    assert_eq!(m["params"]["alpha"], "1/10");
    assert_eq!(m["params"]["forced"], "true");

    let v = hcl(p, &["verify", "--hypergraph", "k5.json", "--containers", "tree.json"]);
    assert_eq!(code(&v), 0);
    let report: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["covered"], 27);
    assert_eq!(report["total_maximal"], 27);

    let first = std::fs::read(p.join("tree.json")).unwrap();
    assert_eq!(code(&hcl(p, &args)), 0);
    assert_eq!(first, std::fs::read(p.join("tree.json")).unwrap());
}

#[test]
fn packaged_without_force_and_limits() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "5", "k5.json");
    let base = ["contain", "-i", "k5.json", "--mode", "packaged", "--alpha", "1/10", "--beta", "1/20", "--E", "10"];
    assert_eq!(code(&hcl(p, &[&base[..], &["-o", "t.json"]].concat())), 3);
    assert!(!p.join("t.json").exists());
    assert_eq!(json(p.join("t.json.manifest.json"))["exit_code"], 3);
    assert_eq!(code(&hcl(p, &[&base[..], &["--force", "--max-nodes", "1", "-o", "t.json"]].concat())), 4);
    assert_eq!(code(&hcl(p, &["contain", "-i", "k5.json", "--mode", "packaged", "--alpha", "1/10", "--E", "10", "--force", "-o", "t.json"])), 2);
}

#[test]
fn simple_mode_hypothesis_and_cover() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "4", "k4.json");
    let o = hcl(p, &["contain", "-i", "k4.json", "-o", "s.json"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    let m = json(p.join("s.json.manifest.json"));
    assert_eq!(m["hypothesis"]["simple"]["holds"], false);
    assert_eq!(m["params"]["p"], "1/540");

    assert_eq!(code(&hcl(p, &["contain", "-i", "k4.json", "-o", "s.json", "--force"])), 0);
    let out = json(p.join("s.json"));
    assert!(!out["containers"].as_array().unwrap().is_empty());
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "k4.json", "--containers", "s.json"])), 0);

    std::fs::write(p.join("i.json"), "[0, 1, 2]").unwrap();
    assert_eq!(code(&hcl(p, &["contain", "-i", "k4.json", "-o", "one.json", "--force", "--independent", "i.json"])), 0);
    let one = json(p.join("one.json"));
    let c: Vec<u64> = one["container"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!([0, 1, 2].iter().all(|v| c.contains(v)));

    assert_eq!(code(&hcl(p, &["contain", "-i", "k4.json", "-o", "l.json", "--force", "--limit", "1"])), 4);
}

#[test]
fn verify_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "4", "k4.json");
    std::fs::write(p.join("none.json"), "[]").unwrap();
    std::fs::write(p.join("all.json"), "[[0,1,2,3,4,5]]").unwrap();
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "k4.json", "--containers", "none.json"])), 5);
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "k4.json", "--containers", "all.json"])), 0);
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "k4.json", "--containers", "all.json", "--cap", "2"])), 4);
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "k4.json", "--containers", "none.json", "-o", "r.json"])), 5);
    assert_eq!(json(p.join("r.json"))["covered"], 0);
    assert_eq!(json(p.join("r.json.manifest.json"))["exit_code"], 5);
    assert_eq!(code(&hcl(p, &["verify", "--hypergraph", "missing.json", "--containers", "all.json"])), 1);
}

#[test]
fn measure_reports() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    std::fs::write(p.join("e.json"), r#"{"uniformity":2,"vertex_count":2,"edges":[{"set":[0,1],"mult":1}]}"#).unwrap();
    let o = hcl(p, &["measure", "-i", "e.json", "-t", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["norm_sq"], "1/2");
    assert_eq!(v["hat_delta"], "1/1");
    assert_eq!(v["support"].as_array().unwrap().len(), 2);

    gen_clique(p, "4", "k4.json");
    let v: Value = serde_json::from_slice(&hcl(p, &["measure", "-i", "k4.json", "-t", "1"]).stdout).unwrap();
    assert_eq!(v["norm_sq"], "1/6");
    assert_eq!(v["max_degree"], "2");
    assert!(v["support"].as_array().unwrap().iter().all(|e| e["value"] == "1/6"));
    assert_eq!(code(&hcl(p, &["measure", "-i", "k4.json", "-t", "4"])), 2);
    assert_eq!(code(&hcl(p, &["measure", "-i", "k4.json", "-t", "0"])), 2);
    std::fs::write(p.join("empty.json"), r#"{"uniformity":2,"vertex_count":3,"edges":[]}"#).unwrap();
    assert_eq!(code(&hcl(p, &["measure", "-i", "empty.json", "-t", "1"])), 2);
}

#[test]
fn manifests_replay_to_identical_output() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "5", "k5.json");
    assert_eq!(code(&hcl(p, &["contain", "-i", "k5.json", "--mode", "packaged", "--alpha", "1/10", "--beta", "1/20", "--E", "10", "--force", "-o", "t.json"])), 0);
    let before = std::fs::read(p.join("t.json")).unwrap();
    let manifest = json(p.join("t.json.manifest.json"));
    std::fs::remove_file(p.join("t.json")).unwrap();
    assert_eq!(code(&hcl(p, &["replay", "t.json.manifest.json"])), 0);
    assert_eq!(before, std::fs::read(p.join("t.json")).unwrap());
    let after = json(p.join("t.json.manifest.json"));
    for key in ["command", "params", "inputs", "outputs", "hypothesis", "version", "seed"] {
        assert_eq!(manifest[key], after[key], "{key}");
    }
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    gen_clique(p, "5", "k5.json");
    let args = ["contain", "-i", "k5.json", "--mode", "packaged", "--alpha", "1/10", "--beta", "1/20", "--E", "10", "--force", "-o"];
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_hcl")).current_dir(p).env("HCL_THREADS", threads).args(args).arg(out).output().unwrap()
    };
    assert_eq!(code(&run("1", "one.json")), 0);
    assert_eq!(code(&run("4", "four.json")), 0);
    assert_eq!(std::fs::read(p.join("one.json")).unwrap(), std::fs::read(p.join("four.json")).unwrap());
    assert_eq!(code(&run("zero", "x.json")), 2);
}
