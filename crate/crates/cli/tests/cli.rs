use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use process_duality::format::{emit, load, parse_str, ProblemFile};
use process_duality::fuzz::{instance_rng, random_finite, random_instance};
use process_duality_core::model::VectorProgram;
use rand::SeedableRng;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_process-duality"));
    cmd.args(args).env_remove("PROCESS_DUALITY_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

fn clause<'a>(cert: &'a Value, id: &str) -> &'a str {
    cert["clauses"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap()["verdict"].as_str().unwrap()
}

#[test]
fn example_certificate() {
    let path = data("example.json");
    let out = run(&["certify", path.to_str().unwrap(), "--y0", "0/1,0/1", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["command"], "certify");
    assert_eq!(v["tool"]["name"], "process-duality");
    let c = &v["result"]["certificates"][0];
    let gens = c["separators"]["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(strings(&gens[0]["joined"]), ["0/1", "0/1", "1/1"]);
    let rows = c["process"]["graph"]["h_rep"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(strings(&rows[0]["normal"]), ["0/1", "0/1", "-1/1"]);
    assert_eq!(rows[0]["offset"], "0/1");
    assert_eq!(c["status_p0"]["minimal"], true);
    assert_eq!(c["status_d"]["weak_minimal"], true);
    assert_eq!(c["status_d"]["minimal"], false);
    assert_eq!(clause(c, "C4"), "not-applicable");
    assert_eq!(c["clean"], true);
}

#[test]
fn scalar_multiplier() {
    let path = data("scalar_i2.json");
    let out = run(&["certify", path.to_str().unwrap(), "--y0", "1/1", "--json"]);
    assert_eq!(code(&out), 0);
    let c = &json(&out)["result"]["certificates"][0];
    assert_eq!(strings(&c["multipliers"][0]), ["1/1"]);
    assert_eq!(clause(c, "C3"), "verified");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{ \"version\": 1,").unwrap();
    let schema = dir.path().join("schema.json");
    let text = std::fs::read_to_string(data("i3.json")).unwrap().replace("\"affine\"", "\"quadratic\"");
    std::fs::write(&schema, text).unwrap();
    let example = data("example.json");
    let example = example.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["certify", malformed.to_str().unwrap(), "--y0", "0,0"],
        vec!["certify", schema.to_str().unwrap(), "--y0", "1/2,1/2"],
        vec!["certify", "/nonexistent/problem.json", "--y0", "0,0"],
        vec!["certify", example, "--y0", "0,0,0"],
        vec!["certify", example, "--y0", "0,-1"],
        vec!["certify", example, "--y0", "a,b"],
        vec!["process", example],
        vec!["fuzz", "--dims", "2,0,1"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = run(&["certify", malformed.to_str().unwrap(), "--y0", "0,0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn schema_errors_name_the_field() {
    let text = std::fs::read_to_string(data("i3.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut bad = v.clone();
    bad["f"]["offset"][0] = Value::String("1.5".into());
    let err = parse_str(&bad.to_string()).unwrap_err().to_string();
    assert!(err.contains("/f/offset/0"), "{err}");
    let mut bad = v.clone();
    bad["dims"]["y"] = Value::from(3);
    assert!(parse_str(&bad.to_string()).is_ok_and(|f| f.to_program().is_err()));
    let mut bad = v;
    bad["extra"] = Value::from(1);
    assert!(parse_str(&bad.to_string()).is_err());
}

#[test]
fn thread_variable_is_validated() {
    let path = data("i3.json");
    let args = ["certify", path.to_str().unwrap(), "--y0", "1/2,1/2"];
    assert_eq!(code(&run_env(&args, &[("PROCESS_DUALITY_THREADS", "zero")])), 2);
    assert_eq!(code(&run_env(&args, &[("PROCESS_DUALITY_THREADS", "0")])), 2);
    assert_eq!(code(&run_env(&args, &[("PROCESS_DUALITY_THREADS", "2")])), 0);
}

#[test]
fn i3_process() {
    let path = data("i3.json");
    let out = run(&["process", path.to_str().unwrap(), "--y0", "1/2,1/2", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let gens = v["result"]["separators"]["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(strings(&gens[0]["joined"]), ["1/1", "1/1", "1/1"]);
    let text = stdout(&run(&["process", path.to_str().unwrap(), "--y0", "1/2,1/2"]));
    assert!(text.contains("z - y1 - y2 <= 0"), "{text}");
}

#[test]
fn empty_separator_cone_gives_whole_space() {
    let path = data("unbounded.json");
    let out = run(&["process", path.to_str().unwrap(), "--y0", "-1", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["separators"]["empty"], true);
    assert_eq!(v["result"]["process"]["whole"], true);
    let text = stdout(&run(&["process", path.to_str().unwrap(), "--y0", "-1"]));
    assert!(text.contains("graph = Z x Y"));
}

#[test]
fn example_fibers() {
    let path = data("example.json");
    let out = run(&["process", path.to_str().unwrap(), "--y0", "0,0", "--at", "-2", "--at", "0", "--at", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for z in ["-2", "0", "5"] {
        assert!(text.contains(&format!("L({z}) = {{-y2 <= 0}}")), "{text}");
    }
}

#[test]
fn i3_classify_both_sides() {
    let path = data("i3.json");
    let out = run(&["classify", path.to_str().unwrap(), "--y0", "1/2,1/2", "--side", "both"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    for side in ["primal", "dual"] {
        for key in ["minimal", "weak_minimal", "pos", "ghe", "he", "se"] {
            assert_eq!(r[side][key], true, "{side} {key}");
        }
    }
    for (_, verdict) in r["transfer"].as_object().unwrap() {
        assert_eq!(verdict, "verified");
    }
}

#[test]
fn single_point_classify() {
    let path = data("single_point.json");
    let out = run(&["classify", path.to_str().unwrap(), "--y0", "1,2", "--side", "P"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"]["primal"];
    for key in ["minimal", "weak_minimal", "pos", "ghe", "he", "se"] {
        assert_eq!(r[key], true, "{key}");
    }
}

#[test]
fn frontiers() {
    let i3 = data("i3.json");
    let v = json(&run(&["frontier", i3.to_str().unwrap(), "--json"]));
    let ys: Vec<Vec<&str>> = v["result"]["points"].as_array().unwrap().iter().map(|p| strings(&p["y"])).collect();
    assert_eq!(ys, [["0/1", "1/1"], ["1/1", "0/1"]]);
    assert_eq!(v["result"]["set"], "primal");
    let example = data("example.json");
    let v = json(&run(&["frontier", example.to_str().unwrap(), "--dual-at", "0,0", "--json"]));
    assert_eq!(v["result"]["set"], "dual");
    assert!(v["result"]["points"].as_array().unwrap().is_empty());
    let out = run(&["certify", data("sampled.json").to_str().unwrap(), "--frontier", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(
        v["result"]["certificates"].as_array().unwrap().len(),
        v["result"]["frontier"]["points"].as_array().unwrap().len()
    );
}

#[test]
fn data_files_round_trip() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let (file, _) = load(&path).unwrap();
        assert_eq!(emit(&file), text, "{}", path.display());
    }
}

#[test]
fn generated_programs_round_trip() {
    for i in 0..40 {
        let p = random_instance(&mut instance_rng(5, i), None).program().unwrap();
        let text = emit(&ProblemFile::from_program(&p));
        let back = parse_str(&text).unwrap();
        assert_eq!(emit(&back), text);
        assert_eq!(emit(&ProblemFile::from_program(&back.to_program().unwrap())), text);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let f = random_finite(&mut rng);
        let p = if f.is_single_valued() { VectorProgram::Discrete(f) } else { VectorProgram::SetValued(f) };
        let text = emit(&ProblemFile::from_program(&p));
        let back = parse_str(&text).unwrap().to_program().unwrap();
        assert_eq!(emit(&ProblemFile::from_program(&back)), text);
    }
}

#[test]
fn reports_are_deterministic() {
    let path = data("i3.json");
    let args = ["certify", path.to_str().unwrap(), "--frontier", "--json"];
    let one = run_env(&args, &[("PROCESS_DUALITY_THREADS", "1")]);
    let four = run_env(&args, &[("PROCESS_DUALITY_THREADS", "4")]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, run(&args).stdout);
    let fuzz = ["fuzz", "--seed", "4", "--count", "12", "--json"];
    let a = run_env(&fuzz, &[("PROCESS_DUALITY_THREADS", "1")]);
    let b = run_env(&fuzz, &[("PROCESS_DUALITY_THREADS", "3")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fuzz_commands() {
    let out = run(&["fuzz", "--count", "0"]);
    assert_eq!(code(&out), 0);
    let out = run(&["fuzz", "--seed", "1", "--count", "100", "--dims", "2,2,1", "--json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["count"], 100);
    assert!(v["failure"].is_null());

    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "fuzz",
        "--seed",
        "1",
        "--count",
        "20",
        "--dims",
        "2,2,1",
        "--mutant",
        "sign-flip",
        "--out",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let index = v["failure"]["index"].as_u64().unwrap();
    let dumped = dir.path().join(format!("counterexample-1-{index}.json"));
    let (_, p) = load(&dumped).unwrap();
    let y0 = strings(&v["failure"]["y0"]).join(",");
    let path = dumped.to_str().unwrap();
    assert_eq!(code(&run(&["certify", path, "--y0", &y0])), 0, "the dump is clean without the mutant");
    assert_eq!(p.y_dim(), 2);
}
