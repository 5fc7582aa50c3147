use std::path::Path;
use std::process::{Command, Output};

use simplexion::io;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplexion")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &path]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generate_named_and_refined() {
    let dir = tempfile::tempdir().unwrap();
    let oct = generate(dir.path(), "oct.json", &["cross-polytope", "--dim", "2"]);
    let c = io::read_complex(Path::new(&oct)).unwrap();
    assert_eq!(c.f_vector().counts(), &[6, 12, 8]);
    let r = generate(dir.path(), "oct1.json", &["refine", "--input", &oct]);
    let r = io::read_complex(Path::new(&r)).unwrap();
    assert_eq!(r.f_vector().counts(), &[26, 72, 48]);

    let o = run(&["refine", &oct, "--levels", "1"]);
    assert_eq!(io::complex_from_str(&stdout(&o)).unwrap().len(), 146);
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "erdos-renyi", "--n", "6", "--p", "0.5", "--seed", "7"]);
    let b = run(&["generate", "erdos-renyi", "--n", "6", "--p", "0.5", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn generate_derived_complexes() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = generate(dir.path(), "p2.json", &["points", "--n", "2"]);
    let c4 = generate(dir.path(), "c4.json", &["cycle", "--n", "4"]);
    let s2 = generate(dir.path(), "s2.json", &["join", &p2, &c4]);
    let s2 = io::read_complex(Path::new(&s2)).unwrap();
    assert_eq!(s2.f_vector().counts(), &[6, 12, 8]);
    let u = generate(dir.path(), "u.json", &["union", &p2, &c4]);
    assert_eq!(io::read_complex(Path::new(&u)).unwrap().euler_characteristic(), 2);
    let prod = generate(dir.path(), "prod.json", &["product", &c4, &c4]);
    let prod = io::read_complex(Path::new(&prod)).unwrap();
    assert_eq!(simplexion::hodge::betti(&prod).unwrap().betti, vec![1, 2, 1]);

    let graph = dir.path().join("g.json");
    std::fs::write(&graph, r#"{"n":4,"edges":[[0,1],[1,2],[2,0],[2,3]]}"#).unwrap();
    let w = generate(dir.path(), "w.json", &["whitney", "--graph", graph.to_str().unwrap()]);
    assert_eq!(io::read_complex(Path::new(&w)).unwrap().f_vector().counts(), &[4, 4, 1]);
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(run(&["generate", "cycle", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["random", "--n", "11", "--p", "0.5"]).status.code(), Some(3));
}

#[test]
fn verify_octahedron_and_k2() {
    let dir = tempfile::tempdir().unwrap();
    let oct = generate(dir.path(), "oct.json", &["cross-polytope", "--dim", "2"]);
    let k2 = generate(dir.path(), "k2.json", &["complete", "--n", "2"]);

    let o = run(&["verify", &oct, "--suite", "all", "--no-meta"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    let hydrogen = report["checks"].as_array().unwrap().iter().find(|c| c["theorem"] == "hydrogen").unwrap();
    assert_eq!(hydrogen["status"], "skipped:dim≠1");

    let o = run(&["verify", &k2, "--suite", "hydrogen", "--no-meta"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["checks"][0]["status"], "pass");

    let o = run(&["verify", &oct, "--suite", "hydrogen", "--no-meta", "--format", "csv"]);
    assert_eq!(stdout(&o), "theorem,status\nhydrogen,\"skipped:dim≠1\"\n");
}

#[test]
fn verify_reports_are_byte_identical_without_meta() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = generate(dir.path(), "c5.json", &["cycle", "--n", "5"]);
    let a = run(&["verify", &c5, "--no-meta", "--seed", "3"]);
    let b = run(&["verify", &c5, "--no-meta", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let with_meta = stdout(&run(&["verify", &c5, "--suite", "energy"]));
    assert!(with_meta.contains("wall_ms"));
}

#[test]
fn resource_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = generate(dir.path(), "k4.json", &["complete", "--n", "4"]);
    assert_eq!(run(&["refine", &k4, "--cap-simplices", "20"]).status.code(), Some(3));
    assert_eq!(run(&["verify", &k4, "--cap-simplices", "5"]).status.code(), Some(3));
}

#[test]
fn analyze_flags() {
    let dir = tempfile::tempdir().unwrap();
    let oct = generate(dir.path(), "oct.json", &["cross-polytope", "--dim", "2"]);
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"values":{"0":0,"1":5,"2":1,"3":4,"4":2,"5":3}}"#).unwrap();
    let f = f.to_str().unwrap();
    let o = run(&["analyze", &oct, "--curvature", "--morse", "--function", f, "--level", f, "2.5", "--betti", "--wu", "--interaction"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["curvature"]["sum"], "2");
    assert_eq!(v["curvature"]["poincare_hopf"]["sum"], 2);
    assert_eq!(v["cohomology"]["betti"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["cohomology"]["poincare_poly"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["wu"]["omega"], 2);
    assert_eq!(v["interaction_cohomology"]["euler_characteristic"], 2);
    assert_eq!(v["level_surface"]["is_codim_one_graph"], true);
    assert_eq!(v["morse"]["counts"], serde_json::json!([1, 0, 1]));
}

#[test]
fn spectra_csv_and_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = generate(dir.path(), "c4.json", &["cycle", "--n", "4"]);
    let csv = dir.path().join("out.csv");
    let o = run(&["spectra", &c4, "--operator", "kirchhoff", "--zeta", "--limit-levels", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for (v, e) in values.iter().zip([0.0, 2.0, 2.0, 4.0]) {
        assert!((v - e).abs() < 1e-9);
    }
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["limit"]["levels"].as_array().unwrap().len(), 2);
    assert_eq!(v["zeta"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["spectra", &c4, "--operator", "bogus"]).status.code(), Some(2));
}

#[test]
fn random_statistics() {
    let o = run(&["random", "--n", "2", "--p", "0.3", "--trials", "200", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["euler"]["formula"].as_f64().unwrap() - 1.7).abs() < 1e-12);
    let o = run(&["random", "--n", "5", "--p", "0", "--trials", "50"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"]["mean"], 0.0);
    assert_eq!(v["euler"]["mean"], 5.0);
    let a = run(&["random", "--n", "6", "--p", "0.4", "--trials", "300", "--format", "csv"]);
    let b = run(&["random", "--n", "6", "--p", "0.4", "--trials", "300", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("quantity,mean,std_err,formula,z\n"));
}
