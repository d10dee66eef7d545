use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qwalk_cli::spec::WalkSpecFile;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn qw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qw"))
        .args(args)
        .env_remove(qwalk_cli::OUT_DIR_ENV)
        .output()
        .expect("qw runs")
}

fn qw_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qw"))
        .args(args)
        .current_dir(dir)
        .env_remove(qwalk_cli::OUT_DIR_ENV)
        .output()
        .expect("qw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let body = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, body)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_passes_and_reports_the_residual() {
    let o = qw(&["check", s(&spec("dirac.toml"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max residual:"));
}

#[test]
fn check_fails_on_the_cross_term() {
    let o = qw(&["check", s(&spec("broken.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("max residual:"))
        .unwrap()
        .to_string();
    let value: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!((value - 0.5).abs() < 1e-12);
}

#[test]
fn weyl_dispersion_rows_are_abs_k() {
    let dir = tempfile::tempdir().unwrap();
    let o = qw_in(dir.path(), &["dispersion", s(&spec("weyl.toml")), "--samples", "8", "--out", "d.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, body) = rows(&dir.path().join("d.csv"));
    assert_eq!(header, ["k", "omega_plus", "omega_minus"]);
    assert_eq!(body.len(), 8);
    for row in body {
        let v: Vec<f64> = row.iter().map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[0].abs()).abs() < 1e-12);
        assert!((v[2] + v[0].abs()).abs() < 1e-12);
    }
}

#[test]
fn derivative_columns_leave_crossings_blank() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = qw(&["dispersion", s(&spec("weyl.toml")), "--samples", "64", "--out", s(&out), "--derivatives"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, body) = rows(&out);
    assert_eq!(header.len(), 5);
    let zero = body.iter().find(|r| r[0].parse::<f64>().unwrap() == 0.0).unwrap();
    assert_eq!(zero[3], "");
    let mid = &body[48];
    assert!((mid[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn dirac_step_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dist.csv");
    let o = qw(&["evolve", s(&spec("dirac.toml")), "--steps", "1", "--init", "0,0", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let (header, body) = rows(&out);
    assert_eq!(header, ["site", "component", "prob"]);
    let prob = |site: &str, c: &str| -> f64 {
        body.iter()
            .find(|r| r[0] == site && r[1] == c)
            .map(|r| r[2].parse().unwrap())
            .unwrap()
    };
    assert!((prob("-1", "0") - 0.64).abs() < 1e-15);
    assert!((prob("0", "1") - 0.36).abs() < 1e-15);
    let total: f64 = body.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-15);
}

#[test]
fn wrapping_ring_is_refused_unless_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dist.csv");
    let dirac = spec("dirac.toml");
    let base = ["evolve", s(&dirac), "--steps", "20", "--init", "0", "--ring", "16", "--out", s(&out)];
    assert_eq!(qw(&base).status.code(), Some(1));
    let mut periodic = base.to_vec();
    periodic.push("--periodic");
    assert_eq!(qw(&periodic).status.code(), Some(0));
}

#[test]
fn dihedral_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = qw_in(
        d,
        &[
            "dihedral", "make", "--case", "generic", "--p", "0.8", "--q", "0.2", "--mu", "0.5", "--s1", "1", "--s2",
            "1", "--s3", "1", "--out", "full_graph.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(qw_in(d, &["check", "full_graph.toml"]).status.code(), Some(0));
    assert_eq!(qw_in(d, &["coarse-grain", "full_graph.toml", "--out", "cg.toml"]).status.code(), Some(0));
    assert_eq!(qw_in(d, &["parity", "cg.toml"]).status.code(), Some(0));
    let o = qw_in(d, &["canonical", "cg.toml"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("family: generic"));

    let cg = WalkSpecFile::read(&d.join("cg.toml")).unwrap();
    assert_eq!(cg.coin_dim, 2);
    assert_eq!(WalkSpecFile::parse(&cg.to_toml()).unwrap(), cg);
}

#[test]
fn constraint_violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = qw_in(
        dir.path(),
        &["dihedral", "make", "--case", "generic", "--p", "0.2", "--q", "0.8", "--mu", "0.5", "--out", "x.toml"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("x.toml").exists());
}

#[test]
fn enumeration_lists_the_full_graph() {
    let o = qw(&["dihedral", "enumerate", "--max-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("{a,a_inv,b,c,d,e}"));
    assert!(text.contains("{a,a_inv,b,c}"));
}

#[test]
fn hadamard_is_rejected_by_both_tests() {
    assert_eq!(qw(&["parity", s(&spec("hadamard.toml"))]).status.code(), Some(1));
    assert_eq!(qw(&["canonical", s(&spec("hadamard.toml"))]).status.code(), Some(1));
}

#[test]
fn classify_cylinder() {
    let o = qw(&["classify", s(&spec("cylinder.toml"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("direct sum of 2 monoidal walks"));
    assert_eq!(qw(&["classify", s(&spec("broken.toml"))]).status.code(), Some(1));
}

#[test]
fn solve_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let pres = "family=abelian(2,2;0); gens: g1=(1,0), g2=(0,1)";
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = qw(&["solve", pres, "--starts", "8", "--seed", "3", "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let (header, body) = rows(&dir.path().join("a.csv"));
    assert_eq!(header, ["g1_re", "g1_im", "g2_re", "g2_im", "residual"]);
    assert!(!body.is_empty());
    for r in body {
        assert!(r[4].parse::<f64>().unwrap() <= 1e-10);
    }
}

#[test]
fn out_dir_variable_places_relative_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qw"))
        .args(["dispersion", s(&spec("weyl.toml")), "--samples", "8", "--out", "nested/d.csv"])
        .env(qwalk_cli::OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("nested/d.csv").is_file());
}

#[test]
fn plot_script_reads_dispersion_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    qw(&["dispersion", s(&spec("weyl.toml")), "--samples", "8", "--out", s(&csv)]);
    let o = qw(&["plot-script", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let script = stdout(&o);
    assert!(script.contains("np.genfromtxt"));
    assert!(script.contains("(0.98, 0.36, 0.09)"));

    let not_disp = dir.path().join("dist.csv");
    qw(&["evolve", s(&spec("weyl.toml")), "--steps", "1", "--init", "0", "--out", s(&not_disp)]);
    assert_eq!(qw(&["plot-script", s(&not_disp)]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qw(&["check", "/no/such/file.toml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "presentation = 3\n").unwrap();
    assert_eq!(qw(&["check", s(&bad)]).status.code(), Some(2));
    assert_eq!(qw(&["--tol", "-1", "check", s(&spec("dirac.toml"))]).status.code(), Some(2));
}
