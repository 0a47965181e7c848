use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dcurv::exit;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn dcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcurv")).args(args).output().expect("spawn dcurv")
}

fn code(o: &Output) -> u8 {
    o.status.code().expect("exit code") as u8
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn curvature_of_the_regular_tetrahedron() {
    let o = dcurv(&["curvature", path_str(&fixture("tetra.surf"))]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    let text = stdout(&o);
    // Every vertex: W = pi, A = sqrt(3)/4, K = 4 pi / sqrt(3).
    for i in 0..4 {
        let row = format!("{i} 3.14159265359e0 4.33012701892e-1 7.25519745694e0");
        assert!(text.lines().any(|l| l == row), "{text}");
    }
    assert!(text.contains("\nchi 2\n") && text.contains("sum_W 1.25663706144e1"));
}

#[test]
fn plain_and_canonical_files_agree() {
    let a = dcurv(&["curvature", path_str(&fixture("tetra.surf"))]);
    let b = dcurv(&["curvature", path_str(&fixture("tetra_plain.surf"))]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn curvature_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = dcurv(&["curvature", path_str(&fixture("octahedron.surf")), "--out", path_str(&out)]);
    assert_eq!(code(&o), exit::OK);
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(out).unwrap().contains("chi 2"));
}

#[test]
fn exit_codes() {
    let o = dcurv(&["curvature", path_str(&fixture("bad_length.surf"))]);
    assert_eq!(code(&o), exit::USAGE);
    assert!(stderr(&o).contains("line 8"));
    let o = dcurv(&["curvature", path_str(&fixture("bad_triangle.surf"))]);
    assert_eq!(code(&o), exit::INVALID_METRIC);
    assert!(stderr(&o).contains("face 0"));
    let o = dcurv(&["curvature", "/nonexistent/x.surf"]);
    assert_eq!(code(&o), exit::IO);
    let o = dcurv(&["curvature"]);
    assert_eq!(code(&o), exit::USAGE);
    let o = dcurv(&["roots", "--family", "tet", "--b0", "1.0", "--c0", "1.5"]);
    assert_eq!(code(&o), exit::USAGE);
    let o = dcurv(&[
        "uniformize",
        path_str(&fixture("perturbed_tetra.surf")),
        "--max-iter",
        "1",
        "--out-prefix",
        "/nonexistent/p",
    ]);
    assert_eq!(code(&o), exit::NOT_CONVERGED);
}

#[test]
fn failed_runs_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("p");
    let o = dcurv(&[
        "uniformize",
        path_str(&fixture("perturbed_tetra.surf")),
        "--max-iter",
        "1",
        "--out-prefix",
        path_str(&prefix),
    ]);
    assert_eq!(code(&o), exit::NOT_CONVERGED);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn uniformize_writes_factor_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("torus");
    let o = dcurv(&["uniformize", path_str(&fixture("torus.surf")), "--out-prefix", path_str(&prefix)]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("converged in "));
    let u = fs::read_to_string(dir.path().join("torus.u")).unwrap();
    assert_eq!(u.lines().filter(|l| !l.starts_with('#')).count(), 12);
    let report = fs::read_to_string(dir.path().join("torus.report")).unwrap();
    assert!(report.contains("\nchi 0\n") && report.contains("\niterations "));

    // Starting from the solution takes no further steps.
    let o = dcurv(&[
        "uniformize",
        path_str(&fixture("torus.surf")),
        "--init",
        path_str(&dir.path().join("torus.u")),
        "--out-prefix",
        path_str(&dir.path().join("again")),
    ]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("converged in 0 iterations"), "{}", stdout(&o));
}

#[test]
fn uniformize_default_prefix_drops_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.surf");
    fs::copy(fixture("perturbed_tetra.surf"), &input).unwrap();
    let o = dcurv(&["uniformize", path_str(&input), "--gauge", "pin"]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    assert!(dir.path().join("t.u").exists() && dir.path().join("t.report").exists());
}

#[test]
fn roots_of_the_tetrahedron_family() {
    let o = dcurv(&["roots", "--family", "tet", "--b0", "1.6", "--c0", "1.75"]);
    assert_eq!(stdout(&o), "0.000000000000\n");
    let o = dcurv(&["roots", "--family", "tet", "--b0", "2.2", "--c0", "2.35"]);
    let roots: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(roots.len(), 3);
    assert!((roots[0] + roots[2]).abs() < 1e-10 && roots[1] == 0.0);
}

#[test]
fn scan_covers_the_interval() {
    let o = dcurv(&["scan", "--family", "genus2", "--b0", "3.2", "--c0", "3.35", "--samples", "11"]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert_eq!(text.lines().filter(|l| l.ends_with("# boundary")).count(), 2);
}

#[test]
fn family_member_round_trips_through_curvature() {
    let o = dcurv(&["family", "--family", "tet", "--b0", "2.2", "--c0", "2.35", "--v", "-0.5"]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.surf");
    fs::write(&p, &o.stdout).unwrap();
    let o = dcurv(&["curvature", path_str(&p)]);
    assert_eq!(code(&o), exit::OK, "{}", stderr(&o));
}

#[test]
fn import_obj() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cube.surf");
    let o = dcurv(&["import-obj", path_str(&fixture("cube.obj")), path_str(&out)]);
    assert_eq!(code(&o), exit::OK);
    // Every diagonal of a cube face is exactly cocircular, so nothing is flagged.
    assert!(stderr(&o).is_empty(), "{}", stderr(&o));
    let o = dcurv(&["curvature", path_str(&out)]);
    assert!(stdout(&o).contains("\nchi 2\n"));

    let out = dir.path().join("bp.surf");
    let o = dcurv(&["import-obj", path_str(&fixture("bipyramid.obj")), path_str(&out)]);
    assert_eq!(code(&o), exit::OK);
    assert_eq!(stderr(&o).lines().filter(|l| l.starts_with("warning:")).count(), 3);
    let o = dcurv(&["curvature", path_str(&out)]);
    assert!(stdout(&o).contains("flips_performed 3"), "{}", stdout(&o));

    let o = dcurv(&["import-obj", path_str(&fixture("open.obj")), path_str(&dir.path().join("x"))]);
    assert_eq!(code(&o), exit::USAGE);
    assert!(stderr(&o).contains("vertices 4 and 5"));
    assert!(!dir.path().join("x").exists());
    let o = dcurv(&["import-obj", path_str(&fixture("quad.obj")), path_str(&dir.path().join("x"))]);
    assert_eq!(code(&o), exit::USAGE);
    assert!(stderr(&o).contains("line 10"));
}
