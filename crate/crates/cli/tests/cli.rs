use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gnd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnd")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn run_on(sub: &str, file: &str, extra: &[&str]) -> Output {
    let input = data(file);
    let mut args = vec![sub, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    gnd(&args)
}

#[test]
fn gnd_on_node_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("node.cert");
    let o = run_on("gnd", "node.txt", &["--output", cert.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("[gpolys]"));
    let report = stderr(&o);
    assert!(report.contains("status = ok"));
    assert!(report.contains(&format!("output = {}", cert.display())));
    for name in ["adjugate", "membership", "lift", "residuals", "factorization", "smoothness"] {
        assert!(report.contains(&format!("{name} | pass")), "{report}");
    }

    let v = gnd(&["verify", "--input", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
}

#[test]
fn reports_are_deterministic() {
    let a = run_on("gnd", "node.txt", &[]);
    let b = run_on("gnd", "node.txt", &[]);
    assert_eq!(stdout(&a), stdout(&b));
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("elapsed_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stderr(&a)), strip(stderr(&b)));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("node.cert");
    let o = run_on("gnd", "node.txt", &["--output", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&cert).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let at = lines.iter().position(|l| l == "[gpolys]").unwrap() + 1;
    lines[at].push_str(" + x^3");
    fs::write(&cert, lines.join("\n") + "\n").unwrap();

    let v = gnd(&["verify", "--input", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(5));
    let err = stderr(&v);
    assert!(err.contains("membership | fail"), "{err}");
    assert!(err.contains("failed checks:") && err.contains("membership"), "{err}");
}

#[test]
fn lowered_precision_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("node.cert");
    run_on("gnd", "node.txt", &["--output", cert.to_str().unwrap()]);
    let v = gnd(&["verify", "--input", cert.to_str().unwrap(), "--precision", "8"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stderr(&v).contains("residuals | pass | 8 |"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let o = gnd(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn exit_codes_by_failure_class() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };

    let bad = write("bad.txt", "[field]\nQ\n[variables]\nbase = x\nalgebra = Y1, Y2\n[ideal]\nY1*Y3 - x\n");
    let o = gnd(&["groebner", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Y3"));

    let syntax = write("syntax.txt", "[field]\nQ\n[variables]\nbase = x\n[ideal]\nx +* 1\n");
    let o = gnd(&["groebner", "--input", syntax.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 6"));

    // the node needs more than eight coefficients
    let o = run_on("gnd", "node.txt", &["--precision", "8"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("insufficient precision"));

    let o = run_on("gnd", "node.txt", &["--precision", "40"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run_on("smooth-locus", "node.txt", &["--subset-budget", "0"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let missing = dir.path().join("missing.txt");
    let o = gnd(&["groebner", "--input", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn groebner_order_flag() {
    let o = run_on("groebner", "twisted_cubic.txt", &["--order", "degrevlex"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[order]\ndegrevlex"));
    let lex = stdout(&run_on("groebner", "twisted_cubic.txt", &[]));
    assert!(lex.contains("y^3 - z^2"));
    assert_ne!(out, lex);
}

#[test]
fn lift_reaches_target() {
    let o = run_on("lift", "sqrt.txt", &["--precision", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("+ O(x^32)"));
    assert!(out.contains("trace = 1, 2, 4, 8, 16, >= 32"));
    assert!(out.contains("Y = 1 + 1/2*x - 1/8*x^2"));
}

#[test]
fn remaining_subcommands_run() {
    for (sub, file, needle) in [
        ("quotient", "twisted_cubic.txt", "x^2 - y"),
        ("smooth-locus", "node.txt", "x^2"),
        ("weierstrass", "weierstrass.txt", "wpoly = s + t^2"),
        ("linear-factor", "linear.txt", "-x; 1"),
        ("module-iso", "module_iso.txt", "determinant | X1_1*W + 4"),
    ] {
        let o = run_on(sub, file, &[]);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", stderr(&o));
        assert!(stdout(&o).contains(needle), "{sub}: {}", stdout(&o));
        assert!(stderr(&o).contains(&format!("subcommand = {sub}")));
    }
}

#[test]
fn reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_gnd"))
        .arg("groebner")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"[field]\nF(7)\n[variables]\nbase = x, y\n[ideal]\nx^2 - y\nx*y - 1\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("base = F(7)"));
}
