use std::path::Path;
use std::process::{Command, Output};

use slicereg::geometry::sample_ball;
use slicereg::{Quaternion, RegularSeries};

/// The Moebius example map written in the expression language.
const EXAMPLE_ONE: &str = "star(recip(sum((1,0,0,0), rmul(q, (0,0.5,0,0)))), sum(q, (0,-0.5,0,0)))";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicereg"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn examples_table_passes() {
    let o = run(&["examples"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.starts_with("boundary Schwarz quantity:"))
        .unwrap();
    assert!(
        row.contains("computed 1.666") && row.contains("expected 5/3") && row.ends_with("PASS")
    );
    assert!(text
        .lines()
        .any(|l| l.starts_with("bracket:") && l.contains("1.3333333333333333i")));
    assert!(text
        .lines()
        .any(|l| l.starts_with("fixed-point quantity:") && l.contains("expected 8/3")));
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 11);
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let o = run(&[
            "verify",
            "all",
            "--seed",
            "1",
            "--samples",
            "40",
            "--functions",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push((std::fs::read(&path).unwrap(), stdout(&o)));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["pass"], true);
    let keys = [
        "suite",
        "config",
        "samples",
        "min_margin",
        "violations",
        "witnesses",
        "pass",
    ];
    let at: Vec<usize> = keys
        .iter()
        .map(|k| text.find(&format!("\"{k}\"")).unwrap())
        .collect();
    assert!(
        at.windows(2).all(|w| w[0] < w[1]),
        "top-level keys out of order"
    );
}

#[test]
fn julia_suite_on_moebius_map() {
    let o = run(&[
        "verify",
        "julia",
        "--k",
        "2",
        "--fn",
        "moebius((0.5,0,0,0))",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().last().unwrap().ends_with("PASS"));
}

#[test]
fn lindelof_suite_with_many_samples() {
    let o = run(&["verify", "lindelof", "--samples", "10000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("min margin"));
}

#[test]
fn halfspace_suites_take_halfspace_maps() {
    let o = run(&[
        "verify",
        "halfspace",
        "--fn",
        "sum(rmul(q,(2,0,0,0)), (0,1,0,0))",
        "--samples",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&[
        "verify",
        "rigidity",
        "--fn",
        "cayley_conj(q)",
        "--samples",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn hypothesis_violations_exit_two() {
    let o = run(&[
        "verify",
        "schwarz_pick",
        "--fn",
        "sum(q, (1,0,0,0))",
        "--samples",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hypothesis"));
    let o = run(&[
        "verify",
        "julia",
        "--fn",
        "moebius((0.5,0,0,0))",
        "--k",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_report_columns() {
    let o = run(&["eval", "--fn", "star(q q)", "--at", "0,0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 8"), "{}", stderr(&o));
    let o = run(&["eval", "--fn", "moebius((0.5,0,0,0))", "--at", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "halfspace", "--fn", "moebius((0.5,0,0,0))"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cayley_conj"));
}

#[test]
fn eval_prints_values_and_jets() {
    let o = run(&["eval", "--fn", "q", "--at", "1,0,0,0"]);
    assert_eq!(stdout(&o), "f(q) = 1\nf'(q) = 1\n");
    let o = run(&["eval", "--fn", "pow(2)", "--at", "0,0,1,0", "--jet"]);
    assert!(stdout(&o).contains("A = [-1, 0, 1]"), "{}", stdout(&o));
    let o = run(&["eval", "--fn", "cayley_conj(q)", "--at", "2,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(
        first.starts_with("f(q) = 1.99999999999999") && first.ends_with("i"),
        "{first}"
    );
}

fn dump(expr: &str, path: &Path) {
    let o = run(&[
        "eval",
        "--fn",
        expr,
        "--at",
        "0,0,0,0",
        "--dump-coeffs",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn dumped_example_fixes_j() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex1.json");
    dump(EXAMPLE_ONE, &path);
    let o = run(&[
        "eval",
        "--fn",
        &format!("coeffs({})", path.display()),
        "--at",
        "0,0,1,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("f(q) = j\n"), "{}", stdout(&o));
}

#[test]
fn dumped_coefficients_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        EXAMPLE_ONE,
        "star(moebius((0,0.3,-0.2,0.1)), rmul(pow(3), (0,0,0,1)))",
        "sum(pow(2), recip(sum((2,0,0,0), q)))",
    ];
    for (n, expr) in cases.iter().enumerate() {
        let path = dir.path().join(format!("f{n}.json"));
        dump(expr, &path);
        let first = RegularSeries::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = dir.path().join(format!("g{n}.json"));
        dump(&format!("coeffs({})", path.display()), &again);
        let second = RegularSeries::from_json(&std::fs::read_to_string(&again).unwrap()).unwrap();
        for q in sample_ball(n as u64, 100).unwrap() {
            let (a, b): (Quaternion, Quaternion) = (first.eval(q), second.eval(q));
            assert!(
                (a - b).norm() <= 1e-14 * a.norm().max(1e-300),
                "{expr} at {q}"
            );
        }
    }
}
