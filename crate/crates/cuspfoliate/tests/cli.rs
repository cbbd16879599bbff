//! End-to-end tests driving the compiled binary on small jobfiles.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn write_job(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspfoliate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn integrable_form_passes_and_contact_form_fails() {
    let dir = TempDir::new().unwrap();
    let good = write_job(
        &dir,
        "good.toml",
        r#"
variables = ["x", "y", "z"]

[params]
form = "d(z^2 + (y^2 - x^3)^2)"
"#,
    );
    let out = run(&["check-integrable", &good]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("check integrable: yes"));

    let contact = write_job(
        &dir,
        "contact.toml",
        r#"
variables = ["x", "y", "z"]

[params]
form = "y*dx + dz"
"#,
    );
    let out = run(&["check-integrable", &contact]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("check integrable: no"));
    assert!(text.contains("obstruction omega ^ d(omega) = (-1)*dx^dy^dz"));
}

#[test]
fn logarithmic_quotient_is_reported() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "log.toml",
        r#"
variables = ["x", "y"]

[params]
form = "-3*y*dx + 2*x*dy"
surface = "y^2 + x^3"
"#,
    );
    let out = run(&["check-logarithmic", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check logarithmic: yes"));
    assert!(text.contains("eta = (omega ^ d(surface)) / surface = (-6)*dx^dy"));

    let bad = write_job(
        &dir,
        "notlog.toml",
        r#"
variables = ["x", "y"]

[params]
form = "dx"
surface = "y^2 + x^3"
"#,
    );
    let out = run(&["check-logarithmic", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check logarithmic: no"));
}

#[test]
fn saito_decompose_reports_the_cusp_triple() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "saito.toml",
        r#"
variables = ["x", "y"]

[params]
form = "-3*y*dx + 2*x*dy"
surface = "y^2 + x^3"
"#,
    );
    let out = run(&["saito-decompose", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check decomposition identity: yes"));
    assert!(text.contains("g = 3*x^2"));
    assert!(text.contains("h = 3*y"));
    assert!(text.contains("alpha = (6)*dy"));
    assert!(text.contains("direction = (1, 0)"));
}

#[test]
fn saito_basis_cofactor_is_a_unit_for_the_cusp() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "basis.toml",
        r#"
variables = ["x", "y"]

[definitions]
f = "y^2 + x^3"

[params]
surface = "f"
forms = ["d(f)", "-3*y*dx + 2*x*dy"]
"#,
    );
    let out = run(&["saito-basis", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check wedge divisible by surface^1: yes"));
    assert!(text.contains("check cofactor is a unit: yes"));
    assert!(text.contains("cofactor = 6"));

    // x*df and y*df wedge to a multiple of f^2, not a unit times f
    let squashed = write_job(
        &dir,
        "squashed.toml",
        r#"
variables = ["x", "y"]

[definitions]
f = "y^2 + x^3"

[params]
surface = "f"
forms = ["x*d(f)", "y*d(f)"]
"#,
    );
    let out = run(&["saito-basis", &squashed]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("the candidates wedge to zero"));
}

#[test]
fn cusp_decompose_normalizes_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "cusp.toml",
        r#"
variables = ["x", "y", "z"]

[definitions]
phi = "x^2 - y^3"
f = "z^2 + phi"
omega2 = "z*d(phi) - 2*phi*d(z)"

[params]
phi = "phi"
form = "d(f) + 3*omega2"
"#,
    );
    let out = run(&["cusp-decompose", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check cleared identity: yes"));
    assert!(text.contains("check unit normalization: yes"));
    assert!(text.contains("unit = 1"));
    assert!(text.contains("h = 3"));
    assert!(text.contains("residual = 0"));
}

#[test]
fn cusp_decompose_rejects_a_unit_order_violation() {
    let dir = TempDir::new().unwrap();
    // omega = z * d(z^2 + x*y) vanishes on z = 0, so the would-be unit does
    let job = write_job(
        &dir,
        "order.toml",
        r#"
variables = ["x", "y", "z"]

[params]
phi = "x*y"
form = "z*d(z^2 + x*y)"
"#,
    );
    let out = run(&["cusp-decompose", &job]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check unit order condition: no"));
}

#[test]
fn assemble_builds_an_integrable_logarithmic_generator() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "assemble.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 3
roots = ["1"]
mults = [2]

[g]
terms = [[0, 0, "1"]]
"#,
    );
    let out = run(&["assemble", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check integrable: yes"));
    assert!(text.contains("check logarithmic: yes"));
    assert!(text.contains("Psi = y^2 - x^3"));
    assert!(text.contains("surface = z^2 + y^4 - 2*x^3*y^2 + x^6"));
    assert!(text.contains("singular locus = the origin; {y^2 - x^3 = 0, z = 0}"));
}

#[test]
fn resolve_terminates_in_a_smooth_chart_for_the_double_cusp() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "resolve.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 3
roots = ["1"]
mults = [2]

[g]
terms = [[0, 0, "1"]]
"#,
    );
    let out = run(&["resolve", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("final surfaces = 1 + z^2"));
    assert!(text.contains("check step I surface identity: yes"));
    assert!(text.contains("check step II generator bracket: yes"));
    assert!(text.contains("check step III surface identity (root 1): yes"));
    assert!(!text.contains(": no"), "all identity checks must hold:\n{text}");
}

#[test]
fn resolve_clears_the_odd_axis_factor_when_the_second_weight_is_trivial() {
    let dir = TempDir::new().unwrap();
    // p = 2, q = 4 gives m = 1, n = 0, so the step-I prefactor needs the
    // extra clearing identity
    let job = write_job(
        &dir,
        "flat.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 4
roots = ["1"]
mults = [2]
"#,
    );
    let out = run(&["resolve", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check step I generator bracket (cleared by y): yes"));
    assert!(!text.contains(": no"), "all identity checks must hold:\n{text}");
}

#[test]
fn resolve_lists_every_parity_obstruction() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "parity.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 5
roots = ["-1", "-2"]
mults = [5, 10]
"#,
    );
    let out = run(&["resolve", &job]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("step II needs Q even, got Q = 69"));
    assert!(err.contains("step III needs an even multiplicity at root 1, got d_1 = 5"));
    assert!(!err.contains("d_2"), "even multiplicities are not violations");
}

#[test]
fn gs_condition_verdicts_follow_the_weighted_valuation() {
    let dir = TempDir::new().unwrap();
    let failing = write_job(
        &dir,
        "gs_fail.toml",
        r#"
variables = ["x", "y", "z"]

[g]
terms = [[2, 0, "1"]]

[params]
r = 8
"#,
    );
    let out = run(&["gs-condition", &failing]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check gs condition: no (nu = 2 < 3)"));

    // r from the [spec] table; constant G has valuation 0 >= (2-2)/2
    let passing = write_job(
        &dir,
        "gs_pass.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 3
roots = ["1"]
mults = [2]

[g]
terms = [[0, 0, "1"]]
"#,
    );
    let out = run(&["gs-condition", &passing]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("check gs condition: yes (nu = 0 >= 0)"));
}

#[test]
fn valuation_and_weights_commands_report_exact_values() {
    let dir = TempDir::new().unwrap();
    let val = write_job(
        &dir,
        "val.toml",
        r#"
variables = ["x", "y"]

[params]
poly = "y^2 - x^3"
p = 2
q = 3
"#,
    );
    let out = run(&["valuation", &val]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("valuation = 6"));

    let wjob = write_job(
        &dir,
        "weights.toml",
        r#"
variables = ["x", "y", "z"]

[params]
poly = "z^2 + x^3*y + x*y^3"
"#,
    );
    let out = run(&["weights", &wjob]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("weights = (1, 1, 2) of degree 4"));

    let inhomogeneous = write_job(
        &dir,
        "nohom.toml",
        r#"
variables = ["x", "y"]

[params]
poly = "x + y + x^2"
"#,
    );
    let out = run(&["weights", &inhomogeneous]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check quasihomogeneous: no"));
}

#[test]
fn loray_bound_is_strict() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "loray.toml",
        r#"
variables = ["x", "y"]

[params]
p = 6
q = 3
delta = "x*y"
"#,
    );
    let out = run(&["loray-2d", &job]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check loray condition: no (nu = 3 <= 10/3)"));

    let vacuous = write_job(
        &dir,
        "loray0.toml",
        r#"
variables = ["x", "y"]

[params]
p = 6
q = 3
"#,
    );
    let out = run(&["loray-2d", &vacuous]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("check loray condition: yes (nu = +infinity > 10/3)"));
}

#[test]
fn json_report_round_trips_through_verify_report() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "cusp.toml",
        r#"
variables = ["x", "y", "z"]

[definitions]
phi = "x^2 - y^3"
f = "z^2 + phi"
omega2 = "z*d(phi) - 2*phi*d(z)"

[params]
phi = "phi"
form = "d(f) + 3*omega2"
"#,
    );
    let out = run(&["cusp-decompose", &job, "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["command"], "cusp-decompose");
    assert_eq!(parsed["inputs"]["k"], "2");
    assert!(parsed["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["holds"] == true));

    let saved = dir.path().join("report.json");
    std::fs::write(&saved, &text).unwrap();
    let out = run(&[
        "cusp-decompose",
        &job,
        "--verify-report",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("verify-report: match"));

    // tampering with a recorded object forces a mismatch
    let tampered = text.replace("\"canonical\": \"3\"", "\"canonical\": \"4\"");
    assert_ne!(tampered, text);
    std::fs::write(&saved, &tampered).unwrap();
    let out = run(&[
        "cusp-decompose",
        &job,
        "--verify-report",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("verify-report: MISMATCH"));
}

#[test]
fn definitions_expand_inside_each_other_in_any_order() {
    let dir = TempDir::new().unwrap();
    let job = write_job(
        &dir,
        "defs.toml",
        r#"
variables = ["x", "y"]

[definitions]
cusp = "square - cube"
square = "y^2"
cube = "x^3"

[params]
poly = "cusp"
"#,
    );
    let out = run(&["weights", &job]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("input poly: y^2 - x^3"));

    let cyclic = write_job(
        &dir,
        "cyclic.toml",
        r#"
variables = ["x", "y"]

[definitions]
a = "b + x"
b = "a + y"

[params]
poly = "a"
"#,
    );
    let out = run(&["weights", &cyclic]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cyclic"));
}

#[test]
fn bad_inputs_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let missing_param = write_job(
        &dir,
        "missing.toml",
        r#"
variables = ["x", "y"]
"#,
    );
    let out = run(&["check-integrable", &missing_param]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("params.form is required"));

    let syntax = write_job(
        &dir,
        "syntax.toml",
        r#"
variables = ["x", "y"]

[params]
form = "dx + (y*"
"#,
    );
    let out = run(&["check-integrable", &syntax]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 1"));

    let unknown_key = write_job(
        &dir,
        "unknown.toml",
        r#"
variables = ["x", "y"]

[params]
formula = "dx"
"#,
    );
    let out = run(&["check-integrable", &unknown_key]);
    assert_eq!(code(&out), 2);

    let out = run(&["check-integrable", "/nonexistent/job.toml"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot read"));

    let duplicate_root = write_job(
        &dir,
        "dup.toml",
        r#"
variables = ["x", "y", "z"]

[spec]
p = 2
q = 3
roots = ["1", "1"]
mults = [2, 2]
"#,
    );
    let out = run(&["resolve", &duplicate_root]);
    assert_eq!(code(&out), 2);
}
