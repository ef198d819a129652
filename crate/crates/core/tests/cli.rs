use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_casimir-cyl");

const PLANE: &str = "\
geometry.kind = cylinder_plane
geometry.a = 1
geometry.d = 1
media.eps1 = 2
media.eps2 = 5
media.eps3 = 50
sweep.axis = d
sweep.grid = 1, 2
quadrature.rel_tol = 1e-5
output.precision = 8
";

fn run(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("CASIMIR_WORKERS", w),
        None => cmd.env_remove("CASIMIR_WORKERS"),
    };
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_writes_versioned_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "plane.cfg", PLANE);
    let out = dir.path().join("out.csv");
    let res = run(&["run", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# casimir-cyl scan v1; columns: sweep_param,sweep_value,energy_per_length"));
    assert_eq!(lines.next().unwrap(), "sweep_param,sweep_value,energy_per_length,est_error,n_cutoff,m_cutoff,quad_nodes,converged");
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("sweep_param")).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.len(), 8);
        assert_eq!(row[0], "d");
        // Declared precision survives a re-parse: 8 digits after the point.
        let mantissa = row[2].split('e').next().unwrap();
        assert_eq!(mantissa.split('.').nth(1).unwrap().len(), 8);
        let energy: f64 = row[2].parse().unwrap();
        assert!(energy > 0.0);
        assert_eq!(format!("{energy:.8e}"), row[2]);
        assert_eq!(row[7], "true");
    }
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "plane.cfg", &format!("{PLANE}output.format = json\n"));
    let res = run(&["run", &cfg], Some("1"));
    assert_eq!(res.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["curves"][0]["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["curves"][0]["sweep_param"], "d");
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "plane.cfg", PLANE);
    let one = run(&["run", &cfg], Some("1"));
    let three = run(&["run", &cfg], Some("3"));
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn config_errors_exit_with_two_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", &PLANE.replace("geometry.a = 1", "geometry.a = one"));
    let res = run(&["run", &cfg], None);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line 2: geometry.a"), "{err}");
    assert_eq!(run(&["preset", "fig9"], None).status.code(), Some(2));
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let touching = "geometry.kind = eccentric\ngeometry.a = 1\ngeometry.b = 2\nmedia.eps1 = 2\nmedia.eps2 = 5\nmedia.eps3 = 50\nsweep.axis = delta\nsweep.grid = 0, 1.2\n";
    let res = run(&["validate", &write(dir.path(), "t.cfg", touching)], None);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("touches"));

    let plasma = PLANE.replace("media.eps2 = 5", "media.eps2 = {plasma: 1}") + "quadrature.scheme = polar\n";
    let res = run(&["validate", &write(dir.path(), "p.cfg", &plasma)], None);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cartesian"));

    let fig1 = run(&["preset", "fig1", "--show"], None);
    let res = run(&["validate", &write(dir.path(), "fig1.cfg", &String::from_utf8(fig1.stdout).unwrap())], None);
    assert_eq!(res.status.code(), Some(0));
    let msg = String::from_utf8_lossy(&res.stdout);
    assert!(msg.contains("12 curves, 84 points"), "{msg}");
}

#[test]
fn unconverged_points_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let strict = PLANE.replace("quadrature.rel_tol = 1e-5", "quadrature.rel_tol = 1e-15\nquadrature.abs_floor = 0\nquadrature.max_escalations = 0");
    let res = run(&["run", &write(dir.path(), "s.cfg", &strict)], None);
    assert_eq!(res.status.code(), Some(1), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stdout).contains(",false"));
}
