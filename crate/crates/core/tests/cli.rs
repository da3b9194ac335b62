use std::path::Path;
use std::process::{Command, Output};

use capwave::cli::checkpoint;
use capwave::spectral::DEFAULT_DEALIAS;

fn capwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capwave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) {
    std::fs::write(dir.join("run.toml"), text).unwrap();
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_flat_writes_zero_checkpoint() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "[grid]\nN = 32\n");
    let out = capwave(tmp.path(), &["gen", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("A1_min = 1"));
    let cp = checkpoint::read(&tmp.path().join("out/initial.txt"), DEFAULT_DEALIAS).unwrap();
    assert_eq!(cp.state.g.max_abs(), 0.0);
    assert_eq!(cp.state.v.max_abs(), 0.0);
}

#[test]
fn gen_crest_with_smoothing() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 128\n[initial_data]\nkind = \"crest\"\nnu = 0.3\neta = 0.1\nmollify_eps = 0.05\n",
    );
    let out = capwave(tmp.path(), &["gen", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let cp = checkpoint::read(&tmp.path().join("out/initial.txt"), DEFAULT_DEALIAS).unwrap();
    let grid = cp.state.grid().clone();
    let want = capwave::state::gen_crest(
        &capwave::state::CrestSpec::new(0.3, 0.15, 0.0).unwrap(),
        &grid,
    )
    .unwrap();
    assert!((&cp.state.g - &want.g).max_abs() < 1e-15);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "[initial_data]\nkind = \"crest\"\neta = 0.1\n");
    let out = capwave(tmp.path(), &["gen", "run.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing field"));

    write_config(tmp.path(), "[grid]\nN = 32\nbogus = 1\n");
    assert_eq!(capwave(tmp.path(), &["gen", "run.toml"]).status.code(), Some(2));
    assert_eq!(capwave(tmp.path(), &["gen", "absent.toml"]).status.code(), Some(2));
    assert_eq!(capwave(tmp.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn simulate_flat_gives_zero_energies() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 32\n[params]\nT = 1.0\ndt = 0.1\noutput_every = 5\n",
    );
    let out = capwave(tmp.path(), &["simulate", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("out/energy.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().ends_with("blowup_q,residual_fund"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[6], "0");
        assert_eq!(cells[9], "0");
    }
    assert!(tmp.path().join("out/checkpoint_000010.txt").exists());
}

#[test]
fn simulate_one_linear_period() {
    let tmp = tempfile::tempdir().unwrap();
    let period = 2.0 * std::f64::consts::PI / (2.0f64 + 0.5 * 8.0).sqrt();
    write_config(
        tmp.path(),
        &format!(
            "[grid]\nN = 256\n[params]\nsigma = 0.5\ngravity = 1\nT = {period}\noutput_every = 500\n\
             [initial_data]\nkind = \"wave\"\nA = 1e-5\nk = 2\n[outputs]\ncheckpoints = false\n"
        ),
    );
    let out = capwave(tmp.path(), &["simulate", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let dev: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("final_g_deviation = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev <= 1e-6, "{dev}");
}

#[test]
fn simulate_blowup_exits_3_and_saves_state() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 128\n[params]\nsigma = 0.1\nblowup_ceiling = 1.0\n\
         [initial_data]\nkind = \"crest\"\nnu = 0.3\neta = 0.01\n",
    );
    let out = capwave(tmp.path(), &["simulate", "run.toml"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(tmp.path().join("out/last_state.txt").exists());
}

#[test]
fn overrides_and_checkpoint_restart() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 64\n[params]\nsigma = 0.2\ndt = 0.01\nT = 0.05\n\
         [initial_data]\nkind = \"wave\"\nA = 0.01\nk = 1\n",
    );
    let out = capwave(tmp.path(), &["simulate", "run.toml", "--outputs.dir=first"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first = tmp.path().join("first/checkpoint_000005.txt");
    assert!(first.exists());
    let restart = format!(
        "[grid]\nN = 64\n[params]\nsigma = 0.2\ndt = 0.01\nT = 0.05\n\
         [initial_data]\nkind = \"checkpoint\"\npath = \"{}\"\n[outputs]\ndir = \"second\"\n",
        first.display()
    );
    write_config(tmp.path(), &restart);
    let out = capwave(tmp.path(), &["simulate", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let cp = checkpoint::read(&tmp.path().join("second/checkpoint_000005.txt"), DEFAULT_DEALIAS).unwrap();
    assert!((cp.state.t - 0.1).abs() < 1e-15);

    let out = capwave(tmp.path(), &["simulate", "run.toml", "--grid.N=128"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_bit_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 64\n[params]\nsigma = 0.3\nT = 0.1\noutput_every = 4\n\
         [initial_data]\nkind = \"wave\"\nA = 0.05\nk = 2\n",
    );
    for dir in ["a", "b"] {
        let arg = format!("--outputs.dir={dir}");
        assert_eq!(capwave(tmp.path(), &["simulate", "run.toml", &arg]).status.code(), Some(0));
    }
    for name in ["energy.csv", "checkpoint_000000.txt"] {
        let a = std::fs::read(tmp.path().join("a").join(name)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn validate_passes_and_corruption_fails() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "");
    let out = capwave(tmp.path(), &["validate", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("PASS triple_identity")));
    assert!(!text.contains("FAIL"));

    let out = capwave(tmp.path(), &["validate", "run.toml", "--validate.corrupt=hilbert"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn study_convergence_order() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 64\n[params]\nsigma = 0.5\nT = 0.2\n\
         [initial_data]\nkind = \"wave\"\nA = 0.05\nk = 1\n\
         [study]\ndt = [0.02, 0.01, 0.005]\n",
    );
    let out = capwave(tmp.path(), &["study", "convergence", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("out/study_convergence.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("dt,error,observed_order"));
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    let order: f64 = last[2].parse().unwrap();
    assert!((order - 4.0).abs() <= 0.2, "{order}");
}

#[test]
fn study_crest_scaling_slope() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 16384\n[initial_data]\nkind = \"crest\"\nnu = 0.3\n",
    );
    let out = capwave(tmp.path(), &["study", "crest_scaling", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let slope: f64 = stdout(&out)
        .split_whitespace()
        .skip_while(|w| *w != "slope")
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope + 0.3).abs() <= 0.03, "{slope}");
    let csv = std::fs::read_to_string(tmp.path().join("out/study_crest_scaling.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn study_scale_symmetry_needs_no_gravity() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 64\n[params]\nsigma = 0.5\ngravity = 0\ndt = 0.005\nT = 0.1\n\
         [initial_data]\nkind = \"wave\"\nA = 0.05\nk = 1\n",
    );
    let out = capwave(tmp.path(), &["study", "scale_symmetry", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(tmp.path().join("out/study_scale_symmetry.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert!(row[1].parse::<f64>().unwrap() <= 1e-6);

    let out = capwave(tmp.path(), &["study", "scale_symmetry", "run.toml", "--params.gravity=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn study_mollifier_delta_rows() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(
        tmp.path(),
        "[grid]\nN = 128\n[params]\nsigma = 0.1\neps_visc = 0.01\ndt = 0.002\nT = 0.1\n\
         [initial_data]\nkind = \"crest\"\nnu = 0.3\neta = 0.3\nalpha0 = 1.0\n\
         [study]\ndelta = [0.08, 0.04]\n",
    );
    let out = capwave(tmp.path(), &["study", "mollifier_delta", "run.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("decreasing in delta: true"));
}
