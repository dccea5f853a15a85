use std::path::Path;
use std::process::{Command, Output};

const QUAD: &str = r#"
[objective]
kind = "reference_quadratic"
dim = 5

[schedule]
epsilon0 = 0.5
gamma = 0.95

[algorithm]
horizon = 5000
initial = "lower"
"#;

fn pcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcm")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_is_reproducible_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), QUAD);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = pcm(&["run", "--config", &cfg, "--seed", "7", "--out-dir", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("iterations"));
    }
    let read = |p: &Path| std::fs::read(p.join("steps.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let c = dir.path().join("c");
    pcm(&["run", "--config", &cfg, "--seed", "8", "--out-dir", c.to_str().unwrap()]);
    assert_ne!(read(&a), read(&c));
}

#[test]
fn gamma_of_one_is_rejected_with_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &QUAD.replace("gamma = 0.95", "gamma = 1.0"));
    let o = pcm(&["run", "--config", &cfg, "--out-dir", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gamma"), "{err}");
    assert!(!dir.path().join("o").join("steps.csv").exists());
}

#[test]
fn digit_out_of_range_is_a_usage_error() {
    let o = pcm(&["mnist", "--digit", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("10"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[schedule]\ngama = 0.9\n");
    let o = pcm(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gama"));
}

#[test]
fn hinge_run_without_minimizer_points_to_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[data]\nsource = \"synth\"\nsynth_records = 50\nsynth_dim = 5\n[algorithm]\nhorizon = 100\n",
    );
    let o = pcm(&["run", "--config", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle"));

    let o = pcm(&["oracle", "--config", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let with_file = format!(
        "[objective]\nminimizer_file = {:?}\n[data]\nsource = \"synth\"\nsynth_records = 50\nsynth_dim = 5\n[algorithm]\nhorizon = 100\n",
        dir.path().join("minimizer.toml")
    );
    let cfg = write_config(dir.path(), &with_file);
    let o = pcm(&["run", "--config", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_flags_override_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), QUAD);
    let out = dir.path().join("s");
    let o = pcm(&[
        "sweep", "--config", &cfg, "--horizons", "512,1024,2048", "--seeds", "0,1,2,3,4", "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.starts_with("T,seed,final_regret,K,switches"));

    let o = pcm(&["sweep", "--config", &cfg, "--horizons", "512,1024", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
