use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"{
    "schmidt": {"n_q": 4, "n_m": 3, "n_l": 2},
    "gamma_list": [0.0, 1.0],
    "power_sweep": {"min": 1e-6, "max": 0.2, "n_points": 3}
}"#;

fn twinbeam(dir: &Path, args: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, SMALL).unwrap();
    Command::new(env!("CARGO_BIN_EXE_twinbeam")).arg("--config").arg(&cfg).args(args).output().unwrap()
}

fn out_arg(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn sweep_writes_every_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "run");
    let o = twinbeam(tmp.path(), &["sweep", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for t in ["triplet", "beam", "spectral", "sfg", "hom", "failures"] {
        let text = fs::read_to_string(Path::new(&out).join(format!("{t}.csv"))).unwrap();
        assert!(text.starts_with("# twinbeam "), "{t}");
        assert!(text.lines().nth(2).unwrap() == format!("# table {t}"));
    }
    assert!(Path::new(&out).join("manifest.json").exists());
}

#[test]
fn out_of_range_gamma_is_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let o = twinbeam(tmp.path(), &["--gamma", "1.5", "sweep", "--out", &out_arg(tmp.path(), "x")]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gamma_list[0]") && err.contains("[0, 1]"), "{err}");
    assert!(!tmp.path().join("x").exists());
}

#[test]
fn unknown_figure_is_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let o = twinbeam(tmp.path(), &["figure", "22", "--out", &out_arg(tmp.path(), "x")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (out_arg(tmp.path(), "a"), out_arg(tmp.path(), "b"));
    assert!(twinbeam(tmp.path(), &["--threads", "1", "sweep", "--out", &a]).status.success());
    assert!(twinbeam(tmp.path(), &["--threads", "2", "sweep", "--out", &b]).status.success());
    for t in ["triplet", "beam", "spectral", "sfg", "hom"] {
        let x = fs::read(Path::new(&a).join(format!("{t}.csv"))).unwrap();
        let y = fs::read(Path::new(&b).join(format!("{t}.csv"))).unwrap();
        assert_eq!(x, y, "{t}");
    }
}

#[test]
fn profile_figures_write_per_gamma_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "fig");
    for id in ["10", "19"] {
        let o = twinbeam(tmp.path(), &["figure", id, "--out", &out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let pump = fs::read_to_string(Path::new(&out).join("figure10.csv")).unwrap();
    assert!(pump.lines().nth(3).unwrap().starts_with("omega_rel,incident,transferred_g0_p"));
    let hom = fs::read_to_string(Path::new(&out).join("figure19_g1.csv")).unwrap();
    assert_eq!(hom.lines().nth(3).unwrap(), "tau_s,value,term_coherent,term_pair,term_chaotic");
}

#[test]
fn hom_command_writes_curves_for_each_gamma() {
    let tmp = tempfile::tempdir().unwrap();
    let out = out_arg(tmp.path(), "hom");
    let o = twinbeam(tmp.path(), &["hom", "--power", "0.17", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for g in ["0", "1"] {
        let text = fs::read_to_string(Path::new(&out).join(format!("hom_g{g}.csv"))).unwrap();
        let rows: Vec<&str> = text.lines().skip(4).collect();
        assert!(rows.len() > 10);
        // far from zero delay the normalized coincidences return to one
        let edge: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
        assert!((edge - 1.0).abs() < 1e-2, "{edge}");
    }
}
