//! End-to-end runs of the sweep driver on reduced configurations.

use twinbeam_core::experiment::{parse_config, run_sweep, write_tables, Stages, SweepContext};
use twinbeam_core::Field;

const SINGLE: &str = r#"{
    "schmidt": {"n_q": 1, "n_m": 1, "n_l": 1, "transverse_degeneracy": 1},
    "gamma_list": [0.0, 1.0],
    "power_sweep": {"min": 0.1, "max": 0.1, "n_points": 1}
}"#;

#[test]
fn single_triplet_beam_is_the_triplet() {
    let cfg = parse_config(SINGLE).unwrap();
    let res = run_sweep(&cfg).unwrap();
    assert!(!res.is_partial(), "{:?}", res.failures);
    assert_eq!(res.rows.len(), 2);
    let ctx = SweepContext::new(&cfg).unwrap();
    for row in &res.rows {
        let tb = ctx.state(row.gamma, row.power).unwrap();
        let st = tb.dominant_state();
        for f in Field::ALL {
            let beam = row.beam.field(f);
            assert!((beam.mean / st.intensity(f) - 1.0).abs() < 1e-12);
            assert!((beam.mean - row.triplet.intensity[f.index()]).abs() <= 1e-12 * beam.mean);
        }
        assert_eq!(row.beam.r_si, row.triplet.r_si);
    }
}

#[test]
fn tables_are_byte_identical_across_directories() {
    let mut cfg = parse_config(SINGLE).unwrap();
    cfg.schmidt.n_q = 4;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        cfg.outputs.directory = dir.to_string_lossy().into_owned();
        let res = twinbeam_core::experiment::run_sweep_with(&cfg, &cfg.gamma_list.clone(), Stages::ALL).unwrap();
        write_tables(&res.tables(), dir, &res.provenance, res.cells(), res.failures.len()).unwrap();
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "manifest.json"));
    assert!(names.iter().any(|n| n == "hom.csv"));
    for n in names.iter().filter(|n| n.to_string_lossy().ends_with(".csv")) {
        let x = std::fs::read(a.path().join(n)).unwrap();
        let y = std::fs::read(b.path().join(n)).unwrap();
        assert_eq!(x, y, "{n:?}");
    }
}
