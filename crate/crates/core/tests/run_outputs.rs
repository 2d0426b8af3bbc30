use std::fs;
use std::path::Path;

use nf_aliaser::config::{load_config, parse_config, RunConfig};
use nf_aliaser::output::sha256_hex;
use nf_aliaser::run::run;
use nf_aliaser::{Error, Exec};

const SMALL: &str = r#"{
    "wave": {"lambda": 0.5},
    "tx": {"center": [60, 0], "axes": [[1, 0]], "counts": [16], "spacings_lambda": [2]},
    "rx": {"center": [0, 60], "axes": [[0, 1]], "counts": [16], "spacings_lambda": [2]},
    "scene": {"scatterer": [60, 60], "reflectivity_re": 1, "reflectivity_im": 0.5},
    "grid": {"min": [20, 20], "max": [100, 100], "resolution": [33, 33]},
    "outputs": ["partial_tx", "partial_rx", "image", "mask", "spectrum", "sweep"],
    "thresholds": {"oversample": 4},
    "sweep": {"param": "spacing", "values": [8, 16]}
}"#;

fn small() -> RunConfig {
    parse_config(SMALL).unwrap()
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap()
}

#[test]
fn manifest_lists_every_file_with_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(&small(), dir.path(), Exec::default()).unwrap();
    let names: Vec<&str> = m.files.iter().map(|f| f.file.as_str()).collect();
    for expected in [
        "partial_tx.csv",
        "partial_tx.pgm",
        "partial_rx.csv",
        "image.csv",
        "image.pgm",
        "mask.csv",
        "mask.pgm",
        "mask_overlay.pgm",
        "spectrum.csv",
        "sweep.csv",
        "mask_spacing_0.csv",
        "mask_spacing_1.pgm",
    ] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    for f in &m.files {
        let bytes = read(dir.path(), &f.file);
        assert_eq!(bytes.len(), f.bytes);
        assert_eq!(sha256_hex(&bytes), f.sha256);
    }
    let manifest: serde_json::Value = serde_json::from_slice(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["tool"], "nf-aliaser");
    // resolved: center converted to origin, defaults filled in
    assert_eq!(manifest["config"]["tx"]["origin"][0], 45.0);
    assert_eq!(manifest["config"]["thresholds"]["floor_db"], -40.0);
    assert_eq!(manifest["config"]["thresholds"]["oversample"], 4);
}

#[test]
fn csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    run(&small(), dir.path(), Exec::default()).unwrap();
    let text = String::from_utf8(read(dir.path(), "image.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let body: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert!(lines[0].starts_with("# nf-aliaser"));
    assert_eq!(body[0], "index,x_lambda,y_lambda,z_lambda,re,im,magnitude_db,excluded");
    assert_eq!(body.len(), 1 + 33 * 33);
    let first: Vec<&str> = body[1].split(',').collect();
    assert_eq!(first[0], "0");
    let x: f64 = first[1].parse().unwrap();
    assert!((x - (20.0 + 80.0 / 66.0)).abs() < 1e-12);
    let mantissa = first[4].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    // row-major, x fastest
    let second: Vec<&str> = body[2].split(',').collect();
    assert_eq!(second[2], first[2]);

    let mask = String::from_utf8(read(dir.path(), "mask.csv")).unwrap();
    let header = mask.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "index,x_lambda,y_lambda,z_lambda,combined,excluded,tx_axis0,rx_axis0");

    let sweep = String::from_utf8(read(dir.path(), "sweep.csv")).unwrap();
    let rows: Vec<&str> = sweep.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);

    let spectrum = String::from_utf8(read(dir.path(), "spectrum.csv")).unwrap();
    assert!(spectrum.lines().any(|l| l == "wavenumber_rad_per_lambda,magnitude_db"));
}

#[test]
fn pgm_layout() {
    let dir = tempfile::tempdir().unwrap();
    run(&small(), dir.path(), Exec::default()).unwrap();
    let img = read(dir.path(), "image.pgm");
    let head = b"P5\n33 33\n255\n";
    assert_eq!(&img[..head.len()], head);
    assert_eq!(img.len(), head.len() + 33 * 33);
    assert!(img[head.len()..].contains(&255));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ma = run(&small(), a.path(), Exec::Sequential).unwrap();
    let mb = run(&small(), b.path(), Exec::Parallel).unwrap();
    assert_eq!(ma.to_json(), mb.to_json());
    assert_eq!(read(a.path(), "manifest.json"), read(b.path(), "manifest.json"));
}

#[test]
fn config_errors_are_categorised() {
    let dir = tempfile::tempdir().unwrap();
    let missing = load_config(&dir.path().join("nope.json")).unwrap_err();
    assert!(matches!(missing, Error::Io { .. }));
    assert_eq!(missing.category(), "io");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"wave\": {\"lambda\": 1.0},\n  oops\n}").unwrap();
    match load_config(&bad).unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 3),
        e => panic!("unexpected {e}"),
    }

    let neg = SMALL.replace(r#""lambda": 0.5"#, r#""lambda": -1"#);
    let e = parse_config(&neg).unwrap_err();
    assert_eq!(e.category(), "config");
    assert!(e.to_string().contains("wave"), "{e}");
}

#[test]
fn run_into_unwritable_location_fails_with_io() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    let e = run(&small(), &file.join("sub"), Exec::default()).unwrap_err();
    assert_eq!(e.category(), "io");
}
