use std::process::Command;

use faddeeva_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("faddeeva").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[test]
fn eval_prints_seventeen_digits() {
    let (code, out, _) = call(&["eval", "--x", "1", "--y", "1"]);
    assert_eq!(code, 0);
    let p = faddeeva::Params64::default();
    let w = faddeeva::eval_w(faddeeva::Complex64::new(1.0, 1.0), &p).unwrap();
    let vals: Vec<f64> = out.lines().map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals, vec![w.re, w.im]);
    assert!(out.starts_with("re_w 3.0474420525691259e-1\n"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = call(&["eval", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["grid", "--x-min", "0", "--x-max", "1", "--x-step", "0", "--y-list", "1"]).0, 2);
    assert_eq!(call(&["bench", "--impls", "eq2", "--size", "16"]).0, 2);
    assert_eq!(call(&["validate", "--digits", "10"]).0, 2);
}

#[test]
fn domain_errors_exit_one() {
    let (code, _, err) = call(&["eval", "--x", "0", "--y", "-30"]);
    assert_eq!(code, 1);
    assert!(err.contains("-3e1"), "{err}");
    assert_eq!(call(&["coeffs", "--tau-m", "-1", "--n", "3"]).0, 1);
    let voigt = ["voigt", "--center", "0", "--doppler-hwhm", "0", "--lorentz-hwhm", "0"];
    assert_eq!(call(&[&voigt[..], &["--nu-min", "0", "--nu-max", "1", "--nu-step", "1"]].concat()).0, 1);
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["eval", "grid", "validate", "bench", "coeffs", "voigt"] {
        let (code, out, _) = call(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub}");
        assert!(out.contains("Usage"), "{sub}");
    }
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn grid_csv_round_trips_and_is_reproducible() {
    let args = ["grid", "--x-min", "-2", "--x-max", "2", "--x-step", "0.25", "--y-list", "0.001,1,-0.5"];
    let (code, out, _) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(out, call(&args).1);
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["x", "y", "re_w", "im_w"]);
    let p = faddeeva::Params64::default();
    let mut rows = 0;
    for rec in rd.records() {
        let r: Vec<f64> = rec.unwrap().iter().map(|v| v.parse().unwrap()).collect();
        let w = faddeeva::eval_w(faddeeva::Complex64::new(r[0], r[1]), &p).unwrap();
        assert_eq!((r[2].to_bits(), r[3].to_bits()), (w.re.to_bits(), w.im.to_bits()));
        rows += 1;
    }
    assert_eq!(rows, 17 * 3);
    assert!(out.starts_with("# schema=faddeeva-grid/1"));
}

#[test]
fn grid_raw_and_json_agree_with_csv() {
    let base = ["grid", "--x-min", "0", "--x-max", "1", "--x-step", "0.5", "--y-list", "2"];
    let dir = tempfile::tempdir().unwrap();
    let raw_path = dir.path().join("g.bin");
    let raw_arg = raw_path.to_str().unwrap();
    assert_eq!(call(&[&base[..], &["--format", "raw", "--out", raw_arg]].concat()).0, 0);
    let bytes = std::fs::read(&raw_path).unwrap();
    assert_eq!(bytes.len(), 3 * 4 * 8);
    let vals: Vec<f64> = bytes.chunks(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    assert_eq!(&vals[..2], &[0.0, 2.0]);

    let (_, json, _) = call(&[&base[..], &["--format", "json"]].concat());
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["schema"], "faddeeva-grid/1");
    let pts = doc["points"].as_array().unwrap();
    assert_eq!(pts.len(), 3);
    for (k, p) in pts.iter().enumerate() {
        let got = [&p["x"], &p["y"], &p["re_w"], &p["im_w"]].map(|v| v.as_f64().unwrap());
        assert_eq!(got.as_slice(), &vals[4 * k..4 * k + 4]);
    }
}

#[test]
fn out_dir_variable_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_faddeeva"))
        .args(["voigt", "--center", "0", "--doppler-hwhm", "1", "--lorentz-hwhm", "0.5"])
        .args(["--nu-min", "-1", "--nu-max", "1", "--nu-step", "0.5", "--out", "profile.csv"])
        .env(faddeeva_cli::OUT_DIR_ENV, dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("nu,value\n"));
}

#[test]
fn coeffs_match_the_preset_table() {
    let (code, out, _) = call(&["coeffs", "--tau-m", "9", "--n", "12", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got: Vec<f64> = doc["coefficients"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(got, faddeeva::Params64::from_preset(faddeeva::Preset::Fast).coefficients());
}

#[test]
fn validate_reports_and_gates() {
    let grid = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(grid.path(), r#"{"x_values": [-3, 0.5, 4], "y_values": [0.01, 1.5]}"#).unwrap();
    let g = grid.path().to_str().unwrap();
    let (code, out, _) = call(&["validate", "--impl", "eq3", "--preset", "fast", "--grid", g]);
    assert_eq!(code, 0, "{out}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["report"]["points_scanned"], 6);
    assert!(doc["report"]["max_rel_err"].as_f64().unwrap() <= 1e-5);
    assert_eq!(doc["passed"], true);

    // degree 4 misses the 1e-1 class near the real axis
    let (code, out, _) = call(&["validate", "--impl", "weideman", "--degree", "4", "--grid", g]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(code, if doc["passed"] == true { 0 } else { 1 });
    assert_eq!(call(&["validate", "--impl", "eq1", "--grid", g]).0, 0);
}

#[test]
fn bench_writes_versioned_csv() {
    let (code, out, _) = call(&["bench", "--impls", "eq3,weideman16", "--size", "65536", "--repeats", "3"]);
    assert_eq!(code, 0);
    let body = out.strip_prefix("# schema=faddeeva-bench/1\n").unwrap();
    let records = faddeeva_bench::read_csv(body.as_bytes()).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records[0].exp_fraction.is_some_and(|f| f > 0.0 && f < 1.0));
    assert!(records[1].exp_fraction.is_none());
    assert_eq!(call(&["bench", "--impls", "eq3", "--size", "1", "--repeats", "3"]).0, 2);
}
