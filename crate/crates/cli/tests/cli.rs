use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use citeq_core::report::{parse_fit_json, parse_series_csv, series_to_csv};
use citeq_core::windows::{SkipReason, WindowEntry, WindowOutcome};
use citeq_core::{IndexPair, IndexSeries};

fn citeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citeq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_single_line_diagnostic(o: &Output) {
    let err = stderr(o);
    let first = err.lines().next().unwrap_or_default();
    assert!(first.starts_with("citeq: error["), "{err}");
}

fn line_series(c: f64, gs: &[f64]) -> IndexSeries {
    IndexSeries::new(
        gs.iter()
            .enumerate()
            .map(|(i, &g)| WindowEntry {
                central_year: 2000 + i as i32,
                n_pubs: 10,
                n_cites: 100,
                outcome: WindowOutcome::Indices(IndexPair::new(g, 0.5 + c * g)),
            })
            .collect(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_equal_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = citeq(&[
        "synth", "--model", "equal", "--n-papers", "60", "--scale", "7", "--name", "flat",
        "--out", s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = citeq(&["analyze", s(&dir.path().join("flat.json")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let series = fs::read_to_string(out.join("flat.series.csv")).unwrap();
    let parsed = parse_series_csv(&series, Path::new("flat")).unwrap();
    assert!(parsed.usable().count() > 0);
    for (_, p) in parsed.usable() {
        assert_eq!(p, IndexPair::new(0.0, 0.5));
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("flat.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["crossing"], "No");
    assert_eq!(summary["r"], 1.0);
}

#[test]
fn analyze_skewed_window() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        dir.path(),
        "skew.csv",
        "pub_id,year,citations\na,2001,0\nb,2002,0\nc,2003,0\nd,2004,10\n",
    );
    let out = dir.path().join("out");
    let o = citeq(&["analyze", s(&csv), "--out", s(&out), "--end-year", "2005"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("skew.series.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("2003,0.75,0.8,4,10,"));
}

#[test]
fn analyze_missing_file() {
    let o = citeq(&["analyze", "/definitely/not/here.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert_single_line_diagnostic(&o);
    assert!(stderr(&o).contains("/definitely/not/here.csv"));
}

#[test]
fn analyze_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        dir.path(),
        "r.csv",
        "pub_id,year,citations\na,2001,3\nb,2002,9\nc,2003,0\nd,2004,40\ne,2006,1\n",
    );
    for (fmt, ext) in [("csv", "csv"), ("markdown", "md"), ("json", "json")] {
        let out = dir.path().join(fmt);
        let o = citeq(&["analyze", s(&csv), "--out", s(&out), "--end-year", "2008", "--format", fmt]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(out.join(format!("r.summary.{ext}")).exists());
    }
}

#[test]
fn computation_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(dir.path(), "late.csv", "pub_id,year,citations\na,2021,3\n");
    let o = citeq(&["analyze", s(&csv), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert_single_line_diagnostic(&o);
}

#[test]
fn invalid_flags_are_input_errors() {
    let o = citeq(&["analyze", "x.csv", "--stride", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_single_line_diagnostic(&o);
    let o = citeq(&["fit"]);
    assert_eq!(o.status.code(), Some(1));
    assert_single_line_diagnostic(&o);
}

#[test]
fn fit_recovers_lines() {
    let dir = tempfile::tempdir().unwrap();
    let gs: Vec<f64> = (0..12).map(|i| 0.55 + 0.03 * i as f64).collect();
    for (c, expected_star) in [(0.39, 0.5 / 0.61), (0.375, 0.8)] {
        let path = write(dir.path(), "line.series.csv", &series_to_csv(&line_series(c, &gs)));
        let o = citeq(&["fit", s(&path), "--out", s(dir.path())]);
        assert!(o.status.success(), "{}", stderr(&o));
        let fit_path = dir.path().join("line.fit.json");
        let fit = parse_fit_json(&fs::read_to_string(&fit_path).unwrap(), &fit_path).unwrap();
        assert!((fit.c - c).abs() <= 1e-9);
        assert!((fit.g_star.unwrap() - expected_star).abs() <= 1e-9);
        assert_eq!(fit.n_points, gs.len());
    }
    let one = write(dir.path(), "one.series.csv", &series_to_csv(&line_series(0.39, &[0.6])));
    let o = citeq(&["fit", s(&one), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert_single_line_diagnostic(&o);
}

#[test]
fn plotdata_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let gs: Vec<f64> = (0..10).map(|i| 0.5 + 0.04 * i as f64).collect();
    let mut series = line_series(0.39, &gs);
    let path = write(dir.path(), "ten.series.csv", &series_to_csv(&series));
    let o = citeq(&["plotdata", s(&path), "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let time = fs::read_to_string(dir.path().join("ten.time.csv")).unwrap();
    assert_eq!(time.lines().count(), 1 + 10);
    let inset = fs::read_to_string(dir.path().join("ten.inset.csv")).unwrap();
    let rows: Vec<&str> = inset.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.starts_with("point,")).count(), 10);
    let fit_rows: Vec<&str> = rows.iter().copied().filter(|r| r.starts_with("fit,")).collect();
    assert_eq!(fit_rows.len(), 50);
    assert!(fit_rows[0].starts_with("fit,0,"));
    assert!(fit_rows[49].starts_with("fit,1,"));

    // skipped years keep the time axis
    series.entries[3].outcome = WindowOutcome::Skipped(SkipReason::TooFewPubs);
    let path = write(dir.path(), "gap.series.csv", &series_to_csv(&series));
    let o = citeq(&["plotdata", s(&path), "--out", s(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let time = fs::read_to_string(dir.path().join("gap.time.csv")).unwrap();
    assert_eq!(time.lines().count(), 11);
    assert_eq!(time.lines().nth(4), Some("2003,,,0.82"));
}

fn synth(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["synth", "--name", name, "--out", s(dir)];
    args.extend_from_slice(extra);
    let o = citeq(&args);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn batch_three_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, "equal", &["--model", "equal", "--n-papers", "80", "--scale", "12"]);
    synth(d, "mild", &["--model", "powerlaw", "--exponent", "3.5", "--scale", "5", "--n-papers", "300", "--seed", "1"]);
    synth(d, "steep", &["--model", "powerlaw", "--exponent", "1.5", "--scale", "1", "--n-papers", "300", "--seed", "2"]);
    let manifest = write(
        d,
        "manifest.json",
        r#"[{"name": "Equal", "path": "equal.json", "tags": ["EQ"]},
            {"name": "Mild", "path": "mild.json", "tags": []},
            {"name": "Steep", "path": "steep.json", "tags": ["SCS-1"]}]"#,
    );
    let out = d.join("out");
    let o = citeq(&["batch", s(&manifest), "--out", s(&out), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let cohort: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("cohort.json")).unwrap()).unwrap();
    let rows = cohort["researchers"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["summary"]["crossing"], "No");
    assert_eq!(rows[0]["summary"]["tags"][0], "EQ");

    // batch rows match single-profile analysis
    for (row, file) in rows.iter().zip(["equal.json", "mild.json", "steep.json"]) {
        let single = d.join(format!("single-{file}"));
        let o = citeq(&["analyze", s(&d.join(file)), "--out", s(&single)]);
        assert!(o.status.success());
        let name = file.trim_end_matches(".json");
        let summary: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(single.join(format!("{name}.summary.json"))).unwrap(),
        )
        .unwrap();
        for key in ["n_p", "n_c", "h", "g_overall", "k_overall", "yearly_avg", "r", "crossing", "crossing_points"] {
            assert_eq!(row["summary"][key], summary[key], "{name}.{key}");
        }
        let batch_series = fs::read_to_string(out.join("series").join(format!("{}.series.csv", name))).unwrap();
        let single_series = fs::read_to_string(single.join(format!("{name}.series.csv"))).unwrap();
        assert_eq!(batch_series, single_series);
    }
}

#[test]
fn batch_failures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let empty = write(d, "empty.json", "[]");
    let o = citeq(&["batch", s(&empty), "--out", s(d)]);
    assert_eq!(o.status.code(), Some(1));
    assert_single_line_diagnostic(&o);

    let all_bad = write(d, "bad.json", r#"[{"name": "X", "path": "x.csv"}]"#);
    let o = citeq(&["batch", s(&all_bad), "--out", s(d)]);
    assert_eq!(o.status.code(), Some(1));

    synth(d, "ok", &["--model", "uniform", "--n-papers", "50"]);
    let partial = write(
        d,
        "partial.json",
        r#"[{"name": "Ok", "path": "ok.json"}, {"name": "Gone", "path": "gone.csv"}]"#,
    );
    let out = d.join("partial-out");
    let o = citeq(&["batch", s(&partial), "--out", s(&out), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert_single_line_diagnostic(&o);
    let table = fs::read_to_string(out.join("cohort.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.lines().nth(2).unwrap().contains("gone.csv"));
}

#[test]
fn synth_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    synth(&a, "p", &["--seed", "99"]);
    synth(&b, "p", &["--seed", "99"]);
    assert_eq!(fs::read(a.join("p.json")).unwrap(), fs::read(b.join("p.json")).unwrap());
    let o = citeq(&["synth", "--model", "powerlaw", "--exponent", "0.5", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}
