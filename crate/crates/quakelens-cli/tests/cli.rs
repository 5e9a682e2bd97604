//! Black-box tests for the quakelens binary: exit codes, artifact
//! determinism, and the two-event comparison flow.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quakelens"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Two small corpora in the bundled model's vocabulary: `a` is busier and
/// reassuring, `b` is a single early severe-damage post.
fn write_fixtures(dir: &Path) -> (PathBuf, PathBuf) {
    let posts_a = dir.join("a.jsonl");
    fs::write(
        &posts_a,
        concat!(
            "{\"id\":\"a1\",\"text\":\"earthquake everyone is safe and calm\",\"created_at\":\"2021-06-01 08:10\"}\n",
            "{\"id\":\"a2\",\"text\":\"earthquake rescue arrived fast and no one was hurt\",\"created_at\":\"2021-06-01 08:40\"}\n",
            "{\"id\":\"a3\",\"text\":\"earthquake the shelter is warm and we are grateful\",\"created_at\":\"2021-06-01 09:05\"}\n",
        ),
    )
    .unwrap();
    let posts_b = dir.join("b.jsonl");
    fs::write(
        &posts_b,
        "{\"id\":\"b1\",\"text\":\"earthquake the house collapsed and we are scared\",\"created_at\":\"2021-06-01 08:20\"}\n",
    )
    .unwrap();
    (posts_a, posts_b)
}

fn write_config(dir: &Path, name: &str, event_id: &str, input: &Path) -> PathBuf {
    let path = dir.join(name);
    let config = serde_json::json!({
        "event": {
            "event_id": event_id,
            "origin_time": "2021-06-01 08:00",
            "window_hours": 48,
            "query_keywords": ["earthquake"]
        },
        "input": input,
    });
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["analyze", "--help"][..]] {
        let output = run(args);
        assert_eq!(output.status.code(), Some(0), "args {args:?}");
    }
}

#[test]
fn usage_errors_exit_one() {
    // Unknown flag and unknown subcommand are usage errors.
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    // Event-requiring subcommand without a config.
    let output = run(&["trend", "--input", "nowhere.jsonl"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("--config"));
}

#[test]
fn invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let output = run(&["trend", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("config"));

    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);
    let output = run(&[
        "freq",
        "--config",
        cfg.to_str().unwrap(),
        "--top-k",
        "0",
    ]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&[
        "sentiment-train",
        "--alpha",
        "0",
        "--out",
        dir.path().join("m.json").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cfg.json",
        "missing",
        &dir.path().join("does-not-exist.jsonl"),
    );
    let output = run(&["clean", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // Duplicate post ids are a hard data error.
    let dup = dir.path().join("dup.jsonl");
    fs::write(
        &dup,
        concat!(
            "{\"id\":\"x\",\"text\":\"earthquake safe\",\"created_at\":\"2021-06-01 08:10\"}\n",
            "{\"id\":\"x\",\"text\":\"earthquake safe again\",\"created_at\":\"2021-06-01 08:11\"}\n",
        ),
    )
    .unwrap();
    let cfg = write_config(dir.path(), "cfg2.json", "dup", &dup);
    let output = run(&["clean", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("duplicate"));

    // A non-report file handed to compare.
    let not_report = dir.path().join("nope.json");
    fs::write(&not_report, "{}").unwrap();
    let output = run(&[
        "compare",
        "--report-a",
        not_report.to_str().unwrap(),
        "--report-b",
        not_report.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn clean_reports_counts_and_writes_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);
    let out = dir.path().join("cleaned.jsonl");
    let output = run(&[
        "clean",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let summary: Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(summary["clean_report"]["loaded"], 3);
    assert_eq!(summary["clean_report"]["retained"], 3);
    assert_eq!(summary["skipped_malformed"], 0);
    let cleaned = fs::read_to_string(&out).unwrap();
    assert_eq!(cleaned.lines().count(), 3);
}

#[test]
fn prep_segments_a_single_text() {
    let output = run(&["prep", "--text", "Rescue!! teams@here http://x.test arrived"]);
    assert_eq!(output.status.code(), Some(0));
    let tokens: Vec<String> = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(tokens.contains(&"rescue".to_string()) || tokens.contains(&"arrived".to_string()));
    assert!(!tokens.iter().any(|t| t.contains("http")));
}

#[test]
fn freq_emits_ranked_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);
    let output = run(&["freq", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout(&output);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("term,count,weight"));
    let first = lines.next().expect("at least one hot word");
    assert!(first.starts_with("earthquake,3,1"), "got {first}");
}

#[test]
fn trend_and_sentiment_cover_the_window() {
    let dir = tempfile::tempdir().unwrap();
    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);

    let output = run(&["trend", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout(&output);
    assert_eq!(body.lines().count(), 49); // header + 48 hours
    assert_eq!(body.lines().nth(1), Some("0,2"));
    assert_eq!(body.lines().nth(2), Some("1,1"));
    assert!(stderr(&output).contains("peak: 2 post(s) in hour 0"));

    let output = run(&["sentiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout(&output);
    assert_eq!(body.lines().next(), Some("hour,n_pos,n_neg,prop_neg"));
    assert_eq!(body.lines().count(), 49);
}

#[test]
fn damage_distributes_levels() {
    let dir = tempfile::tempdir().unwrap();
    let (_, posts_b) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "b", &posts_b);
    let output = run(&["damage", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout(&output);
    assert_eq!(body.lines().next(), Some("level,count,proportion"));
    assert_eq!(body.lines().nth(1), Some("severe,1,1"));
}

#[test]
fn sentiment_train_produces_a_loadable_model() {
    let dir = tempfile::tempdir().unwrap();
    let training = dir.path().join("train.csv");
    fs::write(
        &training,
        "label,text\npos,everyone is safe and calm\npos,rescue arrived fast\nneg,the house collapsed\nneg,we are scared and hurt\n",
    )
    .unwrap();
    let model = dir.path().join("model.json");
    let output = run(&[
        "sentiment-train",
        "--training",
        training.to_str().unwrap(),
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);
    let output = run(&[
        "sentiment",
        "--config",
        cfg.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn analyze_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (posts_a, _) = write_fixtures(dir.path());
    let cfg = write_config(dir.path(), "cfg.json", "a", &posts_a);
    let mut artifacts: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for round in 0..2 {
        let out = dir.path().join(format!("round{round}"));
        let output = run(&[
            "analyze",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--format",
            "json",
            "--format",
            "csv",
            "--format",
            "svg",
        ]);
        assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|entry| {
                let entry = entry.unwrap();
                (
                    entry.file_name().to_string_lossy().into_owned(),
                    fs::read(entry.path()).unwrap(),
                )
            })
            .collect();
        files.sort_by(|a, b| a.0.cmp(&b.0));
        artifacts.push(files);
    }
    assert_eq!(artifacts[0].len(), 9);
    for ((name_a, bytes_a), (name_b, bytes_b)) in artifacts[0].iter().zip(&artifacts[1]) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between runs");
    }
}

#[test]
fn analyze_then_compare_orders_the_two_events() {
    let dir = tempfile::tempdir().unwrap();
    let (posts_a, posts_b) = write_fixtures(dir.path());
    let cfg_a = write_config(dir.path(), "a.json", "event-a", &posts_a);
    let cfg_b = write_config(dir.path(), "b.json", "event-b", &posts_b);
    let out_a = dir.path().join("out-a");
    let out_b = dir.path().join("out-b");
    for (cfg, out) in [(&cfg_a, &out_a), (&cfg_b, &out_b)] {
        let output = run(&[
            "analyze",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    }
    let comparison_dir = dir.path().join("cmp");
    let output = run(&[
        "compare",
        "--report-a",
        out_a.join("report.json").to_str().unwrap(),
        "--report-b",
        out_b.join("report.json").to_str().unwrap(),
        "--out",
        comparison_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let comparison: Value =
        serde_json::from_str(&fs::read_to_string(comparison_dir.join("comparison.json")).unwrap())
            .unwrap();
    assert_eq!(comparison["greater_peak_volume"], "a");
    assert_eq!(comparison["greater_early_negative_proportion"], "b");
    assert_eq!(comparison["greater_severe_proportion"], "b");
    assert_eq!(comparison["event_a"]["event_id"], "event-a");
    assert_eq!(comparison["event_b"]["event_id"], "event-b");
}
