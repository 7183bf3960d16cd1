//! End-to-end tests driving the compiled binary: exit codes, record shape,
//! determinism of serialized output, and the synth/analyze round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tscausal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exits normally")
}

struct TempFile(PathBuf);

impl TempFile {
    fn new(tag: &str) -> Self {
        TempFile(std::env::temp_dir().join(format!(
            "tscausal_e2e_{}_{tag}.csv",
            std::process::id()
        )))
    }
    fn path(&self) -> &Path {
        &self.0
    }
    fn text(&self) -> &str {
        self.0.to_str().expect("temp paths are UTF-8")
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        std::fs::remove_file(&self.0).ok();
        let mut truth = self.0.clone();
        truth.set_extension("truth.csv");
        std::fs::remove_file(truth).ok();
    }
}

fn write_noise_csv(file: &TempFile, n: usize) {
    // Deterministic, irregular, non-constant columns.
    let mut text = String::from("x,y\n");
    for i in 0..n {
        let t = i as f64;
        text.push_str(&format!(
            "{},{}\n",
            (t * 0.7).sin() + 0.01 * t,
            (t * 1.3).cos() - 0.005 * t
        ));
    }
    std::fs::write(file.path(), text).expect("temp dir is writable");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["gc", "--help"])), 0);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["gc", "--input", "x.csv", "--frobnicate"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_input_file_is_a_data_error() {
    let out = run(&["corr", "--input", "/nonexistent/nope.csv"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn malformed_csv_reports_line_and_exits_two() {
    let file = TempFile::new("ragged");
    std::fs::write(file.path(), "x,y\n1.0,2.0\n3.0\n").unwrap();
    let out = run(&["corr", "--input", file.text()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_pair_column_is_a_data_error() {
    let file = TempFile::new("unknowncol");
    write_noise_csv(&file, 50);
    let out = run(&["corr", "--input", file.text(), "--pairs", "x:zz"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("zz"));
}

#[test]
fn bad_alpha_is_a_usage_error() {
    let file = TempFile::new("badalpha");
    write_noise_csv(&file, 50);
    let out = run(&["corr", "--input", file.text(), "--alpha", "1.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn corr_emits_one_record_per_unordered_pair() {
    let file = TempFile::new("corr1");
    write_noise_csv(&file, 80);
    let out = run(&["corr", "--input", file.text(), "--format", "jsonl"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid json"))
        .collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["measure"], "corr");
    assert_eq!(lines[0]["source"], "x");
    assert_eq!(lines[0]["target"], "y");
    assert!(lines[0]["score"].is_number());
    assert!(lines[0].get("p_value").is_none(), "no surrogates requested");
    assert_eq!(lines[0]["seed"], 0);
    assert_eq!(lines[0]["params"]["n"], 80);
}

#[test]
fn directed_measures_emit_both_directions() {
    let file = TempFile::new("gcboth");
    write_noise_csv(&file, 120);
    let out = run(&[
        "gc", "--input", file.text(), "--order", "1", "--format", "jsonl",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid json"))
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!((lines[0]["source"].as_str(), lines[0]["target"].as_str()), (Some("x"), Some("y")));
    assert_eq!((lines[1]["source"].as_str(), lines[1]["target"].as_str()), (Some("y"), Some("x")));
    for line in &lines {
        assert!(line["p_value"].is_number());
        assert!(line["significant"].is_boolean());
        assert_eq!(line["params"]["order"], 1);
        assert_eq!(line["params"]["p_value_kind"], "analytic");
    }
}

#[test]
fn jsonl_output_is_byte_identical_across_reruns() {
    let file = TempFile::new("determinism");
    write_noise_csv(&file, 150);
    let args = [
        "te", "--input", file.text(), "--format", "jsonl", "--surrogates", "19", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "same flags and seed must give same bytes");
    let c = run(&[
        "te", "--input", file.text(), "--format", "jsonl", "--surrogates", "19", "--seed", "43",
    ]);
    assert_ne!(a.stdout, c.stdout, "different seed must change surrogate p-values");
}

#[test]
fn table_format_has_header_and_params() {
    let file = TempFile::new("table");
    write_noise_csv(&file, 90);
    let out = run(&["corr", "--input", file.text()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    assert!(header.starts_with("measure"));
    assert!(header.contains("score"));
    let row = lines.next().expect("data row");
    assert!(row.starts_with("corr"));
    assert!(row.contains("standardize=true"));
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let file = TempFile::new("outsrc");
    let dest = TempFile::new("outdst");
    write_noise_csv(&file, 80);
    let out = run(&[
        "corr", "--input", file.text(), "--output", dest.text(), "--format", "jsonl",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(dest.path()).expect("report file exists");
    assert!(written.starts_with("{\"measure\":\"corr\""));
}

#[test]
fn partial_failure_reports_warnings_and_exits_three() {
    let file = TempFile::new("partial");
    let mut text = String::from("x,y,flat\n");
    for i in 0..100 {
        let t = i as f64;
        text.push_str(&format!("{},{},5.0\n", (t * 0.9).sin(), (t * 0.4).cos()));
    }
    std::fs::write(file.path(), text).unwrap();
    let out = run(&["corr", "--input", file.text(), "--format", "jsonl"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid json"))
        .collect();
    assert_eq!(lines.len(), 3);
    let failed: Vec<_> = lines
        .iter()
        .filter(|l| l["score"] == "nan")
        .collect();
    assert_eq!(failed.len(), 2, "both pairs touching the flat column fail");
    for f in &failed {
        let warnings = f["warnings"].as_array().expect("warnings array");
        assert!(!warnings.is_empty());
        assert!(warnings[0].as_str().unwrap().contains("flat"));
    }
    assert!(lines[0]["score"].is_number(), "the good pair still succeeds");
}

#[test]
fn non_finite_scores_serialize_as_quoted_sentinels() {
    // A noise-free lag means the unrestricted model fits perfectly and the
    // statistic is infinite; the JSON must stay parseable.
    let file = TempFile::new("infscore");
    let mut text = String::from("x,y\n");
    let vals: Vec<f64> = (0..80).map(|i| ((i * 37) % 11) as f64).collect();
    for i in 1..vals.len() {
        text.push_str(&format!("{},{}\n", vals[i], vals[i - 1]));
    }
    std::fs::write(file.path(), text).unwrap();
    let out = run(&[
        "gc", "--input", file.text(), "--order", "1", "--pairs", "x:y", "--format", "jsonl",
        "--standardize", "false",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("non-finite values must stay valid JSON"))
        .collect();
    assert_eq!(lines[0]["score"], "inf");
}

#[test]
fn te_and_ccc_run_without_standardization() {
    let file = TempFile::new("teccc");
    write_noise_csv(&file, 200);
    let te = run(&["te", "--input", file.text(), "--format", "jsonl"]);
    assert_eq!(code(&te), 0, "stderr: {}", stderr(&te));
    let ccc = run(&[
        "ccc", "--input", file.text(), "--L", "60", "--w", "10", "--delta", "30", "--format",
        "jsonl",
    ]);
    assert_eq!(code(&ccc), 0, "stderr: {}", stderr(&ccc));
    let lines: Vec<serde_json::Value> = stdout(&ccc)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["params"]["L"], 60);
}

#[test]
fn ccm_reports_convergence_as_significance() {
    let file = TempFile::new("ccm");
    write_noise_csv(&file, 220);
    let out = run(&[
        "ccm", "--input", file.text(), "--E", "2", "--lib-lengths", "20,40,80", "--subsamples",
        "5", "--format", "jsonl",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    for line in &lines {
        assert!(line["significant"].is_boolean(), "convergence verdict");
        assert!(line.get("p_value").is_none());
        assert_eq!(line["params"]["lib_lengths"], "20,40,80");
    }
}

#[test]
fn synth_writes_data_and_truth_sidecar_for_each_system() {
    for (system, truth_fragment) in [
        ("coupled-ar", "x,y,0.8"),
        ("coupled-maps", "x,y,0.4"),
        ("confounded", "z,x,1"),
    ] {
        let dest = TempFile::new(&format!("synth_{system}"));
        let out = run(&[
            "synth", "--system", system, "--output", dest.text(), "--n", "200", "--seed", "7",
        ]);
        assert_eq!(code(&out), 0, "system {system} stderr: {}", stderr(&out));
        assert!(stdout(&out).contains("200 samples"));
        let mut truth = dest.path().to_path_buf();
        truth.set_extension("truth.csv");
        let truth_text = std::fs::read_to_string(&truth).expect("truth sidecar exists");
        assert!(
            truth_text.contains(truth_fragment),
            "system {system} truth: {truth_text}"
        );
    }
}

#[test]
fn synth_then_gc_recovers_the_planted_direction() {
    let dest = TempFile::new("pipeline");
    let gen = run(&[
        "synth", "--system", "coupled-ar", "--output", dest.text(), "--n", "2000", "--seed", "11",
        "--c", "0.8",
    ]);
    assert_eq!(code(&gen), 0);
    let out = run(&[
        "gc", "--input", dest.text(), "--order", "1", "--alpha", "0.01", "--format", "jsonl",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["source"], "x");
    assert_eq!(lines[0]["significant"], true, "planted x->y must be detected");
    assert_eq!(lines[1]["significant"], false, "reverse direction must not");
}

#[test]
fn bench_jsonl_is_byte_identical_across_reruns() {
    let args = [
        "bench", "--system", "confounded", "--trials", "2", "--seed", "1", "--format", "jsonl",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "stderr: {}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(stdout(&a).lines().next().unwrap()).unwrap();
    assert_eq!(v["system"], "confounded");
    assert_eq!(v["measure"], "corr");
    assert_eq!(v["n_trials"], 2);
    assert!(v.get("mean_runtime_ms").is_none(), "timing must stay out of jsonl");
}

#[test]
fn bench_rejects_unknown_system_with_usage_exit() {
    let out = run(&["bench", "--system", "galaxy", "--trials", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("coupled_ar"));
}
