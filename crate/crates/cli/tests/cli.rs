use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_migrate-sched"))
        .args(args)
        .env_remove("MIGRATE_SCHED_ORACLE_GUARD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn alpha_table_csv() {
    let out = bin(&["alpha", "--table", "11"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,alpha_num,alpha_den,alpha_dec,mu");
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("2,4,3,1.33333"));
    assert!(lines[1].ends_with(",10"));
    assert!(lines[10].starts_with("11,58091,40451,"));

    let one = stdout(&bin(&["alpha", "--m", "3"]));
    assert!(one.lines().nth(1).unwrap().starts_with("3,15,11,"));
}

#[test]
fn run_trace_and_replay_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", "m 3\n# sizes\n5\n3/2\n2.5\n4\n1\n1\n7\n");
    let trace = dir.path().join("t.jsonl");
    let trace = trace.to_str().unwrap();
    for alg in ["opt", "c=5/3", "c=7/4", "list", "lpt"] {
        let out = bin(&["run", "--alg", alg, "--instance", &inst, "--check", "--trace", trace]);
        assert_eq!(out.status.code(), Some(0), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["opt"], "15/2");
        assert!(report["violations"].as_array().unwrap().is_empty());

        let replay = bin(&["replay", "--instance", &inst, "--trace", trace]);
        assert!(replay.status.success());
        let summary: serde_json::Value = serde_json::from_str(&stdout(&replay)).unwrap();
        assert_eq!(summary["makespan"], report["makespan"]);
        assert_eq!(summary["migrations"], report["migrations"]);
    }
}

#[test]
fn budget_parameter_flag() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", "m 2\n1\n1\n");
    let out = bin(&["run", "--alg", "c", "--c", "7/4", "--instance", &inst]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"alg\": \"c=7/4\""));
    let bad = bin(&["run", "--alg", "c", "--c", "3/2", "--instance", &inst]);
    assert!(!bad.status.success());
}

#[test]
fn opt_and_oracle_guard_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let small = write(dir.path(), "s.txt", "m 2\n3\n3\n2\n2\n2\n");
    assert_eq!(stdout(&bin(&["opt", "--instance", &small])).trim(), "6/1");

    let big = dir.path().join("b.txt");
    let gen = bin(&["gen", "--n", "30", "--m", "3", "--seed", "4", "--out", big.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = bin(&["run", "--instance", big.to_str().unwrap(), "--require-opt"]);
    assert_eq!(out.status.code(), Some(3));
    let out = bin(&["run", "--instance", big.to_str().unwrap(), "--check"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&bin(&["gen", "--kind", "shrinking-stress", "--n", "20", "--m", "2", "--seed", "9"]));
    let b = stdout(&bin(&["gen", "--kind", "shrinking-stress", "--n", "20", "--m", "2", "--seed", "9"]));
    assert_eq!(a, b);
    assert!(a.starts_with("m 2\n"));
    assert_eq!(a.lines().count(), 21);
}

#[test]
fn batch_csv_rows_in_order() {
    let out = bin(&["batch", "--alg", "opt,c=5/3,list", "--m", "3", "--n", "8", "--seeds", "4", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(&row[0], format!("uniform-m3-n8-s{}", k / 3));
        assert_eq!(&row[1], ["opt", "c=5/3", "list"][k % 3]);
        assert!(row[6].contains('/'));
        assert_eq!(&row[13], "0");
    }
}

#[test]
fn adversary_json() {
    let out = bin(&["adversary", "--alg", "list", "--m", "2", "--nprime", "100"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["ratio_lb"], "3/2");
    assert_eq!(v[0]["branch"], "profile-gap(1)");
    let bad = bin(&["adversary", "--m", "3", "--nprime", "100"]);
    assert!(!bad.status.success());
}

#[test]
fn bad_input_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.txt", "m 2\n1\nseven\n");
    let out = bin(&["run", "--instance", &inst]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
