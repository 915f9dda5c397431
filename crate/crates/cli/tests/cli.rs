use std::process::{Command, Output};

use ghz_cli::replay;

fn ghzdistill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghzdistill")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn replay_transcripts_match_golden_files() {
    assert_eq!(replay::table1().unwrap().transcript, include_str!("golden/table1.txt"));
    assert_eq!(replay::table2().unwrap().transcript, include_str!("golden/table2.txt"));
    let o = ghzdistill(&["replay", "table2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("golden/table2.txt"));
}

#[test]
fn logical_paulis_output() {
    let o = ghzdistill(&["logical-paulis", "--code", "five_qubit"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "zbar[0] +ZZZZZ\nxbar[0] -YIZZI\n");
}

#[test]
fn code_files_and_errors() {
    let dir = std::env::temp_dir().join(format!("ghzdistill-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("rep.txt");
    std::fs::write(&good, "# repetition code\n+ZZI\nIZZ\n").unwrap();
    let o = ghzdistill(&["logical-paulis", "--code", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "zbar[0] +ZII\nxbar[0] +XXX\n");

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "ZZI\nIZQ\n").unwrap();
    let o = ghzdistill(&["logical-paulis", "--code", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.txt:2:"));

    let o = ghzdistill(&["logical-paulis", "--code", dir.join("missing.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ghzdistill(&["distill", "--protocol", "bell", "--topology", "split"]).status.code(), Some(2));
    assert_eq!(ghzdistill(&["distill", "--p", "0.1:0.01"]).status.code(), Some(2));
    assert_eq!(ghzdistill(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn noiseless_rows_have_no_failures() {
    let o = ghzdistill(&["distill", "--p", "0", "--trials", "200", "--placement", "alice"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("protocol,code,placement,topology,p,trials,failures,p_f,stderr,fidelity,seed"));
    assert_eq!(lines.next(), Some("ghz,five_qubit,alice,chain,0,200,0,0,0,1,1"));
    let o = ghzdistill(&["baseline", "--p", "0", "--trials", "50"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("baseline,five_qubit,-,-,0,50,0,0,0,1,1"));
}

#[test]
fn csv_is_byte_identical_across_runs_and_threads() {
    let args = ["distill", "--p", "0.02:0.08:3", "--trials", "400", "--seed", "9"];
    let one = ghzdistill(&[&args[..], &["--threads", "1"]].concat());
    let four = ghzdistill(&[&args[..], &["--threads", "4"]].concat());
    let again = ghzdistill(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    assert!(stdout(&one).ends_with('\n') && !stdout(&one).contains('\r'));
}

#[test]
fn verify_passes() {
    let o = ghzdistill(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 11 checks passed"));
}

#[test]
fn code_info_is_json() {
    let o = ghzdistill(&["code-info", "--code", "steane"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 7);
    assert_eq!(v["css"], true);
    assert_eq!(v["distance"], 3);
}

#[test]
fn decoder_table_dump() {
    let o = ghzdistill(&["decoder-table", "--code", "five_qubit"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    assert!(text.starts_with("0000\t+IIIII\n"));
}
