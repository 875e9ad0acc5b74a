use std::io::Write;
use std::process::{Command, Output};

fn cramanujan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cramanujan"))
        .args(args)
        .env_remove("CRAMANUJAN_MEM_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const QUARTER_BFILE: &str = "\
# A193761
1 2
2 3
3 5
4 13
5 17
6 29
7 31
8 37
9 41
10 53
11 59
12 61
13 71
14 79
15 83
16 97
17 101
18 103
19 107
20 127
21 131
22 137
23 149
24 151
25 157
26 173
27 179
28 191
29 193
30 197
31 199
32 223
33 227
34 229
35 239
36 251
";

fn bfile(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn generate_prints_ramanujan_primes() {
    let out = cramanujan(&["generate", "--c", "1/2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 11 17 29 41\n");
}

#[test]
fn generate_rejects_c_outside_unit_interval() {
    for bad in ["0", "1", "3/2", "-0.5", "abc"] {
        let out = cramanujan(&["generate", "--c", bad, "--n", "5"]);
        assert_eq!(out.status.code(), Some(2), "c = {bad}");
    }
    assert_eq!(cramanujan(&["generate", "--c", "0"]).status.code(), Some(2));
}

#[test]
fn decimal_and_fraction_agree() {
    for (dec, frac) in [("0.25", "1/4"), ("0.45", "9/20"), ("0.5", "2/4")] {
        for format in ["text", "csv", "json"] {
            let a = cramanujan(&["generate", "--c", dec, "--n", "40", "--format", format]);
            let b = cramanujan(&["generate", "--c", frac, "--n", "40", "--format", format]);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(stdout(&a), stdout(&b), "{dec} vs {frac} ({format})");
        }
    }
}

#[test]
fn generate_csv_and_json() {
    let csv = stdout(&cramanujan(&[
        "generate", "--c", "3/4", "--n", "3", "--format", "csv",
    ]));
    assert_eq!(csv, "n,r\n1,11\n2,29\n3,59\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&cramanujan(&[
        "generate", "--c", "3/4", "--n", "3", "--format", "json",
    ])))
    .unwrap();
    assert_eq!(json["values"], serde_json::json!([11, 29, 59]));
    assert_eq!(json["semantics"], "integer-sweep");
}

#[test]
fn strict_real_x_matches_for_one_half() {
    let a = cramanujan(&["generate", "--c", "1/2", "--n", "200"]);
    let b = cramanujan(&["generate", "--c", "1/2", "--n", "200", "--strict-real-x"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn sieve_cap_is_a_resource_limit() {
    let out = cramanujan(&["generate", "--c", "0.95", "--n", "10", "--limit", "1e6"]);
    assert_eq!(out.status.code(), Some(3));
    let out = cramanujan(&["--mem-cap", "1K", "generate", "--c", "1/2", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mem_cap_env_var_is_overridden_by_flag() {
    let run = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cramanujan"));
        cmd.env("CRAMANUJAN_MEM_CAP", "1K");
        if let Some(cap) = flag {
            cmd.args(["--mem-cap", cap]);
        }
        cmd.args(["generate", "--c", "1/2", "--n", "1000"])
            .output()
            .unwrap()
    };
    assert_eq!(run(None).status.code(), Some(3));
    assert_eq!(run(Some("64M")).status.code(), Some(0));
}

#[test]
fn verify_against_bfile() {
    let good = bfile(QUARTER_BFILE);
    let out = cramanujan(&[
        "verify",
        "--c",
        "1/4",
        "--bfile",
        good.path().to_str().unwrap(),
        "--n",
        "36",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let bad = bfile(&QUARTER_BFILE.replace("4 13\n", "4 14\n"));
    let out = cramanujan(&[
        "verify",
        "--c",
        "1/4",
        "--bfile",
        bad.path().to_str().unwrap(),
        "--n",
        "36",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n = 4"));

    let short = bfile("1 2\n2 3\n");
    let out = cramanujan(&[
        "verify",
        "--c",
        "1/4",
        "--bfile",
        short.path().to_str().unwrap(),
        "--n",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let garbled = bfile("1 2\n2 x\n");
    let out = cramanujan(&[
        "verify",
        "--c",
        "1/4",
        "--bfile",
        garbled.path().to_str().unwrap(),
        "--n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn bounds_prints_a_certificate() {
    let out = cramanujan(&["bounds", "--c", "1/2", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["n"], 10);
    assert!(cert["x0"].as_u64().unwrap() >= 97);
    assert!(cert["m_c"].as_f64().unwrap() >= 67.0);
}

#[test]
fn density_and_runs() {
    let out = cramanujan(&["density", "--c", "0.5", "--limit", "1e6"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["pi"], 78498);
    assert!((rep["actual_density"].as_f64().unwrap() - 0.4708).abs() < 5e-5);

    let out = cramanujan(&["runs", "--c", "0.5", "--lo", "1e5", "--hi", "1e6"]);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["longest_ram_actual"], 20);
    assert_eq!(rep["longest_nonram_actual"], 36);

    let out = cramanujan(&["runs", "--c", "0.5", "--lo", "10", "--hi", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tables_default_grid() {
    let out = cramanujan(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 19);
    assert_eq!(lines[0], "c,expected_density,actual_density,ratio");
    assert_eq!(lines[10], "0.50,0.5000,0.4708,1.0681");

    let out = cramanujan(&["table2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert_eq!(rows[17]["actual_nonram"], 345);
    assert!(rows[0]["variance_ram"].as_f64().is_some());

    assert_eq!(cramanujan(&["table1", "--grid", ""]).status.code(), Some(2));
}

#[test]
fn scan_is_empty_for_one_half() {
    let out = cramanujan(&["scan", "--c", "1/2", "--n", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let dips: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(dips, serde_json::json!([]));
}
