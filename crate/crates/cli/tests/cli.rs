use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ecmoments(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecmoments"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const TWISTED: &str = r#"
[[family]]
name = "twisted"
a1 = ["1"]
a4 = ["0", "1"]
expected_rank = 0
"#;

#[test]
fn verify_passes_on_template_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecmoments(&["verify", "--end", "60"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with(", ok")).count(), 13, "{text}");
    assert!(stderr(&out).contains("skipping rank1"));
}

#[test]
fn moments_then_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fam.toml"), TWISTED).unwrap();
    let args = ["--families", "fam.toml", "--end", "60", "--rmax", "6", "--block", "20", "--out", "run"];
    let out = ecmoments(&[&["moments"][..], &args].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("run/moments.csv")).unwrap();
    assert!(csv.starts_with("family,prime_index,p,S1,S2,S3,S4,S5,S6\ntwisted,3,5,"));
    assert_eq!(csv.lines().count(), 59);

    let out = ecmoments(&[&["report"][..], &args].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("S2: residual / p^1"), "{text}");
    assert!(text.contains("catalan k=1 (rank 0)"));
    assert!(dir.path().join("run/report.txt").exists());
    for r in [2, 4, 6] {
        for b in [10, 20] {
            let svg = dir.path().join(format!("run/twisted-m{r}-b{b}.svg"));
            assert!(fs::read_to_string(svg).unwrap().contains("viewBox=\"0 0 800 600\""));
        }
    }
}

#[test]
fn resume_completes_a_truncated_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fam.toml"), TWISTED).unwrap();
    let args = ["moments", "--families", "fam.toml", "--end", "40", "--out", "run"];
    assert_eq!(ecmoments(&args, dir.path()).status.code(), Some(0));
    let path = dir.path().join("run/moments.csv");
    let full = fs::read_to_string(&path).unwrap();
    fs::write(&path, &full[..full.len() - 10]).unwrap();
    let out = ecmoments(&[&args[..], &["--resume"]].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&path).unwrap(), full);
}

#[test]
fn discover_prints_fits() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fam.toml"), TWISTED).unwrap();
    let out = ecmoments(&["discover", "--families", "fam.toml", "--end", "120", "--modulus", "2,0,0"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("p = 1 mod 4: S2 = p^2 + (-3) p + (0)"), "{text}");
    assert!(text.contains("verdict: AllClassesVerified"));
}

#[test]
fn discover_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecmoments(&["discover", "--end", "60", "--modulus", "0,0,0"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: SomeFalsified"));
}

#[test]
fn oracle_spot_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecmoments(&["oracle", "--end", "12", "--samples", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.ends_with("10 primes, ok")).count(), 16);
}

#[test]
fn invalid_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "[[family]]\nname = \"bad\"\na4 = [\"12x\"]\n").unwrap();
    let cases: [&[&str]; 6] = [
        &["moments", "--rmax", "9"],
        &["moments", "--start", "2"],
        &["moments", "--exponent", "2"],
        &["discover", "--modulus", "5,0,0"],
        &["verify", "--families", "bad.toml"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = ecmoments(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
    let out = ecmoments(&["verify", "--families", "bad.toml"], dir.path());
    assert!(stderr(&out).contains("bad.toml:3:") && stderr(&out).contains("a4"), "{}", stderr(&out));
}

#[test]
fn report_on_empty_csv_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.csv"), "family,prime_index,p,S1\n").unwrap();
    let out = ecmoments(&["report", "--csv", "empty.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
