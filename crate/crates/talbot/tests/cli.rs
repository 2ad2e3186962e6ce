//! End-to-end runs of the `talbot` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn talbot(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_talbot"));
    cmd.args(args).env_remove("TALBOT_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("TALBOT_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The last non-comment line of stdout.
fn scalar(o: &Output) -> String {
    stdout(o).lines().rfind(|l| !l.starts_with('#')).unwrap_or_default().to_string()
}

#[test]
fn documented_examples() {
    let o = talbot(&["mtp", "--b", "0.5,1", "--a", "0.4,0.8"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(scalar(&o), "1.7");
    let o = talbot(&["mtp", "--b", "1/2,1", "--a", "2/5,4/5"], None);
    assert_eq!(scalar(&o), "1.7");
    let o = talbot(&["jarnik", "--tau", "4"], None);
    assert_eq!(scalar(&o), "0.5");

    let o = talbot(&["regions", "--k", "2", "--n", "2", "--what", "thm14"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest="));
    assert_eq!(lines.next().unwrap(), "alpha,s,branch,u1,u2,trivial");
    let hit = lines.any(|l| {
        let f: Vec<&str> = l.split(',').collect();
        f[0].parse::<f64>().unwrap() == 2.0 && (f[1].parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15
    });
    assert!(hit);
}

#[test]
fn exit_codes() {
    assert_eq!(talbot(&["jarnik", "--tau", "1.5"], None).status.code(), Some(2));
    assert_eq!(talbot(&["mtp", "--b", "0.5", "--a", "0.6"], None).status.code(), Some(2));
    assert_eq!(talbot(&["expsum", "--poly", "x^3", "--q", "9", "--p", "1,1"], None).status.code(), Some(2));
    assert_eq!(talbot(&["frobnicate"], None).status.code(), Some(64));
    assert_eq!(talbot(&["jarnik", "--tua", "3"], None).status.code(), Some(64));
    assert_eq!(talbot(&["--help"], None).status.code(), Some(0));
    let o = talbot(&["jarnik", "--tau", "1.5"], None);
    assert!(String::from_utf8_lossy(&o.stderr).contains("tau"));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "measure", "--k", "3", "--n", "2", "--u1", "0.3", "--u2", "0.9", "--r", "4096", "--method", "mc", "--samples",
        "20000", "--seed", "7",
    ];
    let a = talbot(&args, None);
    let b = talbot(&args, None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let out = dir.path().join("g.csv");
    let out = out.to_str().unwrap();
    for _ in 0..2 {
        assert_eq!(talbot(&["gq", "--poly", "x^3+y^3", "--q", "7,11", "--out", out], None).status.code(), Some(0));
    }
    let first = fs::read(out).unwrap();
    talbot(&["gq", "--poly", "x^3+y^3", "--q", "7,11", "--out", out], Some(dir.path()));
    assert_eq!(fs::read(out).unwrap(), first, "cache dir must not change the output");
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# manifest="));
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# jarnik run\ncommand=jarnik\ntau=4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(scalar(&talbot(&["jarnik", "--config", cfg], None)), "0.5");
    assert_eq!(scalar(&talbot(&["jarnik", "--config", cfg, "--tau", "10"], None)), "0.2");
    // A file written for another subcommand is refused.
    assert_eq!(talbot(&["mtp", "--config", cfg], None).status.code(), Some(2));
}

#[test]
fn cache_files_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    fs::create_dir(&cache).unwrap();
    let args = ["expsum", "--poly", "x^3+y^3", "--q", "13"];
    let first = talbot(&args, Some(&cache));
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let name = files[0].file_name().unwrap().to_str().unwrap().to_string();
    assert!(name.starts_with("sums-") && name.ends_with("-q13.bin"), "{name}");

    // A second run reads the cache and reports the same thing.
    let again = talbot(&args, Some(&cache));
    assert_eq!(again.stdout, first.stdout);

    // Flip one byte of the payload.
    let mut bytes = fs::read(&files[0]).unwrap();
    bytes[100] ^= 0x40;
    fs::write(&files[0], &bytes).unwrap();
    let bad = talbot(&args, Some(&cache));
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).to_lowercase().contains("checksum"));

    // Truncation is caught the same way.
    bytes[100] ^= 0x40;
    bytes.truncate(bytes.len() - 7);
    fs::write(&files[0], &bytes).unwrap();
    assert_eq!(talbot(&args, Some(&cache)).status.code(), Some(2));

    // The flag overrides the environment variable.
    let other = dir.path().join("other");
    fs::create_dir(&other).unwrap();
    let o = talbot(&["expsum", "--poly", "x^3+y^3", "--q", "13", "--cache-dir", other.to_str().unwrap()], Some(&cache));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(&other).unwrap().count(), 1);
}
