use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gvlab"))
        .args(args)
        .env_remove("GVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn flag_of_a_point_file() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "point.txt");
    fs::write(&p, "# a point\n3 1/2 -7\n").unwrap();
    let o = gvlab(&["flag", &p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "flag: d=0;1"));
}

#[test]
fn flag_of_the_cube() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "cube.txt");
    let rows: String = (0..8).map(|v| format!("{} {} {}\n", v & 1, v >> 1 & 1, v >> 2 & 1)).collect();
    fs::write(&p, rows).unwrap();
    let o = gvlab(&["flag", &p]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("flag: d=3;1,8,12,24,6,24,24,48\n"));
    assert!(out.contains("f: [8, 12, 6]\n"));
    assert!(out.contains("cd: d=3;CCC:1,DC:2,CD:0\n"));
    assert!(out.contains("h: (1, 3, 3, 1)\n"));
}

#[test]
fn flag_of_the_exceptional_polar() {
    let o = gvlab(&["flag", "--dim", "5", "--polar", "0xf99f6ff6"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("cd: d=5;CCCCC:1,DCCC:20,CDCC:-66,CCDC:56,CCCD:8,DDC:-5,DCD:0,CDD:20\n"));
    assert!(out.contains("g: (1, 18, 15)\n"));
}

#[test]
fn flag_input_errors() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "bad.txt");
    fs::write(&p, "0 0\n1\n").unwrap();
    assert_eq!(code(&gvlab(&["flag", &p])), 2);
    assert_eq!(code(&gvlab(&["flag", &path(&dir, "missing.txt")])), 2);
    assert_eq!(code(&gvlab(&["flag", "--dim", "3", "0x1ff"])), 2);
    fs::write(&p, "0 0\n0 0\n").unwrap();
    assert_eq!(code(&gvlab(&["flag", &p])), 2);
}

#[test]
fn corpus_d2_and_search() {
    let dir = TempDir::new().unwrap();
    let cache = path(&dir, "c2.txt");
    let o = gvlab(&["corpus", "2", "--exhaustive", "--out", &cache]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&cache).unwrap();
    assert_eq!(text.lines().next(), Some("gvlab-corpus-v1"));
    assert_eq!(text.lines().count(), 5);
    let o = gvlab(&["search", &cache]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("extremal word-sets: 2 (2 order-zero, 0 higher-order, 0 residual)"));
    assert!(out.contains("\"index\": \"11\""));
    assert!(out.contains("\"index\": \"2\""));
}

#[test]
fn exhaustive_is_limited() {
    let dir = TempDir::new().unwrap();
    let o = gvlab(&["corpus", "5", "--exhaustive", "--out", &path(&dir, "x")]);
    assert_eq!(code(&o), 2);
    assert!(!Path::new(&path(&dir, "x")).exists());
}

#[test]
fn sampling_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.txt");
    let b = path(&dir, "b.txt");
    assert_eq!(code(&gvlab(&["corpus", "4", "--sample", "40", "--seed", "3", "--out", &a])), 0);
    assert_eq!(
        code(&gvlab(&["--threads", "2", "corpus", "4", "--sample", "40", "--seed", "3", "--out", &b])),
        0
    );
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 81);
    let ra = gvlab(&["search", &a, "--seed", "3"]);
    let rb = gvlab(&["--threads", "3", "search", &b, "--seed", "3"]);
    assert_eq!(code(&ra), 0);
    assert_eq!(ra.stdout, rb.stdout);
}

#[test]
fn ingest_matches_list_length() {
    let dir = TempDir::new().unwrap();
    let list = path(&dir, "list.txt");
    fs::write(&list, "# three classes\nd=3 mask=0xff\n0x0f\n0x17\n").unwrap();
    let cache = path(&dir, "c.txt");
    let o = gvlab(&["corpus", "3", "--ingest", &list, "--out", &cache]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 1 + 2 * 3);
    assert!(stdout(&o).starts_with("3 classes, 6 entries"));
}

#[test]
fn simplex_cache_makes_every_set_effective() {
    let dir = TempDir::new().unwrap();
    let list = path(&dir, "simplex.txt");
    fs::write(&list, "0x10117\n").unwrap();
    let cache = path(&dir, "c.txt");
    assert_eq!(code(&gvlab(&["corpus", "5", "--ingest", &list, "--out", &cache])), 0);
    let report = path(&dir, "r.txt");
    let o = gvlab(&["search", &cache, "--report", &report]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("|E| = 256;"));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"effective_count\": 256"));
    assert!(text.contains("\"fingerprint\": \"sha256:"));
}

#[test]
fn search_input_errors() {
    let dir = TempDir::new().unwrap();
    let cache = path(&dir, "empty.txt");
    fs::write(&cache, "gvlab-corpus-v1\n").unwrap();
    assert_eq!(code(&gvlab(&["search", &cache])), 2);
    fs::write(&cache, "gvlab-corpus-v1\n2;0xf;d=2;1,4,4,8;d=2;CC:1,D:2\n").unwrap();
    assert_eq!(code(&gvlab(&["search", &cache])), 2);
    assert_eq!(code(&gvlab(&["search", &path(&dir, "none")])), 2);
}

#[test]
fn distance_command() {
    let o = gvlab(&["distance", "5", "8", "1,0,2,4,1,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "d=5 mask=0x6609009\n");
    let o = gvlab(&["distance", "2", "1", "1,0,0"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = gvlab(&["distance", "5", "8", "8,0,0,0,0,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
    assert_eq!(code(&gvlab(&["distance", "5", "8", "1,0,2"])), 2);
    assert_eq!(code(&gvlab(&["distance", "5", "8", "1,x,2,4,1,0"])), 2);
}

#[test]
fn verify_is_reproducible_and_detects_tampering() {
    let a = gvlab(&["verify-paper", "--samples", "300"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let lines: Vec<String> = stdout(&a).lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[..7].iter().all(|l| l.starts_with("[PASS]")));
    let b = gvlab(&["verify-paper", "--samples", "300"]);
    assert_eq!(a.stdout, b.stdout);
    let t = gvlab(&["verify-paper", "--samples", "300", "--tamper-basis"]);
    assert_eq!(code(&t), 1);
    assert!(stdout(&t).contains("[FAIL] 2."));
}

#[test]
fn bad_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_gvlab"))
        .args(["distance", "2", "1", "1,0,0"])
        .env("GVLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
