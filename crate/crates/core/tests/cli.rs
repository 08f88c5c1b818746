use std::path::Path;
use std::process::{Command, Output};

use rand::{RngCore, SeedableRng};

fn pyrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pyrit"))
        .args(args)
        .output()
        .expect("spawn pyrit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_then_decode_with_missing_shards() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let mut bytes = vec![0u8; 123_457];
    rand::rngs::StdRng::seed_from_u64(3).fill_bytes(&mut bytes);
    std::fs::write(&input, &bytes).unwrap();

    for (k, r, field, transform) in [("8", "4", "gf16", "embedding"), ("3", "5", "gf64", "auto")] {
        let shards = dir.path().join(format!("shards_{field}"));
        let o = pyrit(&[
            "encode",
            path(&input),
            "--k",
            k,
            "--r",
            r,
            "--field",
            field,
            "--transform",
            transform,
            "--symbol-size",
            "1536",
            "--out",
            path(&shards),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

        let r: usize = r.parse().unwrap();
        for i in 0..r {
            std::fs::remove_file(shards.join(format!("shard_{i:03}.pyrt"))).unwrap();
        }
        let out = dir.path().join(format!("out_{field}.bin"));
        let o = pyrit(&["decode", path(&shards), "--out", path(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(std::fs::read(&out).unwrap(), bytes);

        std::fs::remove_file(shards.join(format!("shard_{r:03}.pyrt"))).unwrap();
        let o = pyrit(&["decode", path(&shards), "--out", path(&out)]);
        assert!(!o.status.success());
        assert!(String::from_utf8_lossy(&o.stderr).contains("shards"));
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    let o = pyrit(&["stats", "--k", "12", "--r", "8", "--field", "gf16"]);
    assert!(!o.status.success());
    let o = pyrit(&["matrix", "--k", "2", "--r", "2", "--field", "gf128"]);
    assert!(!o.status.success());
}

#[test]
fn verify_reports_counts_and_fault() {
    let o = pyrit(&["verify", "--field", "gf16"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("homomorphism 256/256 pass"));
    let o = pyrit(&["verify", "--field", "gf64"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("homomorphism 4096/4096 pass"));
    let o = pyrit(&["verify", "--field", "gf16", "--fault"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn stats_and_matrix_output() {
    let o = pyrit(&["stats", "--k", "1", "--r", "1", "--dump"]);
    let text = stdout(&o);
    assert!(text.contains("ratio pyrit/crs 1.0000"));
    assert!(text.contains("# core"));
    assert!(!text.lines().any(|l| l.starts_with("X ")));

    let o = pyrit(&[
        "stats",
        "--k",
        "8",
        "--r",
        "4",
        "--field",
        "gf16",
        "--transform",
        "embedding",
    ]);
    let ratio: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("ratio pyrit/crs "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(ratio.is_finite() && ratio < 1.0);

    let o = pyrit(&["matrix", "--k", "3", "--r", "2"]);
    assert_eq!(stdout(&o), "01 01 01\n01 0f 0c\n");
    let o = pyrit(&["matrix", "--k", "3", "--r", "2", "--survivors", "1,2,3"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn bench_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = pyrit(&[
        "bench",
        "--k",
        "4",
        "--r",
        "2",
        "--sizes",
        "256,128",
        "--threads",
        "1,2",
        "--iterations",
        "2",
        "--out",
        path(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for op in ["encoding", "decoding"] {
        for codec in ["pyrit", "crs", "table", "ratio_pyrit_table"] {
            let text =
                std::fs::read_to_string(dir.path().join(format!("{op}_{codec}.csv"))).unwrap();
            assert!(!text.contains('\r'));
            let lines: Vec<&str> = text.lines().collect();
            assert_eq!(lines, [lines[0], lines[1], lines[2]]);
            assert_eq!(lines[0], "size,t1,t2,t4,t8");
            assert!(lines[1].starts_with("128,") && lines[2].starts_with("256,"));
        }
    }
}
