use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarbound"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPECTRUM_CACHE_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn body(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["spectrum", "--n", "7", "--mode", "sys"])), 2);
    assert_eq!(code(&run(d, &["oracle", "--n", "64", "--i", "2"])), 4);
    assert_eq!(
        code(&run(
            d,
            &["construct", "--n", "16", "--k", "0", "--metric", "5g"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            d,
            &["construct", "--n", "16", "--k", "8", "--metric", "ga"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            d,
            &["simulate", "--n", "16", "--k", "8", "--snr", "3:1:0.5"]
        )),
        2
    );
    assert_eq!(
        code(&run(
            d,
            &["simulate", "--n", "16", "--k", "8", "--snr", "x"]
        )),
        2
    );
    assert_eq!(code(&run(d, &["bogus"])), 2);
    std::fs::write(d.join("bad.txt"), "1 2 oops\n").unwrap();
    assert_eq!(
        code(&run(
            d,
            &[
                "simulate",
                "--n",
                "16",
                "--infoset",
                "bad.txt",
                "--snr",
                "1"
            ]
        )),
        2
    );
}

#[test]
fn spectrum_cache_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "--no-timestamp",
        "spectrum",
        "--n",
        "32",
        "--mode",
        "sys",
        "--out",
        "s.txt",
    ];
    assert_eq!(code(&run(d, &args)), 0);
    let cached: Vec<_> = std::fs::read_dir(d.join("cache"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(!cached.is_empty());
    let first = std::fs::read(d.join("s.txt")).unwrap();
    let snapshot: Vec<Vec<u8>> = cached.iter().map(|p| std::fs::read(p).unwrap()).collect();

    assert_eq!(code(&run(d, &args)), 0);
    assert_eq!(std::fs::read(d.join("s.txt")).unwrap(), first);
    for (p, s) in cached.iter().zip(&snapshot) {
        assert_eq!(&std::fs::read(p).unwrap(), s);
    }

    // a damaged cache is recomputed, not trusted
    std::fs::write(&cached[0], "garbage").unwrap();
    assert_eq!(code(&run(d, &args)), 0);
    assert_eq!(std::fs::read(d.join("s.txt")).unwrap(), first);
}

#[test]
fn oracle_lists_polar_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["oracle", "--n", "16", "--i", "9", "--out", "o.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        body(&d.join("o.csv")),
        ["w,d,count", "1,2,8", "3,6,56", "5,10,56", "7,14,8"]
    );
}

#[test]
fn construct_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(
        d,
        &[
            "construct",
            "--n",
            "64",
            "--k",
            "32",
            "--metric",
            "ubwb-sys",
            "--design-snr-db",
            "2",
            "--out",
            "a.txt",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let set: Vec<usize> = body(&d.join("a.txt"))
        .iter()
        .flat_map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<usize>().unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    assert_eq!(set.len(), 32);
    assert!(set.iter().all(|&i| (1..=64).contains(&i)));

    let mut curves = Vec::new();
    for kind in ["bler", "ber-sys"] {
        let out = format!("{kind}.csv");
        let o = run(
            d,
            &[
                "bound",
                "--n",
                "64",
                "--infoset",
                "a.txt",
                "--kind",
                kind,
                "--snr",
                "0:4:1",
                "--out",
                &out,
            ],
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let rows = body(&d.join(&out));
        assert_eq!(rows.len(), 6);
        let values: Vec<f64> = rows[1..]
            .iter()
            .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        curves.push(values);
    }
    for (bler, ber) in curves[0].iter().zip(&curves[1]) {
        assert!(ber <= bler, "{ber} > {bler}");
    }
}
