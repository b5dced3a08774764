use std::f64::consts::{FRAC_PI_4, PI};
use std::process::{Command, Output};

use spherecap::output::{read_records, read_table, read_tables};
use spherecap::stats::{self, ThetaDistribution};
use spherecap::{CapSampler, ConeSpec, Direction, Method, RandomStream};

fn spherecap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherecap"))
        .args(args)
        .env_remove("SPHERECAP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = spherecap(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sample_rows_are_unit_and_inside() {
    let text = stdout(&[
        "sample",
        "--dim",
        "10",
        "--theta0",
        "0.7853981633974483",
        "--count",
        "3",
        "--seed",
        "1",
    ]);
    let t = read_table(&text).unwrap();
    assert_eq!(t.rows.len(), 3);
    assert_eq!(t.meta.get("seed"), Some("1"));
    assert_eq!(t.meta.get("dimension"), Some("10"));
    assert_eq!(t.meta.get("version"), Some(env!("CARGO_PKG_VERSION")));
    for row in &t.rows {
        let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
        assert!(row[9] >= FRAC_PI_4.cos() - 1e-9);
    }
}

#[test]
fn output_matches_library_exactly() {
    let text = stdout(&[
        "sample", "--dim", "7", "--theta0", "0.4", "--count", "50", "--seed", "12",
    ]);
    let t = read_table(&text).unwrap();
    let axis = Direction::canonical(7, 6).unwrap();
    let s = CapSampler::new(ConeSpec::new(axis, 0.4).unwrap(), Method::Auto).unwrap();
    let direct = s.sample_many(50, &mut RandomStream::new(12)).unwrap();
    for (row, d) in t.rows.iter().zip(&direct) {
        assert_eq!(row.as_slice(), d.as_slice());
    }

    let text = stdout(&[
        "sample", "--dim", "7", "--theta0", "0.4", "--count", "50", "--seed", "12", "--format",
        "records",
    ]);
    let block = read_records(&text).unwrap();
    assert_eq!(block.meta["seed"], "12");
    for (rec, d) in block.rows.iter().zip(&direct) {
        let x: Vec<f64> = serde_json::from_value(rec["x"].clone()).unwrap();
        assert_eq!(x.as_slice(), d.as_slice());
    }
}

#[test]
fn full_circle_is_uniform() {
    let text = stdout(&[
        "sample",
        "--dim",
        "2",
        "--theta0",
        "3.141592653589793",
        "--count",
        "1000",
        "--seed",
        "7",
    ]);
    let t = read_table(&text).unwrap();
    let angles: Vec<f64> = t.rows.iter().map(|r| r[0].atan2(r[1]) + PI).collect();
    let ks = stats::ks_statistic_with(&angles, |a| a / (2.0 * PI)).unwrap();
    assert!(ks.passes(), "D={}", ks.statistic);
}

#[test]
fn runs_are_reproducible() {
    let args = [
        "sample", "--dim", "30", "--theta1", "0.2", "--theta2", "0.9", "--count", "20", "--seed",
        "5",
    ];
    let a = spherecap(&args).stdout;
    assert_eq!(a, spherecap(&args).stdout);

    // The header alone is enough to rerun.
    let text = String::from_utf8(a.clone()).unwrap();
    let t = read_table(&text).unwrap();
    let recorded: Vec<&str> = t
        .meta
        .get("args")
        .unwrap()
        .split_whitespace()
        .skip(1)
        .collect();
    assert_eq!(spherecap(&recorded).stdout, a);
}

#[test]
fn seed_comes_from_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_spherecap"));
        c.args(["sample", "--dim", "4", "--theta0", "1", "--count", "2"]);
        match env {
            Some(v) => c.env("SPHERECAP_SEED", v),
            None => c.env_remove("SPHERECAP_SEED"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let t = read_table(&run(Some("99"))).unwrap();
    assert_eq!(t.meta.get("seed"), Some("99"));
    assert_eq!(read_table(&run(None)).unwrap().meta.get("seed"), Some("0"));
}

#[test]
fn threads_split_the_stream() {
    let base = [
        "sample", "--dim", "5", "--theta0", "0.5", "--count", "10", "--seed", "3",
    ];
    let single = read_table(&stdout(&base)).unwrap();
    let mut args = base.to_vec();
    args.extend(["--threads", "2"]);
    let split = read_table(&stdout(&args)).unwrap();
    assert_eq!(split.rows.len(), 10);
    assert_eq!(split.rows[..5], single.rows[..5]);
    assert_ne!(split.rows[5..], single.rows[5..]);
}

#[test]
fn out_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let p = path.to_str().unwrap();
    let out = spherecap(&[
        "sample", "--dim", "3", "--theta0", "pi/3", "--count", "4", "--out", p,
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let t = read_table(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 4);

    let axis_file = dir.path().join("axis.txt");
    std::fs::write(&axis_file, "0.6 0.8 0\n").unwrap();
    let text = stdout(&[
        "sample",
        "--dim",
        "3",
        "--theta0",
        "0.1",
        "--count",
        "20",
        "--axis-file",
        axis_file.to_str().unwrap(),
    ]);
    for r in read_table(&text).unwrap().rows {
        assert!(0.6 * r[0] + 0.8 * r[1] >= 0.1f64.cos() - 1e-9);
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| spherecap(args).status.code().unwrap();
    assert_eq!(code(&["sample", "--dim", "3"]), 2);
    assert_eq!(code(&["sample", "--dim", "3", "--theta0", "4"]), 2);
    assert_eq!(
        code(&["sample", "--dim", "3", "--theta0", "1", "--axis", "1,0"]),
        2
    );
    assert_eq!(
        code(&["sample", "--dim", "3", "--theta0", "1", "--method", "magic"]),
        2
    );
    assert_eq!(code(&["frobnicate"]), 2);
    let out = spherecap(&[
        "sample", "--dim", "3000", "--theta0", "0.01", "--method", "inverse",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--method rejection"));
    assert_eq!(
        code(&[
            "sample",
            "--dim",
            "3000",
            "--theta0",
            "0.01",
            "--method",
            "rejection"
        ]),
        0
    );
}

#[test]
fn cost_tables() {
    let text = stdout(&[
        "cost",
        "--theta",
        "pi/4",
        "--dim-min",
        "2",
        "--dim-max",
        "2",
    ]);
    let t = read_table(&text).unwrap();
    assert!((t.rows[0][1] - 4.0).abs() < 1e-12);

    let text = stdout(&[
        "cost",
        "--theta",
        "pi/5,pi/4,pi/3",
        "--dim-min",
        "2",
        "--dim-max",
        "10000",
        "--dim-step",
        "500",
    ]);
    let tables = read_tables(&text).unwrap();
    assert_eq!(tables.len(), 3);
    for t in &tables {
        assert_eq!(t.meta.get("overflow"), Some("true"));
        assert_eq!(t.columns, ["dimension", "log10_cost"]);
    }

    let text = stdout(&[
        "cost",
        "--kind",
        "planar",
        "--theta",
        "pi/5",
        "--dim-min",
        "800",
        "--dim-max",
        "800",
    ]);
    let v = read_table(&text).unwrap().rows[0][1];
    assert!((400.0..=1600.0).contains(&v), "{v}");
}

#[test]
fn validate_tables() {
    let text = stdout(&[
        "validate", "--dim", "10", "--theta0", "pi/4", "--count", "10000", "--seed", "4",
    ]);
    let t = read_table(&text).unwrap();
    let n = t.column("n").unwrap();
    assert_eq!(*n.last().unwrap(), 10_000.0);
    assert!(n.windows(2).all(|w| w[0] < w[1]));
    assert!(*t.column("ks_statistic").unwrap().last().unwrap() < 0.0163);

    let text = stdout(&[
        "validate",
        "--mode",
        "histogram",
        "--dim",
        "10",
        "--theta0",
        "pi/4",
        "--bins",
        "100",
        "--count",
        "10000",
    ]);
    let t = read_table(&text).unwrap();
    assert_eq!(t.rows.len(), 100);
    let exact = ThetaDistribution::new(10, FRAC_PI_4).unwrap();
    for r in &t.rows {
        assert_eq!(r[3], exact.exact_pdf(r[1]));
    }
}

#[test]
fn baseline_table() {
    let text = stdout(&[
        "baseline", "--kind", "normal", "--dim", "100", "--theta0", "pi/4", "--sigma", "0.08",
        "--count", "10000", "--seed", "2",
    ]);
    let t = read_table(&text).unwrap();
    let acc: f64 = t.meta.get("acceptance_fraction").unwrap().parse().unwrap();
    assert!((acc - 0.9831).abs() <= 0.01, "{acc}");
    assert_eq!(t.columns, ["n", "ks_baseline", "ks_proposed"]);

    let text = stdout(&[
        "baseline",
        "--kind",
        "shifted-sphere",
        "--dim",
        "10",
        "--theta0",
        "pi/4",
        "--count",
        "1000",
    ]);
    let t = read_table(&text).unwrap();
    assert!(t.meta.get("clamped").is_some());
    assert_eq!(*t.column("n").unwrap().last().unwrap(), 1000.0);
}
