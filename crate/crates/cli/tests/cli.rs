use std::path::Path;
use std::process::{Command, Output};

use gtc::oracle::{is_galled, is_tree_child};
use gtc::sampler::{parse, Format, SampleHeader};
use gtc::verify::SMALL_TOTALS;

fn gtcnet(args: &[&str]) -> Output {
    gtcnet_env(args, None)
}

fn gtcnet_env(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gtcnet"));
    cmd.args(args).env_remove("GTCNET_CACHE_DIR");
    if let Some(c) = cache {
        cmd.env("GTCNET_CACHE_DIR", c);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn count_values_and_usage_error() {
    assert_eq!(stdout(&gtcnet(&["count", "--n", "5"])), "87660\n");
    assert_eq!(stdout(&gtcnet(&["count", "--n", "1"])), "1\n");
    assert_eq!(gtcnet(&["count", "--n", "0"]).status.code(), Some(2));
    assert_eq!(gtcnet(&["count", "--n", "601"]).status.code(), Some(2));
    assert_eq!(gtcnet(&["bogus"]).status.code(), Some(2));
}

#[test]
fn table_rows_and_sums() {
    let o = gtcnet(&["table", "--max-n", "4", "--by", "k"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,count");
    assert_eq!(lines.len(), 11);
    assert!(lines.contains(&"3,2,24"));

    let text = stdout(&gtcnet(&["table", "--max-n", "10"]));
    let mut sums = [0u64; 11];
    for line in text.lines().skip(1) {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        sums[f[0] as usize] += f[2];
    }
    assert_eq!(&sums[1..], &SMALL_TOTALS);

    let o = gtcnet(&["table", "--max-n", "150", "--by", "k_i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap 120"));
}

#[test]
fn table_json_and_joint_export() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&gtcnet(&["table", "--max-n", "3", "--by", "k_i", "--format", "json"]))).unwrap();
    assert_eq!(v["max_n"], 3);
    let cells = v["cells"].as_array().unwrap();
    let find = |k: u64, i: u64| {
        cells
            .iter()
            .find(|c| c["n"] == 3 && c["k"] == k && c["i"] == i)
            .map(|c| c["count"].as_str().unwrap().to_string())
    };
    assert_eq!(find(1, 1).as_deref(), Some("3"));
    assert_eq!(find(2, 1).as_deref(), Some("6"));
}

#[test]
fn table_cache_is_keyed_and_used() {
    let dir = tempfile::tempdir().unwrap();
    let first = stdout(&gtcnet_env(&["table", "--max-n", "5"], Some(dir.path())));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    // edit the stored body: a cache hit must return it verbatim
    let entry = std::fs::read_to_string(&files[0]).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&entry).unwrap();
    v["body"] = "cached\n".into();
    std::fs::write(&files[0], v.to_string()).unwrap();
    assert_eq!(stdout(&gtcnet_env(&["table", "--max-n", "5"], Some(dir.path()))), "cached\n");
    // an entry from another code version is recomputed
    v["key"]["version"] = "0.0.0".into();
    std::fs::write(&files[0], v.to_string()).unwrap();
    assert_eq!(stdout(&gtcnet_env(&["table", "--max-n", "5"], Some(dir.path()))), first);
}

#[test]
fn sample_is_deterministic() {
    let a = gtcnet(&["sample", "--n", "3", "--count", "2", "--seed", "7"]);
    let b = gtcnet(&["sample", "--n", "3", "--count", "2", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 2);
    assert_eq!(stdout(&gtcnet(&["sample", "--n", "1", "--count", "1"])), "1;\n");
}

#[test]
fn sample_file_has_header_and_valid_networks() {
    let dir = tempfile::tempdir().unwrap();
    for (format, name) in [(Format::Newick, "newick"), (Format::EdgeJson, "edge-json")] {
        let path = dir.path().join(format!("s.{name}"));
        let o = gtcnet(&[
            "sample",
            "--n",
            "4",
            "--count",
            "100000",
            "--seed",
            "11",
            "--format",
            name,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let header = SampleHeader::parse_line(lines.next().unwrap()).unwrap();
        assert_eq!((header.n, header.seed, header.count, header.format.as_str()), (4, 11, 100000, name));
        let mut seen = 0;
        for line in lines {
            let net = parse(line, format).unwrap();
            assert!(net.validate().is_empty() && is_tree_child(&net) && is_galled(&net));
            assert_eq!(net.size(), 4);
            seen += 1;
        }
        assert_eq!(seen, 100000);
    }
}

#[test]
fn report_bounds_and_asymptotics() {
    let text = stdout(&gtcnet(&["report", "--kind", "bounds", "--grid", "1:10"]));
    let row3 = text.lines().find(|l| l.starts_with("3,")).unwrap();
    assert!(row3.starts_with("3,42,48,66,"));

    let o = gtcnet(&["report", "--kind", "asymptotics", "--grid", "50,100,200,300"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,n,exact_log,asym_log,ratio,pass");
    for name in ["max_ret", "fixed_k1", "fixed_k2"] {
        let rows: Vec<&&str> = lines.iter().filter(|l| l.starts_with(&format!("{name},"))).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.ends_with(",true")), "{name}");
    }
    // the total's ratio moves away from 1 on this grid
    let total: Vec<&&str> = lines.iter().filter(|l| l.starts_with("gtc_total,")).collect();
    assert!(total[1..].iter().all(|r| r.ends_with(",false")));
}

#[test]
fn report_limits() {
    let text = stdout(&gtcnet(&["report", "--kind", "limits", "--grid", "40,80,120"]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for col in [5, 8] {
        assert!(rows.windows(2).all(|w| w[1][col] <= w[0][col]), "column {col}");
    }
}

#[test]
fn verify_fast_and_fault_injection() {
    let o = gtcnet(&["verify", "--level", "fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["erratum"]["status"], "documented-erratum");
    assert_eq!(v["erratum"]["values"][0][1], "2");
    assert_eq!(v["erratum"]["values"][2][1], "84");

    let o = gtcnet(&["verify", "--level", "fast", "--tamper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("table-vs-oracle"));
}

#[test]
fn config_file_rules() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let bad_key = write("a.json", r#"{"max_m": 3}"#);
    assert_eq!(gtcnet(&["--config", &bad_key, "count", "--n", "3"]).status.code(), Some(2));
    let other = write("b.json", r#"{"command": "table"}"#);
    assert_eq!(gtcnet(&["--config", &other, "count", "--n", "3"]).status.code(), Some(2));
    let small = write("c.json", r#"{"max_n": 4}"#);
    assert_eq!(gtcnet(&["--config", &small, "count", "--n", "5"]).status.code(), Some(2));
    assert_eq!(stdout(&gtcnet(&["--config", &small, "count", "--n", "4"])), "1611\n");
    let seeded = write("d.json", r#"{"command": "sample", "seed": 7}"#);
    assert_eq!(
        gtcnet(&["--config", &seeded, "sample", "--n", "3", "--count", "2"]).stdout,
        gtcnet(&["sample", "--n", "3", "--count", "2", "--seed", "7"]).stdout
    );
}
