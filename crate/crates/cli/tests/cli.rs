use std::path::Path;
use std::process::{Command, Output};

fn locent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn code_reports_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l.json");
    let o = locent(&["code", "--distance", "4", "--out", path_str(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N=18"));
    let j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(j["qubits"].as_array().unwrap().len(), 18);

    let o = locent(&["code", "--distance", "24", "--out", path_str(&out)]);
    assert!(stdout(&o).contains("N=818"));
    assert_eq!(locent(&["code", "--distance", "5"]).status.code(), Some(2));
}

#[test]
fn seven_qubit_conversion_and_alc() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let o = locent(&["stab2graph", "--seven-qubit", "--out", path_str(&g)]);
    assert!(stdout(&o).contains("controls=[1, 5, 7]"));

    let o = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "5",
        "--path",
        "1,2,5",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("sequence=[2]"));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(j["graph"]["edges"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e == &serde_json::json!([1, 5])));

    let again = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "5",
        "--path",
        "1,2,5",
    ]);
    assert_eq!(again.stdout, o.stdout);
    let first = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "5",
        "--seed",
        "8",
    ]);
    let second = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "5",
        "--seed",
        "8",
    ]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let o = locent(&[
        "stab2graph",
        "--seven-qubit",
        "--seed",
        "3",
        "--force-pair",
        "1",
        "5",
    ]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pair_linked=true"));
}

#[test]
fn alc_on_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.json");
    std::fs::write(&g, r#"{"n":3,"edges":[[1,2],[2,3]]}"#).unwrap();
    let o = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "3",
        "--seed",
        "1",
    ]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_lc=1"));
    let o = locent(&[
        "alc",
        "--graph",
        path_str(&g),
        "--a",
        "1",
        "--b",
        "2",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_state_tableau_needs_no_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let tab = locent::stab::graph_to_tableau(
        &locent::graph::Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
    );
    std::fs::write(&t, serde_json::to_string(&tab.to_json()).unwrap()).unwrap();
    let o = locent(&["stab2graph", "--tableau", path_str(&t)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unitary_identity=true"));
}

#[test]
fn sweeps_are_deterministic() {
    let args = [
        "sweep",
        "--bound",
        "mlb",
        "--distance",
        "12",
        "--d",
        "4,2",
        "--kind",
        "DP",
        "--q",
        "0.1,0",
        "--n-samples",
        "20",
        "--seed",
        "5",
    ];
    let a = locent(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_locent"))
        .args(args)
        .env("STABLE_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "d,q,kind,bound,value,n_x,n_z,n_min,n_lc_mean,n_samples,seed"
    );
    assert!(lines[1].starts_with("2,0,DP,mlb,1,,,"));
    assert!(lines[3].starts_with("4,0,DP,mlb,1,,,"));
    assert_eq!(lines.len(), 5);
}

#[test]
fn wlb_sweep_rows() {
    let o = locent(&[
        "sweep",
        "--bound",
        "wlb",
        "--distance",
        "12",
        "--d",
        "5",
        "--kind",
        "PF",
        "--q",
        "0.01,0",
    ]);
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows[0][4], "1");
    let nx: i32 = rows[1][5].parse().unwrap();
    let v: f64 = rows[1][4].parse().unwrap();
    assert!((v - 0.99f64.powi(nx)).abs() < 1e-11);
}

#[test]
fn sweep_errors_map_to_exit_codes() {
    let o = locent(&[
        "sweep",
        "--bound",
        "mlb",
        "--distance",
        "12",
        "--d",
        "2",
        "--kind",
        "DP",
        "--q",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = locent(&[
        "sweep",
        "--bound",
        "wlb",
        "--distance",
        "4",
        "--d",
        "2",
        "--kind",
        "DP",
        "--q",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = locent(&[
        "sweep",
        "--bound",
        "wlb",
        "--distance",
        "12",
        "--d",
        "2",
        "--kind",
        "XY",
        "--q",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_recovers_exact_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let mut text = String::from("d,q,kind,bound,value,n_x,n_z,n_min,n_lc_mean,n_samples,seed\n");
    for d in [2, 4, 6, 8] {
        text += &format!("{d},0.01,DP,mlb,{},,,,,,\n", (-0.1 - 0.5 * d as f64).exp());
    }
    std::fs::write(&csv, text).unwrap();
    let o = locent(&["fit", path_str(&csv)]);
    let row: Vec<String> = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let (a, b): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
    assert!((a + 0.1).abs() < 1e-9 && (b + 0.5).abs() < 1e-9);
    assert_eq!(row[5], "negative");

    std::fs::write(
        &csv,
        "d,q,kind,bound,value\n2,0,DP,mlb,0.5\n4,0,DP,mlb,0.4\n",
    )
    .unwrap();
    assert_eq!(locent(&["fit", path_str(&csv)]).status.code(), Some(2));
}
