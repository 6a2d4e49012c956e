use std::path::Path;
use std::process::{Command, Output};

use phytozoo::model::apply_map;
use phytozoo::{Params, State};

fn phytozoo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phytozoo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    phytozoo(args).status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.records().map(|r| r.unwrap()).collect()
}

fn headers(path: &Path) -> Vec<String> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.headers().unwrap().iter().map(str::to_owned).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["classify", "--r", "0.3", "--gamma", "0.9"]), 0);
    assert_eq!(code(&["classify", "--r", "0", "--gamma", "1"]), 2);
    assert_eq!(code(&["classify", "--r", "0.3"]), 2);
    assert_eq!(code(&["unknown"]), 2);
    assert_eq!(
        code(&["verify", "--which", "thm1", "--r", "0.3", "--gamma", "0.9"]),
        2
    );
    assert_eq!(
        code(&["verify", "--which", "lasalle2", "--r", "0.5", "--gamma", "1.5"]),
        2
    );
    assert_eq!(code(&["ns", "--r", "1.5"]), 2);
    assert_eq!(
        code(&[
            "sweep",
            "--r",
            "0:1:3",
            "--gamma",
            "1:2:2",
            "--out",
            "/dev/null"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "simulate",
            "--model",
            "map",
            "--r",
            "0.3",
            "--gamma",
            "0.9",
            "--seed",
            "0.8,0.7",
            "--steps",
            "10",
            "--out",
            "/nonexistent-dir/orbit.csv"
        ]),
        3
    );
    assert_eq!(
        code(&[
            "sweep",
            "--r",
            "0.3:0.3:1",
            "--gamma",
            "0.9:0.9:1",
            "--out",
            "/nonexistent-dir/s.csv"
        ]),
        3
    );
}

#[test]
fn classify_reports() {
    let o = phytozoo(&["classify", "--r", "0.5", "--gamma", "1.5"]);
    let text = stdout(&o);
    assert!(text.contains("E2.class = nonhyperbolic"), "{text}");
    assert!(text.contains("E0.class = saddle"));
    assert!(text.lines().all(|l| l.contains(" = ")));
}

#[test]
fn verify_reports() {
    for which in ["thm2", "lemma2", "lasalle2"] {
        let o = phytozoo(&[
            "verify", "--which", which, "--r", "0.3", "--gamma", "0.9", "--grid", "100",
        ]);
        assert_eq!(o.status.code(), Some(0), "{which}");
        assert!(stdout(&o).contains("result = pass"));
    }
    for which in ["thm1", "lasalle1"] {
        assert_eq!(
            code(&["verify", "--which", which, "--r", "0.3", "--gamma", "0.25"]),
            0
        );
    }
    assert_eq!(
        code(&["verify", "--which", "lasalle1", "--r", "0.4", "--gamma", "0.4"]),
        0
    );
}

#[test]
fn simulate_map_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let args = [
            "simulate",
            "--model",
            "map",
            "--r",
            "0.3",
            "--gamma",
            "0.25",
            "--seed",
            "0.8,0.7",
            "--steps",
            "10000",
            "--out",
            out.to_str().unwrap(),
        ];
        assert_eq!(code(&args), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(headers(&a), ["step_or_t", "x", "y"]);

    let rows = read_rows(&a);
    assert_eq!(rows.len(), 10_001);
    let params = Params::new(0.3, 0.25).unwrap();
    let parse = |r: &csv::StringRecord| State::new(r[1].parse().unwrap(), r[2].parse().unwrap());
    for w in rows.windows(2) {
        let next = apply_map(parse(&w[0]), &params);
        let got = parse(&w[1]);
        for (u, v) in [(next.x, got.x), (next.y, got.y)] {
            assert!((u - v).abs() <= 1e-15 * u.abs().max(v.abs()).max(f64::MIN_POSITIVE));
        }
    }
    let last = parse(rows.last().unwrap());
    assert!(last.dist_inf(&State::new(1.0, 0.0)) < 1e-6);
}

#[test]
fn simulate_ode_reaches_coexistence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ode.csv");
    let args = [
        "simulate",
        "--model",
        "ode",
        "--r",
        "0.3",
        "--gamma",
        "0.9",
        "--seed",
        "0.8,0.7",
        "--t-end",
        "200",
        "--dt",
        "1e-3",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let rows = read_rows(&out);
    let last = rows.last().unwrap();
    assert_eq!(last[0].parse::<f64>().unwrap(), 200.0);
    let s = State::new(last[1].parse().unwrap(), last[2].parse().unwrap());
    assert!(s.dist_inf(&State::new(1.0 / 3.0, 2.0 / 3.0)) < 1e-6);
    // steps without t-end is a bad combination for the ODE
    assert_eq!(
        code(&[
            "simulate",
            "--model",
            "ode",
            "--r",
            "0.3",
            "--gamma",
            "0.9",
            "--seed",
            "0.8,0.7",
            "--steps",
            "5",
            "--out",
            out.to_str().unwrap()
        ]),
        2
    );
}

#[test]
fn simulate_map_near_curve_stays_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let args = [
        "simulate",
        "--model",
        "map",
        "--r",
        "0.5",
        "--gamma",
        "1.51",
        "--seed",
        "0.3,0.7",
        "--steps",
        "20000",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let rows = read_rows(&out);
    let e2 = State::new(0.5 / 1.51, 1.01 / 1.51);
    let tail: Vec<f64> = rows[15_000..]
        .iter()
        .map(|r| State::new(r[1].parse().unwrap(), r[2].parse().unwrap()).dist(&e2))
        .collect();
    let min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = tail.iter().cloned().fold(0.0, f64::max);
    assert!(min > 0.01 && max < 1.0, "{min} {max}");
}

#[test]
fn ns_report_and_curve_csv() {
    let o = phytozoo(&["ns", "--r", "0.5"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    for needle in [
        "gamma0 = 1.5",
        "transversality = 0.111",
        "nondegenerate = true, true, true, true",
    ] {
        assert!(text.contains(needle), "{needle}\n{text}");
    }
    let l: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("L_pipeline = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(l < 0.0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = phytozoo(&[
        "ns",
        "--r",
        "0.5",
        "--gamma-star",
        "0.01",
        "--seed",
        "0.3,0.7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("curve.closed = true"));
    assert_eq!(headers(&out), ["step", "x", "y"]);
    assert_eq!(read_rows(&out).len(), 1_000);
}

#[test]
fn sweep_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = phytozoo(&[
        "sweep",
        "--r",
        "0.1:1:50",
        "--gamma",
        "0.1:2.5:50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        headers(&out),
        [
            "r",
            "gamma",
            "e0_class",
            "e1_class",
            "e2_class",
            "in_S",
            "ns_distance"
        ]
    );
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 2_500);
    // row-major, r outer
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.1);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 0.1);
    assert!(rows[1][1].parse::<f64>().unwrap() > rows[0][1].parse::<f64>().unwrap());

    // a grid that contains (0.5, 1.5) exactly
    let o = phytozoo(&[
        "sweep",
        "--r",
        "0.25:0.75:3",
        "--gamma",
        "0.5:2.5:5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let row = read_rows(&out)
        .into_iter()
        .find(|r| &r[0] == "5.0000000000000000e-1" && &r[1] == "1.5000000000000000e0")
        .unwrap();
    assert_eq!(&row[4], "nonhyperbolic");
    assert_eq!(row[6].parse::<f64>().unwrap(), 0.0);

    let o = phytozoo(&[
        "sweep",
        "--r",
        "0.3:0.3:1",
        "--gamma",
        "0.9:0.9:1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][5], "true");

    phytozoo(&[
        "sweep",
        "--r",
        "0.3:0.3:1",
        "--gamma",
        "0.25:0.25:1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let rows = read_rows(&out);
    assert_eq!(&rows[0][4], "");
    assert_eq!(&rows[0][5], "false");
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        phytozoo(&[
            "sweep",
            "--r",
            "0.05:1:40",
            "--gamma",
            "0.05:3:40",
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
