use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn spiralkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spiralkit"))
        .args(args)
        .env("SPIRALKIT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    spiralkit(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(spiralkit(args).stdout).unwrap()
}

/// Value of a `key: value` report line.
fn field(report: &str, key: &str) -> String {
    let prefix = format!("{key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
        .to_string()
}

fn c_n(n: u32, alpha: f64) -> f64 {
    let a = spiralkit::AlphaParam::new(alpha).unwrap();
    spiralkit::bounds::seq_c(n, &a)
}

#[test]
fn classify_exit_codes() {
    let koebe = ["classify", "--function", "harmonic-koebe", "--lambda", "0"];
    assert_eq!(code(&koebe), 1);
    assert_ne!(field(&stdout(&koebe), "witness"), "none");
    assert_eq!(
        code(&["classify", "--function", "identity", "--alpha", "0.5"]),
        0
    );
    assert_eq!(
        code(&[
            "classify",
            "--function",
            "family",
            "--b",
            "0.2",
            "--n",
            "2",
            "--alpha",
            "0.5"
        ]),
        0
    );
    // q and J both reach 1.3e-11 at z = 0.995
    let edge = [
        "classify",
        "--function",
        "family",
        "--b",
        "0.502512562804",
        "--n",
        "2",
        "--lambda",
        "0",
    ];
    assert_eq!(code(&edge), 2);
    assert_eq!(field(&stdout(&edge), "status"), "INCONCLUSIVE");
    assert_eq!(code(&["classify", "--function", "identity"]), 3);
    assert_eq!(
        code(&["classify", "--function", "nonsense", "--lambda", "0"]),
        3
    );
    assert_eq!(
        code(&[
            "classify",
            "--function",
            "identity",
            "--lambda",
            "0",
            "--alpha",
            "0.5"
        ]),
        3
    );
}

#[test]
fn radius_examples() {
    let report = stdout(&[
        "radius",
        "--function",
        "harmonic-koebe",
        "--lambda",
        "0",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(field(&report, "result"), "BRACKET");
    let lower: f64 = field(&report, "lower").parse().unwrap();
    let upper: f64 = field(&report, "upper").parse().unwrap();
    assert!(0.572154 < lower && upper < 0.572155, "[{lower}, {upper}]");

    let report = stdout(&["radius", "--function", "identity", "--lambda", "0"]);
    assert_eq!(field(&report, "result"), "NO-VIOLATION");

    // b > C_1(0.5) = √2 − 1 breaks the strong condition arbitrarily close to 0
    let args = [
        "radius",
        "--function",
        "family",
        "--b",
        "0.6",
        "--n",
        "1",
        "--alpha",
        "0.5",
    ];
    assert_eq!(code(&args), 0);
    assert_eq!(field(&stdout(&args), "result"), "VIOLATED-NEAR-ORIGIN");

    assert_eq!(
        code(&[
            "radius",
            "--function",
            "identity",
            "--lambda",
            "0",
            "--tol",
            "-1"
        ]),
        3
    );
}

#[test]
fn bounds_table() {
    let csv = stdout(&["bounds"]);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().take(6).collect::<Vec<_>>(),
        ["alpha", "M", "N", "logM", "logN", "N_over_M"]
    );
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 99);
    for row in &rows {
        assert!(row[2] <= 2.0 * PI * row[1], "α = {}", row[0]);
    }
    let half = rows.iter().find(|r| r[0] == 0.5).unwrap();
    assert!((half[1] - 2.0 * (PI / 2.0).exp()).abs() < 1e-9);
    assert!((half[2] - PI / 2.0 * PI.exp()).abs() < 1e-9);
    assert!((half[2] - 36.349315).abs() < 1e-6);
    let first = &rows[0];
    assert_eq!(first[0], 0.01);
    assert!((first[2] - PI / 2.0 * (PI * (0.005 * PI).tan()).exp()).abs() < 1e-12);
    assert!((first[2] - 1.65026).abs() < 1e-5);

    assert_eq!(code(&["bounds", "--alpha", "1.5"]), 3);
    assert_eq!(code(&["bounds", "--format", "svg"]), 3);
}

#[test]
fn figure1_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&["figure1", "--out", out]), 0);
    let csv = std::fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    assert!(csv.starts_with("alpha,logM,logN\n"));
    assert_eq!(csv.lines().count(), 198);
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("figure1.svg").exists());

    // a regular file where the directory should be
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let nested = blocker.join("sub");
    assert_eq!(code(&["figure1", "--out", nested.to_str().unwrap()]), 3);
}

#[test]
fn convtest_examples() {
    let args = ["convtest", "--function", "identity", "--alpha", "0.5"];
    assert_eq!(code(&args), 0);
    let report = stdout(&args);
    assert_eq!(report.matches("zero-free on grid").count(), 2);

    for n in [1u32, 3] {
        let b = format!("{}", 1.01 * c_n(n, 0.5));
        let n = n.to_string();
        let args = [
            "convtest",
            "--function",
            "family",
            "--b",
            &b,
            "--n",
            &n,
            "--alpha",
            "0.5",
            "--r-max",
            "0.9999",
            "--grid-angular",
            "1024",
        ];
        assert_eq!(code(&args), 1, "n = {n}");
        let report = stdout(&args);
        assert!(report.contains("VIOLATED at z ="), "{report}");
        let agreement = field(&report, "series_vs_direct_max");
        let value: f64 = agreement
            .split_whitespace()
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!(value <= 1e-8, "{agreement}");
    }
    assert_eq!(code(&["convtest", "--function", "identity"]), 3);
}

#[test]
fn plot_domain_examples() {
    let report = stdout(&[
        "plot-domain",
        "--function",
        "harmonic-koebe",
        "--radii",
        "0.9999",
        "--format",
        "text",
    ]);
    let line = report.lines().find(|l| l.starts_with("r=0.9999")).unwrap();
    let near_pi: f64 = line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("min_re_near_pi="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((near_pi + 1.0 / 6.0).abs() < 1e-3, "{near_pi}");

    let points = |args: &[&str]| -> Vec<(f64, f64)> {
        let csv = stdout(args);
        csv::Reader::from_reader(csv.as_bytes())
            .records()
            .map(|r| {
                let r = r.unwrap();
                (r[2].parse().unwrap(), r[3].parse().unwrap())
            })
            .collect()
    };
    for (x, y) in points(&[
        "plot-domain",
        "--function",
        "identity",
        "--radii",
        "0.5",
        "--format",
        "csv",
    ]) {
        assert!((x.hypot(y) - 0.5).abs() < 1e-12);
    }
    let ellipse = points(&[
        "plot-domain",
        "--function",
        "family",
        "--b",
        "0.3",
        "--n",
        "1",
        "--radii",
        "0.5",
        "--format",
        "csv",
    ]);
    for &(x, y) in &ellipse {
        assert!(((x / 0.65).powi(2) + (y / 0.35).powi(2) - 1.0).abs() < 1e-12);
    }
    let max_x = ellipse.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let max_y = ellipse.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    assert!((max_x - 0.65).abs() < 1e-12 && (max_y - 0.35).abs() < 1e-5);

    let svg = stdout(&[
        "plot-domain",
        "--function",
        "identity",
        "--radii",
        "0.5,0.9",
        "--spirals",
        "4",
        "--lambda",
        "0.5",
    ]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let curves = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("curve"))
        .count();
    assert_eq!(curves, 2);
    assert_eq!(
        code(&["plot-domain", "--function", "identity", "--radii", "1.5"]),
        3
    );
}

#[test]
fn coefficient_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.csv");
    std::fs::write(
        &path,
        "n,re_a,im_a,re_b,im_b\n0,0,0,0,0\n1,1,0,0.05,0\n2,0.1,0,0,0\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&["classify", "--coeffs", p, "--alpha", "0.5"]), 0);
    assert_eq!(
        code(&[
            "classify",
            "--coeffs",
            p,
            "--function",
            "identity",
            "--alpha",
            "0.5"
        ]),
        3
    );
    assert_eq!(
        code(&[
            "classify",
            "--coeffs",
            missing(dir.path()).as_str(),
            "--alpha",
            "0.5"
        ]),
        3
    );
}

fn missing(dir: &Path) -> String {
    dir.join("absent.csv").to_str().unwrap().to_string()
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 5] = [
        &[
            "classify",
            "--function",
            "harmonic-koebe",
            "--lambda",
            "0.3",
        ],
        &[
            "convtest",
            "--function",
            "harmonic-koebe",
            "--alpha",
            "0.5",
            "--seed",
            "11",
        ],
        &["radius", "--function", "harmonic-koebe", "--alpha", "0.5"],
        &["bounds", "--n", "3"],
        &[
            "plot-domain",
            "--function",
            "harmonic-koebe",
            "--radii",
            "0.5,0.9",
            "--spirals",
            "8",
        ],
    ];
    for args in cases {
        let first = spiralkit(args);
        let again = Command::new(env!("CARGO_BIN_EXE_spiralkit"))
            .args(args)
            .env("SPIRALKIT_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(first.status.code(), again.status.code(), "{args:?}");
        assert!(
            first.stdout == again.stdout,
            "{args:?} differs between runs"
        );
    }
}
