use drvote_cli::{run, Output, EXIT_CAPACITY, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn drvote(args: &[&str]) -> Output {
    run(std::iter::once("drvote").chain(args.iter().copied()))
}

fn json(out: &Output) -> Value {
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

#[test]
fn winners_on_seven_voter_profile() {
    let v = json(&drvote(&[
        "winners",
        "--rule",
        "dr(wunam,kendall,p=1)",
        "--profile",
        &data("seven.txt"),
    ]));
    assert_eq!(v["winners"], serde_json::json!(["b"]));
    assert_eq!(v["scores"]["b"], "5");
    let borda = json(&drvote(&[
        "winners",
        "--rule",
        "borda",
        "--profile",
        &data("seven.txt"),
    ]));
    assert_eq!(borda["winners"], v["winners"]);
}

#[test]
fn score_csv_has_decimals() {
    let out = drvote(&[
        "score",
        "--rule",
        "dr(sunam,footrule,p=2,norm)",
        "--profile",
        &data("seven.txt"),
        "--emit",
        "csv",
        "--precision",
        "3",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "outcome,score,decimal");
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l
        .split(',')
        .nth(2)
        .unwrap()
        .split('.')
        .nth(1)
        .unwrap()
        .len()
        == 3));
}

#[test]
fn wasserstein_worked_pair() {
    let hamming = json(&drvote(&[
        "wasserstein",
        "--ground",
        "hamming",
        "--p",
        "1",
        &data("x.json"),
        &data("y.json"),
    ]));
    assert_eq!(hamming["cost_pth_power"], "3/5");
    let kendall = json(&drvote(&[
        "wasserstein",
        "--ground",
        "kendall",
        &data("x.json"),
        &data("y.json"),
    ]));
    assert_eq!(kendall["cost_pth_power"], "8/5");
    // Coupling marginals reproduce the inputs.
    let rows = kendall["coupling"].as_array().unwrap();
    let parse =
        |v: &Value| <drvote::Rational as drvote::Scalar>::parse_ratio(v.as_str().unwrap()).unwrap();
    let row0: drvote::Rational = rows[0].as_array().unwrap().iter().map(parse).sum();
    assert_eq!(row0, drvote::Rational::new(2.into(), 5.into()));
}

#[test]
fn partition_answers() {
    let none = drvote(&["partition", "1", "2"]);
    assert_eq!((none.code, none.stdout.as_str()), (EXIT_OK, "none\n"));
    let v = json(&drvote(&["partition", "1", "2", "3"]));
    assert_eq!(v["subset"], serde_json::json!([0, 1]));
}

#[test]
fn bisector_reports_subset() {
    let v = json(&drvote(&[
        "bisector",
        "--l1",
        "--simplex",
        &data("x.json"),
        &data("y.json"),
    ]));
    assert_eq!(v["large"], true);
    assert_eq!(v["simplex"]["large"], false);
}

#[test]
fn verify_identities_pass() {
    let out = drvote(&["verify", "--suite", "identities", "--m", "3", "--nmax", "3"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 6);
    assert!(out.stdout.lines().all(|l| l.starts_with("pass")));
}

#[test]
fn boundary_is_reproducible_across_threads() {
    let args = |threads: &'static str| {
        drvote(&[
            "boundary",
            "--rule",
            "copeland",
            "--m",
            "3",
            "--n",
            "21",
            "--trials",
            "3000",
            "--seed",
            "42",
            "--threads",
            threads,
        ])
    };
    let one = args("1");
    assert_eq!(one.code, EXIT_OK, "{}", one.stderr);
    assert_eq!(one.stdout, args("3").stdout);
    assert_eq!(one.stdout, args("1").stdout);
}

#[test]
fn diagnose_condorcet_separation() {
    let v = json(&drvote(&[
        "diagnose",
        "--consensus",
        "cond",
        "--checks",
        "separation",
    ]));
    let check = &v["checks"][0];
    assert_eq!(check["check"], "separation");
    assert_eq!(check["passed"], false);
    assert!(check["witness"]["profiles"].as_array().unwrap().len() == 2);
}

#[test]
fn diagnose_nonconvex_midpoint() {
    let v = json(&drvote(&[
        "diagnose",
        "--consensus",
        "nonconvex",
        "--checks",
        "convexity",
    ]));
    let check = &v["checks"][0];
    assert_eq!(check["passed"], false);
    assert_eq!(check["witness"]["point"].as_array().unwrap().len(), 6);
}

#[test]
fn gen_output_parses_back() {
    let out = drvote(&[
        "gen",
        "--culture",
        "ic",
        "--m",
        "3",
        "--n",
        "7",
        "--seed",
        "1",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let e = drvote::elections::parse_profile(&out.stdout).unwrap();
    assert_eq!(e.voters(), 7);
    assert_eq!(
        out.stdout,
        drvote(&["gen", "--m", "3", "--n", "7", "--seed", "1"]).stdout
    );
}

#[test]
fn exit_codes() {
    let bad = drvote(&["winners", "--rule", "borda", "--profile", &data("bad.txt")]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.stderr.contains("line 3, column 4"), "{}", bad.stderr);
    assert_eq!(drvote(&["winners"]).code, EXIT_USAGE);
    assert_eq!(drvote(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(drvote(&["gen", "--m", "9", "--n", "3"]).code, EXIT_CAPACITY);
    assert_eq!(drvote(&["--help"]).code, EXIT_OK);
}

#[test]
fn tie_break_keeps_first_winner() {
    let tied = json(&drvote(&[
        "winners",
        "--rule",
        "borda",
        "--profile",
        &data("tie.txt"),
    ]));
    assert_eq!(tied["winners"], serde_json::json!(["a", "b"]));
    let one = json(&drvote(&[
        "winners",
        "--rule",
        "borda",
        "--profile",
        &data("tie.txt"),
        "--tie-break",
    ]));
    assert_eq!(one["winners"], serde_json::json!(["a"]));
}
