use std::process::Command;

use clap::Parser;
use gwa_cli::{parse_request, render, run, Cli, OutputMode};
use gwa_core::autos::parse_automorphism;
use gwa_core::parse::{parse_element, parse_poly};
use gwa_core::GwaPresentation;
use serde_json::Value;

fn gwa(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gwa"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = gwa(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn product_polynomial_text() {
    let (code, out, _) = gwa(&["fixed-ring", "--a", "z", "--order", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("h_2(z) = z^2 + z\n"), "{out}");
}

#[test]
fn hdet_json() {
    let v = json(&["hdet", "--a", "z^2-3*z", "--g", "theta(zeta(3))"]);
    assert_eq!(v["result"], serde_json::json!({"hdet": "1"}));
}

#[test]
fn gldim_json_with_evidence() {
    let v = json(&["gldim", "--a", "z*(z-3)"]);
    assert_eq!(
        v["result"],
        serde_json::json!({"value": 2, "evidence": {"congruent_pair": 3}})
    );
    let v = json(&["gldim", "--a", "z^2"]);
    assert_eq!(v["result"]["value"], "infinity");
}

#[test]
fn fixed_ring_degree_four() {
    let v = json(&["fixed-ring", "--a", "z^2-3*z", "--g", "theta(-1)"]);
    assert_eq!(v["result"]["degree"], 4);
    assert_eq!(v["result"]["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["inputs"]["a"], "z^2 - 3*z");
}

#[test]
fn relation_report_for_reflective_quadratic() {
    let v = json(&["check-relations", "--a", "z*(z-5)"]);
    assert_eq!(v["result"]["failed"], 0);
    assert_eq!(v["result"]["skipped"], 0);
    let rows = v["result"]["checks"].as_array().unwrap();
    for rel in ["1 (phi)", "2 (psi)", "3", "4", "5"] {
        assert!(
            rows.iter()
                .any(|r| r["relation"] == rel && r["status"] == "pass"),
            "{rel}"
        );
    }
}

#[test]
fn exit_codes() {
    assert_eq!(gwa(&["gldim", "--a", "z^"]).0, 2);
    assert_eq!(gwa(&["gldim"]).0, 2);
    assert_eq!(gwa(&["no-such-command"]).0, 2);
    assert_eq!(gwa(&["gldim-fixed", "--a", "z^3", "--order", "3"]).0, 1);
    assert_eq!(gwa(&["charp-check", "--a", "z^2", "--p", "4"]).0, 1);
    let (code, out, _) = gwa(&["mul", "--a", "z", "--lhs", "x +* y", "--rhs", "x", "--json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "Parse");
    assert!(v["error"]["span"].is_array());
}

#[test]
fn certificate_round_trips_through_verify() {
    let dir = std::env::temp_dir().join(format!("gwa-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (code, out, _) = gwa(&[
        "auslander-witness",
        "--a",
        "z*(z-3)",
        "--g",
        "theta(-1)",
        "--json",
    ]);
    assert_eq!(code, 0);
    let path = dir.join("cert.json");
    std::fs::write(&path, &out).unwrap();
    let (code, text, _) = gwa(&["auslander-witness", "--verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("quotient basis (2): 1, z"), "{text}");
    // a tampered coefficient is rejected
    let v: Value = serde_json::from_str(&out).unwrap();
    let mut cert = v["result"]["certificate"].clone();
    cert["steps"][0]["element"][0]["terms"][0]["coeff"] = Value::String("7".into());
    std::fs::write(&path, cert.to_string()).unwrap();
    assert_eq!(
        gwa(&["auslander-witness", "--verify", path.to_str().unwrap()]).0,
        1
    );
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_defaults_are_overridden_by_flags() {
    let cli = Cli::try_parse_from(["gwa", "gldim"]).unwrap();
    let req = parse_request(cli, Some("a = \"z^2\"\noutput = \"json\"\n")).unwrap();
    assert_eq!(req.a.as_deref(), Some("z^2"));
    assert_eq!(req.mode, OutputMode::Json);
    let cli = Cli::try_parse_from(["gwa", "gldim", "--a", "z"]).unwrap();
    let req = parse_request(cli, Some("a = \"z^2\"\n")).unwrap();
    let out = render(&run(&req).unwrap(), OutputMode::Text);
    assert!(out.starts_with("gldim = 1"), "{out}");
    let cli = Cli::try_parse_from(["gwa", "gldim"]).unwrap();
    assert!(parse_request(cli, Some("colour = \"blue\"\n")).is_err());
}

#[test]
fn config_file_on_the_command_line() {
    let dir = std::env::temp_dir().join(format!("gwa-cli-config-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gwa.toml");
    std::fs::write(&path, "a = \"z*(z-3)\"\noutput = \"json\"\n").unwrap();
    let (code, out, _) = gwa(&["gldim", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["value"], 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn rendered_objects_reparse_to_equal_objects() {
    let p = GwaPresentation::new(parse_poly("z*(z-sqrt(2))").unwrap()).unwrap();
    for src in [
        "x^2*y + zeta(3)*z*x - 1/2",
        "(x + y)^3",
        "y*z^2*x - sqrt(2)",
    ] {
        let e = parse_element(&p, src).unwrap();
        assert_eq!(parse_element(&p, &e.to_string()).unwrap(), e, "{src}");
    }
    for src in [
        "omega * theta(zeta(4))",
        "psi(1, 2) * phi(2, -1/3)",
        "theta(sqrt(2))^3",
    ] {
        let g = parse_automorphism(&p, src).unwrap();
        assert!(
            parse_automorphism(&p, &g.describe()).unwrap().same_map(&g),
            "{src}"
        );
    }
}

#[test]
fn json_output_is_stable() {
    let args = [
        "diagonalize",
        "--a",
        "z*(z-3)",
        "--g",
        "phi(1, 2) * theta(zeta(3))",
        "--json",
    ];
    assert_eq!(gwa(&args).1, gwa(&args).1);
}
