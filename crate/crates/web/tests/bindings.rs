use gwa_web::{fixed_ring_json, gldim_sweep_json, multiply_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn multiply_in_degree_two() {
    let v = parse(&multiply_json("z^2 - 3*z", "y", "x").unwrap());
    assert_eq!(v["product"], "z^2 - 3*z");
}

#[test]
fn sweep_irrational_parameter() {
    let v = parse(&gldim_sweep_json("sqrt(2)", 4).unwrap());
    assert_eq!(v["gldim"], 1);
    for row in v["fixed"].as_array().unwrap() {
        assert_eq!(row["gldim"], 1);
    }
}

#[test]
fn fixed_ring_of_rotation() {
    let v = parse(&fixed_ring_json("z^2 - 3*z", "theta(zeta(3))").unwrap());
    assert_eq!(v["order"], 3);
    assert_eq!(v["generators"][0], "x^3");
}
