//! Browser bindings: multiply elements, sweep global dimensions of fixed
//! rings, and compute fixed rings. Each export returns a JSON string.

use gwa_core::autos::parse_automorphism;
use gwa_core::fixed::{fixed_ring_cyclic, fixed_ring_diagonal, FixedRingKind};
use gwa_core::homdim::{gldim, gldim_fixed, Gldim};
use gwa_core::parse::{parse_element, parse_poly};
use gwa_core::GwaPresentation;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn presentation(a: &str) -> Result<GwaPresentation, String> {
    let poly = parse_poly(a).map_err(|e| e.to_string())?;
    GwaPresentation::new(poly).map_err(|e| e.to_string())
}

fn gldim_value(v: Gldim) -> Value {
    match v {
        Gldim::One => json!(1),
        Gldim::Two => json!(2),
        Gldim::Infinite => json!("infinity"),
    }
}

pub fn multiply_json(a: &str, lhs: &str, rhs: &str) -> Result<String, String> {
    let p = presentation(a)?;
    let l = parse_element(&p, lhs).map_err(|e| e.to_string())?;
    let r = parse_element(&p, rhs).map_err(|e| e.to_string())?;
    let prod = l.multiply(&r).map_err(|e| e.to_string())?;
    Ok(
        json!({"lhs": l.to_string(), "rhs": r.to_string(), "product": prod.to_string()})
            .to_string(),
    )
}

/// For `a = z(z - t)`: `gldim R` and `gldim R^G` for `|G| = 3..=max_order`.
pub fn gldim_sweep_json(t: &str, max_order: u32) -> Result<String, String> {
    if max_order > 12 {
        return Err("max order is limited to 12".into());
    }
    let p = presentation(&format!("z*(z-({t}))"))?;
    let base = gldim(&p);
    let mut rows = Vec::new();
    for ell in 3..=max_order as i64 {
        let row = match gldim_fixed(&p, ell) {
            Ok(v) => {
                json!({"order": ell, "gldim": gldim_value(v.value), "evidence": v.evidence.to_string()})
            }
            Err(e) => json!({"order": ell, "error": e.to_string()}),
        };
        rows.push(row);
    }
    Ok(json!({
        "a": p.a().to_string(),
        "gldim": gldim_value(base.value),
        "evidence": base.evidence.to_string(),
        "fixed": rows,
    })
    .to_string())
}

/// Fixed ring of `<g>`; a bare integer `ℓ` means `theta(zeta(ℓ))`.
pub fn fixed_ring_json(a: &str, g: &str) -> Result<String, String> {
    let p = presentation(a)?;
    let f = match g.trim().parse::<i64>() {
        Ok(ell) => fixed_ring_diagonal(&p, ell),
        Err(_) => {
            let w = parse_automorphism(&p, g).map_err(|e| e.to_string())?;
            fixed_ring_cyclic(&p, &w)
        }
    }
    .map_err(|e| e.to_string())?;
    let out = match &f.kind {
        FixedRingKind::ClassicalGwa(c) => json!({
            "kind": "classical",
            "order": f.group_order,
            "defining": format!("h_{}(z) = {}", c.ell, c.defining.display_in("z")),
            "rescaled": c.rescaled.a().display_in("w"),
            "generators": c.generators.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        }),
        FixedRingKind::GeneratorsRelations(r) => json!({
            "kind": "generators_relations",
            "order": f.group_order,
            "generators": [r.a.to_string(), r.b.to_string(), r.c.to_string()],
            "f": r.f_c.display_in("C"),
            "g": r.g_c.display_in("C"),
            "relations": r.relations,
        }),
    };
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn multiply(a: &str, lhs: &str, rhs: &str) -> Result<String, JsValue> {
    multiply_json(a, lhs, rhs).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn gldim_sweep(t: &str, max_order: u32) -> Result<String, JsValue> {
    gldim_sweep_json(t, max_order).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fixed_ring(a: &str, g: &str) -> Result<String, JsValue> {
    fixed_ring_json(a, g).map_err(|e| JsValue::from_str(&e))
}
