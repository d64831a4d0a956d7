use std::fmt::Write as _;

use gwa_core::autos::{
    classify_finite_subgroup, parse_automorphism, sample_parameters, verify_relations,
    AutomorphismWord,
};
use gwa_core::fixed::{
    diagonalize_deg2, diagonalize_weyl, reflective, ClassicalFixedRing, DiagonalizationResult,
    FixedRingKind, FixedRingPresentation, OmegaRelations,
};
use gwa_core::homdim::{gldim_fixed_with, gldim_with, Evidence, Gldim, GldimVerdict};
use gwa_core::parse::{parse_element, parse_poly};
use gwa_core::skew::{
    auslander_witness, charp_center_check, cntp_identity_check, mono_string, Certificate,
};
use gwa_core::{GwaElement, GwaPresentation, MultOrder};
use serde_json::{json, Map, Value};

use crate::{CliError, Command, Operands, Request, Response};

type Out = Result<(Value, String), CliError>;

struct Ctx<'a> {
    ops: &'a Operands,
    a: Option<&'a str>,
    bits: u32,
    inputs: Map<String, Value>,
}

impl Ctx<'_> {
    fn pres(&mut self) -> Result<GwaPresentation, CliError> {
        let src = self.a.ok_or_else(|| missing("--a"))?;
        let p = GwaPresentation::new(parse_poly(src)?)?;
        self.inputs
            .insert("a".into(), Value::String(p.a().to_string()));
        Ok(p)
    }

    fn maps(&mut self, p: &GwaPresentation) -> Result<Vec<AutomorphismWord>, CliError> {
        if self.ops.g.is_empty() {
            return Err(missing("--g"));
        }
        let gs = self
            .ops
            .g
            .iter()
            .map(|s| parse_automorphism(p, s))
            .collect::<gwa_core::Result<Vec<_>>>()?;
        let echo = gs.iter().map(|g| Value::String(g.describe())).collect();
        self.inputs.insert("g".into(), Value::Array(echo));
        Ok(gs)
    }

    fn map(&mut self, p: &GwaPresentation) -> Result<AutomorphismWord, CliError> {
        let mut gs = self.maps(p)?;
        if gs.len() != 1 {
            return Err(CliError::Usage("expected exactly one --g".into()));
        }
        Ok(gs.remove(0))
    }

    fn element(
        &mut self,
        p: &GwaPresentation,
        key: &str,
        src: Option<&String>,
    ) -> Result<GwaElement, CliError> {
        let src = src.ok_or_else(|| missing(&format!("--{key}")))?;
        let e = parse_element(p, src)?;
        self.inputs.insert(key.into(), Value::String(e.to_string()));
        Ok(e)
    }

    fn order(&mut self) -> Result<i64, CliError> {
        let ell = self.ops.order.ok_or_else(|| missing("--order"))?;
        self.inputs.insert("order".into(), Value::from(ell));
        Ok(ell)
    }
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing required {flag}"))
}

/// Dispatches one request.
pub fn run(req: &Request) -> Result<Response, CliError> {
    let ops = req.command.operands();
    let mut ctx = Ctx {
        ops,
        a: req.a.as_deref(),
        bits: req.precision_bits,
        inputs: Map::new(),
    };
    let (result, text) = match &req.command {
        Command::Normalize(_) => normalize(&mut ctx),
        Command::Mul(_) => mul(&mut ctx),
        Command::Apply(_) => apply(&mut ctx),
        Command::Compose(_) => compose(&mut ctx),
        Command::Order(_) => order(&mut ctx),
        Command::Canonical(_) => canonical(&mut ctx),
        Command::IsFiltered(_) => is_filtered(&mut ctx),
        Command::Reflective(_) => reflective_cmd(&mut ctx),
        Command::Hdet(_) => hdet(&mut ctx),
        Command::CheckRelations(_) => check_relations(&mut ctx),
        Command::ClassifyGroup(_) => classify(&mut ctx),
        Command::Diagonalize(_) => diagonalize(&mut ctx),
        Command::FixedRing(_) => fixed_ring(&mut ctx),
        Command::Gldim(_) => gldim_cmd(&mut ctx),
        Command::GldimFixed(_) => gldim_fixed_cmd(&mut ctx),
        Command::CalabiYau(_) => calabi_yau(&mut ctx),
        Command::AuslanderWitness(_) => witness(&mut ctx),
        Command::CharpCheck(_) => charp(&mut ctx),
    }?;
    Ok(Response {
        command: req.command.name().into(),
        inputs: ctx.inputs,
        result,
        text,
    })
}

fn s(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn normalize(ctx: &mut Ctx) -> Out {
    let src = ctx.a.ok_or_else(|| missing("--a"))?;
    let a = parse_poly(src)?;
    ctx.inputs.insert("a".into(), s(&a));
    let (p, shift, scale) = GwaPresentation::normalize(&a)?;
    let text = format!("a(z) = {}\nshift = {shift}\nscale = {scale}", p.a());
    Ok((
        json!({"a": s(p.a()), "shift": s(shift), "scale": s(scale)}),
        text,
    ))
}

fn mul(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let l = ctx.element(&p, "lhs", ctx.ops.lhs.as_ref())?;
    let r = ctx.element(&p, "rhs", ctx.ops.rhs.as_ref())?;
    let prod = l.multiply(&r)?;
    Ok((json!({"product": s(&prod)}), prod.to_string()))
}

fn apply(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let e = ctx.element(&p, "elem", ctx.ops.elem.as_ref())?;
    let img = g.apply(&e)?;
    Ok((json!({"image": s(&img)}), img.to_string()))
}

fn images_json(g: &AutomorphismWord) -> Value {
    let [x, y, z] = g.images();
    json!({"x": s(x), "y": s(y), "z": s(z)})
}

fn images_text(g: &AutomorphismWord) -> String {
    let [x, y, z] = g.images();
    format!("x -> {x}\ny -> {y}\nz -> {z}")
}

fn compose(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let gs = ctx.maps(&p)?;
    let mut acc = AutomorphismWord::identity(&p);
    for g in &gs {
        acc = acc.compose(g)?;
    }
    let text = format!("{}\n{}", acc.describe(), images_text(&acc));
    Ok((
        json!({"word": s(acc.describe()), "images": images_json(&acc)}),
        text,
    ))
}

fn order_string(o: MultOrder) -> String {
    match o {
        MultOrder::Finite(l) => l.to_string(),
        MultOrder::Infinite => "infinity".into(),
    }
}

fn order(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let o = order_string(g.order()?);
    Ok((json!({"order": s(&o)}), format!("order = {o}")))
}

fn canonical(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let form = g.canonical_form()?;
    Ok((
        json!({"form": s(&form), "kind": form.kind()}),
        form.to_string(),
    ))
}

fn is_filtered(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let f = g.is_filtered();
    Ok((json!({"filtered": f}), format!("filtered = {f}")))
}

fn reflective_cmd(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    Ok(match reflective(p.a()) {
        Some(r) => (
            json!({"reflective": true, "rho": s(&r.rho)}),
            format!("reflective with rho = {}", r.rho),
        ),
        None => (
            json!({"reflective": false, "rho": null}),
            "not reflective".into(),
        ),
    })
}

fn hdet(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let h = g.hdet_linear()?;
    Ok((json!({"hdet": s(&h)}), format!("hdet = {h}")))
}

fn check_relations(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let rows = verify_relations(&p, &sample_parameters(), &[1, 2]);
    let count = |st: &str| rows.iter().filter(|r| r.status == st).count();
    let mut text = String::new();
    for r in &rows {
        let _ = write!(text, "{:<8} {:<8} {}", r.status, r.relation, r.params);
        if let Some(d) = &r.detail {
            let _ = write!(text, " ({d})");
        }
        text.push('\n');
    }
    let _ = write!(
        text,
        "{} passed, {} failed, {} skipped",
        count("pass"),
        count("fail"),
        count("skipped")
    );
    let result = json!({
        "checks": serde_json::to_value(&rows).expect("serializable"),
        "passed": count("pass"),
        "failed": count("fail"),
        "skipped": count("skipped"),
    });
    Ok((result, text))
}

fn classify(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let gs = ctx.maps(&p)?;
    let (kind, elems) = classify_finite_subgroup(&gs)?;
    let names: Vec<String> = elems.iter().map(|g| g.describe()).collect();
    let text = format!("{kind}\n{}", names.join("\n"));
    Ok((
        json!({"group": s(&kind), "order": elems.len(), "elements": names}),
        text,
    ))
}

fn diag_json(d: &DiagonalizationResult, g: &AutomorphismWord) -> Value {
    let ids: Vec<Value> = d
        .identities(g)
        .iter()
        .map(|c| json!({"identity": c.identity, "holds": c.holds}))
        .collect();
    json!({
        "X": s(&d.x),
        "Y": s(&d.y),
        "Z": s(&d.z),
        "a_prime": d.new_a.display_in("Z"),
        "gamma": s(&d.gamma),
        "k_plus": s(&d.k_plus),
        "k_minus": s(&d.k_minus),
        "identities": ids,
    })
}

fn diag_text(d: &DiagonalizationResult, g: &AutomorphismWord) -> String {
    let mut t = format!(
        "X = {}\nY = {}\nZ = {}\na'(Z) = {}\ngamma = {}\nK+ = {}, K- = {}",
        d.x,
        d.y,
        d.z,
        d.new_a.display_in("Z"),
        d.gamma,
        d.k_plus,
        d.k_minus
    );
    for c in d.identities(g) {
        let _ = write!(
            t,
            "\n{}: {}",
            c.identity,
            if c.holds { "holds" } else { "FAILS" }
        );
    }
    t
}

fn diagonalize(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let d = if p.n() == 1 {
        diagonalize_weyl(&g)?
    } else {
        diagonalize_deg2(&g)?
    };
    Ok((diag_json(&d, &g), diag_text(&d, &g)))
}

fn classical_out(c: &ClassicalFixedRing, order: u64) -> (Value, String) {
    let gens: Vec<Value> = c.generators.iter().map(s).collect();
    let resc: Vec<Value> = c.rescaled_generators.iter().map(s).collect();
    let h = c.defining.display_in("z");
    let mut text = format!("h_{}(z) = {h}\n", c.ell);
    let _ = write!(
        text,
        "generators: {}, {}, {}\nrescaled: a(w) = {}",
        c.generators[0],
        c.generators[1],
        c.generators[2],
        c.rescaled.a().display_in("w")
    );
    let result = json!({
        "kind": "classical",
        "group_order": order,
        "defining": h,
        "degree": c.defining.deg(),
        "generators": gens,
        "rescaled": c.rescaled.a().display_in("w"),
        "rescaled_generators": resc,
        "basis": c.basis.as_ref().map(|d| json!({"X": s(&d.x), "Y": s(&d.y), "Z": s(&d.z)})),
    });
    (result, text)
}

fn omega_out(r: &OmegaRelations, order: u64) -> (Value, String) {
    let n = r.a.presentation().n();
    let (tf, tg) = OmegaRelations::tabulated_degrees(n);
    let mut text = format!("A = {}\nB = {}\nC = {}\n", r.a, r.b, r.c);
    let _ = write!(
        text,
        "f(C) = {}\ng(C) = {}\n{}\ndeg f = {} (table {tf}), deg g = {} (table {tg})",
        r.f_c.display_in("C"),
        r.g_c.display_in("C"),
        r.relations.join("\n"),
        r.deg_f(),
        r.deg_g()
    );
    let result = json!({
        "kind": "generators_relations",
        "group_order": order,
        "A": s(&r.a),
        "B": s(&r.b),
        "C": s(&r.c),
        "rho": s(&r.rho),
        "f": r.f_c.display_in("C"),
        "g": r.g_c.display_in("C"),
        "relations": r.relations,
        "deg_f": r.deg_f(),
        "deg_g": r.deg_g(),
        "tabulated_deg_f": tf,
        "tabulated_deg_g": tg,
    });
    (result, text)
}

fn fixed_ring(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let f: FixedRingPresentation = if ctx.ops.g.is_empty() {
        let ell = ctx.order()?;
        gwa_core::fixed::fixed_ring_diagonal(&p, ell)?
    } else {
        let g = ctx.map(&p)?;
        gwa_core::fixed::fixed_ring_cyclic(&p, &g)?
    };
    Ok(match &f.kind {
        FixedRingKind::ClassicalGwa(c) => classical_out(c, f.group_order),
        FixedRingKind::GeneratorsRelations(r) => omega_out(r, f.group_order),
    })
}

fn value_json(v: Gldim) -> Value {
    match v {
        Gldim::One => json!(1),
        Gldim::Two => json!(2),
        Gldim::Infinite => json!("infinity"),
    }
}

fn verdict_out(v: &GldimVerdict) -> (Value, String) {
    let evidence = match &v.evidence {
        Evidence::MultipleRoot(g) => json!({"multiple_root": s(g)}),
        Evidence::CongruentPair(i) => json!({"congruent_pair": i}),
        Evidence::NoObstruction => json!({"no_obstruction": true}),
    };
    (
        json!({"value": value_json(v.value), "evidence": evidence}),
        format!("gldim = {}\n{}", v.value, v.evidence),
    )
}

fn gldim_cmd(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    Ok(verdict_out(&gldim_with(&p, ctx.bits)))
}

fn gldim_fixed_cmd(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let ell = ctx.order()?;
    Ok(verdict_out(&gldim_fixed_with(&p, ell, ctx.bits)?))
}

fn calabi_yau(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let v = match ctx.ops.order {
        Some(_) => {
            let ell = ctx.order()?;
            gldim_fixed_with(&p, ell, ctx.bits)?
        }
        None => gldim_with(&p, ctx.bits),
    };
    let cy = v.value != Gldim::Infinite;
    Ok((
        json!({"calabi_yau": cy, "gldim": value_json(v.value)}),
        format!("calabi-yau = {cy} (gldim = {})", v.value),
    ))
}

fn certificate_out(cert: &Certificate, verified: bool) -> (Value, String) {
    let doc: Value = serde_json::from_str(&cert.to_json()).expect("certificate JSON");
    let concl: Vec<String> = cert
        .conclusion
        .iter()
        .map(|(m, i)| format!("{} # e (step {i})", mono_string(m)))
        .collect();
    let basis = cert.basis_strings();
    let mut text = format!("{}\n", cert.description);
    let _ = write!(
        text,
        "group order {}, {} steps{}\nin the ideal: {}\nquotient basis ({}): {}",
        cert.group.len(),
        cert.steps.len(),
        if verified { ", replayed" } else { "" },
        concl.join(", "),
        basis.len(),
        basis.join(", ")
    );
    let result = json!({
        "certificate": doc,
        "replayed": verified,
        "basis_size": basis.len(),
        "findim_basis": basis,
    });
    (result, text)
}

fn witness(ctx: &mut Ctx) -> Out {
    if let Some(path) = &ctx.ops.verify {
        ctx.inputs.insert("verify".into(), s(path.display()));
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        // accept either a bare certificate or this command's JSON output
        let doc: Value =
            serde_json::from_str(&src).map_err(|e| CliError::Usage(format!("certificate: {e}")))?;
        let inner = doc.pointer("/result/certificate").cloned().unwrap_or(doc);
        let cert = Certificate::from_json(&inner.to_string())?;
        cert.replay()?;
        return Ok(certificate_out(&cert, true));
    }
    let p = ctx.pres()?;
    let g = ctx.map(&p)?;
    let cert = auslander_witness(&p, &g)?;
    Ok(certificate_out(&cert, true))
}

fn charp(ctx: &mut Ctx) -> Out {
    let p = ctx.pres()?;
    let prime = ctx.ops.p.ok_or_else(|| missing("--p"))?;
    ctx.inputs.insert("p".into(), Value::from(prime));
    let center = charp_center_check(p.a(), prime)?;
    let ks: Vec<u64> = (1..prime).collect();
    let identity = ks
        .iter()
        .map(|&k| cntp_identity_check(p.a(), prime, k))
        .collect::<gwa_core::Result<Vec<bool>>>()?;
    let all = identity.iter().all(|b| *b);
    let text = format!(
        "x^{prime}, y^{prime} central over F_{prime}: {center}\nx^k y - y x^k identity for k = 1..{}: {all}",
        prime - 1
    );
    Ok((json!({"center": center, "identity": identity}), text))
}
