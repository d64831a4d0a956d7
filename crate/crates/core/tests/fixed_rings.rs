use gwa_core::autos::{parse_automorphism, substitute, AutomorphismWord};
use gwa_core::fixed::{
    diagonalize_deg2, express_in_c, fixed_ring_cyclic, fixed_ring_diagonal, jordan_wells_product,
    omega_invariants, reflective, FixedRingKind, OmegaRelations,
};
use gwa_core::parse::parse_scalar;
use gwa_core::{GwaPresentation, Scalar, ZPoly};
use proptest::prelude::*;

fn pres(c: &[i64]) -> GwaPresentation {
    GwaPresentation::new(ZPoly::from_ints(c)).unwrap()
}

fn zt(t: &Scalar) -> GwaPresentation {
    GwaPresentation::new(ZPoly::new(vec![Scalar::zero(), -t, Scalar::one()])).unwrap()
}

fn sc(s: &str) -> Scalar {
    parse_scalar(s).unwrap()
}

#[test]
fn diagonalization_satisfies_all_identities() {
    let ts = [sc("3"), sc("sqrt(2)"), sc("1/2")];
    let lams = [sc("0"), sc("1"), sc("-1/2")];
    let mus = [sc("0"), sc("2")];
    let betas = [sc("-1"), sc("zeta(3)")];
    let mut count = 0;
    for t in &ts {
        let p = zt(t);
        let omega = AutomorphismWord::omega(&p).unwrap();
        for lam in &lams {
            for mu in &mus {
                for beta in &betas {
                    let tau =
                        AutomorphismWord::tau(&p, lam.clone(), mu.clone(), beta.clone()).unwrap();
                    for g in [tau.clone(), tau.compose(&omega).unwrap()] {
                        let d = diagonalize_deg2(&g).unwrap_or_else(|e| panic!("{g}: {e}"));
                        let ids = d.identities(&g);
                        assert_eq!(ids.len(), 7);
                        assert!(ids.iter().all(|c| c.holds), "{g}: {ids:?}");
                        count += 1;
                    }
                }
            }
        }
    }
    assert!(count >= 20);
}

#[test]
fn omega_at_three_splits_as_one_and_minus_two() {
    let p = pres(&[0, -3, 1]);
    let d = diagonalize_deg2(&AutomorphismWord::omega(&p).unwrap()).unwrap();
    assert_eq!(d.k_plus, Scalar::one());
    assert_eq!(d.k_minus, Scalar::from_int(-2));
    assert_eq!(d.gamma, Scalar::from_int(-1));
}

#[test]
fn rotation_with_translation_has_shifted_z() {
    let p = pres(&[0, -3, 1]);
    let alpha = Scalar::from_int(2);
    let beta = Scalar::root_of_unity(3).unwrap();
    let g = AutomorphismWord::phi(&p, 1, alpha.clone())
        .unwrap()
        .compose(&AutomorphismWord::theta(&p, beta.clone()).unwrap())
        .unwrap();
    let d = diagonalize_deg2(&g).unwrap();
    let coef = &(&alpha * &beta) / &(&beta - &Scalar::one());
    assert_eq!(d.z, &p.z() + &p.y().scale(&coef));
    assert_eq!(d.gamma, beta);
}

fn classical(f: &gwa_core::fixed::FixedRingPresentation) -> &gwa_core::fixed::ClassicalFixedRing {
    match &f.kind {
        FixedRingKind::ClassicalGwa(c) => c,
        FixedRingKind::GeneratorsRelations(_) => panic!("expected a classical fixed ring"),
    }
}

#[test]
fn fixed_ring_degree_law() {
    let p2 = pres(&[0, -3, 1]);
    let p3 = pres(&[1, 2, 0, 1]);
    let cases = [
        (&p2, "theta(-1)"),
        (&p2, "omega"),
        (&p2, "phi(1, 2) * theta(zeta(3))"),
        (&p3, "theta(-1)"),
    ];
    for (p, src) in cases {
        let g = parse_automorphism(p, src).unwrap();
        let f = fixed_ring_cyclic(p, &g).unwrap();
        let c = classical(&f);
        assert_eq!(
            c.defining.deg() as u64,
            p.n() as u64 * f.group_order,
            "{src}"
        );
        for gen in f.generators() {
            assert_eq!(g.apply(&gen).unwrap(), gen, "{src}");
        }
    }
}

#[test]
fn y_ell_x_ell_is_the_product_polynomial() {
    let p = pres(&[2, 0, -1, 1]);
    for ell in 2..=4u32 {
        let lhs = &p.y().pow(ell) * &p.x().pow(ell);
        let h = jordan_wells_product(p.a(), ell as u64);
        assert_eq!(lhs, p.z().eval_poly(&h));
        let c = classical(&fixed_ring_diagonal(&p, ell as i64).unwrap()).clone();
        assert_eq!(c.defining, h);
    }
}

#[test]
fn fixed_ring_is_itself_a_classical_gwa() {
    let p = pres(&[0, -3, 1]);
    let f = fixed_ring_diagonal(&p, 3).unwrap();
    let c = classical(&f);
    let r = &c.rescaled;
    let [x, y, z] = &c.rescaled_generators;
    assert_eq!(y * x, z.eval_poly(r.a()));
    assert_eq!(x * y, z.eval_poly(&r.a().sigma_power(1)));
    assert_eq!(x * z, &(z - &p.one()) * x);
}

#[test]
fn weyl_fixed_by_sign_then_omega() {
    // R^<Θ_{-1}> for the Weyl algebra is classical with W(W + 1/2); the
    // restriction of Ω to it then cuts out R^<Θ_{-1}, Ω>.
    let w = pres(&[0, 1]);
    let first = fixed_ring_diagonal(&w, 2).unwrap();
    let c = classical(&first);
    assert_eq!(
        c.rescaled.a(),
        &ZPoly::new(vec![Scalar::zero(), Scalar::rational(1, 2), Scalar::one()])
    );
    let refl = reflective(c.rescaled.a()).unwrap();
    assert_eq!(refl.rho, Scalar::rational(-1, 2));
    // Ω of R restricts to X ↦ kY, W ↦ 1/2 - W, which is Θ_{1/k} ∘ Ω there
    let outer = AutomorphismWord::omega(&w).unwrap();
    let sign = AutomorphismWord::theta(&w, Scalar::from_int(-1)).unwrap();
    let [x2, y2, _] = &c.rescaled_generators;
    let image = outer.apply(x2).unwrap();
    let k = image
        .monomial_coeff(-2, 0)
        .checked_div(&y2.monomial_coeff(-2, 0))
        .unwrap();
    assert_eq!(image, y2.scale(&k));
    let induced = AutomorphismWord::theta(&c.rescaled, k.inv().unwrap())
        .unwrap()
        .compose(&AutomorphismWord::omega(&c.rescaled).unwrap())
        .unwrap();
    let second = fixed_ring_cyclic(&c.rescaled, &induced).unwrap();
    assert_eq!(second.group_order, 2);
    assert_eq!(classical(&second).defining.deg(), 4);
    for gen in second.generators() {
        let inside = substitute(&gen, &c.rescaled_generators);
        assert_eq!(sign.apply(&inside).unwrap(), inside);
        assert_eq!(outer.apply(&inside).unwrap(), inside);
    }
}

#[test]
fn omega_invariant_relations() {
    for (c, beta) in [
        (&[0i64, -1, 0, 1][..], "2"),
        (&[0, -6, 11, -6, 1][..], "zeta(3)"),
    ] {
        let p = pres(c);
        let r: OmegaRelations = omega_invariants(&p, &sc(beta)).unwrap();
        assert_eq!(r.relations.len(), 4);
        let g = parse_automorphism(&p, &format!("omega * theta({beta})")).unwrap();
        for e in [&r.a, &r.b, &r.c] {
            assert_eq!(&g.apply(e).unwrap(), e);
        }
        assert!(r.deg_f() > 0 || !r.f_c.is_zero());
    }
}

proptest! {
    #[test]
    fn express_in_c_round_trip(coeffs in prop::collection::vec(-5i64..=5, 1..5), rho in -3i64..=3) {
        let rho = Scalar::from_int(rho);
        let one_rho = &Scalar::one() + &rho;
        let cpoly = ZPoly::new(vec![Scalar::zero(), one_rho, Scalar::from_int(-1)]);
        let q = ZPoly::from_ints(&coeffs);
        let p = q.compose(&cpoly);
        let back = express_in_c(&p, &rho).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(back.compose(&cpoly), p);
    }
}
