//! Reflectivity, diagonalization of finite-order filtered automorphisms and
//! fixed rings of cyclic actions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::autos::{affine_coords, AutomorphismWord, CanonicalForm};
use crate::error::{Error, Result};
use crate::gwa::{GwaElement, GwaPresentation};
use crate::linalg::{nullspace, principal_minors_2, shift_diag, solve, transpose, Matrix};
use crate::poly::ZPoly;
use crate::scalars::{MultOrder, Scalar};

/// A reflection point `ρ` with `a(ρ - z) = (-1)^n a(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflectivity {
    pub rho: Scalar,
    pub n_odd: bool,
}

/// Solves for `ρ` from the `z^{n-1}` coefficient and checks the full identity.
pub fn reflective(a: &ZPoly) -> Option<Reflectivity> {
    let n = a.degree()?;
    if n == 0 {
        return None;
    }
    let lead = a.leading();
    let rho = &(&Scalar::from_int(-2) * &a.coeff(n - 1)) / &(&Scalar::from_int(n as i64) * &lead);
    let reflected = a.affine_substitute(&Scalar::from_int(-1), &rho);
    let target = if n % 2 == 0 { a.clone() } else { -a };
    (reflected == target).then_some(Reflectivity {
        rho,
        n_odd: n % 2 == 1,
    })
}

/// Writes a polynomial with `p(1+ρ-z) = p(z)` as a polynomial in
/// `C = z(1+ρ-z)`.
pub fn express_in_c(p: &ZPoly, rho: &Scalar) -> Result<ZPoly> {
    let one_rho = &Scalar::one() + rho;
    if p.affine_substitute(&Scalar::from_int(-1), &one_rho) != *p {
        return Err(Error::NotSymmetric);
    }
    let c = ZPoly::new(vec![Scalar::zero(), one_rho, Scalar::from_int(-1)]);
    let mut rest = p.clone();
    let mut q = vec![Scalar::zero(); p.deg() / 2 + 1];
    while !rest.is_zero() {
        let d = rest.deg();
        if d % 2 == 1 {
            return Err(Error::NotSymmetric);
        }
        let k = d / 2;
        // C^k has leading coefficient (-1)^k
        let coef = if k.is_multiple_of(2) {
            rest.leading()
        } else {
            -&rest.leading()
        };
        let mut ck = ZPoly::one();
        for _ in 0..k {
            ck = &ck * &c;
        }
        rest = &rest - &ck.scale(&coef);
        q[k] = coef;
    }
    Ok(ZPoly::new(q))
}

/// A basis `X, Y, Z` of `R` presenting it as a classical GWA with defining
/// polynomial `new_a`, on which the automorphism acts diagonally.
#[derive(Clone, Debug)]
pub struct DiagonalizationResult {
    pub x: GwaElement,
    pub y: GwaElement,
    pub z: GwaElement,
    /// `a'(Z)` with `YX = a'(Z)`.
    pub new_a: ZPoly,
    /// `g(X) = γX`, `g(Y) = γ⁻¹Y`.
    pub gamma: Scalar,
    pub k_plus: Scalar,
    pub k_minus: Scalar,
}

/// One identity checked on a diagonalization.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
}

impl DiagonalizationResult {
    /// The four ring relations and three eigen-relations, each evaluated.
    pub fn identities(&self, g: &AutomorphismWord) -> Vec<IdentityCheck> {
        let pres = g.presentation();
        let one = pres.one();
        let zm1 = &self.z - &one;
        let zp1 = &self.z + &one;
        let gi = self.gamma.inv().unwrap_or_else(|_| Scalar::zero());
        let checks = [
            ("XZ = (Z - 1)X", &self.x * &self.z == &zm1 * &self.x),
            ("YZ = (Z + 1)Y", &self.y * &self.z == &zp1 * &self.y),
            (
                "YX = a'(Z)",
                &self.y * &self.x == self.z.eval_poly(&self.new_a),
            ),
            (
                "XY = a'(Z - 1)",
                &self.x * &self.y == zm1.eval_poly(&self.new_a),
            ),
            (
                "g(X) = gamma X",
                g.apply(&self.x).ok() == Some(self.x.scale(&self.gamma)),
            ),
            (
                "g(Y) = gamma^-1 Y",
                g.apply(&self.y).ok() == Some(self.y.scale(&gi)),
            ),
            ("g(Z) = Z", g.apply(&self.z).ok().as_ref() == Some(&self.z)),
        ];
        checks
            .into_iter()
            .map(|(identity, holds)| IdentityCheck {
                identity: identity.into(),
                holds,
            })
            .collect()
    }

    fn verified(self, g: &AutomorphismWord) -> Result<Self> {
        if let Some(bad) = self.identities(g).into_iter().find(|c| !c.holds) {
            return Err(Error::DegenerateSplit(format!("{} fails", bad.identity)));
        }
        Ok(self)
    }
}

/// Element `v0·b0 + v1·b1 + …`.
fn combine(basis: &[GwaElement], v: &[Scalar]) -> GwaElement {
    let pres = basis[0].presentation();
    basis
        .iter()
        .zip(v)
        .fold(pres.zero(), |acc, (b, c)| &acc + &b.scale(c))
}

/// Coordinates of an affine element in `[x, y, z, 1]`.
fn coords4(e: &GwaElement) -> Result<Vec<Scalar>> {
    affine_coords(e)
        .map(|c| c.to_vec())
        .ok_or_else(|| Error::DegenerateSplit(format!("{e} leaves the span of x, y, z, 1")))
}

/// `true` for the representative of `{c, -c}` that the basis uses: positive
/// real part, else positive imaginary part.
fn canonically_positive(c: &Scalar) -> bool {
    let e = c.embed(64);
    let zero = num_rational::BigRational::from_integer(0.into());
    if !e.re.contains_zero() {
        return e.re.lo > zero;
    }
    if !e.im.contains_zero() {
        return e.im.lo > zero;
    }
    c.rational_coordinates()
        .first()
        .map(|(_, q)| *q > zero)
        .unwrap_or(true)
}

/// Scales `v` so the first nonzero entry in the given index order is 1.
fn normalize_first(v: &mut [Scalar], order: &[usize]) {
    if let Some(&i) = order.iter().find(|&&i| !v[i].is_zero()) {
        let inv = v[i].inv().expect("nonzero");
        for c in v.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

/// Expresses `e` as `c0 + c1 W + … + ck W^k`.
fn poly_in(e: &GwaElement, w: &GwaElement, k: usize) -> Option<ZPoly> {
    let pres = w.presentation();
    let mut pows = vec![pres.one()];
    for _ in 0..k {
        let next = pows.last().unwrap() * w;
        pows.push(next);
    }
    let mut keys = BTreeSet::new();
    for el in pows.iter().chain(std::iter::once(e)) {
        for (d, p) in el.terms() {
            for i in 0..=p.deg() {
                keys.insert((*d, i));
            }
        }
    }
    let rows: Matrix = keys
        .iter()
        .map(|&(d, i)| pows.iter().map(|pw| pw.monomial_coeff(d, i)).collect())
        .collect();
    let rhs: Vec<Scalar> = keys.iter().map(|&(d, i)| e.monomial_coeff(d, i)).collect();
    solve(&rows, &rhs).map(ZPoly::new)
}

fn roots_of_quadratic(p: &ZPoly) -> (Scalar, Scalar) {
    let (c0, c1, c2) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &(&c1 * &c1) - &(&Scalar::from_int(4) * &(&c0 * &c2));
    let s = disc.sqrt();
    let den = &Scalar::from_int(2) * &c2;
    (&(&(-&c1) + &s) / &den, &(&(-&c1) - &s) / &den)
}

/// Diagonalizes a filtered automorphism of the first Weyl algebra:
/// `XY - YX + 1 = 0`, `g(X) = βX`, `g(Y) = β⁻¹Y`.
pub fn diagonalize_weyl(g: &AutomorphismWord) -> Result<DiagonalizationResult> {
    let pres = g.presentation();
    if pres.n() != 1 || *pres.a() != ZPoly::var() {
        return Err(Error::NotWeyl);
    }
    if !g.is_filtered() {
        return Err(Error::NotFiltered);
    }
    if g.order()? == MultOrder::Infinite {
        return Err(Error::InfiniteOrder);
    }
    let basis = [pres.x(), pres.y(), pres.one()];
    let mut gm: Matrix = Vec::new();
    for im in &g.images()[..2] {
        let c = coords4(im)?;
        gm.push(vec![c[0].clone(), c[1].clone(), c[3].clone()]);
    }
    gm.push(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    let gt = transpose(&gm);
    let w = &gm[0][0] + &gm[1][1];
    let disc = &(&w * &w) - &Scalar::from_int(4);
    let beta = &(&w + &disc.sqrt()) * &Scalar::rational(1, 2);
    let (mut xv, mut yv) = if beta.is_one() {
        // finite order with both eigenvalues 1 forces the identity
        (
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
        )
    } else if beta == Scalar::from_int(-1) {
        let ns = nullspace(&shift_diag(&gt, &beta));
        if ns.len() != 2 {
            return Err(Error::DegenerateSplit(
                "eigenvalue -1 is not semisimple".into(),
            ));
        }
        (ns[0].clone(), ns[1].clone())
    } else {
        let binv = beta.inv()?;
        let nx = nullspace(&shift_diag(&gt, &beta));
        let ny = nullspace(&shift_diag(&gt, &binv));
        match (nx.first(), ny.first()) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::DegenerateSplit("missing eigenvector".into())),
        }
    };
    normalize_first(&mut yv, &[1, 0, 2]);
    let y = combine(&basis, &yv);
    let x0 = combine(&basis, &xv);
    let c = (&(&x0 * &y) - &(&y * &x0))
        .as_scalar()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::DegenerateSplit("eigenvectors do not pair".into()))?;
    let s = (-&Scalar::one()).checked_div(&c)?;
    for v in xv.iter_mut() {
        *v = &*v * &s;
    }
    let x = combine(&basis, &xv);
    let z = &y * &x;
    DiagonalizationResult {
        x,
        y,
        z,
        new_a: ZPoly::var(),
        gamma: beta,
        k_plus: Scalar::zero(),
        k_minus: Scalar::zero(),
    }
    .verified(g)
}

/// Diagonalizes a filtered automorphism when `deg a = 2`.
///
/// `Z` spans the fixed vectors of `g` in `span{x, y, z}` (constant term
/// zero); `X`, `Y` are the eigenvectors of `ad Z` for `±1`, scaled so that
/// `YX` is monic in `Z`.
pub fn diagonalize_deg2(g: &AutomorphismWord) -> Result<DiagonalizationResult> {
    let pres = g.presentation();
    if pres.n() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: pres.n(),
        });
    }
    if !g.is_filtered() {
        return Err(Error::NotFiltered);
    }
    let basis = [pres.x(), pres.y(), pres.z(), pres.one()];
    let mut gm: Matrix = g.images().iter().map(coords4).collect::<Result<_>>()?;
    gm.push(vec![
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::one(),
    ]);
    let fixed = nullspace(&shift_diag(&transpose(&gm), &Scalar::one()));
    if fixed.len() != 2 {
        return Err(Error::DegenerateSplit(format!(
            "fixed space has dimension {}",
            fixed.len()
        )));
    }
    let mut zv = fixed
        .into_iter()
        .find(|v| v[..3].iter().any(|c| !c.is_zero()))
        .expect("a non-constant fixed vector");
    zv[3] = Scalar::zero();
    let z0 = combine(&basis, &zv);

    // ad Z0 on span{x, y, z, 1}: column j holds [Z0, b_j]
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|b| coords4(&(&(&z0 * b) - &(b * &z0))))
        .collect::<Result<_>>()?;
    let ad = transpose(&cols);
    let kappa2 = -&principal_minors_2(&ad);
    if kappa2.is_zero() {
        return Err(Error::DegenerateSplit("ad Z is nilpotent".into()));
    }
    let mut kappa = kappa2.sqrt();
    let lead = [2usize, 0, 1]
        .iter()
        .map(|&i| &zv[i] / &kappa)
        .find(|c| !c.is_zero())
        .expect("nonzero");
    if !canonically_positive(&lead) {
        kappa = -&kappa;
    }
    let kinv = kappa.inv()?;
    for c in zv.iter_mut() {
        *c = &*c * &kinv;
    }
    let z = combine(&basis, &zv);
    let adz: Matrix = ad
        .iter()
        .map(|row| row.iter().map(|c| c * &kinv).collect())
        .collect();
    let one = Scalar::one();
    let xs = nullspace(&shift_diag(&adz, &one));
    let ys = nullspace(&shift_diag(&adz, &-&one));
    let (Some(xv), Some(mut yv)) = (xs.into_iter().next(), ys.into_iter().next()) else {
        return Err(Error::DegenerateSplit(
            "ad Z has no eigenvector for 1 or -1".into(),
        ));
    };
    normalize_first(&mut yv, &[1, 0, 2, 3]);
    let y = combine(&basis, &yv);
    let x0 = combine(&basis, &xv);
    let yx = poly_in(&(&y * &x0), &z, 2)
        .filter(|p| p.deg() == 2)
        .ok_or_else(|| Error::DegenerateSplit("YX is not quadratic in Z".into()))?;
    let c2inv = yx.leading().inv()?;
    let x = x0.scale(&c2inv);
    let new_a = yx.scale(&c2inv);
    let key = x
        .terms()
        .iter()
        .next()
        .map(|(d, p)| (*d, p.deg()))
        .expect("X nonzero");
    let gamma = g
        .apply(&x)?
        .monomial_coeff(key.0, key.1)
        .checked_div(&x.monomial_coeff(key.0, key.1))?;
    let (k_plus, k_minus) = roots_of_quadratic(&new_a);
    DiagonalizationResult {
        x,
        y,
        z,
        new_a,
        gamma,
        k_plus,
        k_minus,
    }
    .verified(g)
}

/// `R^G` as a classical GWA `k[Z][X^ℓ, Y^ℓ; σ^ℓ, h_ℓ]`.
#[derive(Clone, Debug)]
pub struct ClassicalFixedRing {
    pub ell: u64,
    /// `h_ℓ(Z) = ∏_{i=0}^{ℓ-1} a'(Z + i)`; the twist is `Z ↦ Z - ℓ`.
    pub defining: ZPoly,
    /// `X^ℓ, Y^ℓ, Z` as elements of the original ring.
    pub generators: [GwaElement; 3],
    /// The diagonalizing basis, when one was needed.
    pub basis: Option<DiagonalizationResult>,
    /// Renormalization with `W = Z/ℓ` and a monic defining polynomial.
    pub rescaled: GwaPresentation,
    /// Generators of the renormalized presentation inside the original ring.
    pub rescaled_generators: [GwaElement; 3],
}

/// Relations among `A, B, C` generating an `Ω`-type fixed ring.
#[derive(Clone, Debug)]
pub struct OmegaRelations {
    pub a: GwaElement,
    pub b: GwaElement,
    pub c: GwaElement,
    pub rho: Scalar,
    pub beta: Scalar,
    pub n_odd: bool,
    /// `[B,A] - kA² = β^k f(C)` with `k = 1` (`n` even) or `2` (`n` odd).
    pub f_c: ZPoly,
    /// `B² - sBA + CA² = β^k g(C)`.
    pub g_c: ZPoly,
    /// The four relations in display form.
    pub relations: Vec<String>,
}

impl OmegaRelations {
    pub fn deg_f(&self) -> usize {
        self.f_c.deg()
    }

    pub fn deg_g(&self) -> usize {
        self.g_c.deg()
    }

    /// Degrees stated for `f`, `g` in the literature table, for comparison.
    pub fn tabulated_degrees(n: usize) -> (usize, usize) {
        if n.is_multiple_of(2) {
            (n, 1 + n / 2)
        } else {
            (2 * n, 2 * n + 1)
        }
    }
}

#[derive(Clone, Debug)]
pub enum FixedRingKind {
    ClassicalGwa(ClassicalFixedRing),
    GeneratorsRelations(OmegaRelations),
}

#[derive(Clone, Debug)]
pub struct FixedRingPresentation {
    pub kind: FixedRingKind,
    pub group_order: u64,
}

impl FixedRingPresentation {
    /// Generators inside the original ring.
    pub fn generators(&self) -> Vec<GwaElement> {
        match &self.kind {
            FixedRingKind::ClassicalGwa(c) => c.generators.to_vec(),
            FixedRingKind::GeneratorsRelations(r) => vec![r.a.clone(), r.b.clone(), r.c.clone()],
        }
    }
}

/// `∏_{i=0}^{ℓ-1} p(z + i)`.
pub fn jordan_wells_product(p: &ZPoly, ell: u64) -> ZPoly {
    (0..ell as i64).fold(ZPoly::one(), |acc, i| &acc * &p.sigma_power(-i))
}

fn fixed_ring_from_basis(
    x: &GwaElement,
    y: &GwaElement,
    z: &GwaElement,
    new_a: &ZPoly,
    ell: u64,
    basis: Option<DiagonalizationResult>,
) -> Result<ClassicalFixedRing> {
    let xl = x.pow(ell as u32);
    let yl = y.pow(ell as u32);
    let h = jordan_wells_product(new_a, ell);
    if &yl * &xl != z.eval_poly(&h) {
        return Err(Error::HypothesisViolation(
            "Y^l X^l differs from h_l(Z)".into(),
        ));
    }
    let shifted = z - &x.presentation().scalar(Scalar::from_int(ell as i64));
    if &xl * &yl != shifted.eval_poly(&h) {
        return Err(Error::HypothesisViolation(
            "X^l Y^l differs from h_l(Z - l)".into(),
        ));
    }
    let l = Scalar::from_int(ell as i64);
    let stretched = h.affine_substitute(&l, &Scalar::zero());
    let lead = stretched.leading();
    let rescaled = GwaPresentation::new(stretched.monic())?;
    let rescaled_generators = [xl.scale(&lead.inv()?), yl.clone(), z.scale(&l.inv()?)];
    Ok(ClassicalFixedRing {
        ell,
        defining: h,
        generators: [xl, yl, z.clone()],
        basis,
        rescaled,
        rescaled_generators,
    })
}

/// Fixed ring of `⟨Θ_λ⟩` with `λ` of order `ℓ`: `k[z][x^ℓ, y^ℓ; σ^ℓ, h_ℓ]`.
pub fn fixed_ring_diagonal(p: &GwaPresentation, ell: i64) -> Result<FixedRingPresentation> {
    if ell < 2 {
        return Err(Error::BadOrder(ell));
    }
    let c = fixed_ring_from_basis(&p.x(), &p.y(), &p.z(), p.a(), ell as u64, None)?;
    Ok(FixedRingPresentation {
        kind: FixedRingKind::ClassicalGwa(c),
        group_order: ell as u64,
    })
}

/// Fixed ring of the cyclic group generated by a filtered `g` of finite order.
pub fn fixed_ring_cyclic(
    p: &GwaPresentation,
    g: &AutomorphismWord,
) -> Result<FixedRingPresentation> {
    if g.presentation() != p {
        return Err(Error::PresentationMismatch);
    }
    if !g.is_filtered() {
        return Err(Error::NotCyclicCase);
    }
    let ell = match g.order()? {
        MultOrder::Finite(l) if l >= 2 => l,
        MultOrder::Finite(l) => return Err(Error::BadOrder(l as i64)),
        MultOrder::Infinite => return Err(Error::NotCyclicCase),
    };
    let n = p.n();
    let out = match n {
        1 | 2 => {
            let d = if n == 1 {
                diagonalize_weyl(g)?
            } else {
                diagonalize_deg2(g)?
            };
            let c = fixed_ring_from_basis(&d.x, &d.y, &d.z, &d.new_a, ell, Some(d.clone()))?;
            FixedRingPresentation {
                kind: FixedRingKind::ClassicalGwa(c),
                group_order: ell,
            }
        }
        _ => match g.canonical_form()? {
            CanonicalForm::Theta(_) => fixed_ring_diagonal(p, ell as i64)?,
            CanonicalForm::ThetaOmega(c) => {
                let r = omega_invariants(p, &c.inv()?)?;
                FixedRingPresentation {
                    kind: FixedRingKind::GeneratorsRelations(r),
                    group_order: ell,
                }
            }
            other => return Err(Error::NonCanonical(other.to_string())),
        },
    };
    for gen in out.generators() {
        if g.apply(&gen)? != gen {
            return Err(Error::HypothesisViolation(format!(
                "generator {gen} is not fixed"
            )));
        }
    }
    Ok(out)
}

/// Generators `A, B, C` of the ring fixed by `Ω ∘ Θ_β` and their relations,
/// with `f(C)`, `g(C)` computed explicitly.
pub fn omega_invariants(p: &GwaPresentation, beta: &Scalar) -> Result<OmegaRelations> {
    let n = p.n();
    if n < 3 {
        return Err(Error::DegreeTooSmall(n));
    }
    if beta.is_zero() {
        return Err(Error::ZeroBeta);
    }
    let refl = reflective(p.a()).ok_or(Error::NotReflective)?;
    let rho = refl.rho.clone();
    let odd = refl.n_odd;
    let one_rho = &Scalar::one() + &rho;
    let z = p.z();
    let zbar = &p.scalar(one_rho.clone()) - &z;
    let c = &z * &zbar;
    let k = if odd { 2 } else { 1 };
    let bk = beta.pow(k as i64);
    let xk = p.x().pow(k);
    let yk = p.y().pow(k).scale(&bk);
    let a = &xk + &yk;
    let b = &(&z * &xk) + &(&zbar * &yk);
    let s = |v: i64| Scalar::from_int(v);
    let rho_s = |e: &GwaElement, c: Scalar| e.scale(&c);

    let ac = a.commutator(&c);
    let bc = b.commutator(&c);
    let ba = b.commutator(&a);
    let bb = &b * &b;
    let a2 = &a * &a;
    let ca = &c * &a;
    let ca2 = &c * &a2;
    let (ac_rhs, bc_rhs, ba_k, bb_s, text) = if odd {
        (
            &rho_s(&b, s(4)) - &rho_s(&a, &s(2) * &(&s(3) + &rho)),
            &rho_s(&b, &s(2) * &(&rho - &s(1))) - &rho_s(&ca, s(4)),
            s(2),
            &rho - &s(1),
            [
                "[A,C] = 4B - 2(3+rho)A",
                "[B,C] = 2(rho-1)B - 4CA",
                "[B,A] = 2A^2 + beta^2 f(C)",
                "B^2 = (rho-1)BA - CA^2 + beta^2 g(C)",
            ],
        )
    } else {
        (
            &rho_s(&b, s(2)) - &rho_s(&a, &s(2) + &rho),
            &rho_s(&b, rho.clone()) - &rho_s(&ca, s(2)),
            s(1),
            rho.clone(),
            [
                "[A,C] = 2B - (2+rho)A",
                "[B,C] = rho B - 2CA",
                "[B,A] = A^2 + beta f(C)",
                "B^2 = rho BA - CA^2 + beta g(C)",
            ],
        )
    };
    if ac != ac_rhs {
        return Err(Error::HypothesisViolation(format!("{} fails", text[0])));
    }
    if bc != bc_rhs {
        return Err(Error::HypothesisViolation(format!("{} fails", text[1])));
    }
    // the residuals carry β^k, not β, when n is odd
    let binv = bk.inv()?;
    let residual = |e: GwaElement, name: &str| -> Result<ZPoly> {
        let r = e.as_poly().ok_or_else(|| {
            Error::HypothesisViolation(format!("{name}: residual is not in k[z]"))
        })?;
        express_in_c(&r.scale(&binv), &rho)
    };
    let f_c = residual(&ba - &a2.scale(&ba_k), text[2])?;
    let g_c = residual(&(&bb - &(&b * &a).scale(&bb_s)) + &ca2, text[3])?;
    // re-verify with the recovered polynomials
    let fe = c.eval_poly(&f_c).scale(&bk);
    let ge = c.eval_poly(&g_c).scale(&bk);
    if ba != &a2.scale(&ba_k) + &fe || bb != &(&(&b * &a).scale(&bb_s) - &ca2) + &ge {
        return Err(Error::HypothesisViolation(
            "recovered f(C), g(C) do not reproduce".into(),
        ));
    }
    let g = AutomorphismWord::omega(p)?.compose(&AutomorphismWord::theta(p, beta.clone())?)?;
    for e in [&a, &b, &c] {
        if g.apply(e)? != *e {
            return Err(Error::HypothesisViolation(format!("{e} is not invariant")));
        }
    }
    Ok(OmegaRelations {
        a,
        b,
        c,
        rho,
        beta: beta.clone(),
        n_odd: odd,
        f_c,
        g_c,
        relations: text.iter().map(|s| s.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(c: &[i64]) -> GwaPresentation {
        GwaPresentation::new(ZPoly::from_ints(c)).unwrap()
    }

    #[test]
    fn reflection_points() {
        assert_eq!(
            reflective(&ZPoly::from_ints(&[0, -3, 1])).unwrap().rho,
            Scalar::from_int(3)
        );
        assert_eq!(
            reflective(&ZPoly::from_ints(&[0, 1])).unwrap().rho,
            Scalar::zero()
        );
        assert!(reflective(&ZPoly::from_ints(&[0, 3, -4, 1])).is_none());
    }

    #[test]
    fn express_examples() {
        let rho = Scalar::from_int(2);
        let c = ZPoly::new(vec![
            Scalar::zero(),
            Scalar::from_int(3),
            Scalar::from_int(-1),
        ]);
        assert_eq!(express_in_c(&c, &rho).unwrap(), ZPoly::var());
        assert_eq!(express_in_c(&-&c, &rho).unwrap(), -&ZPoly::var());
        assert_eq!(
            express_in_c(&ZPoly::var(), &Scalar::zero()),
            Err(Error::NotSymmetric)
        );
        let sq = &c * &c;
        let p = &sq + &ZPoly::constant(Scalar::from_int(5));
        let q = express_in_c(&p, &rho).unwrap();
        assert_eq!(q.compose(&c), p);
    }

    #[test]
    fn jordan_wells() {
        let r = pres(&[0, 1]);
        let f = fixed_ring_diagonal(&r, 2).unwrap();
        let FixedRingKind::ClassicalGwa(c) = f.kind else {
            panic!()
        };
        assert_eq!(c.defining, ZPoly::from_ints(&[0, 1, 1]));
        let r = pres(&[0, -3, 1]);
        let f = fixed_ring_diagonal(&r, 2).unwrap();
        let FixedRingKind::ClassicalGwa(c) = f.kind else {
            panic!()
        };
        let expect = &(&ZPoly::from_ints(&[0, -3, 1]) * &ZPoly::from_ints(&[1, 1]))
            * &ZPoly::from_ints(&[-2, 1]);
        assert_eq!(c.defining, expect);
        assert_eq!(fixed_ring_diagonal(&r, 1).unwrap_err(), Error::BadOrder(1));
    }

    #[test]
    fn omega_example_roots() {
        let r = pres(&[0, -3, 1]);
        let g = AutomorphismWord::omega(&r).unwrap();
        let d = diagonalize_deg2(&g).unwrap();
        assert_eq!(d.k_plus, Scalar::from_int(1));
        assert_eq!(d.k_minus, Scalar::from_int(-2));
        assert_eq!(d.gamma, Scalar::from_int(-1));
    }

    #[test]
    fn pi_example_z() {
        let r = pres(&[0, -3, 1]);
        let beta = Scalar::root_of_unity(3).unwrap();
        let alpha = Scalar::from_int(2);
        let g = crate::autos::parse_automorphism(&r, "phi(1, 2) * theta(zeta(3))").unwrap();
        let d = diagonalize_deg2(&g).unwrap();
        let coef = &(&alpha * &beta) / &(&beta - &Scalar::one());
        assert_eq!(d.z, &r.z() + &r.y().scale(&coef));
        assert_eq!(d.gamma, beta);
    }

    #[test]
    fn weyl_rotation() {
        let r = pres(&[0, 1]);
        let g = AutomorphismWord::from_images(&r, [r.y(), -&r.x(), r.z()]);
        // z = yx ↦ (-x)(y) = -(z - 1), so the images above are inconsistent
        assert!(g.is_err());
        let zimg = &(&r.x() * &r.y()).scale(&Scalar::from_int(-1)) + &r.zero();
        let g = AutomorphismWord::from_images(&r, [r.y(), -&r.x(), zimg]).unwrap();
        let d = diagonalize_weyl(&g).unwrap();
        assert_eq!(d.gamma.pow(2), Scalar::from_int(-1));
    }

    #[test]
    fn omega_relations_n4() {
        let r = pres(&[0, -6, 11, -6, 1]);
        let o = omega_invariants(&r, &Scalar::from_int(2)).unwrap();
        assert!(!o.n_odd);
        let r = pres(&[0, -1, 0, 1]);
        let o = omega_invariants(&r, &Scalar::from_int(3)).unwrap();
        assert!(o.n_odd);
    }
}
