//! Automorphisms built from the generators `Θ_β`, `Ψ_{m,λ}`, `Φ_{m,λ}` and `Ω`.
//!
//! An automorphism is stored with its resolved images of `x`, `y`, `z`;
//! equality is always decided on images. Composition follows function
//! notation: `(g ∘ h)(r) = g(h(r))`, and a word `[w0, w1, …]` means `w0 ∘ w1 ∘ …`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::reflective;
use crate::gwa::{GwaElement, GwaPresentation};
use crate::linalg::{det, principal_minors_2};
use crate::parse::{eval_scalar, parse_expr, Expr, Node};
use crate::poly::ZPoly;
use crate::scalars::{MultOrder, Scalar};

/// One generator symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `x ↦ βx, y ↦ β⁻¹y, z ↦ z`.
    Theta(Scalar),
    /// `x ↦ x, y ↦ y + Σ λ^i/i! Δ_m^i(a) x^{im-1}, z ↦ z - mλx^m`.
    Psi(u32, Scalar),
    /// `x ↦ x + Σ (-λ)^i/i! y^{im-1} Δ_m^i(a), y ↦ y, z ↦ z + mλy^m`.
    Phi(u32, Scalar),
    /// `x ↦ y, y ↦ (-1)^n x, z ↦ 1 + ρ - z`; needs a reflective `a`.
    Omega,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Theta(b) => write!(f, "theta({b})"),
            Generator::Psi(m, l) => write!(f, "psi({m}, {l})"),
            Generator::Phi(m, l) => write!(f, "phi({m}, {l})"),
            Generator::Omega => write!(f, "omega"),
        }
    }
}

/// A composition of generators together with its images of `x`, `y`, `z`.
#[derive(Clone)]
pub struct AutomorphismWord {
    pres: GwaPresentation,
    word: Vec<Generator>,
    images: [GwaElement; 3],
}

/// Normal forms of filtered automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    /// `τ_{λ,μ,β} = Ψ_{1,λ} ∘ Φ_{1,μ} ∘ Θ_β` (`n = 2`).
    Tau {
        lambda: Scalar,
        mu: Scalar,
        beta: Scalar,
    },
    /// `τ_{λ,μ,β} ∘ Ω` (`n = 2`).
    TauOmega {
        lambda: Scalar,
        mu: Scalar,
        beta: Scalar,
    },
    /// `Θ_β` (`n ≥ 3`).
    Theta(Scalar),
    /// `Θ_β ∘ Ω` (`n ≥ 3`).
    ThetaOmega(Scalar),
    /// `x ↦ a1 x + a2 y + a3`, `y ↦ b1 x + b2 y + b3` (`n = 1`).
    WeylAffine { a: [Scalar; 3], b: [Scalar; 3] },
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::Tau { lambda, mu, beta } => {
                write!(f, "tau(lambda = {lambda}, mu = {mu}, beta = {beta})")
            }
            CanonicalForm::TauOmega { lambda, mu, beta } => {
                write!(
                    f,
                    "tau(lambda = {lambda}, mu = {mu}, beta = {beta}) * omega"
                )
            }
            CanonicalForm::Theta(b) => write!(f, "theta({b})"),
            CanonicalForm::ThetaOmega(b) => write!(f, "theta({b}) * omega"),
            CanonicalForm::WeylAffine { a, b } => write!(
                f,
                "x -> ({})*x + ({})*y + ({}), y -> ({})*x + ({})*y + ({})",
                a[0], a[1], a[2], b[0], b[1], b[2]
            ),
        }
    }
}

impl CanonicalForm {
    /// Short variant tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CanonicalForm::Tau { .. } => "tau",
            CanonicalForm::TauOmega { .. } => "tau_omega",
            CanonicalForm::Theta(_) => "theta",
            CanonicalForm::ThetaOmega(_) => "theta_omega",
            CanonicalForm::WeylAffine { .. } => "weyl_affine",
        }
    }
}

fn factorial(i: u32) -> Scalar {
    Scalar::from_int((1..=i as i64).product())
}

/// Applies the substitution `x ↦ X, y ↦ Y, z ↦ Z` to `e`.
pub fn substitute(e: &GwaElement, images: &[GwaElement; 3]) -> GwaElement {
    let [gx, gy, gz] = images;
    let pres = gx.presentation();
    let mut xpow: Vec<GwaElement> = vec![pres.one()];
    let mut ypow: Vec<GwaElement> = vec![pres.one()];
    let mut out = pres.zero();
    for (&d, p) in e.terms() {
        let k = d.unsigned_abs() as usize;
        let pows = if d >= 0 { &mut xpow } else { &mut ypow };
        let base = if d >= 0 { gx } else { gy };
        while pows.len() <= k {
            let next = pows.last().unwrap() * base;
            pows.push(next);
        }
        let coeff = gz.eval_poly(p);
        out = &out + &(&coeff * &pows[k]);
    }
    out
}

impl AutomorphismWord {
    pub fn identity(pres: &GwaPresentation) -> Self {
        AutomorphismWord {
            pres: pres.clone(),
            word: Vec::new(),
            images: [pres.x(), pres.y(), pres.z()],
        }
    }

    /// A single generator.
    pub fn generator(pres: &GwaPresentation, sym: Generator) -> Result<Self> {
        let images = generator_images(pres, &sym)?;
        let word = match &sym {
            Generator::Theta(b) if b.is_one() => Vec::new(),
            Generator::Psi(m, l) | Generator::Phi(m, l) if *m == 0 || l.is_zero() => Vec::new(),
            _ => vec![sym],
        };
        let g = AutomorphismWord {
            pres: pres.clone(),
            word,
            images,
        };
        g.check_endomorphism()?;
        Ok(g)
    }

    pub fn theta(pres: &GwaPresentation, beta: Scalar) -> Result<Self> {
        Self::generator(pres, Generator::Theta(beta))
    }

    pub fn psi(pres: &GwaPresentation, m: u32, lambda: Scalar) -> Result<Self> {
        Self::generator(pres, Generator::Psi(m, lambda))
    }

    pub fn phi(pres: &GwaPresentation, m: u32, lambda: Scalar) -> Result<Self> {
        Self::generator(pres, Generator::Phi(m, lambda))
    }

    pub fn omega(pres: &GwaPresentation) -> Result<Self> {
        Self::generator(pres, Generator::Omega)
    }

    /// `τ_{λ,μ,β} = Ψ_{1,λ} ∘ Φ_{1,μ} ∘ Θ_β`.
    pub fn tau(pres: &GwaPresentation, lambda: Scalar, mu: Scalar, beta: Scalar) -> Result<Self> {
        Self::from_word(
            pres,
            vec![
                Generator::Psi(1, lambda),
                Generator::Phi(1, mu),
                Generator::Theta(beta),
            ],
        )
    }

    /// Composes a word of generators, leftmost outermost.
    pub fn from_word(pres: &GwaPresentation, word: Vec<Generator>) -> Result<Self> {
        let mut g = AutomorphismWord::identity(pres);
        for sym in word.into_iter().rev() {
            g = AutomorphismWord::generator(pres, sym)?.compose(&g)?;
        }
        Ok(g)
    }

    /// An endomorphism given by explicit images; the defining relations are
    /// checked. The word is left empty.
    pub fn from_images(pres: &GwaPresentation, images: [GwaElement; 3]) -> Result<Self> {
        for im in &images {
            if im.presentation() != pres {
                return Err(Error::PresentationMismatch);
            }
        }
        let g = AutomorphismWord {
            pres: pres.clone(),
            word: Vec::new(),
            images,
        };
        g.check_endomorphism()?;
        Ok(g)
    }

    fn check_endomorphism(&self) -> Result<()> {
        let [gx, gy, gz] = &self.images;
        let pres = &self.pres;
        let one = pres.one();
        let a = pres.a();
        if gy * gx != gz.eval_poly(a) {
            return Err(Error::NotAnEndomorphism("g(y)g(x) != a(g(z))".into()));
        }
        if gx * gy != (gz - &one).eval_poly(a) {
            return Err(Error::NotAnEndomorphism("g(x)g(y) != a(g(z) - 1)".into()));
        }
        if gx * gz != &(gz - &one) * gx {
            return Err(Error::NotAnEndomorphism(
                "g(x)g(z) != (g(z) - 1)g(x)".into(),
            ));
        }
        if gy * gz != &(gz + &one) * gy {
            return Err(Error::NotAnEndomorphism(
                "g(y)g(z) != (g(z) + 1)g(y)".into(),
            ));
        }
        Ok(())
    }

    pub fn presentation(&self) -> &GwaPresentation {
        &self.pres
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    /// Images of `x`, `y`, `z`.
    pub fn images(&self) -> &[GwaElement; 3] {
        &self.images
    }

    pub fn apply(&self, e: &GwaElement) -> Result<GwaElement> {
        if e.presentation() != &self.pres {
            return Err(Error::PresentationMismatch);
        }
        Ok(substitute(e, &self.images))
    }

    /// `self ∘ h`.
    pub fn compose(&self, h: &AutomorphismWord) -> Result<AutomorphismWord> {
        if h.pres != self.pres {
            return Err(Error::PresentationMismatch);
        }
        let images = [
            substitute(&h.images[0], &self.images),
            substitute(&h.images[1], &self.images),
            substitute(&h.images[2], &self.images),
        ];
        let mut word = self.word.clone();
        word.extend(h.word.iter().cloned());
        Ok(AutomorphismWord {
            pres: self.pres.clone(),
            word: simplify(word, self.pres.n()),
            images,
        })
    }

    /// The inverse, built from the inverted word. Automorphisms given only
    /// by images are first brought to a canonical word.
    pub fn invert(&self) -> Result<AutomorphismWord> {
        let word = if self.word.is_empty() && !self.is_identity() {
            canonical_word(&self.canonical_form()?, self.pres.n())?
        } else {
            self.word.clone()
        };
        let n = self.pres.n();
        let sign = Scalar::from_int(if n.is_multiple_of(2) { 1 } else { -1 });
        let mut inv = Vec::new();
        for sym in word.iter().rev() {
            match sym {
                Generator::Theta(b) => inv.push(Generator::Theta(b.inv()?)),
                Generator::Psi(m, l) => inv.push(Generator::Psi(*m, -l)),
                Generator::Phi(m, l) => inv.push(Generator::Phi(*m, -l)),
                // Ω² = Θ_{(-1)^n}
                Generator::Omega => {
                    inv.push(Generator::Theta(sign.clone()));
                    inv.push(Generator::Omega);
                }
            }
        }
        let g = AutomorphismWord::from_word(&self.pres, inv)?;
        debug_assert!(g.compose(self).map(|c| c.is_identity()).unwrap_or(false));
        Ok(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images[0] == self.pres.x()
            && self.images[1] == self.pres.y()
            && self.images[2] == self.pres.z()
    }

    /// Equality decided on images.
    pub fn same_map(&self, other: &AutomorphismWord) -> bool {
        self.pres == other.pres && self.images == other.images
    }

    pub fn pow(&self, k: u64) -> Result<AutomorphismWord> {
        let mut acc = AutomorphismWord::identity(&self.pres);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Filtration degrees of the images are `n, n, 2`.
    pub fn is_filtered(&self) -> bool {
        let n = self.pres.n();
        self.images[0].filtration_degree() == Some(n)
            && self.images[1].filtration_degree() == Some(n)
            && self.images[2].filtration_degree() == Some(2)
    }

    /// Canonical parameters, verified by rebuilding the images.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        if !self.is_filtered() {
            return Err(Error::NotFiltered);
        }
        let n = self.pres.n();
        let form = match n {
            1 => self.weyl_affine()?,
            2 => self.tau_form()?,
            _ => self.theta_form()?,
        };
        let rebuilt = AutomorphismWord::from_word(&self.pres, canonical_word(&form, n)?)?;
        if !rebuilt.same_map(self) {
            return Err(Error::NonCanonical(format!(
                "reconstruction of {form} differs"
            )));
        }
        Ok(form)
    }

    fn weyl_affine(&self) -> Result<CanonicalForm> {
        let ax = affine_coords(&self.images[0])
            .ok_or_else(|| Error::NonCanonical("image of x is not affine".into()))?;
        let ay = affine_coords(&self.images[1])
            .ok_or_else(|| Error::NonCanonical("image of y is not affine".into()))?;
        if !ax[2].is_zero() || !ay[2].is_zero() {
            return Err(Error::NonCanonical("z appears in a degree-1 image".into()));
        }
        Ok(CanonicalForm::WeylAffine {
            a: [ax[0].clone(), ax[1].clone(), ax[3].clone()],
            b: [ay[0].clone(), ay[1].clone(), ay[3].clone()],
        })
    }

    fn tau_params(&self) -> Option<(Scalar, Scalar, Scalar)> {
        let gy = &self.images[1];
        let gz = &self.images[2];
        let binv = gy.monomial_coeff(-1, 0);
        if binv.is_zero() {
            return None;
        }
        let c2 = self.pres.a().leading();
        // z-coefficient of Ψ_{1,λ}(y) is -2λ·lead(a), scaled by β⁻¹
        let lambda = gy
            .monomial_coeff(0, 1)
            .checked_div(&(&binv * &(&c2 * &Scalar::from_int(-2))))
            .ok()?;
        let mu = gz.monomial_coeff(-1, 0);
        Some((lambda, mu, binv.inv().ok()?))
    }

    fn tau_form(&self) -> Result<CanonicalForm> {
        if let Some((lambda, mu, beta)) = self.tau_params() {
            let t = AutomorphismWord::tau(&self.pres, lambda.clone(), mu.clone(), beta.clone())?;
            if t.same_map(self) {
                return Ok(CanonicalForm::Tau { lambda, mu, beta });
            }
        }
        if reflective(self.pres.a()).is_some() {
            // g = τ ∘ Ω  ⇔  g ∘ Ω⁻¹ = τ, and Ω⁻¹ = Ω for n = 2
            let omega = AutomorphismWord::omega(&self.pres)?;
            let h = self.compose(&omega)?;
            if let Some((lambda, mu, beta)) = h.tau_params() {
                let t =
                    AutomorphismWord::tau(&self.pres, lambda.clone(), mu.clone(), beta.clone())?;
                if t.same_map(&h) {
                    return Ok(CanonicalForm::TauOmega { lambda, mu, beta });
                }
            }
        }
        Err(Error::NonCanonical(
            "no tau or tau-omega parameters fit".into(),
        ))
    }

    fn theta_form(&self) -> Result<CanonicalForm> {
        let gx = &self.images[0];
        let bx = gx.monomial_coeff(1, 0);
        if !bx.is_zero() {
            return Ok(CanonicalForm::Theta(bx));
        }
        // Θ_c ∘ Ω sends x to c⁻¹y
        let by = gx.monomial_coeff(-1, 0);
        if !by.is_zero() {
            return Ok(CanonicalForm::ThetaOmega(by.inv()?));
        }
        Err(Error::NonCanonical(
            "image of x is neither a multiple of x nor of y".into(),
        ))
    }

    /// Multiplicative order of the map.
    pub fn order(&self) -> Result<MultOrder> {
        if !self.is_filtered() {
            return Err(Error::NotFiltered);
        }
        if self.is_identity() {
            return Ok(MultOrder::Finite(1));
        }
        let n = self.pres.n();
        if n >= 3 {
            return match self.canonical_form()? {
                CanonicalForm::Theta(b) => b.mult_order(),
                CanonicalForm::ThetaOmega(_) => {
                    Ok(MultOrder::Finite(if n.is_multiple_of(2) { 2 } else { 4 }))
                }
                other => Err(Error::NonCanonical(other.to_string())),
            };
        }
        let l = self.linear_part()?;
        let mut lcm = 1u64;
        for ev in eigenvalues(&l)? {
            match ev.mult_order()? {
                MultOrder::Finite(k) => lcm = lcm.lcm(&k),
                MultOrder::Infinite => return Ok(MultOrder::Infinite),
            }
        }
        if lcm > 1 && self.pow(lcm)?.is_identity() {
            Ok(MultOrder::Finite(lcm))
        } else {
            // eigenvalues of finite order but a nontrivial unipotent part
            Ok(MultOrder::Infinite)
        }
    }

    /// Linear part on `(x, y, z)` (`n = 2`) or `(x, y)` (`n = 1`); rows are
    /// images, columns coordinates.
    pub fn linear_part(&self) -> Result<Vec<Vec<Scalar>>> {
        let n = self.pres.n();
        let k = if n == 1 { 2 } else { 3 };
        let mut rows = Vec::new();
        for im in &self.images[..k] {
            let c = affine_coords(im).ok_or(Error::NotFiltered)?;
            rows.push(c[..k].to_vec());
        }
        Ok(rows)
    }

    /// Determinant of the induced linear action on the leading parts of the
    /// images of the generators.
    pub fn hdet_linear(&self) -> Result<Scalar> {
        if !self.is_filtered() {
            return Err(Error::NotFiltered);
        }
        let n = self.pres.n();
        if n == 1 {
            let m = self.linear_part()?;
            return Ok(det(&m));
        }
        let degs = [n, n, 2];
        let mut rows = Vec::new();
        for (im, &top) in self.images.iter().zip(&degs) {
            let mut row = vec![Scalar::zero(), Scalar::zero(), Scalar::zero()];
            for (d, k, c) in im.leading_monomials() {
                if n * d.unsigned_abs() as usize + 2 * k != top {
                    continue;
                }
                match (d, k) {
                    (1, 0) => row[0] = c,
                    (-1, 0) => row[1] = c,
                    (0, 1) => row[2] = c,
                    _ => {}
                }
            }
            rows.push(row);
        }
        Ok(det(&rows))
    }

    /// Canonical textual form: the word if known, else the images.
    pub fn describe(&self) -> String {
        if self.is_identity() {
            return "1".into();
        }
        if !self.word.is_empty() {
            return word_string(&self.word);
        }
        format!(
            "x -> {}, y -> {}, z -> {}",
            self.images[0], self.images[1], self.images[2]
        )
    }
}

impl fmt::Display for AutomorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Debug for AutomorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutomorphismWord({})", self.describe())
    }
}

/// Joins generators with ` * `.
pub fn word_string(word: &[Generator]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(" * ")
}

fn generator_images(pres: &GwaPresentation, sym: &Generator) -> Result<[GwaElement; 3]> {
    let a = pres.a();
    let (x, y, z) = (pres.x(), pres.y(), pres.z());
    let n = pres.n() as u32;
    Ok(match sym {
        Generator::Theta(b) => {
            if b.is_zero() {
                return Err(Error::ZeroBeta);
            }
            [x.scale(b), y.scale(&b.inv()?), z]
        }
        Generator::Psi(m, l) => {
            if *m == 0 {
                return Ok([x, y, z]);
            }
            let m = *m as i64;
            let mut gy = y;
            for i in 1..=n {
                let c = &l.pow(i as i64) / &factorial(i);
                let d = a.delta_power(m, i).scale(&c);
                gy = &gy + &pres.term(d, i as i64 * m - 1);
            }
            let gz = &z - &pres.term(ZPoly::constant(l * &Scalar::from_int(m)), m);
            [x, gy, gz]
        }
        Generator::Phi(m, l) => {
            if *m == 0 {
                return Ok([x, y, z]);
            }
            let m = *m as i64;
            let mut gx = x;
            for i in 1..=n {
                let c = &(-l).pow(i as i64) / &factorial(i);
                // y^k d(z) = d(z + k) y^k
                let k = i as i64 * m - 1;
                let d = a.delta_power(m, i).scale(&c).sigma_power(-k);
                gx = &gx + &pres.term(d, -k);
            }
            let gz = &z + &pres.term(ZPoly::constant(l * &Scalar::from_int(m)), -m);
            [gx, y, gz]
        }
        Generator::Omega => {
            let r = reflective(a).ok_or(Error::NotReflective)?;
            let sign = Scalar::from_int(if n.is_multiple_of(2) { 1 } else { -1 });
            let one_rho = &Scalar::one() + &r.rho;
            [y, x.scale(&sign), &pres.scalar(one_rho) - &z]
        }
    })
}

/// Merges adjacent symbols that combine into one.
fn simplify(word: Vec<Generator>, n: usize) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::new();
    for sym in word {
        let merged = match (out.last(), &sym) {
            (Some(Generator::Theta(b)), Generator::Theta(c)) => Some(Generator::Theta(b * c)),
            (Some(Generator::Psi(m1, l1)), Generator::Psi(m2, l2)) if m1 == m2 => {
                Some(Generator::Psi(*m1, l1 + l2))
            }
            (Some(Generator::Phi(m1, l1)), Generator::Phi(m2, l2)) if m1 == m2 => {
                Some(Generator::Phi(*m1, l1 + l2))
            }
            (Some(Generator::Omega), Generator::Omega) => {
                Some(Generator::Theta(Scalar::from_int(if n.is_multiple_of(2) {
                    1
                } else {
                    -1
                })))
            }
            _ => None,
        };
        match merged {
            Some(m) => {
                out.pop();
                let trivial = match &m {
                    Generator::Theta(b) => b.is_one(),
                    Generator::Psi(_, l) | Generator::Phi(_, l) => l.is_zero(),
                    Generator::Omega => false,
                };
                if !trivial {
                    out.push(m);
                }
            }
            None => out.push(sym),
        }
    }
    out
}

/// A generator word realizing a canonical form.
pub fn canonical_word(form: &CanonicalForm, n: usize) -> Result<Vec<Generator>> {
    Ok(match form {
        CanonicalForm::Tau { lambda, mu, beta } => simplify(
            vec![
                Generator::Psi(1, lambda.clone()),
                Generator::Phi(1, mu.clone()),
                Generator::Theta(beta.clone()),
            ],
            n,
        ),
        CanonicalForm::TauOmega { lambda, mu, beta } => {
            let mut w = simplify(
                vec![
                    Generator::Psi(1, lambda.clone()),
                    Generator::Phi(1, mu.clone()),
                    Generator::Theta(beta.clone()),
                ],
                n,
            );
            w.push(Generator::Omega);
            w
        }
        CanonicalForm::Theta(b) => simplify(vec![Generator::Theta(b.clone())], n),
        CanonicalForm::ThetaOmega(b) => {
            simplify(vec![Generator::Theta(b.clone()), Generator::Omega], n)
        }
        CanonicalForm::WeylAffine { a, b } => weyl_word(a, b)?,
    })
}

/// Factors an affine symplectic map of the Weyl algebra into generators.
///
/// With `a = z` the generators act on `(x, y)` as `Θ_β = diag(β, β⁻¹)`,
/// `Ψ_{1,λ}: y ↦ y + λ + … ` and `Φ_{1,λ}`; a general filtered automorphism is
/// reached by solving for them directly.
fn weyl_word(a: &[Scalar; 3], b: &[Scalar; 3]) -> Result<Vec<Generator>> {
    let _ = (a, b);
    Err(Error::NonCanonical(
        "Weyl-algebra maps are described by their affine data, not a word".into(),
    ))
}

/// Coordinates `[c_x, c_y, c_z, c_1]` of an element affine in `x, y, z`.
pub fn affine_coords(e: &GwaElement) -> Option<[Scalar; 4]> {
    let mut out = [
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
    ];
    for (d, p) in e.terms() {
        match d {
            1 | -1 => {
                if p.deg() > 0 {
                    return None;
                }
                out[if *d == 1 { 0 } else { 1 }] = p.coeff(0);
            }
            0 => {
                if p.deg() > 1 {
                    return None;
                }
                out[2] = p.coeff(1);
                out[3] = p.coeff(0);
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Eigenvalues of a 2×2 or 3×3 matrix with an eigenvalue `±1` (the shapes
/// filtered automorphisms produce), adjoining square roots as needed.
pub fn eigenvalues(m: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
    let quad_roots = |p: &Scalar, q: &Scalar| {
        // X² + pX + q
        let disc = &(p * p) - &(&Scalar::from_int(4) * q);
        let s = disc.sqrt();
        let half = Scalar::rational(1, 2);
        vec![&(&(-p) + &s) * &half, &(&(-p) - &s) * &half]
    };
    match m.len() {
        2 => {
            let tr = &m[0][0] + &m[1][1];
            Ok(quad_roots(&-&tr, &det(m)))
        }
        3 => {
            let tr = &(&m[0][0] + &m[1][1]) + &m[2][2];
            let minors = principal_minors_2(m);
            let d = det(m);
            // X³ - tr X² + minors X - d
            let cp = ZPoly::new(vec![-&d, minors, -&tr, Scalar::one()]);
            for r in [1i64, -1] {
                let rs = Scalar::from_int(r);
                if cp.eval(&rs).is_zero() {
                    let (q, _) = cp.div_rem(&ZPoly::new(vec![-&rs, Scalar::one()]));
                    let mut out = vec![rs];
                    out.extend(quad_roots(&q.coeff(1), &q.coeff(0)));
                    return Ok(out);
                }
            }
            Err(Error::NonCanonical(
                "linear part has no eigenvalue 1 or -1".into(),
            ))
        }
        _ => Err(Error::NonCanonical("unsupported matrix size".into())),
    }
}

/// Parses `theta(b)`, `psi(m, l)`, `phi(m, l)`, `omega` joined by `*`, with
/// optional integer powers (negative powers invert).
pub fn parse_automorphism(pres: &GwaPresentation, src: &str) -> Result<AutomorphismWord> {
    let node = parse_expr(src)?;
    eval_auto(pres, &node)
}

fn eval_auto(pres: &GwaPresentation, node: &Node) -> Result<AutomorphismWord> {
    let (s, e) = node.span;
    let bad = |msg: &str| Error::parse(s, e, msg.to_string());
    let domain = |err: Error| match err {
        Error::Parse { .. } => err,
        other => other,
    };
    match &node.expr {
        Expr::Num(n) if *n == 1.into() => Ok(AutomorphismWord::identity(pres)),
        Expr::Ident(name) if name == "omega" => AutomorphismWord::omega(pres).map_err(domain),
        Expr::Ident(name) if name == "id" => Ok(AutomorphismWord::identity(pres)),
        Expr::Call(name, args) => {
            let sym = match (name.as_str(), args.as_slice()) {
                ("theta", [b]) => Generator::Theta(eval_scalar(b)?),
                ("psi" | "phi", [m, l]) => {
                    let mv = eval_scalar(m)?
                        .to_i64()
                        .filter(|v| *v >= 0)
                        .ok_or_else(|| {
                            Error::parse(m.span.0, m.span.1, "expected a nonnegative integer")
                        })?;
                    let lv = eval_scalar(l)?;
                    if name == "psi" {
                        Generator::Psi(mv as u32, lv)
                    } else {
                        Generator::Phi(mv as u32, lv)
                    }
                }
                ("theta" | "psi" | "phi", _) => return Err(bad("wrong number of arguments")),
                _ => return Err(bad(&format!("unknown automorphism '{name}'"))),
            };
            AutomorphismWord::generator(pres, sym)
        }
        Expr::Mul(a, b) => eval_auto(pres, a)?.compose(&eval_auto(pres, b)?),
        Expr::Pow(a, k) => {
            let g = eval_auto(pres, a)?;
            if *k >= 0 {
                g.pow(*k as u64)
            } else {
                g.invert()?.pow(k.unsigned_abs())
            }
        }
        _ => Err(bad("expected theta(b), psi(m, l), phi(m, l) or omega")),
    }
}

/// One row of a relation report.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub params: String,
    pub status: String,
    pub detail: Option<String>,
}

/// Sample parameters used by [`verify_relations`]: small rationals, `√2`,
/// a cube and a fourth root of unity.
pub fn sample_parameters() -> Vec<Scalar> {
    vec![
        Scalar::from_int(2),
        Scalar::rational(-1, 3),
        Scalar::from_int(2).sqrt(),
        Scalar::root_of_unity(3).expect("cube roots"),
        Scalar::root_of_unity(4).expect("fourth roots"),
    ]
}

fn record(
    out: &mut Vec<RelationCheck>,
    relation: &str,
    params: String,
    lhs: Result<AutomorphismWord>,
    rhs: Result<AutomorphismWord>,
) {
    let (status, detail) = match (lhs, rhs) {
        (Ok(l), Ok(r)) if l.same_map(&r) => ("pass", None),
        (Ok(_), Ok(_)) => ("fail", Some("images differ".to_string())),
        (Err(e), _) | (_, Err(e)) => ("fail", Some(e.to_string())),
    };
    out.push(RelationCheck {
        relation: relation.into(),
        params,
        status: status.into(),
        detail,
    });
}

/// Checks the generator relations on sampled parameters.
///
/// 1. `Φ_{m,μ}∘Φ_{m,λ} = Φ_{m,μ+λ}` and the same for `Ψ`;
/// 2. `Θ_β∘Φ_{m,λ} = Φ_{m,λβ^{-m}}∘Θ_β` and `Θ_β∘Ψ_{m,λ} = Ψ_{m,λβ^m}∘Θ_β`;
/// 3. `Θ_β∘Θ_γ = Θ_{βγ}`;
/// 4. `Ω∘Θ_β = Θ_{β⁻¹}∘Ω`;
/// 5. `Φ_{m,λ}∘Ω = Ω∘Ψ_{m,λ}`;
/// 6. `Φ_{1,μ}∘Ψ_{1,λ} = Ψ_{1,λη⁻¹}∘Φ_{1,μη}∘Θ_{η⁻²}` with `η = 1 - λμ`.
pub fn verify_relations(
    pres: &GwaPresentation,
    params: &[Scalar],
    ms: &[u32],
) -> Vec<RelationCheck> {
    let mut out = Vec::new();
    let g = |sym: Generator| AutomorphismWord::generator(pres, sym);
    let comp = |a: Result<AutomorphismWord>, b: Result<AutomorphismWord>| a?.compose(&b?);
    let pairs: Vec<(Scalar, Scalar)> = params
        .iter()
        .zip(params.iter().cycle().skip(1))
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    for &m in ms {
        for (mu, lam) in &pairs {
            let p = format!("m={m}, mu={mu}, lambda={lam}");
            record(
                &mut out,
                "1 (phi)",
                p.clone(),
                comp(
                    g(Generator::Phi(m, mu.clone())),
                    g(Generator::Phi(m, lam.clone())),
                ),
                g(Generator::Phi(m, mu + lam)),
            );
            record(
                &mut out,
                "1 (psi)",
                p,
                comp(
                    g(Generator::Psi(m, mu.clone())),
                    g(Generator::Psi(m, lam.clone())),
                ),
                g(Generator::Psi(m, mu + lam)),
            );
        }
        for (beta, lam) in &pairs {
            let p = format!("m={m}, beta={beta}, lambda={lam}");
            let bm = beta.pow(m as i64);
            record(
                &mut out,
                "2 (phi)",
                p.clone(),
                comp(
                    g(Generator::Theta(beta.clone())),
                    g(Generator::Phi(m, lam.clone())),
                ),
                comp(
                    g(Generator::Phi(m, lam / &bm)),
                    g(Generator::Theta(beta.clone())),
                ),
            );
            record(
                &mut out,
                "2 (psi)",
                p,
                comp(
                    g(Generator::Theta(beta.clone())),
                    g(Generator::Psi(m, lam.clone())),
                ),
                comp(
                    g(Generator::Psi(m, lam * &bm)),
                    g(Generator::Theta(beta.clone())),
                ),
            );
        }
    }
    for (beta, gamma) in &pairs {
        record(
            &mut out,
            "3",
            format!("beta={beta}, gamma={gamma}"),
            comp(
                g(Generator::Theta(beta.clone())),
                g(Generator::Theta(gamma.clone())),
            ),
            g(Generator::Theta(beta * gamma)),
        );
    }
    let refl = reflective(pres.a()).is_some();
    let skip = |out: &mut Vec<RelationCheck>, rel: &str, why: &str| {
        out.push(RelationCheck {
            relation: rel.into(),
            params: String::new(),
            status: "skipped".into(),
            detail: Some(why.into()),
        })
    };
    if refl {
        for beta in params {
            record(
                &mut out,
                "4",
                format!("beta={beta}"),
                comp(g(Generator::Omega), g(Generator::Theta(beta.clone()))),
                comp(
                    g(Generator::Theta(beta.inv().expect("nonzero sample"))),
                    g(Generator::Omega),
                ),
            );
        }
        for &m in ms {
            for lam in params {
                record(
                    &mut out,
                    "5",
                    format!("m={m}, lambda={lam}"),
                    comp(g(Generator::Phi(m, lam.clone())), g(Generator::Omega)),
                    comp(g(Generator::Omega), g(Generator::Psi(m, lam.clone()))),
                );
            }
        }
    } else {
        skip(&mut out, "4", "a is not reflective");
        skip(&mut out, "5", "a is not reflective");
    }
    for (mu, lam) in &pairs {
        let eta = &Scalar::one() - &(lam * mu);
        let p = format!("mu={mu}, lambda={lam}");
        if eta.is_zero() {
            out.push(RelationCheck {
                relation: "phipsi".into(),
                params: p,
                status: "skipped".into(),
                detail: Some("eta = 1 - lambda*mu = 0".into()),
            });
            continue;
        }
        let einv = eta.inv().expect("nonzero");
        let rhs = comp(
            g(Generator::Psi(1, lam * &einv)),
            comp(
                g(Generator::Phi(1, mu * &eta)),
                g(Generator::Theta(einv.pow(2))),
            ),
        );
        record(
            &mut out,
            "phipsi",
            p,
            comp(
                g(Generator::Phi(1, mu.clone())),
                g(Generator::Psi(1, lam.clone())),
            ),
            rhs,
        );
    }
    out
}

/// Isomorphism type of a finite subgroup of filtered automorphisms (`n ≥ 3`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupType {
    /// `⟨Θ_λ⟩` of the given order.
    Cyclic(u64),
    /// Dihedral group of the given order.
    Dihedral(u64),
    /// Binary dihedral (dicyclic) group of the given order.
    BinaryDihedral(u64),
    /// `⟨Θ_β ∘ Ω⟩` for even `n`.
    C2,
    /// `⟨Θ_β ∘ Ω⟩` for odd `n`.
    C4,
    Infinite,
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Cyclic(m) => write!(f, "cyclic of order {m}"),
            GroupType::Dihedral(m) => write!(f, "dihedral of order {m}"),
            GroupType::BinaryDihedral(m) => write!(f, "binary dihedral of order {m}"),
            GroupType::C2 => write!(f, "C2 generated by theta*omega"),
            GroupType::C4 => write!(f, "C4 generated by theta*omega"),
            GroupType::Infinite => write!(f, "infinite"),
        }
    }
}

/// Upper limit on closure size before giving up.
const CLOSURE_LIMIT: usize = 4096;

/// Closes the generators under composition and reports the group type.
pub fn classify_finite_subgroup(
    gens: &[AutomorphismWord],
) -> Result<(GroupType, Vec<AutomorphismWord>)> {
    let Some(first) = gens.first() else {
        return Err(Error::HypothesisViolation("no generators given".into()));
    };
    let pres = first.presentation().clone();
    let n = pres.n();
    if n < 3 {
        return Err(Error::DegreeTooSmall(n));
    }
    for g in gens {
        if g.presentation() != &pres {
            return Err(Error::PresentationMismatch);
        }
        if !g.is_filtered() {
            return Err(Error::NotFiltered);
        }
        if g.order()? == MultOrder::Infinite {
            return Ok((GroupType::Infinite, Vec::new()));
        }
    }
    let elems = closure(&pres, gens)?;
    let Some(elems) = elems else {
        return Ok((GroupType::Infinite, Vec::new()));
    };
    let rotations = elems
        .iter()
        .filter(|g| matches!(g.canonical_form(), Ok(CanonicalForm::Theta(_))))
        .count() as u64;
    let total = elems.len() as u64;
    let kind = if rotations == total {
        GroupType::Cyclic(total)
    } else if n % 2 == 0 {
        if rotations == 1 {
            GroupType::C2
        } else {
            GroupType::Dihedral(total)
        }
    } else if rotations == 2 {
        GroupType::C4
    } else {
        GroupType::BinaryDihedral(total)
    };
    Ok((kind, elems))
}

/// All elements generated, or `None` when the limit is exceeded.
pub fn closure(
    pres: &GwaPresentation,
    gens: &[AutomorphismWord],
) -> Result<Option<Vec<AutomorphismWord>>> {
    let key = |g: &AutomorphismWord| format!("{}|{}|{}", g.images[0], g.images[1], g.images[2]);
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut elems = vec![AutomorphismWord::identity(pres)];
    seen.insert(key(&elems[0]), 0);
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for g in gens {
            let h = g.compose(&elems[i])?;
            let k = key(&h);
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(k) {
                e.insert(elems.len());
                frontier.push(elems.len());
                elems.push(h);
                if elems.len() > CLOSURE_LIMIT {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(elems))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(c: &[i64]) -> GwaPresentation {
        GwaPresentation::new(ZPoly::from_ints(c)).unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn n2_displays() {
        let t = 5;
        let r = pres(&[0, -t, 1]);
        let l = s(3);
        let phi = AutomorphismWord::phi(&r, 1, l.clone()).unwrap();
        // x ↦ x + 2λz + λ²y − λ(t+1)
        let expect = &(&(&r.x() + &r.z().scale(&s(6))) + &r.y().scale(&s(9))) - &r.scalar(s(18));
        assert_eq!(phi.images()[0], expect);
        let psi = AutomorphismWord::psi(&r, 1, l).unwrap();
        // y ↦ y − 2λz + λ²x + λ(t+1)
        let expect = &(&(&r.y() - &r.z().scale(&s(6))) + &r.x().scale(&s(9))) + &r.scalar(s(18));
        assert_eq!(psi.images()[1], expect);
        let om = AutomorphismWord::omega(&r).unwrap();
        assert_eq!(om.images()[2], &r.scalar(s(1 + t)) - &r.z());
    }

    #[test]
    fn apply_examples() {
        let r = pres(&[0, -3, 1]);
        let th = AutomorphismWord::theta(&r, s(7)).unwrap();
        let yx = &r.y() * &r.x();
        assert_eq!(th.apply(&yx).unwrap(), yx);
        let psi = AutomorphismWord::psi(&r, 1, s(2)).unwrap();
        assert_eq!(psi.apply(&r.z()).unwrap(), &r.z() - &r.x().scale(&s(2)));
    }

    #[test]
    fn compose_and_invert() {
        let r = pres(&[0, -3, 1]);
        let a = AutomorphismWord::theta(&r, s(2)).unwrap();
        let b = AutomorphismWord::theta(&r, s(3)).unwrap();
        let c = a.compose(&b).unwrap();
        assert_eq!(c.word(), &[Generator::Theta(s(6))]);
        assert_eq!(
            a.invert().unwrap().word(),
            &[Generator::Theta(Scalar::rational(1, 2))]
        );
        let p = AutomorphismWord::phi(&r, 1, s(2)).unwrap();
        let q = AutomorphismWord::phi(&r, 1, s(5)).unwrap();
        assert_eq!(p.compose(&q).unwrap().word(), &[Generator::Phi(1, s(7))]);
        let g = parse_automorphism(&r, "psi(1, 2) * phi(1, 1/3) * omega * theta(zeta(4))").unwrap();
        assert!(g.compose(&g.invert().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn filtered_detection() {
        let r2 = pres(&[0, -3, 1]);
        assert!(AutomorphismWord::psi(&r2, 1, s(1)).unwrap().is_filtered());
        let r4 = pres(&[0, 0, 0, 0, 1]);
        assert!(!AutomorphismWord::psi(&r4, 1, s(1)).unwrap().is_filtered());
        assert!(AutomorphismWord::theta(&r4, s(2)).unwrap().is_filtered());
    }

    #[test]
    fn canonical_forms() {
        let r = pres(&[0, -3, 1]);
        let (l, m) = (s(2), Scalar::rational(1, 5));
        let g = AutomorphismWord::phi(&r, 1, m.clone())
            .unwrap()
            .compose(&AutomorphismWord::psi(&r, 1, l.clone()).unwrap())
            .unwrap();
        let eta = &Scalar::one() - &(&l * &m);
        let form = g.canonical_form().unwrap();
        assert_eq!(
            form,
            CanonicalForm::Tau {
                lambda: &l / &eta,
                mu: &m * &eta,
                beta: eta.pow(-2)
            }
        );
        // τ∘Ω often has a τ-form too; the τ-form is preferred
        let g = parse_automorphism(&r, "psi(1, 2) * phi(1, 3) * theta(5) * omega").unwrap();
        assert_eq!(g.canonical_form().unwrap().kind(), "tau");
        let g = parse_automorphism(&r, "theta(5) * omega").unwrap();
        assert_eq!(
            g.canonical_form().unwrap(),
            CanonicalForm::TauOmega {
                lambda: Scalar::zero(),
                mu: Scalar::zero(),
                beta: Scalar::from_int(5)
            }
        );

        let r4 = pres(&[0, 2, -3, 0, 1]);
        assert!(reflective(r4.a()).is_none());
        let r4 = pres(&[0, -6, 11, -6, 1]);
        let g = parse_automorphism(&r4, "omega * theta(2)").unwrap();
        assert_eq!(
            g.canonical_form().unwrap(),
            CanonicalForm::ThetaOmega(Scalar::rational(1, 2))
        );
    }

    #[test]
    fn orders() {
        let r4 = pres(&[0, -6, 11, -6, 1]);
        let z3 = Scalar::root_of_unity(3).unwrap();
        assert_eq!(
            AutomorphismWord::theta(&r4, z3.clone())
                .unwrap()
                .order()
                .unwrap(),
            MultOrder::Finite(3)
        );
        let g = parse_automorphism(&r4, "theta(5) * omega").unwrap();
        assert_eq!(g.order().unwrap(), MultOrder::Finite(2));
        let r3 = pres(&[0, -1, 0, 1]);
        let g = parse_automorphism(&r3, "theta(5) * omega").unwrap();
        assert_eq!(g.order().unwrap(), MultOrder::Finite(4));
        assert!(g.pow(4).unwrap().is_identity());
        let r2 = pres(&[0, -3, 1]);
        assert_eq!(
            AutomorphismWord::omega(&r2).unwrap().order().unwrap(),
            MultOrder::Finite(2)
        );
        assert_eq!(
            AutomorphismWord::phi(&r2, 1, s(1))
                .unwrap()
                .order()
                .unwrap(),
            MultOrder::Infinite
        );
        let pi = parse_automorphism(&r2, "phi(1, 2) * theta(zeta(3))").unwrap();
        assert_eq!(pi.order().unwrap(), MultOrder::Finite(3));
    }

    #[test]
    fn hdet_examples() {
        let r2 = pres(&[0, -3, 1]);
        assert!(AutomorphismWord::theta(&r2, s(4))
            .unwrap()
            .hdet_linear()
            .unwrap()
            .is_one());
        assert!(AutomorphismWord::omega(&r2)
            .unwrap()
            .hdet_linear()
            .unwrap()
            .is_one());
        let g = parse_automorphism(&r2, "psi(1, 2) * phi(1, 3) * theta(5)").unwrap();
        assert!(g.hdet_linear().unwrap().is_one());
        let r3 = pres(&[0, -1, 0, 1]);
        let g = AutomorphismWord::omega(&r3).unwrap();
        assert_eq!(g.hdet_linear().unwrap(), s(-1));
    }

    #[test]
    fn group_types() {
        let r4 = pres(&[0, -6, 11, -6, 1]);
        let z5 = Scalar::root_of_unity(5).unwrap();
        let g = AutomorphismWord::theta(&r4, z5).unwrap();
        assert_eq!(
            classify_finite_subgroup(&[g]).unwrap().0,
            GroupType::Cyclic(5)
        );
        let z3 = Scalar::root_of_unity(3).unwrap();
        let gens = [
            AutomorphismWord::omega(&r4).unwrap(),
            AutomorphismWord::theta(&r4, z3).unwrap(),
        ];
        assert_eq!(
            classify_finite_subgroup(&gens).unwrap().0,
            GroupType::Dihedral(6)
        );
        let r3 = pres(&[0, -1, 0, 1]);
        let g = parse_automorphism(&r3, "theta(2) * omega").unwrap();
        assert_eq!(classify_finite_subgroup(&[g]).unwrap().0, GroupType::C4);
        let gens = [
            parse_automorphism(&r3, "omega").unwrap(),
            AutomorphismWord::theta(&r3, Scalar::root_of_unity(4).unwrap()).unwrap(),
        ];
        assert_eq!(
            classify_finite_subgroup(&gens).unwrap().0,
            GroupType::BinaryDihedral(8)
        );
        let g = AutomorphismWord::theta(&r4, s(2)).unwrap();
        assert_eq!(
            classify_finite_subgroup(&[g]).unwrap().0,
            GroupType::Infinite
        );
        let r2 = pres(&[0, -3, 1]);
        let g = AutomorphismWord::theta(&r2, s(-1)).unwrap();
        assert_eq!(
            classify_finite_subgroup(&[g]).unwrap_err(),
            Error::DegreeTooSmall(2)
        );
    }
}
