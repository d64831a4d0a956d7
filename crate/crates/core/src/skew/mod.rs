//! The associated graded ring `gr R = k[x, y, z]/(xy - c·z^n)`, skew group
//! algebras over `gr R` and over `R`, pertinency certificates and a
//! characteristic-p center check.

mod cert;
mod modp;

pub use cert::{auslander_witness, findim_basis, Certificate, DerivTerm, Source, Step};
pub use modp::{charp_center_check, cntp_identity_check, FpPoly};

use std::collections::BTreeMap;
use std::fmt;

use crate::autos::AutomorphismWord;
use crate::error::{Error, Result};
use crate::gwa::{GwaElement, GwaPresentation};
use crate::linalg::Matrix;
use crate::scalars::Scalar;

/// A monomial `x^i y^j z^k` with `i·j = 0`.
pub type Mono = (u32, u32, u32);

/// `gr R` for `deg a = n` and leading coefficient `lead`: `xy = lead·z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrRing {
    pub n: usize,
    pub lead: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GrElement {
    pub terms: BTreeMap<Mono, Scalar>,
}

impl GrElement {
    pub fn zero() -> Self {
        GrElement::default()
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let mut e = GrElement::zero();
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn one() -> Self {
        GrElement::monomial((0, 0, 0), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &GrElement) -> GrElement {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            let s = out.terms.get(m).map(|v| v + c).unwrap_or_else(|| c.clone());
            if s.is_zero() {
                out.terms.remove(m);
            } else {
                out.terms.insert(*m, s);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> GrElement {
        if c.is_zero() {
            return GrElement::zero();
        }
        GrElement {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn sub(&self, o: &GrElement) -> GrElement {
        self.add(&o.scale(&-&Scalar::one()))
    }
}

/// `x^i*y^j*z^k`, or `1`.
pub fn mono_string(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (v, e) in [("x", m.0), ("y", m.1), ("z", m.2)] {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for GrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({c})*{}", mono_string(m)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl GrRing {
    pub fn new(n: usize, lead: Scalar) -> Self {
        GrRing { n, lead }
    }

    pub fn of(p: &GwaPresentation) -> Self {
        GrRing::new(p.n(), p.a().leading())
    }

    /// Degree with `deg x = deg y = n`, `deg z = 2`.
    pub fn degree(&self, m: &Mono) -> usize {
        self.n * (m.0 + m.1) as usize + 2 * m.2 as usize
    }

    /// Product of monomials: the coefficient `lead^r` and the reduced monomial.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> (Scalar, Mono) {
        let i = a.0 + b.0;
        let j = a.1 + b.1;
        let r = i.min(j);
        (
            self.lead.pow(r as i64),
            (i - r, j - r, a.2 + b.2 + self.n as u32 * r),
        )
    }

    pub fn mul(&self, u: &GrElement, v: &GrElement) -> GrElement {
        let mut out = GrElement::zero();
        for (ma, ca) in &u.terms {
            for (mb, cb) in &v.terms {
                let (c, m) = self.mono_mul(ma, mb);
                out = out.add(&GrElement::monomial(m, &(&c * ca) * cb));
            }
        }
        out
    }

    pub fn pow(&self, u: &GrElement, e: u32) -> GrElement {
        (0..e).fold(GrElement::one(), |acc, _| self.mul(&acc, u))
    }

    pub fn x(&self) -> GrElement {
        GrElement::monomial((1, 0, 0), Scalar::one())
    }

    pub fn y(&self) -> GrElement {
        GrElement::monomial((0, 1, 0), Scalar::one())
    }

    pub fn z(&self) -> GrElement {
        GrElement::monomial((0, 0, 1), Scalar::one())
    }

    /// Applies a linear action given by the images of `x, y, z` (rows of
    /// coefficients on `x, y, z`).
    pub fn act(&self, m: &Matrix, u: &GrElement) -> GrElement {
        let gens = [self.x(), self.y(), self.z()];
        let img: Vec<GrElement> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&gens)
                    .fold(GrElement::zero(), |acc, (c, g)| acc.add(&g.scale(c)))
            })
            .collect();
        let mut out = GrElement::zero();
        for (mono, c) in &u.terms {
            let t = self.mul(
                &self.mul(&self.pow(&img[0], mono.0), &self.pow(&img[1], mono.1)),
                &self.pow(&img[2], mono.2),
            );
            out = out.add(&t.scale(c));
        }
        out
    }

    /// Monomials of degree exactly `d`.
    pub fn monomials_of_degree(&self, d: usize) -> Vec<Mono> {
        let mut out = Vec::new();
        let n = self.n;
        for i in 0..=d / n.max(1) {
            let rest = d - n * i;
            if !rest.is_multiple_of(2) {
                continue;
            }
            let k = (rest / 2) as u32;
            out.push((i as u32, 0, k));
            if i > 0 {
                out.push((0, i as u32, k));
            }
        }
        out.sort();
        out
    }
}

/// `g ∘ h` on matrices whose rows are images of `x, y, z`.
pub fn compose_actions(g: &Matrix, h: &Matrix) -> Matrix {
    let k = g.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).fold(Scalar::zero(), |acc, l| &acc + &(&h[i][l] * &g[l][j])))
                .collect()
        })
        .collect()
}

pub fn identity_action() -> Matrix {
    (0..3)
        .map(|i| (0..3).map(|j| Scalar::from_int((i == j) as i64)).collect())
        .collect()
}

/// A ring with a finite group acting on it, enough to form `A # G`.
pub trait Ambient {
    type Elem: Clone + PartialEq + fmt::Display;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, e: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Scalar) -> Self::Elem;
    /// Number of group elements; index 0 is the identity.
    fn order(&self) -> usize;
    /// Index of `g ∘ h`.
    fn compose(&self, g: usize, h: usize) -> usize;
    fn act(&self, g: usize, b: &Self::Elem) -> Self::Elem;
}

/// `gr R` with a finite group of linear graded automorphisms.
#[derive(Clone, Debug)]
pub struct GrAmbient {
    pub ring: GrRing,
    pub group: Vec<Matrix>,
    table: Vec<Vec<usize>>,
}

/// Largest group closed under composition here.
const GROUP_LIMIT: usize = 512;

impl GrAmbient {
    /// Uses `group` as listed; it must contain the identity first and be
    /// closed under composition.
    pub fn from_elements(ring: GrRing, group: Vec<Matrix>) -> Result<Self> {
        if group.first() != Some(&identity_action()) {
            return Err(Error::GroupNotClosed);
        }
        let mut table = Vec::new();
        for g in &group {
            let mut row = Vec::new();
            for h in &group {
                let gh = compose_actions(g, h);
                row.push(
                    group
                        .iter()
                        .position(|k| *k == gh)
                        .ok_or(Error::GroupNotClosed)?,
                );
            }
            table.push(row);
        }
        Ok(GrAmbient { ring, group, table })
    }

    /// The group generated by `gens`.
    pub fn generated(ring: GrRing, gens: &[Matrix]) -> Result<Self> {
        let mut group = vec![identity_action()];
        let mut i = 0;
        while i < group.len() {
            for g in gens {
                let h = compose_actions(g, &group[i]);
                if !group.contains(&h) {
                    group.push(h);
                    if group.len() > GROUP_LIMIT {
                        return Err(Error::GroupNotClosed);
                    }
                }
            }
            i += 1;
        }
        Self::from_elements(ring, group)
    }

    /// `⟨g⟩` listed as `g^0, g^1, …`.
    pub fn cyclic(ring: GrRing, g: &Matrix) -> Result<Self> {
        let mut group = vec![identity_action()];
        loop {
            let next = compose_actions(g, group.last().unwrap());
            if next == group[0] {
                break;
            }
            group.push(next);
            if group.len() > GROUP_LIMIT {
                return Err(Error::GroupNotClosed);
            }
        }
        Self::from_elements(ring, group)
    }
}

impl Ambient for GrAmbient {
    type Elem = GrElement;
    fn zero(&self) -> GrElement {
        GrElement::zero()
    }
    fn one(&self) -> GrElement {
        GrElement::one()
    }
    fn is_zero(&self, e: &GrElement) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &GrElement, b: &GrElement) -> GrElement {
        a.add(b)
    }
    fn mul(&self, a: &GrElement, b: &GrElement) -> GrElement {
        self.ring.mul(a, b)
    }
    fn scale(&self, a: &GrElement, c: &Scalar) -> GrElement {
        a.scale(c)
    }
    fn order(&self) -> usize {
        self.group.len()
    }
    fn compose(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
    fn act(&self, g: usize, b: &GrElement) -> GrElement {
        self.ring.act(&self.group[g], b)
    }
}

/// `R` itself with a finite group of automorphisms.
#[derive(Clone, Debug)]
pub struct RAmbient {
    pub pres: GwaPresentation,
    pub group: Vec<AutomorphismWord>,
    table: Vec<Vec<usize>>,
}

impl RAmbient {
    pub fn generated(pres: &GwaPresentation, gens: &[AutomorphismWord]) -> Result<Self> {
        let group = crate::autos::closure(pres, gens)?.ok_or(Error::GroupNotClosed)?;
        let mut table = Vec::new();
        for g in &group {
            let mut row = Vec::new();
            for h in &group {
                let gh = g.compose(h)?;
                row.push(
                    group
                        .iter()
                        .position(|k| k.same_map(&gh))
                        .ok_or(Error::GroupNotClosed)?,
                );
            }
            table.push(row);
        }
        Ok(RAmbient {
            pres: pres.clone(),
            group,
            table,
        })
    }
}

impl Ambient for RAmbient {
    type Elem = GwaElement;
    fn zero(&self) -> GwaElement {
        self.pres.zero()
    }
    fn one(&self) -> GwaElement {
        self.pres.one()
    }
    fn is_zero(&self, e: &GwaElement) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &GwaElement, b: &GwaElement) -> GwaElement {
        a + b
    }
    fn mul(&self, a: &GwaElement, b: &GwaElement) -> GwaElement {
        a * b
    }
    fn scale(&self, a: &GwaElement, c: &Scalar) -> GwaElement {
        a.scale(c)
    }
    fn order(&self) -> usize {
        self.group.len()
    }
    fn compose(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
    fn act(&self, g: usize, b: &GwaElement) -> GwaElement {
        self.group[g].apply(b).expect("same presentation")
    }
}

/// `Σ a_g # g`, keyed by group index.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewElement<E> {
    pub comps: BTreeMap<usize, E>,
}

impl<E: Clone + PartialEq + fmt::Display> SkewElement<E> {
    pub fn zero() -> Self {
        SkewElement {
            comps: BTreeMap::new(),
        }
    }

    /// `a # g`.
    pub fn single<A: Ambient<Elem = E>>(amb: &A, a: E, g: usize) -> Self {
        let mut s = Self::zero();
        if !amb.is_zero(&a) {
            s.comps.insert(g, a);
        }
        s
    }

    /// `f_G = Σ_g 1 # g`.
    pub fn group_sum<A: Ambient<Elem = E>>(amb: &A) -> Self {
        SkewElement {
            comps: (0..amb.order()).map(|g| (g, amb.one())).collect(),
        }
    }

    pub fn add<A: Ambient<Elem = E>>(&self, amb: &A, o: &Self) -> Self {
        let mut out = self.clone();
        for (g, a) in &o.comps {
            let s = match out.comps.get(g) {
                Some(v) => amb.add(v, a),
                None => a.clone(),
            };
            if amb.is_zero(&s) {
                out.comps.remove(g);
            } else {
                out.comps.insert(*g, s);
            }
        }
        out
    }

    pub fn scale<A: Ambient<Elem = E>>(&self, amb: &A, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.comps {
            let v = amb.scale(a, c);
            if !amb.is_zero(&v) {
                out.comps.insert(*g, v);
            }
        }
        out
    }
}

impl<E: fmt::Display> fmt::Display for SkewElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(g, a)| format!("({a})#g{g}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `(a # g)(b # h) = a·g(b) # gh`, extended bilinearly.
pub fn skew_multiply<A: Ambient>(
    amb: &A,
    u: &SkewElement<A::Elem>,
    v: &SkewElement<A::Elem>,
) -> Result<SkewElement<A::Elem>> {
    let ord = amb.order();
    let mut out = SkewElement::zero();
    for (&g, a) in &u.comps {
        for (&h, b) in &v.comps {
            if g >= ord || h >= ord {
                return Err(Error::GroupNotClosed);
            }
            let c = amb.mul(a, &amb.act(g, b));
            out = out.add(amb, &SkewElement::single(amb, c, amb.compose(g, h)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ZPoly;

    fn diag(b: &Scalar) -> Matrix {
        let mut m = identity_action();
        m[0][0] = b.clone();
        m[1][1] = b.inv().unwrap();
        m
    }

    #[test]
    fn gr_products() {
        let r = GrRing::new(2, Scalar::one());
        assert_eq!(
            r.mul(&r.x(), &r.y()),
            GrElement::monomial((0, 0, 2), Scalar::one())
        );
        let x2 = r.mul(&r.x(), &r.x());
        assert_eq!(
            r.mul(&x2, &r.y()),
            GrElement::monomial((1, 0, 2), Scalar::one())
        );
        assert_eq!(
            r.mul(&r.z(), &r.x()),
            GrElement::monomial((1, 0, 1), Scalar::one())
        );
    }

    #[test]
    fn skew_rules() {
        let r = GrRing::new(2, Scalar::one());
        let amb = GrAmbient::cyclic(r.clone(), &diag(&Scalar::from_int(-1))).unwrap();
        assert_eq!(amb.order(), 2);
        let xe = SkewElement::single(&amb, r.x(), 0);
        let g = SkewElement::single(&amb, GrElement::one(), 1);
        assert_eq!(
            skew_multiply(&amb, &xe, &g).unwrap(),
            SkewElement::single(&amb, r.x(), 1)
        );
        let gx = skew_multiply(&amb, &g, &xe).unwrap();
        assert_eq!(
            gx,
            SkewElement::single(&amb, r.x().scale(&Scalar::from_int(-1)), 1)
        );
        let f = SkewElement::group_sum(&amb);
        assert_eq!(
            skew_multiply(&amb, &f, &f).unwrap(),
            f.scale(&amb, &Scalar::from_int(2))
        );
    }

    #[test]
    fn skew_over_r() {
        let p = GwaPresentation::new(ZPoly::from_ints(&[0, -3, 1])).unwrap();
        let b = Scalar::root_of_unity(3).unwrap();
        let th = AutomorphismWord::theta(&p, b.clone()).unwrap();
        let amb = RAmbient::generated(&p, std::slice::from_ref(&th)).unwrap();
        assert_eq!(amb.order(), 3);
        let gi = amb.group.iter().position(|g| g.same_map(&th)).unwrap();
        let g = SkewElement::single(&amb, p.one(), gi);
        let xe = SkewElement::single(&amb, p.x(), 0);
        let prod = skew_multiply(&amb, &g, &xe).unwrap();
        assert_eq!(prod, SkewElement::single(&amb, p.x().scale(&b), gi));
    }

    #[test]
    fn not_closed() {
        let r = GrRing::new(2, Scalar::one());
        let bad = vec![identity_action(), diag(&Scalar::from_int(2))];
        assert_eq!(
            GrAmbient::from_elements(r, bad).unwrap_err(),
            Error::GroupNotClosed
        );
    }
}
