//! Classical generalized Weyl algebras `k[z][x, y; σ, a]` with `σ(z) = z - 1`
//! and exact arithmetic in the normal form `Σ p_j(z) x^j + p_0(z) + Σ q_k(z) y^k`.
//!
//! Relations: `yx = a(z)`, `xy = a(z - 1)`, `x p(z) = p(z - 1) x`,
//! `y p(z) = p(z + 1) y`. Coefficients always sit to the left of `x`/`y` powers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{signed_scalar, ZPoly};
use crate::scalars::{FieldTower, Scalar};

/// Coefficient rings usable by the shared rewriting core: anything with ring
/// operations and the shift `σ^i: p(z) ↦ p(z - i)`.
pub(crate) trait ShiftCoeff: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn shift(&self, i: i64) -> Self;
}

impl ShiftCoeff for ZPoly {
    fn zero_like(&self) -> Self {
        ZPoly::zero()
    }
    fn one_like(&self) -> Self {
        ZPoly::one()
    }
    fn is_zero(&self) -> bool {
        ZPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn shift(&self, i: i64) -> Self {
        self.sigma_power(i)
    }
}

/// `x^k y^k = ∏_{i=1}^{k} a(z - i)`.
fn xy_power<P: ShiftCoeff>(a: &P, k: i64) -> P {
    (1..=k).fold(a.one_like(), |acc, i| acc.mul(&a.shift(i)))
}

/// `y^k x^k = ∏_{i=0}^{k-1} a(z + i)`.
fn yx_power<P: ShiftCoeff>(a: &P, k: i64) -> P {
    (0..k).fold(a.one_like(), |acc, i| acc.mul(&a.shift(-i)))
}

/// `e_d e_f = r(z) e_{d+f}`, where `e_d` is `x^d` for `d ≥ 0` and `y^{-d}` otherwise.
fn basis_product<P: ShiftCoeff>(a: &P, d: i64, f: i64) -> P {
    if d >= 0 && f >= 0 || d <= 0 && f <= 0 {
        return a.one_like();
    }
    if d > 0 {
        let (j, k) = (d, -f);
        if j >= k {
            xy_power(a, k).shift(j - k)
        } else {
            xy_power(a, j)
        }
    } else {
        let (k, j) = (-d, f);
        if k >= j {
            yx_power(a, j).shift(-(k - j))
        } else {
            yx_power(a, k)
        }
    }
}

/// Product of two normal forms over any shift-coefficient ring.
pub(crate) fn multiply_terms<P: ShiftCoeff>(
    a: &P,
    lhs: &BTreeMap<i64, P>,
    rhs: &BTreeMap<i64, P>,
) -> BTreeMap<i64, P> {
    let mut out: BTreeMap<i64, P> = BTreeMap::new();
    let mut cache: BTreeMap<(i64, i64), P> = BTreeMap::new();
    for (&d, p) in lhs {
        for (&f, q) in rhs {
            // (p e_d)(q e_f) = p σ^d(q) e_d e_f
            let r = cache
                .entry((d, f))
                .or_insert_with(|| basis_product(a, d, f))
                .clone();
            let c = p.mul(&q.shift(d)).mul(&r);
            if c.is_zero() {
                continue;
            }
            let slot = out.entry(d + f).or_insert_with(|| c.zero_like());
            *slot = slot.add(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

struct PresInner {
    a: ZPoly,
    normalized: bool,
}

/// A classical GWA, determined by its defining polynomial `a`.
#[derive(Clone)]
pub struct GwaPresentation {
    inner: Arc<PresInner>,
}

impl PartialEq for GwaPresentation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.a == other.inner.a
    }
}

impl Eq for GwaPresentation {}

impl fmt::Debug for GwaPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GwaPresentation(a = {})", self.inner.a)
    }
}

impl GwaPresentation {
    /// Uses `a` as given; `deg a ≥ 1` is required.
    pub fn new(a: ZPoly) -> Result<Self> {
        if a.deg() < 1 {
            return Err(Error::HypothesisViolation(
                "defining polynomial must have degree at least 1".into(),
            ));
        }
        let normalized = a.is_monic() && a.coeff(0).is_zero();
        Ok(GwaPresentation {
            inner: Arc::new(PresInner { a, normalized }),
        })
    }

    /// Brings `a` to monic form with `0` as a root: returns the presentation
    /// for `ã(z) = scale · a(z + shift)`, then `shift` and `scale`.
    pub fn normalize(a: &ZPoly) -> Result<(Self, Scalar, Scalar)> {
        if a.deg() < 1 {
            return Err(Error::HypothesisViolation(
                "defining polynomial must have degree at least 1".into(),
            ));
        }
        let shift = find_root(a)?;
        let scale = a.leading().inv()?;
        let moved = a.affine_substitute(&Scalar::one(), &shift).scale(&scale);
        Ok((GwaPresentation::new(moved)?, shift, scale))
    }

    pub fn a(&self) -> &ZPoly {
        &self.inner.a
    }

    /// `n = deg a`.
    pub fn n(&self) -> usize {
        self.inner.a.deg()
    }

    pub fn is_normalized(&self) -> bool {
        self.inner.normalized
    }

    pub fn tower(&self) -> &FieldTower {
        self.inner.a.tower()
    }

    pub fn zero(&self) -> GwaElement {
        GwaElement {
            pres: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> GwaElement {
        self.scalar(Scalar::one())
    }

    pub fn scalar(&self, c: Scalar) -> GwaElement {
        self.poly(ZPoly::constant(c))
    }

    pub fn poly(&self, p: ZPoly) -> GwaElement {
        self.term(p, 0)
    }

    /// `p(z) · x^d` for `d ≥ 0`, `p(z) · y^{-d}` for `d < 0`.
    pub fn term(&self, p: ZPoly, d: i64) -> GwaElement {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(d, p);
        }
        GwaElement {
            pres: self.clone(),
            terms,
        }
    }

    pub fn x(&self) -> GwaElement {
        self.term(ZPoly::one(), 1)
    }

    pub fn y(&self) -> GwaElement {
        self.term(ZPoly::one(), -1)
    }

    pub fn z(&self) -> GwaElement {
        self.poly(ZPoly::var())
    }

    /// Reduces a word over `x`, `y`, `z` by single relation steps; a slow
    /// independent check on [`GwaElement::mul`].
    pub fn reduce_word(&self, word: &str) -> Result<GwaElement> {
        rewrite::reduce(self, word)
    }
}

fn find_root(a: &ZPoly) -> Result<Scalar> {
    if a.coeff(0).is_zero() {
        return Ok(Scalar::zero());
    }
    match a.deg() {
        1 => Ok(-&(&a.coeff(0) / &a.coeff(1))),
        2 => {
            if let Some(r) = a.rational_roots().first() {
                return Ok(Scalar::from_rational(r.clone()));
            }
            let (c0, c1, c2) = (a.coeff(0), a.coeff(1), a.coeff(2));
            let disc = &(&c1 * &c1) - &(&Scalar::from_int(4) * &(&c2 * &c0));
            let s = disc.sqrt();
            Ok(&(-&c1 - &s) / &(&Scalar::from_int(2) * &c2))
        }
        _ => a
            .rational_roots()
            .first()
            .map(|r| Scalar::from_rational(r.clone()))
            .ok_or(Error::RootNotComputable),
    }
}

/// An element of a classical GWA in normal form.
#[derive(Clone)]
pub struct GwaElement {
    pres: GwaPresentation,
    terms: BTreeMap<i64, ZPoly>,
}

impl GwaElement {
    pub fn presentation(&self) -> &GwaPresentation {
        &self.pres
    }

    /// Stored terms: graded degree to left coefficient.
    pub fn terms(&self) -> &BTreeMap<i64, ZPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e_d`, zero when absent.
    pub fn coefficient(&self, d: i64) -> ZPoly {
        self.terms.get(&d).cloned().unwrap_or_else(ZPoly::zero)
    }

    /// The `k[z]` part when the element has no `x`/`y` terms.
    pub fn as_poly(&self) -> Option<ZPoly> {
        match self.terms.len() {
            0 => Some(ZPoly::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        self.as_poly()?.as_constant()
    }

    /// Finite support sorted by graded degree.
    pub fn graded_components(&self) -> Vec<(i64, ZPoly)> {
        self.terms.iter().map(|(d, p)| (*d, p.clone())).collect()
    }

    /// `max(n·|d| + 2·deg p_d)`, `None` for zero.
    pub fn filtration_degree(&self) -> Option<usize> {
        let n = self.pres.n();
        self.terms
            .iter()
            .map(|(d, p)| n * d.unsigned_abs() as usize + 2 * p.deg())
            .max()
    }

    /// Terms of top filtration degree, as `(d, z-power, coefficient)`.
    pub fn leading_monomials(&self) -> Vec<(i64, usize, Scalar)> {
        let Some(top) = self.filtration_degree() else {
            return Vec::new();
        };
        let n = self.pres.n();
        let mut out = Vec::new();
        for (d, p) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() && n * d.unsigned_abs() as usize + 2 * k == top {
                    out.push((*d, k, c.clone()));
                }
            }
        }
        out
    }

    /// Coefficient of the basis monomial `z^k e_d`.
    pub fn monomial_coeff(&self, d: i64, k: usize) -> Scalar {
        self.terms
            .get(&d)
            .map(|p| p.coeff(k))
            .unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> GwaElement {
        self.map_terms(|p| p.scale(c))
    }

    fn map_terms(&self, f: impl Fn(&ZPoly) -> ZPoly) -> GwaElement {
        let mut terms = BTreeMap::new();
        for (d, p) in &self.terms {
            let q = f(p);
            if !q.is_zero() {
                terms.insert(*d, q);
            }
        }
        GwaElement {
            pres: self.pres.clone(),
            terms,
        }
    }

    fn check(&self, other: &GwaElement) -> Result<()> {
        if self.pres == other.pres {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn try_add(&self, other: &GwaElement) -> Result<GwaElement> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (d, p) in &other.terms {
            let q = match terms.get(d) {
                Some(c) => c + p,
                None => p.clone(),
            };
            if q.is_zero() {
                terms.remove(d);
            } else {
                terms.insert(*d, q);
            }
        }
        Ok(GwaElement {
            pres: self.pres.clone(),
            terms,
        })
    }

    pub fn try_sub(&self, other: &GwaElement) -> Result<GwaElement> {
        self.try_add(&-other)
    }

    pub fn multiply(&self, other: &GwaElement) -> Result<GwaElement> {
        self.check(other)?;
        let terms = multiply_terms(self.pres.a(), &self.terms, &other.terms);
        Ok(GwaElement {
            pres: self.pres.clone(),
            terms,
        })
    }

    pub fn equals(&self, other: &GwaElement) -> Result<bool> {
        self.check(other)?;
        Ok(self.terms == other.terms)
    }

    pub fn pow(&self, e: u32) -> GwaElement {
        (0..e).fold(self.pres.one(), |acc, _| &acc * self)
    }

    /// `[u, v] = uv - vu`.
    pub fn commutator(&self, other: &GwaElement) -> GwaElement {
        &(self * other) - &(other * self)
    }

    /// Evaluates `p` at this element (Horner).
    pub fn eval_poly(&self, p: &ZPoly) -> GwaElement {
        p.coeffs().iter().rev().fold(self.pres.zero(), |acc, c| {
            &(&acc * self) + &self.pres.scalar(c.clone())
        })
    }

    /// Same terms viewed in another presentation (used after changing `a`).
    pub fn rehome(&self, pres: &GwaPresentation) -> GwaElement {
        GwaElement {
            pres: pres.clone(),
            terms: self.terms.clone(),
        }
    }
}

impl PartialEq for GwaElement {
    fn eq(&self, other: &Self) -> bool {
        self.pres == other.pres && self.terms == other.terms
    }
}

impl Eq for GwaElement {}

fn basis_name(d: i64) -> String {
    match d {
        0 => String::new(),
        1 => "x".into(),
        -1 => "y".into(),
        d if d > 0 => format!("x^{d}"),
        d => format!("y^{}", -d),
    }
}

/// Renders `c · body` pieces, reporting the sign separately.
fn poly_factor(p: &ZPoly) -> (bool, String) {
    let nonzero: Vec<usize> = (0..p.coeffs().len())
        .filter(|&k| !p.coeff(k).is_zero())
        .collect();
    if nonzero.len() == 1 {
        let k = nonzero[0];
        let (neg, body) = signed_scalar(&p.coeff(k));
        let zpart = match k {
            0 => String::new(),
            1 => "z".into(),
            k => format!("z^{k}"),
        };
        let s = match (body.as_str(), zpart.is_empty()) {
            (_, true) => body,
            ("1", false) => zpart,
            (_, false) => format!("{body}*{zpart}"),
        };
        (neg, s)
    } else {
        (false, format!("({p})"))
    }
}

impl fmt::Display for GwaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (d, p) in self.terms.iter().rev() {
            if *d == 0 {
                for k in (0..p.coeffs().len()).rev() {
                    let c = p.coeff(k);
                    if !c.is_zero() {
                        pieces.push(poly_factor(&ZPoly::monomial(c, k)));
                    }
                }
            } else {
                let (neg, body) = poly_factor(p);
                let e = basis_name(*d);
                pieces.push(if body == "1" {
                    (neg, e)
                } else {
                    (neg, format!("{body}*{e}"))
                });
            }
        }
        for (neg, body) in pieces {
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

impl fmt::Debug for GwaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GwaElement({self})")
    }
}

// Operators panic on mismatched presentations; the `try_*` methods report it.

impl<'a> Add<&'a GwaElement> for &'a GwaElement {
    type Output = GwaElement;
    fn add(self, rhs: &'a GwaElement) -> GwaElement {
        self.try_add(rhs).expect("presentation mismatch")
    }
}

impl<'a> Sub<&'a GwaElement> for &'a GwaElement {
    type Output = GwaElement;
    fn sub(self, rhs: &'a GwaElement) -> GwaElement {
        self.try_sub(rhs).expect("presentation mismatch")
    }
}

impl<'a> Mul<&'a GwaElement> for &'a GwaElement {
    type Output = GwaElement;
    fn mul(self, rhs: &'a GwaElement) -> GwaElement {
        self.multiply(rhs).expect("presentation mismatch")
    }
}

impl Neg for &GwaElement {
    type Output = GwaElement;
    fn neg(self) -> GwaElement {
        self.map_terms(|p| -p)
    }
}

impl Neg for GwaElement {
    type Output = GwaElement;
    fn neg(self) -> GwaElement {
        -&self
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<GwaElement> for GwaElement {
            type Output = GwaElement;
            fn $method(self, rhs: GwaElement) -> GwaElement {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

mod rewrite {
    //! Word rewriting with one relation at a time, never using the closed
    //! product formulas.

    use std::collections::BTreeMap;

    use super::{GwaElement, GwaPresentation};
    use crate::error::{Error, Result};
    use crate::poly::ZPoly;
    use crate::scalars::Scalar;

    type Word = Vec<u8>;

    pub(super) fn reduce(pres: &GwaPresentation, word: &str) -> Result<GwaElement> {
        let mut w: Word = Vec::new();
        for (i, ch) in word.char_indices() {
            match ch {
                'x' | 'y' | 'z' => w.push(ch as u8),
                '*' | ' ' => {}
                _ => return Err(Error::parse(i, i + ch.len_utf8(), "expected x, y or z")),
            }
        }
        let mut pending: Vec<(Scalar, Word)> = vec![(Scalar::one(), w)];
        let mut done: BTreeMap<Word, Scalar> = BTreeMap::new();
        let a = pres.a();
        let a_shift = a.sigma_power(1);
        while let Some((c, w)) = pending.pop() {
            match find_redex(&w) {
                None => {
                    let e = done.entry(w).or_insert_with(Scalar::zero);
                    *e = &*e + &c;
                }
                Some((pos, rule)) => {
                    let (head, tail) = (&w[..pos], &w[pos + 2..]);
                    let replacement: Vec<(Scalar, Word)> = match rule {
                        Rule::Yx => expand(a),
                        Rule::Xy => expand(&a_shift),
                        // xz = zx - x, yz = zy + y
                        Rule::Xz => vec![
                            (Scalar::one(), b"zx".to_vec()),
                            (Scalar::from_int(-1), b"x".to_vec()),
                        ],
                        Rule::Yz => vec![
                            (Scalar::one(), b"zy".to_vec()),
                            (Scalar::one(), b"y".to_vec()),
                        ],
                    };
                    for (rc, rw) in replacement {
                        let mut nw = head.to_vec();
                        nw.extend(rw);
                        nw.extend_from_slice(tail);
                        pending.push((&c * &rc, nw));
                    }
                }
            }
        }
        let mut out = pres.zero();
        for (w, c) in done {
            if c.is_zero() {
                continue;
            }
            let k = w.iter().filter(|&&b| b == b'z').count();
            let d = w.iter().filter(|&&b| b == b'x').count() as i64
                - w.iter().filter(|&&b| b == b'y').count() as i64;
            out = &out + &pres.term(ZPoly::monomial(c, k), d);
        }
        Ok(out)
    }

    enum Rule {
        Yx,
        Xy,
        Xz,
        Yz,
    }

    fn find_redex(w: &[u8]) -> Option<(usize, Rule)> {
        w.windows(2).enumerate().find_map(|(i, p)| match p {
            b"yx" => Some((i, Rule::Yx)),
            b"xy" => Some((i, Rule::Xy)),
            b"xz" => Some((i, Rule::Xz)),
            b"yz" => Some((i, Rule::Yz)),
            _ => None,
        })
    }

    fn expand(p: &ZPoly) -> Vec<(Scalar, Word)> {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), vec![b'z'; k]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pres(c: &[i64]) -> GwaPresentation {
        GwaPresentation::new(ZPoly::from_ints(c)).unwrap()
    }

    #[test]
    fn defining_relations() {
        let r = pres(&[0, -3, 1]);
        let (x, y, z) = (r.x(), r.y(), r.z());
        assert_eq!(&y * &x, r.poly(r.a().clone()));
        assert_eq!(&x * &y, r.poly(r.a().sigma_power(1)));
        assert_eq!(&x * &z, &(&z - &r.one()) * &x);
        assert!(!x.equals(&y).unwrap());
    }

    #[test]
    fn y2x2() {
        let r = pres(&[0, -3, 1]);
        let lhs = &r.y().pow(2) * &r.x().pow(2);
        let expect = r.a() * &r.a().sigma_power(-1);
        assert_eq!(lhs, r.poly(expect));
        assert_eq!(r.reduce_word("yyxx").unwrap(), lhs);
    }

    #[test]
    fn normalize_examples() {
        let (p, shift, scale) = GwaPresentation::normalize(&ZPoly::from_ints(&[-4, 2])).unwrap();
        assert_eq!(p.a(), &ZPoly::var());
        assert_eq!(shift, Scalar::from_int(2));
        assert_eq!(scale, Scalar::rational(1, 2));
        let (p, shift, _) = GwaPresentation::normalize(&ZPoly::from_ints(&[0, -3, 1])).unwrap();
        assert!(p.is_normalized());
        assert!(shift.is_zero());
        let (p, shift, _) = GwaPresentation::normalize(&ZPoly::from_ints(&[4, -5, 1])).unwrap();
        assert_eq!(p.a(), &ZPoly::from_ints(&[0, -3, 1]));
        assert_eq!(shift, Scalar::one());
        // irrational roots of a quadratic are adjoined
        let (p, _, _) = GwaPresentation::normalize(&ZPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert!(p.is_normalized());
        assert_eq!(
            GwaPresentation::normalize(&ZPoly::from_ints(&[2, 0, 0, 1])).err(),
            Some(Error::RootNotComputable)
        );
    }

    #[test]
    fn filtration_and_grading() {
        let r3 = pres(&[0, 0, 0, 1]);
        assert_eq!(r3.z().filtration_degree(), Some(2));
        assert_eq!(r3.x().filtration_degree(), Some(3));
        let r2 = pres(&[0, 0, 1]);
        let e = &(&r2.z().pow(2) * &r2.x()) + &r2.y();
        assert_eq!(e.filtration_degree(), Some(6));
        let f = &r2.x() + &r2.y().pow(2).scale(&Scalar::from_int(3));
        let comps: Vec<(i64, String)> = f
            .graded_components()
            .into_iter()
            .map(|(d, p)| (d, p.to_string()))
            .collect();
        assert_eq!(comps, [(-2, "3".to_string()), (1, "1".to_string())]);
    }

    #[test]
    fn printing() {
        let r = pres(&[0, -3, 1]);
        let e = &(&(&r.z().pow(2) * &r.x()) - &r.y()) + &r.scalar(Scalar::from_int(-2));
        assert_eq!(e.to_string(), "z^2*x - 2 - y");
        let f = &(&r.y() * &r.x()) * &r.x();
        assert_eq!(f.to_string(), "(z^2 - 3*z)*x");
    }

    fn letter() -> impl Strategy<Value = char> {
        prop_oneof![Just('x'), Just('y'), Just('z')]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rewriting_matches_multiply(w in prop::collection::vec(letter(), 0..7)) {
            let r = pres(&[0, -3, 1]);
            let word: String = w.iter().collect();
            let slow = r.reduce_word(&word).unwrap();
            let fast = w.iter().fold(r.one(), |acc, c| match c {
                'x' => &acc * &r.x(),
                'y' => &acc * &r.y(),
                _ => &acc * &r.z(),
            });
            prop_assert_eq!(slow, fast);
        }
    }
}
