//! Certified rectangular enclosures of complex embeddings.
//!
//! Endpoints are rationals rounded outward onto a dyadic grid after every
//! operation, so sizes stay bounded while containment is never lost.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Elem, FieldTower, Scalar};

/// A closed real interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// A rectangle `re + i·im` in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

fn pow2(w: u32) -> BigInt {
    BigInt::one() << w
}

fn round_down(q: &BigRational, w: u32) -> BigRational {
    let s = pow2(w);
    BigRational::new(
        (q * BigRational::from_integer(s.clone()))
            .floor()
            .to_integer(),
        s,
    )
}

fn round_up(q: &BigRational, w: u32) -> BigRational {
    let s = pow2(w);
    BigRational::new(
        (q * BigRational::from_integer(s.clone()))
            .ceil()
            .to_integer(),
        s,
    )
}

/// Lower bound on `sqrt(q)` for `q ≥ 0`, on the grid `2^-w`.
fn sqrt_down(q: &BigRational, w: u32) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    let scaled = (q * BigRational::from_integer(pow2(2 * w)))
        .floor()
        .to_integer();
    BigRational::new(scaled.sqrt(), pow2(w))
}

/// Upper bound on `sqrt(q)` for `q ≥ 0`, on the grid `2^-w`.
fn sqrt_up(q: &BigRational, w: u32) -> BigRational {
    if !q.is_positive() {
        return BigRational::zero();
    }
    let scaled = (q * BigRational::from_integer(pow2(2 * w)))
        .ceil()
        .to_integer();
    let r = scaled.sqrt();
    let r = if &r * &r == scaled { r } else { r + 1 };
    BigRational::new(r, pow2(w))
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn zero() -> Self {
        Interval::point(BigRational::zero())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Midpoint, handy for display.
    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    fn round(self, w: u32) -> Self {
        Interval {
            lo: round_down(&self.lo, w),
            hi: round_up(&self.hi, w),
        }
    }

    fn add(&self, o: &Interval, w: u32) -> Self {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
        .round(w)
    }

    fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    fn sub(&self, o: &Interval, w: u32) -> Self {
        self.add(&o.neg(), w)
    }

    fn mul(&self, o: &Interval, w: u32) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }.round(w)
    }

    fn sqr(&self, w: u32) -> Self {
        let m = self.mul(self, w);
        if self.contains_zero() {
            Interval {
                lo: BigRational::zero(),
                hi: m.hi,
            }
        } else {
            m
        }
    }

    fn half(&self) -> Self {
        let two = BigRational::from_integer(2.into());
        Interval {
            lo: &self.lo / &two,
            hi: &self.hi / &two,
        }
    }

    /// Enclosure of `sqrt` on the nonnegative part.
    fn sqrt(&self, w: u32) -> Self {
        Interval {
            lo: sqrt_down(&self.lo, w),
            hi: sqrt_up(&self.hi, w),
        }
    }

    fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }
}

impl ComplexInterval {
    pub fn real(q: BigRational) -> Self {
        ComplexInterval {
            re: Interval::point(q),
            im: Interval::zero(),
        }
    }

    fn add(&self, o: &Self, w: u32) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re, w),
            im: self.im.add(&o.im, w),
        }
    }

    fn mul(&self, o: &Self, w: u32) -> Self {
        ComplexInterval {
            re: self.re.mul(&o.re, w).sub(&self.im.mul(&o.im, w), w),
            im: self.re.mul(&o.im, w).add(&self.im.mul(&o.re, w), w),
        }
    }

    /// Enclosure of `|s|²`.
    pub fn norm_sqr(&self) -> Interval {
        let w = 1 << 12;
        let r = self.re.sqr(w);
        let i = self.im.sqr(w);
        Interval {
            lo: &r.lo + &i.lo,
            hi: &r.hi + &i.hi,
        }
    }

    /// An upper bound on `|s|`.
    pub fn abs_upper(&self) -> BigRational {
        self.re.mag() + self.im.mag()
    }

    /// Largest coordinate width.
    pub fn width(&self) -> BigRational {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Whether an integer can possibly lie in this box.
    pub fn may_contain_integer(&self, n: &BigInt) -> bool {
        let q = BigRational::from_integer(n.clone());
        self.re.contains(&q) && self.im.contains_zero()
    }

    fn force(mut self, class: Class) -> Self {
        match class {
            Class::Real => self.im = Interval::zero(),
            Class::Imag => self.re = Interval::zero(),
            Class::General => {}
        }
        self
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", approx(&self.lo), approx(&self.hi))
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

fn approx(q: &BigRational) -> String {
    // twelve significant decimals is plenty for display
    let scale = BigInt::from(10u64.pow(12));
    let v = (q * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let neg = v.is_negative();
    let v = v.abs();
    let int = &v / &scale;
    let frac = &v % &scale;
    format!("{}{}.{:012}", if neg { "-" } else { "" }, int, frac)
}

/// Whether an embedded value is known to be real, purely imaginary, or neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Real,
    Imag,
    General,
}

fn class_mul(a: Class, b: Class) -> Class {
    match (a, b) {
        (Class::Real, c) | (c, Class::Real) => c,
        (Class::Imag, Class::Imag) => Class::Real,
        _ => Class::General,
    }
}

struct Embedding {
    roots: Vec<ComplexInterval>,
    classes: Vec<Class>,
}

fn elem_class(e: &Elem, classes: &[Class]) -> Class {
    match e {
        Elem::Rat(_) => Class::Real,
        Elem::Quad { level, a, b } => {
            let ca = elem_class(a, classes);
            let cb = class_mul(elem_class(b, classes), classes[level - 1]);
            if a.is_zero() {
                cb
            } else if ca == cb {
                ca
            } else {
                Class::General
            }
        }
    }
}

fn eval(e: &Elem, emb: &Embedding, w: u32) -> ComplexInterval {
    let raw = match e {
        Elem::Rat(r) => ComplexInterval {
            re: Interval::point(r.clone()).round(w),
            im: Interval::zero(),
        },
        Elem::Quad { level, a, b } => {
            let va = eval(a, emb, w);
            let vb = eval(b, emb, w);
            va.add(&vb.mul(&emb.roots[level - 1], w), w)
        }
    };
    raw.force(elem_class(e, &emb.classes))
}

/// Principal square root enclosure: largest real part, ties broken towards
/// positive imaginary part. `None` when the box straddles the negative real
/// axis and the branch cannot be decided at this precision.
fn principal_sqrt(d: &ComplexInterval, class: Class, w: u32) -> Option<(ComplexInterval, Class)> {
    if class == Class::Real {
        if d.re.is_positive() {
            let r = d.re.sqrt(w);
            return Some((
                ComplexInterval {
                    re: r,
                    im: Interval::zero(),
                },
                Class::Real,
            ));
        }
        if d.re.is_negative() {
            let r = d.re.neg().sqrt(w);
            return Some((
                ComplexInterval {
                    re: Interval::zero(),
                    im: r,
                },
                Class::Imag,
            ));
        }
        return None;
    }
    let modulus = {
        let n = d.norm_sqr();
        n.sqrt(w)
    };
    let re = modulus.add(&d.re, w).half().sqrt(w);
    let im_mag = modulus.sub(&d.re, w).half().sqrt(w);
    let im = if d.im.is_positive() {
        im_mag
    } else if d.im.is_negative() {
        im_mag.neg()
    } else if d.re.is_positive() {
        Interval {
            lo: -&im_mag.hi,
            hi: im_mag.hi,
        }
    } else {
        return None;
    };
    Some((ComplexInterval { re, im }, Class::General))
}

fn embedding(tower: &FieldTower, w: u32) -> Embedding {
    let mut emb = Embedding {
        roots: Vec::new(),
        classes: Vec::new(),
    };
    for step in tower.steps.iter() {
        let class = elem_class(&step.delta, &emb.classes);
        let mut got = None;
        // the radicand is never zero, so extra precision separates it from
        // the branch cut unless it lies on the cut exactly
        for extra in [0u32, 64, 256] {
            let d = eval(&step.delta, &emb, w + extra);
            if let Some(r) = principal_sqrt(&d, class, w + extra) {
                got = Some(r);
                break;
            }
        }
        let (root, root_class) = got.unwrap_or_else(|| {
            let d = eval(&step.delta, &emb, w);
            let r = d.norm_sqr().sqrt(w).sqrt(w).hi;
            (
                ComplexInterval {
                    re: Interval {
                        lo: BigRational::zero(),
                        hi: r.clone(),
                    },
                    im: Interval { lo: -&r, hi: r },
                },
                Class::General,
            )
        });
        emb.roots.push(root);
        emb.classes.push(root_class);
    }
    emb
}

fn target(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), pow2(bits))
}

pub(super) fn embed(s: &Scalar, bits: u32) -> ComplexInterval {
    let goal = target(bits);
    let mut w = bits + 32;
    loop {
        let emb = embedding(&s.tower, w);
        let v = eval(&s.elem, &emb, w);
        if v.width() <= goal || w > bits * 16 + 4096 {
            return v;
        }
        w *= 2;
    }
}

pub(super) fn root_enclosures(tower: &FieldTower, bits: u32) -> Vec<ComplexInterval> {
    let goal = target(bits);
    let mut w = bits + 32;
    loop {
        let emb = embedding(tower, w);
        if emb.roots.iter().all(|r| r.width() <= goal) || w > bits * 16 + 4096 {
            return emb.roots;
        }
        w *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_point() {
        let v = Scalar::rational(1, 2).embed(64);
        assert_eq!(v.re, Interval::point(BigRational::new(1.into(), 2.into())));
        assert_eq!(v.im, Interval::zero());
    }

    #[test]
    fn sqrt_two_enclosure() {
        let s = Scalar::from_int(2).sqrt();
        let v = s.embed(100);
        assert!(v.re.width() <= target(100));
        let lo = BigRational::new(141421356.into(), 100000000.into());
        let hi = BigRational::new(141421357.into(), 100000000.into());
        assert!(v.re.lo > lo && v.re.hi < hi);
        // squares of both endpoints straddle 2
        let two = BigRational::from_integer(2.into());
        assert!(&v.re.lo * &v.re.lo <= two && &v.re.hi * &v.re.hi >= two);
    }

    #[test]
    fn imaginary_unit() {
        let i = Scalar::root_of_unity(4).unwrap();
        let v = i.embed(64);
        assert!(v.re.contains_zero());
        assert!(v.im.contains(&BigRational::one()));
    }

    #[test]
    fn roots_of_unity_have_modulus_one() {
        for m in [3u64, 5, 8, 12] {
            let z = Scalar::root_of_unity(m).unwrap();
            assert!(
                z.embed(64).norm_sqr().contains(&BigRational::one()),
                "m = {m}"
            );
        }
    }

    #[test]
    fn product_encloses() {
        let a = &Scalar::from_int(2).sqrt() + &Scalar::from_int(1);
        let b = Scalar::from_int(3).sqrt();
        let ab = (&a * &b).embed(80);
        let ia = a.embed(80);
        let ib = b.embed(80);
        let prod = ia.mul(&ib, 90);
        assert!(prod.re.lo <= ab.re.hi && ab.re.lo <= prod.re.hi);
    }
}
