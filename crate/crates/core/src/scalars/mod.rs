//! Exact arithmetic in towers of quadratic extensions of the rationals.
//!
//! Every tower is a chain `Q = F_0 ⊂ F_1 ⊂ … ⊂ F_h` where `F_k = F_{k-1}(θ_k)`
//! and `θ_k² = δ_k` for a non-square `δ_k ∈ F_{k-1}`. Elements are stored in
//! the smallest level that contains them, so two equal elements always have
//! identical representations and a scalar of a prefix tower is automatically
//! a scalar of every extension.
//!
//! Square roots and the roots of unity needed downstream are adjoined lazily.
//! Binary operations on scalars from different towers join the towers first.

mod interval;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use interval::{ComplexInterval, Interval};

use crate::error::{Error, Result};

/// Internal canonical element representation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Elem {
    Rat(BigRational),
    /// `a + b·θ_level` with `b ≠ 0`; `a` and `b` live strictly below `level`.
    Quad {
        level: usize,
        a: Box<Elem>,
        b: Box<Elem>,
    },
}

impl Elem {
    fn zero() -> Self {
        Elem::Rat(BigRational::zero())
    }

    fn one() -> Self {
        Elem::Rat(BigRational::one())
    }

    fn level(&self) -> usize {
        match self {
            Elem::Rat(_) => 0,
            Elem::Quad { level, .. } => *level,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Elem::Rat(r) if r.is_zero())
    }

    fn mk(level: usize, a: Elem, b: Elem) -> Elem {
        if b.is_zero() {
            a
        } else {
            Elem::Quad {
                level,
                a: Box::new(a),
                b: Box::new(b),
            }
        }
    }

    /// Coordinates over `F_{k-1}` for an element of `F_k`.
    fn split(&self, k: usize) -> (Elem, Elem) {
        match self {
            Elem::Quad { level, a, b } if *level == k => ((**a).clone(), (**b).clone()),
            _ => (self.clone(), Elem::zero()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Step {
    delta: Elem,
}

/// A chain of quadratic extensions of the rationals.
#[derive(Clone, Debug)]
pub struct FieldTower {
    steps: Arc<Vec<Step>>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.steps, &other.steps) || self.steps == other.steps
    }
}

impl Eq for FieldTower {}

impl Default for FieldTower {
    fn default() -> Self {
        Self::rationals()
    }
}

// ---------------------------------------------------------------------------
// level arithmetic
// ---------------------------------------------------------------------------

fn add(steps: &[Step], x: &Elem, y: &Elem) -> Elem {
    let (lx, ly) = (x.level(), y.level());
    match lx.cmp(&ly) {
        Ordering::Equal if lx == 0 => match (x, y) {
            (Elem::Rat(p), Elem::Rat(q)) => Elem::Rat(p + q),
            _ => unreachable!(),
        },
        Ordering::Equal => {
            let (xa, xb) = x.split(lx);
            let (ya, yb) = y.split(lx);
            Elem::mk(lx, add(steps, &xa, &ya), add(steps, &xb, &yb))
        }
        Ordering::Greater => {
            let (xa, xb) = x.split(lx);
            Elem::mk(lx, add(steps, &xa, y), xb)
        }
        Ordering::Less => add(steps, y, x),
    }
}

fn neg(x: &Elem) -> Elem {
    match x {
        Elem::Rat(r) => Elem::Rat(-r),
        Elem::Quad { level, a, b } => Elem::Quad {
            level: *level,
            a: Box::new(neg(a)),
            b: Box::new(neg(b)),
        },
    }
}

fn sub(steps: &[Step], x: &Elem, y: &Elem) -> Elem {
    add(steps, x, &neg(y))
}

fn mul(steps: &[Step], x: &Elem, y: &Elem) -> Elem {
    if x.is_zero() || y.is_zero() {
        return Elem::zero();
    }
    let (lx, ly) = (x.level(), y.level());
    match lx.cmp(&ly) {
        Ordering::Equal if lx == 0 => match (x, y) {
            (Elem::Rat(p), Elem::Rat(q)) => Elem::Rat(p * q),
            _ => unreachable!(),
        },
        Ordering::Equal => {
            let delta = &steps[lx - 1].delta;
            let (xa, xb) = x.split(lx);
            let (ya, yb) = y.split(lx);
            let bd = mul(steps, &mul(steps, &xb, &yb), delta);
            let a = add(steps, &mul(steps, &xa, &ya), &bd);
            let b = add(steps, &mul(steps, &xa, &yb), &mul(steps, &xb, &ya));
            Elem::mk(lx, a, b)
        }
        Ordering::Greater => {
            let (xa, xb) = x.split(lx);
            Elem::mk(lx, mul(steps, &xa, y), mul(steps, &xb, y))
        }
        Ordering::Less => mul(steps, y, x),
    }
}

fn inv(steps: &[Step], x: &Elem) -> Option<Elem> {
    match x {
        Elem::Rat(r) if r.is_zero() => None,
        Elem::Rat(r) => Some(Elem::Rat(r.recip())),
        Elem::Quad { level, a, b } => {
            let delta = &steps[level - 1].delta;
            let bb = mul(steps, &mul(steps, b, b), delta);
            let norm = sub(steps, &mul(steps, a, a), &bb);
            let ninv = inv(steps, &norm)?;
            Some(Elem::mk(
                *level,
                mul(steps, a, &ninv),
                neg(&mul(steps, b, &ninv)),
            ))
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Square root of `s` inside `F_k`, if one exists. Complete: a `None` is a
/// proof that `s` is not a square in `F_k`.
fn sqrt_in(steps: &[Step], k: usize, s: &Elem) -> Option<Elem> {
    if k == 0 {
        return match s {
            Elem::Rat(r) => rational_sqrt(r).map(Elem::Rat),
            _ => None,
        };
    }
    if s.level() < k && s.level() > 0 {
        // still try the lower field first; a root may also need θ_k
    }
    let delta = &steps[k - 1].delta;
    let (s0, s1) = s.split(k);
    if s1.is_zero() {
        if let Some(r) = sqrt_in(steps, k - 1, &s0) {
            return Some(r);
        }
        let q = mul(steps, &s0, &inv(steps, delta)?);
        return sqrt_in(steps, k - 1, &q).map(|r| Elem::mk(k, Elem::zero(), r));
    }
    // u = a + bθ with a, b ≠ 0: a² + δb² = s0, 2ab = s1
    let norm = sub(
        steps,
        &mul(steps, &s0, &s0),
        &mul(steps, delta, &mul(steps, &s1, &s1)),
    );
    let nr = sqrt_in(steps, k - 1, &norm)?;
    let two_delta_inv = inv(
        steps,
        &mul(
            steps,
            &Elem::Rat(BigRational::from_integer(2.into())),
            delta,
        ),
    )?;
    for cand in [add(steps, &s0, &nr), sub(steps, &s0, &nr)] {
        let b2 = mul(steps, &cand, &two_delta_inv);
        if b2.is_zero() {
            continue;
        }
        if let Some(b) = sqrt_in(steps, k - 1, &b2) {
            let two_b_inv = inv(steps, &add(steps, &b, &b))?;
            let a = mul(steps, &s1, &two_b_inv);
            let u = Elem::mk(k, a, b);
            if &mul(steps, &u, &u) == s {
                return Some(u);
            }
        }
    }
    None
}

impl FieldTower {
    /// The trivial tower `Q`.
    pub fn rationals() -> Self {
        FieldTower {
            steps: Arc::new(Vec::new()),
        }
    }

    /// Number of quadratic steps.
    pub fn height(&self) -> usize {
        self.steps.len()
    }

    /// Degree over the rationals.
    pub fn degree(&self) -> u64 {
        1u64 << self.steps.len()
    }

    /// The radicands `δ_k` of each step, as scalars of the tower below.
    pub fn radicands(&self) -> Vec<Scalar> {
        (0..self.height())
            .map(|k| Scalar {
                tower: self.truncate(k),
                elem: self.steps[k].delta.clone(),
            })
            .collect()
    }

    fn truncate(&self, k: usize) -> FieldTower {
        if k == self.steps.len() {
            return self.clone();
        }
        FieldTower {
            steps: Arc::new(self.steps[..k].to_vec()),
        }
    }

    /// True when `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &FieldTower) -> bool {
        Arc::ptr_eq(&self.steps, &other.steps)
            || (self.steps.len() <= other.steps.len()
                && self
                    .steps
                    .iter()
                    .zip(other.steps.iter())
                    .all(|(a, b)| a == b))
    }

    fn push(&self, delta: Elem) -> FieldTower {
        let mut steps = (*self.steps).clone();
        steps.push(Step { delta });
        FieldTower {
            steps: Arc::new(steps),
        }
    }

    /// Returns a tower containing a square root of `s`, and that root. The tower
    /// is unchanged when `s` is already a square.
    pub fn adjoin_sqrt(&self, s: &Scalar) -> (FieldTower, Scalar) {
        let (tower, _, elem) = unify(self, &Elem::zero(), s);
        if elem.is_zero() {
            return (tower.clone(), Scalar::zero().lift(&tower));
        }
        if let Some(r) = sqrt_in(&tower.steps, tower.height(), &elem) {
            let root = Scalar {
                tower: tower.clone(),
                elem: r,
            };
            return (tower, root);
        }
        let ext = tower.push(elem);
        let level = ext.height();
        let root = Scalar {
            tower: ext.clone(),
            elem: Elem::mk(level, Elem::zero(), Elem::one()),
        };
        (ext, root)
    }

    /// Returns a tower containing a primitive `m`-th root of unity, and that root.
    ///
    /// Supported orders are `m = 2^k · 3^a · 5^b` with `a, b ≤ 1`, the ones
    /// reachable through quadratic steps with rational building blocks.
    pub fn adjoin_root_of_unity(&self, m: u64) -> Result<(FieldTower, Scalar)> {
        let zeta = root_of_unity_over(self, m)?;
        Ok((zeta.tower.clone(), zeta))
    }

    /// Smallest tower extending both inputs, with the images of `other`'s
    /// generators inside it.
    fn join(&self, other: &FieldTower) -> (FieldTower, Vec<Elem>) {
        let mut tower = self.clone();
        let mut roots: Vec<Elem> = Vec::with_capacity(other.height());
        for step in other.steps.iter() {
            let delta = map_elem(&tower.steps, &roots, &step.delta);
            let d = Scalar {
                tower: tower.clone(),
                elem: delta,
            };
            let (t, r) = tower.adjoin_sqrt(&d);
            tower = t;
            roots.push(r.elem);
        }
        (tower, roots)
    }

    /// Certified enclosures of the chosen complex embedding of each generator.
    pub fn generator_enclosures(&self, bits: u32) -> Vec<ComplexInterval> {
        interval::root_enclosures(self, bits)
    }
}

/// Rewrites `e` (an element of some tower whose generators map to `roots`).
fn map_elem(steps: &[Step], roots: &[Elem], e: &Elem) -> Elem {
    match e {
        Elem::Rat(_) => e.clone(),
        Elem::Quad { level, a, b } => {
            let a = map_elem(steps, roots, a);
            let b = map_elem(steps, roots, b);
            add(steps, &a, &mul(steps, &b, &roots[level - 1]))
        }
    }
}

/// Brings an elem of `t` and a scalar into one tower.
fn unify(t: &FieldTower, e: &Elem, s: &Scalar) -> (FieldTower, Elem, Elem) {
    if s.tower.is_prefix_of(t) {
        (t.clone(), e.clone(), s.elem.clone())
    } else if t.is_prefix_of(&s.tower) {
        (s.tower.clone(), e.clone(), s.elem.clone())
    } else {
        let (joined, roots) = t.join(&s.tower);
        let mapped = map_elem(&joined.steps, &roots, &s.elem);
        (joined, e.clone(), mapped)
    }
}

fn root_of_unity_over(base: &FieldTower, m: u64) -> Result<Scalar> {
    if m == 0 {
        return Err(Error::UnsupportedRootOfUnity(0));
    }
    let mut rest = m;
    let mut twos = 0u32;
    while rest.is_multiple_of(2) {
        rest /= 2;
        twos += 1;
    }
    let three = rest.is_multiple_of(3);
    if three {
        rest /= 3;
    }
    let five = rest.is_multiple_of(5);
    if five {
        rest /= 5;
    }
    if rest != 1 {
        return Err(Error::UnsupportedRootOfUnity(m));
    }
    let mut zeta = Scalar::one().lift(base);
    if twos >= 1 {
        let mut z = Scalar::from_int(-1);
        for _ in 1..twos {
            z = z.lift(&zeta.tower).sqrt();
        }
        zeta = &zeta * &z;
    }
    if three {
        let s = Scalar::from_int(-3).lift(&zeta.tower).sqrt();
        let z3 = (&s - &Scalar::one()) * Scalar::rational(1, 2);
        zeta = &zeta * &z3;
    }
    if five {
        let s5 = Scalar::from_int(5).lift(&zeta.tower).sqrt();
        let c = (&s5 - &Scalar::one()) * Scalar::rational(1, 2);
        let disc = &(&c * &c) - &Scalar::from_int(4);
        let r = disc.sqrt();
        let z5 = (&c + &r) * Scalar::rational(1, 2);
        zeta = &zeta * &z5;
    }
    debug_assert!(zeta.pow(m as i64).is_one());
    Ok(zeta)
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

/// An exact element of a [`FieldTower`].
#[derive(Clone)]
pub struct Scalar {
    tower: FieldTower,
    elem: Elem,
}

/// Result of [`Scalar::mult_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultOrder {
    Finite(u64),
    Infinite,
}

/// Operator selector for [`Scalar::field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            tower: FieldTower::rationals(),
            elem: Elem::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    /// `num/den`; panics when `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            tower: FieldTower::rationals(),
            elem: Elem::Rat(r),
        }
    }

    /// A primitive `m`-th root of unity in a fresh tower.
    pub fn root_of_unity(m: u64) -> Result<Self> {
        root_of_unity_over(&FieldTower::rationals(), m)
    }

    /// `sqrt(s)`, adjoining a square root when `s` is not already a square.
    pub fn sqrt(&self) -> Scalar {
        self.tower.adjoin_sqrt(self).1
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// The same element viewed in a tower that contains this one.
    pub fn lift(&self, tower: &FieldTower) -> Scalar {
        let (t, _, e) = unify(tower, &Elem::zero(), self);
        Scalar { tower: t, elem: e }
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.elem, Elem::Rat(r) if r.is_one())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.elem {
            Elem::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.elem, Elem::Rat(_))
    }

    /// Smallest tower level that contains the element.
    pub fn level(&self) -> usize {
        self.elem.level()
    }

    fn binop(&self, other: &Scalar, f: impl Fn(&[Step], &Elem, &Elem) -> Elem) -> Scalar {
        let (tower, a, b) = unify(&self.tower, &self.elem, other);
        let elem = f(&tower.steps, &a, &b);
        Scalar { tower, elem }
    }

    /// Strict four-operation entry point: both operands must share a tower up
    /// to prefix, otherwise [`Error::TowerMismatch`].
    pub fn field_arith(op: FieldOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        if !(a.tower.is_prefix_of(&b.tower) || b.tower.is_prefix_of(&a.tower)) {
            return Err(Error::TowerMismatch);
        }
        Ok(match op {
            FieldOp::Add => a + b,
            FieldOp::Sub => a - b,
            FieldOp::Mul => a * b,
            FieldOp::Div => a * &b.inv()?,
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        let elem = inv(&self.tower.steps, &self.elem).ok_or(Error::DivisionByZero)?;
        Ok(Scalar {
            tower: self.tower.clone(),
            elem,
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert (panics on `0^-k`).
    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut result = Scalar::one().lift(&self.tower);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Least `m ≥ 1` with `s^m = 1`, or `Infinite`.
    pub fn mult_order(&self) -> Result<MultOrder> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.is_one() {
            return Ok(MultOrder::Finite(1));
        }
        if let Some(r) = self.to_rational() {
            return Ok(if r == -BigRational::one() {
                MultOrder::Finite(2)
            } else {
                MultOrder::Infinite
            });
        }
        // roots of unity have modulus one in every embedding
        let z = self.embed(64);
        let modulus = z.norm_sqr();
        if !modulus.contains(&BigRational::one()) {
            return Ok(MultOrder::Infinite);
        }
        let degree = self.tower.degree();
        let bound = 2 * degree * degree + 2;
        let mut p = self.clone();
        for m in 1..=bound {
            if totient(m) <= degree && p.is_one() {
                return Ok(MultOrder::Finite(m));
            }
            p = &p * self;
        }
        Ok(MultOrder::Infinite)
    }

    /// Certified enclosure of the image under the tower's fixed complex
    /// embedding, of width at most `2^-bits` in each coordinate.
    pub fn embed(&self, bits: u32) -> ComplexInterval {
        interval::embed(self, bits)
    }

    /// Coordinates over the rationals as `(generator mask, coefficient)` pairs;
    /// bit `k` of the mask selects the generator of step `k`.
    pub fn rational_coordinates(&self) -> Vec<(u64, BigRational)> {
        let mut out = Vec::new();
        collect_coords(&self.elem, 0, &mut out);
        out.sort_by_key(|a| a.0);
        out
    }

    /// A compact canonical key usable for hashing or sorting.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }
}

fn collect_coords(e: &Elem, mask: u64, out: &mut Vec<(u64, BigRational)>) {
    match e {
        Elem::Rat(r) => {
            if !r.is_zero() {
                out.push((mask, r.clone()));
            }
        }
        Elem::Quad { level, a, b } => {
            collect_coords(a, mask, out);
            collect_coords(b, mask | (1 << (level - 1)), out);
        }
    }
}

fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.elem.level() == 0 && other.elem.level() == 0 {
            return self.elem == other.elem;
        }
        let (_, a, b) = unify(&self.tower, &self.elem, other);
        a == b
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.binop(rhs, $f)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational type underneath.
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        &self / rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            tower: self.tower.clone(),
            elem: neg(&self.elem),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn generator_name(steps: &[Step], k: usize) -> String {
    format!("sqrt({})", fmt_elem(steps, &steps[k].delta))
}

fn fmt_elem(steps: &[Step], e: &Elem) -> String {
    let mut coords = Vec::new();
    collect_coords(e, 0, &mut coords);
    coords.sort_by_key(|a| a.0);
    if coords.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mask, c)) in coords.iter().enumerate() {
        let gens: Vec<String> = (0..steps.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| generator_name(steps, k))
            .collect();
        let negative = c.is_negative();
        let mag = c.abs();
        let body = if gens.is_empty() {
            fmt_rational(&mag)
        } else if mag.is_one() {
            gens.join("*")
        } else {
            format!("{}*{}", fmt_rational(&mag), gens.join("*"))
        };
        match (i, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_elem(&self.tower.steps, &self.elem))
    }
}

impl Scalar {
    /// True when the printed form is a single signed term (no ` + ` / ` - `).
    pub fn is_monomial(&self) -> bool {
        let mut coords = Vec::new();
        collect_coords(&self.elem, 0, &mut coords);
        coords.len() <= 1
    }

    /// Rational scalars compare by value; others only by equality.
    pub fn partial_cmp_rational(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.to_rational()?.cmp(&other.to_rational()?))
    }
}
