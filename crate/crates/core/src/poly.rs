//! Dense univariate polynomials over a [`FieldTower`], with the shift operators
//! `σ^i: p(z) ↦ p(z - i)` and `Δ_m = σ^m - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::{FieldTower, Scalar};

/// Default precision (bits) for certified numeric bounds.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// A polynomial in one variable, lowest degree first, trimmed.
#[derive(Clone)]
pub struct ZPoly {
    tower: FieldTower,
    coeffs: Vec<Scalar>,
}

/// Outcome of [`ZPoly::congruent_roots`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Congruence {
    None,
    Witness(i64),
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly {
            tower: FieldTower::rationals(),
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        ZPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        ZPoly::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        ZPoly::from_ints(&[0, 1])
    }

    /// `c · z^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.push(c);
        ZPoly::new(coeffs)
    }

    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let mut tower = FieldTower::rationals();
        for c in &coeffs {
            if !c.tower().is_prefix_of(&tower) {
                tower = c.lift(&tower).tower().clone();
            }
        }
        let mut coeffs: Vec<Scalar> = coeffs.into_iter().map(|c| c.lift(&tower)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { tower, coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        ZPoly::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    /// `∏ (z - r)` over the given roots.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        roots.iter().fold(ZPoly::one(), |acc, r| {
            &acc * &ZPoly::new(vec![-r, Scalar::one()])
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// The constant value when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Scalar) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&l)
    }

    pub fn eval(&self, s: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * s) + c)
    }

    /// `self(q(z))`.
    pub fn compose(&self, q: &ZPoly) -> ZPoly {
        self.coeffs.iter().rev().fold(ZPoly::zero(), |acc, c| {
            &(&acc * q) + &ZPoly::constant(c.clone())
        })
    }

    /// `p(u·z + v)`.
    pub fn affine_substitute(&self, u: &Scalar, v: &Scalar) -> ZPoly {
        self.compose(&ZPoly::new(vec![v.clone(), u.clone()]))
    }

    /// `σ^i(p) = p(z - i)`; `i` may be negative.
    pub fn sigma_power(&self, i: i64) -> ZPoly {
        if i == 0 || self.is_constant() {
            return self.clone();
        }
        // Taylor shift: binomial expansion keeps this exact and quadratic
        let n = self.coeffs.len();
        let shift = Scalar::from_int(-i);
        let mut c = self.coeffs.clone();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let t = &c[j + 1] * &shift;
                c[j] = &c[j] + &t;
            }
        }
        ZPoly::new(c)
    }

    /// `(σ^m - 1)^i` applied to `self`.
    pub fn delta_power(&self, m: i64, i: u32) -> ZPoly {
        let mut p = self.clone();
        for _ in 0..i {
            p = &p.sigma_power(m) - &p;
        }
        p
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &ZPoly) -> (ZPoly, ZPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lead_inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (ZPoly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (ZPoly::new(q), ZPoly::new(r))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &ZPoly) -> Result<ZPoly> {
        Ok(self.xgcd(other)?.0)
    }

    /// `(g, s, t)` with `g = s·self + t·other` and `g` monic.
    pub fn xgcd(&self, other: &ZPoly) -> Result<(ZPoly, ZPoly, ZPoly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ZPoly::one(), ZPoly::zero());
        let (mut t0, mut t1) = (ZPoly::zero(), ZPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = r0.leading().inv()?;
        Ok((r0.scale(&l), s0.scale(&l), t0.scale(&l)))
    }

    /// True when `gcd(a, a')` is nonconstant.
    pub fn has_multiple_root(&self) -> bool {
        if self.deg() < 2 {
            return false;
        }
        !self
            .gcd(&self.derivative())
            .map(|g| g.is_constant())
            .unwrap_or(true)
    }

    /// The nonconstant `gcd(a, a')` when `a` has a multiple root.
    pub fn multiple_root_witness(&self) -> Option<ZPoly> {
        if self.deg() < 2 {
            return None;
        }
        let g = self.gcd(&self.derivative()).ok()?;
        (!g.is_constant()).then_some(g)
    }

    /// Upper bound on the modulus of every root (Cauchy), certified through
    /// interval enclosures of the coefficients.
    pub fn cauchy_bound(&self, bits: u32) -> BigRational {
        let n = self.deg();
        if n == 0 {
            return BigRational::zero();
        }
        let lead = self.leading().embed(bits);
        let lead_lo = {
            // |lead| ≥ max(|re|, |im|) lower bounds
            let re = if lead.re.contains_zero() {
                BigRational::zero()
            } else {
                lead.re.lo.abs().min(lead.re.hi.abs())
            };
            let im = if lead.im.contains_zero() {
                BigRational::zero()
            } else {
                lead.im.lo.abs().min(lead.im.hi.abs())
            };
            re.max(im)
        };
        assert!(
            lead_lo.is_positive(),
            "leading coefficient not separated from zero"
        );
        let mut m = BigRational::zero();
        for c in &self.coeffs[..n] {
            let u = c.embed(bits).abs_upper() / &lead_lo;
            if u > m {
                m = u;
            }
        }
        BigRational::one() + m
    }

    /// A positive integer `i` with `gcd(a(z), a(z+i))` nonconstant, if any.
    ///
    /// Every integer difference of roots is bounded by twice the Cauchy bound,
    /// so the search is complete.
    pub fn congruent_roots(&self) -> Congruence {
        self.congruent_roots_with(DEFAULT_PRECISION_BITS)
    }

    pub fn congruent_roots_with(&self, bits: u32) -> Congruence {
        if self.deg() < 2 {
            return Congruence::None;
        }
        let bound = (self.cauchy_bound(bits) * BigRational::from_integer(2.into()))
            .ceil()
            .to_integer();
        let bound = bound.to_i64().unwrap_or(i64::MAX);
        let mut i = 1i64;
        while i <= bound {
            if self.shares_root_with_shift(i) {
                return Congruence::Witness(i);
            }
            i += 1;
        }
        Congruence::None
    }

    /// True when `gcd(a(z), a(z+i))` is nonconstant.
    pub fn shares_root_with_shift(&self, i: i64) -> bool {
        let shifted = self.sigma_power(-i);
        !self.gcd(&shifted).map(|g| g.is_constant()).unwrap_or(true)
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// All rational roots (rational coefficients only), ascending, without
    /// multiplicity.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if !self.is_rational() || self.deg() == 0 {
            return Vec::new();
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // strip the root 0 first so the constant term is nonzero
        if p.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            while p.coeff(0).is_zero() {
                p = ZPoly::new(p.coeffs[1..].to_vec());
            }
        }
        if p.deg() == 0 {
            return roots;
        }
        let denom_lcm = p
            .coeffs
            .iter()
            .map(|c| c.to_rational().unwrap().denom().clone())
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let ints: Vec<BigInt> = p
            .coeffs
            .iter()
            .map(|c| {
                (c.to_rational().unwrap() * BigRational::from_integer(denom_lcm.clone()))
                    .to_integer()
            })
            .collect();
        let Some(nums) = divisors(&ints[0]) else {
            return roots;
        };
        let Some(dens) = divisors(ints.last().unwrap()) else {
            return roots;
        };
        for num in &nums {
            for den in &dens {
                for sign in [1i64, -1] {
                    let r = BigRational::new(num * BigInt::from(sign), den.clone());
                    if !roots.contains(&r) && p.eval(&Scalar::from_rational(r.clone())).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Renders with a chosen variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let (negative, body) = signed_scalar(c);
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

/// Splits a scalar's printed form into a sign and a factor-safe body.
pub(crate) fn signed_scalar(c: &Scalar) -> (bool, String) {
    if c.is_monomial() {
        let s = c.to_string();
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({c})"))
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 1 << 22 {
            return None;
        }
    }
    Some(out)
}

impl PartialEq for ZPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl Eq for ZPoly {}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({self})")
    }
}

impl<'a> Add<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &'a ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &'a ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a ZPoly> for &'a ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &'a ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<ZPoly> for ZPoly {
            type Output = ZPoly;
            fn $method(self, rhs: ZPoly) -> ZPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        -&self
    }
}
