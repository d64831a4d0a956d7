//! The GWA over the prime field `F_p`, using the same rewriting core as the
//! exact arithmetic.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gwa::{multiply_terms, ShiftCoeff};
use crate::poly::ZPoly;

/// A polynomial over `F_p`, coefficients ascending and trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Reduces a polynomial with rational coefficients whose denominators are
    /// prime to `p`.
    pub fn reduce(a: &ZPoly, p: u64) -> Result<Self> {
        let mut c = Vec::new();
        for s in a.coeffs() {
            let q = s.to_rational().ok_or_else(|| {
                Error::HypothesisViolation("coefficients must be rational".into())
            })?;
            let pm = num_bigint::BigInt::from(p);
            let num = ((q.numer() % &pm) + &pm) % &pm;
            let den = ((q.denom() % &pm) + &pm) % &pm;
            if den.is_zero() {
                return Err(Error::HypothesisViolation(format!(
                    "a denominator is divisible by {p}"
                )));
            }
            let inv = den.modpow(&(&pm - 2), &pm);
            c.push(((num * inv) % &pm).to_u64().expect("reduced"));
        }
        Ok(FpPoly::new(p, c))
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        FpPoly::new(self.p, c)
    }
}

impl ShiftCoeff for FpPoly {
    fn zero_like(&self) -> Self {
        FpPoly::new(self.p, Vec::new())
    }
    fn one_like(&self) -> Self {
        FpPoly::new(self.p, vec![1])
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0))
            .collect();
        FpPoly::new(self.p, c)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return self.zero_like();
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }
    /// `p(z - i)` by Horner's rule.
    fn shift(&self, i: i64) -> Self {
        let p = self.p as i64;
        let minus_i = (((-i) % p + p) % p) as u64;
        let lin = FpPoly::new(self.p, vec![minus_i, 1]);
        self.c.iter().rev().fold(self.zero_like(), |acc, v| {
            acc.mul(&lin).add(&FpPoly::new(self.p, vec![*v]))
        })
    }
}

type Elem = BTreeMap<i64, FpPoly>;

struct FpGwa {
    a: FpPoly,
}

impl FpGwa {
    fn mul(&self, l: &Elem, r: &Elem) -> Elem {
        multiply_terms(&self.a, l, r)
    }

    fn sub(&self, l: &Elem, r: &Elem) -> Elem {
        let mut out = l.clone();
        for (d, q) in r {
            let v = match out.get(d) {
                Some(p) => p.sub(q),
                None => self.a.zero_like().sub(q),
            };
            if v.is_zero() {
                out.remove(d);
            } else {
                out.insert(*d, v);
            }
        }
        out
    }

    fn gen(&self, d: i64, c: Vec<u64>) -> Elem {
        let mut e = Elem::new();
        e.insert(d, FpPoly::new(self.a.p, c));
        e
    }

    fn pow(&self, e: &Elem, k: u64) -> Elem {
        (0..k).fold(self.gen(0, vec![1]), |acc, _| self.mul(&acc, e))
    }

    fn commutator(&self, l: &Elem, r: &Elem) -> Elem {
        self.sub(&self.mul(l, r), &self.mul(r, l))
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2
        || (2..)
            .take_while(|d| d * d <= p)
            .any(|d| p.is_multiple_of(d))
    {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Over `F_p`, checks that `x^p` and `y^p` commute with `z`, `y` and `x`.
pub fn charp_center_check(a: &ZPoly, p: u64) -> Result<bool> {
    check_prime(p)?;
    let r = FpGwa {
        a: FpPoly::reduce(a, p)?,
    };
    let x = r.gen(1, vec![1]);
    let y = r.gen(-1, vec![1]);
    let z = r.gen(0, vec![0, 1]);
    let xp = r.pow(&x, p);
    let yp = r.pow(&y, p);
    Ok([
        r.commutator(&xp, &z),
        r.commutator(&yp, &z),
        r.commutator(&xp, &y),
        r.commutator(&x, &yp),
    ]
    .iter()
    .all(|c| c.is_empty()))
}

/// Over `F_p`, checks `x^k y - y x^k = (σ^{k-1}(b) - σ^{-1}(b)) x^{k-1}` with
/// `b = xy = σ(a)`.
pub fn cntp_identity_check(a: &ZPoly, p: u64, k: u64) -> Result<bool> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::HypothesisViolation("k must be positive".into()));
    }
    let r = FpGwa {
        a: FpPoly::reduce(a, p)?,
    };
    let x = r.gen(1, vec![1]);
    let y = r.gen(-1, vec![1]);
    let xk = r.pow(&x, k);
    let lhs = r.sub(&r.mul(&xk, &y), &r.mul(&y, &xk));
    let b = r.a.shift(1);
    let coeff = b.shift(k as i64 - 1).sub(&b.shift(-1));
    let mut c = Elem::new();
    c.insert(0, coeff);
    let rhs = r.mul(&c, &r.pow(&x, k - 1));
    Ok(lhs == rhs.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}
