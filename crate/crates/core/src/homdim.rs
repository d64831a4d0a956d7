//! Global dimension and the Calabi-Yau criterion from root configurations.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed::jordan_wells_product;
use crate::gwa::GwaPresentation;
use crate::poly::{Congruence, ZPoly, DEFAULT_PRECISION_BITS};
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gldim {
    One,
    Two,
    Infinite,
}

impl fmt::Display for Gldim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gldim::One => "1",
            Gldim::Two => "2",
            Gldim::Infinite => "infinity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// `gcd(a, a')`, nonconstant.
    MultipleRoot(ZPoly),
    /// `i > 0` with `gcd(a(z), a(z + i))` nonconstant.
    CongruentPair(i64),
    NoObstruction,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::MultipleRoot(g) => write!(f, "multiple root: gcd(a, a') = {g}"),
            Evidence::CongruentPair(i) => {
                write!(f, "congruent roots: a(z) and a(z + {i}) share a root")
            }
            Evidence::NoObstruction => write!(f, "no multiple or congruent roots"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GldimVerdict {
    pub value: Gldim,
    pub evidence: Evidence,
}

impl GldimVerdict {
    /// Rechecks the evidence against `a`.
    pub fn check(&self, a: &ZPoly) -> bool {
        match (&self.value, &self.evidence) {
            (Gldim::Infinite, Evidence::MultipleRoot(g)) => {
                !g.is_constant()
                    && a.exact_div(g).is_some()
                    && a.derivative().exact_div(g).is_some()
            }
            (Gldim::Two, Evidence::CongruentPair(i)) => {
                !a.has_multiple_root() && a.shares_root_with_shift(*i)
            }
            (Gldim::One, Evidence::NoObstruction) => {
                !a.has_multiple_root() && a.congruent_roots() == Congruence::None
            }
            _ => false,
        }
    }
}

/// Trichotomy: `∞` for a multiple root, `2` for congruent roots, else `1`.
pub fn gldim(p: &GwaPresentation) -> GldimVerdict {
    gldim_with(p, DEFAULT_PRECISION_BITS)
}

pub fn gldim_with(p: &GwaPresentation, bits: u32) -> GldimVerdict {
    gldim_of(p.a(), bits)
}

fn gldim_of(a: &ZPoly, bits: u32) -> GldimVerdict {
    if let Some(g) = a.multiple_root_witness() {
        return GldimVerdict {
            value: Gldim::Infinite,
            evidence: Evidence::MultipleRoot(g),
        };
    }
    match a.congruent_roots_with(bits) {
        Congruence::Witness(i) => GldimVerdict {
            value: Gldim::Two,
            evidence: Evidence::CongruentPair(i),
        },
        Congruence::None => GldimVerdict {
            value: Gldim::One,
            evidence: Evidence::NoObstruction,
        },
    }
}

/// The parameter `t` of `a = z(z - t)`.
pub fn quadratic_parameter(p: &GwaPresentation) -> Result<Scalar> {
    let a = p.a();
    if a.deg() != 2 || !a.is_monic() || !a.coeff(0).is_zero() {
        return Err(Error::HypothesisViolation(
            "a must have the form z(z - t)".into(),
        ));
    }
    Ok(-&a.coeff(1))
}

/// Defining polynomial of the fixed ring under a cyclic group of order `ℓ`,
/// renormalized so that the twist is `W ↦ W - 1`: `monic(A(ℓW))` with
/// `A(Z) = ∏_{i=0}^{ℓ-1} a(Z + i)`.
pub fn fixed_ring_polynomial(a: &ZPoly, ell: u64) -> ZPoly {
    jordan_wells_product(a, ell)
        .affine_substitute(&Scalar::from_int(ell as i64), &Scalar::zero())
        .monic()
}

/// Global dimension of `R^H` for `|H| = ℓ > 2` and `a = z(z - t)`.
///
/// The value comes from the case analysis on `t` (`t = 0`: `∞`; `t ∉ ℤ`: `1`;
/// `t ∈ ℤ`: `2` if `|t| ≥ ℓ`, else `∞`); the evidence comes from running the
/// trichotomy on the fixed ring's own defining polynomial, and the two must agree.
pub fn gldim_fixed(p: &GwaPresentation, ell: i64) -> Result<GldimVerdict> {
    gldim_fixed_with(p, ell, DEFAULT_PRECISION_BITS)
}

pub fn gldim_fixed_with(p: &GwaPresentation, ell: i64, bits: u32) -> Result<GldimVerdict> {
    if ell <= 2 {
        return Err(Error::HypothesisViolation(format!(
            "group order {ell} must exceed 2"
        )));
    }
    let t = quadratic_parameter(p)?;
    let by_cases = if t.is_zero() {
        Gldim::Infinite
    } else {
        match t.to_integer() {
            None => Gldim::One,
            Some(k) if k.magnitude() >= &num_bigint::BigUint::from(ell as u64) => Gldim::Two,
            Some(_) => Gldim::Infinite,
        }
    };
    let direct = gldim_of(&fixed_ring_polynomial(p.a(), ell as u64), bits);
    if direct.value != by_cases {
        return Err(Error::HypothesisViolation(format!(
            "case analysis gives {by_cases}, fixed-ring polynomial gives {}",
            direct.value
        )));
    }
    Ok(direct)
}

/// Calabi-Yau exactly when the global dimension is finite.
pub fn is_calabi_yau(p: &GwaPresentation) -> bool {
    gldim(p).value != Gldim::Infinite
}

/// Calabi-Yau property of the fixed ring under a cyclic group of order `ℓ > 2`.
pub fn calabi_yau_fixed(p: &GwaPresentation, ell: i64) -> Result<bool> {
    Ok(gldim_fixed(p, ell)?.value != Gldim::Infinite)
}
