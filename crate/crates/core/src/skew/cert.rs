//! Replayable certificates that `S/((f) ∩ S)` is finite-dimensional, where
//! `S = gr R` and `f = Σ_{g ∈ G} 1 # g` in `S # G`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Ambient, GrAmbient, GrElement, GrRing, Mono, SkewElement};
use crate::autos::{AutomorphismWord, CanonicalForm};
use crate::error::{Error, Result};
use crate::fixed::{diagonalize_deg2, diagonalize_weyl};
use crate::gwa::GwaPresentation;
use crate::linalg::{solve, Matrix};
use crate::parse::parse_scalar;
use crate::scalars::{MultOrder, Scalar};

type Skew = SkewElement<GrElement>;

/// Where a derivation term draws its ideal element from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// The group sum `f`.
    F,
    /// An earlier step.
    Step(usize),
}

/// `left · source · right`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivTerm {
    pub left: Skew,
    pub source: Source,
    pub right: Skew,
}

/// A claimed element of `(f)` with the combination that produces it.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub element: Skew,
    pub derivation: Vec<DerivTerm>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub description: String,
    pub ring: GrRing,
    /// Group elements as linear actions on `x, y, z`; index 0 is the identity.
    pub group: Vec<Matrix>,
    pub steps: Vec<Step>,
    /// Monomials `m` with `m # e` equal to the element of the given step.
    pub conclusion: Vec<(Mono, usize)>,
    pub findim_basis: Vec<Mono>,
}

fn eval_step(amb: &GrAmbient, f: &Skew, prior: &[Step], terms: &[DerivTerm]) -> Result<Skew> {
    let mut acc = Skew::zero();
    for t in terms {
        let src = match t.source {
            Source::F => f,
            Source::Step(j) if j < prior.len() => &prior[j].element,
            Source::Step(j) => {
                return Err(Error::CertificateMismatch(format!(
                    "step {j} referenced before it exists"
                )))
            }
        };
        let v = super::skew_multiply(amb, &super::skew_multiply(amb, &t.left, src)?, &t.right)?;
        acc = acc.add(amb, &v);
    }
    Ok(acc)
}

impl Certificate {
    /// Re-evaluates every step and recomputes the quotient basis.
    pub fn replay(&self) -> Result<()> {
        let amb = GrAmbient::from_elements(self.ring.clone(), self.group.clone())?;
        let f = Skew::group_sum(&amb);
        for (i, s) in self.steps.iter().enumerate() {
            let v = eval_step(&amb, &f, &self.steps[..i], &s.derivation)?;
            if v != s.element {
                return Err(Error::CertificateMismatch(format!(
                    "step {i} evaluates to {v}, not {}",
                    s.element
                )));
            }
        }
        for (m, i) in &self.conclusion {
            let want = Skew::single(&amb, GrElement::monomial(*m, Scalar::one()), 0);
            if self.steps.get(*i).map(|s| &s.element) != Some(&want) {
                return Err(Error::CertificateMismatch(format!(
                    "conclusion {} # e is not step {i}",
                    super::mono_string(m)
                )));
            }
        }
        let monos: Vec<Mono> = self.conclusion.iter().map(|(m, _)| *m).collect();
        let basis = findim_basis(&self.ring, &monos)?;
        if basis != self.findim_basis {
            return Err(Error::CertificateMismatch("quotient basis differs".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = CertificateDoc::from(self);
        let value = serde_json::to_value(&doc).expect("serializable");
        serde_json::to_string_pretty(&value).expect("serializable")
    }

    /// Parses a certificate; [`Certificate::replay`] checks it.
    pub fn from_json(src: &str) -> Result<Self> {
        let doc: CertificateDoc = serde_json::from_str(src).map_err(|e| Error::Parse {
            start: 0,
            end: src.len(),
            message: format!("certificate: {e}"),
        })?;
        doc.into_certificate()
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.findim_basis.iter().map(super::mono_string).collect()
    }
}

/// Is `u` in the ideal of `S` generated by the monomial `m`?
fn mono_divides(ring: &GrRing, m: &Mono, u: &Mono) -> bool {
    let n = ring.n as u32;
    let (i1, j1, k1) = *m;
    let (i, j, k) = *u;
    if k < k1 {
        return false;
    }
    let mut r = 0u32;
    while k1 + n * r <= k {
        let i2 = i as i64 + r as i64 - i1 as i64;
        let j2 = j as i64 + r as i64 - j1 as i64;
        if i2 >= 0 && j2 >= 0 && (i2 == 0 || j2 == 0) {
            return true;
        }
        r += 1;
    }
    false
}

/// Upper limit on pure powers searched for.
const POWER_LIMIT: u32 = 4096;

/// Monomial basis of `S/(monos)`; fails unless some power of each of
/// `x`, `y`, `z` lies in the ideal.
pub fn findim_basis(ring: &GrRing, monos: &[Mono]) -> Result<Vec<Mono>> {
    let inside = |u: &Mono| monos.iter().any(|m| mono_divides(ring, m, u));
    let first = |make: &dyn Fn(u32) -> Mono| {
        (0..=POWER_LIMIT)
            .find(|&e| inside(&make(e)))
            .ok_or_else(|| Error::HypothesisViolation("quotient is not finite-dimensional".into()))
    };
    let ax = first(&|e| (e, 0, 0))?;
    let ay = first(&|e| (0, e, 0))?;
    let az = first(&|e| (0, 0, e))?;
    let mut out = BTreeSet::new();
    for k in 0..az {
        for i in 0..ax {
            out.insert((i, 0, k));
        }
        for j in 1..ay {
            out.insert((0, j, k));
        }
    }
    Ok(out.into_iter().filter(|u| !inside(u)).collect())
}

fn diag_action(b: &Scalar) -> Result<Matrix> {
    let mut m = super::identity_action();
    m[0][0] = b.clone();
    m[1][1] = b.inv()?;
    Ok(m)
}

/// Graded action of `Θ_c ∘ Ω`: `x ↦ c⁻¹y`, `y ↦ (-1)^n c x`, `z ↦ -z`.
fn theta_omega_action(c: &Scalar, n: usize) -> Result<Matrix> {
    let zero = Scalar::zero;
    let sign = Scalar::from_int(if n.is_multiple_of(2) { 1 } else { -1 });
    Ok(vec![
        vec![zero(), c.inv()?, zero()],
        vec![&sign * c, zero(), zero()],
        vec![zero(), zero(), Scalar::from_int(-1)],
    ])
}

/// Builds a pertinency certificate for `⟨g⟩` acting on `R`.
///
/// `deg a ≤ 2` first passes to a basis on which `g` is diagonal. For a
/// diagonal action `x ↦ γx` of order `ℓ`, the chain `u ↦ x·u - u·(γ^{-j}x)`
/// removes one group component per round and ends in `x^{ℓ-1} # e`;
/// likewise for `y`. For `Θ ∘ Ω` the low-degree monomials are obtained by
/// solving for a combination of `s·f·(t # h)`.
pub fn auslander_witness(p: &GwaPresentation, g: &AutomorphismWord) -> Result<Certificate> {
    if g.presentation() != p {
        return Err(Error::PresentationMismatch);
    }
    if !g.is_filtered() {
        return Err(Error::NotEligible("the map is not filtered".into()));
    }
    let ell = match g.order()? {
        MultOrder::Finite(l) if l >= 2 => l,
        MultOrder::Finite(_) => {
            return Err(Error::NotEligible(
                "the identity generates the trivial group".into(),
            ))
        }
        MultOrder::Infinite => return Err(Error::NotEligible("the map has infinite order".into())),
    };
    let n = p.n();
    let (ring, action, gamma) = match n {
        1 | 2 => {
            let d = if n == 1 {
                diagonalize_weyl(g)?
            } else {
                diagonalize_deg2(g)?
            };
            (
                GrRing::new(n, d.new_a.leading()),
                diag_action(&d.gamma)?,
                Some(d.gamma),
            )
        }
        _ => match g.canonical_form()? {
            CanonicalForm::Theta(b) => (GrRing::of(p), diag_action(&b)?, Some(b)),
            CanonicalForm::ThetaOmega(c) => (GrRing::of(p), theta_omega_action(&c, n)?, None),
            other => return Err(Error::NonCanonical(other.to_string())),
        },
    };
    let amb = GrAmbient::cyclic(ring.clone(), &action)?;
    let (steps, conclusion) = match gamma {
        Some(gm) => diagonal_chain(&amb, &gm, ell as usize)?,
        None => omega_steps(&amb)?,
    };
    let monos: Vec<Mono> = conclusion.iter().map(|(m, _)| *m).collect();
    let findim_basis = findim_basis(&ring, &monos)?;
    let cert = Certificate {
        description: format!("{g} acting on the ring with a = {}", p.a()),
        ring,
        group: amb.group.clone(),
        steps,
        conclusion,
        findim_basis,
    };
    cert.replay()?;
    Ok(cert)
}

fn mono_elem(m: Mono) -> GrElement {
    GrElement::monomial(m, Scalar::one())
}

/// Rounds of `u ↦ v·u - u·(c·v)` for `v = x` (`dir = 1`) or `v = y`
/// (`dir = -1`), then a rescaling to `v^{ℓ-1} # e`.
fn eliminate(
    amb: &GrAmbient,
    gamma: &Scalar,
    ell: usize,
    dir: i64,
    steps: &mut Vec<Step>,
) -> Result<usize> {
    let f = Skew::group_sum(amb);
    let v = if dir > 0 { amb.ring.x() } else { amb.ring.y() };
    let name = if dir > 0 { "x" } else { "y" };
    let mut prev = Source::F;
    let mut current = f.clone();
    for j in (1..ell).rev() {
        // g^i(v) = γ^{±i} v, so c = γ^{∓j} kills the component at g^j
        let c = gamma.pow(-dir * j as i64);
        let left = Skew::single(amb, v.clone(), 0);
        let right = Skew::single(amb, v.scale(&c), 0);
        let minus = Skew::single(amb, GrElement::one().scale(&Scalar::from_int(-1)), 0);
        let one = Skew::single(amb, GrElement::one(), 0);
        let derivation = vec![
            DerivTerm {
                left,
                source: prev.clone(),
                right: one,
            },
            DerivTerm {
                left: minus,
                source: prev.clone(),
                right,
            },
        ];
        let element = eval_step(amb, &f, steps, &derivation)?;
        steps.push(Step {
            element: element.clone(),
            derivation,
            note: format!("{name}*u - u*(({c})*{name}) removes the component at g^{j}"),
        });
        prev = Source::Step(steps.len() - 1);
        current = element;
    }
    let coeff = current
        .comps
        .get(&0)
        .and_then(|e| e.terms.values().next().cloned())
        .filter(|_| current.comps.len() == 1)
        .ok_or_else(|| {
            Error::CertificateMismatch("elimination did not isolate the identity component".into())
        })?;
    let derivation = vec![DerivTerm {
        left: Skew::single(amb, GrElement::one().scale(&coeff.inv()?), 0),
        source: prev,
        right: Skew::single(amb, GrElement::one(), 0),
    }];
    let element = eval_step(amb, &f, steps, &derivation)?;
    steps.push(Step {
        element,
        derivation,
        note: format!("rescale to {name}^{} # e", ell - 1),
    });
    Ok(steps.len() - 1)
}

type Chain = (Vec<Step>, Vec<(Mono, usize)>);

fn diagonal_chain(amb: &GrAmbient, gamma: &Scalar, ell: usize) -> Result<Chain> {
    let mut steps = Vec::new();
    let e = (ell - 1) as u32;
    let xs = eliminate(amb, gamma, ell, 1, &mut steps)?;
    let ys = eliminate(amb, gamma, ell, -1, &mut steps)?;
    // y^{ℓ-1} x^{ℓ-1} = lead^{ℓ-1} z^{n(ℓ-1)} in gr R
    let lead = amb.ring.lead.pow(e as i64);
    let derivation = vec![DerivTerm {
        left: Skew::single(amb, mono_elem((0, e, 0)).scale(&lead.inv()?), 0),
        source: Source::Step(xs),
        right: Skew::single(amb, GrElement::one(), 0),
    }];
    let f = Skew::group_sum(amb);
    let element = eval_step(amb, &f, &steps, &derivation)?;
    steps.push(Step {
        element,
        derivation,
        note: format!("y^{e} * x^{e} reduces to a power of z"),
    });
    let zs = steps.len() - 1;
    let zk = amb.ring.n as u32 * e;
    Ok((
        steps,
        vec![((e, 0, 0), xs), ((0, e, 0), ys), ((0, 0, zk), zs)],
    ))
}

/// Solves `target # e = Σ c · (s # e) f (t # h)` over monomials `s, t` with
/// `deg s + deg t = deg target`.
fn solve_from_f(amb: &GrAmbient, target: Mono, note: &str) -> Result<Step> {
    let ring = &amb.ring;
    let d = ring.degree(&target);
    let f = Skew::group_sum(amb);
    let mut cands: Vec<(Mono, Mono, usize, Skew)> = Vec::new();
    for ds in 0..=d {
        for s in ring.monomials_of_degree(ds) {
            for t in ring.monomials_of_degree(d - ds) {
                for h in 0..amb.order() {
                    let left = Skew::single(amb, mono_elem(s), 0);
                    let right = Skew::single(amb, mono_elem(t), h);
                    let v =
                        super::skew_multiply(amb, &super::skew_multiply(amb, &left, &f)?, &right)?;
                    if !v.comps.is_empty() && !cands.iter().any(|c| c.3 == v) {
                        cands.push((s, t, h, v));
                    }
                }
            }
        }
    }
    let mut keys: BTreeSet<(usize, Mono)> = BTreeSet::new();
    for c in &cands {
        for (g, e) in &c.3.comps {
            for m in e.terms.keys() {
                keys.insert((*g, *m));
            }
        }
    }
    keys.insert((0, target));
    let coord = |v: &Skew, g: usize, m: &Mono| {
        v.comps
            .get(&g)
            .and_then(|e| e.terms.get(m).cloned())
            .unwrap_or_else(Scalar::zero)
    };
    let rows: Matrix = keys
        .iter()
        .map(|(g, m)| cands.iter().map(|c| coord(&c.3, *g, m)).collect())
        .collect();
    let rhs: Vec<Scalar> = keys
        .iter()
        .map(|(g, m)| Scalar::from_int((*g == 0 && *m == target) as i64))
        .collect();
    let sol = solve(&rows, &rhs).ok_or_else(|| {
        Error::CertificateMismatch(format!(
            "{} # e is not reached from f in one round",
            super::mono_string(&target)
        ))
    })?;
    let derivation: Vec<DerivTerm> = cands
        .iter()
        .zip(&sol)
        .filter(|(_, c)| !c.is_zero())
        .map(|((s, t, h, _), c)| DerivTerm {
            left: Skew::single(amb, mono_elem(*s).scale(c), 0),
            source: Source::F,
            right: Skew::single(amb, mono_elem(*t), *h),
        })
        .collect();
    let element = eval_step(amb, &f, &[], &derivation)?;
    Ok(Step {
        element,
        derivation,
        note: note.to_string(),
    })
}

/// For `Θ ∘ Ω` the smallest powers of `x`, `y` and `z` lying in the ideal
/// generated by `f`. Every element of that ideal is a sum of `s·f·(t # h)`,
/// so one linear solve per degree decides membership.
fn omega_steps(amb: &GrAmbient) -> Result<Chain> {
    let limit = 2 * amb.order() as u32;
    let mut steps = Vec::new();
    let mut conclusion = Vec::new();
    for (name, unit) in [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1))] {
        let found = (1..=limit).find_map(|k| {
            let m: Mono = (unit.0 * k, unit.1 * k, unit.2 * k);
            solve_from_f(
                amb,
                m,
                &format!("{name}^{k} # e as a combination of s*f*(t # h)"),
            )
            .ok()
            .map(|s| (m, s))
        });
        let (m, step) = found.ok_or_else(|| {
            Error::CertificateMismatch(format!(
                "no power of {name} up to {limit} lies in the ideal of f"
            ))
        })?;
        steps.push(step);
        conclusion.push((m, steps.len() - 1));
    }
    Ok((steps, conclusion))
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
struct TermDoc {
    x: u32,
    y: u32,
    z: u32,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct CompDoc {
    group: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct DerivDoc {
    left: Vec<CompDoc>,
    source: String,
    right: Vec<CompDoc>,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    element: Vec<CompDoc>,
    derivation: Vec<DerivDoc>,
    note: String,
}

#[derive(Serialize, Deserialize)]
struct ConclusionDoc {
    monomial: [u32; 3],
    step: usize,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    description: String,
    n: usize,
    lead: String,
    group: Vec<Vec<Vec<String>>>,
    steps: Vec<StepDoc>,
    conclusion: Vec<ConclusionDoc>,
    findim_basis: Vec<[u32; 3]>,
}

fn skew_doc(s: &Skew) -> Vec<CompDoc> {
    s.comps
        .iter()
        .map(|(g, e)| CompDoc {
            group: *g,
            terms: e
                .terms
                .iter()
                .map(|(m, c)| TermDoc {
                    x: m.0,
                    y: m.1,
                    z: m.2,
                    coeff: c.to_string(),
                })
                .collect(),
        })
        .collect()
}

fn skew_from(doc: &[CompDoc]) -> Result<Skew> {
    let mut s = Skew::zero();
    for c in doc {
        let mut e = GrElement::zero();
        for t in &c.terms {
            e = e.add(&GrElement::monomial(
                (t.x, t.y, t.z),
                parse_scalar(&t.coeff)?,
            ));
        }
        if !e.is_zero() {
            s.comps.insert(c.group, e);
        }
    }
    Ok(s)
}

impl From<&Certificate> for CertificateDoc {
    fn from(c: &Certificate) -> Self {
        CertificateDoc {
            description: c.description.clone(),
            n: c.ring.n,
            lead: c.ring.lead.to_string(),
            group: c
                .group
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|r| r.iter().map(|v| v.to_string()).collect())
                        .collect()
                })
                .collect(),
            steps: c
                .steps
                .iter()
                .map(|s| StepDoc {
                    element: skew_doc(&s.element),
                    derivation: s
                        .derivation
                        .iter()
                        .map(|t| DerivDoc {
                            left: skew_doc(&t.left),
                            source: match t.source {
                                Source::F => "f".into(),
                                Source::Step(i) => format!("step {i}"),
                            },
                            right: skew_doc(&t.right),
                        })
                        .collect(),
                    note: s.note.clone(),
                })
                .collect(),
            conclusion: c
                .conclusion
                .iter()
                .map(|(m, i)| ConclusionDoc {
                    monomial: [m.0, m.1, m.2],
                    step: *i,
                })
                .collect(),
            findim_basis: c.findim_basis.iter().map(|m| [m.0, m.1, m.2]).collect(),
        }
    }
}

impl CertificateDoc {
    fn into_certificate(self) -> Result<Certificate> {
        let bad = |msg: String| Error::Parse {
            start: 0,
            end: 0,
            message: msg,
        };
        let group = self
            .group
            .iter()
            .map(|m| {
                m.iter()
                    .map(|r| {
                        r.iter()
                            .map(|v| parse_scalar(v))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Matrix>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut steps = Vec::new();
        for s in &self.steps {
            let mut derivation = Vec::new();
            for t in &s.derivation {
                let source = if t.source == "f" {
                    Source::F
                } else {
                    let idx = t
                        .source
                        .strip_prefix("step ")
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| bad(format!("unknown source '{}'", t.source)))?;
                    Source::Step(idx)
                };
                derivation.push(DerivTerm {
                    left: skew_from(&t.left)?,
                    source,
                    right: skew_from(&t.right)?,
                });
            }
            steps.push(Step {
                element: skew_from(&s.element)?,
                derivation,
                note: s.note.clone(),
            });
        }
        Ok(Certificate {
            description: self.description,
            ring: GrRing::new(self.n, parse_scalar(&self.lead)?),
            group,
            steps,
            conclusion: self
                .conclusion
                .iter()
                .map(|c| ((c.monomial[0], c.monomial[1], c.monomial[2]), c.step))
                .collect(),
            findim_basis: self
                .findim_basis
                .iter()
                .map(|m| (m[0], m[1], m[2]))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::parse_automorphism;
    use crate::poly::ZPoly;

    fn pres(c: &[i64]) -> GwaPresentation {
        GwaPresentation::new(ZPoly::from_ints(c)).unwrap()
    }

    #[test]
    fn theta_minus_one_n2() {
        let p = pres(&[0, -3, 1]);
        let g = AutomorphismWord::theta(&p, Scalar::from_int(-1)).unwrap();
        let c = auslander_witness(&p, &g).unwrap();
        assert_eq!(c.findim_basis, vec![(0, 0, 0), (0, 0, 1)]);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        back.replay().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn theta_order_three() {
        let p = pres(&[0, -3, 1]);
        let g = parse_automorphism(&p, "theta(zeta(3))").unwrap();
        let c = auslander_witness(&p, &g).unwrap();
        // two elimination rounds then a rescaling, for each of x and y
        assert_eq!(c.steps.len(), 7);
        for m in &c.findim_basis {
            assert!(m.0 <= 1 && m.1 <= 1 && m.2 <= 3);
        }
    }

    #[test]
    fn omega_cases() {
        let p = pres(&[0, -1, 0, 1]);
        let g = parse_automorphism(&p, "theta(2) * omega").unwrap();
        let c = auslander_witness(&p, &g).unwrap();
        assert_eq!(c.group.len(), 4);
        let found: Vec<Mono> = c.conclusion.iter().map(|(m, _)| *m).collect();
        assert_eq!(found, vec![(3, 0, 0), (0, 3, 0), (0, 0, 4)]);
        assert_eq!(c.findim_basis.len(), 18);
        let p = pres(&[0, -6, 11, -6, 1]);
        let g = parse_automorphism(&p, "theta(3) * omega").unwrap();
        let c = auslander_witness(&p, &g).unwrap();
        assert_eq!(c.findim_basis, vec![(0, 0, 0), (0, 1, 0), (1, 0, 0)]);
    }

    #[test]
    fn tampering_is_detected() {
        let p = pres(&[0, -3, 1]);
        let g = AutomorphismWord::theta(&p, Scalar::from_int(-1)).unwrap();
        let mut c = auslander_witness(&p, &g).unwrap();
        c.steps[0].element = c.steps[0].element.scale(
            &GrAmbient::cyclic(c.ring.clone(), &c.group[1]).unwrap(),
            &Scalar::from_int(2),
        );
        assert!(matches!(c.replay(), Err(Error::CertificateMismatch(_))));
    }

    #[test]
    fn ineligible() {
        let p = pres(&[0, -3, 1]);
        let g = AutomorphismWord::phi(&p, 1, Scalar::one()).unwrap();
        assert!(matches!(
            auslander_witness(&p, &g),
            Err(Error::NotEligible(_))
        ));
    }
}
