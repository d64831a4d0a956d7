//! The shared expression grammar for scalars, polynomials, algebra elements
//! and automorphism words.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! atom    := number | ident | ident '(' args ')' | '(' sum ')'
//! ```
//!
//! Scalars understand `sqrt(e)`, `zeta(m)` and `i`; polynomials add one
//! variable (`z`, `Z` or `C`); elements use `x`, `y`, `z`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gwa::{GwaElement, GwaPresentation};
use crate::poly::ZPoly;
use crate::scalars::Scalar;

/// Byte range into the source text.
pub type Span = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Ident(String),
    Call(String, Vec<Node>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub expr: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            let n: BigInt = src[pos..end].parse().expect("digits");
            out.push((Tok::Num(n), (pos, end)));
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            out.push((Tok::Ident(src[pos..end].to_string()), (pos, end)));
            i = j;
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), (pos, pos + 1)));
            i += 1;
        } else {
            return Err(Error::parse(
                pos,
                pos + c.len_utf8(),
                format!("unexpected character '{c}'"),
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, Span)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn span_here(&self) -> Span {
        self.toks
            .get(self.pos)
            .map_or((self.len, self.len), |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<Span> {
        let sp = self.span_here();
        if self.eat(c) {
            Ok(sp)
        } else {
            Err(Error::parse(sp.0, sp.1, format!("expected '{c}'")))
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym('+')) => '+',
                Some(Tok::Sym('-')) => '-',
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.product()?;
            let span = (lhs.span.0, rhs.span.1);
            let expr = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { expr, span };
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('('))
        )
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let div = match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    true
                }
                _ if self.starts_atom() => false,
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            let span = (lhs.span.0, rhs.span.1);
            let expr = if div {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { expr, span };
        }
    }

    fn unary(&mut self) -> Result<Node> {
        let start = self.span_here().0;
        if self.eat('-') {
            let inner = self.unary()?;
            let span = (start, inner.span.1);
            return Ok(Node {
                expr: Expr::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let sp = self.span_here();
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                i64::try_from(n).map_err(|_| Error::parse(sp.0, sp.1, "exponent too large"))?
            }
            _ => return Err(Error::parse(sp.0, sp.1, "expected an integer exponent")),
        };
        let end = if paren { self.expect(')')?.1 } else { sp.1 };
        let span = (base.span.0, end);
        Ok(Node {
            expr: Expr::Pow(Box::new(base), if neg { -e } else { e }),
            span,
        })
    }

    fn atom(&mut self) -> Result<Node> {
        let sp = self.span_here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Node {
                    expr: Expr::Num(n),
                    span: sp,
                })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.sum()?);
                            if self.eat(')') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    let end = self.toks[self.pos - 1].1 .1;
                    Ok(Node {
                        expr: Expr::Call(name, args),
                        span: (sp.0, end),
                    })
                } else {
                    Ok(Node {
                        expr: Expr::Ident(name),
                        span: sp,
                    })
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                let end = self.expect(')')?.1;
                Ok(Node {
                    expr: inner.expr,
                    span: (sp.0, end),
                })
            }
            Some(_) => Err(Error::parse(sp.0, sp.1, "unexpected token")),
            None => Err(Error::parse(sp.0, sp.1, "unexpected end of input")),
        }
    }
}

/// Parses a full expression.
pub fn parse_expr(src: &str) -> Result<Node> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        len: src.len(),
    };
    let node = p.sum()?;
    if p.pos != toks.len() {
        let sp = p.span_here();
        return Err(Error::parse(sp.0, sp.1, "trailing input"));
    }
    Ok(node)
}

/// Target rings for expression evaluation.
trait Ring: Sized + Clone {
    fn from_scalar(&self, c: Scalar) -> Self;
    fn ident(&self, name: &str, span: Span) -> Result<Self>;
    fn add(&self, a: &Self, b: &Self) -> Self;
    fn sub(&self, a: &Self, b: &Self) -> Self;
    fn mul(&self, a: &Self, b: &Self) -> Self;
    fn as_scalar(&self, v: &Self) -> Option<Scalar>;
    fn scale(&self, v: &Self, c: &Scalar) -> Self;
    fn one(&self) -> Self {
        self.from_scalar(Scalar::one())
    }
}

fn eval<R: Ring>(ctx: &R, node: &Node) -> Result<R> {
    let (s, e) = node.span;
    Ok(match &node.expr {
        Expr::Num(n) => ctx.from_scalar(Scalar::from_bigint(n.clone())),
        Expr::Ident(name) => ctx.ident(name, node.span)?,
        Expr::Call(..) => ctx.from_scalar(eval_call(node)?),
        Expr::Neg(a) => {
            let v = eval(ctx, a)?;
            ctx.scale(&v, &Scalar::from_int(-1))
        }
        Expr::Add(a, b) => ctx.add(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Sub(a, b) => ctx.sub(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Mul(a, b) => ctx.mul(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Div(a, b) => {
            let num = eval(ctx, a)?;
            let den = eval(ctx, b)?;
            let c = ctx
                .as_scalar(&den)
                .ok_or_else(|| Error::parse(b.span.0, b.span.1, "can only divide by a constant"))?;
            let inv = c
                .inv()
                .map_err(|_| Error::parse(b.span.0, b.span.1, "division by zero"))?;
            ctx.scale(&num, &inv)
        }
        Expr::Pow(a, k) => {
            let base = eval(ctx, a)?;
            if *k < 0 {
                let c = ctx
                    .as_scalar(&base)
                    .ok_or_else(|| Error::parse(s, e, "negative powers need a constant base"))?;
                let inv = c
                    .inv()
                    .map_err(|_| Error::parse(s, e, "division by zero"))?;
                ctx.from_scalar(inv.pow(-k))
            } else {
                let mut acc = ctx.one();
                for _ in 0..*k {
                    acc = ctx.mul(&acc, &base);
                }
                acc
            }
        }
    })
}

fn eval_call(node: &Node) -> Result<Scalar> {
    let Expr::Call(name, args) = &node.expr else {
        unreachable!()
    };
    let (s, e) = node.span;
    match (name.as_str(), args.as_slice()) {
        ("sqrt", [arg]) => Ok(eval_scalar(arg)?.sqrt()),
        ("zeta", [arg]) => {
            let m = eval_scalar(arg)?
                .to_i64()
                .filter(|m| *m >= 1)
                .ok_or_else(|| {
                    Error::parse(arg.span.0, arg.span.1, "zeta needs a positive integer")
                })?;
            Scalar::root_of_unity(m as u64).map_err(|err| Error::parse(s, e, err.to_string()))
        }
        ("sqrt" | "zeta", _) => Err(Error::parse(s, e, format!("{name} takes one argument"))),
        _ => Err(Error::parse(s, e, format!("unknown function '{name}'"))),
    }
}

impl Ring for Scalar {
    fn from_scalar(&self, c: Scalar) -> Self {
        c
    }
    fn ident(&self, name: &str, span: Span) -> Result<Self> {
        match name {
            "i" => Ok(Scalar::root_of_unity(4).expect("fourth roots are supported")),
            _ => Err(Error::parse(
                span.0,
                span.1,
                format!("unknown symbol '{name}'"),
            )),
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Self {
        a + b
    }
    fn sub(&self, a: &Self, b: &Self) -> Self {
        a - b
    }
    fn mul(&self, a: &Self, b: &Self) -> Self {
        a * b
    }
    fn as_scalar(&self, v: &Self) -> Option<Scalar> {
        Some(v.clone())
    }
    fn scale(&self, v: &Self, c: &Scalar) -> Self {
        v * c
    }
}

/// Context carrying the polynomial variable name.
#[derive(Clone)]
struct PolyRing<'a> {
    var: &'a str,
    value: ZPoly,
}

impl Ring for PolyRing<'_> {
    fn from_scalar(&self, c: Scalar) -> Self {
        self.with(ZPoly::constant(c))
    }
    fn ident(&self, name: &str, span: Span) -> Result<Self> {
        if name == self.var {
            Ok(self.with(ZPoly::var()))
        } else {
            Scalar::one()
                .ident(name, span)
                .map(|c| self.from_scalar(c))
                .map_err(|_| {
                    Error::parse(
                        span.0,
                        span.1,
                        format!("unknown symbol '{name}' (the variable is '{}')", self.var),
                    )
                })
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Self {
        self.with(&a.value + &b.value)
    }
    fn sub(&self, a: &Self, b: &Self) -> Self {
        self.with(&a.value - &b.value)
    }
    fn mul(&self, a: &Self, b: &Self) -> Self {
        self.with(&a.value * &b.value)
    }
    fn as_scalar(&self, v: &Self) -> Option<Scalar> {
        v.value.as_constant()
    }
    fn scale(&self, v: &Self, c: &Scalar) -> Self {
        self.with(v.value.scale(c))
    }
}

impl PolyRing<'_> {
    fn with(&self, value: ZPoly) -> Self {
        PolyRing {
            var: self.var,
            value,
        }
    }
}

impl Ring for GwaElement {
    fn from_scalar(&self, c: Scalar) -> Self {
        self.presentation().scalar(c)
    }
    fn ident(&self, name: &str, span: Span) -> Result<Self> {
        let p = self.presentation();
        match name {
            "x" => Ok(p.x()),
            "y" => Ok(p.y()),
            "z" => Ok(p.z()),
            _ => Scalar::one()
                .ident(name, span)
                .map(|c| p.scalar(c))
                .map_err(|_| Error::parse(span.0, span.1, format!("unknown symbol '{name}'"))),
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Self {
        a + b
    }
    fn sub(&self, a: &Self, b: &Self) -> Self {
        a - b
    }
    fn mul(&self, a: &Self, b: &Self) -> Self {
        a * b
    }
    fn as_scalar(&self, v: &Self) -> Option<Scalar> {
        v.as_scalar()
    }
    fn scale(&self, v: &Self, c: &Scalar) -> Self {
        v.scale(c)
    }
}

/// Parses a scalar literal such as `1/2 + 3*sqrt(2)` or `zeta(3)`.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let node = parse_expr(src)?;
    eval_scalar(&node)
}

pub(crate) fn eval_scalar(node: &Node) -> Result<Scalar> {
    eval(&Scalar::zero(), node)
}

/// Parses a polynomial in the named variable.
pub fn parse_poly_in(src: &str, var: &str) -> Result<ZPoly> {
    let node = parse_expr(src)?;
    let ctx = PolyRing {
        var,
        value: ZPoly::zero(),
    };
    Ok(eval(&ctx, &node)?.value)
}

/// Parses a polynomial in `z`.
pub fn parse_poly(src: &str) -> Result<ZPoly> {
    parse_poly_in(src, "z")
}

/// Parses an element word over `x`, `y`, `z` and normalizes it.
pub fn parse_element(pres: &GwaPresentation, src: &str) -> Result<GwaElement> {
    let node = parse_expr(src)?;
    eval(&pres.zero(), &node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("1/2 + 1/3").unwrap(), Scalar::rational(5, 6));
        let s = parse_scalar("sqrt(2)*sqrt(2)").unwrap();
        assert_eq!(s, Scalar::from_int(2));
        assert_eq!(parse_scalar("i^2").unwrap(), Scalar::from_int(-1));
        assert_eq!(parse_scalar("2^-2").unwrap(), Scalar::rational(1, 4));
        let z = parse_scalar("zeta(3)").unwrap();
        assert!(z.pow(3).is_one());
    }

    #[test]
    fn scalar_round_trip() {
        for src in ["-1/2 + 3*sqrt(2)", "sqrt(sqrt(2))", "zeta(12)", "1 + i"] {
            let s = parse_scalar(src).unwrap();
            let again = parse_scalar(&s.to_string()).unwrap();
            assert_eq!(s, again, "{src} printed as {s}");
        }
    }

    #[test]
    fn polynomials() {
        let p = parse_poly("z^2 - 3*z").unwrap();
        assert_eq!(p, ZPoly::from_ints(&[0, -3, 1]));
        assert_eq!(
            parse_poly("(z-1)(z-4)").unwrap(),
            ZPoly::from_ints(&[4, -5, 1])
        );
        assert_eq!(
            parse_poly_in("C^2 + 1", "C").unwrap(),
            ZPoly::from_ints(&[1, 0, 1])
        );
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn elements() {
        let pres = GwaPresentation::new(ZPoly::var()).unwrap();
        let e = parse_element(&pres, "y*x").unwrap();
        assert_eq!(e, pres.z());
        let f = parse_element(&pres, "3*z^2*x - y^2 + 1/2").unwrap();
        assert_eq!(parse_element(&pres, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn diagnostics() {
        match parse_poly("z^2 - $") {
            Err(Error::Parse { start, end, .. }) => assert_eq!((start, end), (6, 7)),
            other => panic!("{other:?}"),
        }
        match parse_poly("z + w") {
            Err(Error::Parse { start, end, .. }) => assert_eq!((start, end), (4, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scalar("(1 + 2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("zeta(7)"), Err(Error::Parse { .. })));
        let pres = GwaPresentation::new(ZPoly::var()).unwrap();
        assert!(matches!(
            parse_element(&pres, "x / y"),
            Err(Error::Parse { .. })
        ));
    }
}
