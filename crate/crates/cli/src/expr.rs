//! Expressions over the generators `x`, `y`, `h`, the Casimir `z` and the
//! cyclotomic root `zeta`.
//!
//! Grammar, loosest first:
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := unary ("*"? unary)*          juxtaposition multiplies
//! unary   := "-" unary | power
//! power   := atom ("^" integer)?
//! atom    := x | y | h | z | zeta | integer | integer "/" integer | "(" sum ")"
//! ```
//!
//! Products keep operand order; nothing is assumed to commute.

use std::fmt;

use heisenberg_core::{AlgebraElement, Context, FieldDesc, FieldElement, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    X,
    Y,
    H,
    Z,
    Zeta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    Num(BigRational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(Atom),
    Int(BigInt),
    Rational(BigRational),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(Atom::X) => "`x`".into(),
            Tok::Atom(Atom::Y) => "`y`".into(),
            Tok::Atom(Atom::H) => "`h`".into(),
            Tok::Atom(Atom::Z) => "`z`".into(),
            Tok::Atom(Atom::Zeta) => "`zeta`".into(),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Rational(q) => format!("`{q}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self,
            Tok::Atom(_) | Tok::Int(_) | Tok::Rational(_) | Tok::LParen
        )
    }
}

const ATOM_START: &[&str] = &["x", "y", "h", "z", "zeta", "a number", "`(`", "`-`"];

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_end = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'x' => Tok::Atom(Atom::X),
            b'y' => Tok::Atom(Atom::Y),
            b'h' => Tok::Atom(Atom::H),
            b'z' if input[i..].starts_with("zeta") => {
                i += 4;
                out.push((start, Tok::Atom(Atom::Zeta)));
                continue;
            }
            b'z' => Tok::Atom(Atom::Z),
            b'0'..=b'9' => {
                let end = digits_end(i);
                let numer: BigInt = input[i..end].parse().unwrap();
                i = end;
                if bytes.get(i) == Some(&b'/') {
                    let den_end = digits_end(i + 1);
                    if den_end == i + 1 {
                        return Err(ParseError {
                            offset: i + 1,
                            expected: vec!["a denominator"],
                            found: found_at(input, i + 1),
                        });
                    }
                    let denom: BigInt = input[i + 1..den_end].parse().unwrap();
                    if denom.is_zero() {
                        return Err(ParseError {
                            offset: i + 1,
                            expected: vec!["a nonzero denominator"],
                            found: "`0`".into(),
                        });
                    }
                    i = den_end;
                    out.push((start, Tok::Rational(BigRational::new(numer, denom))));
                } else {
                    out.push((start, Tok::Int(numer)));
                }
                continue;
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: ATOM_START.to_vec(),
                    found: found_at(input, i),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((input.len(), Tok::End));
    Ok(out)
}

fn found_at(input: &str, offset: usize) -> String {
    match input[offset..].chars().next() {
        Some(c) => format!("`{c}`"),
        None => "end of input".into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
            } else if !self.peek().starts_atom() {
                return Ok(lhs);
            }
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(n) => {
                let e = u32::try_from(&n).map_err(|_| ParseError {
                    offset: self.offset(),
                    expected: vec!["an exponent below 2^32"],
                    found: format!("`{n}`"),
                })?;
                self.bump();
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(self.error(&["a nonnegative integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Atom(a) => {
                self.bump();
                Ok(Expr::Atom(a))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Tok::Rational(q) => {
                self.bump();
                Ok(Expr::Num(q))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "an operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["an operator", "end of input"]));
    }
    Ok(e)
}

/// Folds the tree through the algebra operations; `z` expands to `xy - h`.
pub fn evaluate(e: &Expr, ctx: &Context) -> heisenberg_core::Result<AlgebraElement> {
    Ok(match e {
        Expr::Atom(Atom::X) => AlgebraElement::x(ctx),
        Expr::Atom(Atom::Y) => AlgebraElement::y(ctx),
        Expr::Atom(Atom::H) => AlgebraElement::h(ctx),
        Expr::Atom(Atom::Z) => AlgebraElement::z(ctx),
        Expr::Atom(Atom::Zeta) => AlgebraElement::scalar(ctx, FieldElement::zeta(ctx.field())?)?,
        Expr::Num(q) => {
            AlgebraElement::scalar(ctx, FieldElement::from_rational(ctx.field(), q.clone()))?
        }
        Expr::Neg(a) => -evaluate(a, ctx)?,
        Expr::Add(a, b) => evaluate(a, ctx)?.checked_add(&evaluate(b, ctx)?)?,
        Expr::Sub(a, b) => evaluate(a, ctx)?.checked_sub(&evaluate(b, ctx)?)?,
        Expr::Mul(a, b) => evaluate(a, ctx)?.multiply(&evaluate(b, ctx)?)?,
        Expr::Pow(a, n) => evaluate(a, ctx)?.pow(*n)?,
    })
}

#[derive(Debug, PartialEq, Eq)]
pub enum PolyError {
    /// The expression mentions `x`, `y` or `z`.
    NotInH(Atom),
    Core(heisenberg_core::Error),
}

impl From<heisenberg_core::Error> for PolyError {
    fn from(e: heisenberg_core::Error) -> Self {
        PolyError::Core(e)
    }
}

/// Evaluates an expression in `h` (and `zeta`) to a polynomial, refusing
/// degrees above `cap`.
pub fn evaluate_poly(e: &Expr, field: FieldDesc, cap: usize) -> Result<Poly, PolyError> {
    let check = |p: Poly| match p.degree() {
        Some(d) if d > cap => Err(PolyError::Core(heisenberg_core::Error::DegreeCap {
            degree: d,
            cap,
        })),
        _ => Ok(p),
    };
    let p = match e {
        Expr::Atom(Atom::H) => Poly::var(field),
        Expr::Atom(Atom::Zeta) => Poly::constant(FieldElement::zeta(field)?),
        Expr::Atom(a) => return Err(PolyError::NotInH(*a)),
        Expr::Num(q) => Poly::constant(FieldElement::from_rational(field, q.clone())),
        Expr::Neg(a) => -evaluate_poly(a, field, cap)?,
        Expr::Add(a, b) => {
            evaluate_poly(a, field, cap)?.checked_add(&evaluate_poly(b, field, cap)?)?
        }
        Expr::Sub(a, b) => {
            evaluate_poly(a, field, cap)?.checked_sub(&evaluate_poly(b, field, cap)?)?
        }
        Expr::Mul(a, b) => {
            evaluate_poly(a, field, cap)?.mul_capped(&evaluate_poly(b, field, cap)?, cap)?
        }
        Expr::Pow(a, n) => {
            let base = evaluate_poly(a, field, cap)?;
            if let Some(d) = base.degree() {
                let total = (d as u64).saturating_mul(u64::from(*n));
                if total > cap as u64 {
                    return Err(PolyError::Core(heisenberg_core::Error::DegreeCap {
                        degree: usize::try_from(total).unwrap_or(usize::MAX),
                        cap,
                    }));
                }
            }
            base.pow(*n)
        }
    };
    check(p)
}
