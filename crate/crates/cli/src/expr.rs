//! Expressions over the generators `E`, `F`, `K`, `K^-1`, `B`, `E^(n)`,
//! `F^(n)`, rational literals and the root of unity `z`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' ['-'] integer)?
//! atom   := 'E' | 'F' | 'K' | 'B' | 'E^(' nat ')' | 'F^(' nat ')'
//!         | integer ['/' integer] | 'z' | '(' expr ')'
//! ```

use std::fmt;
use std::sync::Arc;

use hyperzeta::exactnum::{CycField, Rat};
use hyperzeta::pbw::PBWElem;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("negative power of a non-invertible element")]
    NotInvertible,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(BigInt),
    #[error("normal form has {terms} terms, more than the cap of {cap}")]
    TooManyTerms { terms: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    E,
    F,
    K,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(Gen),
    EDiv(u32),
    FDiv(u32),
    Int(BigInt),
    Rational(BigInt, BigInt),
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    E,
    F,
    K,
    B,
    Z,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::E => write!(f, "'E'"),
            Tok::F => write!(f, "'F'"),
            Tok::K => write!(f, "'K'"),
            Tok::B => write!(f, "'B'"),
            Tok::Z => write!(f, "'z'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        let tok = match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let end = bytes.get(i).map_or(input.len(), |b| b.0);
                let digits = &input[bytes[start].0..end];
                out.push((pos, Tok::Int(digits.parse().expect("ascii digits"))));
                continue;
            }
            'E' => Tok::E,
            'F' => Tok::F,
            'K' => Tok::K,
            'B' => Tok::B,
            'z' => Tok::Z,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    offset: pos,
                    message: format!("unknown token '{other}'"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".to_string(), Tok::to_string)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {tok}, found {}", self.found()))
        }
    }

    fn integer(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(format!("expected {what}, found {}", self.found())),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::E | Tok::F | Tok::K | Tok::B | Tok::Z | Tok::Int(_) | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else if !self.starts_atom() {
                return Ok(lhs);
            }
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.pos += 1;
        }
        let n = self.integer("an integer exponent")?;
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn divided(&mut self) -> Result<u32, ParseError> {
        // at '^' '('
        self.pos += 2;
        let n = self.integer("a natural number")?;
        let n = n.to_u32().map_or_else(|| self.err("divided-power index is too large"), Ok)?;
        self.expect(Tok::RParen)?;
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("expected an atom, found end of input");
        };
        let divided_next = self.peek_at(1) == Some(&Tok::Caret) && self.peek_at(2) == Some(&Tok::LParen);
        self.pos += 1;
        match tok {
            Tok::E if divided_next => Ok(Expr::EDiv(self.divided()?)),
            Tok::F if divided_next => Ok(Expr::FDiv(self.divided()?)),
            Tok::E => Ok(Expr::Gen(Gen::E)),
            Tok::F => Ok(Expr::Gen(Gen::F)),
            Tok::K => Ok(Expr::Gen(Gen::K)),
            Tok::B => Ok(Expr::Gen(Gen::B)),
            Tok::Z => Ok(Expr::Z),
            Tok::Int(n) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = self.integer("a denominator")?;
                    if d.is_zero() {
                        self.pos -= 1;
                        return self.err("zero denominator");
                    }
                    Ok(Expr::Rational(n, d))
                } else {
                    Ok(Expr::Int(n))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                self.err(format!("unexpected {other}"))
            }
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err(format!("unexpected {} after expression", p.found()));
    }
    Ok(e)
}

fn capped(x: PBWElem, cap: usize) -> Result<PBWElem, EvalError> {
    let terms = x.num_terms();
    if terms > cap {
        return Err(EvalError::TooManyTerms { terms, cap });
    }
    Ok(x)
}

/// Inverse of `c K^j`, the only invertible normal forms handled here.
fn invert(x: &PBWElem) -> Result<PBWElem, EvalError> {
    let terms = x.terms();
    match terms.as_slice() {
        [t] if t.b == 0 && t.a == 0 && t.d == 0 => {
            let inv = t.coeff.inv().map_err(|_| EvalError::NotInvertible)?;
            Ok(PBWElem::monomial(x.field(), 0, -(t.c as i64), 0, 0, inv))
        }
        _ => Err(EvalError::NotInvertible),
    }
}

/// Normal form of the expression, failing once an intermediate result
/// exceeds `max_terms` monomials.
pub fn eval(e: &Expr, field: &Arc<CycField>, max_terms: usize) -> Result<PBWElem, EvalError> {
    let x = match e {
        Expr::Gen(Gen::E) => PBWElem::e(field),
        Expr::Gen(Gen::F) => PBWElem::f(field),
        Expr::Gen(Gen::K) => PBWElem::k(field),
        Expr::Gen(Gen::B) => PBWElem::b(field),
        Expr::EDiv(n) => PBWElem::e_div(field, *n),
        Expr::FDiv(n) => PBWElem::f_div(field, *n),
        Expr::Int(n) => PBWElem::scalar(field.from_bigint(n.clone())),
        Expr::Rational(n, d) => PBWElem::scalar(field.from_rat(&Rat::new(n.clone(), d.clone()))),
        Expr::Z => PBWElem::scalar(field.zeta_pow(1)),
        Expr::Neg(a) => eval(a, field, max_terms)?.neg(),
        Expr::Add(a, b) => eval(a, field, max_terms)?.add(&eval(b, field, max_terms)?),
        Expr::Sub(a, b) => eval(a, field, max_terms)?.sub(&eval(b, field, max_terms)?),
        Expr::Mul(a, b) => eval(a, field, max_terms)?.mul(&eval(b, field, max_terms)?),
        Expr::Pow(a, n) => {
            let base = eval(a, field, max_terms)?;
            let k = n.magnitude().to_u32().ok_or_else(|| EvalError::ExponentTooLarge(n.clone()))?;
            let base = if n < &BigInt::zero() { invert(&base)? } else { base };
            let mut acc = PBWElem::one(field);
            for _ in 0..k {
                acc = capped(acc.mul(&base), max_terms)?;
            }
            acc
        }
    };
    capped(x, max_terms)
}
