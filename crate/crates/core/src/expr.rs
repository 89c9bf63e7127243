//! Tiny infix expression grammar shared by every text format.
//!
//! The parser only builds a tree; evaluation happens in whatever ring the
//! caller picks (field elements, Laurent scalars, polynomials).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(String, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            k += 1;
        } else if ch == '−' {
            out.push(Tok::Op('-'));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{ch}' in \"{src}\"")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let v: i32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    self.pos += 1;
                    v
                }
                Some(Tok::Op('(')) => {
                    // allow ^(-1) style exponents
                    self.pos += 1;
                    let inner_neg = self.eat('-');
                    let v: i32 = match self.toks.get(self.pos) {
                        Some(Tok::Num(n)) => (n)
                            .try_into()
                            .map_err(|_| Error::Parse("exponent too large".into()))?,
                        _ => return Err(Error::Parse("expected integer exponent".into())),
                    };
                    self.pos += 1;
                    if !self.eat(')') {
                        return Err(Error::Parse("expected ')' after exponent".into()));
                    }
                    if inner_neg {
                        -v
                    } else {
                        v
                    }
                }
                _ => return Err(Error::Parse("expected integer exponent after '^'".into())),
            };
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(Error::Parse(format!("missing ')' after {name}(")));
                    }
                    Ok(Expr::Call(name, Box::new(arg)))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{src}\"")));
    }
    Ok(e)
}

/// A ring the expression tree can be evaluated in.
pub trait EvalRing: Sized + Clone {
    fn from_rational(q: BigRational) -> Self;
    fn ident(name: &str) -> Result<Self>;
    fn add(&self, o: &Self) -> Result<Self>;
    fn sub(&self, o: &Self) -> Result<Self>;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn one() -> Self {
        Self::from_rational(BigRational::from_integer(1.into()))
    }
    fn call(name: &str, _arg: &Self) -> Result<Self> {
        Err(Error::Parse(format!("unknown function {name}")))
    }
    fn pow(&self, e: i32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(self)?;
        }
        if e < 0 {
            Self::one().div(&acc)
        } else {
            Ok(acc)
        }
    }
}

pub fn eval<R: EvalRing>(e: &Expr) -> Result<R> {
    Ok(match e {
        Expr::Num(n) => R::from_rational(BigRational::from_integer(n.clone())),
        Expr::Ident(s) => R::ident(s)?,
        Expr::Neg(a) => eval::<R>(a)?.neg(),
        Expr::Add(a, b) => eval::<R>(a)?.add(&eval::<R>(b)?)?,
        Expr::Sub(a, b) => eval::<R>(a)?.sub(&eval::<R>(b)?)?,
        Expr::Mul(a, b) => eval::<R>(a)?.mul(&eval::<R>(b)?)?,
        Expr::Div(a, b) => eval::<R>(a)?.div(&eval::<R>(b)?)?,
        Expr::Pow(a, k) => eval::<R>(a)?.pow(*k)?,
        Expr::Call(f, a) => R::call(f, &eval::<R>(a)?)?,
    })
}

pub fn parse_eval<R: EvalRing>(src: &str) -> Result<R> {
    eval(&parse(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-x^2+3*y/2").unwrap();
        match e {
            Expr::Add(a, _) => assert!(matches!(*a, Expr::Neg(_))),
            _ => panic!("{e:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1 + # 2").is_err());
        assert!(parse("(1+2").is_err());
        assert!(parse("").is_err());
        assert!(parse("x^y").is_err());
    }

    #[test]
    fn negative_exponent_forms() {
        assert_eq!(parse("e^-2").unwrap(), parse("e^(-2)").unwrap());
    }
}
