use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::exactnum::{FieldElem, Rational};
use crate::expr::{self, EvalRing};
use std::fmt;

/// Generator and parameter symbols, in storage order.
pub const SYMBOLS: [&str; 12] = ["L1", "L2", "H", "X", "a1", "a2", "b1", "b2", "c11", "c12", "c21", "c22"];
pub const NSYM: usize = SYMBOLS.len();

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sym {
    L1 = 0,
    L2,
    H,
    X,
    A1,
    A2,
    B1,
    B2,
    C11,
    C12,
    C21,
    C22,
}

pub const GENERATORS: [Sym; 4] = [Sym::L1, Sym::L2, Sym::H, Sym::X];
pub const PARAMETERS: [Sym; 8] = [Sym::A1, Sym::A2, Sym::B1, Sym::B2, Sym::C11, Sym::C12, Sym::C21, Sym::C22];

/// Polynomial in L1, L2, H, X and the parameter symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbstractPoly {
    p: MPoly,
}

impl AbstractPoly {
    pub fn zero() -> Self {
        AbstractPoly { p: MPoly::zero(NSYM) }
    }

    pub fn constant(c: FieldElem) -> Self {
        AbstractPoly { p: MPoly::constant(NSYM, c) }
    }

    pub fn sym(s: Sym) -> Self {
        AbstractPoly { p: MPoly::var(NSYM, s as usize) }
    }

    pub fn from_mpoly(p: MPoly) -> Self {
        assert_eq!(p.nvars(), NSYM);
        AbstractPoly { p }
    }

    pub fn inner(&self) -> &MPoly {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        AbstractPoly { p: self.p.add(&o.p) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AbstractPoly { p: self.p.sub(&o.p) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        AbstractPoly { p: self.p.mul(&o.p) }
    }

    pub fn neg(&self) -> Self {
        AbstractPoly { p: self.p.neg() }
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        AbstractPoly { p: self.p.scale(k) }
    }

    pub fn derivative(&self, s: Sym) -> Self {
        AbstractPoly { p: self.p.derivative(s as usize) }
    }

    pub fn depends_on(&self, s: Sym) -> bool {
        self.p.depends_on(s as usize)
    }

    pub fn has_parameters(&self) -> bool {
        PARAMETERS.iter().any(|s| self.depends_on(*s))
    }

    /// Simultaneous substitution; symbols not in `subs` map to themselves.
    pub fn substitute(&self, subs: &[(Sym, AbstractPoly)]) -> Self {
        let images: Vec<MPoly> = (0..NSYM)
            .map(|k| {
                subs.iter()
                    .find(|(s, _)| *s as usize == k)
                    .map(|(_, p)| p.p.clone())
                    .unwrap_or_else(|| MPoly::var(NSYM, k))
            })
            .collect();
        AbstractPoly { p: self.p.compose(&images) }
    }

    /// Grading with X of weight 1 and L1, L2, H of weight 2 (parameters weight 0).
    pub fn grades(&self) -> Vec<u32> {
        let mut w = [0u32; NSYM];
        w[0] = 2;
        w[1] = 2;
        w[2] = 2;
        w[3] = 1;
        self.p.weighted_degrees(&w)
    }

    pub fn parse(s: &str) -> Result<Self> {
        expr::parse_eval(s)
    }
}

impl fmt::Display for AbstractPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.p.render(&SYMBOLS))
    }
}

impl fmt::Debug for AbstractPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for AbstractPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl EvalRing for AbstractPoly {
    fn from_rational(q: Rational) -> Self {
        Self::constant(FieldElem::from_rational(q))
    }

    fn ident(name: &str) -> Result<Self> {
        if name == "X2" {
            let x = Self::sym(Sym::X);
            return Ok(x.mul(&x));
        }
        if let Some(k) = SYMBOLS.iter().position(|s| *s == name) {
            return Ok(AbstractPoly { p: MPoly::var(NSYM, k) });
        }
        FieldElem::ident(name).map(Self::constant).map_err(|_| {
            Error::Parse(format!("unknown symbol '{name}' (expected one of {:?} or a field unit)", SYMBOLS))
        })
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(AbstractPoly::add(self, o))
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(AbstractPoly::sub(self, o))
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(AbstractPoly::mul(self, o))
    }

    fn neg(&self) -> Self {
        AbstractPoly::neg(self)
    }

    fn div(&self, o: &Self) -> Result<Self> {
        let c = o
            .p
            .as_constant()
            .ok_or_else(|| Error::Parse("division only by constants".into()))?;
        Ok(self.scale(&c.inv()?))
    }

    fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            let c = self.p.as_constant().ok_or_else(|| Error::Parse("negative power of a polynomial".into()))?;
            return Ok(Self::constant(c.pow(e)?));
        }
        Ok(AbstractPoly { p: self.p.pow(e as u32) })
    }

    fn call(name: &str, arg: &Self) -> Result<Self> {
        let c = arg.p.as_constant().ok_or_else(|| Error::Parse(format!("{name}() needs a constant")))?;
        Ok(Self::constant(FieldElem::call(name, &c)?))
    }
}

impl serde::Serialize for AbstractPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for AbstractPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
