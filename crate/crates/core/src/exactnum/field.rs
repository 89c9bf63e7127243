use crate::error::{Error, Result};
use crate::expr::{self, EvalRing};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

pub type Rational = BigRational;

// Basis index k = a + 2b + 4c stands for i^a * sqrt2^b * sqrt3^c.
const UNIT: [&str; 8] = ["", "i", "s2", "i*s2", "s3", "i*s3", "s6", "i*s6"];
// square of each tower generator: i, sqrt2, sqrt3
const GEN_SQ: [i64; 3] = [-1, 2, 3];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    c: [Rational; 8],
}

fn basis_product(a: usize, b: usize) -> (i64, usize) {
    let mut f = 1;
    let both = a & b;
    for (bit, sq) in GEN_SQ.iter().enumerate() {
        if both >> bit & 1 == 1 {
            f *= sq;
        }
    }
    (f, a ^ b)
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem { c: Default::default() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut e = Self::zero();
        e.c[0] = q;
        e
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n.into(), d.into()))
    }

    /// Coordinates over {1, i, √2, i√2, √3, i√3, √6, i√6}.
    pub fn from_coords(c: [Rational; 8]) -> Self {
        FieldElem { c }
    }

    pub fn coords(&self) -> &[Rational; 8] {
        &self.c
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn sqrt2() -> Self {
        Self::basis(2)
    }

    pub fn sqrt3() -> Self {
        Self::basis(4)
    }

    pub fn sqrt6() -> Self {
        Self::basis(6)
    }

    fn basis(k: usize) -> Self {
        let mut e = Self::zero();
        e.c[k] = Rational::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElem { c: std::array::from_fn(|k| &self.c[k] * q) }
    }

    /// Galois conjugate flipping the sign of each generator whose bit is set in `mask`.
    pub fn conj(&self, mask: usize) -> Self {
        FieldElem {
            c: std::array::from_fn(|k| {
                if (k & mask).count_ones() % 2 == 1 {
                    -&self.c[k]
                } else {
                    self.c[k].clone()
                }
            }),
        }
    }

    /// Complex conjugation (i -> -i).
    pub fn complex_conj(&self) -> Self {
        self.conj(1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut others = Self::one();
        for m in 1..8 {
            others = &others * &self.conj(m);
        }
        let norm = (&others * self).c[0].clone();
        Ok(others.scale(&norm.recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * self;
        }
        if e < 0 {
            acc.inv()
        } else {
            Ok(acc)
        }
    }

    /// A square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let r = sqrt_level(self, 3)?;
        debug_assert!(&(&r * &r) == self);
        Some(r)
    }

    pub fn to_complex(&self) -> Complex64 {
        let s2 = std::f64::consts::SQRT_2;
        let s3 = 3f64.sqrt();
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..8 {
            let v = self.c[k].to_f64().unwrap_or(f64::NAN);
            let mut m = v;
            if k & 2 != 0 {
                m *= s2;
            }
            if k & 4 != 0 {
                m *= s3;
            }
            if k & 1 != 0 {
                im += m;
            } else {
                re += m;
            }
        }
        Complex64::new(re, im)
    }
}

pub fn field_mul(a: &FieldElem, b: &FieldElem) -> FieldElem {
    a * b
}

pub fn field_inv(a: &FieldElem) -> Result<FieldElem> {
    a.inv()
}

pub fn field_to_float(a: &FieldElem) -> Complex64 {
    a.to_complex()
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

// Square root of `x` inside the subfield generated by the first `level`
// tower generators (level 0 = Q).
fn sqrt_level(x: &FieldElem, level: usize) -> Option<FieldElem> {
    if level == 0 {
        return rational_sqrt(&x.c[0]).map(FieldElem::from_rational);
    }
    let bit = 1usize << (level - 1);
    let d = FieldElem::from_int(GEN_SQ[level - 1]);
    let g = FieldElem::basis(bit);
    let mut u = FieldElem::zero();
    let mut v = FieldElem::zero();
    for k in 0..8 {
        if k & bit == 0 {
            u.c[k] = x.c[k].clone();
        } else {
            v.c[k ^ bit] = x.c[k].clone();
        }
    }
    if v.is_zero() {
        if let Some(r) = sqrt_level(&u, level - 1) {
            return Some(r);
        }
        let w = sqrt_level(&u.div(&d).ok()?, level - 1)?;
        return Some(&w * &g);
    }
    // (x0 + y0 g)^2 = u + v g  with  x0^2 = (u ± sqrt(u^2 - d v^2)) / 2
    let n = sqrt_level(&(&(&u * &u) - &(&(&d * &v) * &v)), level - 1)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for s in [&u + &n, &u - &n] {
        let s = s.scale(&half);
        if s.is_zero() {
            continue;
        }
        if let Some(x0) = sqrt_level(&s, level - 1) {
            let y0 = v.div(&x0.scale(&Rational::from_integer(2.into()))).ok()?;
            return Some(&x0 + &(&y0 * &g));
        }
    }
    None
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem { c: std::array::from_fn(|k| &self.c[k] + &o.c[k]) }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem { c: std::array::from_fn(|k| &self.c[k] - &o.c[k]) }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let mut out = FieldElem::zero();
        for a in 0..8 {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if o.c[b].is_zero() {
                    continue;
                }
                let (f, k) = basis_product(a, b);
                let t = &self.c[a] * &o.c[b] * Rational::from_integer(f.into());
                out.c[k] += t;
            }
        }
        out
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { c: std::array::from_fn(|k| -&self.c[k]) }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        &self + &o
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        &self - &o
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        &self * &o
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Default for FieldElem {
    fn default() -> Self {
        Self::zero()
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for k in 0..8 {
            let q = &self.c[k];
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let a = q.abs();
            let body = if k == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                UNIT[k].to_string()
            } else {
                format!("{}*{}", fmt_rational(&a), UNIT[k])
            };
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl EvalRing for FieldElem {
    fn from_rational(q: Rational) -> Self {
        FieldElem::from_rational(q)
    }

    fn ident(name: &str) -> Result<Self> {
        match name {
            "i" | "I" => Ok(FieldElem::i()),
            "s2" => Ok(FieldElem::sqrt2()),
            "s3" => Ok(FieldElem::sqrt3()),
            "s6" => Ok(FieldElem::sqrt6()),
            s if s.starts_with('s') && s[1..].chars().all(|c| c.is_ascii_digit()) && s.len() > 1 => {
                // s4, s9, ... are fine when the root is rational; others leave the field
                let n: i64 = s[1..].parse().map_err(|_| Error::Parse(s.into()))?;
                FieldElem::from_int(n)
                    .sqrt()
                    .ok_or_else(|| Error::UnsupportedExtension(format!("sqrt({n})")))
            }
            _ => Err(Error::Parse(format!("unknown symbol '{name}' in field constant"))),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(self + o)
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(self - o)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(self * o)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn div(&self, o: &Self) -> Result<Self> {
        FieldElem::div(self, o)
    }

    fn call(name: &str, arg: &Self) -> Result<Self> {
        match name {
            "sqrt" => arg
                .sqrt()
                .ok_or_else(|| Error::UnsupportedExtension(format!("sqrt({arg})"))),
            _ => Err(Error::Parse(format!("unknown function {name}"))),
        }
    }
}

impl FromStr for FieldElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        expr::parse_eval(s)
    }
}

impl serde::Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
            other => {
                return Err(serde::de::Error::custom(format!(
                    "expected field element string, got {other}"
                )))
            }
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FieldElem {
        s.parse().unwrap()
    }

    #[test]
    fn basis_products() {
        assert_eq!(&f("s2") * &f("s3"), f("s6"));
        assert_eq!(&f("1+i") * &f("1-i"), f("2"));
        assert_eq!(&f("(-1+i)/2") * &f("(-1+i)/2"), f("-1/2*i"));
        assert_eq!(&f("s6") * &f("s6"), f("6"));
        assert_eq!(&f("i*s6") * &f("s2"), f("2*i*s3"));
    }

    #[test]
    fn inverses() {
        assert_eq!(f("2").inv().unwrap(), f("1/2"));
        assert_eq!(f("i").inv().unwrap(), f("-i"));
        assert_eq!(f("-1+i").inv().unwrap(), f("(-1-i)/2"));
        assert_eq!(FieldElem::zero().inv(), Err(Error::DivisionByZero));
        let x = f("1+s2-3*i*s3+1/5*s6");
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["-1/2+1/2*i", "1/2*s2", "0", "-i*s6", "3-2*s3"] {
            assert_eq!(f(s).to_string(), s);
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(f("2").sqrt().map(|r| &r * &r), Some(f("2")));
        assert!(f("-2*i").sqrt().is_some());
        assert!(f("i").sqrt().is_some()); // (1+i)/sqrt2
        assert!(f("6").sqrt().is_some());
        assert!(f("5").sqrt().is_none());
        assert!(f("1+s2").sqrt().is_none());
        let w = f("-1+i");
        assert_eq!(f("(-1+i)^2").sqrt().map(|r| r == w || r == -&w), Some(true));
        let r = f("2/3").sqrt().unwrap();
        assert_eq!(&r * &r, f("2/3"));
    }

    #[test]
    fn rejects_other_extensions() {
        assert!(matches!("s5".parse::<FieldElem>(), Err(Error::UnsupportedExtension(_))));
        assert!(matches!("sqrt(7)".parse::<FieldElem>(), Err(Error::UnsupportedExtension(_))));
        assert_eq!("s4".parse::<FieldElem>().unwrap(), f("2"));
        assert!("x".parse::<FieldElem>().is_err());
    }

    #[test]
    fn floats() {
        let z = f("-1+i").to_complex();
        assert!((z.re + 1.0).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        assert!((f("1/s2").to_complex().re - 0.7071067811865476).abs() < 1e-15);
        assert!((f("s2").to_complex().re - std::f64::consts::SQRT_2).abs() < 1e-15);
    }
}
