use super::field::{FieldElem, Rational};
use crate::error::{Error, Result};
use crate::expr::{self, EvalRing};
use std::collections::BTreeMap;
use std::fmt;

pub const LAURENT_BOUND: i32 = 16;

fn check(e: i64) -> Result<i32> {
    if e.abs() > LAURENT_BOUND as i64 {
        Err(Error::ExponentOverflow(e))
    } else {
        Ok(e as i32)
    }
}

/// Finite Laurent polynomial in ε with coefficients in the field.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i32, FieldElem>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0).expect("exponent 0 in range")
    }

    pub fn monomial(c: FieldElem, e: i32) -> Result<Self> {
        let e = check(e as i64)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Ok(LaurentScalar { terms })
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, FieldElem)>>(it: I) -> Result<Self> {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(check(e as i64)?, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: i32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(FieldElem::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &FieldElem)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> FieldElem {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Lowest exponent present (None for the zero polynomial).
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(FieldElem::zero()),
            1 if self.terms.contains_key(&0) => Some(self.terms[&0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentScalar { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(check(*e1 as i64 + *e2 as i64)?, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Division by a single-term Laurent polynomial.
    pub fn div_monomial(&self, o: &Self) -> Result<Self> {
        if !o.is_monomial() {
            return Err(Error::Parse("division in eps only by a monomial".into()));
        }
        let (e, c) = o.terms.iter().next().unwrap();
        let ci = c.inv()?;
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            out.add_term(check(*e1 as i64 - *e as i64)?, c1 * &ci);
        }
        Ok(out)
    }

    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        let mut acc = FieldElem::zero();
        for (e, c) in &self.terms {
            acc = &acc + &(c * &x.pow(*e)?);
        }
        Ok(acc)
    }

    /// Substitute ε -> ε^k.
    pub fn substitute_power(&self, k: i32) -> Result<Self> {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| check(*e as i64 * k as i64).map(|e| (e, c.clone())))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn to_pairs(&self) -> Vec<(i32, String)> {
        self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect()
    }
}

pub fn laurent_limit(p: &LaurentScalar) -> Result<FieldElem> {
    if let Some((e, _)) = p.terms.iter().find(|(e, _)| **e < 0) {
        return Err(Error::DivergentLimit(*e));
    }
    Ok(p.coeff(0))
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*eps"),
                _ => format!("({c})*eps^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl EvalRing for LaurentScalar {
    fn from_rational(q: Rational) -> Self {
        Self::constant(FieldElem::from_rational(q))
    }

    fn ident(name: &str) -> Result<Self> {
        match name {
            "eps" | "e" | "ε" => Self::monomial(FieldElem::one(), 1),
            _ => Ok(Self::constant(FieldElem::ident(name)?)),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(LaurentScalar::add(self, o))
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(LaurentScalar::sub(self, o))
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        LaurentScalar::mul(self, o)
    }

    fn neg(&self) -> Self {
        LaurentScalar::neg(self)
    }

    fn div(&self, o: &Self) -> Result<Self> {
        self.div_monomial(o)
    }

    fn call(name: &str, arg: &Self) -> Result<Self> {
        let c = arg
            .as_constant()
            .ok_or_else(|| Error::Parse(format!("{name}() needs a constant argument")))?;
        Ok(Self::constant(FieldElem::call(name, &c)?))
    }
}

impl std::str::FromStr for LaurentScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        expr::parse_eval(s)
    }
}

// JSON: list of [exponent, "field element"] pairs; a plain string in eps is
// also accepted on input.
impl serde::Serialize for LaurentScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for LaurentScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => {
                Ok(Self::constant(FieldElem::from_int(n.as_i64().unwrap())))
            }
            serde_json::Value::Array(items) => {
                let mut pairs = Vec::new();
                for it in items {
                    let (e, c): (i64, FieldElem) =
                        serde_json::from_value(it).map_err(D::Error::custom)?;
                    let e = check(e).map_err(D::Error::custom)?;
                    pairs.push((e, c));
                }
                Self::from_terms(pairs).map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!("bad Laurent scalar {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> LaurentScalar {
        s.parse().unwrap()
    }

    #[test]
    fn limits() {
        assert_eq!(laurent_limit(&l("3+2*eps")).unwrap(), FieldElem::from_int(3));
        assert_eq!(laurent_limit(&l("eps^2")).unwrap(), FieldElem::zero());
        assert_eq!(laurent_limit(&l("1/eps+1")), Err(Error::DivergentLimit(-1)));
        assert_eq!(laurent_limit(&l("(eps+1/eps)*eps - 1/eps*eps^2")).unwrap(), FieldElem::one());
    }

    #[test]
    fn overflow_is_loud() {
        let a = l("eps^10");
        assert_eq!(a.mul(&a), Err(Error::ExponentOverflow(20)));
        assert!("eps^17".parse::<LaurentScalar>().is_err());
    }

    #[test]
    fn json_pairs() {
        let a = l("i/(s2*eps) + 3*eps^2");
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"[[-1,"1/2*i*s2"],[2,"3"]]"#);
        assert_eq!(serde_json::from_str::<LaurentScalar>(&js).unwrap(), a);
        assert_eq!(serde_json::from_str::<LaurentScalar>("\"eps^-1\"").unwrap(), l("1/eps"));
    }

    #[test]
    fn eval_is_homomorphic() {
        let p = l("2/eps + i - s2*eps^3");
        let q = l("eps - 1/2/eps^2");
        let x = FieldElem::frac(1, 7);
        let lhs = p.mul(&q).unwrap().eval(&x).unwrap();
        let rhs = &p.eval(&x).unwrap() * &q.eval(&x).unwrap();
        assert_eq!(lhs, rhs);
    }
}
