//! Canonical forms of Casimir matrices under G_degn, the system catalog and
//! the realizability ledger.

mod catalog;

pub use catalog::{
    catalog, catalog_form, catalog_labels, realizability, Catalog, Realizability, RealizabilityStatus, Realization, SystemId,
    SystemRecord, TABLE6_ORDER,
};

use crate::error::{Error, Result};
use crate::exactnum::FieldElem;
use crate::forms::{compose, group_act, GroupElem, ScaledGroupElem, SymForm};
use crate::linalg;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    B21,
    B22,
    B11,
    B15,
    B16,
    B17,
    B05,
    B06,
    B07,
    B08,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::B21,
        Family::B22,
        Family::B11,
        Family::B15,
        Family::B16,
        Family::B17,
        Family::B05,
        Family::B06,
        Family::B07,
        Family::B08,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::B21 => "B21",
            Family::B22 => "B22",
            Family::B11 => "B11",
            Family::B15 => "B15",
            Family::B16 => "B16",
            Family::B17 => "B17",
            Family::B05 => "B05",
            Family::B06 => "B06",
            Family::B07 => "B07",
            Family::B08 => "B08",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Family::B21 | Family::B22 => 2,
            Family::B11 => 3,
            Family::B06 | Family::B08 => 0,
            _ => 1,
        }
    }

    /// Row number in the list of canonical forms (1..=10).
    pub fn number(self) -> usize {
        Family::ALL.iter().position(|f| *f == self).unwrap() + 1
    }

    pub fn rank_b(self) -> usize {
        match self {
            Family::B21 | Family::B22 => 2,
            Family::B11 | Family::B15 | Family::B16 | Family::B17 => 1,
            _ => 0,
        }
    }
}

/// Family plus parameters, e.g. `B21(1,-2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalLabel {
    family: Family,
    params: Vec<FieldElem>,
}

fn is_bit(x: &FieldElem) -> bool {
    x.is_zero() || x.is_one()
}

fn bit(b: bool) -> FieldElem {
    if b {
        FieldElem::one()
    } else {
        FieldElem::zero()
    }
}

impl CanonicalLabel {
    pub fn new(family: Family, params: Vec<FieldElem>) -> Result<Self> {
        let bad = |why: &str| Error::UnknownLabel(format!("{}{}: {why}", family.name(), fmt_params(&params)));
        if params.len() != family.arity() {
            return Err(bad(&format!("expected {} parameter(s)", family.arity())));
        }
        match family {
            Family::B21 => {
                if !is_bit(&params[0]) {
                    return Err(bad("b34 must be 0 or 1"));
                }
            }
            Family::B11 => {
                let (b33, b34, b44) = (&params[0], &params[1], &params[2]);
                if !is_bit(b33) || !is_bit(b34) {
                    return Err(bad("b33 and b34 must be 0 or 1"));
                }
                // with b33 = b34 = 1 the ratio b33*b44/b34^2 survives as a continuous invariant
                if !(b33.is_one() && b34.is_one()) && !is_bit(b44) {
                    return Err(bad("b44 must be 0 or 1 unless b33 = b34 = 1"));
                }
                if b34.is_zero() && b44.is_zero() {
                    return Err(bad("b34 + b44 must be nonzero"));
                }
            }
            _ => {
                if !params.iter().all(is_bit) {
                    return Err(bad("parameters must be 0 or 1"));
                }
            }
        }
        Ok(CanonicalLabel { family, params })
    }

    fn bits(family: Family, bits: &[bool]) -> Self {
        Self::new(family, bits.iter().map(|b| bit(*b)).collect()).expect("valid discrete label")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[FieldElem] {
        &self.params
    }

    /// Every label with parameters drawn from {0, 1}.
    pub fn all_discrete() -> Vec<CanonicalLabel> {
        let mut out = Vec::new();
        for f in Family::ALL {
            let n = f.arity();
            for mask in 0..(1u32 << n) {
                let ps: Vec<FieldElem> = (0..n).map(|k| bit(mask >> (n - 1 - k) & 1 == 1)).collect();
                if let Ok(l) = CanonicalLabel::new(f, ps) {
                    out.push(l);
                }
            }
        }
        out
    }

    pub fn canonical_matrix(&self) -> SymForm {
        let o = FieldElem::one;
        let p = |k: usize| self.params[k].clone();
        let mut u: Vec<((usize, usize), FieldElem)> = Vec::new();
        match self.family {
            Family::B21 | Family::B22 => {
                u.push(((0, 0), o()));
                u.push(((1, 1), o()));
                if self.family == Family::B21 {
                    u.push(((2, 2), o()));
                }
                u.push(((2, 3), p(0)));
                u.push(((3, 3), p(1)));
            }
            Family::B11 => {
                u.push(((0, 0), o()));
                u.push(((2, 2), p(0)));
                u.push(((2, 3), p(1)));
                u.push(((3, 3), p(2)));
            }
            Family::B15 | Family::B05 => {
                if self.family == Family::B15 {
                    u.push(((0, 0), o()));
                }
                u.push(((1, 2), o()));
                u.push(((1, 3), o()));
                u.push(((2, 3), p(0)));
            }
            Family::B16 => {
                u.push(((0, 0), o()));
                u.push(((1, 2), o()));
                u.push(((3, 3), p(0)));
            }
            Family::B06 => {
                u.push(((1, 2), o()));
                u.push(((3, 3), o()));
            }
            Family::B17 | Family::B07 => {
                if self.family == Family::B17 {
                    u.push(((0, 0), o()));
                }
                u.push(((1, 3), o()));
                u.push(((2, 2), p(0)));
            }
            Family::B08 => {
                u.push(((0, 2), o()));
                u.push(((1, 3), o()));
            }
        }
        SymForm::from_upper(&u)
    }
}

/// A Casimir must involve at least two of L1, L2, X².
pub fn dependence_ok(b: &SymForm) -> bool {
    [0usize, 1, 3].iter().filter(|&&i| (0..4).any(|j| !b.get(i, j).is_zero())).count() >= 2
}

fn fmt_params(ps: &[FieldElem]) -> String {
    if ps.is_empty() {
        String::new()
    } else {
        format!("({})", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), fmt_params(&self.params))
    }
}

impl fmt::Debug for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CanonicalLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = match s.find('(') {
            Some(k) => (&s[..k], Some(&s[k..])),
            None => (s, None),
        };
        let family = Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(head.trim()))
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))?;
        let params = match rest {
            None => Vec::new(),
            Some(r) => {
                let inner = r
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::UnknownLabel(s.to_string()))?;
                if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(|t| t.trim().parse()).collect::<Result<Vec<FieldElem>>>()?
                }
            }
        };
        CanonicalLabel::new(family, params)
    }
}

impl Serialize for CanonicalLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CanonicalLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}


#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub label: CanonicalLabel,
    /// Group element taking the input to the canonical matrix, when the
    /// normalizing square roots stay inside the coefficient field.
    pub witness: Option<ScaledGroupElem>,
    #[serde(serialize_with = "ser_err")]
    pub witness_error: Option<Error>,
}

fn ser_err<S: serde::Serializer>(e: &Option<Error>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        None => s.serialize_none(),
        Some(e) => s.serialize_str(e.kind()),
    }
}

struct Reducer {
    cur: SymForm,
    acc: ScaledGroupElem,
}

fn z0() -> FieldElem {
    FieldElem::zero()
}

fn o1() -> FieldElem {
    FieldElem::one()
}

fn q(a: &FieldElem, b: &FieldElem) -> FieldElem {
    a.div(b).expect("nonzero divisor")
}

impl Reducer {
    fn apply(&mut self, g: ScaledGroupElem) {
        self.cur = group_act(&g, &self.cur);
        self.acc = compose(&self.acc, &g);
    }

    fn linear(&mut self, r: [[FieldElem; 2]; 2], s: [[FieldElem; 2]; 2]) {
        let a = GroupElem::from_parts(r, s, o1(), o1()).expect("invertible reduction step");
        self.apply(ScaledGroupElem::new(a, o1()).unwrap());
    }

    fn shear(&mut self, s: [[FieldElem; 2]; 2]) {
        self.linear([[o1(), z0()], [z0(), o1()]], s);
    }

    fn e(&self, i: usize, j: usize) -> FieldElem {
        self.cur.get(i, j).clone()
    }
}

/// Final diagonal scaling; `None` entries are square roots still to be taken.
struct Scale {
    z: FieldElem,
    r1: Result<FieldElem>,
    r2: Result<FieldElem>,
    a3: Result<FieldElem>,
    a5: FieldElem,
}

fn root(x: FieldElem) -> Result<FieldElem> {
    x.sqrt().ok_or(Error::SquareRootOutsideField)
}

fn plain(x: FieldElem) -> Result<FieldElem> {
    Ok(x)
}

/// Reduce `b` to its canonical form.
pub fn classify(b: &SymForm) -> Result<Classification> {
    let mut red = Reducer { cur: b.clone(), acc: ScaledGroupElem::identity() };
    let small: Vec<Vec<FieldElem>> = b.b().iter().map(|r| r.to_vec()).collect();
    let (label, scale) = match linalg::rank(&small) {
        2 => rank2(&mut red),
        1 => rank1(&mut red)?,
        _ => rank0(&mut red)?,
    };
    let target = label.canonical_matrix();
    if !dependence_ok(&target) {
        return Err(Error::NotAQuadraticAlgebra(format!(
            "canonical form {label} involves fewer than two of L1, L2, X^2"
        )));
    }
    let step = scale.map(|sc| -> Result<ScaledGroupElem> {
        let (r1, r2, a3) = (sc.r1?, sc.r2?, sc.a3?);
        let a = GroupElem::from_parts([[r1, z0()], [z0(), r2]], [[z0(), z0()], [z0(), z0()]], a3, sc.a5)?;
        ScaledGroupElem::new(a, sc.z)
    });
    let (witness, witness_error) = match step {
        None => (Some(red.acc.clone()), None),
        Some(Ok(g)) => {
            red.apply(g);
            (Some(red.acc.clone()), None)
        }
        Some(Err(e)) => (None, Some(e)),
    };
    if witness.is_some() && red.cur != target {
        return Err(Error::Data(format!("internal reduction mismatch for {label}: got {:?}", red.cur)));
    }
    Ok(Classification { label, witness, witness_error })
}

pub fn classify_label(b: &SymForm) -> Result<CanonicalLabel> {
    classify(b).map(|c| c.label)
}

fn rank2(red: &mut Reducer) -> (CanonicalLabel, Option<Scale>) {
    let (b11, b12, b22) = (red.e(0, 0), red.e(0, 1), red.e(1, 1));
    if !b12.is_zero() {
        if b11.is_zero() {
            let r = if !b22.is_zero() { [[z0(), o1()], [o1(), z0()]] } else { [[o1(), o1()], [o1(), -o1()]] };
            red.linear(r, [[z0(), z0()], [z0(), z0()]]);
        }
        let (b11, b12) = (red.e(0, 0), red.e(0, 1));
        if !b12.is_zero() {
            red.linear([[o1(), -q(&b12, &b11)], [z0(), o1()]], [[z0(), z0()], [z0(), z0()]]);
        }
    }
    let (p, qq) = (red.e(0, 0), red.e(1, 1));
    // c ← 0 by s = −b⁻¹c, leaving the Schur complement in the d block
    let s = [
        [-q(&red.e(0, 2), &p), -q(&red.e(0, 3), &p)],
        [-q(&red.e(1, 2), &qq), -q(&red.e(1, 3), &qq)],
    ];
    red.shear(s);
    let (s33, s34, s44) = (red.e(2, 2), red.e(2, 3), red.e(3, 3));
    let rs = |z: &FieldElem| (root(q(&o1(), &(z * &p))), root(q(&o1(), &(z * &qq))));
    let (label, z, a3) = if !s33.is_zero() && !s34.is_zero() {
        let kappa = q(&(&s33 * &s44), &(&s34 * &s34));
        let l = CanonicalLabel::new(Family::B21, vec![o1(), kappa]).unwrap();
        (l, q(&s33, &(&s34 * &s34)), plain(q(&s34, &s33)))
    } else if !s33.is_zero() {
        if s44.is_zero() {
            (CanonicalLabel::bits(Family::B21, &[false, false]), q(&o1(), &s33), plain(o1()))
        } else {
            (CanonicalLabel::bits(Family::B21, &[false, true]), q(&o1(), &s44), root(q(&s44, &s33)))
        }
    } else if !s34.is_zero() {
        let z = if s44.is_zero() { q(&o1(), &p) } else { q(&o1(), &s44) };
        let a3 = q(&o1(), &(&z * &s34));
        (CanonicalLabel::bits(Family::B22, &[true, !s44.is_zero()]), z, plain(a3))
    } else {
        let z = if s44.is_zero() { q(&o1(), &p) } else { q(&o1(), &s44) };
        (CanonicalLabel::bits(Family::B22, &[false, !s44.is_zero()]), z, plain(o1()))
    };
    let (r1, r2) = rs(&z);
    (label, Some(Scale { z, r1, r2, a3, a5: o1() }))
}

fn rank1(red: &mut Reducer) -> Result<(CanonicalLabel, Option<Scale>)> {
    let (b11, b12, b22) = (red.e(0, 0), red.e(0, 1), red.e(1, 1));
    // r = [e | k] with k spanning ker b
    let r = if !b11.is_zero() { [[o1(), -b12.clone()], [z0(), b11]] } else { [[z0(), b22], [o1(), -b12]] };
    red.linear(r, [[z0(), z0()], [z0(), z0()]]);
    let beta = red.e(0, 0);
    red.shear([[-q(&red.e(0, 2), &beta), -q(&red.e(0, 3), &beta)], [z0(), z0()]]);
    let (p, qq) = (red.e(1, 2), red.e(1, 3));
    let two = FieldElem::from_int(2);
    let r1_for = |z: &FieldElem| root(q(&o1(), &(z * &beta)));
    let out = match (p.is_zero(), qq.is_zero()) {
        (false, false) => {
            red.shear([[z0(), z0()], [-q(&red.e(2, 2), &(&two * &p)), -q(&red.e(3, 3), &(&two * &qq))]]);
            let d34 = red.e(2, 3);
            let a3 = q(&qq, &p);
            if d34.is_zero() {
                let z = q(&o1(), &beta);
                let r2 = q(&o1(), &(&z * &qq));
                (CanonicalLabel::bits(Family::B15, &[false]), Scale { r1: r1_for(&z), z, r2: plain(r2), a3: plain(a3), a5: o1() })
            } else {
                let z = q(&p, &(&qq * &d34));
                let r2 = q(&d34, &p);
                (CanonicalLabel::bits(Family::B15, &[true]), Scale { r1: r1_for(&z), z, r2: plain(r2), a3: plain(a3), a5: o1() })
            }
        }
        (false, true) => {
            red.shear([[z0(), z0()], [-q(&red.e(2, 2), &(&two * &p)), -q(&red.e(2, 3), &p)]]);
            let d44 = red.e(3, 3);
            let z = if d44.is_zero() { q(&o1(), &beta) } else { q(&o1(), &d44) };
            let r2 = q(&o1(), &(&z * &p));
            (CanonicalLabel::bits(Family::B16, &[!d44.is_zero()]), Scale { r1: r1_for(&z), z, r2: plain(r2), a3: plain(o1()), a5: o1() })
        }
        (true, false) => {
            red.shear([[z0(), z0()], [-q(&red.e(2, 3), &qq), -q(&red.e(3, 3), &(&two * &qq))]]);
            let d33 = red.e(2, 2);
            let z = if d33.is_zero() { q(&o1(), &beta) } else { q(&o1(), &d33) };
            let r2 = q(&o1(), &(&z * &qq));
            (CanonicalLabel::bits(Family::B17, &[!d33.is_zero()]), Scale { r1: r1_for(&z), z, r2: plain(r2), a3: plain(o1()), a5: o1() })
        }
        (true, true) => {
            let (d33, d34, d44) = (red.e(2, 2), red.e(2, 3), red.e(3, 3));
            if d34.is_zero() && d44.is_zero() {
                return Err(Error::NotAQuadraticAlgebra("Casimir involves L1 and H only".into()));
            }
            let (label, z, a3) = if !d34.is_zero() && !d33.is_zero() {
                let kappa = q(&(&d33 * &d44), &(&d34 * &d34));
                let l = CanonicalLabel::new(Family::B11, vec![o1(), o1(), kappa]).unwrap();
                (l, q(&d33, &(&d34 * &d34)), plain(q(&d34, &d33)))
            } else if !d34.is_zero() {
                if d44.is_zero() {
                    (CanonicalLabel::bits(Family::B11, &[false, true, false]), q(&o1(), &beta), plain(q(&beta, &d34)))
                } else {
                    (CanonicalLabel::bits(Family::B11, &[false, true, true]), q(&o1(), &d44), plain(q(&d44, &d34)))
                }
            } else {
                let a3 = if d33.is_zero() { plain(o1()) } else { root(q(&d44, &d33)) };
                (CanonicalLabel::bits(Family::B11, &[!d33.is_zero(), false, true]), q(&o1(), &d44), a3)
            };
            (label, Scale { r1: r1_for(&z), z, r2: plain(o1()), a3, a5: o1() })
        }
    };
    Ok((out.0, Some(out.1)))
}

fn rank0(red: &mut Reducer) -> Result<(CanonicalLabel, Option<Scale>)> {
    let c = red.cur.c();
    let cv: Vec<Vec<FieldElem>> = c.iter().map(|r| r.to_vec()).collect();
    match linalg::rank(&cv) {
        0 => Err(Error::NotAQuadraticAlgebra("Casimir involves H and X^2 only".into())),
        2 => {
            let inv = linalg::inverse(&cv).expect("rank 2");
            // r = c^{-t} turns c into the identity, then s = -d/2 clears d
            red.linear([[inv[0][0].clone(), inv[1][0].clone()], [inv[0][1].clone(), inv[1][1].clone()]], [[z0(), z0()], [z0(), z0()]]);
            let h = FieldElem::frac(-1, 2);
            red.shear([[&red.e(2, 2) * &h, &red.e(2, 3) * &h], [&red.e(3, 2) * &h, &red.e(3, 3) * &h]]);
            Ok((CanonicalLabel::new(Family::B08, vec![]).unwrap(), None))
        }
        _ => {
            // c = u vᵗ with u_k = 1
            let k = if c[0].iter().any(|x| !x.is_zero()) { 0 } else { 1 };
            let m = if !c[k][0].is_zero() { 0 } else { 1 };
            let u: Vec<FieldElem> = (0..2).map(|j| q(&c[j][m], &c[k][m])).collect();
            let ek = [bit(k == 0), bit(k == 1)];
            red.linear([[-u[1].clone(), ek[0].clone()], [u[0].clone(), ek[1].clone()]], [[z0(), z0()], [z0(), z0()]]);
            let (p, qq) = (red.e(1, 2), red.e(1, 3));
            let two = FieldElem::from_int(2);
            let out = match (p.is_zero(), qq.is_zero()) {
                (false, false) => {
                    red.shear([[z0(), z0()], [-q(&red.e(2, 2), &(&two * &p)), -q(&red.e(3, 3), &(&two * &qq))]]);
                    let d34 = red.e(2, 3);
                    let (z, r2) = if d34.is_zero() { (o1(), q(&o1(), &qq)) } else { (q(&p, &(&qq * &d34)), q(&d34, &p)) };
                    (CanonicalLabel::bits(Family::B05, &[!d34.is_zero()]), Scale { z, r1: plain(o1()), r2: plain(r2), a3: plain(q(&qq, &p)), a5: o1() })
                }
                (false, true) => {
                    red.shear([[z0(), z0()], [-q(&red.e(2, 2), &(&two * &p)), -q(&red.e(2, 3), &p)]]);
                    let d44 = red.e(3, 3);
                    if d44.is_zero() {
                        return Err(Error::NotAQuadraticAlgebra("Casimir 2*L2*H involves L2 only".into()));
                    }
                    let z = q(&o1(), &d44);
                    (CanonicalLabel::new(Family::B06, vec![]).unwrap(), Scale { r2: plain(q(&d44, &p)), z, r1: plain(o1()), a3: plain(o1()), a5: o1() })
                }
                _ => {
                    red.shear([[z0(), z0()], [-q(&red.e(2, 3), &qq), -q(&red.e(3, 3), &(&two * &qq))]]);
                    let d33 = red.e(2, 2);
                    let (z, r2) = if d33.is_zero() { (o1(), q(&o1(), &qq)) } else { (q(&o1(), &d33), q(&d33, &qq)) };
                    (CanonicalLabel::bits(Family::B07, &[!d33.is_zero()]), Scale { z, r1: plain(o1()), r2: plain(r2), a3: plain(o1()), a5: o1() })
                }
            };
            Ok((out.0, Some(out.1)))
        }
    }
}
