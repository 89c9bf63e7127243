//! Casimir forms over (L1, L2, H, X²), the group G_degn and its action.

use crate::error::{Error, Result};
use crate::exactnum::FieldElem;
use crate::linalg;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Mat4 = [[FieldElem; 4]; 4];
pub type Mat5 = [[FieldElem; 5]; 5];
pub type Block = [[FieldElem; 2]; 2];

pub const BASIS: [&str; 4] = ["L1", "L2", "H", "X2"];

fn zero4() -> Mat4 {
    Default::default()
}

pub fn mat4_to_vec(m: &Mat4) -> linalg::Matrix {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn mat4_from_vec(v: &[Vec<FieldElem>]) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i][j].clone()))
}

/// Symmetric 4×4 matrix B(G).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymForm {
    e: Mat4,
}

impl SymForm {
    pub fn new(e: Mat4) -> Result<Self> {
        for i in 0..4 {
            for j in 0..i {
                if e[i][j] != e[j][i] {
                    return Err(Error::InvalidForm(format!(
                        "entries ({},{}) = {} and ({},{}) = {} differ",
                        i + 1,
                        j + 1,
                        e[i][j],
                        j + 1,
                        i + 1,
                        e[j][i]
                    )));
                }
            }
        }
        Ok(SymForm { e })
    }

    pub fn zero() -> Self {
        SymForm { e: zero4() }
    }

    /// Build from the upper triangle; `entries[(i, j)]` with i ≤ j.
    pub fn from_upper(entries: &[((usize, usize), FieldElem)]) -> Self {
        let mut e = zero4();
        for ((i, j), v) in entries {
            e[*i][*j] = v.clone();
            e[*j][*i] = v.clone();
        }
        SymForm { e }
    }

    pub fn diag(d: [FieldElem; 4]) -> Self {
        let mut e = zero4();
        for (k, v) in d.into_iter().enumerate() {
            e[k][k] = v;
        }
        SymForm { e }
    }

    pub fn parse_grid(rows: &[[&str; 4]; 4]) -> Result<Self> {
        let mut e = zero4();
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = rows[i][j].parse()?;
            }
        }
        Self::new(e)
    }

    pub fn entries(&self) -> &Mat4 {
        &self.e
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.e[i][j]
    }

    fn block(&self, r: usize, c: usize) -> Block {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[r + i][c + j].clone()))
    }

    /// Upper-left block (L1, L2).
    pub fn b(&self) -> Block {
        self.block(0, 0)
    }

    /// Upper-right block (L1, L2) × (H, X²).
    pub fn c(&self) -> Block {
        self.block(0, 2)
    }

    /// Lower-right block (H, X²).
    pub fn d(&self) -> Block {
        self.block(2, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_zero())
    }

    pub fn scale(&self, z: &FieldElem) -> Self {
        SymForm { e: std::array::from_fn(|i| std::array::from_fn(|j| &self.e[i][j] * z)) }
    }

    /// Congruence Pᵗ B P for an arbitrary 4×4 P.
    pub fn congruence(&self, p: &Mat4) -> Self {
        let pv = mat4_to_vec(p);
        let out = linalg::mat_mul(&linalg::transpose(&pv), &linalg::mat_mul(&mat4_to_vec(&self.e), &pv));
        SymForm { e: mat4_from_vec(&out) }
    }
}

impl fmt::Display for SymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.e.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
            if i < 3 {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SymFormJson {
    #[serde(default = "default_basis")]
    basis: Vec<String>,
    entries: Vec<Vec<FieldElem>>,
}

fn default_basis() -> Vec<String> {
    BASIS.iter().map(|s| s.to_string()).collect()
}

impl Serialize for SymForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymFormJson { basis: default_basis(), entries: mat4_to_vec(&self.e) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SymFormJson::deserialize(d)?;
        if j.basis != default_basis() {
            return Err(D::Error::custom(format!("basis must be {:?}", BASIS)));
        }
        if j.entries.len() != 4 || j.entries.iter().any(|r| r.len() != 4) {
            return Err(D::Error::custom("entries must be a 4x4 grid"));
        }
        SymForm::new(mat4_from_vec(&j.entries)).map_err(D::Error::custom)
    }
}

/// (rank B, rank b).
pub fn rank_invariants(b: &SymForm) -> (usize, usize) {
    let full = linalg::rank(&mat4_to_vec(&b.e));
    let small: Vec<Vec<FieldElem>> = b.b().iter().map(|r| r.to_vec()).collect();
    (full, linalg::rank(&small))
}

/// Change-of-basis matrix with the zero pattern of G_degn; L = A·L̃.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    a: Mat5,
}

fn allowed(i: usize, j: usize) -> bool {
    match i {
        0 | 1 => j < 4,
        _ => i == j,
    }
}

impl GroupElem {
    pub fn new(a: Mat5) -> Result<Self> {
        for i in 0..5 {
            for j in 0..5 {
                if !allowed(i, j) && !a[i][j].is_zero() {
                    return Err(Error::InvalidGroupElem(format!(
                        "entry ({},{}) must be zero",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if a[3][3] != &a[4][4] * &a[4][4] {
            return Err(Error::InvalidGroupElem("A44 must equal A55^2".into()));
        }
        let g = GroupElem { a };
        if g.det_r().is_zero() || g.a[2][2].is_zero() || g.a[4][4].is_zero() {
            return Err(Error::InvalidGroupElem("matrix is singular".into()));
        }
        Ok(g)
    }

    /// Assemble from r (2×2), s (2×2 over H, X²), A33 and A55.
    pub fn from_parts(r: Block, s: Block, a33: FieldElem, a55: FieldElem) -> Result<Self> {
        let mut a: Mat5 = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                a[i][j] = r[i][j].clone();
                a[i][j + 2] = s[i][j].clone();
            }
        }
        a[3][3] = &a55 * &a55;
        a[2][2] = a33;
        a[4][4] = a55;
        Self::new(a)
    }

    pub fn identity() -> Self {
        GroupElem { a: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { FieldElem::one() } else { FieldElem::zero() })) }
    }

    pub fn diagonal(d: [FieldElem; 3], a55: FieldElem) -> Result<Self> {
        let [d1, d2, d3] = d;
        let z = FieldElem::zero;
        Self::from_parts([[d1, z()], [z(), d2]], [[z(), z()], [z(), z()]], d3, a55)
    }

    pub fn matrix(&self) -> &Mat5 {
        &self.a
    }

    pub fn hat(&self) -> Mat4 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.a[i][j].clone()))
    }

    pub fn a55(&self) -> &FieldElem {
        &self.a[4][4]
    }

    pub fn det_r(&self) -> FieldElem {
        &(&self.a[0][0] * &self.a[1][1]) - &(&self.a[0][1] * &self.a[1][0])
    }

    pub fn mul(&self, o: &GroupElem) -> GroupElem {
        let av: Vec<Vec<FieldElem>> = self.a.iter().map(|r| r.to_vec()).collect();
        let bv: Vec<Vec<FieldElem>> = o.a.iter().map(|r| r.to_vec()).collect();
        let p = linalg::mat_mul(&av, &bv);
        GroupElem { a: std::array::from_fn(|i| std::array::from_fn(|j| p[i][j].clone())) }
    }

    pub fn inverse(&self) -> GroupElem {
        let av: Vec<Vec<FieldElem>> = self.a.iter().map(|r| r.to_vec()).collect();
        let p = linalg::inverse(&av).expect("group elements are invertible");
        GroupElem { a: std::array::from_fn(|i| std::array::from_fn(|j| p[i][j].clone())) }
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .a
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "GroupElem({})", rows.join(", "))
    }
}

/// Pair (A, z) acting by B ↦ z Âᵗ B Â.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScaledGroupElem {
    pub a: GroupElem,
    pub z: FieldElem,
}

impl ScaledGroupElem {
    pub fn new(a: GroupElem, z: FieldElem) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::InvalidGroupElem("z must be nonzero".into()));
        }
        Ok(ScaledGroupElem { a, z })
    }

    pub fn identity() -> Self {
        ScaledGroupElem { a: GroupElem::identity(), z: FieldElem::one() }
    }

    pub fn inverse(&self) -> Self {
        ScaledGroupElem { a: self.a.inverse(), z: self.z.inv().expect("z nonzero") }
    }

    /// Element of the K-fixing subgroup with the given A.
    pub fn k_fixing(a: GroupElem) -> Self {
        let z = (&a.det_r() * a.a55()).inv().expect("nonsingular");
        ScaledGroupElem { a, z }
    }
}

pub fn group_act(g: &ScaledGroupElem, b: &SymForm) -> SymForm {
    b.congruence(&g.a.hat()).scale(&g.z)
}

pub fn k_transform(g: &ScaledGroupElem, k: &FieldElem) -> FieldElem {
    let denom = &(&g.z * &g.a.det_r()) * g.a.a55();
    k.div(&denom).expect("group element is nonsingular")
}

/// act(compose(g1, g2), B) = act(g2, act(g1, B)).
pub fn compose(g1: &ScaledGroupElem, g2: &ScaledGroupElem) -> ScaledGroupElem {
    ScaledGroupElem { a: g1.a.mul(&g2.a), z: &g1.z * &g2.z }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    matrix: Vec<Vec<FieldElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<FieldElem>,
}

impl Serialize for ScaledGroupElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson {
            matrix: self.a.a.iter().map(|r| r.to_vec()).collect(),
            z: Some(self.z.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledGroupElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = GroupJson::deserialize(d)?;
        if j.matrix.len() != 5 || j.matrix.iter().any(|r| r.len() != 5) {
            return Err(D::Error::custom("matrix must be a 5x5 grid"));
        }
        let a = GroupElem::new(std::array::from_fn(|i| std::array::from_fn(|k| j.matrix[i][k].clone())))
            .map_err(D::Error::custom)?;
        ScaledGroupElem::new(a, j.z.unwrap_or_else(FieldElem::one)).map_err(D::Error::custom)
    }
}

/// Small field elements used to draw random group elements.
pub fn sample_pool() -> Vec<FieldElem> {
    ["0", "1", "-1", "2", "1/2", "i", "-i", "1+i", "s2", "3", "-2/3", "s3", "i*s2", "1-s3"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// Seeded random valid element of G_degn; invalid draws are rejected.
pub fn random_group_elem<R: Rng>(rng: &mut R) -> ScaledGroupElem {
    let pool = sample_pool();
    let nonzero: Vec<FieldElem> = pool.iter().filter(|x| !x.is_zero()).cloned().collect();
    let pick = |rng: &mut R| pool.choose(rng).unwrap().clone();
    loop {
        let r = [[pick(rng), pick(rng)], [pick(rng), pick(rng)]];
        let s = [[pick(rng), pick(rng)], [pick(rng), pick(rng)]];
        let a33 = nonzero.choose(rng).unwrap().clone();
        let a55 = nonzero.choose(rng).unwrap().clone();
        let z = nonzero.choose(rng).unwrap().clone();
        if let Ok(a) = GroupElem::from_parts(r, s, a33, a55) {
            return ScaledGroupElem { a, z };
        }
    }
}
