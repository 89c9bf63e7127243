//! ε-parametrized contraction families, their congruence limits, and
//! obstructions to contraction.

mod invariants;
mod search;
mod table6;

pub use invariants::{invariant_obstruction, invariant_obstructions, InvariantCertificate};
pub use search::{search_contraction, SearchOptions, SearchOutcome};
pub use table6::{
    ground_truth, load_witnesses, published_certificate, reproduce_table6, CellReport, CellVerdict, Table6Options,
    Table6Report, WitnessKind, WitnessRecord,
};

use crate::canon::{classify, classify_label, CanonicalLabel};
use crate::error::{Error, Result};
use crate::exactnum::{laurent_limit, FieldElem, LaurentScalar};
use crate::forms::{compose, rank_invariants, Mat4, SymForm};
use crate::linalg;
use serde::{Deserialize, Serialize};

pub type LaurentGrid = [[LaurentScalar; 4]; 4];

fn allowed(i: usize, j: usize) -> bool {
    i < 2 || i == j
}

/// ε ↦ (Â(ε), z(ε)) with Laurent-polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionFamily {
    hat: LaurentGrid,
    z: LaurentScalar,
}

impl ContractionFamily {
    pub fn new(hat: LaurentGrid, z: LaurentScalar) -> Result<Self> {
        for (i, row) in hat.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !allowed(i, j) && !x.is_zero() {
                    return Err(Error::InvalidFamily(format!("entry ({},{}) must vanish, found {x}", i + 1, j + 1)));
                }
            }
        }
        if z.is_zero() {
            return Err(Error::InvalidFamily("z(eps) vanishes identically".into()));
        }
        let f = ContractionFamily { hat, z };
        if f.det()?.is_zero() {
            return Err(Error::InvalidFamily("det(hat A) vanishes identically".into()));
        }
        Ok(f)
    }

    pub fn from_hat(hat: LaurentGrid) -> Result<Self> {
        Self::new(hat, LaurentScalar::one())
    }

    pub fn identity() -> Self {
        let hat = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { LaurentScalar::one() } else { LaurentScalar::zero() })
        });
        ContractionFamily { hat, z: LaurentScalar::one() }
    }

    /// Parse a grid of Laurent expressions in `eps` (or `e`).
    pub fn parse_grid(rows: &[[&str; 4]; 4]) -> Result<Self> {
        let mut hat: LaurentGrid = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                hat[i][j] = rows[i][j].parse()?;
            }
        }
        Self::from_hat(hat)
    }

    pub fn hat(&self) -> &LaurentGrid {
        &self.hat
    }

    pub fn z(&self) -> &LaurentScalar {
        &self.z
    }

    /// det Â(ε) = det r · A33 · A44.
    pub fn det(&self) -> Result<LaurentScalar> {
        let h = &self.hat;
        let r = h[0][0].mul(&h[1][1])?.sub(&h[0][1].mul(&h[1][0])?);
        r.mul(&h[2][2])?.mul(&h[3][3])
    }

    pub fn is_monomial(&self) -> bool {
        self.hat.iter().flatten().all(|x| x.is_zero() || x.is_monomial())
    }

    /// Family acting as `self` followed by `other`.
    pub fn then(&self, other: &ContractionFamily) -> Result<Self> {
        let mut hat: LaurentGrid = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = LaurentScalar::zero();
                for k in 0..4 {
                    acc = acc.add(&self.hat[i][k].mul(&other.hat[k][j])?);
                }
                hat[i][j] = acc;
            }
        }
        Self::new(hat, self.z.mul(&other.z)?)
    }

    /// Replace ε by ε^k.
    pub fn substitute_power(&self, k: i32) -> Result<Self> {
        let mut hat: LaurentGrid = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                hat[i][j] = self.hat[i][j].substitute_power(k)?;
            }
        }
        Self::new(hat, self.z.substitute_power(k)?)
    }

    /// Numeric (Â, z) at a fixed ε.
    pub fn at(&self, eps: &FieldElem) -> Result<(Mat4, FieldElem)> {
        let mut m: Mat4 = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.hat[i][j].eval(eps)?;
            }
        }
        Ok((m, self.z.eval(eps)?))
    }
}

impl Serialize for ContractionFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("hat_A", &self.hat)?;
        if self.z != LaurentScalar::one() {
            m.serialize_entry("z", &self.z)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for ContractionFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "hat_A")]
            hat: LaurentGrid,
            #[serde(default)]
            z: Option<LaurentScalar>,
        }
        let r = Raw::deserialize(d)?;
        ContractionFamily::new(r.hat, r.z.unwrap_or_else(LaurentScalar::one)).map_err(D::Error::custom)
    }
}

/// z(ε)·Â(ε)ᵗ·B·Â(ε), exactly.
pub fn evaluate_family(f: &ContractionFamily, b: &SymForm) -> Result<LaurentGrid> {
    let h = &f.hat;
    // B·Â first, then Âᵗ·(B·Â)
    let mut bh: LaurentGrid = Default::default();
    for k in 0..4 {
        for j in 0..4 {
            let mut acc = LaurentScalar::zero();
            for l in 0..4 {
                let bkl = b.get(k, l);
                if !bkl.is_zero() && !h[l][j].is_zero() {
                    acc = acc.add(&h[l][j].scale(bkl));
                }
            }
            bh[k][j] = acc;
        }
    }
    let mut out: LaurentGrid = Default::default();
    for i in 0..4 {
        for j in i..4 {
            let mut acc = LaurentScalar::zero();
            for k in 0..4 {
                if !h[k][i].is_zero() && !bh[k][j].is_zero() {
                    acc = acc.add(&h[k][i].mul(&bh[k][j])?);
                }
            }
            let v = acc.mul(&f.z)?;
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    Ok(out)
}

/// Entrywise ε → 0 limit; `Err` lists the divergent upper-triangle entries.
pub fn grid_limit(g: &LaurentGrid) -> std::result::Result<SymForm, Vec<(usize, usize)>> {
    let mut m: Mat4 = Default::default();
    let mut bad = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            match laurent_limit(&g[i][j]) {
                Ok(v) => {
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
                Err(_) => bad.push((i, j)),
            }
        }
    }
    if bad.is_empty() {
        Ok(SymForm::new(m).expect("symmetric by construction"))
    } else {
        Err(bad)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    VerifiedStrict,
    VerifiedUpToClassification,
    LimitUndefined,
    WrongTarget,
}

impl VerdictStatus {
    pub fn verified(self) -> bool {
        matches!(self, VerdictStatus::VerifiedStrict | VerdictStatus::VerifiedUpToClassification)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionVerdict {
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_form: Option<SymForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_label: Option<CanonicalLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_label: Option<CanonicalLabel>,
    /// 1-based positions of entries with surviving negative powers of ε.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub divergent: Vec<(usize, usize)>,
}

pub fn verify_contraction(f: &ContractionFamily, source: &SymForm, target: &SymForm) -> Result<ContractionVerdict> {
    let img = evaluate_family(f, source)?;
    let target_label = classify_label(target).ok();
    match grid_limit(&img) {
        Err(bad) => Ok(ContractionVerdict {
            status: VerdictStatus::LimitUndefined,
            limit_form: None,
            limit_label: None,
            target_label,
            divergent: bad.into_iter().map(|(i, j)| (i + 1, j + 1)).collect(),
        }),
        Ok(lim) => {
            let limit_label = classify_label(&lim).ok();
            let status = if &lim == target {
                VerdictStatus::VerifiedStrict
            } else if limit_label.is_some() && limit_label == target_label {
                VerdictStatus::VerifiedUpToClassification
            } else {
                VerdictStatus::WrongTarget
            };
            Ok(ContractionVerdict { status, limit_form: Some(lim), limit_label, target_label, divergent: vec![] })
        }
    }
}

/// Turn a family whose limit only shares the target's label into one whose
/// limit is the target itself, by appending a constant group element.
/// `None` when the family does not contract onto the target's orbit or the
/// classification witnesses need square roots outside the field.
pub fn sharpen(f: &ContractionFamily, source: &SymForm, target: &SymForm) -> Result<Option<ContractionFamily>> {
    let v = verify_contraction(f, source, target)?;
    match v.status {
        VerdictStatus::VerifiedStrict => return Ok(Some(f.clone())),
        VerdictStatus::VerifiedUpToClassification => {}
        _ => return Ok(None),
    }
    let lim = v.limit_form.expect("verified limits exist");
    let (Some(gl), Some(gt)) = (classify(&lim)?.witness, classify(target)?.witness) else {
        return Ok(None);
    };
    let g = compose(&gl, &gt.inverse());
    let hat = g.a.hat();
    let grid: LaurentGrid = std::array::from_fn(|i| std::array::from_fn(|j| LaurentScalar::constant(hat[i][j].clone())));
    let out = f.then(&ContractionFamily::new(grid, LaurentScalar::constant(g.z))?)?;
    Ok(verify_contraction(&out, source, target)?.status.eq(&VerdictStatus::VerifiedStrict).then_some(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    RankBIncrease,
    RankbIncrease,
    /// Rank of a principal block on an Â-stable index set increases.
    BlockRankIncrease,
    /// A polynomial vanishing on the whole orbit is nonzero at the target.
    InvariantIdentity,
    PublishedArgument(String),
    AnsatzExhausted(u32),
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::RankBIncrease => "RankBIncrease",
            CertificateKind::RankbIncrease => "RankbIncrease",
            CertificateKind::BlockRankIncrease => "BlockRankIncrease",
            CertificateKind::InvariantIdentity => "InvariantIdentity",
            CertificateKind::PublishedArgument(_) => "PublishedArgument",
            CertificateKind::AnsatzExhausted(_) => "AnsatzExhausted",
        }
    }

    /// Proof (as opposed to evidence or citation) checked by this crate.
    pub fn machine_checked(&self) -> bool {
        !matches!(self, CertificateKind::PublishedArgument(_) | CertificateKind::AnsatzExhausted(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub kind: CertificateKind,
    pub detail: String,
}

pub fn rank_obstruction(source: &SymForm, target: &SymForm) -> Option<ObstructionCertificate> {
    let (sb, ss) = rank_invariants(source);
    let (tb, ts) = rank_invariants(target);
    if tb > sb {
        Some(ObstructionCertificate {
            kind: CertificateKind::RankBIncrease,
            detail: format!("rank B: source {sb} < target {tb}"),
        })
    } else if ts > ss {
        Some(ObstructionCertificate {
            kind: CertificateKind::RankbIncrease,
            detail: format!("rank b: source {ss} < target {ts}"),
        })
    } else {
        None
    }
}

/// Index sets I with Â·span(e_I) ⊆ span(e_I) for every Â in the group.
pub const STABLE_INDEX_SETS: [&[usize]; 2] = [&[0, 1, 2], &[0, 1, 3]];

fn principal_rank(b: &SymForm, idx: &[usize]) -> usize {
    let m: Vec<Vec<FieldElem>> = idx.iter().map(|&i| idx.iter().map(|&j| b.get(i, j).clone()).collect()).collect();
    linalg::rank(&m)
}

/// The principal block on a stable index set transforms by congruence with
/// an invertible block of Â, so its rank is an orbit invariant and can only
/// drop in a limit.
pub fn block_rank_obstruction(source: &SymForm, target: &SymForm) -> Option<ObstructionCertificate> {
    const NAMES: [&str; 4] = ["L1", "L2", "H", "X2"];
    for idx in STABLE_INDEX_SETS {
        let (s, t) = (principal_rank(source, idx), principal_rank(target, idx));
        if t > s {
            let names: Vec<&str> = idx.iter().map(|&i| NAMES[i]).collect();
            return Some(ObstructionCertificate {
                kind: CertificateKind::BlockRankIncrease,
                detail: format!("rank of block on ({}): source {s} < target {t}", names.join(",")),
            });
        }
    }
    None
}

/// Strongest machine-checked obstruction available.
pub fn obstruction(source: &SymForm, target: &SymForm, invariant_degree: usize) -> Result<Option<ObstructionCertificate>> {
    if let Some(c) = rank_obstruction(source, target).or_else(|| block_rank_obstruction(source, target)) {
        return Ok(Some(c));
    }
    Ok(invariant_obstruction(source, target, invariant_degree)?.map(|c| ObstructionCertificate {
        kind: CertificateKind::InvariantIdentity,
        detail: c.to_string(),
    }))
}

/// Compose `f` with an elimination step that clears row/column `p` of the
/// image outside the diagonal. Needs a convergent image whose pivot entry is
/// a single ε-power with nonzero limit and whose other row-`p` entries tend to 0;
/// the limit is then unchanged.
pub fn normalize_family(f: &ContractionFamily, source: &SymForm) -> Result<ContractionFamily> {
    let img = evaluate_family(f, source)?;
    let lim = grid_limit(&img).map_err(|_| Error::HypothesisNotMet("congruence image has no limit".into()))?;
    let p = (0..2)
        .find(|&p| !lim.get(p, p).is_zero())
        .ok_or_else(|| Error::HypothesisNotMet("limit has zero (1,1) and (2,2) entries".into()))?;
    if (0..4).any(|j| j != p && !lim.get(p, j).is_zero()) {
        return Err(Error::HypothesisNotMet(format!("limit row {} is not cleared", p + 1)));
    }
    let pivot = &img[p][p];
    if !pivot.is_monomial() {
        return Err(Error::HypothesisNotMet(format!("image entry ({0},{0}) is not a single power of eps", p + 1)));
    }
    if (0..4).all(|j| j == p || img[p][j].is_zero()) {
        return Ok(f.clone());
    }
    // G = I − e_p·(M_pj / M_pp)_j, which has the allowed zero pattern since p < 2
    let mut g: LaurentGrid = ContractionFamily::identity().hat;
    for j in 0..4 {
        if j != p {
            g[p][j] = img[p][j].div_monomial(pivot)?.neg();
        }
    }
    let step = ContractionFamily::from_hat(g)?;
    f.then(&step)
}

/// Reduced parametrization for sources with b = I and c = 0:
/// Â = [[1, 0, 0, 0], [0, −β, −γ, −δ], [0, 0, A33, 0], [0, 0, 0, A44]],
/// giving image e₁e₁ᵗ + vvᵗ + (0 ⊕ t·d·t) with v = (0, β, γ, δ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedFamily {
    pub beta: LaurentScalar,
    pub gamma: LaurentScalar,
    pub delta: LaurentScalar,
    pub a33: LaurentScalar,
    pub a44: LaurentScalar,
}

impl ReducedFamily {
    pub fn new(
        beta: LaurentScalar,
        gamma: LaurentScalar,
        delta: LaurentScalar,
        a33: LaurentScalar,
        a44: LaurentScalar,
    ) -> Result<Self> {
        if beta.is_zero() || a33.is_zero() || a44.is_zero() {
            return Err(Error::InvalidFamily("beta, A33 and A44 must be nonzero".into()));
        }
        if beta.valuation().unwrap() <= 0 {
            return Err(Error::InvalidFamily("beta must tend to 0".into()));
        }
        Ok(ReducedFamily { beta, gamma, delta, a33, a44 })
    }

    pub fn to_family(&self) -> Result<ContractionFamily> {
        let z = LaurentScalar::zero;
        let o = LaurentScalar::one;
        ContractionFamily::from_hat([
            [o(), z(), z(), z()],
            [z(), self.beta.neg(), self.gamma.neg(), self.delta.neg()],
            [z(), z(), self.a33.clone(), z()],
            [z(), z(), z(), self.a44.clone()],
        ])
    }

    pub fn image(&self, source: &SymForm) -> Result<LaurentGrid> {
        let b = source.b();
        let c = source.c();
        let id = b[0][0].is_one() && b[1][1].is_one() && b[0][1].is_zero();
        if !id || c.iter().flatten().any(|x| !x.is_zero()) {
            return Err(Error::HypothesisNotMet("reduced form needs b = I and c = 0".into()));
        }
        evaluate_family(&self.to_family()?, source)
    }
}
