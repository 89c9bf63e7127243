use super::{classify_label, CanonicalLabel, Family};
use crate::error::{Error, Result};
use crate::forms::{rank_invariants, SymForm};
use crate::poisson::{form_from_poly, AbstractPoly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

const BUNDLED: &str = include_str!("../../data/systems.json");

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemId {
    S6,
    E18,
    D3E,
    D4bD,
    S3,
    E3,
    E12,
    D1D,
    D2D,
    E6,
    E5,
    E14,
    S5,
    E13,
    E4,
}

/// Row/column order of the contraction grid. S5 is folded into E14.
pub const TABLE6_ORDER: [SystemId; 14] = [
    SystemId::S6,
    SystemId::E18,
    SystemId::D3E,
    SystemId::D4bD,
    SystemId::S3,
    SystemId::E3,
    SystemId::E12,
    SystemId::D1D,
    SystemId::D2D,
    SystemId::E6,
    SystemId::E5,
    SystemId::E14,
    SystemId::E13,
    SystemId::E4,
];

impl SystemId {
    pub const ALL: [SystemId; 15] = [
        SystemId::S6,
        SystemId::E18,
        SystemId::D3E,
        SystemId::D4bD,
        SystemId::S3,
        SystemId::E3,
        SystemId::E12,
        SystemId::D1D,
        SystemId::D2D,
        SystemId::E6,
        SystemId::E5,
        SystemId::E14,
        SystemId::S5,
        SystemId::E13,
        SystemId::E4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::S6 => "S6",
            SystemId::E18 => "E18",
            SystemId::D3E => "D3E",
            SystemId::D4bD => "D4bD",
            SystemId::S3 => "S3",
            SystemId::E3 => "E3",
            SystemId::E12 => "E12",
            SystemId::D1D => "D1D",
            SystemId::D2D => "D2D",
            SystemId::E6 => "E6",
            SystemId::E5 => "E5",
            SystemId::E14 => "E14",
            SystemId::S5 => "S5",
            SystemId::E13 => "E13",
            SystemId::E4 => "E4",
        }
    }

    /// The grid representative: S5 shares its quadratic algebra with E14.
    pub fn grid_id(self) -> SystemId {
        if self == SystemId::S5 {
            SystemId::E14
        } else {
            self
        }
    }

    pub fn notice(self) -> Option<&'static str> {
        (self == SystemId::S5).then_some("S5 has the same free quadratic algebra as E14; using the E14 form")
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().chars().filter(|c| !matches!(c, '(' | ')')).collect();
        SystemId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(&key) || (*id == SystemId::D4bD && key.eq_ignore_ascii_case("D4D")))
            .ok_or_else(|| Error::UnknownSystem(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemRecord {
    pub id: SystemId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub space: String,
    pub potential: String,
    pub casimir: AbstractPoly,
    /// Label exactly as printed alongside the polynomial; may be non-canonical.
    pub table_label: String,
    pub ranks: [usize; 2],
    pub class: char,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametrized_casimir: Option<AbstractPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_casimir: Option<AbstractPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SystemRecord {
    pub fn form(&self) -> SymForm {
        form_from_poly(&self.casimir).expect("validated on load")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub systems: Vec<SystemRecord>,
    pub classes: BTreeMap<char, AbstractPoly>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let cat: Catalog = serde_json::from_str(text).map_err(|e| Error::Data(format!("systems.json: {e}")))?;
        for id in SystemId::ALL {
            let rec = cat.systems.iter().find(|r| r.id == id).ok_or_else(|| Error::Data(format!("systems.json lacks {id}")))?;
            form_from_poly(&rec.casimir).map_err(|e| Error::Data(format!("{id}: {e}")))?;
            if !cat.classes.contains_key(&rec.class) {
                return Err(Error::Data(format!("{id}: unknown class {}", rec.class)));
            }
        }
        Ok(cat)
    }

    /// Bundled data, or `$QUADALG_DATA/systems.json` when that variable is set.
    pub fn load() -> Result<Catalog> {
        match std::env::var_os("QUADALG_DATA") {
            Some(dir) => {
                let path = std::path::Path::new(&dir).join("systems.json");
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Catalog::parse(&text)
            }
            None => Catalog::parse(BUNDLED),
        }
    }

    pub fn get(&self, id: SystemId) -> &SystemRecord {
        self.systems.iter().find(|r| r.id == id).expect("checked on load")
    }

    pub fn class_members(&self, class: char) -> Vec<SystemId> {
        self.systems.iter().filter(|r| r.class == class).map(|r| r.id).collect()
    }
}

static CATALOG: OnceLock<std::result::Result<Catalog, Error>> = OnceLock::new();

pub fn catalog() -> Result<&'static Catalog> {
    CATALOG.get_or_init(Catalog::load).as_ref().map_err(|e| e.clone())
}

/// Casimir matrix and polynomial of a cataloged system.
pub fn catalog_form(id: SystemId) -> Result<(SymForm, AbstractPoly)> {
    let rec = catalog()?.get(id.grid_id());
    Ok((rec.form(), rec.casimir.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "case")]
pub enum RealizabilityStatus {
    RealizedBySystem,
    HeisenbergOnly,
    NotPhaseSpaceRealizable(u8),
    /// Excluded from the matching table without a non-realizability argument.
    NoGeometricMatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    #[serde(flatten)]
    pub status: RealizabilityStatus,
    /// Cataloged systems whose Casimir has exactly this canonical form.
    pub systems: Vec<SystemId>,
    /// Stäckel classes whose canonical forms include this label.
    pub classes: Vec<char>,
}

pub type Realizability = Realization;

pub fn realizability(label: &CanonicalLabel) -> Result<Realization> {
    use RealizabilityStatus::*;
    let p = label.params();
    let one = |k: usize| p[k].is_one();
    let zero = |k: usize| p[k].is_zero();
    let (status, classes): (RealizabilityStatus, Vec<char>) = match label.family() {
        Family::B21 | Family::B22 => {
            let b44 = &p[1];
            let cls = if b44.is_zero() {
                vec!['C']
            } else if label.family() == Family::B21 && !zero(0) {
                vec!['A']
            } else if b44.is_one() {
                vec!['A']
            } else {
                vec![]
            };
            (RealizedBySystem, cls)
        }
        Family::B11 => {
            let (b33, b34) = (one(0), one(1));
            match (b33, b34, p[2].is_zero(), p[2].is_one()) {
                (_, false, _, _) => (RealizedBySystem, vec!['D']),
                (true, true, _, true) => (NotPhaseSpaceRealizable(1), vec![]),
                (false, true, _, true) => (NotPhaseSpaceRealizable(2), vec![]),
                (true, true, true, _) => (NotPhaseSpaceRealizable(3), vec![]),
                (false, true, true, _) => (HeisenbergOnly, vec![]),
                _ => (NoGeometricMatch, vec![]),
            }
        }
        Family::B15 => (RealizedBySystem, vec!['B']),
        Family::B16 => {
            if one(0) {
                (RealizedBySystem, vec!['D'])
            } else {
                (HeisenbergOnly, vec![])
            }
        }
        Family::B17 => (RealizedBySystem, vec!['E']),
        Family::B05 => (NoGeometricMatch, vec![]),
        Family::B06 => (NotPhaseSpaceRealizable(4), vec![]),
        Family::B07 => {
            if one(0) {
                (RealizedBySystem, vec!['F'])
            } else {
                (NotPhaseSpaceRealizable(5), vec![])
            }
        }
        Family::B08 => (RealizedBySystem, vec!['F']),
    };
    let cat = catalog()?;
    let systems = SystemId::ALL
        .iter()
        .copied()
        .filter(|id| classify_label(&cat.get(*id).form()).map(|l| &l == label).unwrap_or(false))
        .collect();
    Ok(Realization { status, systems, classes })
}

/// Strict label and recomputed rank pair for each cataloged system.
pub fn catalog_labels() -> Result<Vec<(SystemId, CanonicalLabel, (usize, usize))>> {
    let cat = catalog()?;
    SystemId::ALL
        .iter()
        .map(|&id| {
            let f = cat.get(id).form();
            Ok((id, classify_label(&f)?, rank_invariants(&f)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_and_aliases() {
        assert_eq!("d4(b)d".parse::<SystemId>().unwrap(), SystemId::D4bD);
        assert_eq!("e14".parse::<SystemId>().unwrap(), SystemId::E14);
        assert!("E99".parse::<SystemId>().is_err());
        assert_eq!(catalog_form(SystemId::S5).unwrap().0, catalog_form(SystemId::E14).unwrap().0);
    }

    #[test]
    fn known_labels() {
        let labels = catalog_labels().unwrap();
        let get = |id| labels.iter().find(|(i, _, _)| *i == id).unwrap().1.to_string();
        assert_eq!(get(SystemId::S6), "B22(1,1)");
        assert_eq!(get(SystemId::E18), "B22(1,0)");
        assert_eq!(get(SystemId::E13), "B08");
        assert_eq!(get(SystemId::E4), "B07(1)");
        assert_eq!(get(SystemId::E12), "B17(1)");
        assert_eq!(get(SystemId::E5), "B11(0,1,1)");
    }

    #[test]
    fn ledger() {
        let r = realizability(&"B17(1)".parse().unwrap()).unwrap();
        assert_eq!(r.status, RealizabilityStatus::RealizedBySystem);
        assert_eq!(r.systems, vec![SystemId::E12]);
        let r = realizability(&"B06".parse().unwrap()).unwrap();
        assert_eq!(r.status, RealizabilityStatus::NotPhaseSpaceRealizable(4));
        for l in ["B15(0)", "B15(1)"] {
            let r = realizability(&l.parse().unwrap()).unwrap();
            assert_eq!(r.status, RealizabilityStatus::RealizedBySystem);
            assert_eq!(r.classes, vec!['B']);
        }
        let r = realizability(&"B07(0)".parse().unwrap()).unwrap();
        assert_eq!(r.status, RealizabilityStatus::NotPhaseSpaceRealizable(5));
    }
}
