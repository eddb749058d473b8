//! Named q-series: brackets, bi-brackets, Z-values and Eisenstein series.

pub mod index;
pub mod polys;
pub mod values;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use index::{BiBracketIndex, BracketIndex};
pub use polys::{bernoulli, bernoulli_table, eulerian_numerator, q_e, q_o, IntPoly};
pub use values::{bibracket, bibracket_eulerian, bracket, eisenstein, zvalue};

/// The spaces of q-series studied here, nested as
///
/// ```text
///                     qBD  ⊂  BD
///                      ∪      ∪
/// QM  ⊂  qMZV  ⊂  qMD  ⊂  MD
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "MD")]
    Md,
    #[serde(rename = "qMD")]
    QMd,
    #[serde(rename = "BD")]
    Bd,
    #[serde(rename = "qBD")]
    QBd,
    #[serde(rename = "qMZV")]
    QMzv,
    #[serde(rename = "QM")]
    Qm,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 6] =
        [FamilyTag::Md, FamilyTag::QMd, FamilyTag::Bd, FamilyTag::QBd, FamilyTag::QMzv, FamilyTag::Qm];

    /// Families that directly contain this one.
    fn parents(self) -> &'static [FamilyTag] {
        use FamilyTag::*;
        match self {
            Qm => &[QMzv],
            QMzv => &[QMd],
            QMd => &[Md, QBd],
            Md => &[Bd],
            QBd => &[Bd],
            Bd => &[],
        }
    }

    /// Reflexive, transitive inclusion `self ⊆ other`.
    pub fn is_subset_of(self, other: FamilyTag) -> bool {
        self == other || self.parents().iter().any(|p| p.is_subset_of(other))
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Md => "MD",
            FamilyTag::QMd => "qMD",
            FamilyTag::Bd => "BD",
            FamilyTag::QBd => "qBD",
            FamilyTag::QMzv => "qMZV",
            FamilyTag::Qm => "QM",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}; expected one of MD, qMD, BD, qBD, qMZV, QM")))
    }
}

#[cfg(test)]
mod tests {
    use super::FamilyTag::*;
    use super::*;

    #[test]
    fn inclusions() {
        assert!(Qm.is_subset_of(Bd));
        assert!(QMzv.is_subset_of(QBd));
        assert!(QMd.is_subset_of(Md));
        assert!(!Md.is_subset_of(QBd));
        assert!(!QBd.is_subset_of(Md));
        assert!(!Bd.is_subset_of(Qm));
        for t in FamilyTag::ALL {
            assert!(t.is_subset_of(t));
            assert!(t.is_subset_of(Bd));
            assert_eq!(t.to_string().parse::<FamilyTag>().unwrap(), t);
        }
    }
}
