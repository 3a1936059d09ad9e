use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Sprint category code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SprintCategory {
    RWB,
    EXS,
    PEN,
    BIB,
    SUP,
    OVL,
    UNL,
    MTR,
    PRS,
    COV,
    REC,
    INT,
    CTO,
    PUP,
    OTH,
}

/// Which possession phase a category belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CategoryGroup {
    Attacking,
    Defending,
    Common,
    Other,
}

impl SprintCategory {
    pub const ALL: [SprintCategory; 15] = [
        SprintCategory::RWB,
        SprintCategory::EXS,
        SprintCategory::PEN,
        SprintCategory::BIB,
        SprintCategory::SUP,
        SprintCategory::OVL,
        SprintCategory::UNL,
        SprintCategory::MTR,
        SprintCategory::PRS,
        SprintCategory::COV,
        SprintCategory::REC,
        SprintCategory::INT,
        SprintCategory::CTO,
        SprintCategory::PUP,
        SprintCategory::OTH,
    ];

    /// Highest priority first.
    pub const PRIORITY: [SprintCategory; 15] = [
        SprintCategory::RWB,
        SprintCategory::BIB,
        SprintCategory::PEN,
        SprintCategory::UNL,
        SprintCategory::OVL,
        SprintCategory::EXS,
        SprintCategory::SUP,
        SprintCategory::MTR,
        SprintCategory::CTO,
        SprintCategory::INT,
        SprintCategory::PRS,
        SprintCategory::REC,
        SprintCategory::COV,
        SprintCategory::PUP,
        SprintCategory::OTH,
    ];

    pub fn as_str(self) -> &'static str {
        use SprintCategory::*;
        match self {
            RWB => "RWB",
            EXS => "EXS",
            PEN => "PEN",
            BIB => "BIB",
            SUP => "SUP",
            OVL => "OVL",
            UNL => "UNL",
            MTR => "MTR",
            PRS => "PRS",
            COV => "COV",
            REC => "REC",
            INT => "INT",
            CTO => "CTO",
            PUP => "PUP",
            OTH => "OTH",
        }
    }

    /// Position in the priority order; 0 is the highest.
    pub fn rank(self) -> usize {
        Self::PRIORITY
            .iter()
            .position(|&c| c == self)
            .expect("every code is ranked")
    }

    pub fn group(self) -> CategoryGroup {
        use SprintCategory::*;
        match self {
            RWB | EXS | PEN | BIB | SUP | OVL | UNL | MTR => CategoryGroup::Attacking,
            PRS | COV | REC | INT | CTO => CategoryGroup::Defending,
            PUP => CategoryGroup::Common,
            OTH => CategoryGroup::Other,
        }
    }

    /// Rows evaluated in `phase`.
    pub fn legal_in(phase: Phase) -> Vec<SprintCategory> {
        Self::ALL
            .into_iter()
            .filter(|c| match (c.group(), phase) {
                (CategoryGroup::Common, _) => true,
                (CategoryGroup::Attacking, Phase::Attacking) => true,
                (CategoryGroup::Defending, Phase::Defending) => true,
                _ => false,
            })
            .collect()
    }
}

/// Highest-priority code among `matched`, or OTH when empty.
pub fn resolve_priority<'a>(matched: impl IntoIterator<Item = &'a SprintCategory>) -> SprintCategory {
    matched
        .into_iter()
        .copied()
        .min_by_key(|c| c.rank())
        .unwrap_or(SprintCategory::OTH)
}

impl fmt::Display for SprintCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SprintCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let up = s.trim().to_ascii_uppercase();
        SprintCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == up)
            .ok_or_else(|| Error::Validation(format!("unknown sprint category `{s}`")))
    }
}

impl TryFrom<String> for SprintCategory {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<SprintCategory> for String {
    fn from(c: SprintCategory) -> String {
        c.as_str().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Attacking,
    Defending,
    Unclassified,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Attacking => "attacking",
            Phase::Defending => "defending",
            Phase::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
