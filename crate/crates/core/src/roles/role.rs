use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::Vec2;

/// Tactical role code. `L*`/`R*` pairs mirror each other in y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Role {
    GK,
    LB,
    LCB,
    CB,
    RCB,
    RB,
    LWB,
    RWB,
    LDM,
    CDM,
    RDM,
    LM,
    LCM,
    CM,
    RCM,
    RM,
    LAM,
    CAM,
    RAM,
    LCF,
    CF,
    RCF,
}

impl Role {
    pub const ALL: [Role; 22] = [
        Role::GK,
        Role::LB,
        Role::LCB,
        Role::CB,
        Role::RCB,
        Role::RB,
        Role::LWB,
        Role::RWB,
        Role::LDM,
        Role::CDM,
        Role::RDM,
        Role::LM,
        Role::LCM,
        Role::CM,
        Role::RCM,
        Role::RM,
        Role::LAM,
        Role::CAM,
        Role::RAM,
        Role::LCF,
        Role::CF,
        Role::RCF,
    ];

    pub fn as_str(self) -> &'static str {
        use Role::*;
        match self {
            GK => "GK",
            LB => "LB",
            LCB => "LCB",
            CB => "CB",
            RCB => "RCB",
            RB => "RB",
            LWB => "LWB",
            RWB => "RWB",
            LDM => "LDM",
            CDM => "CDM",
            RDM => "RDM",
            LM => "LM",
            LCM => "LCM",
            CM => "CM",
            RCM => "RCM",
            RM => "RM",
            LAM => "LAM",
            CAM => "CAM",
            RAM => "RAM",
            LCF => "LCF",
            CF => "CF",
            RCF => "RCF",
        }
    }

    /// Role on the other side of the pitch; central roles map to themselves.
    pub fn mirrored(self) -> Role {
        use Role::*;
        match self {
            LB => RB,
            RB => LB,
            LCB => RCB,
            RCB => LCB,
            LWB => RWB,
            RWB => LWB,
            LDM => RDM,
            RDM => LDM,
            LM => RM,
            RM => LM,
            LCM => RCM,
            RCM => LCM,
            LAM => RAM,
            RAM => LAM,
            LCF => RCF,
            RCF => LCF,
            other => other,
        }
    }

    /// Wide roles that make an overlapping run count.
    pub fn is_side(self) -> bool {
        matches!(self, Role::LB | Role::LWB | Role::LM | Role::RB | Role::RWB | Role::RM)
    }

    /// Members of the back four/five, wing-backs excluded.
    pub fn is_back_line(self) -> bool {
        matches!(self, Role::LB | Role::LCB | Role::CB | Role::RCB | Role::RB)
    }

    /// Mean position relative to the outfield centroid, in meters, with the
    /// team attacking +x and its left flank at +y.
    pub fn template_position(self) -> Vec2 {
        use Role::*;
        let (x, y) = match self {
            GK => (-40.0, 0.0),
            LB => (-14.0, 24.0),
            LCB => (-18.0, 9.0),
            CB => (-19.0, 0.0),
            RCB => (-18.0, -9.0),
            RB => (-14.0, -24.0),
            LWB => (-6.0, 27.0),
            RWB => (-6.0, -27.0),
            LDM => (-9.0, 7.0),
            CDM => (-9.0, 0.0),
            RDM => (-9.0, -7.0),
            LM => (0.0, 22.0),
            LCM => (-3.0, 9.0),
            CM => (-2.0, 0.0),
            RCM => (-3.0, -9.0),
            RM => (0.0, -22.0),
            LAM => (7.0, 13.0),
            CAM => (7.0, 0.0),
            RAM => (7.0, -13.0),
            LCF => (15.0, 7.0),
            CF => (16.0, 0.0),
            RCF => (15.0, -7.0),
        };
        Vec2::new(x, y)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown role code `{s}`")))
    }
}

impl TryFrom<String> for Role {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Role> for String {
    fn from(r: Role) -> String {
        r.as_str().to_string()
    }
}

/// A formation: ten outfield roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formation {
    pub name: &'static str,
    pub roles: [Role; 10],
}

impl Formation {
    /// Template positions of the ten roles, shifted so their mean is zero.
    pub fn centered_positions(&self) -> [Vec2; 10] {
        let raw = self.roles.map(Role::template_position);
        let mean = raw.iter().fold(Vec2::ZERO, |a, &p| a + p) / 10.0;
        raw.map(|p| p - mean)
    }
}

pub const FORMATIONS: [Formation; 5] = {
    use Role::*;
    [
        Formation {
            name: "4-4-2",
            roles: [LB, LCB, RCB, RB, LM, LCM, RCM, RM, LCF, RCF],
        },
        Formation {
            name: "4-3-3",
            roles: [LB, LCB, RCB, RB, LCM, CM, RCM, LCF, CF, RCF],
        },
        Formation {
            name: "3-5-2",
            roles: [LCB, CB, RCB, LWB, RWB, LCM, CDM, RCM, LCF, RCF],
        },
        Formation {
            name: "4-2-3-1",
            roles: [LB, LCB, RCB, RB, LDM, RDM, LAM, CAM, RAM, CF],
        },
        Formation {
            name: "3-4-3",
            roles: [LCB, CB, RCB, LWB, RWB, LCM, RCM, LCF, CF, RCF],
        },
    ]
};

pub fn formation(name: &str) -> Option<&'static Formation> {
    FORMATIONS.iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for r in Role::ALL {
            assert_eq!(r.as_str().parse::<Role>().unwrap(), r);
        }
        assert!("XX".parse::<Role>().is_err());
    }

    #[test]
    fn templates_are_mirror_symmetric() {
        for r in Role::ALL {
            let p = r.template_position();
            let m = r.mirrored().template_position();
            assert_eq!(p.x, m.x, "{r}");
            assert_eq!(p.y, -m.y, "{r}");
            assert_eq!(r.mirrored().mirrored(), r);
        }
    }

    #[test]
    fn formations_are_mirror_closed() {
        for f in &FORMATIONS {
            let mut a: Vec<Role> = f.roles.to_vec();
            let mut b: Vec<Role> = f.roles.iter().map(|r| r.mirrored()).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{}", f.name);
            let c = f.centered_positions();
            let s = c.iter().fold(Vec2::ZERO, |a, &p| a + p);
            assert!(s.norm() < 1e-9);
        }
    }
}
