use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tracking::{check_header, csv_error, csv_reader, csv_writer, field, PlayerId, TeamId};

use super::role::Role;

const ROLES_HEADER: [&str; 6] = ["period", "start_s", "end_s", "team_id", "player_id", "role_code"];
const EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleInterval {
    pub period: u8,
    pub start: f64,
    pub end: f64,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRoles {
    pub team: TeamId,
    pub intervals: Vec<RoleInterval>,
}

/// Role intervals per player, sorted by (period, start).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoleTimeline {
    players: BTreeMap<PlayerId, PlayerRoles>,
}

impl RoleTimeline {
    /// Validates and sorts. Within a period a player's intervals must be
    /// contiguous and non-overlapping, and no two players of a team may hold
    /// the same role at the same instant.
    pub fn new(players: BTreeMap<PlayerId, PlayerRoles>) -> Result<Self> {
        let mut players = players;
        for (pid, pr) in players.iter_mut() {
            pr.intervals
                .sort_by(|a, b| a.period.cmp(&b.period).then(a.start.total_cmp(&b.start)));
            for iv in &pr.intervals {
                if !(iv.end > iv.start) {
                    return Err(Error::Validation(format!(
                        "player {pid}: empty role interval [{}, {}] in period {}",
                        iv.start, iv.end, iv.period
                    )));
                }
            }
            for w in pr.intervals.windows(2) {
                let (a, b) = (w[0], w[1]);
                if a.period != b.period {
                    continue;
                }
                if b.start < a.end - EPS {
                    return Err(Error::Validation(format!(
                        "player {pid}: role intervals overlap at {}..{} in period {}",
                        b.start, a.end, a.period
                    )));
                }
                if b.start > a.end + EPS {
                    return Err(Error::Validation(format!(
                        "player {pid}: role gap between {} and {} in period {}",
                        a.end, b.start, a.period
                    )));
                }
            }
        }
        let timeline = RoleTimeline { players };
        timeline.check_distinct()?;
        Ok(timeline)
    }

    fn check_distinct(&self) -> Result<()> {
        // Group intervals by (team, period) and test every elementary
        // stretch between interval boundaries.
        let mut groups: BTreeMap<(&TeamId, u8), Vec<(&PlayerId, &RoleInterval)>> = BTreeMap::new();
        for (pid, pr) in &self.players {
            for iv in &pr.intervals {
                groups.entry((&pr.team, iv.period)).or_default().push((pid, iv));
            }
        }
        for ((team, period), ivs) in groups {
            let mut cuts: Vec<f64> = ivs.iter().flat_map(|(_, iv)| [iv.start, iv.end]).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < EPS);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let mut seen: BTreeMap<Role, &PlayerId> = BTreeMap::new();
                for (pid, iv) in &ivs {
                    if iv.start <= mid && mid < iv.end {
                        if let Some(other) = seen.insert(iv.role, pid) {
                            return Err(Error::Validation(format!(
                                "team {team}: players {other} and {pid} both hold {} at t={mid:.3} in period {period}",
                                iv.role
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn players(&self) -> impl Iterator<Item = (&PlayerId, &PlayerRoles)> {
        self.players.iter()
    }

    pub fn get(&self, player: &PlayerId) -> Option<&PlayerRoles> {
        self.players.get(player)
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    /// Union of two timelines over disjoint players.
    pub fn merged(&self, other: &RoleTimeline) -> Result<RoleTimeline> {
        let mut players = self.players.clone();
        for (pid, pr) in &other.players {
            if players.insert(pid.clone(), pr.clone()).is_some() {
                return Err(Error::Validation(format!("player {pid} appears in both timelines")));
            }
        }
        RoleTimeline::new(players)
    }

    /// Timeline with every role mirrored left/right.
    pub fn mirrored(&self) -> RoleTimeline {
        let mut out = self.clone();
        for pr in out.players.values_mut() {
            for iv in &mut pr.intervals {
                iv.role = iv.role.mirrored();
            }
        }
        out
    }
}

/// Role of `player` at time `t` in `period`.
///
/// Intervals are half-open, so a boundary instant belongs to the later
/// interval; the player's last interval in a period also includes its end.
pub fn momentary_role(timeline: &RoleTimeline, player: &PlayerId, period: u8, t: f64) -> Result<Role> {
    let pr = timeline
        .players
        .get(player)
        .ok_or_else(|| Error::UnknownPlayer(player.to_string()))?;
    let ivs = &pr.intervals;
    let lo = ivs.partition_point(|iv| iv.period < period);
    let hi = ivs.partition_point(|iv| iv.period <= period);
    let in_period = &ivs[lo..hi];
    // Last interval whose start is <= t.
    let k = in_period.partition_point(|iv| iv.start <= t + 1e-9);
    if k > 0 {
        let iv = &in_period[k - 1];
        let last = k == in_period.len();
        if t < iv.end - 1e-9 || (last && t <= iv.end + 1e-9) {
            return Ok(iv.role);
        }
    }
    Err(Error::RolesUnavailable(format!(
        "no role for {player} at t={t} in period {period}"
    )))
}

pub fn load_roles(path: &Path) -> Result<RoleTimeline> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &ROLES_HEADER)?;
    let mut players: BTreeMap<PlayerId, PlayerRoles> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let period: u8 = field(path, &rec, 0, "period")?;
        let start: f64 = field(path, &rec, 1, "start_s")?;
        let end: f64 = field(path, &rec, 2, "end_s")?;
        let team: String = field(path, &rec, 3, "team_id")?;
        let player: String = field(path, &rec, 4, "player_id")?;
        let code: String = field(path, &rec, 5, "role_code")?;
        let role: Role = code
            .parse()
            .map_err(|e: Error| Error::parse(path, format!("line {line}"), e.to_string()))?;
        let team = TeamId::new(team);
        let entry = players.entry(PlayerId::new(player.clone())).or_insert_with(|| PlayerRoles {
            team: team.clone(),
            intervals: Vec::new(),
        });
        if entry.team != team {
            return Err(Error::parse(
                path,
                format!("line {line}"),
                format!("player {player} listed for teams {} and {team}", entry.team),
            ));
        }
        entry.intervals.push(RoleInterval { period, start, end, role });
    }
    RoleTimeline::new(players)
}

pub fn write_roles(path: &Path, timeline: &RoleTimeline) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_error(path, e);
    w.write_record(ROLES_HEADER).map_err(err)?;
    for (pid, pr) in &timeline.players {
        for iv in &pr.intervals {
            w.write_record([
                iv.period.to_string(),
                format!("{:.3}", iv.start),
                format!("{:.3}", iv.end),
                pr.team.to_string(),
                pid.to_string(),
                iv.role.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::write_text;

    fn write(contents: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roles.csv");
        write_text(&path, contents).unwrap();
        (dir, path)
    }

    const HEADER: &str = "period,start_s,end_s,team_id,player_id,role_code\n";

    #[test]
    fn single_interval_is_accepted() {
        let (_d, p) = write(&format!("{HEADER}1,0,2700,A,a7,LM\n"));
        let t = load_roles(&p).unwrap();
        assert_eq!(momentary_role(&t, &PlayerId::new("a7"), 1, 1000.0).unwrap(), Role::LM);
    }

    #[test]
    fn overlap_is_rejected() {
        let (_d, p) = write(&format!("{HEADER}1,0,100,A,a7,LM\n1,90,200,A,a7,RM\n"));
        let msg = load_roles(&p).unwrap_err().to_string();
        assert!(msg.contains("a7") && msg.contains("overlap"), "{msg}");
    }

    #[test]
    fn gap_is_rejected() {
        let (_d, p) = write(&format!("{HEADER}1,0,100,A,a7,LM\n1,110,200,A,a7,RM\n"));
        assert!(load_roles(&p).unwrap_err().to_string().contains("gap"));
    }

    #[test]
    fn eleven_distinct_roles_accepted_duplicates_rejected() {
        let roles = ["GK", "LB", "LCB", "RCB", "RB", "LM", "LCM", "RCM", "RM", "LCF", "RCF"];
        let mut text = HEADER.to_string();
        for (i, r) in roles.iter().enumerate() {
            text.push_str(&format!("1,0,600,A,a{i},{r}\n"));
        }
        let (_d, p) = write(&text);
        assert!(load_roles(&p).is_ok());
        let (_d2, p2) = write(&text.replace("a10,RCF", "a10,LCF"));
        assert!(load_roles(&p2).unwrap_err().to_string().contains("LCF"));
    }

    #[test]
    fn unknown_code_reports_line() {
        let (_d, p) = write(&format!("{HEADER}1,0,100,A,a7,XYZ\n"));
        assert!(load_roles(&p).unwrap_err().to_string().contains("line 2"));
    }

    #[test]
    fn boundary_belongs_to_later_interval() {
        let (_d, p) = write(&format!("{HEADER}1,0,300,A,a7,LM\n1,300,600,A,a7,LCM\n"));
        let t = load_roles(&p).unwrap();
        let a7 = PlayerId::new("a7");
        assert_eq!(momentary_role(&t, &a7, 1, 150.0).unwrap(), Role::LM);
        assert_eq!(momentary_role(&t, &a7, 1, 300.0).unwrap(), Role::LCM);
        assert_eq!(momentary_role(&t, &a7, 1, 600.0).unwrap(), Role::LCM);
        assert!(momentary_role(&t, &a7, 1, 600.5).is_err());
        assert!(momentary_role(&t, &a7, 2, 10.0).is_err());
        assert!(matches!(
            momentary_role(&t, &PlayerId::new("zz"), 1, 10.0),
            Err(Error::UnknownPlayer(_))
        ));
    }

    #[test]
    fn write_then_load_round_trips() {
        let (_d, p) = write(&format!("{HEADER}1,0,300,A,a7,LM\n1,300,600,A,a7,LCM\n2,0,50,B,b2,CB\n"));
        let t = load_roles(&p).unwrap();
        write_roles(&p, &t).unwrap();
        assert_eq!(load_roles(&p).unwrap(), t);
    }
}
