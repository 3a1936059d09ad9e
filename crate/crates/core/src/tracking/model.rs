use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Slack allowed outside the touch and end lines, m.
pub const PITCH_MARGIN: f64 = 5.0;
/// Tolerance when checking frame spacing, s.
pub(crate) const TIME_EPS: f64 = 5e-4;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TeamId(pub String);

impl PlayerId {
    pub fn new(id: impl Into<String>) -> Self {
        PlayerId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TeamId {
    pub fn new(id: impl Into<String>) -> Self {
        TeamId(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Pitch dimensions, origin at the center spot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Pitch {
    pub length: f64,
    pub width: f64,
    pub penalty_box_depth: f64,
    pub penalty_box_half_width: f64,
    pub goal_half_width: f64,
}

impl Default for Pitch {
    fn default() -> Self {
        Pitch {
            length: 105.0,
            width: 68.0,
            penalty_box_depth: 16.5,
            penalty_box_half_width: 20.16,
            goal_half_width: 3.66,
        }
    }
}

impl Pitch {
    pub fn half_length(&self) -> f64 {
        self.length / 2.0
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0) {
            return Err(Error::Validation("pitch length and width must be positive".into()));
        }
        if self.penalty_box_half_width >= self.width / 2.0 {
            return Err(Error::Validation(
                "penalty_box_half_width must be smaller than width/2".into(),
            ));
        }
        Ok(())
    }

    pub fn contains_with_margin(&self, p: Vec2) -> bool {
        p.x.abs() <= self.half_length() + PITCH_MARGIN && p.y.abs() <= self.half_width() + PITCH_MARGIN
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub period: u8,
    /// Seconds from the start of the period.
    pub time: f64,
    /// Players on the pitch; absent players are simply missing.
    pub players: BTreeMap<PlayerId, Vec2>,
    pub ball: Vec2,
    pub possession_team: Option<TeamId>,
    pub possessor: Option<PlayerId>,
}

impl Frame {
    pub fn position(&self, player: &PlayerId) -> Option<Vec2> {
        self.players.get(player).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackDirection {
    #[serde(rename = "+x")]
    PositiveX,
    #[serde(rename = "-x")]
    NegativeX,
}

impl AttackDirection {
    pub fn sign(self) -> f64 {
        match self {
            AttackDirection::PositiveX => 1.0,
            AttackDirection::NegativeX => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            AttackDirection::PositiveX => AttackDirection::NegativeX,
            AttackDirection::NegativeX => AttackDirection::PositiveX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackEntry {
    pub team_id: TeamId,
    pub period: u8,
    pub direction: AttackDirection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub player_id: PlayerId,
    #[serde(default)]
    pub goalkeeper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roster {
    pub team_id: TeamId,
    pub players: Vec<RosterEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Pass,
    Cross,
    Reception,
    Tackle,
    Clearance,
    Shot,
    Pause,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::Pass,
        EventKind::Cross,
        EventKind::Reception,
        EventKind::Tackle,
        EventKind::Clearance,
        EventKind::Shot,
        EventKind::Pause,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Pass => "pass",
            EventKind::Cross => "cross",
            EventKind::Reception => "reception",
            EventKind::Tackle => "tackle",
            EventKind::Clearance => "clearance",
            EventKind::Shot => "shot",
            EventKind::Pause => "pause",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        EventKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Passes and crosses travel between two points.
    pub fn is_ball_transfer(self) -> bool {
        matches!(self, EventKind::Pass | EventKind::Cross)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub period: u8,
    pub time: f64,
    pub end_time: f64,
    pub kind: EventKind,
    pub team: TeamId,
    pub actor: PlayerId,
    pub target: Option<PlayerId>,
    pub start: Vec2,
    pub end: Option<Vec2>,
}

impl Event {
    pub fn validate(&self) -> Result<()> {
        if self.end_time < self.time {
            return Err(Error::Validation(format!(
                "event at {:.3}s ends before it starts",
                self.time
            )));
        }
        if self.kind.is_ball_transfer() && self.end.is_none() {
            return Err(Error::Validation(format!(
                "{} event at {:.3}s needs an end point",
                self.kind.as_str(),
                self.time
            )));
        }
        Ok(())
    }
}

/// A full match (or fragment) of tracking data. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence", into = "RawSequence")]
pub struct TrackingSequence {
    pub pitch: Pitch,
    pub sample_rate: f64,
    pub teams: Vec<Roster>,
    pub attack_direction: Vec<AttackEntry>,
    pub frames: Vec<Frame>,
    pub events: Vec<Event>,
    player_team: BTreeMap<PlayerId, TeamId>,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    pitch: Pitch,
    sample_rate: f64,
    teams: Vec<Roster>,
    attack_direction: Vec<AttackEntry>,
    frames: Vec<Frame>,
    #[serde(default)]
    events: Vec<Event>,
}

impl TryFrom<RawSequence> for TrackingSequence {
    type Error = Error;
    fn try_from(raw: RawSequence) -> Result<Self> {
        TrackingSequence::new(
            raw.pitch,
            raw.sample_rate,
            raw.teams,
            raw.attack_direction,
            raw.frames,
            raw.events,
        )
    }
}

impl From<TrackingSequence> for RawSequence {
    fn from(s: TrackingSequence) -> Self {
        RawSequence {
            pitch: s.pitch,
            sample_rate: s.sample_rate,
            teams: s.teams,
            attack_direction: s.attack_direction,
            frames: s.frames,
            events: s.events,
        }
    }
}

impl TrackingSequence {
    /// Builds and validates a sequence.
    pub fn new(
        pitch: Pitch,
        sample_rate: f64,
        teams: Vec<Roster>,
        attack_direction: Vec<AttackEntry>,
        frames: Vec<Frame>,
        mut events: Vec<Event>,
    ) -> Result<Self> {
        pitch.validate()?;
        if !(sample_rate > 0.0) {
            return Err(Error::Validation("sample_rate must be positive".into()));
        }
        if teams.len() != 2 {
            return Err(Error::Validation(format!(
                "expected two team rosters, got {}",
                teams.len()
            )));
        }
        if teams[0].team_id == teams[1].team_id {
            return Err(Error::Validation("both rosters use the same team id".into()));
        }
        let mut player_team = BTreeMap::new();
        for roster in &teams {
            for entry in &roster.players {
                if let Some(other) = player_team.insert(entry.player_id.clone(), roster.team_id.clone())
                {
                    return Err(Error::Validation(format!(
                        "player {} appears in rosters of both {} and {}",
                        entry.player_id, other, roster.team_id
                    )));
                }
            }
        }
        events.sort_by(|a, b| {
            (a.period, a.time)
                .partial_cmp(&(b.period, b.time))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let seq = TrackingSequence {
            pitch,
            sample_rate,
            teams,
            attack_direction,
            frames,
            events,
            player_team,
        };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        let dt = 1.0 / self.sample_rate;
        for (i, f) in self.frames.iter().enumerate() {
            if f.period == 0 {
                return Err(Error::Validation(format!("frame {i}: period must be >= 1")));
            }
            if let Some(prev) = i.checked_sub(1).map(|j| &self.frames[j]) {
                if (f.period, f.time) <= (prev.period, prev.time) {
                    return Err(Error::Validation(format!(
                        "frame {i}: frames must be strictly increasing in (period, time)"
                    )));
                }
                if f.period == prev.period && ((f.time - prev.time) - dt).abs() > TIME_EPS {
                    return Err(Error::Validation(format!(
                        "frame {i}: spacing {:.4}s differs from 1/sample_rate",
                        f.time - prev.time
                    )));
                }
            }
            if !self.pitch.contains_with_margin(f.ball) || !f.ball.is_finite() {
                return Err(Error::Validation(format!(
                    "frame {i}: ball outside pitch bounds plus margin"
                )));
            }
            for (pid, p) in &f.players {
                if !self.player_team.contains_key(pid) {
                    return Err(Error::Validation(format!(
                        "frame {i}: player {pid} not in any roster"
                    )));
                }
                if !self.pitch.contains_with_margin(*p) || !p.is_finite() {
                    return Err(Error::Validation(format!(
                        "frame {i}: player {pid} outside pitch bounds plus margin"
                    )));
                }
            }
            if let Some(t) = &f.possession_team {
                if !self.teams.iter().any(|r| &r.team_id == t) {
                    return Err(Error::Validation(format!("frame {i}: unknown possession team {t}")));
                }
            }
            if let Some(p) = &f.possessor {
                match (&f.possession_team, self.player_team.get(p)) {
                    (Some(t), Some(pt)) if t == pt => {}
                    _ => {
                        return Err(Error::Validation(format!(
                            "frame {i}: possessor {p} does not belong to possession team"
                        )))
                    }
                }
            }
        }
        for (team, period) in self.periods().into_iter().flat_map(|p| {
            self.teams.iter().map(move |r| (r.team_id.clone(), p))
        }) {
            if self.direction(&team, period).is_none() {
                return Err(Error::Validation(format!(
                    "attack direction missing for team {team} in period {period}"
                )));
            }
        }
        for e in &self.events {
            e.validate()?;
            if !self.teams.iter().any(|r| r.team_id == e.team) {
                return Err(Error::Validation(format!("event team {} unknown", e.team)));
            }
        }
        Ok(())
    }

    pub fn team_ids(&self) -> [&TeamId; 2] {
        [&self.teams[0].team_id, &self.teams[1].team_id]
    }

    pub fn team_of(&self, player: &PlayerId) -> Option<&TeamId> {
        self.player_team.get(player)
    }

    pub fn opponent_of(&self, team: &TeamId) -> Result<&TeamId> {
        let [a, b] = self.team_ids();
        if team == a {
            Ok(b)
        } else if team == b {
            Ok(a)
        } else {
            Err(Error::UnknownTeam(team.to_string()))
        }
    }

    pub fn roster(&self, team: &TeamId) -> Result<&Roster> {
        self.teams
            .iter()
            .find(|r| &r.team_id == team)
            .ok_or_else(|| Error::UnknownTeam(team.to_string()))
    }

    pub fn is_goalkeeper(&self, player: &PlayerId) -> bool {
        self.teams
            .iter()
            .flat_map(|r| r.players.iter())
            .any(|e| &e.player_id == player && e.goalkeeper)
    }

    pub fn direction(&self, team: &TeamId, period: u8) -> Option<AttackDirection> {
        self.attack_direction
            .iter()
            .find(|e| &e.team_id == team && e.period == period)
            .map(|e| e.direction)
    }

    /// Distinct periods in frame order.
    pub fn periods(&self) -> Vec<u8> {
        let mut out: Vec<u8> = Vec::new();
        for f in &self.frames {
            if out.last() != Some(&f.period) {
                out.push(f.period);
            }
        }
        out
    }

    /// Index range of the frames of one period.
    pub fn period_range(&self, period: u8) -> std::ops::Range<usize> {
        let start = self.frames.partition_point(|f| f.period < period);
        let end = self.frames.partition_point(|f| f.period <= period);
        start..end
    }

    /// Frames of `period` with `t0 <= time <= t1` (with sampling tolerance).
    pub fn frames_between(&self, period: u8, t0: f64, t1: f64) -> &[Frame] {
        let range = self.period_range(period);
        let frames = &self.frames[range];
        let lo = frames.partition_point(|f| f.time < t0 - TIME_EPS);
        let hi = frames.partition_point(|f| f.time <= t1 + TIME_EPS);
        &frames[lo..hi.max(lo)]
    }

    /// Last frame time of a period, if it has frames.
    pub fn period_end(&self, period: u8) -> Option<f64> {
        let r = self.period_range(period);
        (!r.is_empty()).then(|| self.frames[r.end - 1].time)
    }

    pub fn player_ids(&self) -> impl Iterator<Item = &PlayerId> {
        self.player_team.keys()
    }

    /// Returns a copy with replaced frames, keeping metadata and events.
    pub fn with_frames(&self, frames: Vec<Frame>) -> Result<Self> {
        TrackingSequence::new(
            self.pitch,
            self.sample_rate,
            self.teams.clone(),
            self.attack_direction.clone(),
            frames,
            self.events.clone(),
        )
    }

    pub fn with_events(&self, events: Vec<Event>) -> Result<Self> {
        TrackingSequence::new(
            self.pitch,
            self.sample_rate,
            self.teams.clone(),
            self.attack_direction.clone(),
            self.frames.clone(),
            events,
        )
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn roster(team: &str, ids: &[&str]) -> Roster {
        Roster {
            team_id: TeamId::new(team),
            players: ids
                .iter()
                .enumerate()
                .map(|(i, id)| RosterEntry {
                    player_id: PlayerId::new(*id),
                    goalkeeper: i == 0,
                })
                .collect(),
        }
    }

    pub fn directions(periods: &[u8]) -> Vec<AttackEntry> {
        periods
            .iter()
            .flat_map(|&p| {
                let a = if p % 2 == 1 {
                    AttackDirection::PositiveX
                } else {
                    AttackDirection::NegativeX
                };
                [
                    AttackEntry {
                        team_id: TeamId::new("A"),
                        period: p,
                        direction: a,
                    },
                    AttackEntry {
                        team_id: TeamId::new("B"),
                        period: p,
                        direction: a.flipped(),
                    },
                ]
            })
            .collect()
    }

    pub fn frame(period: u8, time: f64, players: &[(&str, f64, f64)], ball: (f64, f64)) -> Frame {
        Frame {
            period,
            time,
            players: players
                .iter()
                .map(|(id, x, y)| (PlayerId::new(*id), Vec2::new(*x, *y)))
                .collect(),
            ball: Vec2::new(ball.0, ball.1),
            possession_team: None,
            possessor: None,
        }
    }
}
