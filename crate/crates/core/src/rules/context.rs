use crate::config::{Config, RuleConfig};
use crate::error::{Error, Result};
use crate::geometry::{zones, Vec2, Zones};
use crate::roles::RoleTimeline;
use crate::sprint::Sprint;
use crate::tracking::{normalize, Event, Frame, PlayerId, TeamId, TrackingSequence};

/// Everything the category rows look at for one sprint, in the sprinter
/// team's attacking view.
#[derive(Debug, Clone)]
pub struct SprintContext<'a> {
    pub sprint: &'a Sprint,
    pub seq: &'a TrackingSequence,
    pub team: TeamId,
    pub opponent: TeamId,
    /// Frames over `[start, end]`, inclusive, mapped into the view.
    pub frames: Vec<Frame>,
    pub roles: Option<&'a RoleTimeline>,
    /// Events of the sprint's period near the interval, mapped into the view.
    pub events: Vec<Event>,
    pub possession_share: f64,
    pub possession_share_first_half: f64,
    pub opponent_share: f64,
    pub opponent_share_first_half: f64,
    pub rules: RuleConfig,
    pub zones: Zones,
}

/// Events this far outside the sprint interval are never relevant.
const EVENT_WINDOW: f64 = 10.0;

impl<'a> SprintContext<'a> {
    pub fn new(
        seq: &'a TrackingSequence,
        sprint: &'a Sprint,
        roles: Option<&'a RoleTimeline>,
        cfg: &Config,
    ) -> Result<Self> {
        let player = sprint.player();
        let team = seq
            .team_of(player)
            .ok_or_else(|| Error::UnknownPlayer(player.to_string()))?
            .clone();
        let opponent = seq.opponent_of(&team)?.clone();
        let view = normalize(seq, &team)?;
        let raw = seq.frames_between(sprint.period(), sprint.start_time(), sprint.end_time());
        let frames: Vec<Frame> = raw
            .iter()
            .filter(|f| f.players.contains_key(player))
            .map(|f| view.frame(f))
            .collect();
        if frames.len() < 2 {
            return Err(Error::Validation(format!(
                "sprint of {player} at {:.2}s has fewer than two frames",
                sprint.start_time()
            )));
        }
        let sign = view.sign(sprint.period());
        let (lo, hi) = (sprint.start_time() - EVENT_WINDOW, sprint.end_time() + EVENT_WINDOW);
        let events = seq
            .events
            .iter()
            .filter(|e| e.period == sprint.period() && e.end_time >= lo && e.time <= hi)
            .map(|e| {
                let mut e = e.clone();
                e.start = crate::tracking::reflect(e.start, sign);
                e.end = e.end.map(|p| crate::tracking::reflect(p, sign));
                e
            })
            .collect();
        let mid = 0.5 * (sprint.start_time() + sprint.end_time());
        let share = |t: &TeamId, first_half: bool| {
            let fs: Vec<&Frame> = frames.iter().filter(|f| !first_half || f.time <= mid + 1e-9).collect();
            fs.iter().filter(|f| f.possession_team.as_ref() == Some(t)).count() as f64 / fs.len().max(1) as f64
        };
        Ok(SprintContext {
            possession_share: share(&team, false),
            possession_share_first_half: share(&team, true),
            opponent_share: share(&opponent, false),
            opponent_share_first_half: share(&opponent, true),
            sprint,
            seq,
            team,
            opponent,
            frames,
            roles,
            events,
            rules: cfg.rules.clone(),
            zones: zones(&seq.pitch, cfg.zones.scoring_zone_depth),
        })
    }

    pub fn player(&self) -> &PlayerId {
        self.sprint.player()
    }

    pub fn first(&self) -> &Frame {
        &self.frames[0]
    }

    pub fn last(&self) -> &Frame {
        &self.frames[self.frames.len() - 1]
    }

    /// Sprinter positions, one per frame.
    pub fn path(&self) -> Vec<Vec2> {
        let p = self.player();
        self.frames.iter().map(|f| f.players[p]).collect()
    }

    pub fn start(&self) -> Vec2 {
        self.first().players[self.player()]
    }

    pub fn end(&self) -> Vec2 {
        self.last().players[self.player()]
    }

    pub fn is_teammate(&self, p: &PlayerId) -> bool {
        self.seq.team_of(p) == Some(&self.team)
    }

    pub fn is_opponent(&self, p: &PlayerId) -> bool {
        self.seq.team_of(p) == Some(&self.opponent)
    }

    /// Mean direction of travel over the last half second, m/s.
    pub fn end_velocity(&self) -> Vec2 {
        let path = self.path();
        let n = path.len();
        let k = ((0.5 * self.seq.sample_rate).round() as usize).clamp(1, n - 1);
        let dt = self.frames[n - 1].time - self.frames[n - 1 - k].time;
        (path[n - 1] - path[n - 1 - k]) / dt.max(1e-9)
    }

    /// Opponent closest to the sprinter at the end of the sprint.
    pub fn target(&self) -> Option<PlayerId> {
        let end = self.end();
        self.last()
            .players
            .iter()
            .filter(|(p, _)| self.is_opponent(p))
            .min_by(|a, b| a.1.dist(end).total_cmp(&b.1.dist(end)).then(a.0.cmp(b.0)))
            .map(|(p, _)| p.clone())
    }

    /// Sprinter-to-`other` distance in every frame where both are present.
    pub fn distances_to(&self, other: &PlayerId) -> Vec<f64> {
        let p = self.player();
        self.frames
            .iter()
            .filter_map(|f| Some(f.players[p].dist(*f.players.get(other)?)))
            .collect()
    }

    /// Team centroid at the first and last frame, over players present in
    /// both.
    pub fn team_centroid_samples(&self) -> Vec<(f64, Vec2)> {
        let (a, b) = (self.first(), self.last());
        let common: Vec<&PlayerId> = a
            .players
            .keys()
            .filter(|p| self.is_teammate(p) && b.players.contains_key(*p))
            .collect();
        if common.is_empty() {
            return Vec::new();
        }
        let c = |f: &Frame| common.iter().fold(Vec2::ZERO, |s, p| s + f.players[*p]) / common.len() as f64;
        vec![(a.time, c(a)), (b.time, c(b))]
    }

    pub fn sprinter_samples(&self) -> Vec<(f64, Vec2)> {
        let p = self.player();
        self.frames.iter().map(|f| (f.time, f.players[p])).collect()
    }
}
