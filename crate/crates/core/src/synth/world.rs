//! Scripted trajectories and their materialization into frames.

use std::collections::BTreeMap;

use crate::geometry::Vec2;
use crate::tracking::{Event, EventKind, Frame, PlayerId, TeamId};

/// Sprinter speed profile (km/h): a decline from `v_start` to `v_min` over
/// `lead`, a sin² hump up to `v_peak` and back over `duration`, then a rise
/// to `v_after` over `tail_ramp`, held until the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedProfile {
    pub v_start: f64,
    pub v_min: f64,
    pub v_peak: f64,
    pub v_after: f64,
    pub lead: f64,
    pub duration: f64,
    pub tail_ramp: f64,
    pub tail_hold: f64,
}

impl SpeedProfile {
    pub fn new(v_peak: f64, duration: f64) -> Self {
        SpeedProfile {
            v_start: 10.0,
            v_min: 4.0,
            v_peak,
            v_after: 9.0,
            lead: 2.0,
            duration,
            tail_ramp: 2.0,
            tail_hold: 2.0,
        }
    }

    pub fn sprint_start(&self) -> f64 {
        self.lead
    }

    pub fn sprint_end(&self) -> f64 {
        self.lead + self.duration
    }

    pub fn total_time(&self) -> f64 {
        self.lead + self.duration + self.tail_ramp + self.tail_hold
    }

    /// Speed at `t`, km/h.
    pub fn speed(&self, t: f64) -> f64 {
        let (a, b, c) = (self.lead, self.sprint_end(), self.sprint_end() + self.tail_ramp);
        if t <= a {
            self.v_start + (self.v_min - self.v_start) * t.max(0.0) / a
        } else if t <= b {
            let s = (std::f64::consts::PI * (t - a) / self.duration).sin();
            self.v_min + (self.v_peak - self.v_min) * s * s
        } else if t <= c {
            self.v_min + (self.v_after - self.v_min) * (t - b) / self.tail_ramp
        } else {
            self.v_after
        }
    }

    /// Distance covered since t = 0, m.
    pub fn distance(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let (a, b, c) = (self.lead, self.sprint_end(), self.sprint_end() + self.tail_ramp);
        let lead = |u: f64| self.v_start * u + (self.v_min - self.v_start) * u * u / (2.0 * a);
        let hump = |u: f64| {
            let w = std::f64::consts::PI / self.duration;
            self.v_min * u + (self.v_peak - self.v_min) * (u / 2.0 - (2.0 * w * u).sin() / (4.0 * w))
        };
        let ramp = |u: f64| self.v_min * u + (self.v_after - self.v_min) * u * u / (2.0 * self.tail_ramp);
        let km_h_s = if t <= a {
            lead(t)
        } else if t <= b {
            lead(a) + hump(t - a)
        } else if t <= c {
            lead(a) + hump(self.duration) + ramp(t - b)
        } else {
            lead(a) + hump(self.duration) + ramp(self.tail_ramp) + self.v_after * (t - c)
        };
        km_h_s / 3.6
    }

    /// Length of the sprint itself, m.
    pub fn sprint_length(&self) -> f64 {
        self.distance(self.sprint_end()) - self.distance(self.sprint_start())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Track {
    Static(Vec2),
    /// `p0 + v * t`
    Linear { p0: Vec2, v: Vec2 },
    /// Still at `from` until `t0`, moves linearly to `to` by `t1`, then still.
    Move { from: Vec2, to: Vec2, t0: f64, t1: f64 },
    /// Along `dir` through `at` (reached at the sprint start), following
    /// the profile.
    Sprint { at: Vec2, dir: Vec2, profile: SpeedProfile },
}

impl Track {
    pub fn position(&self, t: f64) -> Vec2 {
        match self {
            Track::Static(p) => *p,
            Track::Linear { p0, v } => *p0 + *v * t,
            Track::Move { from, to, t0, t1 } => {
                let u = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                from.lerp(*to, u)
            }
            Track::Sprint { at, dir, profile } => {
                *at + *dir * (profile.distance(t) - profile.distance(profile.sprint_start()))
            }
        }
    }

    /// Shifts the whole track by `d`.
    pub fn shifted(&self, d: Vec2) -> Track {
        match self {
            Track::Static(p) => Track::Static(*p + d),
            Track::Linear { p0, v } => Track::Linear { p0: *p0 + d, v: *v },
            Track::Move { from, to, t0, t1 } => Track::Move {
                from: *from + d,
                to: *to + d,
                t0: *t0,
                t1: *t1,
            },
            Track::Sprint { at, dir, profile } => Track::Sprint {
                at: *at + d,
                dir: *dir,
                profile: *profile,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BallState {
    Held(PlayerId),
    /// In flight from one player to another.
    Pass { from: PlayerId, to: PlayerId, kind: EventKind },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallSpan {
    pub t0: f64,
    pub t1: f64,
    pub state: BallState,
}

/// A scripted scene in the attacking view of team A.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct World {
    pub tracks: BTreeMap<PlayerId, Track>,
    pub team_of: BTreeMap<PlayerId, TeamId>,
    /// Consecutive, covering the whole scene.
    pub ball: Vec<BallSpan>,
}

impl World {
    pub fn pos(&self, p: &PlayerId, t: f64) -> Vec2 {
        self.tracks[p].position(t)
    }

    fn ball_at(&self, t: f64) -> (Vec2, Option<TeamId>, Option<PlayerId>) {
        let span = self
            .ball
            .iter()
            .find(|s| t >= s.t0 - 1e-9 && t < s.t1 - 1e-9)
            .or(self.ball.last())
            .expect("ball script is not empty");
        match &span.state {
            BallState::Held(p) => (self.pos(p, t), Some(self.team_of[p].clone()), Some(p.clone())),
            BallState::Pass { from, to, .. } => {
                let a = self.pos(from, span.t0);
                let b = self.pos(to, span.t1);
                let u = ((t - span.t0) / (span.t1 - span.t0)).clamp(0.0, 1.0);
                (a.lerp(b, u), Some(self.team_of[from].clone()), None)
            }
        }
    }

    /// Frames at `rate` Hz over `[0, total]`, in view coordinates.
    pub fn frames(&self, total: f64, rate: f64) -> Vec<Frame> {
        let n = (total * rate).round() as usize;
        (0..=n)
            .map(|k| {
                let t = k as f64 / rate;
                let (ball, team, possessor) = self.ball_at(t);
                Frame {
                    period: 1,
                    time: (t * 1e6).round() / 1e6,
                    players: self.tracks.iter().map(|(p, tr)| (p.clone(), tr.position(t))).collect(),
                    ball,
                    possession_team: team,
                    possessor,
                }
            })
            .collect()
    }

    /// One event per scripted pass or cross, plus a reception whenever a
    /// player starts holding the ball. View coordinates.
    pub fn events(&self) -> Vec<Event> {
        self.ball
            .iter()
            .filter_map(|s| match &s.state {
                BallState::Pass { from, to, kind } => Some(Event {
                    period: 1,
                    time: s.t0,
                    end_time: s.t1,
                    kind: *kind,
                    team: self.team_of[from].clone(),
                    actor: from.clone(),
                    target: Some(to.clone()),
                    start: self.pos(from, s.t0),
                    end: Some(self.pos(to, s.t1)),
                }),
                BallState::Held(holder) => Some(Event {
                    period: 1,
                    time: s.t0,
                    end_time: s.t0,
                    kind: EventKind::Reception,
                    team: self.team_of[holder].clone(),
                    actor: holder.clone(),
                    target: None,
                    start: self.pos(holder, s.t0),
                    end: None,
                }),
            })
            .collect()
    }
}
