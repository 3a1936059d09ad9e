//! One scripted layout per category, in team A's attacking view (A attacks
//! +x, its left flank is +y). Team A plays 4-3-3 and team B 4-4-2. The
//! sprinter is always on A.
//!
//! Every layout keeps its deciding quantities well inside the rule
//! thresholds for the documented jitter ranges; the inline notes give the
//! margins at the extremes of the sprint length (about 15.6 to 23.6 m).

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Vec2;
use crate::roles::{formation, Role};
use crate::rules::SprintCategory;
use crate::tracking::{EventKind, PlayerId, TeamId};

use super::world::{BallSpan, BallState, SpeedProfile, Track, World};
use super::ScenarioParams;

pub(crate) const A_FORMATION: &str = "4-3-3";
pub(crate) const B_FORMATION: &str = "4-4-2";

pub(crate) struct Builder {
    pub world: World,
    pub profile: SpeedProfile,
    pub a: BTreeMap<Role, PlayerId>,
    pub b: BTreeMap<Role, PlayerId>,
    pub sprinter: Option<PlayerId>,
    rng: ChaCha8Rng,
    anchor_jitter: f64,
}

fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

fn jitter(rng: &mut ChaCha8Rng, amp: f64) -> Vec2 {
    if amp <= 0.0 {
        return Vec2::ZERO;
    }
    v(rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp))
}

impl Builder {
    /// Both teams standing at their template positions. `a_center` is A's
    /// outfield centroid x in A's view; `b_center` is B's in B's own view.
    pub fn new(params: &ScenarioParams, mut rng: ChaCha8Rng, a_center: f64, b_center: f64) -> Self {
        let mut world = World::default();
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (team, name, center, sign, roles) in [
            ("A", A_FORMATION, a_center, 1.0, &mut a),
            ("B", B_FORMATION, b_center, -1.0, &mut b),
        ] {
            let f = formation(name).expect("catalog formation");
            let gk = PlayerId::new(format!("{team}1"));
            let gk_pos = v(center - 40.0, 0.0);
            roles.insert(Role::GK, gk.clone());
            world.tracks.insert(gk.clone(), Track::Static(gk_pos * sign));
            world.team_of.insert(gk, TeamId::new(team));
            for (i, (role, p)) in f.roles.iter().zip(f.centered_positions()).enumerate() {
                let id = PlayerId::new(format!("{team}{}", i + 2));
                let pos = (v(center, 0.0) + p) * sign + jitter(&mut rng, params.background_jitter);
                roles.insert(*role, id.clone());
                world.tracks.insert(id.clone(), Track::Static(pos));
                world.team_of.insert(id, TeamId::new(team));
            }
        }
        Builder {
            world,
            profile: SpeedProfile::new(params.peak_speed, params.duration),
            a,
            b,
            sprinter: None,
            rng,
            anchor_jitter: params.anchor_jitter,
        }
    }

    pub fn a(&self, r: Role) -> PlayerId {
        self.a[&r].clone()
    }

    pub fn b(&self, r: Role) -> PlayerId {
        self.b[&r].clone()
    }

    /// A key position with the (smaller) anchor jitter applied.
    pub fn anchor(&mut self, x: f64, y: f64) -> Vec2 {
        v(x, y) + jitter(&mut self.rng, self.anchor_jitter)
    }

    pub fn put(&mut self, p: &PlayerId, at: Vec2) {
        self.world.tracks.insert(p.clone(), Track::Static(at));
    }

    pub fn set(&mut self, p: &PlayerId, track: Track) {
        self.world.tracks.insert(p.clone(), track);
    }

    pub fn length(&self) -> f64 {
        self.profile.sprint_length()
    }

    pub fn sprint_from(&mut self, p: &PlayerId, start: Vec2, dir: Vec2) {
        let dir = dir / dir.norm();
        self.sprinter = Some(p.clone());
        self.set(p, Track::Sprint { at: start, dir, profile: self.profile });
    }

    pub fn sprint_to(&mut self, p: &PlayerId, end: Vec2, dir: Vec2) {
        let dir = dir / dir.norm();
        let start = end - dir * self.length();
        self.sprint_from(p, start, dir);
    }

    pub fn hold(&mut self, p: &PlayerId) {
        self.world.ball = vec![BallSpan {
            t0: 0.0,
            t1: f64::INFINITY,
            state: BallState::Held(p.clone()),
        }];
    }

    /// Team A, except the goalkeeper and `except`, moves at `vel` (m/s).
    pub fn drift_a(&mut self, vel: Vec2, except: &[PlayerId]) {
        let gk = self.a(Role::GK);
        for (p, tr) in self.world.tracks.iter_mut() {
            if self.world.team_of[p].as_str() != "A" || *p == gk || except.contains(p) {
                continue;
            }
            if let Track::Static(p0) = tr {
                *tr = Track::Linear { p0: *p0, v: vel };
            }
        }
    }
}

const KMH: f64 = 1.0 / 3.6;

/// Builds the layout for `cat`. `None` is the noise-only scene.
pub(crate) fn build(cat: Option<SprintCategory>, params: &ScenarioParams, rng: ChaCha8Rng) -> Builder {
    use SprintCategory::*;
    // Outfield centroids: A's in its own view, B's in B's view.
    let (a_center, b_center) = match cat {
        Some(PRS | COV | REC | INT | CTO) => (-10.0, 10.0),
        Some(PUP) => (-10.0, -10.0),
        _ => (0.0, -10.0),
    };
    let mut s = Builder::new(params, rng, a_center, b_center);
    let Some(cat) = cat else {
        noise(&mut s);
        return s;
    };
    match cat {
        RWB => {
            // Sprinter carries the ball for the whole scene.
            let p = s.a(Role::LCM);
            let start = s.anchor(-12.0, 12.0);
            s.sprint_from(&p, start, v(1.0, 0.0));
            s.hold(&p);
        }
        BIB => {
            // Ends at x 38.9..46.6, |y| < 6: inside the box. The left back
            // holds the ball on the flank at y = 28.
            let p = s.a(Role::LCF);
            let start = s.anchor(24.0, 10.0);
            s.sprint_from(&p, start, v(1.0, -0.3));
            let carrier = s.a(Role::LB);
            let at = s.anchor(28.0, 28.0);
            s.put(&carrier, at);
            s.hold(&carrier);
        }
        PEN => {
            // Ends at x = 31 on the axis: behind B's centre backs (x = 24),
            // short of the box (x = 36), inside the scoring zone, and only
            // B's goalkeeper is between the sprinter and the goal.
            let p = s.a(Role::CF);
            let end = s.anchor(31.0, 0.0);
            s.sprint_to(&p, end, v(1.0, 0.0));
            let carrier = s.a(Role::CM);
            let at = s.anchor(0.0, 0.0);
            s.put(&carrier, at);
            s.hold(&carrier);
        }
        EXS => {
            // Forward run in the own half, starting 10 m ahead of the ball
            // held by the goalkeeper. Ends far from B's back line.
            let p = s.a(Role::LCM);
            let start = s.anchor(-30.0, 5.0);
            s.sprint_from(&p, start, v(1.0, 0.0));
            let gk = s.a(Role::GK);
            s.hold(&gk);
        }
        SUP => {
            // Starts 8 m behind a dribbler moving at 12 km/h and ends
            // 1.1..5.8 m behind it.
            let dribbler = s.a(Role::CM);
            let d0 = s.anchor(-25.0, 0.0);
            let vel = v(12.0 * KMH, 0.0);
            s.set(&dribbler, Track::Linear { p0: d0, v: vel });
            s.hold(&dribbler);
            let p = s.a(Role::LCM);
            let start = d0 + vel * s.profile.sprint_start() + v(-8.0, 6.0);
            s.sprint_from(&p, start, v(1.0, 0.0));
        }
        OVL => {
            // Left back runs up the touchline (y = 24) past a carrier in
            // the inside channel (y = 14), ending 7.6..15.6 m ahead of it.
            let p = s.a(Role::LB);
            let start = s.anchor(-8.0, 24.0);
            s.sprint_from(&p, start, v(1.0, 0.0));
            let carrier = s.a(Role::LCF);
            let at = s.anchor(0.0, 14.0);
            s.put(&carrier, at);
            s.hold(&carrier);
        }
        UNL => {
            // Central midfielder runs from the half-space to the flank
            // inside a carrier standing wide at y = 30; ends at y 23..27.
            let p = s.a(Role::LCM);
            let start = s.anchor(-8.0, 15.0);
            s.sprint_from(&p, start, v(1.0, 0.6));
            let carrier = s.a(Role::LB);
            let at = s.anchor(0.0, 30.0);
            s.put(&carrier, at);
            s.hold(&carrier);
        }
        MTR => {
            // Striker drops 15.6..23.6 m toward a midfielder on the ball.
            let p = s.a(Role::CF);
            let start = s.anchor(20.0, -5.0);
            s.sprint_from(&p, start, v(-1.0, 0.0));
            let carrier = s.a(Role::CM);
            let at = s.anchor(-15.0, 0.0);
            s.put(&carrier, at);
            s.hold(&carrier);
        }
        OTH => {
            // Purely lateral run across the centre circle.
            let p = s.a(Role::LCM);
            let start = s.anchor(0.0, -10.0);
            s.sprint_from(&p, start, v(0.0, 1.0));
            let carrier = s.a(Role::LCB);
            s.hold(&carrier);
        }
        PRS => {
            // Runs at a stationary carrier and stops 3 m short of it. No
            // other opponent is within 10 m of the end point.
            let carrier = s.b(Role::LCM);
            let c = s.anchor(-11.0, -9.0);
            s.put(&carrier, c);
            s.hold(&carrier);
            let p = s.a(Role::CM);
            let dir = v(-0.5, -1.0);
            let end = c - dir / dir.norm() * 3.0;
            s.sprint_to(&p, end, dir);
        }
        CTO => {
            // Chases a carrier running at 18 km/h toward A's goal, level
            // with it 1.5 m to the side.
            let carrier = s.b(Role::RCM);
            let c2 = s.anchor(5.0, 3.0);
            let vel = v(-18.0 * KMH, 0.0);
            let t1 = s.profile.sprint_start();
            s.set(&carrier, Track::Linear { p0: c2 - vel * t1, v: vel });
            s.hold(&carrier);
            let p = s.a(Role::CM);
            s.sprint_from(&p, c2 + v(-2.0, 1.5), v(-1.0, 0.0));
        }
        INT => {
            // Crosses a 30 m pass at right angles at its midpoint. The pass
            // runs from t = 3 s to 6 s, so the sprint [2, 2 + D] lies in
            // the pass window widened by 2 s.
            let passer = s.b(Role::LCM);
            let receiver = s.b(Role::LCF);
            let a0 = s.anchor(5.0, -10.0);
            let mid = a0 + v(-15.0, 0.0);
            s.put(&passer, a0);
            s.put(&receiver, a0 + v(-30.0, 0.0));
            s.world.ball = vec![
                BallSpan { t0: 0.0, t1: 3.0, state: BallState::Held(passer.clone()) },
                BallSpan {
                    t0: 3.0,
                    t1: 6.0,
                    state: BallState::Pass { from: passer, to: receiver.clone(), kind: EventKind::Pass },
                },
                BallSpan { t0: 6.0, t1: f64::INFINITY, state: BallState::Held(receiver) },
            ];
            let p = s.a(Role::LCM);
            let l = s.length();
            s.sprint_from(&p, mid - v(0.0, l / 2.0), v(0.0, 1.0));
        }
        REC => {
            // Striker tracks back down the right touchline (y = -28) while
            // the ball is 25 m or more behind him; A retreats at 6 km/h.
            // B's wide players are pulled inside so no opponent or passing
            // line comes near the run.
            for r in [Role::LB, Role::LM] {
                let id = s.b(r);
                let x = s.world.pos(&id, 0.0).x;
                s.put(&id, v(x, -16.0));
            }
            let carrier = s.b(Role::LCF);
            let c = s.anchor(-29.0, -7.0);
            s.put(&carrier, c);
            s.hold(&carrier);
            let p = s.a(Role::CF);
            let start = s.anchor(20.0, -28.0);
            s.sprint_from(&p, start, v(-1.0, 0.0));
            s.drift_a(v(-6.0 * KMH, 0.0), &[p]);
        }
        COV => {
            // Drops along the left touchline (y = 27) to x = -25, deep in
            // A's defensive area, while A retreats at 6 km/h. The ball
            // (x = -11) stays goalward of the run's end, so it is not a
            // recovery run.
            for r in [Role::RB, Role::RM] {
                let id = s.b(r);
                let x = s.world.pos(&id, 0.0).x;
                s.put(&id, v(x, 16.0));
            }
            let carrier = s.b(Role::RCM);
            let c = s.anchor(-11.0, 9.0);
            s.put(&carrier, c);
            s.hold(&carrier);
            let p = s.a(Role::LCM);
            let end = s.anchor(-25.0, 27.0);
            s.sprint_to(&p, end, v(-1.0, 0.0));
            s.drift_a(v(-6.0 * KMH, 0.0), &[p]);
        }
        PUP => {
            // B keeps the ball at its back line while A's back four steps
            // up 16 m during the sprint. B's strikers wait at x = 10.
            let carrier = s.b(Role::LCB);
            s.hold(&carrier);
            for r in [Role::LCF, Role::RCF] {
                let id = s.b(r);
                let y = s.world.pos(&id, 0.0).y;
                s.put(&id, v(10.0, y));
            }
            let (t0, t1) = (s.profile.sprint_start(), s.profile.sprint_end());
            for r in [Role::LB, Role::RCB, Role::RB] {
                let id = s.a(r);
                let from = s.world.pos(&id, 0.0);
                s.set(&id, Track::Move { from, to: from + v(16.0, 0.0), t0, t1 });
            }
            let p = s.a(Role::LCB);
            let start = s.world.pos(&p, 0.0);
            s.sprint_from(&p, start, v(1.0, 0.0));
        }
    }
    s
}

/// Everybody jogs in a straight line below 8 km/h, heading roughly
/// toward the centre so nobody leaves the pitch.
fn noise(s: &mut Builder) {
    let ids: Vec<PlayerId> = s.world.tracks.keys().cloned().collect();
    for id in ids {
        let p0 = s.world.pos(&id, 0.0);
        let ang: f64 = s.rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let speed: f64 = s.rng.gen_range(0.0..8.0) * KMH;
        let dir = v(-p0.x.signum() * ang.cos(), -p0.y.signum() * ang.sin());
        s.set(&id, Track::Linear { p0, v: dir * speed });
    }
    let carrier = s.a(Role::CM);
    s.hold(&carrier);
}
