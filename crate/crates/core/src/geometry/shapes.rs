use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tracking::Pitch;

use super::delaunay::delaunay_neighbors;
use super::vec2::{point_in_triangle, Vec2};

/// Triangle between a player and the goal posts they attack. All
/// coordinates are in the player's attacking view (opposing goal at +x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoalSide {
    pub polygon: [Vec2; 3],
    pub open: bool,
}

/// An opponent as seen by `goal_side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opponent {
    pub position: Vec2,
    pub is_goalkeeper: bool,
}

pub fn goal_side(player: Vec2, opponents: &[Opponent], pitch: &Pitch) -> GoalSide {
    let gx = pitch.half_length();
    let polygon = [
        player,
        Vec2::new(gx, -pitch.goal_half_width),
        Vec2::new(gx, pitch.goal_half_width),
    ];
    let open = !opponents.iter().any(|o| {
        !o.is_goalkeeper && point_in_triangle(o.position, polygon[0], polygon[1], polygon[2])
    });
    GoalSide { polygon, open }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PassingLineKind {
    Actual,
    Potential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassingLines {
    pub segments: Vec<(Vec2, Vec2)>,
    pub kind: PassingLineKind,
}

/// Segments from the possessor to every teammate it shares a Delaunay edge
/// with, the triangulation being taken over the possessor's team only.
/// `team[possessor]` is the ball holder.
pub fn potential_passing_lines(team: &[Vec2], possessor: usize) -> PassingLines {
    let segments = delaunay_neighbors(team)
        .into_iter()
        .filter_map(|(i, j)| match (i == possessor, j == possessor) {
            (true, _) => Some((team[i], team[j])),
            (_, true) => Some((team[j], team[i])),
            _ => None,
        })
        .collect();
    PassingLines {
        segments,
        kind: PassingLineKind::Potential,
    }
}

/// x of the second rearmost player (multiset semantics: a tie at the back
/// counts twice). Positions are in the team's own view, so rearmost is the
/// smallest x.
pub fn offside_line(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::Geometry(
            "offside line needs at least two players".into(),
        ));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[1])
}

/// Back line polyline, vertices ordered by y, with both ends dropped
/// perpendicularly onto the sidelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefensiveLine {
    pub vertices: Vec<Vec2>,
}

impl DefensiveLine {
    pub fn new(backs: &[Vec2], pitch: &Pitch) -> Result<Self> {
        if backs.is_empty() {
            return Err(Error::RolesUnavailable(
                "no back-line players for the defensive line".into(),
            ));
        }
        let mut sorted = backs.to_vec();
        sorted.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
        let hw = pitch.half_width();
        let first = sorted[0];
        let last = sorted[sorted.len() - 1];
        let mut vertices = Vec::with_capacity(sorted.len() + 2);
        vertices.push(Vec2::new(first.x, -hw));
        vertices.extend(sorted);
        vertices.push(Vec2::new(last.x, hw));
        Ok(DefensiveLine { vertices })
    }

    /// Players only, without the sideline feet.
    pub fn players(&self) -> &[Vec2] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// x of the polyline at height `y`, clamped to the end vertices.
    pub fn x_at(&self, y: f64) -> f64 {
        let v = &self.vertices;
        if y <= v[0].y {
            return v[0].x;
        }
        for w in v.windows(2) {
            if y <= w[1].y {
                let dy = w[1].y - w[0].y;
                if dy <= 0.0 {
                    return w[1].x;
                }
                return w[0].x + (w[1].x - w[0].x) * (y - w[0].y) / dy;
            }
        }
        v[v.len() - 1].x
    }

    /// True when `p` lies strictly between the line and the end line at
    /// `end_line_x` (which may be on either side).
    pub fn is_behind(&self, p: Vec2, end_line_x: f64) -> bool {
        let lx = self.x_at(p.y);
        if end_line_x >= lx {
            p.x > lx && p.x <= end_line_x
        } else {
            p.x < lx && p.x >= end_line_x
        }
    }
}

/// Band from an end line to a parallel line `depth` meters upfield.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefensiveArea {
    pub x_low: f64,
    pub x_high: f64,
    pub depth: f64,
}

impl DefensiveArea {
    /// Depth is the back line's mean distance to the end line plus `margin`.
    pub fn new(line: &DefensiveLine, end_line_x: f64, margin: f64) -> Self {
        let players = line.players();
        let mean = players.iter().map(|p| (p.x - end_line_x).abs()).sum::<f64>() / players.len() as f64;
        let depth = mean + margin;
        let other = if end_line_x < 0.0 {
            end_line_x + depth
        } else {
            end_line_x - depth
        };
        DefensiveArea {
            x_low: end_line_x.min(other),
            x_high: end_line_x.max(other),
            depth,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x_low && p.x <= self.x_high
    }
}

/// Net rate of movement toward the own goal (-x in the view), km/h.
/// `samples` are `(time, position)` pairs in the team's view.
pub fn backward_speed(samples: &[(f64, Vec2)]) -> Option<f64> {
    let (t0, p0) = *samples.first()?;
    let (t1, p1) = *samples.last()?;
    let dt = t1 - t0;
    (samples.len() >= 2 && dt > 0.0).then(|| -(p1.x - p0.x) / dt * 3.6)
}

/// Runs backward faster than `min_speed` km/h on average (net displacement).
pub fn returns_to_defense(samples: &[(f64, Vec2)], min_speed: f64) -> bool {
    backward_speed(samples).is_some_and(|v| v > min_speed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// Whether the ray `origin + t * dir`, `t >= 0`, touches the rectangle.
    pub fn hit_by_ray(&self, origin: Vec2, dir: Vec2) -> bool {
        let mut t_min: f64 = 0.0;
        let mut t_max = f64::INFINITY;
        for (o, d, lo, hi) in [
            (origin.x, dir.x, self.x0, self.x1),
            (origin.y, dir.y, self.y0, self.y1),
        ] {
            if d == 0.0 {
                if o < lo || o > hi {
                    return false;
                }
            } else {
                let (a, b) = ((lo - o) / d, (hi - o) / d);
                t_min = t_min.max(a.min(b));
                t_max = t_max.min(a.max(b));
            }
        }
        t_min <= t_max
    }
}

/// Channel between two |y| bounds, mirrored on both flanks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub y0: f64,
    pub y1: f64,
}

impl Band {
    pub fn contains(&self, p: Vec2) -> bool {
        p.y >= self.y0 && p.y <= self.y1
    }
}

/// Pitch zones in an attacking view: the attacked goal is at +x and the
/// left flank at +y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zones {
    pub scoring_zone: Rect,
    /// [right (-y), left (+y)]
    pub flanks: [Band; 2],
    pub half_spaces: [Band; 2],
    /// [own, opponents']
    pub penalty_boxes: [Rect; 2],
}

/// Flank: outside the penalty-box width line. Half-space: between that line
/// and the goal-width corridor. Scoring zone: penalty-box width, from the
/// attacked end line `scoring_zone_depth` meters upfield.
pub fn zones(pitch: &Pitch, scoring_zone_depth: f64) -> Zones {
    let hl = pitch.half_length();
    let hw = pitch.half_width();
    let bw = pitch.penalty_box_half_width;
    let gw = pitch.goal_half_width;
    let far = hw + crate::tracking::PITCH_MARGIN;
    // Flank bands start just outside the box width so a point on the line
    // is never in both a flank and a half-space.
    let eps = 1e-9;
    Zones {
        scoring_zone: Rect {
            x0: hl - scoring_zone_depth,
            x1: hl,
            y0: -bw,
            y1: bw,
        },
        flanks: [Band { y0: -far, y1: -bw - eps }, Band { y0: bw + eps, y1: far }],
        half_spaces: [Band { y0: -bw, y1: -gw - eps }, Band { y0: gw + eps, y1: bw }],
        penalty_boxes: [
            Rect {
                x0: -hl,
                x1: -hl + pitch.penalty_box_depth,
                y0: -bw,
                y1: bw,
            },
            Rect {
                x0: hl - pitch.penalty_box_depth,
                x1: hl,
                y0: -bw,
                y1: bw,
            },
        ],
    }
}

impl Zones {
    pub fn in_flank(&self, p: Vec2) -> bool {
        self.flanks.iter().any(|b| b.contains(p))
    }

    pub fn in_half_space(&self, p: Vec2) -> bool {
        self.half_spaces.iter().any(|b| b.contains(p))
    }

    pub fn in_scoring_zone(&self, p: Vec2) -> bool {
        self.scoring_zone.contains(p)
    }

    pub fn in_opponent_box(&self, p: Vec2) -> bool {
        self.penalty_boxes[1].contains(p)
    }

    pub fn in_own_box(&self, p: Vec2) -> bool {
        self.penalty_boxes[0].contains(p)
    }

    /// Endpoint inside the scoring zone, or the velocity ray from it
    /// reaches the zone.
    pub fn heads_for_scoring_zone(&self, end: Vec2, velocity: Vec2) -> bool {
        self.in_scoring_zone(end)
            || (velocity.norm() > 0.0 && self.scoring_zone.hit_by_ray(end, velocity))
    }
}
