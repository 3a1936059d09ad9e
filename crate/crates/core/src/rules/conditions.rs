use serde::{Deserialize, Serialize};

use crate::geometry::{
    back_line_positions, closest_point_on_segment, frame_offside_line, frame_passing_lines, goal_side,
    line_angle_deg, returns_to_defense, segment_segment_distance,
    segments_intersect, DefensiveArea, DefensiveLine, Opponent, Vec2,
};
use crate::roles::{momentary_role, Role};
use crate::tracking::EventKind;

use super::category::SprintCategory;
use super::context::SprintContext;

/// Outcome of one lettered clause of a category row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub category: SprintCategory,
    pub clause: char,
    pub value: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

struct Trace {
    code: SprintCategory,
    entries: Vec<TraceEntry>,
}

impl Trace {
    fn new(code: SprintCategory) -> Self {
        Trace { code, entries: Vec::new() }
    }

    fn add(&mut self, clause: char, value: bool) -> bool {
        self.entries.push(TraceEntry { category: self.code, clause, value, note: None });
        value
    }

    fn add_note(&mut self, clause: char, value: bool, note: impl Into<String>) -> bool {
        self.entries.push(TraceEntry {
            category: self.code,
            clause,
            value,
            note: Some(note.into()),
        });
        value
    }
}

/// Evaluates one category row. Every clause is evaluated and recorded,
/// even when an earlier one already decides the row.
pub fn evaluate_category(ctx: &SprintContext, code: SprintCategory) -> (bool, Vec<TraceEntry>) {
    let mut t = Trace::new(code);
    let ok = match code {
        SprintCategory::RWB => rwb(ctx, &mut t),
        SprintCategory::EXS => exs(ctx, &mut t),
        SprintCategory::PEN => pen(ctx, &mut t),
        SprintCategory::BIB => bib(ctx, &mut t),
        SprintCategory::SUP => sup(ctx, &mut t),
        SprintCategory::OVL => ovl(ctx, &mut t),
        SprintCategory::UNL => unl(ctx, &mut t),
        SprintCategory::MTR => mtr(ctx, &mut t),
        SprintCategory::PRS => prs(ctx, &mut t),
        SprintCategory::COV => cov(ctx, &mut t),
        SprintCategory::REC => rec(ctx, &mut t),
        SprintCategory::INT => int(ctx, &mut t),
        SprintCategory::CTO => cto(ctx, &mut t),
        SprintCategory::PUP => pup(ctx, &mut t),
        SprintCategory::OTH => false,
    };
    (ok, t.entries)
}

fn net_dx(ctx: &SprintContext) -> f64 {
    ctx.end().x - ctx.start().x
}

fn forward(ctx: &SprintContext) -> bool {
    net_dx(ctx) > ctx.rules.move_threshold
}

fn backward(ctx: &SprintContext) -> bool {
    net_dx(ctx) < -ctx.rules.move_threshold
}

fn starts_behind_ball(ctx: &SprintContext) -> bool {
    ctx.start().x < ctx.first().ball.x
}

fn share(ctx: &SprintContext, pred: impl Fn(&crate::tracking::Frame) -> bool) -> f64 {
    ctx.frames.iter().filter(|f| pred(f)).count() as f64 / ctx.frames.len() as f64
}

fn role_at_end(ctx: &SprintContext) -> Result<Role, String> {
    let roles = ctx.roles.ok_or("roles unavailable")?;
    let f = ctx.last();
    momentary_role(roles, ctx.player(), f.period, f.time).map_err(|e| e.to_string())
}

fn rwb(ctx: &SprintContext, t: &mut Trace) -> bool {
    let p = ctx.player();
    let s = share(ctx, |f| f.possessor.as_ref() == Some(p));
    t.add('a', s > ctx.rules.rwb_ball_share)
}

fn exs(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = t.add('a', forward(ctx));
    let b = t.add('b', ctx.start().x > ctx.first().ball.x);
    let c = t.add('c', ctx.end().x > ctx.last().ball.x + ctx.rules.exs_ahead_margin);
    a && (b || c)
}

fn pen(ctx: &SprintContext, t: &mut Trace) -> bool {
    let end = ctx.end();
    let a = t.add('a', ctx.zones.heads_for_scoring_zone(end, ctx.end_velocity()));
    let b = match ctx.roles {
        None => t.add_note('b', false, "roles unavailable"),
        Some(roles) => {
            let backs = back_line_positions(ctx.last(), ctx.seq, &ctx.opponent, roles);
            match DefensiveLine::new(&backs, &ctx.seq.pitch) {
                Ok(line) => t.add('b', line.is_behind(end, ctx.seq.pitch.half_length())),
                Err(e) => t.add_note('b', false, e.to_string()),
            }
        }
    };
    let opponents: Vec<Opponent> = ctx
        .last()
        .players
        .iter()
        .filter(|(p, _)| ctx.is_opponent(p))
        .map(|(p, q)| Opponent {
            position: *q,
            is_goalkeeper: ctx.seq.is_goalkeeper(p),
        })
        .collect();
    let c = t.add('c', goal_side(end, &opponents, &ctx.seq.pitch).open);
    a && b && c
}

fn bib(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = t.add('a', ctx.zones.in_opponent_box(ctx.end()));
    let end_t = ctx.sprint.end_time();
    let me = ctx.player();
    let expected = ctx
        .frames
        .iter()
        .filter(|f| f.time >= end_t - ctx.rules.bib_flank_window - 1e-9)
        .any(|f| {
            f.possession_team.as_ref() == Some(&ctx.team)
                && f.possessor
                    .as_ref()
                    .filter(|p| *p != me && ctx.is_teammate(p))
                    .and_then(|p| f.players.get(p))
                    .is_some_and(|q| ctx.zones.in_flank(*q))
        });
    let occurs = ctx.events.iter().any(|e| {
        e.kind == EventKind::Cross
            && e.team == ctx.team
            && e.time >= end_t - 1e-9
            && e.time <= end_t + ctx.rules.bib_cross_window + 1e-9
    });
    let b = t.add_note(
        'b',
        expected || occurs,
        format!("expected={expected} occurs={occurs}"),
    );
    a && b
}

fn sup(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = t.add('a', forward(ctx));
    let b = t.add('b', starts_behind_ball(ctx));
    a && b
}

/// Clauses (a)-(c) shared by OVL and UNL.
fn wide_run(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = t.add('a', forward(ctx));
    let b = t.add('b', starts_behind_ball(ctx));
    let end = ctx.end();
    let c = t.add('c', ctx.zones.in_flank(end) && end.x > ctx.last().ball.x);
    a && b && c
}

fn ovl(ctx: &SprintContext, t: &mut Trace) -> bool {
    let abc = wide_run(ctx, t);
    let d = match role_at_end(ctx) {
        Ok(r) => t.add_note('d', r.is_side(), r.as_str()),
        Err(e) => t.add_note('d', false, e),
    };
    abc && d
}

fn unl(ctx: &SprintContext, t: &mut Trace) -> bool {
    let abc = wide_run(ctx, t);
    let f = ctx.last();
    let me = ctx.player();
    let carrier = f
        .possessor
        .as_ref()
        .filter(|p| *p != me && ctx.is_teammate(p) && f.possession_team.as_ref() == Some(&ctx.team))
        .and_then(|p| f.players.get(p).copied());
    let d = match carrier {
        None => t.add_note('d', false, "no teammate has the ball"),
        Some(q) => {
            let path = ctx.path();
            let near = closest_on_path(&path, q);
            let side = if ctx.end().y >= 0.0 { 1.0 } else { -1.0 };
            t.add('d', side * q.y > side * near.y)
        }
    };
    abc && d
}

fn closest_on_path(path: &[Vec2], q: Vec2) -> Vec2 {
    if path.len() == 1 {
        return path[0];
    }
    path.windows(2)
        .map(|w| closest_point_on_segment(q, w[0], w[1]))
        .min_by(|a, b| a.dist(q).total_cmp(&b.dist(q)))
        .expect("path has a segment")
}

fn mtr(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = t.add('a', backward(ctx));
    let d0 = ctx.start().dist(ctx.first().ball);
    let d1 = ctx.end().dist(ctx.last().ball);
    let b = t.add('b', d1 < d0);
    a && b
}

fn prs(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = match ctx.target() {
        None => t.add_note('a', false, "no opponent on the pitch"),
        Some(target) => {
            let d = ctx.distances_to(&target);
            let ok = d.len() >= 2
                && d[d.len() - 1] < d[0]
                && d[d.len() - 1] < ctx.rules.prs_target_distance;
            t.add_note('a', ok, format!("target={target}"))
        }
    };
    let path = ctx.path();
    let mut min_dist = f64::INFINITY;
    for f in &ctx.frames {
        let Some(holder) = f.possessor.as_ref().filter(|p| ctx.is_opponent(p)) else {
            continue;
        };
        let Ok(lines) = frame_passing_lines(f, ctx.seq, holder) else {
            continue;
        };
        for (p, q) in &lines.segments {
            for w in path.windows(2) {
                min_dist = min_dist.min(segment_segment_distance(w[0], w[1], *p, *q));
            }
        }
    }
    let b = t.add_note(
        'b',
        min_dist < ctx.rules.prs_passing_line_distance,
        format!("min_distance={min_dist:.2}"),
    );
    a || b
}

fn both_return(ctx: &SprintContext, t: &mut Trace) -> bool {
    let speed = ctx.rules.return_speed;
    let player = returns_to_defense(&ctx.sprinter_samples(), speed);
    let team = returns_to_defense(&ctx.team_centroid_samples(), speed);
    t.add_note('a', player && team, format!("player={player} team={team}"))
}

fn cov(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = both_return(ctx, t);
    let b = match ctx.roles {
        None => t.add_note('b', false, "roles unavailable"),
        Some(roles) => {
            let backs = back_line_positions(ctx.last(), ctx.seq, &ctx.team, roles);
            match DefensiveLine::new(&backs, &ctx.seq.pitch) {
                Ok(line) => {
                    let area = DefensiveArea::new(
                        &line,
                        -ctx.seq.pitch.half_length(),
                        ctx.rules.defensive_area_margin,
                    );
                    t.add('b', area.contains(ctx.end()))
                }
                Err(e) => t.add_note('b', false, e.to_string()),
            }
        }
    };
    a && b
}

fn rec(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = both_return(ctx, t);
    let me = ctx.player();
    let gaps: Vec<f64> = ctx.frames.iter().map(|f| f.players[me].x - f.ball.x).collect();
    let b = t.add('b', gaps.iter().all(|&g| g > 0.0));
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let c = t.add('c', mean > ctx.rules.rec_mean_ahead);
    a && b && c
}

fn int(ctx: &SprintContext, t: &mut Trace) -> bool {
    let path = ctx.path();
    let (s0, s1) = (ctx.sprint.start_time(), ctx.sprint.end_time());
    let margin = ctx.rules.int_pass_margin;
    let k = ((0.5 * ctx.seq.sample_rate).round() as usize).max(1);
    let (mut any_a, mut any_b, mut both) = (false, false, false);
    for e in &ctx.events {
        if !e.kind.is_ball_transfer() || e.team != ctx.opponent {
            continue;
        }
        let Some(pe) = e.end else { continue };
        // Running direction at a crossing is taken over about a second
        // around it, so frame-to-frame jitter does not decide the angle.
        let meets = (0..path.len().saturating_sub(1)).any(|i| {
            if !segments_intersect(path[i], path[i + 1], e.start, pe) {
                return false;
            }
            let dir = path[(i + 1 + k).min(path.len() - 1)] - path[i.saturating_sub(k)];
            dir.norm() > 0.0 && line_angle_deg(dir, pe - e.start) > ctx.rules.int_min_angle_deg
        });
        let inside = s0 >= e.time - margin - 1e-9 && s1 <= e.end_time + margin + 1e-9;
        any_a |= meets;
        any_b |= inside;
        both |= meets && inside;
    }
    t.add('a', any_a);
    t.add_note('b', any_b, format!("same_pass={both}"));
    both
}

fn cto(ctx: &SprintContext, t: &mut Trace) -> bool {
    let Some(target) = ctx.target() else {
        t.add_note('a', false, "no opponent on the pitch");
        t.add('b', false);
        t.add('c', false);
        return false;
    };
    let s = share(ctx, |f| f.possessor.as_ref() == Some(&target));
    let a = t.add_note('a', s > ctx.rules.cto_ball_share, format!("target={target}"));
    let tp: Vec<Vec2> = ctx.frames.iter().filter_map(|f| f.players.get(&target).copied()).collect();
    let dur = ctx.last().time - ctx.first().time;
    let speed = if tp.len() >= 2 && dur > 0.0 {
        tp.windows(2).map(|w| w[0].dist(w[1])).sum::<f64>() / dur * 3.6
    } else {
        0.0
    };
    let b = t.add('b', speed > ctx.rules.cto_target_speed);
    let d = ctx.distances_to(&target);
    let mean = d.iter().sum::<f64>() / d.len().max(1) as f64;
    let c = t.add('c', !d.is_empty() && mean < ctx.rules.cto_target_distance);
    a && b && c
}

fn pup(ctx: &SprintContext, t: &mut Trace) -> bool {
    let a = match ctx.roles {
        None => t.add_note('a', false, "roles unavailable"),
        Some(roles) => {
            let f = ctx.first();
            match momentary_role(roles, ctx.player(), f.period, f.time) {
                Ok(r) => t.add_note('a', r.is_back_line(), r.as_str()),
                Err(e) => t.add_note('a', false, e.to_string()),
            }
        }
    };
    let b = match (
        frame_offside_line(ctx.first(), ctx.seq, &ctx.team),
        frame_offside_line(ctx.last(), ctx.seq, &ctx.team),
    ) {
        (Ok(x0), Ok(x1)) => t.add_note('b', x1 - x0 > ctx.rules.pup_offside_advance, format!("rise={:.2}", x1 - x0)),
        _ => t.add_note('b', false, "offside line undefined"),
    };
    let me = ctx.player();
    let mean = ctx.frames.iter().map(|f| f.players[me].dist(f.ball)).sum::<f64>() / ctx.frames.len() as f64;
    let c = t.add('c', mean > ctx.rules.pup_ball_distance);
    a && b && c
}

