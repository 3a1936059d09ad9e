#![allow(dead_code)]

use std::collections::BTreeMap;

use sprintlab::geometry::Vec2;
use sprintlab::roles::{PlayerRoles, Role, RoleInterval, RoleTimeline};
use sprintlab::sprint::{RunEffort, Sprint};
use sprintlab::synth::World;
use sprintlab::tracking::{AttackDirection, AttackEntry, Pitch, Roster, RosterEntry};
use sprintlab::{PlayerId, TeamId, TrackingSequence};

pub fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

pub fn pid(s: &str) -> PlayerId {
    PlayerId::new(s)
}

/// Team is the first letter of the player id; A attacks +x in period 1.
pub fn materialize(world: &World, total: f64, roles: &[(&str, Role)]) -> (TrackingSequence, RoleTimeline) {
    let role_of: BTreeMap<&str, Role> = roles.iter().copied().collect();
    let roster = |team: &str| Roster {
        team_id: TeamId::new(team),
        players: world
            .team_of
            .iter()
            .filter(|(_, t)| t.as_str() == team)
            .map(|(p, _)| RosterEntry {
                player_id: p.clone(),
                goalkeeper: role_of.get(p.as_str()) == Some(&Role::GK),
            })
            .collect(),
    };
    let frames = world.frames(total, 10.0);
    let end = frames.last().unwrap().time;
    let seq = TrackingSequence::new(
        Pitch::default(),
        10.0,
        vec![roster("A"), roster("B")],
        vec![
            AttackEntry { team_id: TeamId::new("A"), period: 1, direction: AttackDirection::PositiveX },
            AttackEntry { team_id: TeamId::new("B"), period: 1, direction: AttackDirection::NegativeX },
        ],
        frames,
        world.events(),
    )
    .unwrap();
    let players = roles
        .iter()
        .map(|(p, r)| {
            (
                pid(p),
                PlayerRoles {
                    team: world.team_of[&pid(p)].clone(),
                    intervals: vec![RoleInterval { period: 1, start: 0.0, end, role: *r }],
                },
            )
        })
        .collect();
    (seq, RoleTimeline::new(players).unwrap())
}

pub fn add(world: &mut World, id: &str, track: sprintlab::synth::Track) {
    world.team_of.insert(pid(id), TeamId::new(&id[..1]));
    world.tracks.insert(pid(id), track);
}

pub fn sprint(player: &str, start: f64, end: f64) -> Sprint {
    Sprint {
        effort: RunEffort {
            player: pid(player),
            period: 1,
            start_time: start,
            end_time: end,
            peak_time: 0.5 * (start + end),
            peak_speed: 25.0,
        },
        distance: 0.0,
        mean_speed: 0.0,
    }
}

/// Delaunay edges by brute force: every triangle whose circumcircle holds
/// no other point contributes its three edges. Returns `None` when some
/// point lies within a relative 1e-9 of a circumcircle (cocircular input),
/// where the edge set is not unique.
pub fn delaunay_oracle(p: &[Vec2]) -> Option<std::collections::BTreeSet<(usize, usize)>> {
    let n = p.len();
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (p[i], p[j], p[k]);
                let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if d.abs() < 1e-12 {
                    continue;
                }
                let sq = |q: Vec2| q.x * q.x + q.y * q.y;
                let ux = (sq(a) * (b.y - c.y) + sq(b) * (c.y - a.y) + sq(c) * (a.y - b.y)) / d;
                let uy = (sq(a) * (c.x - b.x) + sq(b) * (a.x - c.x) + sq(c) * (b.x - a.x)) / d;
                let center = Vec2::new(ux, uy);
                let r = center.dist(a);
                let mut empty = true;
                for m in (0..n).filter(|&m| m != i && m != j && m != k) {
                    let dm = center.dist(p[m]);
                    if (dm - r).abs() <= 1e-9 * r.max(1.0) {
                        return None;
                    }
                    if dm < r {
                        empty = false;
                    }
                }
                if empty {
                    edges.extend([(i, j), (i, k), (j, k)]);
                }
            }
        }
    }
    Some(edges)
}
