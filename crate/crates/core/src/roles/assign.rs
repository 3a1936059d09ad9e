use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::tracking::{normalize, PlayerId, TeamId, TrackingSequence};

use super::hungarian::min_cost_assignment;
use super::role::{Formation, Role, FORMATIONS};
use super::timeline::{PlayerRoles, RoleInterval, RoleTimeline};

/// Result of matching ten players to one formation.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationFit {
    pub formation: &'static Formation,
    /// `roles[i]` is the role of `players[i]`.
    pub roles: Vec<Role>,
    pub cost: f64,
}

/// Matches ten centroid-relative mean positions to the cheapest formation
/// in the catalog. Ties keep the earlier formation.
pub fn fit_formation(positions: &[Vec2]) -> Result<FormationFit> {
    if positions.len() != 10 {
        return Err(Error::RolesUnavailable(format!(
            "need 10 outfield players, got {}",
            positions.len()
        )));
    }
    let mut best: Option<FormationFit> = None;
    for f in &FORMATIONS {
        let slots = f.centered_positions();
        let cost: Vec<Vec<f64>> = positions
            .iter()
            .map(|p| slots.iter().map(|s| p.dist(*s)).collect())
            .collect();
        let (cols, total) = min_cost_assignment(&cost);
        if best.as_ref().map_or(true, |b| total < b.cost - 1e-9) {
            best = Some(FormationFit {
                formation: f,
                roles: cols.iter().map(|&c| f.roles[c]).collect(),
                cost: total,
            });
        }
    }
    Ok(best.expect("catalog is not empty"))
}

type WindowRoles = BTreeMap<PlayerId, Role>;

/// Roles of one team from mean positions over fixed windows.
///
/// Each window of `window` seconds averages every player's position
/// relative to the outfield centroid, in the team's attacking view, and
/// fits the formation catalog. The ten outfield players seen in the most
/// frames take part; a window with fewer than ten is skipped and covered by
/// its neighbors. Consecutive identical roles merge into one interval.
pub fn assign_roles(seq: &TrackingSequence, team: &TeamId, window: f64) -> Result<RoleTimeline> {
    if !(window > 0.0) {
        return Err(Error::Config("role window must be positive".into()));
    }
    let view = normalize(seq, team)?;
    let roster = seq.roster(team)?;
    let flagged_gk = roster.players.iter().find(|p| p.goalkeeper).map(|p| p.player_id.clone());
    let members: Vec<&PlayerId> = roster.players.iter().map(|p| &p.player_id).collect();

    let mut players: BTreeMap<PlayerId, PlayerRoles> = BTreeMap::new();
    for period in seq.periods() {
        let frames = &seq.frames[seq.period_range(period)];
        let (t0, t_end) = (frames[0].time, frames[frames.len() - 1].time);
        let n_windows = (((t_end - t0) / window).floor() as usize + 1).max(1);
        let bounds: Vec<(f64, f64)> = (0..n_windows)
            .map(|k| {
                let a = t0 + k as f64 * window;
                (a, (a + window).min(t_end))
            })
            .filter(|(a, b)| b > a || n_windows == 1)
            .collect();
        let per_window: Vec<Option<WindowRoles>> = bounds
            .par_iter()
            .map(|&(a, b)| {
                let last = b >= t_end;
                let win: Vec<_> = frames
                    .iter()
                    .filter(|f| f.time >= a && (f.time < b || (last && f.time <= b)))
                    .map(|f| view.frame(f))
                    .collect();
                window_roles(&win, &members, flagged_gk.as_ref())
            })
            .collect();
        if per_window.iter().all(Option::is_none) {
            return Err(Error::RolesUnavailable(format!(
                "team {team} never has 10 outfield players in period {period}"
            )));
        }
        let filled = fill_from_neighbors(per_window);
        for (k, roles) in filled.iter().enumerate() {
            let (a, b) = bounds[k];
            for (pid, role) in roles {
                let entry = players.entry(pid.clone()).or_insert_with(|| PlayerRoles {
                    team: team.clone(),
                    intervals: Vec::new(),
                });
                match entry.intervals.last_mut() {
                    Some(iv) if iv.period == period && iv.role == *role && (iv.end - a).abs() < 1e-9 => {
                        iv.end = b;
                    }
                    _ => entry.intervals.push(RoleInterval { period, start: a, end: b, role: *role }),
                }
            }
        }
    }
    RoleTimeline::new(players)
}

fn window_roles(
    frames: &[crate::tracking::Frame],
    members: &[&PlayerId],
    flagged_gk: Option<&PlayerId>,
) -> Option<WindowRoles> {
    if frames.is_empty() {
        return None;
    }
    // Mean absolute position and presence count per player.
    let mut sum: BTreeMap<&PlayerId, (Vec2, usize)> = BTreeMap::new();
    for f in frames {
        for &m in members {
            if let Some(p) = f.position(m) {
                let e = sum.entry(m).or_insert((Vec2::ZERO, 0));
                e.0 = e.0 + p;
                e.1 += 1;
            }
        }
    }
    let gk = match flagged_gk {
        Some(g) if sum.contains_key(g) => Some(g),
        Some(_) => None,
        None => sum
            .iter()
            .min_by(|a, b| {
                let ax = a.1 .0.x / a.1 .1 as f64;
                let bx = b.1 .0.x / b.1 .1 as f64;
                ax.total_cmp(&bx).then(a.0.cmp(b.0))
            })
            .map(|(p, _)| *p),
    };
    let mut outfield: Vec<(&PlayerId, usize)> = sum
        .iter()
        .filter(|(p, _)| Some(**p) != gk)
        .map(|(p, (_, n))| (*p, *n))
        .collect();
    let majority = frames.len() / 2;
    outfield.retain(|(_, n)| *n > majority);
    if outfield.len() < 10 {
        return None;
    }
    outfield.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    outfield.truncate(10);
    let chosen: Vec<&PlayerId> = outfield.iter().map(|(p, _)| *p).collect();

    // Per-frame centroid of the chosen players, then each player's mean
    // offset from it.
    let mut rel: Vec<(Vec2, usize)> = vec![(Vec2::ZERO, 0); 10];
    for f in frames {
        let present: Vec<(usize, Vec2)> = chosen
            .iter()
            .enumerate()
            .filter_map(|(i, p)| f.position(p).map(|q| (i, q)))
            .collect();
        if present.is_empty() {
            continue;
        }
        let c = present.iter().fold(Vec2::ZERO, |a, (_, q)| a + *q) / present.len() as f64;
        for (i, q) in present {
            rel[i].0 = rel[i].0 + (q - c);
            rel[i].1 += 1;
        }
    }
    let means: Vec<Vec2> = rel.iter().map(|(s, n)| *s / *n as f64).collect();
    let fit = fit_formation(&means).ok()?;
    let mut out: WindowRoles = chosen
        .iter()
        .zip(&fit.roles)
        .map(|(p, r)| ((*p).clone(), *r))
        .collect();
    if let Some(g) = gk {
        out.insert(g.clone(), Role::GK);
    }
    Some(out)
}

/// Replaces skipped windows with the nearest earlier assignment, or the
/// nearest later one at the start of a period.
fn fill_from_neighbors(windows: Vec<Option<WindowRoles>>) -> Vec<WindowRoles> {
    let first = windows.iter().find_map(|w| w.clone()).unwrap_or_default();
    let mut prev = first;
    windows
        .into_iter()
        .map(|w| {
            if let Some(w) = w {
                prev = w;
            }
            prev.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roles::momentary_role;
    use crate::roles::FORMATIONS;
    use crate::tracking::fixtures::*;
    use crate::tracking::{Frame, Pitch};

    const IDS: [&str; 11] = ["a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10"];

    /// Team A parked at template positions of `f`, shifted to `center`,
    /// period 1 (A attacks +x). `swap` exchanges two players at `t_swap`.
    fn parked(
        f: &Formation,
        seconds: f64,
        rate: f64,
        mirror: bool,
        swap: Option<(usize, usize, f64)>,
    ) -> TrackingSequence {
        let center = Vec2::new(-5.0, 0.0);
        let slots = f.centered_positions();
        let n = (seconds * rate) as usize;
        let frames: Vec<Frame> = (0..n)
            .map(|k| {
                let t = k as f64 / rate;
                let mut players: Vec<(&str, f64, f64)> = Vec::new();
                players.push((IDS[0], -48.0, 0.0));
                for i in 0..10 {
                    let mut slot = i;
                    if let Some((a, b, ts)) = swap {
                        if t >= ts {
                            if i == a {
                                slot = b;
                            } else if i == b {
                                slot = a;
                            }
                        }
                    }
                    let p = slots[slot] + center;
                    let y = if mirror { -p.y } else { p.y };
                    players.push((IDS[i + 1], p.x, y));
                }
                players.push(("b0", 48.0, 0.0));
                frame(1, t, &players, (0.0, 0.0))
            })
            .collect();
        TrackingSequence::new(
            Pitch::default(),
            rate,
            vec![roster("A", &IDS), roster("B", &["b0"])],
            directions(&[1]),
            frames,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn parked_formations_are_recovered() {
        for f in &FORMATIONS {
            let seq = parked(f, 60.0, 1.0, false, None);
            let t = assign_roles(&seq, &TeamId::new("A"), 300.0).unwrap();
            for (i, role) in f.roles.iter().enumerate() {
                let got = momentary_role(&t, &PlayerId::new(IDS[i + 1]), 1, 30.0).unwrap();
                assert_eq!(got, *role, "{} player {i}", f.name);
            }
            assert_eq!(momentary_role(&t, &PlayerId::new("a0"), 1, 30.0).unwrap(), Role::GK);
        }
    }

    #[test]
    fn mirrored_input_swaps_sides() {
        let f = &FORMATIONS[0];
        let a = assign_roles(&parked(f, 60.0, 1.0, false, None), &TeamId::new("A"), 300.0).unwrap();
        let b = assign_roles(&parked(f, 60.0, 1.0, true, None), &TeamId::new("A"), 300.0).unwrap();
        assert_eq!(a.mirrored(), b);
    }

    #[test]
    fn swap_follows_window_majority() {
        // LCM (index 5) and RCM (index 6) swap sides 200 s into a 600 s half.
        let f = &FORMATIONS[0];
        let seq = parked(f, 600.0, 1.0, false, Some((5, 6, 200.0)));
        let t = assign_roles(&seq, &TeamId::new("A"), 300.0).unwrap();
        let p5 = PlayerId::new(IDS[6]);
        // Window [0, 300): 200 s before the swap, 100 s after.
        assert_eq!(momentary_role(&t, &p5, 1, 10.0).unwrap(), Role::LCM);
        // Window [300, 599]: all after the swap.
        assert_eq!(momentary_role(&t, &p5, 1, 400.0).unwrap(), Role::RCM);
    }

    #[test]
    fn too_few_players_is_an_error() {
        let frames: Vec<Frame> = (0..10)
            .map(|k| frame(1, k as f64, &[("a0", -48.0, 0.0), ("a1", 0.0, 0.0), ("b0", 48.0, 0.0)], (0.0, 0.0)))
            .collect();
        let seq = TrackingSequence::new(
            Pitch::default(),
            1.0,
            vec![roster("A", &["a0", "a1"]), roster("B", &["b0"])],
            directions(&[1]),
            frames,
            vec![],
        )
        .unwrap();
        assert!(matches!(
            assign_roles(&seq, &TeamId::new("A"), 300.0),
            Err(Error::RolesUnavailable(_))
        ));
    }
}
