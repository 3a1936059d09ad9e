//! Frame-level wrappers that pick the relevant players out of a frame.
//! Frames are expected in the coordinates the caller wants results in;
//! for the offside line and defensive area that is the team's own view.

use crate::error::{Error, Result};
use crate::roles::{momentary_role, RoleTimeline};
use crate::tracking::{Frame, PlayerId, TeamId, TrackingSequence};

use super::shapes::{offside_line, potential_passing_lines, DefensiveArea, DefensiveLine, PassingLines};
use super::vec2::Vec2;

fn team_players<'f>(frame: &'f Frame, seq: &TrackingSequence, team: &TeamId) -> Vec<(&'f PlayerId, Vec2)> {
    frame
        .players
        .iter()
        .filter(|(p, _)| seq.team_of(p) == Some(team))
        .map(|(p, q)| (p, *q))
        .collect()
}

/// Potential passing lines of the possessor's team in `frame`.
pub fn frame_passing_lines(frame: &Frame, seq: &TrackingSequence, possessor: &PlayerId) -> Result<PassingLines> {
    let team = seq
        .team_of(possessor)
        .ok_or_else(|| Error::UnknownPlayer(possessor.to_string()))?;
    let players = team_players(frame, seq, team);
    let idx = players
        .iter()
        .position(|(p, _)| *p == possessor)
        .ok_or_else(|| Error::Geometry(format!("possessor {possessor} not in frame")))?;
    let pts: Vec<Vec2> = players.iter().map(|(_, q)| *q).collect();
    Ok(potential_passing_lines(&pts, idx))
}

/// Offside line x of `team`; `frame` must be in the team's view.
pub fn frame_offside_line(frame: &Frame, seq: &TrackingSequence, team: &TeamId) -> Result<f64> {
    let xs: Vec<f64> = team_players(frame, seq, team).iter().map(|(_, q)| q.x).collect();
    offside_line(&xs)
}

/// Back-line players of `team` at the frame's time, by momentary role.
pub fn back_line_positions(
    frame: &Frame,
    seq: &TrackingSequence,
    team: &TeamId,
    roles: &RoleTimeline,
) -> Vec<Vec2> {
    team_players(frame, seq, team)
        .into_iter()
        .filter(|(p, _)| {
            momentary_role(roles, p, frame.period, frame.time).is_ok_and(|r| r.is_back_line())
        })
        .map(|(_, q)| q)
        .collect()
}

pub fn frame_defensive_line(
    frame: &Frame,
    seq: &TrackingSequence,
    team: &TeamId,
    roles: &RoleTimeline,
) -> Result<DefensiveLine> {
    DefensiveLine::new(&back_line_positions(frame, seq, team, roles), &seq.pitch)
}

/// Defensive area of `team`; `frame` must be in the team's view, so its own
/// end line is at `-length / 2`.
pub fn frame_defensive_area(
    frame: &Frame,
    seq: &TrackingSequence,
    team: &TeamId,
    roles: &RoleTimeline,
    margin: f64,
) -> Result<DefensiveArea> {
    let line = frame_defensive_line(frame, seq, team, roles)?;
    Ok(DefensiveArea::new(&line, -seq.pitch.half_length(), margin))
}
