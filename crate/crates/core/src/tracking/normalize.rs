use crate::error::{Error, Result};
use crate::geometry::Vec2;

use super::model::{Frame, TeamId, TrackingSequence};

/// Coordinates seen from one team: it always attacks toward +x and its left
/// flank is +y. A team attacking -x is mapped by a point reflection through
/// the center spot, which is an involution.
#[derive(Debug, Clone)]
pub struct NormalizedView<'a> {
    seq: &'a TrackingSequence,
    team: TeamId,
}

pub fn normalize<'a>(seq: &'a TrackingSequence, team: &TeamId) -> Result<NormalizedView<'a>> {
    if !seq.team_ids().contains(&team) {
        return Err(Error::UnknownTeam(team.to_string()));
    }
    for period in seq.periods() {
        if seq.direction(team, period).is_none() {
            return Err(Error::Validation(format!(
                "attack direction missing for team {team} in period {period}"
            )));
        }
    }
    Ok(NormalizedView {
        seq,
        team: team.clone(),
    })
}

impl<'a> NormalizedView<'a> {
    pub fn sequence(&self) -> &'a TrackingSequence {
        self.seq
    }

    pub fn team(&self) -> &TeamId {
        &self.team
    }

    /// +1 when raw coordinates already match the view, -1 when reflected.
    pub fn sign(&self, period: u8) -> f64 {
        self.seq
            .direction(&self.team, period)
            .map(|d| d.sign())
            .unwrap_or(1.0)
    }

    pub fn point(&self, period: u8, p: Vec2) -> Vec2 {
        reflect(p, self.sign(period))
    }

    /// Copy of a frame with every coordinate mapped into the view.
    pub fn frame(&self, frame: &Frame) -> Frame {
        let s = self.sign(frame.period);
        Frame {
            period: frame.period,
            time: frame.time,
            players: frame
                .players
                .iter()
                .map(|(id, p)| (id.clone(), reflect(*p, s)))
                .collect(),
            ball: reflect(frame.ball, s),
            possession_team: frame.possession_team.clone(),
            possessor: frame.possessor.clone(),
        }
    }
}

pub(crate) fn reflect(p: Vec2, sign: f64) -> Vec2 {
    if sign < 0.0 {
        -p
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::model::fixtures::*;
    use crate::tracking::model::Pitch;

    fn seq() -> TrackingSequence {
        TrackingSequence::new(
            Pitch::default(),
            10.0,
            vec![roster("A", &["a1"]), roster("B", &["b1"])],
            directions(&[1, 2]),
            vec![
                frame(1, 0.0, &[("a1", -30.0, 5.0)], (1.0, 2.0)),
                frame(2, 0.0, &[("a1", 3.0, -1.0)], (10.0, -4.0)),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn team_attacking_negative_x_is_reflected() {
        let s = seq();
        // B attacks -x in period 1.
        let v = normalize(&s, &TeamId::new("B")).unwrap();
        let f = v.frame(&s.frames[0]);
        assert_eq!(f.players[&crate::PlayerId::new("a1")], Vec2::new(30.0, -5.0));
    }

    #[test]
    fn team_attacking_positive_x_is_identity() {
        let s = seq();
        let v = normalize(&s, &TeamId::new("A")).unwrap();
        assert_eq!(v.frame(&s.frames[0]), s.frames[0]);
    }

    #[test]
    fn second_period_ball_matches_reflection_oracle() {
        let s = seq();
        // A attacks -x in period 2.
        let v = normalize(&s, &TeamId::new("A")).unwrap();
        let ball = v.frame(&s.frames[1]).ball;
        let oracle = Vec2::new(-s.frames[1].ball.x, -s.frames[1].ball.y);
        assert_eq!(ball, oracle);
        assert_eq!(ball, Vec2::new(-10.0, 4.0));
    }

    #[test]
    fn reflection_is_an_involution() {
        let s = seq();
        let v = normalize(&s, &TeamId::new("A")).unwrap();
        for f in &s.frames {
            let twice = v.frame(&v.frame(f));
            assert_eq!(&twice, f);
        }
    }

    #[test]
    fn unknown_team_is_rejected() {
        let s = seq();
        assert!(matches!(
            normalize(&s, &TeamId::new("Z")),
            Err(Error::UnknownTeam(_))
        ));
    }
}
