use crate::config::TrackingConfig;

use super::model::{PlayerId, TrackingSequence};

/// Fills `possession_team` / `possessor` for frames that lack them.
///
/// A player gains the ball after being the nearest player within
/// `control_radius` of it for `min_control_frames` consecutive frames; the
/// whole qualifying run is attributed to them. Between possessors the last
/// team keeps possession. Frames already carrying a team are left untouched
/// and reset the carried-over team. Frames that cannot be attributed stay
/// unknown.
pub fn derive_possession(seq: &TrackingSequence, cfg: &TrackingConfig) -> TrackingSequence {
    let mut frames = seq.frames.clone();
    let min_frames = cfg.min_control_frames.max(1);

    for period in seq.periods() {
        let range = seq.period_range(period);
        // Nearest in-range player per frame, only where the frame needs filling.
        let controller: Vec<Option<PlayerId>> = range
            .clone()
            .map(|i| {
                let f = &frames[i];
                if f.possession_team.is_some() {
                    return None;
                }
                f.players
                    .iter()
                    .map(|(id, p)| (id, p.dist(f.ball)))
                    .filter(|(_, d)| *d <= cfg.control_radius)
                    .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)))
                    .map(|(id, _)| id.clone())
            })
            .collect();

        let mut confirmed: Vec<Option<PlayerId>> = vec![None; controller.len()];
        let mut run_start = 0;
        for i in 0..=controller.len() {
            let boundary = i == controller.len() || controller[i] != controller[run_start];
            if boundary {
                if let Some(pid) = &controller[run_start] {
                    if i - run_start >= min_frames {
                        for slot in &mut confirmed[run_start..i] {
                            *slot = Some(pid.clone());
                        }
                    }
                }
                run_start = i;
            }
        }

        let mut current_team = None;
        for (k, i) in range.enumerate() {
            let f = &mut frames[i];
            if f.possession_team.is_some() {
                current_team = f.possession_team.clone();
                continue;
            }
            if let Some(pid) = &confirmed[k] {
                current_team = seq.team_of(pid).cloned();
                f.possessor = Some(pid.clone());
            }
            f.possession_team = current_team.clone();
        }
    }

    seq.with_frames(frames)
        .expect("possession derivation preserves sequence invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::model::fixtures::*;
    use crate::tracking::model::{Frame, Pitch, TeamId};

    fn seq_of(frames: Vec<Frame>) -> TrackingSequence {
        TrackingSequence::new(
            Pitch::default(),
            10.0,
            vec![roster("A", &["a1", "a2"]), roster("B", &["b1", "b2"])],
            directions(&[1]),
            frames,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn close_player_for_five_frames_possesses() {
        let frames = (0..5)
            .map(|i| frame(1, i as f64 * 0.1, &[("a1", 0.5, 0.0), ("b1", 10.0, 0.0)], (0.0, 0.0)))
            .collect();
        let out = derive_possession(&seq_of(frames), &TrackingConfig::default());
        for f in &out.frames {
            assert_eq!(f.possessor, Some(PlayerId::new("a1")));
            assert_eq!(f.possession_team, Some(TeamId::new("A")));
        }
    }

    #[test]
    fn ball_in_flight_keeps_team() {
        // a1 holds for 3 frames, ball flies for 4 frames, a2 holds for 3.
        let mut frames = Vec::new();
        for i in 0..10 {
            let t = i as f64 * 0.1;
            let ball = match i {
                0..=2 => (0.0, 0.0),
                3..=6 => (5.0 * (i - 2) as f64, 0.0),
                _ => (25.0, 0.0),
            };
            frames.push(frame(1, t, &[("a1", 0.3, 0.0), ("a2", 25.3, 0.0)], ball));
        }
        let out = derive_possession(&seq_of(frames), &TrackingConfig::default());
        assert!(out.frames.iter().all(|f| f.possession_team == Some(TeamId::new("A"))));
        assert_eq!(out.frames[4].possessor, None);
        assert_eq!(out.frames[8].possessor, Some(PlayerId::new("a2")));
    }

    #[test]
    fn alternating_controllers_flip_only_after_min_frames() {
        // Hand-traced 12-frame fixture: nearest player by frame is
        // a1 a1 a1 b1 a1 b1 a1 b1 b1 b1 a1 b1.
        let pattern = ["a1", "a1", "a1", "b1", "a1", "b1", "a1", "b1", "b1", "b1", "a1", "b1"];
        let frames = pattern
            .iter()
            .enumerate()
            .map(|(i, who)| {
                let (ax, bx) = if *who == "a1" { (0.4, 1.2) } else { (1.2, 0.4) };
                frame(1, i as f64 * 0.1, &[("a1", -ax, 0.0), ("b1", bx, 0.0)], (0.0, 0.0))
            })
            .collect();
        let out = derive_possession(&seq_of(frames), &TrackingConfig::default());
        let teams: Vec<&str> = out
            .frames
            .iter()
            .map(|f| f.possession_team.as_ref().map(|t| t.as_str()).unwrap_or("-"))
            .collect();
        assert_eq!(
            teams,
            vec!["A", "A", "A", "A", "A", "A", "A", "B", "B", "B", "B", "B"]
        );
        let possessors: Vec<Option<&str>> = out
            .frames
            .iter()
            .map(|f| f.possessor.as_ref().map(|p| p.as_str()))
            .collect();
        assert_eq!(possessors[3], None);
        assert_eq!(possessors[7], Some("b1"));
        assert_eq!(possessors[10], None);
    }

    #[test]
    fn possessor_is_always_within_control_radius() {
        let cfg = TrackingConfig::default();
        let frames = (0..30)
            .map(|i| {
                let t = i as f64 * 0.1;
                let bx = (i as f64 * 0.7).sin() * 3.0;
                frame(1, t, &[("a1", 0.0, 0.0), ("b1", 2.0, 0.5)], (bx, 0.2))
            })
            .collect();
        let out = derive_possession(&seq_of(frames), &cfg);
        for f in &out.frames {
            if let Some(p) = &f.possessor {
                assert!(f.players[p].dist(f.ball) <= cfg.control_radius);
            }
        }
    }
}
