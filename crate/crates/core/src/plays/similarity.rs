use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::roles::min_cost_assignment;
use crate::tracking::{normalize, TrackingSequence};

use super::segment::Play;

/// One temporal sample of a play, in the play team's attacking view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaySample {
    pub team: Vec<Vec2>,
    pub opponents: Vec<Vec2>,
    pub ball: Vec2,
}

/// A play resampled to a fixed number of instants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayTrajectory {
    pub samples: Vec<PlaySample>,
}

/// Samples `n` evenly spaced instants over the play, each taken from the
/// nearest frame.
pub fn resample_play(seq: &TrackingSequence, play: &Play, n: usize) -> Result<PlayTrajectory> {
    let view = normalize(seq, &play.team)?;
    let frames = &seq.frames[play.frames.0..play.frames.1];
    if frames.is_empty() {
        return Err(Error::Validation(format!(
            "play of {} at {:.3}s has no frames",
            play.team, play.start_time
        )));
    }
    let n = n.max(1);
    let samples = (0..n)
        .map(|k| {
            let t = if n == 1 {
                play.start_time
            } else {
                play.start_time + play.duration() * k as f64 / (n - 1) as f64
            };
            let i = frames.partition_point(|f| f.time < t).min(frames.len() - 1);
            let i = if i > 0 && (frames[i - 1].time - t).abs() <= (frames[i].time - t).abs() { i - 1 } else { i };
            let f = view.frame(&frames[i]);
            let (mut team, mut opponents) = (Vec::new(), Vec::new());
            for (p, q) in &f.players {
                if seq.team_of(p) == Some(&play.team) {
                    team.push(*q);
                } else {
                    opponents.push(*q);
                }
            }
            PlaySample { team, opponents, ball: f.ball }
        })
        .collect();
    Ok(PlayTrajectory { samples })
}

/// A play-to-play dissimilarity; lower is more similar.
pub trait SimilarityBackend: Send + Sync {
    fn id(&self) -> &str;
    fn distance(&self, a: &PlayTrajectory, b: &PlayTrajectory) -> f64;
}

/// Per sample: optimal assignment between the two team sets, the same for
/// the opponents, plus the ball gap; each player left unmatched costs
/// `unmatched_penalty`. The result is the mean over samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignmentBaseline {
    pub unmatched_penalty: f64,
}

pub const BASELINE_ID: &str = "baseline";

fn set_distance(a: &[Vec2], b: &[Vec2], penalty: f64) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let unmatched = (large.len() - small.len()) as f64 * penalty;
    if small.is_empty() {
        return unmatched;
    }
    let cost: Vec<Vec<f64>> = small.iter().map(|p| large.iter().map(|q| p.dist(*q)).collect()).collect();
    min_cost_assignment(&cost).1 + unmatched
}

impl SimilarityBackend for AssignmentBaseline {
    fn id(&self) -> &str {
        BASELINE_ID
    }

    fn distance(&self, a: &PlayTrajectory, b: &PlayTrajectory) -> f64 {
        let n = a.samples.len().min(b.samples.len());
        if n == 0 {
            return f64::INFINITY;
        }
        let total: f64 = a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| {
                set_distance(&x.team, &y.team, self.unmatched_penalty)
                    + set_distance(&x.opponents, &y.opponents, self.unmatched_penalty)
                    + x.ball.dist(y.ball)
            })
            .sum();
        total / n as f64
    }
}

/// Backends by id. Starts with the assignment baseline.
pub struct BackendRegistry {
    backends: BTreeMap<String, Box<dyn SimilarityBackend>>,
}

impl BackendRegistry {
    pub fn new(unmatched_penalty: f64) -> Self {
        let mut r = BackendRegistry { backends: BTreeMap::new() };
        r.register(Box::new(AssignmentBaseline { unmatched_penalty }));
        r
    }

    pub fn register(&mut self, backend: Box<dyn SimilarityBackend>) {
        self.backends.insert(backend.id().to_string(), backend);
    }

    pub fn get(&self, id: &str) -> Result<&dyn SimilarityBackend> {
        self.backends
            .get(id)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownBackend(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.backends.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(pts: &[[(f64, f64); 3]]) -> PlayTrajectory {
        let v = |(x, y): (f64, f64)| Vec2::new(x, y);
        PlayTrajectory {
            samples: pts
                .iter()
                .map(|[a, b, ball]| PlaySample { team: vec![v(*a)], opponents: vec![v(*b)], ball: v(*ball) })
                .collect(),
        }
    }

    #[test]
    fn translated_copy_costs_one_meter_per_entity() {
        let a = traj(&[[(0.0, 0.0), (5.0, 0.0), (1.0, 0.0)], [(2.0, 0.0), (6.0, 1.0), (3.0, 0.0)]]);
        let b = traj(&[[(1.0, 0.0), (6.0, 0.0), (2.0, 0.0)], [(3.0, 0.0), (7.0, 1.0), (4.0, 0.0)]]);
        let base = AssignmentBaseline { unmatched_penalty: 10.0 };
        assert_eq!(base.distance(&a, &a), 0.0);
        assert!((base.distance(&a, &b) - 3.0).abs() < 1e-12);
        assert_eq!(base.distance(&a, &b), base.distance(&b, &a));
    }

    #[test]
    fn unmatched_players_are_penalized() {
        let p = |x| Vec2::new(x, 0.0);
        assert_eq!(set_distance(&[p(0.0)], &[p(0.0), p(3.0)], 10.0), 10.0);
        assert_eq!(set_distance(&[], &[p(0.0)], 7.0), 7.0);
    }

    #[test]
    fn unknown_backend_is_an_error() {
        let r = BackendRegistry::new(10.0);
        assert!(r.get(BASELINE_ID).is_ok());
        assert!(matches!(r.get("play2vec"), Err(Error::UnknownBackend(_))));
    }
}
