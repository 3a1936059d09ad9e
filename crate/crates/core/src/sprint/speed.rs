use serde::{Deserialize, Serialize};

use crate::config::DetectionConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::tracking::{PlayerId, TrackingSequence};

/// Speed of one player over a contiguous run of frames (no gaps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedSignal {
    pub player: PlayerId,
    pub period: u8,
    pub times: Vec<f64>,
    /// Smoothed speed, km/h.
    pub speeds: Vec<f64>,
    /// Unsmoothed finite-difference speed, km/h.
    pub raw_speeds: Vec<f64>,
    pub positions: Vec<Vec2>,
}

impl SpeedSignal {
    /// Builds a signal from smoothed speeds alone (positions unknown).
    /// Used for hand-constructed signals and tests.
    pub fn from_speeds(player: PlayerId, period: u8, times: Vec<f64>, speeds: Vec<f64>) -> Self {
        SpeedSignal {
            player,
            period,
            raw_speeds: speeds.clone(),
            positions: Vec::new(),
            times,
            speeds,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the sample at time `t` (nearest).
    pub fn index_of(&self, t: f64) -> usize {
        let i = self.times.partition_point(|&s| s < t);
        if i == 0 {
            0
        } else if i >= self.times.len() {
            self.times.len() - 1
        } else if (self.times[i] - t).abs() < (t - self.times[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }
}

/// Speed signals of one player, one per gap-free stretch of frames.
///
/// Raw speed uses central differences in the interior and one-sided
/// differences at the ends; smoothing is a centered moving average of
/// `smoothing_window` seconds, truncated at the ends.
pub fn compute_speed(
    seq: &TrackingSequence,
    player: &PlayerId,
    cfg: &DetectionConfig,
) -> Result<Vec<SpeedSignal>> {
    if seq.team_of(player).is_none() {
        return Err(Error::UnknownPlayer(player.to_string()));
    }
    let rate = seq.sample_rate;
    let window = smoothing_samples(cfg.smoothing_window, rate);
    let mut out = Vec::new();
    for period in seq.periods() {
        let frames = &seq.frames[seq.period_range(period)];
        let mut i = 0;
        while i < frames.len() {
            if frames[i].position(player).is_none() {
                i += 1;
                continue;
            }
            let start = i;
            while i < frames.len() && frames[i].position(player).is_some() {
                i += 1;
            }
            if i - start < 2 {
                continue;
            }
            let times: Vec<f64> = frames[start..i].iter().map(|f| f.time).collect();
            let positions: Vec<Vec2> = frames[start..i]
                .iter()
                .map(|f| f.position(player).expect("checked present"))
                .collect();
            let raw_speeds = finite_difference_speed(&positions, rate);
            let speeds = moving_average(&raw_speeds, window);
            out.push(SpeedSignal {
                player: player.clone(),
                period,
                times,
                speeds,
                raw_speeds,
                positions,
            });
        }
    }
    Ok(out)
}

pub(crate) fn smoothing_samples(window_s: f64, rate: f64) -> usize {
    let n = (window_s * rate).round().max(1.0) as usize;
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

/// Speed magnitude in km/h from positions sampled at `rate` Hz.
pub fn finite_difference_speed(positions: &[Vec2], rate: f64) -> Vec<f64> {
    let n = positions.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let v = if i == 0 {
                (positions[1] - positions[0]) * rate
            } else if i == n - 1 {
                (positions[n - 1] - positions[n - 2]) * rate
            } else {
                (positions[i + 1] - positions[i - 1]) * (rate / 2.0)
            };
            v.norm() * 3.6
        })
        .collect()
}

/// Centered moving average over `window` samples (odd), truncated at edges.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().copied().unwrap_or(0.0) + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::fixtures::*;
    use crate::tracking::{Frame, Pitch};

    fn seq_with(positions: &[Option<(f64, f64)>]) -> TrackingSequence {
        let frames: Vec<Frame> = positions
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let players: Vec<(&str, f64, f64)> =
                    p.iter().map(|(x, y)| ("a1", *x, *y)).collect();
                frame(1, i as f64 * 0.1, &players, (0.0, 0.0))
            })
            .collect();
        TrackingSequence::new(
            Pitch::default(),
            10.0,
            vec![roster("A", &["a1"]), roster("B", &["b1"])],
            directions(&[1]),
            frames,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn half_meter_per_frame_is_18_kmh() {
        let pos: Vec<_> = (0..20).map(|i| Some((i as f64 * 0.5 - 5.0, 0.0))).collect();
        let sig = compute_speed(&seq_with(&pos), &PlayerId::new("a1"), &DetectionConfig::default())
            .unwrap();
        assert_eq!(sig.len(), 1);
        for s in &sig[0].speeds {
            assert!((s - 18.0).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn stationary_player_has_zero_speed() {
        let pos: Vec<_> = (0..10).map(|_| Some((3.0, -2.0))).collect();
        let sig = compute_speed(&seq_with(&pos), &PlayerId::new("a1"), &DetectionConfig::default())
            .unwrap();
        assert!(sig[0].speeds.iter().all(|&s| s == 0.0));
        assert!(sig[0].raw_speeds.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn gaps_split_the_signal() {
        let mut pos: Vec<_> = (0..10).map(|i| Some((i as f64, 0.0))).collect();
        pos[4] = None;
        let sig = compute_speed(&seq_with(&pos), &PlayerId::new("a1"), &DetectionConfig::default())
            .unwrap();
        assert_eq!(sig.len(), 2);
        assert_eq!(sig[0].len(), 4);
        assert_eq!(sig[1].len(), 5);
    }

    #[test]
    fn unknown_player_is_an_error() {
        let pos: Vec<_> = (0..3).map(|_| Some((0.0, 0.0))).collect();
        assert!(matches!(
            compute_speed(&seq_with(&pos), &PlayerId::new("zz"), &DetectionConfig::default()),
            Err(Error::UnknownPlayer(_))
        ));
    }

    #[test]
    fn smoothed_speed_tracks_analytic_derivative() {
        // x = v t, y = A sin(w t); |d/dt| = sqrt(v^2 + (A w cos w t)^2).
        let (v, a, w) = (2.0, 3.0, 2.0 * std::f64::consts::PI / 8.0);
        let n = 400;
        let pos: Vec<_> = (0..n)
            .map(|i| {
                let t = i as f64 * 0.1;
                Some((-40.0 + v * t, a * (w * t).sin()))
            })
            .collect();
        let sig = compute_speed(&seq_with(&pos), &PlayerId::new("a1"), &DetectionConfig::default())
            .unwrap();
        for i in 5..n - 5 {
            let t = i as f64 * 0.1;
            let analytic = (v * v + (a * w * (w * t).cos()).powi(2)).sqrt() * 3.6;
            let rel = (sig[0].speeds[i] - analytic).abs() / analytic;
            assert!(rel < 0.02, "t={t} rel={rel}");
        }
    }

    #[test]
    fn window_is_odd() {
        assert_eq!(smoothing_samples(0.5, 10.0), 5);
        assert_eq!(smoothing_samples(0.5, 25.0), 13);
        assert_eq!(smoothing_samples(0.4, 10.0), 5);
        assert_eq!(smoothing_samples(0.0, 10.0), 1);
    }
}
