use serde::{Deserialize, Serialize};

use crate::tracking::PlayerId;

use super::speed::SpeedSignal;

/// One accelerate, peak, decelerate movement of a player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEffort {
    pub player: PlayerId,
    pub period: u8,
    pub start_time: f64,
    pub end_time: f64,
    pub peak_time: f64,
    /// km/h
    pub peak_speed: f64,
}

impl RunEffort {
    pub fn duration(&self) -> f64 {
        self.end_time - self.start_time
    }
}

/// A run effort whose peak exceeds the sprint threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sprint {
    pub effort: RunEffort,
    /// Path length over the effort, m.
    pub distance: f64,
    /// km/h
    pub mean_speed: f64,
}

impl Sprint {
    pub fn player(&self) -> &PlayerId {
        &self.effort.player
    }
    pub fn period(&self) -> u8 {
        self.effort.period
    }
    pub fn start_time(&self) -> f64 {
        self.effort.start_time
    }
    pub fn end_time(&self) -> f64 {
        self.effort.end_time
    }
    pub fn duration(&self) -> f64 {
        self.effort.duration()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ExtremumKind {
    Peak,
    Valley,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Extremum {
    pub kind: ExtremumKind,
    /// Sample index; plateaus collapse to their (lower) midpoint.
    pub index: usize,
}

/// Alternating peaks and valleys of `values`, endpoints included.
///
/// Runs of equal values are treated as one sample located at the run's
/// midpoint. A constant signal has no extrema.
pub(crate) fn extrema(values: &[f64]) -> Vec<Extremum> {
    let mut runs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.0 == v => run.2 = i,
            _ => runs.push((v, i, i)),
        }
    }
    if runs.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, &(v, first, last)) in runs.iter().enumerate() {
        let prev = k.checked_sub(1).map(|j| runs[j].0);
        let next = runs.get(k + 1).map(|r| r.0);
        let above = |o: Option<f64>| o.map_or(true, |o| v > o);
        let below = |o: Option<f64>| o.map_or(true, |o| v < o);
        let kind = if above(prev) && above(next) {
            ExtremumKind::Peak
        } else if below(prev) && below(next) {
            ExtremumKind::Valley
        } else {
            continue;
        };
        out.push(Extremum {
            kind,
            index: (first + last) / 2,
        });
    }
    out
}

/// Sample indices where run efforts are cut.
///
/// A valley is a cut-off when the drop from the previous peak or the rise
/// to the next peak exceeds `tau`. Both signal ends are always cut-offs.
pub(crate) fn cutoffs(values: &[f64], tau: f64) -> Vec<usize> {
    let ext = extrema(values);
    let mut cuts = vec![0];
    for (k, e) in ext.iter().enumerate() {
        if e.kind != ExtremumKind::Valley {
            continue;
        }
        let v = values[e.index];
        let prev_peak = k.checked_sub(1).map(|j| values[ext[j].index]);
        let next_peak = ext.get(k + 1).map(|n| values[n.index]);
        let valid = prev_peak.is_some_and(|p| p - v > tau) || next_peak.is_some_and(|p| p - v > tau);
        if valid && e.index > 0 && e.index < values.len() - 1 {
            cuts.push(e.index);
        }
    }
    if values.len() > 1 {
        cuts.push(values.len() - 1);
    }
    cuts.dedup();
    cuts
}

/// Splits a smoothed speed signal into run efforts.
///
/// Each stretch between consecutive cut-offs that contains at least one
/// peak becomes an effort, peaking at its earliest maximum. Efforts shorter
/// than `min_duration` seconds are dropped. Adjacent efforts share their
/// cut-off sample.
pub fn detect_run_efforts(signal: &SpeedSignal, tau: f64, min_duration: f64) -> Vec<RunEffort> {
    let values = &signal.speeds;
    if values.len() < 2 {
        return Vec::new();
    }
    let peaks: Vec<usize> = extrema(values)
        .into_iter()
        .filter(|e| e.kind == ExtremumKind::Peak)
        .map(|e| e.index)
        .collect();
    let cuts = cutoffs(values, tau);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !peaks.iter().any(|&p| p >= a && p <= b) {
            continue;
        }
        let mut peak = a;
        for i in a..=b {
            if values[i] > values[peak] {
                peak = i;
            }
        }
        let effort = RunEffort {
            player: signal.player.clone(),
            period: signal.period,
            start_time: signal.times[a],
            end_time: signal.times[b],
            peak_time: signal.times[peak],
            peak_speed: values[peak],
        };
        if effort.duration() + 1e-9 >= min_duration {
            out.push(effort);
        }
    }
    out
}

/// Keeps efforts peaking strictly above `threshold` km/h and attaches
/// distance and mean speed from the signal they came from.
pub fn detect_sprints(signal: &SpeedSignal, efforts: &[RunEffort], threshold: f64) -> Vec<Sprint> {
    efforts
        .iter()
        .filter(|e| e.peak_speed > threshold)
        .map(|e| {
            let a = signal.index_of(e.start_time);
            let b = signal.index_of(e.end_time);
            let distance = if signal.positions.len() == signal.len() && b > a {
                signal.positions[a..=b]
                    .windows(2)
                    .map(|w| w[0].dist(w[1]))
                    .sum()
            } else {
                // No positions: integrate the raw speed (trapezoid rule).
                (a..b)
                    .map(|i| {
                        let dt = signal.times[i + 1] - signal.times[i];
                        0.5 * (signal.raw_speeds[i] + signal.raw_speeds[i + 1]) / 3.6 * dt
                    })
                    .sum()
            };
            let duration = e.duration();
            Sprint {
                effort: e.clone(),
                distance,
                mean_speed: if duration > 0.0 {
                    distance / duration * 3.6
                } else {
                    0.0
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(speeds: &[f64]) -> SpeedSignal {
        let times = (0..speeds.len()).map(|i| i as f64 * 0.1).collect();
        SpeedSignal::from_speeds(PlayerId::new("p"), 1, times, speeds.to_vec())
    }

    /// Linear ramps through the given knots, `steps` samples per leg.
    fn ramps(knots: &[f64], steps: usize) -> Vec<f64> {
        let mut out = vec![knots[0]];
        for w in knots.windows(2) {
            for s in 1..=steps {
                out.push(w[0] + (w[1] - w[0]) * s as f64 / steps as f64);
            }
        }
        out
    }

    #[test]
    fn single_hump_is_one_effort() {
        let s = signal(&ramps(&[0.0, 25.0, 0.0], 10));
        let e = detect_run_efforts(&s, 4.0, 0.5);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].start_time, 0.0);
        assert!((e[0].end_time - 2.0).abs() < 1e-9);
        assert!((e[0].peak_time - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deep_valley_splits() {
        // 0 -> 10 -> 2 -> 12 -> 0: both sides of the valley drop by > 4.
        let s = signal(&ramps(&[0.0, 10.0, 2.0, 12.0, 0.0], 10));
        let e = detect_run_efforts(&s, 4.0, 0.5);
        assert_eq!(e.len(), 2);
        assert!((e[0].end_time - 2.0).abs() < 1e-9);
        assert!((e[1].start_time - 2.0).abs() < 1e-9);
        assert_eq!(e[0].peak_speed, 10.0);
        assert_eq!(e[1].peak_speed, 12.0);
    }

    #[test]
    fn shallow_valleys_merge() {
        // Three humps; each interior valley is at most 4 km/h below its
        // neighbors, which does not exceed tau.
        let s = signal(&ramps(&[2.0, 20.0, 17.0, 21.0, 18.0, 22.0, 3.0], 10));
        let e = detect_run_efforts(&s, 4.0, 0.5);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].start_time, 0.0);
        assert!((e[0].end_time - 6.0).abs() < 1e-9);
        assert_eq!(e[0].peak_speed, 22.0);
        assert!((e[0].peak_time - 5.0).abs() < 1e-9);
    }

    #[test]
    fn one_sided_drop_is_enough() {
        // Drop of 6 before the valley, rise of only 2 after it.
        let s = signal(&ramps(&[0.0, 14.0, 8.0, 10.0, 0.0], 10));
        let e = detect_run_efforts(&s, 4.0, 0.0);
        assert_eq!(e.len(), 2);
        assert!((e[0].end_time - 2.0).abs() < 1e-9);
    }

    #[test]
    fn plateau_valley_cuts_at_midpoint() {
        let mut v = ramps(&[0.0, 20.0, 5.0], 10);
        v.extend([5.0; 4]);
        v.extend(ramps(&[5.0, 20.0, 0.0], 10).into_iter().skip(1));
        // Plateau of value 5 spans indices 20..=24, midpoint 22.
        let e = detect_run_efforts(&signal(&v), 4.0, 0.5);
        assert_eq!(e.len(), 2);
        assert!((e[0].end_time - 2.2).abs() < 1e-9);
        assert!((e[1].start_time - 2.2).abs() < 1e-9);
    }

    #[test]
    fn short_efforts_are_dropped() {
        let s = signal(&ramps(&[0.0, 15.0, 0.0], 2));
        assert!(detect_run_efforts(&s, 4.0, 0.5).is_empty());
        assert_eq!(detect_run_efforts(&s, 4.0, 0.0).len(), 1);
    }

    #[test]
    fn constant_signal_has_no_effort() {
        assert!(detect_run_efforts(&signal(&[7.0; 30]), 4.0, 0.5).is_empty());
    }

    #[test]
    fn ties_pick_earliest_peak() {
        let s = signal(&ramps(&[0.0, 22.0, 20.0, 22.0, 0.0], 10));
        let e = detect_run_efforts(&s, 4.0, 0.5);
        assert_eq!(e.len(), 1);
        assert!((e[0].peak_time - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sprint_threshold_is_strict() {
        let mk = |peak: f64| RunEffort {
            player: PlayerId::new("p"),
            period: 1,
            start_time: 0.0,
            end_time: 1.0,
            peak_time: 0.5,
            peak_speed: peak,
        };
        let s = signal(&[0.0; 11]);
        assert_eq!(detect_sprints(&s, &[mk(25.0)], 21.0).len(), 1);
        assert!(detect_sprints(&s, &[mk(21.0)], 21.0).is_empty());
        assert_eq!(
            detect_sprints(&s, &[mk(18.0), mk(22.0), mk(30.0)], 21.0).len(),
            2
        );
    }

    #[test]
    fn sprint_distance_from_positions() {
        let mut s = signal(&ramps(&[0.0, 25.0, 0.0], 10));
        s.positions = (0..s.len())
            .map(|i| crate::geometry::Vec2::new(i as f64 * 0.5, 0.0))
            .collect();
        let e = detect_run_efforts(&s, 4.0, 0.5);
        let sp = detect_sprints(&s, &e, 21.0);
        assert_eq!(sp.len(), 1);
        assert!((sp[0].distance - 10.0).abs() < 1e-9);
        assert!((sp[0].mean_speed - 18.0).abs() < 1e-9);
    }
}
