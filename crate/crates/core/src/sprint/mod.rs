//! Run-effort and sprint detection from a player's speed signal.
//!
//! A run effort runs from one valid valley to the next. A valley only cuts
//! when the speed change around it exceeds a hysteresis `tau`, so small
//! fluctuations inside a single effort do not split it. Sprint intervals
//! therefore do not depend on the sprint threshold, only membership does.

mod efforts;
mod speed;

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::DetectionConfig;
use crate::error::{Error, Result};
use crate::tracking::{csv_writer, write_json, PlayerId, TrackingSequence};

pub use efforts::{detect_run_efforts, detect_sprints, RunEffort, Sprint};
pub use speed::{compute_speed, finite_difference_speed, moving_average, SpeedSignal};

/// All sprints of one player.
pub fn detect_player_sprints(
    seq: &TrackingSequence,
    player: &PlayerId,
    cfg: &DetectionConfig,
) -> Result<Vec<Sprint>> {
    let signals = compute_speed(seq, player, cfg)?;
    Ok(signals
        .iter()
        .flat_map(|s| {
            let efforts = detect_run_efforts(s, cfg.tau, cfg.min_effort_duration);
            detect_sprints(s, &efforts, cfg.sprint_threshold)
        })
        .collect())
}

/// Sprints of every rostered player, ordered by (period, start, player).
pub fn detect_all_sprints(seq: &TrackingSequence, cfg: &DetectionConfig) -> Vec<Sprint> {
    let players: Vec<&PlayerId> = seq.player_ids().collect();
    let mut out: Vec<Sprint> = players
        .par_iter()
        .flat_map_iter(|p| detect_player_sprints(seq, p, cfg).unwrap_or_default())
        .collect();
    sort_sprints(&mut out);
    out
}

pub fn sort_sprints(sprints: &mut [Sprint]) {
    sprints.sort_by(|a, b| {
        a.period()
            .cmp(&b.period())
            .then(a.start_time().total_cmp(&b.start_time()))
            .then_with(|| a.player().cmp(b.player()))
    });
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SprintRecord {
    pub player_id: String,
    pub team_id: String,
    pub period: u8,
    pub start_s: f64,
    pub end_s: f64,
    pub peak_s: f64,
    pub peak_speed_kmh: f64,
    pub distance_m: f64,
    pub mean_speed_kmh: f64,
}

impl SprintRecord {
    pub fn new(seq: &TrackingSequence, s: &Sprint) -> Self {
        SprintRecord {
            player_id: s.player().to_string(),
            team_id: seq.team_of(s.player()).map(|t| t.to_string()).unwrap_or_default(),
            period: s.period(),
            start_s: round3(s.start_time()),
            end_s: round3(s.end_time()),
            peak_s: round3(s.effort.peak_time),
            peak_speed_kmh: round3(s.effort.peak_speed),
            distance_m: round3(s.distance),
            mean_speed_kmh: round3(s.mean_speed),
        }
    }

    pub fn to_sprint(&self) -> Sprint {
        Sprint {
            effort: RunEffort {
                player: PlayerId::new(self.player_id.clone()),
                period: self.period,
                start_time: self.start_s,
                end_time: self.end_s,
                peak_time: self.peak_s,
                peak_speed: self.peak_speed_kmh,
            },
            distance: self.distance_m,
            mean_speed: self.mean_speed_kmh,
        }
    }
}

pub(crate) fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Writes the sprint list as CSV (`json = false`) or a JSON array.
pub fn write_sprints(path: &Path, seq: &TrackingSequence, sprints: &[Sprint], json: bool) -> Result<()> {
    let records: Vec<SprintRecord> = sprints.iter().map(|s| SprintRecord::new(seq, s)).collect();
    if json {
        return write_json(path, &records);
    }
    let mut w = csv_writer(path)?;
    for r in &records {
        w.serialize(r).map_err(|e| Error::parse(path, "write", e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record([
            "player_id",
            "team_id",
            "period",
            "start_s",
            "end_s",
            "peak_s",
            "peak_speed_kmh",
            "distance_m",
            "mean_speed_kmh",
        ])
        .map_err(|e| Error::parse(path, "write", e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
