//! Sprint counts and physical totals per (team, role, category).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roles::{momentary_role, RoleTimeline};
use crate::rules::{ClassifiedSprint, SprintCategory};
use crate::sprint::Sprint;
use crate::tracking::{write_text, TrackingSequence};

/// Role bucket for sprints whose role is not known at their start.
pub const UNKNOWN_ROLE: &str = "UNKNOWN";

/// One classified sprint reduced to what the table needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandInput {
    pub team: String,
    pub role: String,
    pub category: SprintCategory,
    pub distance: f64,
    pub duration: f64,
    pub peak_speed: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DemandCell {
    pub count: u64,
    pub total_distance: f64,
    pub total_duration: f64,
    peak_speed_sum: f64,
}

impl DemandCell {
    pub fn mean_peak_speed(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.peak_speed_sum / self.count as f64
        }
    }

    fn add(&mut self, d: &DemandInput) {
        self.count += 1;
        self.total_distance += d.distance;
        self.total_duration += d.duration;
        self.peak_speed_sum += d.peak_speed;
    }

    fn merge(&mut self, o: &DemandCell) {
        self.count += o.count;
        self.total_distance += o.total_distance;
        self.total_duration += o.total_duration;
        self.peak_speed_sum += o.peak_speed_sum;
    }
}

pub type CellKey = (String, String, SprintCategory);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DemandTable {
    pub teams: BTreeSet<String>,
    pub cells: BTreeMap<CellKey, DemandCell>,
}

/// Role at the sprint's start time, or `UNKNOWN`.
pub fn sprint_role(sprint: &Sprint, roles: Option<&RoleTimeline>) -> String {
    roles
        .and_then(|r| momentary_role(r, sprint.player(), sprint.period(), sprint.start_time()).ok())
        .map(|r| r.to_string())
        .unwrap_or_else(|| UNKNOWN_ROLE.to_string())
}

pub fn demand_inputs(
    seq: &TrackingSequence,
    classified: &[ClassifiedSprint],
    roles: Option<&RoleTimeline>,
) -> Vec<DemandInput> {
    classified
        .iter()
        .map(|c| DemandInput {
            team: seq.team_of(c.sprint.player()).map(|t| t.to_string()).unwrap_or_default(),
            role: sprint_role(&c.sprint, roles),
            category: c.classification.category,
            distance: c.sprint.distance,
            duration: c.sprint.duration(),
            peak_speed: c.sprint.effort.peak_speed,
        })
        .collect()
}

/// Table over both teams of `seq`; every team appears on the axis even
/// without sprints.
pub fn aggregate(seq: &TrackingSequence, classified: &[ClassifiedSprint], roles: Option<&RoleTimeline>) -> DemandTable {
    let mut t = aggregate_inputs(&demand_inputs(seq, classified, roles));
    t.teams.extend(seq.team_ids().iter().map(|t| t.to_string()));
    t
}

/// Folds in a canonical order, so float totals do not depend on the order
/// of `inputs`.
pub fn aggregate_inputs(inputs: &[DemandInput]) -> DemandTable {
    let mut sorted: Vec<&DemandInput> = inputs.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.team, &a.role, a.category)
            .cmp(&(&b.team, &b.role, b.category))
            .then(a.distance.total_cmp(&b.distance))
            .then(a.duration.total_cmp(&b.duration))
            .then(a.peak_speed.total_cmp(&b.peak_speed))
    });
    let mut t = DemandTable::default();
    for d in sorted {
        t.teams.insert(d.team.clone());
        t.cells
            .entry((d.team.clone(), d.role.clone(), d.category))
            .or_default()
            .add(d);
    }
    t
}

impl DemandTable {
    pub fn total_count(&self) -> u64 {
        self.cells.values().map(|c| c.count).sum()
    }

    pub fn team_count(&self, team: &str) -> u64 {
        self.cells
            .iter()
            .filter(|(k, _)| k.0 == team)
            .map(|(_, c)| c.count)
            .sum()
    }

    pub fn count(&self, team: &str, role: &str, category: SprintCategory) -> u64 {
        self.cells
            .get(&(team.to_string(), role.to_string(), category))
            .map_or(0, |c| c.count)
    }

    /// Adds another table cell by cell.
    pub fn merge(&mut self, other: &DemandTable) {
        self.teams.extend(other.teams.iter().cloned());
        for (k, c) in &other.cells {
            self.cells.entry(k.clone()).or_default().merge(c);
        }
    }

    /// Delimiter-separated table, one row per non-empty cell.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("team,role,category,count,total_distance_m,total_duration_s,mean_peak_speed_kmh\n");
        for ((team, role, cat), c) in &self.cells {
            let _ = writeln!(
                s,
                "{team},{role},{cat},{},{:.3},{:.3},{:.3}",
                c.count,
                c.total_distance,
                c.total_duration,
                c.mean_peak_speed()
            );
        }
        s
    }

    /// Long format for plotting: one (team, role, category, metric, value)
    /// row per metric.
    pub fn to_long_csv(&self) -> String {
        let mut s = String::from("team,role,category,metric,value\n");
        for ((team, role, cat), c) in &self.cells {
            for (metric, value) in [
                ("count", c.count as f64),
                ("total_distance_m", c.total_distance),
                ("total_duration_s", c.total_duration),
                ("mean_peak_speed_kmh", c.mean_peak_speed()),
            ] {
                let _ = writeln!(s, "{team},{role},{cat},{metric},{value:.3}");
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|((team, role, cat), c)| {
                serde_json::json!({
                    "team": team,
                    "role": role,
                    "category": cat,
                    "count": c.count,
                    "total_distance_m": round3(c.total_distance),
                    "total_duration_s": round3(c.total_duration),
                    "mean_peak_speed_kmh": round3(c.mean_peak_speed()),
                })
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&serde_json::json!({
            "teams": self.teams,
            "cells": rows,
        }))
        .expect("serializable");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv` and `<stem>_long.csv` next to `path`, or a
    /// single JSON document when `json` is set.
    pub fn write(&self, path: &Path, json: bool) -> Result<()> {
        if json {
            return write_text(path, &self.to_json());
        }
        write_text(path, &self.to_csv())?;
        write_text(&long_path(path), &self.to_long_csv())
    }
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// `table.csv` -> `table_long.csv`.
pub fn long_path(path: &Path) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    path.with_file_name(format!("{stem}_long.csv"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDifference {
    pub team: String,
    pub role: String,
    pub category: SprintCategory,
    pub count_a: u64,
    pub count_b: u64,
    pub abs_diff: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleDivergence {
    pub team: String,
    pub role: String,
    /// Total-variation distance between the two category distributions.
    pub tv_distance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub cells: Vec<CellDifference>,
    pub roles: Vec<RoleDivergence>,
}

impl DivergenceReport {
    pub fn max_tv(&self) -> f64 {
        self.roles.iter().map(|r| r.tv_distance).fold(0.0, f64::max)
    }

    /// TV distance of the pooled category distributions over all roles.
    pub fn total_abs_diff(&self) -> u64 {
        self.cells.iter().map(|c| c.abs_diff).sum()
    }
}

/// Per-cell count differences and per-(team, role) TV distance. Tables
/// must cover the same teams; missing cells count as zero.
pub fn compare_tables(a: &DemandTable, b: &DemandTable) -> Result<DivergenceReport> {
    if a.teams != b.teams {
        return Err(Error::AxisMismatch(format!(
            "teams {:?} vs {:?}",
            a.teams, b.teams
        )));
    }
    let keys: BTreeSet<&CellKey> = a.cells.keys().chain(b.cells.keys()).collect();
    let count = |t: &DemandTable, k: &CellKey| t.cells.get(k).map_or(0, |c| c.count);
    let cells: Vec<CellDifference> = keys
        .iter()
        .map(|k| {
            let (ca, cb) = (count(a, k), count(b, k));
            CellDifference {
                team: k.0.clone(),
                role: k.1.clone(),
                category: k.2,
                count_a: ca,
                count_b: cb,
                abs_diff: ca.abs_diff(cb),
            }
        })
        .collect();
    let groups: BTreeSet<(&String, &String)> = keys.iter().map(|k| (&k.0, &k.1)).collect();
    let roles = groups
        .into_iter()
        .map(|(team, role)| {
            let in_group = |c: &&CellDifference| &c.team == team && &c.role == role;
            let na: u64 = cells.iter().filter(in_group).map(|c| c.count_a).sum();
            let nb: u64 = cells.iter().filter(in_group).map(|c| c.count_b).sum();
            let tv = match (na, nb) {
                (0, 0) => 0.0,
                (0, _) | (_, 0) => 1.0,
                _ => {
                    0.5 * cells
                        .iter()
                        .filter(in_group)
                        .map(|c| (c.count_a as f64 / na as f64 - c.count_b as f64 / nb as f64).abs())
                        .sum::<f64>()
                }
            };
            RoleDivergence {
                team: team.clone(),
                role: role.clone(),
                tv_distance: tv,
            }
        })
        .collect();
    Ok(DivergenceReport { cells, roles })
}
