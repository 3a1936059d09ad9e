//! Tunable constants for the whole pipeline.
//!
//! Defaults reproduce the published thresholds where they exist (run-effort
//! hysteresis of 4 km/h, 21 km/h sprint threshold, 80 % possession share,
//! and the category thresholds). The remaining values are declared defaults.
//! The config file is TOML; every key is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// km/h to m/s.
pub const KMH_TO_MS: f64 = 1000.0 / 3600.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tracking: TrackingConfig,
    pub detection: DetectionConfig,
    pub rules: RuleConfig,
    pub zones: ZoneConfig,
    pub roles: RoleConfig,
    pub plays: PlayConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingConfig {
    pub sample_rate: f64,
    /// Possession derivation: max ball distance for control, m.
    pub control_radius: f64,
    pub min_control_frames: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionConfig {
    /// Hysteresis on speed drops around a valley, km/h.
    pub tau: f64,
    /// Peak speed a run effort must strictly exceed, km/h.
    pub sprint_threshold: f64,
    /// Centered moving-average window, s.
    pub smoothing_window: f64,
    pub min_effort_duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleConfig {
    pub phase_share: f64,
    /// Net x-displacement that counts as moving forward or backward, m.
    pub move_threshold: f64,
    pub rwb_ball_share: f64,
    pub exs_ahead_margin: f64,
    pub bib_cross_window: f64,
    pub bib_flank_window: f64,
    pub prs_target_distance: f64,
    pub prs_passing_line_distance: f64,
    pub return_speed: f64,
    pub rec_mean_ahead: f64,
    pub int_min_angle_deg: f64,
    pub int_pass_margin: f64,
    pub cto_ball_share: f64,
    pub cto_target_speed: f64,
    pub cto_target_distance: f64,
    pub pup_offside_advance: f64,
    pub pup_ball_distance: f64,
    pub defensive_area_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZoneConfig {
    /// Depth of the scoring zone measured from the end line, m.
    pub scoring_zone_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoleConfig {
    pub window: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlayConfig {
    pub turnover_events: usize,
    pub resample_points: usize,
    /// Cost charged per unmatched player in the baseline similarity, m.
    pub unmatched_penalty: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tracking: TrackingConfig::default(),
            detection: DetectionConfig::default(),
            rules: RuleConfig::default(),
            zones: ZoneConfig::default(),
            roles: RoleConfig::default(),
            plays: PlayConfig::default(),
        }
    }
}

impl Default for TrackingConfig {
    fn default() -> Self {
        TrackingConfig {
            sample_rate: 10.0,
            control_radius: 1.5,
            min_control_frames: 3,
        }
    }
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            tau: 4.0,
            sprint_threshold: 21.0,
            smoothing_window: 0.5,
            min_effort_duration: 0.5,
        }
    }
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            phase_share: 0.8,
            move_threshold: 1.0,
            rwb_ball_share: 0.4,
            exs_ahead_margin: 3.0,
            bib_cross_window: 2.0,
            bib_flank_window: 1.0,
            prs_target_distance: 5.0,
            prs_passing_line_distance: 3.0,
            return_speed: 0.5,
            rec_mean_ahead: 10.0,
            int_min_angle_deg: 30.0,
            int_pass_margin: 2.0,
            cto_ball_share: 0.4,
            cto_target_speed: 15.0,
            cto_target_distance: 4.0,
            pup_offside_advance: 10.0,
            pup_ball_distance: 20.0,
            defensive_area_margin: 20.0,
        }
    }
}

impl Default for ZoneConfig {
    fn default() -> Self {
        ZoneConfig {
            scoring_zone_depth: 25.0,
        }
    }
}

impl Default for RoleConfig {
    fn default() -> Self {
        RoleConfig { window: 300.0 }
    }
}

impl Default for PlayConfig {
    fn default() -> Self {
        PlayConfig {
            turnover_events: 3,
            resample_points: 16,
            unmatched_penalty: 10.0,
        }
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Applies a `section.key=value` override, e.g. `detection.tau=5`.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{assignment}`")))?;
        let (section, field) = key
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Config(format!("expected section.key, got `{key}`")))?;
        let mut doc: toml::Table = toml::from_str(&self.to_toml_string())
            .map_err(|e| Error::Config(e.to_string()))?;
        let table = doc
            .get_mut(section)
            .and_then(|v| v.as_table_mut())
            .ok_or_else(|| Error::Config(format!("unknown section `{section}`")))?;
        let current = table
            .get(field)
            .ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
        let value = value.trim();
        let parsed = match current {
            toml::Value::Integer(_) => value.parse::<i64>().map(toml::Value::Integer).ok(),
            toml::Value::Float(_) => value.parse::<f64>().map(toml::Value::Float).ok(),
            toml::Value::Boolean(_) => value.parse::<bool>().map(toml::Value::Boolean).ok(),
            _ => Some(toml::Value::String(value.to_string())),
        }
        .ok_or_else(|| Error::Config(format!("bad value `{value}` for `{key}`")))?;
        table.insert(field.to_string(), parsed);
        *self = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        Ok(())
    }
}
