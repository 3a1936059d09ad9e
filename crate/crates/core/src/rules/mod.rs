//! Rule-based sprint categories: phase gating by possession share, one
//! predicate per category row, and priority resolution.

mod category;
mod conditions;
mod context;

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::roles::{assign_roles, RoleTimeline};
use crate::sprint::{detect_all_sprints, Sprint, SprintRecord};
use crate::tracking::{csv_writer, write_json, TrackingSequence};

pub use category::{resolve_priority, CategoryGroup, Phase, SprintCategory};
pub use conditions::{evaluate_category, TraceEntry};
pub use context::SprintContext;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub category: SprintCategory,
    pub phase: Phase,
    pub matched: BTreeSet<SprintCategory>,
    pub trace: Vec<TraceEntry>,
}

/// Attacking when the sprinter's team holds the ball for more than the
/// phase share over the interval or over its first half; defending when
/// the opponent does.
pub fn phase_of(ctx: &SprintContext) -> Phase {
    let s = ctx.rules.phase_share;
    if ctx.possession_share > s || ctx.possession_share_first_half > s {
        Phase::Attacking
    } else if ctx.opponent_share > s || ctx.opponent_share_first_half > s {
        Phase::Defending
    } else {
        Phase::Unclassified
    }
}

pub fn classify(ctx: &SprintContext) -> Classification {
    let phase = phase_of(ctx);
    let mut matched = BTreeSet::new();
    let mut trace = Vec::new();
    for code in SprintCategory::legal_in(phase) {
        let (ok, entries) = evaluate_category(ctx, code);
        if ok {
            matched.insert(code);
        }
        trace.extend(entries);
    }
    Classification {
        category: resolve_priority(&matched),
        phase,
        matched,
        trace,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSprint {
    pub sprint: Sprint,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SprintFailure {
    pub sprint: Sprint,
    pub message: String,
}

/// Output of a whole-match run. Sprints that could not be classified are
/// listed in `failures` instead of stopping the batch.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchClassification {
    pub sprints: Vec<ClassifiedSprint>,
    pub failures: Vec<SprintFailure>,
}

/// Roles for both teams from the mean-position assigner. A team whose
/// roles cannot be assigned is left out with a warning.
pub fn assign_match_roles(seq: &TrackingSequence, cfg: &Config) -> RoleTimeline {
    let mut out = RoleTimeline::default();
    for team in seq.team_ids() {
        match assign_roles(seq, team, cfg.roles.window) {
            Ok(t) => out = out.merged(&t).expect("teams have disjoint players"),
            Err(e) => log::warn!("no roles for team {team}: {e}"),
        }
    }
    out
}

/// Detects every sprint in the match and classifies each one. Output is
/// ordered by (period, start time, player).
pub fn classify_match(seq: &TrackingSequence, roles: Option<&RoleTimeline>, cfg: &Config) -> MatchClassification {
    let sprints = detect_all_sprints(seq, &cfg.detection);
    classify_sprints(seq, &sprints, roles, cfg)
}

pub fn classify_sprints(
    seq: &TrackingSequence,
    sprints: &[Sprint],
    roles: Option<&RoleTimeline>,
    cfg: &Config,
) -> MatchClassification {
    let results: Vec<std::result::Result<ClassifiedSprint, SprintFailure>> = sprints
        .par_iter()
        .map(|s| match SprintContext::new(seq, s, roles, cfg) {
            Ok(ctx) => Ok(ClassifiedSprint {
                sprint: s.clone(),
                classification: classify(&ctx),
            }),
            Err(e) => Err(SprintFailure {
                sprint: s.clone(),
                message: e.to_string(),
            }),
        })
        .collect();
    let mut out = MatchClassification::default();
    for r in results {
        match r {
            Ok(c) => out.sprints.push(c),
            Err(f) => {
                log::warn!("sprint of {} at {:.2}s: {}", f.sprint.player(), f.sprint.start_time(), f.message);
                out.failures.push(f);
            }
        }
    }
    out
}

/// Flat export record: sprint fields, phase, category, matched set and trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    #[serde(flatten)]
    pub sprint: SprintRecord,
    pub phase: Phase,
    pub category: SprintCategory,
    pub matched: Vec<SprintCategory>,
    pub trace: Vec<TraceEntry>,
}

impl ClassificationRecord {
    pub fn new(seq: &TrackingSequence, c: &ClassifiedSprint) -> Self {
        ClassificationRecord {
            sprint: SprintRecord::new(seq, &c.sprint),
            phase: c.classification.phase,
            category: c.classification.category,
            matched: c.classification.matched.iter().copied().collect(),
            trace: c.classification.trace.clone(),
        }
    }
}

const CSV_HEADER: [&str; 14] = [
    "player_id",
    "team_id",
    "period",
    "start_s",
    "end_s",
    "peak_s",
    "peak_speed_kmh",
    "distance_m",
    "mean_speed_kmh",
    "phase",
    "category",
    "matched",
    "trace",
    "role",
];

/// Writes one record per sprint. The CSV form packs the matched set as
/// `A|B` and the trace as `CODE.clause=0/1` tokens separated by spaces.
pub fn write_classifications(
    path: &Path,
    seq: &TrackingSequence,
    result: &MatchClassification,
    roles: Option<&RoleTimeline>,
    json: bool,
) -> Result<()> {
    let records: Vec<ClassificationRecord> = result.sprints.iter().map(|c| ClassificationRecord::new(seq, c)).collect();
    if json {
        return write_json(path, &records);
    }
    let mut w = csv_writer(path)?;
    let err = |e: csv::Error| Error::parse(path, "write", e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for (r, c) in records.iter().zip(&result.sprints) {
        let s = &r.sprint;
        let matched: Vec<&str> = r.matched.iter().map(|m| m.as_str()).collect();
        let trace: Vec<String> = r
            .trace
            .iter()
            .map(|t| format!("{}.{}={}", t.category, t.clause, u8::from(t.value)))
            .collect();
        let role = crate::aggregate::sprint_role(&c.sprint, roles);
        w.write_record([
            s.player_id.clone(),
            s.team_id.clone(),
            s.period.to_string(),
            format!("{:.3}", s.start_s),
            format!("{:.3}", s.end_s),
            format!("{:.3}", s.peak_s),
            format!("{:.3}", s.peak_speed_kmh),
            format!("{:.3}", s.distance_m),
            format!("{:.3}", s.mean_speed_kmh),
            r.phase.to_string(),
            r.category.to_string(),
            matched.join("|"),
            trace.join(" "),
            role,
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads what `write_classifications` wrote back into (sprint record,
/// role, category, matched) tuples. The JSON form carries no role column,
/// so its role is empty.
pub fn read_classifications(path: &Path) -> Result<Vec<(SprintRecord, String, SprintCategory, BTreeSet<SprintCategory>)>> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let records: Vec<ClassificationRecord> = serde_json::from_str(&text).map_err(|e| {
            Error::parse(path, format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        return Ok(records
            .into_iter()
            .map(|r| (r.sprint, String::new(), r.category, r.matched.into_iter().collect()))
            .collect());
    }
    let mut rdr = crate::tracking::csv_reader(path)?;
    crate::tracking::check_header(path, &mut rdr, &CSV_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| crate::tracking::csv_error(path, e))?;
        use crate::tracking::field;
        let sprint = SprintRecord {
            player_id: field(path, &rec, 0, "player_id")?,
            team_id: field(path, &rec, 1, "team_id")?,
            period: field(path, &rec, 2, "period")?,
            start_s: field(path, &rec, 3, "start_s")?,
            end_s: field(path, &rec, 4, "end_s")?,
            peak_s: field(path, &rec, 5, "peak_s")?,
            peak_speed_kmh: field(path, &rec, 6, "peak_speed_kmh")?,
            distance_m: field(path, &rec, 7, "distance_m")?,
            mean_speed_kmh: field(path, &rec, 8, "mean_speed_kmh")?,
        };
        let category: SprintCategory = field(path, &rec, 10, "category")?;
        let matched_raw: String = rec.get(11).unwrap_or("").to_string();
        let matched = matched_raw
            .split('|')
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<_>>>()?;
        let role: String = rec.get(13).unwrap_or("").to_string();
        out.push((sprint, role, category, matched));
    }
    Ok(out)
}
