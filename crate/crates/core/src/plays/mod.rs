//! Play segmentation, category-tagged play index and similarity retrieval.

mod segment;
mod similarity;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::PlayConfig;
use crate::error::{Error, Result};
use crate::rules::SprintCategory;
use crate::tracking::{csv_error, csv_writer, write_json, TrackingSequence};

pub use segment::{attach_sprints, segment_plays, Play, SprintTag};
pub use similarity::{
    resample_play, AssignmentBaseline, BackendRegistry, PlaySample, PlayTrajectory, SimilarityBackend,
    BASELINE_ID,
};

pub const INDEX_FORMAT: &str = "sprintlab-play-index";
pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedPlay {
    pub play: Play,
    pub signature: BTreeSet<SprintCategory>,
    pub trajectory: PlayTrajectory,
}

/// Plays with their category signatures and resampled trajectories. Saved
/// as one JSON document carrying its format name and version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayIndex {
    pub format: String,
    pub version: u32,
    pub backend: String,
    pub resample_points: usize,
    pub plays: Vec<IndexedPlay>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeywordMode {
    Superset,
    Exact,
}

impl std::str::FromStr for KeywordMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "superset" => Ok(KeywordMode::Superset),
            "exact" => Ok(KeywordMode::Exact),
            other => Err(Error::Config(format!("unknown keyword mode `{other}`"))),
        }
    }
}

impl PlayIndex {
    /// Segments, tags and resamples every play of the match.
    pub fn build(seq: &TrackingSequence, sprints: &[SprintTag], cfg: &PlayConfig, backend: &str) -> Result<Self> {
        let mut plays = segment_plays(seq, cfg.turnover_events);
        attach_sprints(&mut plays, sprints);
        let plays = plays
            .into_iter()
            .map(|play| {
                let trajectory = resample_play(seq, &play, cfg.resample_points)?;
                Ok(IndexedPlay { signature: play.signature(), play, trajectory })
            })
            .collect::<Result<_>>()?;
        Ok(PlayIndex {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            backend: backend.to_string(),
            resample_points: cfg.resample_points,
            plays,
        })
    }

    pub fn len(&self) -> usize {
        self.plays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plays.is_empty()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let idx: PlayIndex = serde_json::from_str(&text).map_err(|e| {
            Error::parse(path, format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        if idx.format != INDEX_FORMAT || idx.version != INDEX_VERSION {
            return Err(Error::Validation(format!(
                "{}: expected {INDEX_FORMAT} version {INDEX_VERSION}, found {} version {}",
                path.display(),
                idx.format,
                idx.version
            )));
        }
        Ok(idx)
    }
}

fn keeps(signature: &BTreeSet<SprintCategory>, required: &BTreeSet<SprintCategory>, mode: KeywordMode) -> bool {
    match mode {
        KeywordMode::Superset => signature.is_superset(required),
        KeywordMode::Exact => signature == required,
    }
}

/// Positions of the plays whose signature passes the keyword filter.
pub fn filter_by_keywords(index: &PlayIndex, required: &BTreeSet<SprintCategory>, mode: KeywordMode) -> Vec<usize> {
    (0..index.plays.len())
        .filter(|&i| keeps(&index.plays[i].signature, required, mode))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalHit {
    pub rank: usize,
    /// Position in the index.
    pub play_index: usize,
    pub team_id: String,
    pub period: u8,
    pub start_s: f64,
    pub end_s: f64,
    pub distance: f64,
    pub categories: String,
}

/// Filters by keywords, then ranks the survivors by the backend's distance
/// to `query`. Ties go to the earlier play (period, then start time).
pub fn retrieve(
    index: &PlayIndex,
    query: &PlayTrajectory,
    k: usize,
    required: &BTreeSet<SprintCategory>,
    mode: KeywordMode,
    backend: &dyn SimilarityBackend,
) -> Vec<RetrievalHit> {
    let mut scored: Vec<(f64, usize)> = filter_by_keywords(index, required, mode)
        .into_iter()
        .map(|i| (backend.distance(query, &index.plays[i].trajectory), i))
        .collect();
    scored.sort_by(|a, b| {
        let (pa, pb) = (&index.plays[a.1].play, &index.plays[b.1].play);
        a.0.total_cmp(&b.0)
            .then(pa.period.cmp(&pb.period))
            .then(pa.start_time.total_cmp(&pb.start_time))
            .then(a.1.cmp(&b.1))
    });
    scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(r, (d, i))| {
            let ip = &index.plays[i];
            RetrievalHit {
                rank: r + 1,
                play_index: i,
                team_id: ip.play.team.to_string(),
                period: ip.play.period,
                start_s: ip.play.start_time,
                end_s: ip.play.end_time,
                distance: d,
                categories: ip.signature.iter().map(|c| c.as_str()).collect::<Vec<_>>().join("|"),
            }
        })
        .collect()
}

pub fn write_hits(path: &Path, hits: &[RetrievalHit], json: bool) -> Result<()> {
    if json {
        return write_json(path, &hits);
    }
    let mut w = csv_writer(path)?;
    for h in hits {
        w.serialize(h).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parses `PEN,RWB` or `PEN|RWB`; empty means no requirement.
pub fn parse_keywords(s: &str) -> Result<BTreeSet<SprintCategory>> {
    s.split([',', '|'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<SprintCategory>())
        .collect()
}
