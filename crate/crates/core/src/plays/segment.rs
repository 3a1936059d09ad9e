use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::rules::SprintCategory;
use crate::tracking::{EventKind, TeamId, TrackingSequence};

/// A possession-delimited fragment of one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Play {
    pub team: TeamId,
    pub period: u8,
    pub start_time: f64,
    pub end_time: f64,
    /// Index range into the sequence's frames; the end is exclusive and
    /// the frame at `end_time` is included.
    pub frames: (usize, usize),
    /// Category counts of the sprints overlapping the play, both teams.
    pub sprint_categories: BTreeMap<SprintCategory, usize>,
}

impl Play {
    pub fn signature(&self) -> BTreeSet<SprintCategory> {
        self.sprint_categories.keys().copied().collect()
    }

    pub fn duration(&self) -> f64 {
        self.end_time - self.start_time
    }

    pub fn overlaps(&self, period: u8, start: f64, end: f64) -> bool {
        period == self.period && start < self.end_time && end > self.start_time
    }
}

/// A sprint reduced to what plays need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprintTag {
    pub period: u8,
    pub start: f64,
    pub end: f64,
    pub category: SprintCategory,
}

/// Splits each period into plays from the event stream.
///
/// The first event of a period hands possession to its team from the
/// period's first frame. A play ends at the first of `turnover_events`
/// consecutive events by the other team (which then starts its own play at
/// that instant), at a pause event, or at the period's last frame. After a
/// pause the next event restarts play. Every event kind except pauses
/// counts toward a turnover.
pub fn segment_plays(seq: &TrackingSequence, turnover_events: usize) -> Vec<Play> {
    let turnover = turnover_events.max(1);
    let mut out = Vec::new();
    for period in seq.periods() {
        let range = seq.period_range(period);
        let frames = &seq.frames[range.clone()];
        let (first, last) = (frames[0].time, frames[frames.len() - 1].time);
        let events: Vec<_> = seq.events.iter().filter(|e| e.period == period).collect();

        let mut open: Option<(TeamId, f64)> = None;
        let mut run: Vec<f64> = Vec::new();
        let mut after_pause = false;
        let close = |team: TeamId, start: f64, end: f64, out: &mut Vec<Play>| {
            let end = end.min(last);
            let start = start.max(first);
            if end > start {
                out.push(Play {
                    team,
                    period,
                    start_time: start,
                    end_time: end,
                    frames: frame_span(seq, range.clone(), start, end),
                    sprint_categories: BTreeMap::new(),
                });
            }
        };
        for e in events {
            if e.kind == EventKind::Pause {
                if let Some((team, start)) = open.take() {
                    close(team, start, e.time, &mut out);
                }
                run.clear();
                after_pause = true;
                continue;
            }
            match &open {
                None => {
                    let start = if after_pause { e.time } else { first };
                    open = Some((e.team.clone(), start));
                    run.clear();
                }
                Some((team, _)) if *team == e.team => run.clear(),
                Some(_) => {
                    run.push(e.time);
                    if run.len() >= turnover {
                        let (team, start) = open.take().expect("open play");
                        close(team, start, run[0], &mut out);
                        open = Some((e.team.clone(), run[0]));
                        run.clear();
                    }
                }
            }
        }
        if let Some((team, start)) = open {
            close(team, start, last, &mut out);
        }
    }
    out
}

fn frame_span(seq: &TrackingSequence, range: std::ops::Range<usize>, start: f64, end: f64) -> (usize, usize) {
    let frames = &seq.frames[range.clone()];
    let a = frames.partition_point(|f| f.time < start - 1e-9);
    let b = frames.partition_point(|f| f.time <= end + 1e-9);
    (range.start + a, range.start + b)
}

/// Counts, per play, the sprints whose interval overlaps it.
pub fn attach_sprints(plays: &mut [Play], sprints: &[SprintTag]) {
    for p in plays.iter_mut() {
        let mut counts = BTreeMap::new();
        for s in sprints.iter().filter(|s| p.overlaps(s.period, s.start, s.end)) {
            *counts.entry(s.category).or_default() += 1;
        }
        p.sprint_categories = counts;
    }
}
