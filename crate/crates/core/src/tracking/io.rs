//! On-disk formats.
//!
//! A match in the `tracking-table` format is a directory holding
//! `tracking.csv`, `metadata.json` and optionally `events.csv`; passing the
//! path of `tracking.csv` itself is also accepted. The `tracking-json`
//! format is a single JSON document with the same content.
//!
//! Positions are written with centimeter precision and times with
//! millisecond precision.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

use super::model::{
    AttackEntry, Event, EventKind, Frame, Pitch, PlayerId, Roster, TeamId, TrackingSequence,
    TIME_EPS,
};

pub const TRACKING_FILE: &str = "tracking.csv";
pub const METADATA_FILE: &str = "metadata.json";
pub const EVENTS_FILE: &str = "events.csv";

const TRACKING_HEADER: [&str; 9] = [
    "period",
    "time_s",
    "entity_kind",
    "team_id",
    "player_id",
    "x_m",
    "y_m",
    "possession_team",
    "possessor",
];

const EVENTS_HEADER: [&str; 11] = [
    "period",
    "time_s",
    "end_time_s",
    "kind",
    "team_id",
    "actor_id",
    "target_id",
    "x0_m",
    "y0_m",
    "x1_m",
    "y1_m",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackingFormat {
    Table,
    Json,
}

impl std::str::FromStr for TrackingFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tracking-table" | "table" => Ok(TrackingFormat::Table),
            "tracking-json" | "json" => Ok(TrackingFormat::Json),
            other => Err(Error::Config(format!("unknown tracking format `{other}`"))),
        }
    }
}

impl TrackingFormat {
    /// Guesses the format from a path: `.json` files are JSON, anything
    /// else is a table directory or file.
    pub fn detect(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => TrackingFormat::Json,
            _ => TrackingFormat::Table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub pitch: Pitch,
    pub sample_rate: f64,
    pub teams: Vec<Roster>,
    pub attack_direction: Vec<AttackEntry>,
}

pub fn load_tracking(path: &Path, format: TrackingFormat) -> Result<TrackingSequence> {
    match format {
        TrackingFormat::Json => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let seq: TrackingSequence = serde_json::from_str(&text).map_err(|e| {
                Error::parse(path, format!("line {} column {}", e.line(), e.column()), e.to_string())
            })?;
            let frames = resample(seq.frames.clone(), seq.sample_rate);
            seq.with_frames(frames)
        }
        TrackingFormat::Table => {
            if !path.exists() {
                return Err(Error::io(path, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory")));
            }
            let (tracking, dir) = table_paths(path);
            let meta = read_metadata(&dir.join(METADATA_FILE))?;
            let frames = read_tracking_table(&tracking)?;
            let events_path = dir.join(EVENTS_FILE);
            let events = if events_path.exists() {
                read_events(&events_path)?
            } else {
                Vec::new()
            };
            let frames = resample(frames, meta.sample_rate);
            TrackingSequence::new(
                meta.pitch,
                meta.sample_rate,
                meta.teams,
                meta.attack_direction,
                frames,
                events,
            )
        }
    }
}

pub fn save_tracking(seq: &TrackingSequence, path: &Path, format: TrackingFormat) -> Result<()> {
    match format {
        TrackingFormat::Json => {
            let rounded = seq.with_frames(seq.frames.iter().map(round_frame).collect())?;
            write_json(path, &rounded)
        }
        TrackingFormat::Table => {
            std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
            write_metadata(&path.join(METADATA_FILE), &metadata_of(seq))?;
            write_tracking_table(&path.join(TRACKING_FILE), seq)?;
            write_events(&path.join(EVENTS_FILE), &seq.events)
        }
    }
}

fn table_paths(path: &Path) -> (PathBuf, PathBuf) {
    if path.is_dir() {
        (path.join(TRACKING_FILE), path.to_path_buf())
    } else {
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        (path.to_path_buf(), dir)
    }
}

pub fn metadata_of(seq: &TrackingSequence) -> Metadata {
    Metadata {
        pitch: seq.pitch,
        sample_rate: seq.sample_rate,
        teams: seq.teams.clone(),
        attack_direction: seq.attack_direction.clone(),
    }
}

pub fn read_metadata(path: &Path) -> Result<Metadata> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::parse(path, format!("line {} column {}", e.line(), e.column()), e.to_string())
    })
}

pub fn write_metadata(path: &Path, meta: &Metadata) -> Result<()> {
    write_json(path, meta)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let locus = e
        .position()
        .map(|p| format!("line {}", p.line()))
        .unwrap_or_else(|| "file".to_string());
    Error::parse(path, locus, e.to_string())
}

pub(crate) fn check_header(path: &Path, rdr: &mut csv::Reader<File>, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::parse(
            path,
            "line 1",
            format!("expected header `{}`, got `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

pub(crate) fn field<T: std::str::FromStr>(
    path: &Path,
    rec: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T> {
    let line = rec.position().map(|p| p.line()).unwrap_or(0);
    let raw = rec.get(idx).ok_or_else(|| {
        Error::parse(path, format!("line {line}"), format!("missing column `{name}`"))
    })?;
    raw.parse().map_err(|_| {
        Error::parse(path, format!("line {line}"), format!("bad value `{raw}` for `{name}`"))
    })
}

pub(crate) fn opt_field(rec: &csv::StringRecord, idx: usize) -> Option<String> {
    rec.get(idx).filter(|s| !s.is_empty()).map(str::to_string)
}

fn read_tracking_table(path: &Path) -> Result<Vec<Frame>> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &TRACKING_HEADER)?;
    let mut frames: Vec<Frame> = Vec::new();
    let mut has_ball: Vec<bool> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let period: u8 = field(path, &rec, 0, "period")?;
        let time: f64 = field(path, &rec, 1, "time_s")?;
        let kind = rec.get(2).unwrap_or("");
        let x: f64 = field(path, &rec, 5, "x_m")?;
        let y: f64 = field(path, &rec, 6, "y_m")?;
        let possession_team = opt_field(&rec, 7).map(TeamId);
        let possessor = opt_field(&rec, 8).map(PlayerId);

        let same = frames
            .last()
            .map(|f| f.period == period && (f.time - time).abs() < TIME_EPS)
            .unwrap_or(false);
        if !same {
            frames.push(Frame {
                period,
                time,
                players: BTreeMap::new(),
                ball: Vec2::ZERO,
                possession_team: possession_team.clone(),
                possessor: possessor.clone(),
            });
            has_ball.push(false);
        }
        let frame = frames.last_mut().expect("frame pushed above");
        if frame.possession_team != possession_team || frame.possessor != possessor {
            return Err(Error::parse(
                path,
                format!("line {line}"),
                "possession columns differ within one frame",
            ));
        }
        match kind {
            "ball" => {
                frame.ball = Vec2::new(x, y);
                *has_ball.last_mut().expect("parallel to frames") = true;
            }
            "player" => {
                let pid = opt_field(&rec, 4).ok_or_else(|| {
                    Error::parse(path, format!("line {line}"), "player row without player_id")
                })?;
                if frame.players.insert(PlayerId(pid.clone()), Vec2::new(x, y)).is_some() {
                    return Err(Error::parse(
                        path,
                        format!("line {line}"),
                        format!("player {pid} listed twice in one frame"),
                    ));
                }
            }
            other => {
                return Err(Error::parse(
                    path,
                    format!("line {line}"),
                    format!("unknown entity_kind `{other}`"),
                ))
            }
        }
    }
    if let Some(i) = has_ball.iter().position(|b| !b) {
        return Err(Error::parse(
            path,
            format!("frame {} (t={:.3})", i, frames[i].time),
            "frame has no ball row",
        ));
    }
    Ok(frames)
}

fn fmt_pos(v: f64) -> String {
    let s = format!("{:.2}", v);
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn fmt_time(v: f64) -> String {
    format!("{:.3}", v)
}

fn write_tracking_table(path: &Path, seq: &TrackingSequence) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_error(path, e);
    w.write_record(TRACKING_HEADER).map_err(err)?;
    for f in &seq.frames {
        let period = f.period.to_string();
        let time = fmt_time(f.time);
        let pt = f.possession_team.as_ref().map(|t| t.as_str()).unwrap_or("");
        let pp = f.possessor.as_ref().map(|p| p.as_str()).unwrap_or("");
        w.write_record([
            period.as_str(),
            &time,
            "ball",
            "",
            "",
            &fmt_pos(f.ball.x),
            &fmt_pos(f.ball.y),
            pt,
            pp,
        ])
        .map_err(err)?;
        for (pid, p) in &f.players {
            // Team column is informational; rosters are authoritative.
            let team = seq.team_of(pid).map(|t| t.as_str()).unwrap_or("");
            w.write_record([
                period.as_str(),
                &time,
                "player",
                team,
                pid.as_str(),
                &fmt_pos(p.x),
                &fmt_pos(p.y),
                pt,
                pp,
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_events(path: &Path) -> Result<Vec<Event>> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &EVENTS_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let kind_raw = rec.get(3).unwrap_or("");
        let kind = EventKind::parse(kind_raw).ok_or_else(|| {
            Error::parse(path, format!("line {line}"), format!("unknown event kind `{kind_raw}`"))
        })?;
        let time: f64 = field(path, &rec, 1, "time_s")?;
        let end_time = match opt_field(&rec, 2) {
            Some(_) => field(path, &rec, 2, "end_time_s")?,
            None => time,
        };
        let end = match (opt_field(&rec, 9), opt_field(&rec, 10)) {
            (Some(_), Some(_)) => Some(Vec2::new(
                field(path, &rec, 9, "x1_m")?,
                field(path, &rec, 10, "y1_m")?,
            )),
            _ => None,
        };
        let event = Event {
            period: field(path, &rec, 0, "period")?,
            time,
            end_time,
            kind,
            team: TeamId(opt_field(&rec, 4).unwrap_or_default()),
            actor: PlayerId(opt_field(&rec, 5).unwrap_or_default()),
            target: opt_field(&rec, 6).map(PlayerId),
            start: Vec2::new(field(path, &rec, 7, "x0_m")?, field(path, &rec, 8, "y0_m")?),
            end,
        };
        event
            .validate()
            .map_err(|e| Error::parse(path, format!("line {line}"), e.to_string()))?;
        out.push(event);
    }
    Ok(out)
}

pub fn write_events(path: &Path, events: &[Event]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_error(path, e);
    w.write_record(EVENTS_HEADER).map_err(err)?;
    for e in events {
        let (x1, y1) = e
            .end
            .map(|p| (fmt_pos(p.x), fmt_pos(p.y)))
            .unwrap_or_default();
        w.write_record([
            e.period.to_string(),
            fmt_time(e.time),
            fmt_time(e.end_time),
            e.kind.as_str().to_string(),
            e.team.to_string(),
            e.actor.to_string(),
            e.target.as_ref().map(|t| t.to_string()).unwrap_or_default(),
            fmt_pos(e.start.x),
            fmt_pos(e.start.y),
            x1,
            y1,
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn round_to(v: f64, scale: f64) -> f64 {
    (v * scale).round() / scale
}

fn round_frame(f: &Frame) -> Frame {
    let r = |p: Vec2| Vec2::new(round_to(p.x, 100.0), round_to(p.y, 100.0));
    Frame {
        period: f.period,
        time: round_to(f.time, 1000.0),
        players: f.players.iter().map(|(k, p)| (k.clone(), r(*p))).collect(),
        ball: r(f.ball),
        possession_team: f.possession_team.clone(),
        possessor: f.possessor.clone(),
    }
}

/// Resamples each period onto a uniform grid of `1/sample_rate` starting at
/// the period's first timestamp, when the input spacing is irregular.
/// Positions are linearly interpolated between the bracketing frames; an
/// entity missing from either bracket is absent. Possession is taken from
/// the earlier bracket.
pub fn resample(frames: Vec<Frame>, sample_rate: f64) -> Vec<Frame> {
    let dt = 1.0 / sample_rate;
    let mut out = Vec::with_capacity(frames.len());
    let mut start = 0;
    while start < frames.len() {
        let period = frames[start].period;
        let end = start + frames[start..].iter().take_while(|f| f.period == period).count();
        let chunk = &frames[start..end];
        let regular = chunk
            .windows(2)
            .all(|w| ((w[1].time - w[0].time) - dt).abs() <= TIME_EPS);
        if regular {
            out.extend_from_slice(chunk);
        } else {
            out.extend(resample_period(chunk, dt));
        }
        start = end;
    }
    out
}

fn resample_period(chunk: &[Frame], dt: f64) -> Vec<Frame> {
    let t0 = chunk[0].time;
    let t_last = chunk[chunk.len() - 1].time;
    let mut out = Vec::new();
    let mut j = 0;
    let mut k = 0usize;
    loop {
        let t = round_to(t0 + k as f64 * dt, 1000.0);
        if t > t_last + 1e-9 {
            break;
        }
        while j + 1 < chunk.len() && chunk[j + 1].time <= t + 1e-9 {
            j += 1;
        }
        let a = &chunk[j];
        let frame = if (a.time - t).abs() <= 1e-9 || j + 1 == chunk.len() {
            Frame { time: t, ..a.clone() }
        } else {
            let b = &chunk[j + 1];
            let w = (t - a.time) / (b.time - a.time);
            Frame {
                period: a.period,
                time: t,
                players: a
                    .players
                    .iter()
                    .filter_map(|(id, pa)| b.players.get(id).map(|pb| (id.clone(), pa.lerp(*pb, w))))
                    .collect(),
                ball: a.ball.lerp(b.ball, w),
                possession_team: a.possession_team.clone(),
                possessor: a.possessor.clone(),
            }
        };
        out.push(frame);
        k += 1;
    }
    out
}

/// Writes `contents` atomically enough for CLI use: create parents, write.
pub(crate) fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}
