//! Per-sprint feature tensors for an external learned classifier.
//!
//! For every frame of a sprint and each of 22 player slots, 8 features in
//! the sprinter team's attacking view: x, y, vx, vy (m/s), speed (m/s),
//! acceleration (m/s², time derivative of speed), and x, y relative to the
//! ball. Slot 0 is the sprinter, slots 1..=10 the teammates and 11..=21 the
//! opponents, each side ordered by presence during the sprint, then id.
//! Slots with nobody, or whose player is absent in a frame, are zero with
//! mask 0.
//!
//! Binary layout (`.spft`), all little-endian:
//!
//! | offset | type     | content                                  |
//! |--------|----------|------------------------------------------|
//! | 0      | [u8; 4]  | magic `SPFT`                             |
//! | 4      | u32      | format version, currently 1              |
//! | 8      | u32      | T, frames                                |
//! | 12     | u32      | P, player slots (22)                     |
//! | 16     | u32      | F, features per slot (8)                 |
//! | 20     | i32      | label: index into the 15 category codes  |
//! |        |          | in taxonomy order, or -1 when unlabeled  |
//! | 24     | u32      | rows of the sprinter's team (11)         |
//! | 28     | u32      | reserved, 0                              |
//! | 32     | f32 × T·P·F | features, row-major (t, p, f)         |
//! |        | f32 × T·P   | mask, 1.0 present / 0.0 absent        |
//! |        | f32 × T·2   | ball x, y                             |

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::rules::SprintCategory;
use crate::sprint::Sprint;
use crate::tracking::{csv_error, csv_writer, normalize, Frame, PlayerId, TrackingSequence};

pub const FEATURE_EXT: &str = "spft";
pub const MAGIC: [u8; 4] = *b"SPFT";
pub const VERSION: u32 = 1;
pub const SLOTS: usize = 22;
pub const TEAM_SLOTS: usize = 11;
pub const FEATURES: usize = 8;
const HEADER_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    pub frames: usize,
    /// `frames × SLOTS × FEATURES`, row-major.
    pub features: Vec<f32>,
    /// `frames × SLOTS`.
    pub mask: Vec<f32>,
    /// `frames × 2`.
    pub ball: Vec<f32>,
    pub label: Option<SprintCategory>,
}

fn label_index(c: SprintCategory) -> i32 {
    SprintCategory::ALL.iter().position(|x| *x == c).expect("listed") as i32
}

impl FeatureTensor {
    pub fn feature(&self, t: usize, slot: usize) -> &[f32] {
        let o = (t * SLOTS + slot) * FEATURES;
        &self.features[o..o + FEATURES]
    }

    pub fn present(&self, t: usize, slot: usize) -> bool {
        self.mask[t * SLOTS + slot] > 0.5
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * (self.features.len() + self.mask.len() + self.ball.len()));
        out.extend_from_slice(&MAGIC);
        for v in [VERSION, self.frames as u32, SLOTS as u32, FEATURES as u32] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.label.map_or(-1, label_index).to_le_bytes());
        out.extend_from_slice(&(TEAM_SLOTS as u32).to_le_bytes());
        out.extend_from_slice(&0u32.to_le_bytes());
        for v in self.features.iter().chain(&self.mask).chain(&self.ball) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Validation(format!("feature tensor: {m}"));
        if bytes.len() < HEADER_LEN || bytes[..4] != MAGIC {
            return Err(bad("missing SPFT header"));
        }
        let u = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
        if u(4) != VERSION {
            return Err(bad(&format!("unsupported version {}", u(4))));
        }
        let (t, p, f) = (u(8) as usize, u(12) as usize, u(16) as usize);
        if p != SLOTS || f != FEATURES {
            return Err(bad(&format!("unexpected shape ({t}, {p}, {f})")));
        }
        let label = match i32::from_le_bytes(bytes[20..24].try_into().expect("4 bytes")) {
            -1 => None,
            i if (0..15).contains(&i) => Some(SprintCategory::ALL[i as usize]),
            i => return Err(bad(&format!("label {i} out of range"))),
        };
        let n = t * p * f + t * p + t * 2;
        if bytes.len() != HEADER_LEN + 4 * n {
            return Err(bad("payload length does not match the header"));
        }
        let floats: Vec<f32> = bytes[HEADER_LEN..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect();
        let (features, rest) = floats.split_at(t * p * f);
        let (mask, ball) = rest.split_at(t * p);
        Ok(FeatureTensor {
            frames: t,
            features: features.to_vec(),
            mask: mask.to_vec(),
            ball: ball.to_vec(),
            label,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

/// Slot assignment for a sprint: sprinter, then up to 10 teammates and 11
/// opponents. `None` marks an empty slot.
pub fn slot_order(seq: &TrackingSequence, frames: &[Frame], sprinter: &PlayerId) -> Result<Vec<Option<PlayerId>>> {
    let team = seq.team_of(sprinter).ok_or_else(|| Error::UnknownPlayer(sprinter.to_string()))?;
    let opp = seq.opponent_of(team)?;
    let side = |t: &crate::tracking::TeamId, skip: Option<&PlayerId>, n: usize| -> Result<Vec<Option<PlayerId>>> {
        let mut ids: Vec<(usize, PlayerId)> = seq
            .roster(t)?
            .players
            .iter()
            .filter(|e| Some(&e.player_id) != skip)
            .map(|e| (frames.iter().filter(|f| f.players.contains_key(&e.player_id)).count(), e.player_id.clone()))
            .filter(|(c, _)| *c > 0)
            .collect();
        ids.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut out: Vec<Option<PlayerId>> = ids.into_iter().take(n).map(|(_, p)| Some(p)).collect();
        out.resize(n, None);
        Ok(out)
    };
    let mut slots = vec![Some(sprinter.clone())];
    slots.extend(side(team, Some(sprinter), TEAM_SLOTS - 1)?);
    slots.extend(side(opp, None, SLOTS - TEAM_SLOTS)?);
    Ok(slots)
}

/// Builds the tensor for the frames of `player`'s sprint over `[start,
/// end]`. Velocities are central differences over neighboring frames of
/// the period (one-sided at its ends); acceleration differentiates speed
/// the same way.
pub fn sprint_features(
    seq: &TrackingSequence,
    player: &PlayerId,
    period: u8,
    start: f64,
    end: f64,
    label: Option<SprintCategory>,
) -> Result<FeatureTensor> {
    let team = seq.team_of(player).ok_or_else(|| Error::UnknownPlayer(player.to_string()))?.clone();
    let view = normalize(seq, &team)?;
    let range = seq.period_range(period);
    let all: Vec<Frame> = seq.frames[range].iter().map(|f| view.frame(f)).collect();
    let idx: Vec<usize> = (0..all.len())
        .filter(|&k| all[k].time >= start - 1e-9 && all[k].time <= end + 1e-9)
        .collect();
    if idx.is_empty() {
        return Err(Error::Validation(format!(
            "no frames for {player} in period {period} over [{start:.3}, {end:.3}]"
        )));
    }
    let window: Vec<Frame> = idx.iter().map(|&k| all[k].clone()).collect();
    let slots = slot_order(seq, &window, player)?;

    let velocity = |p: &PlayerId, k: usize| -> Option<Vec2> {
        let at = |j: usize| all[j].position(p);
        let a = if k > 0 && at(k - 1).is_some() { k - 1 } else { k };
        let b = if k + 1 < all.len() && at(k + 1).is_some() { k + 1 } else { k };
        if a == b {
            return Some(Vec2::ZERO);
        }
        Some((at(b)? - at(a)?) / (all[b].time - all[a].time))
    };
    let accel = |p: &PlayerId, k: usize| -> f64 {
        let sp = |j: usize| all[j].position(p).and_then(|_| velocity(p, j)).map(Vec2::norm);
        let a = if k > 0 && sp(k - 1).is_some() { k - 1 } else { k };
        let b = if k + 1 < all.len() && sp(k + 1).is_some() { k + 1 } else { k };
        if a == b {
            return 0.0;
        }
        (sp(b).unwrap_or(0.0) - sp(a).unwrap_or(0.0)) / (all[b].time - all[a].time)
    };

    let t = idx.len();
    let mut features = vec![0f32; t * SLOTS * FEATURES];
    let mut mask = vec![0f32; t * SLOTS];
    let mut ball = vec![0f32; t * 2];
    for (ti, &k) in idx.iter().enumerate() {
        let f = &all[k];
        ball[ti * 2] = f.ball.x as f32;
        ball[ti * 2 + 1] = f.ball.y as f32;
        for (s, id) in slots.iter().enumerate() {
            let Some(id) = id else { continue };
            let Some(pos) = f.position(id) else { continue };
            let v = velocity(id, k).unwrap_or(Vec2::ZERO);
            let rel = pos - f.ball;
            let row = [pos.x, pos.y, v.x, v.y, v.norm(), accel(id, k), rel.x, rel.y];
            let o = (ti * SLOTS + s) * FEATURES;
            for (dst, src) in features[o..o + FEATURES].iter_mut().zip(row) {
                *dst = src as f32;
            }
            mask[ti * SLOTS + s] = 1.0;
        }
    }
    Ok(FeatureTensor { frames: t, features, mask, ball, label })
}

#[derive(Serialize)]
struct IndexRow<'a> {
    file: String,
    player_id: &'a str,
    period: u8,
    start_s: String,
    end_s: String,
    frames: usize,
    category: &'a str,
}

/// One tensor per classified sprint, labeled with its rule category, plus
/// an `index.csv` listing them in order.
pub fn export_features(seq: &TrackingSequence, sprints: &[(Sprint, SprintCategory)], dir: &Path) -> Result<usize> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let index = dir.join("index.csv");
    let mut w = csv_writer(&index)?;
    for (i, (s, cat)) in sprints.iter().enumerate() {
        let cat = *cat;
        let t = sprint_features(seq, s.player(), s.period(), s.start_time(), s.end_time(), Some(cat))?;
        let file = format!("sprint_{i:04}.{FEATURE_EXT}");
        t.write(&dir.join(&file))?;
        w.serialize(IndexRow {
            file,
            player_id: s.player().as_str(),
            period: s.period(),
            start_s: format!("{:.3}", s.start_time()),
            end_s: format!("{:.3}", s.end_time()),
            frames: t.frames,
            category: cat.as_str(),
        })
        .map_err(|e| csv_error(&index, e))?;
    }
    w.flush().map_err(|e| Error::io(&index, e))?;
    Ok(sprints.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::fixtures;

    fn seq() -> TrackingSequence {
        let frames = (0..=20)
            .map(|k| {
                let t = k as f64 * 0.1;
                let mut players = vec![("a1", 2.0 * t * t, 1.0), ("b1", 10.0, -5.0)];
                if k != 7 {
                    players.push(("a2", -3.0, t));
                }
                fixtures::frame(1, t, &players, (1.0, 2.0))
            })
            .collect();
        TrackingSequence::new(
            Default::default(),
            10.0,
            vec![fixtures::roster("A", &["a1", "a2"]), fixtures::roster("B", &["b1"])],
            fixtures::directions(&[1]),
            frames,
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn shape_and_mask() {
        let s = seq();
        let t = sprint_features(&s, &PlayerId::new("a1"), 1, 0.5, 1.5, Some(SprintCategory::PEN)).unwrap();
        assert_eq!(t.frames, 11);
        assert_eq!(t.features.len(), 11 * 22 * 8);
        assert!(t.present(0, 0) && t.present(0, 1) && t.present(0, 11));
        assert!(!t.present(0, 2) && !t.present(0, 12));
        // a2 is missing at t = 0.7.
        assert!(!t.present(2, 1));
        assert!(t.feature(2, 1).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn values_follow_positions() {
        let s = seq();
        let t = sprint_features(&s, &PlayerId::new("a1"), 1, 0.5, 1.5, None).unwrap();
        // x = 2 t², so vx = 4 t and ax = 4 (central differences are exact).
        let f = t.feature(5, 0);
        assert!((f[0] - 2.0).abs() < 1e-5);
        assert!((f[2] - 4.0).abs() < 1e-4);
        assert!((f[4] - 4.0).abs() < 1e-4);
        assert!((f[5] - 4.0).abs() < 1e-3);
        assert!((f[6] - 1.0).abs() < 1e-5 && (f[7] + 1.0).abs() < 1e-5);
    }

    #[test]
    fn bytes_round_trip() {
        let s = seq();
        let t = sprint_features(&s, &PlayerId::new("a1"), 1, 0.0, 2.0, Some(SprintCategory::OTH)).unwrap();
        let b = t.to_bytes();
        assert_eq!(b.len(), 32 + 4 * (21 * 22 * 8 + 21 * 22 + 21 * 2));
        assert_eq!(FeatureTensor::from_bytes(&b).unwrap(), t);
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(FeatureTensor::from_bytes(&bad).is_err());
    }
}
