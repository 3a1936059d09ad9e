//! Labeled synthetic scenes, one scripted archetype per sprint category.
//!
//! Each scene is about 10 s of 22 players at 10 Hz. One player of team A
//! sprints over `[2, 2 + duration]` following a smooth speed hump, while
//! everybody else stands, drifts or runs a short script. The scene is
//! authored in A's attacking view and can be reflected along x (A then
//! attacks -x) and mirrored along y (left and right swap, roles mirror).
//!
//! Documented jitter ranges, for which every archetype must classify as
//! intended: peak speed 24..30 km/h, duration 4..5 s, key positions
//! ±0.75 m, background players ±1.5 m.

mod archetypes;
mod world;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::roles::{write_roles, PlayerRoles, RoleInterval, RoleTimeline};
use crate::rules::SprintCategory;
use crate::tracking::{
    csv_writer, save_tracking, write_json, AttackDirection, AttackEntry, Frame, Pitch, PlayerId,
    Roster, RosterEntry, TeamId, TrackingFormat, TrackingSequence,
};

pub use world::{BallSpan, BallState, SpeedProfile, Track, World};

pub const SAMPLE_RATE: f64 = 10.0;
pub const MAX_PEAK_SPEED: f64 = 40.0;
pub const ROLES_FILE: &str = "roles.csv";
pub const LABELS_FILE: &str = "labels.csv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// km/h.
    pub peak_speed: f64,
    /// Seconds between the two valleys around the sprint.
    pub duration: f64,
    /// Half-width of the uniform jitter on scripted key positions, m.
    pub anchor_jitter: f64,
    /// Half-width of the uniform jitter on everybody else, m.
    pub background_jitter: f64,
    pub reflect_x: bool,
    pub mirror_y: bool,
}

impl ScenarioParams {
    pub fn canonical() -> Self {
        ScenarioParams {
            peak_speed: 27.0,
            duration: 4.5,
            anchor_jitter: 0.0,
            background_jitter: 0.0,
            reflect_x: false,
            mirror_y: false,
        }
    }

    /// Draws from the documented ranges.
    pub fn sample(rng: &mut impl Rng) -> Self {
        ScenarioParams {
            peak_speed: rng.gen_range(24.0..=30.0),
            duration: rng.gen_range(4.0..=5.0),
            anchor_jitter: 0.75,
            background_jitter: 1.5,
            reflect_x: rng.gen_bool(0.5),
            mirror_y: rng.gen_bool(0.5),
        }
    }

    /// Wider draws that push quantities toward the rule thresholds. The
    /// archetype contract does not cover these.
    pub fn sample_boundary(rng: &mut impl Rng) -> Self {
        ScenarioParams {
            peak_speed: rng.gen_range(21.5..=34.0),
            duration: rng.gen_range(3.0..=6.0),
            anchor_jitter: 3.0,
            background_jitter: 4.0,
            reflect_x: rng.gen_bool(0.5),
            mirror_y: rng.gen_bool(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.peak_speed.is_finite()
            && self.peak_speed > 4.0
            && self.peak_speed <= MAX_PEAK_SPEED
            && self.duration.is_finite()
            && self.duration > 0.5
            && self.duration <= 10.0
            && self.anchor_jitter >= 0.0
            && self.background_jitter >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Infeasible(format!(
                "peak speed must be in (4, {MAX_PEAK_SPEED}] km/h and duration in (0.5, 10] s, got {} km/h over {} s",
                self.peak_speed, self.duration
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// `None` is the noise-only scene with no sprint.
    pub intended_category: Option<SprintCategory>,
    pub seed: u64,
    pub params: ScenarioParams,
    #[serde(default)]
    pub boundary: bool,
}

impl Scenario {
    pub fn canonical(cat: SprintCategory) -> Self {
        Scenario { intended_category: Some(cat), seed: 0, params: ScenarioParams::canonical(), boundary: false }
    }

    pub fn jittered(cat: SprintCategory, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Scenario {
            intended_category: Some(cat),
            seed,
            params: ScenarioParams::sample(&mut rng),
            boundary: false,
        }
    }

    pub fn noise(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Scenario { intended_category: None, seed, params: ScenarioParams::sample(&mut rng), boundary: false }
    }

    pub fn is_canonical(&self) -> bool {
        self.params == ScenarioParams::canonical()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedSprint {
    pub player: PlayerId,
    pub team: TeamId,
    pub period: u8,
    pub start: f64,
    pub end: f64,
    pub category: SprintCategory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub sequence: TrackingSequence,
    pub roles: RoleTimeline,
    pub expected: Vec<ExpectedSprint>,
}

pub fn generate(scenario: &Scenario) -> Result<Generated> {
    let p = &scenario.params;
    p.validate()?;
    // The layout draws from its own stream so parameter sampling and
    // position jitter stay independent.
    let rng = ChaCha8Rng::seed_from_u64(scenario.seed ^ 0x9e37_79b9_7f4a_7c15);
    let b = archetypes::build(scenario.intended_category, p, rng);
    let total = b.profile.total_time();

    let (sx, sy) = (if p.reflect_x { -1.0 } else { 1.0 }, if p.mirror_y { -1.0 } else { 1.0 });
    let flip = |v: Vec2| Vec2::new(sx * v.x, sy * v.y);
    let frames: Vec<Frame> = b
        .world
        .frames(total, SAMPLE_RATE)
        .into_iter()
        .map(|mut f| {
            f.ball = flip(f.ball);
            for q in f.players.values_mut() {
                *q = flip(*q);
            }
            f
        })
        .collect();
    let events = b
        .world
        .events()
        .into_iter()
        .map(|mut e| {
            e.start = flip(e.start);
            e.end = e.end.map(flip);
            e
        })
        .collect();

    let (team_a, team_b) = (TeamId::new("A"), TeamId::new("B"));
    let roster = |team: &TeamId, ids: &BTreeMap<crate::roles::Role, PlayerId>| {
        let mut players: Vec<RosterEntry> = ids
            .iter()
            .map(|(r, id)| RosterEntry { player_id: id.clone(), goalkeeper: *r == crate::roles::Role::GK })
            .collect();
        players.sort_by(|x, y| x.player_id.cmp(&y.player_id));
        Roster { team_id: team.clone(), players }
    };
    let dir_a = if p.reflect_x { AttackDirection::NegativeX } else { AttackDirection::PositiveX };
    let sequence = TrackingSequence::new(
        Pitch::default(),
        SAMPLE_RATE,
        vec![roster(&team_a, &b.a), roster(&team_b, &b.b)],
        vec![
            AttackEntry { team_id: team_a.clone(), period: 1, direction: dir_a },
            AttackEntry { team_id: team_b.clone(), period: 1, direction: dir_a.flipped() },
        ],
        frames,
        events,
    )?;

    let end = sequence.period_end(1).unwrap_or(total);
    let mut players = BTreeMap::new();
    for (team, ids) in [(&team_a, &b.a), (&team_b, &b.b)] {
        for (role, id) in ids {
            let role = if p.mirror_y { role.mirrored() } else { *role };
            players.insert(
                id.clone(),
                PlayerRoles {
                    team: team.clone(),
                    intervals: vec![RoleInterval { period: 1, start: 0.0, end, role }],
                },
            );
        }
    }
    let roles = RoleTimeline::new(players)?;

    let expected = match (scenario.intended_category, &b.sprinter) {
        (Some(category), Some(player)) => vec![ExpectedSprint {
            player: player.clone(),
            team: team_a.clone(),
            period: 1,
            start: b.profile.sprint_start(),
            end: b.profile.sprint_end(),
            category,
        }],
        _ => Vec::new(),
    };
    Ok(Generated { sequence, roles, expected })
}

/// What `cmd_synth` reads: how many scenes per category and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSpec {
    pub n_per_category: usize,
    pub seed: u64,
    /// Extra boundary-probing scenes per category, labeled as such.
    pub boundary_per_category: usize,
    pub noise_scenes: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec { n_per_category: 20, seed: 0, boundary_per_category: 0, noise_scenes: 0 }
    }
}

impl CorpusSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// The first scene of each category is the canonical one; the rest draw
/// their parameters from a stream seeded by `seed`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Scenario>> {
    if spec.n_per_category == 0 {
        return Err(Error::Config("n_per_category must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::new();
    for cat in SprintCategory::ALL {
        out.push(Scenario::canonical(cat));
        for _ in 1..spec.n_per_category {
            out.push(Scenario::jittered(cat, rng.gen()));
        }
        for _ in 0..spec.boundary_per_category {
            let seed: u64 = rng.gen();
            let mut srng = ChaCha8Rng::seed_from_u64(seed);
            out.push(Scenario {
                intended_category: Some(cat),
                seed,
                params: ScenarioParams::sample_boundary(&mut srng),
                boundary: true,
            });
        }
    }
    for _ in 0..spec.noise_scenes {
        out.push(Scenario::noise(rng.gen()));
    }
    Ok(out)
}

pub fn scenario_dir_name(index: usize, s: &Scenario) -> String {
    let cat = s.intended_category.map_or("NOISE", |c| c.as_str());
    format!("{index:03}_{cat}")
}

#[derive(Debug, Serialize)]
struct LabelRow<'a> {
    scenario: &'a str,
    player_id: &'a str,
    team_id: &'a str,
    period: u8,
    start_s: String,
    end_s: String,
    category: &'a str,
    canonical: bool,
    boundary: bool,
}

/// Writes one directory per scene (tracking table, events, metadata,
/// roles, feature tensors) plus `labels.csv` and `corpus.json` at the top.
pub fn write_corpus(dir: &Path, scenarios: &[Scenario]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let generated: Vec<Generated> = scenarios.par_iter().map(generate).collect::<Result<_>>()?;
    generated
        .par_iter()
        .enumerate()
        .try_for_each(|(i, g)| -> Result<()> {
            let sub = dir.join(scenario_dir_name(i, &scenarios[i]));
            save_tracking(&g.sequence, &sub, TrackingFormat::Table)?;
            write_roles(&sub.join(ROLES_FILE), &g.roles)?;
            for (k, e) in g.expected.iter().enumerate() {
                let t = crate::features::sprint_features(
                    &g.sequence,
                    &e.player,
                    e.period,
                    e.start,
                    e.end,
                    Some(e.category),
                )?;
                t.write(&sub.join(format!("sprint_{k:02}.{}", crate::features::FEATURE_EXT)))?;
            }
            Ok(())
        })?;

    let labels = dir.join(LABELS_FILE);
    let mut w = csv_writer(&labels)?;
    for (i, (s, g)) in scenarios.iter().zip(&generated).enumerate() {
        let name = scenario_dir_name(i, s);
        for e in &g.expected {
            w.serialize(LabelRow {
                scenario: &name,
                player_id: e.player.as_str(),
                team_id: e.team.as_str(),
                period: e.period,
                start_s: format!("{:.3}", e.start),
                end_s: format!("{:.3}", e.end),
                category: e.category.as_str(),
                canonical: s.is_canonical(),
                boundary: s.boundary,
            })
            .map_err(|e| crate::tracking::csv_error(&labels, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(&labels, e))?;
    write_json(&dir.join("corpus.json"), &scenarios)
}
