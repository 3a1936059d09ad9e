mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use sprintlab::features::{sprint_features, FeatureTensor};
use sprintlab::roles::{load_roles, write_roles};
use sprintlab::rules::{classify_match, read_classifications, write_classifications, SprintCategory};
use sprintlab::synth::{generate, generate_corpus, write_corpus, CorpusSpec, Scenario};
use sprintlab::tracking::{
    load_tracking, save_tracking, AttackDirection, AttackEntry, Frame, Pitch, Roster, RosterEntry, TrackingFormat,
};
use sprintlab::{Config, TeamId, TrackingSequence};

fn roster(team: &str, n: usize) -> Roster {
    Roster {
        team_id: TeamId::new(team),
        players: (0..n)
            .map(|i| RosterEntry { player_id: pid(&format!("{team}{i}")), goalkeeper: i == 0 })
            .collect(),
    }
}

/// Positions in whole centimeters, times on the 10 Hz grid.
fn sequence() -> impl Strategy<Value = TrackingSequence> {
    let (x, y) = (|| -5000i32..5000, || -3400i32..3400);
    let frame = (prop::collection::vec((x(), y(), any::<bool>()), 6), (x(), y()), 0u8..3);
    (prop::collection::vec(frame, 2..12), 1usize..=2).prop_map(|(raw, periods)| {
        let ids: Vec<String> = ["A0", "A1", "A2", "B0", "B1", "B2"].iter().map(|s| s.to_string()).collect();
        let mut frames = Vec::new();
        for period in 1..=periods as u8 {
            for (k, (players, ball, poss)) in raw.iter().enumerate() {
                let players: BTreeMap<_, _> = players
                    .iter()
                    .zip(&ids)
                    .filter(|((_, _, present), _)| *present)
                    .map(|((x, y, _), id)| (pid(id), v(*x as f64 / 100.0, *y as f64 / 100.0)))
                    .collect();
                let (team, possessor) = match poss {
                    0 => (None, None),
                    1 => {
                        let holder = players.keys().find(|p| p.as_str().starts_with('A')).cloned();
                        (Some(TeamId::new("A")), holder)
                    }
                    _ => (Some(TeamId::new("B")), None),
                };
                frames.push(Frame {
                    period,
                    time: k as f64 / 10.0,
                    players,
                    ball: v(ball.0 as f64 / 100.0, ball.1 as f64 / 100.0),
                    possession_team: team,
                    possessor,
                });
            }
        }
        let dirs = (1..=periods as u8)
            .flat_map(|p| {
                let d = if p == 1 { AttackDirection::PositiveX } else { AttackDirection::NegativeX };
                [
                    AttackEntry { team_id: TeamId::new("A"), period: p, direction: d },
                    AttackEntry { team_id: TeamId::new("B"), period: p, direction: d.flipped() },
                ]
            })
            .collect();
        TrackingSequence::new(Pitch::default(), 10.0, vec![roster("A", 3), roster("B", 3)], dirs, frames, vec![])
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_and_json_round_trip_exactly(seq in sequence()) {
        let dir = tempfile::tempdir().unwrap();
        let table = dir.path().join("m");
        save_tracking(&seq, &table, TrackingFormat::Table).unwrap();
        prop_assert_eq!(&load_tracking(&table, TrackingFormat::Table).unwrap(), &seq);
        let json = dir.path().join("m.json");
        save_tracking(&seq, &json, TrackingFormat::Json).unwrap();
        prop_assert_eq!(&load_tracking(&json, TrackingFormat::Json).unwrap(), &seq);
    }
}

#[test]
fn generated_scene_round_trips_with_events_and_roles() {
    let g = generate(&Scenario::jittered(SprintCategory::INT, 5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    save_tracking(&g.sequence, dir.path(), TrackingFormat::Table).unwrap();
    let back = load_tracking(dir.path(), TrackingFormat::Table).unwrap();
    assert_eq!(back.events.len(), g.sequence.events.len());
    assert_eq!(back.events.len(), 3);
    assert_eq!(back.frames.len(), g.sequence.frames.len());
    for (a, b) in back.frames.iter().zip(&g.sequence.frames) {
        for (p, q) in &a.players {
            // Half a centimeter per axis.
            assert!(q.dist(b.players[p]) <= 0.0071);
        }
    }
    let roles = dir.path().join("roles.csv");
    write_roles(&roles, &g.roles).unwrap();
    assert_eq!(load_roles(&roles).unwrap(), g.roles);
}

#[test]
fn classification_file_reads_back() {
    let g = generate(&Scenario::canonical(SprintCategory::OVL)).unwrap();
    let cfg = Config::default();
    let res = classify_match(&g.sequence, Some(&g.roles), &cfg);
    let dir = tempfile::tempdir().unwrap();
    for name in ["c.csv", "c.json"] {
        let path = dir.path().join(name);
        write_classifications(&path, &g.sequence, &res, Some(&g.roles), name.ends_with("json")).unwrap();
        let back = read_classifications(&path).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].2, SprintCategory::OVL);
        assert_eq!(back[0].3, res.sprints[0].classification.matched);
        if name.ends_with("csv") {
            assert_eq!(back[0].1, "LB");
        }
    }
}

#[test]
fn corpus_is_byte_identical_for_a_seed() {
    let spec = CorpusSpec { n_per_category: 2, seed: 7, boundary_per_category: 0, noise_scenes: 1 };
    let scenarios = generate_corpus(&spec).unwrap();
    assert_eq!(scenarios.len(), 31);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_corpus(a.path(), &scenarios).unwrap();
    write_corpus(b.path(), &generate_corpus(&spec).unwrap()).unwrap();
    let files = |d: &std::path::Path| {
        let mut v: Vec<_> = walk(d).into_iter().map(|p| p.strip_prefix(d).unwrap().to_path_buf()).collect();
        v.sort();
        v
    };
    let fa = files(a.path());
    assert_eq!(fa, files(b.path()));
    assert!(fa.iter().any(|p| p.ends_with("labels.csv")));
    for f in &fa {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f:?}");
    }
    let labels = std::fs::read_to_string(a.path().join("labels.csv")).unwrap();
    assert_eq!(labels.lines().count(), 1 + 30);
}

fn walk(d: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(d).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn one_per_category_gives_fifteen_scenes() {
    let s = generate_corpus(&CorpusSpec { n_per_category: 1, ..CorpusSpec::default() }).unwrap();
    assert_eq!(s.len(), 15);
    assert!(s.iter().all(Scenario::is_canonical));
    assert!(generate_corpus(&CorpusSpec { n_per_category: 0, ..CorpusSpec::default() }).is_err());
}

#[test]
fn infeasible_peak_speed_is_rejected() {
    let mut s = Scenario::canonical(SprintCategory::PEN);
    s.params.peak_speed = 41.0;
    assert!(matches!(generate(&s), Err(sprintlab::Error::Infeasible(_))));
}

/// Features recomputed from raw positions with plain arithmetic.
#[test]
fn feature_values_match_tracking_arithmetic() {
    let g = generate(&Scenario::jittered(SprintCategory::PEN, 3)).unwrap();
    let seq = &g.sequence;
    let e = &g.expected[0];
    let t = sprint_features(seq, &e.player, 1, e.start, e.end, Some(e.category)).unwrap();
    let bytes = t.to_bytes();
    assert_eq!(&bytes[..4], b"SPFT");
    assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 22);
    assert_eq!(i32::from_le_bytes(bytes[20..24].try_into().unwrap()), 2);
    assert_eq!(FeatureTensor::from_bytes(&bytes).unwrap(), t);

    // Scenes reflected along x are stored with A attacking -x; features are
    // in A's attacking view.
    let sign = if seq.direction(&TeamId::new("A"), 1) == Some(AttackDirection::NegativeX) { -1.0 } else { 1.0 };
    let first = seq.frames.iter().position(|f| f.time >= e.start - 1e-9).unwrap();
    for ti in [0usize, 5, t.frames - 1] {
        let k = first + ti;
        let (prev, cur, next) = (&seq.frames[k - 1], &seq.frames[k], &seq.frames[k + 1]);
        let p = cur.players[&e.player] * sign;
        let vel = (next.players[&e.player] - prev.players[&e.player]) * (sign / 0.2);
        let rel = (cur.players[&e.player] - cur.ball) * sign;
        let f = t.feature(ti, 0);
        let close = |a: f32, b: f64| (a as f64 - b).abs() < 1e-3;
        assert!(close(f[0], p.x) && close(f[1], p.y));
        assert!(close(f[2], vel.x) && close(f[3], vel.y) && close(f[4], vel.norm()));
        assert!(close(f[6], rel.x) && close(f[7], rel.y));
    }
}
