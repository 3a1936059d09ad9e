mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use sprintlab::roles::Role;
use sprintlab::rules::{
    classify, evaluate_category, resolve_priority, CategoryGroup, Phase, SprintCategory, SprintContext,
};
use sprintlab::synth::{generate, BallSpan, BallState, Scenario, Track, World};
use sprintlab::tracking::EventKind;
use sprintlab::Config;

fn held(p: &str) -> Vec<BallSpan> {
    vec![BallSpan { t0: 0.0, t1: f64::INFINITY, state: BallState::Held(pid(p)) }]
}

#[test]
fn prs_target_closes_from_twelve_to_four_meters() {
    let mut w = World::default();
    add(&mut w, "A1", Track::Linear { p0: v(0.0, 0.0), v: v(2.0, 0.0) });
    add(&mut w, "A2", Track::Static(v(-20.0, 10.0)));
    add(&mut w, "B1", Track::Static(v(12.0, 0.0)));
    add(&mut w, "B2", Track::Static(v(30.0, 20.0)));
    w.ball = held("B1");
    let (seq, roles) = materialize(&w, 4.0, &[]);
    let s = sprint("A1", 0.0, 4.0);
    let ctx = SprintContext::new(&seq, &s, Some(&roles), &Config::default()).unwrap();
    let (ok, trace) = evaluate_category(&ctx, SprintCategory::PRS);
    assert!(ok);
    let a = trace.iter().find(|t| t.clause == 'a').unwrap();
    assert!(a.value, "{trace:?}");
}

#[test]
fn int_crossing_a_pass_at_45_degrees() {
    let mut w = World::default();
    // Runs along the diagonal through the origin, crossing it at t = 2.
    let speed = 5.0;
    let dir = v(1.0, 1.0) / 2f64.sqrt();
    add(&mut w, "A1", Track::Linear { p0: dir * (-2.0 * speed), v: dir * speed });
    add(&mut w, "B1", Track::Static(v(-10.0, 0.0)));
    add(&mut w, "B2", Track::Static(v(10.0, 0.0)));
    w.ball = vec![
        BallSpan { t0: 0.0, t1: 1.0, state: BallState::Held(pid("B1")) },
        BallSpan { t0: 1.0, t1: 3.0, state: BallState::Pass { from: pid("B1"), to: pid("B2"), kind: EventKind::Pass } },
        BallSpan { t0: 3.0, t1: f64::INFINITY, state: BallState::Held(pid("B2")) },
    ];
    let (seq, roles) = materialize(&w, 4.0, &[]);
    let s = sprint("A1", 0.0, 4.0);
    let ctx = SprintContext::new(&seq, &s, Some(&roles), &Config::default()).unwrap();
    let (ok, trace) = evaluate_category(&ctx, SprintCategory::INT);
    assert!(ok, "{trace:?}");

    // The same run long after the pass does not intercept it.
    let late = sprint("A1", 0.0, 4.0);
    let mut cfg = Config::default();
    cfg.rules.int_pass_margin = -1.5;
    let ctx = SprintContext::new(&seq, &late, Some(&roles), &cfg).unwrap();
    assert!(!evaluate_category(&ctx, SprintCategory::INT).0);
}

#[test]
fn int_rejects_a_shallow_crossing() {
    let mut w = World::default();
    // 20 degrees to the pass line.
    let a = 20f64.to_radians();
    let dir = v(a.cos(), a.sin());
    add(&mut w, "A1", Track::Linear { p0: dir * -10.0, v: dir * 5.0 });
    add(&mut w, "B1", Track::Static(v(-10.0, 0.0)));
    add(&mut w, "B2", Track::Static(v(10.0, 0.0)));
    w.ball = vec![
        BallSpan { t0: 0.0, t1: 1.0, state: BallState::Held(pid("B1")) },
        BallSpan { t0: 1.0, t1: 3.0, state: BallState::Pass { from: pid("B1"), to: pid("B2"), kind: EventKind::Pass } },
        BallSpan { t0: 3.0, t1: f64::INFINITY, state: BallState::Held(pid("B2")) },
    ];
    let (seq, roles) = materialize(&w, 4.0, &[]);
    let s = sprint("A1", 0.0, 4.0);
    let ctx = SprintContext::new(&seq, &s, Some(&roles), &Config::default()).unwrap();
    assert!(!evaluate_category(&ctx, SprintCategory::INT).0);
}

#[test]
fn pup_back_line_steps_up_twelve_meters() {
    let mut w = World::default();
    add(&mut w, "A0", Track::Static(v(-50.0, 0.0)));
    for (id, y) in [("A1", 9.0), ("A2", 24.0), ("A3", -9.0), ("A4", -24.0)] {
        add(&mut w, id, Track::Move { from: v(-30.0, y), to: v(-18.0, y), t0: 0.0, t1: 4.0 });
    }
    add(&mut w, "B1", Track::Static(v(0.0, 0.0)));
    add(&mut w, "B2", Track::Static(v(20.0, 5.0)));
    w.ball = held("B1");
    let roles = [
        ("A0", Role::GK),
        ("A1", Role::LCB),
        ("A2", Role::LB),
        ("A3", Role::RCB),
        ("A4", Role::RB),
    ];
    let (seq, timeline) = materialize(&w, 4.0, &roles);
    let s = sprint("A1", 0.0, 4.0);
    let ctx = SprintContext::new(&seq, &s, Some(&timeline), &Config::default()).unwrap();
    let (ok, trace) = evaluate_category(&ctx, SprintCategory::PUP);
    assert!(ok, "{trace:?}");
    assert_eq!(trace.len(), 3);

    // Without roles the role clause fails and says why.
    let ctx = SprintContext::new(&seq, &s, None, &Config::default()).unwrap();
    let (ok, trace) = evaluate_category(&ctx, SprintCategory::PUP);
    assert!(!ok);
    assert!(trace[0].note.as_deref().unwrap().contains("roles"));
}

fn chain_check(chain: &[SprintCategory]) {
    for mask in 1u32..(1 << chain.len()) {
        let set: Vec<SprintCategory> =
            chain.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, c)| *c).collect();
        let expected = set.iter().min_by_key(|c| chain.iter().position(|x| x == *c)).copied();
        assert_eq!(resolve_priority(&set), expected.unwrap());
    }
}

#[test]
fn priority_agrees_with_each_chain() {
    use SprintCategory::*;
    chain_check(&[RWB, BIB, PEN, EXS]);
    chain_check(&[RWB, BIB, UNL, OVL, SUP, PUP]);
    chain_check(&[CTO, INT, PRS, REC, COV, PUP]);
}

proptest! {
    #[test]
    fn priority_picks_the_maximum(mask in 0u32..(1 << 15)) {
        let set: Vec<SprintCategory> = SprintCategory::ALL
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, c)| *c)
            .collect();
        let got = resolve_priority(&set);
        if set.is_empty() {
            prop_assert_eq!(got, SprintCategory::OTH);
        } else {
            prop_assert!(set.contains(&got));
            for c in &set {
                prop_assert!(got.rank() <= c.rank());
            }
        }
    }
}

/// Every scene of the jittered generator: matched codes respect the phase,
/// and each matched row's clauses are all in the trace.
#[test]
fn phase_gating_and_trace_coverage_on_generated_scenes() {
    let cfg = Config::default();
    for &cat in &SprintCategory::ALL {
        for seed in 0..4 {
            let g = generate(&Scenario::jittered(cat, 1000 + seed)).unwrap();
            let e = &g.expected[0];
            let s = sprintlab::sprint::detect_all_sprints(&g.sequence, &cfg.detection)
                .into_iter()
                .find(|s| s.player() == &e.player)
                .unwrap();
            let ctx = SprintContext::new(&g.sequence, &s, Some(&g.roles), &cfg).unwrap();
            let c = classify(&ctx);
            for m in &c.matched {
                match (c.phase, m.group()) {
                    (Phase::Attacking, CategoryGroup::Defending) | (Phase::Defending, CategoryGroup::Attacking) => {
                        panic!("{m} matched in {:?} phase", c.phase)
                    }
                    _ => {}
                }
                let clauses: BTreeSet<char> = c.trace.iter().filter(|t| t.category == *m).map(|t| t.clause).collect();
                assert!(!clauses.is_empty() && clauses.contains(&'a'), "{m}: {clauses:?}");
            }
            assert!(c.category == SprintCategory::OTH || c.matched.contains(&c.category));
        }
    }
}

/// Shifting every coordinate leaves rows that only use relative geometry
/// unchanged. Zone, defensive-area and goal-side rows are tied to the pitch
/// and are left out.
#[test]
fn relative_rows_are_translation_invariant() {
    use SprintCategory::*;
    let cfg = Config::default();
    let relative = [RWB, SUP, MTR, PRS, INT, CTO];
    for &cat in &relative {
        let g = generate(&Scenario::canonical(cat)).unwrap();
        let shift = v(1.7, -2.3);
        let frames = g
            .sequence
            .frames
            .iter()
            .cloned()
            .map(|mut f| {
                f.ball = f.ball + shift;
                for p in f.players.values_mut() {
                    *p = *p + shift;
                }
                f
            })
            .collect();
        let mut moved = g.sequence.with_frames(frames).unwrap();
        for e in &mut moved.events {
            e.start = e.start + shift;
            e.end = e.end.map(|p| p + shift);
        }
        let s = sprintlab::sprint::detect_all_sprints(&g.sequence, &cfg.detection).remove(0);
        let s2 = sprintlab::sprint::detect_all_sprints(&moved, &cfg.detection).remove(0);
        assert_eq!((s.start_time(), s.end_time()), (s2.start_time(), s2.end_time()));
        for &row in &relative {
            let a = evaluate_category(&SprintContext::new(&g.sequence, &s, Some(&g.roles), &cfg).unwrap(), row).0;
            let b = evaluate_category(&SprintContext::new(&moved, &s2, Some(&g.roles), &cfg).unwrap(), row).0;
            assert_eq!(a, b, "{cat} scene, row {row}");
        }
    }
}
