use sprintlab::rules::{classify_sprints, SprintCategory};
use sprintlab::sprint::detect_all_sprints;
use sprintlab::synth::{generate, Scenario};
use sprintlab::Config;

/// Runs one scene and returns a description of what went wrong, if anything.
fn check(s: &Scenario) -> Option<String> {
    let cfg = Config::default();
    let g = generate(s).unwrap();
    let sprints = detect_all_sprints(&g.sequence, &cfg.detection);
    let res = classify_sprints(&g.sequence, &sprints, Some(&g.roles), &cfg);
    if g.expected.is_empty() {
        return (!sprints.is_empty()).then(|| format!("noise scene produced {} sprints", sprints.len()));
    }
    let e = &g.expected[0];
    if res.sprints.len() != 1 {
        return Some(format!("{:?}: {} sprints detected, {} failures", s, res.sprints.len(), res.failures.len()));
    }
    let c = &res.sprints[0];
    if c.sprint.player() != &e.player || c.classification.category != e.category {
        let trace: Vec<String> = c
            .classification
            .trace
            .iter()
            .map(|t| format!("{}.{}={}{}", t.category, t.clause, t.value as u8, t.note.as_deref().map(|n| format!("({n})")).unwrap_or_default()))
            .collect();
        return Some(format!(
            "expected {} got {} matched {:?} phase {:?} params {:?}\n  {}",
            e.category,
            c.classification.category,
            c.classification.matched,
            c.classification.phase,
            s.params,
            trace.join(" ")
        ));
    }
    None
}

#[test]
fn canonical_archetypes_classify_as_intended() {
    let failures: Vec<String> = SprintCategory::ALL
        .iter()
        .filter_map(|&c| check(&Scenario::canonical(c)))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn jittered_archetypes_classify_as_intended() {
    let mut failures = Vec::new();
    for &c in &SprintCategory::ALL {
        for seed in 0..40u64 {
            if let Some(f) = check(&Scenario::jittered(c, seed * 7919 + 1)) {
                failures.push(f);
            }
        }
    }
    assert!(failures.is_empty(), "{} failures\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn noise_scene_has_no_sprints() {
    for seed in 0..10 {
        assert_eq!(check(&Scenario::noise(seed)), None);
    }
}
