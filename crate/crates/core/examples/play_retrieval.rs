//! Play segmentation, keyword filtering and baseline similarity search.

use std::collections::BTreeSet;

use sprintlab::plays::{retrieve, BackendRegistry, KeywordMode, PlayIndex, SprintTag, BASELINE_ID};
use sprintlab::rules::{classify_match, SprintCategory};
use sprintlab::synth::{generate, Scenario};
use sprintlab::Config;

fn main() -> sprintlab::Result<()> {
    let cfg = Config::default();
    let scene = generate(&Scenario::canonical(SprintCategory::INT))?;
    let seq = &scene.sequence;

    let tags: Vec<SprintTag> = classify_match(seq, Some(&scene.roles), &cfg)
        .sprints
        .iter()
        .map(|c| SprintTag {
            period: c.sprint.period(),
            start: c.sprint.start_time(),
            end: c.sprint.end_time(),
            category: c.classification.category,
        })
        .collect();
    let index = PlayIndex::build(seq, &tags, &cfg.plays, BASELINE_ID)?;
    for (i, p) in index.plays.iter().enumerate() {
        println!("play {i}: team {} {:.1}-{:.1} s {:?}", p.play.team, p.play.start_time, p.play.end_time, p.signature);
    }

    let registry = BackendRegistry::new(cfg.plays.unmatched_penalty);
    let backend = registry.get(BASELINE_ID)?;
    let query = &index.plays[0].trajectory;
    let required: BTreeSet<_> = [SprintCategory::INT].into();
    for hit in retrieve(&index, query, 3, &required, KeywordMode::Superset, backend) {
        println!("#{} play {} distance {:.2} {}", hit.rank, hit.play_index, hit.distance, hit.categories);
    }
    Ok(())
}
