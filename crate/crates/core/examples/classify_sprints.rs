//! Rule-engine classification with its evaluation trace.
//!
//! Pass a category code to pick the archetype scene, e.g.
//! `cargo run --example classify_sprints -- INT`.

use sprintlab::rules::{classify_match, SprintCategory};
use sprintlab::synth::{generate, Scenario};
use sprintlab::Config;

fn main() -> sprintlab::Result<()> {
    let code = std::env::args().nth(1).unwrap_or_else(|| "RWB".into());
    let category: SprintCategory = code.parse()?;
    let cfg = Config::default();
    let scene = generate(&Scenario::jittered(category, 42))?;

    let result = classify_match(&scene.sequence, Some(&scene.roles), &cfg);
    for c in &result.sprints {
        let s = &c.sprint;
        let k = &c.classification;
        println!(
            "{} {:.1}-{:.1} s peak {:.1} km/h: {} ({:?}), matched {:?}",
            s.player(),
            s.start_time(),
            s.end_time(),
            s.effort.peak_speed,
            k.category,
            k.phase,
            k.matched
        );
        for t in k.trace.iter().filter(|t| t.category == k.category) {
            println!("  {}.{} = {} {}", t.category, t.clause, t.value, t.note.as_deref().unwrap_or(""));
        }
    }
    for f in &result.failures {
        println!("{} not classified: {}", f.sprint.player(), f.message);
    }
    Ok(())
}
