//! Labeled synthetic scenes: one archetype per category plus jittered
//! variants, written to disk with their labels.
//!
//! `cargo run --example synthetic_corpus -- /tmp/corpus`

use std::path::PathBuf;

use sprintlab::synth::{generate_corpus, scenario_dir_name, write_corpus, CorpusSpec};

fn main() -> sprintlab::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sprintlab-corpus"));
    let spec = CorpusSpec { n_per_category: 2, seed: 7, noise_scenes: 1, ..Default::default() };
    let scenes = generate_corpus(&spec)?;
    for (i, s) in scenes.iter().enumerate().take(4) {
        println!("{} peak {:.1} km/h over {:.2} s", scenario_dir_name(i, s), s.params.peak_speed, s.params.duration);
    }
    write_corpus(&out, &scenes)?;
    println!("{} scenes written to {}", scenes.len(), out.display());
    Ok(())
}
