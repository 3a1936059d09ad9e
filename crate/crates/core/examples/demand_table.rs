//! Role by category demand tables over a synthetic corpus, and the
//! divergence between two of them.

use sprintlab::aggregate::{aggregate, compare_tables, DemandTable};
use sprintlab::rules::classify_sprints;
use sprintlab::sprint::detect_all_sprints;
use sprintlab::synth::{generate, generate_corpus, CorpusSpec};
use sprintlab::Config;

fn corpus_table(seed: u64) -> sprintlab::Result<DemandTable> {
    let cfg = Config::default();
    let mut table = DemandTable::default();
    for scenario in generate_corpus(&CorpusSpec { n_per_category: 3, seed, ..Default::default() })? {
        let g = generate(&scenario)?;
        let sprints = detect_all_sprints(&g.sequence, &cfg.detection);
        let res = classify_sprints(&g.sequence, &sprints, Some(&g.roles), &cfg);
        table.merge(&aggregate(&g.sequence, &res.sprints, Some(&g.roles)));
    }
    Ok(table)
}

fn main() -> sprintlab::Result<()> {
    let a = corpus_table(1)?;
    println!("{} sprints, {} for team A", a.total_count(), a.team_count("A"));
    print!("{}", a.to_csv());

    let b = corpus_table(2)?;
    let report = compare_tables(&a, &b)?;
    println!("largest per-role TV distance between seeds: {:.3}", report.max_tv());
    Ok(())
}
