//! Per-sprint feature tensors in the SPFT binary layout.

use sprintlab::features::{sprint_features, FeatureTensor};
use sprintlab::rules::SprintCategory;
use sprintlab::synth::{generate, Scenario};

fn main() -> sprintlab::Result<()> {
    let scene = generate(&Scenario::canonical(SprintCategory::CTO))?;
    let e = &scene.expected[0];
    let t = sprint_features(&scene.sequence, &e.player, e.period, e.start, e.end, Some(e.category))?;
    println!("{} frames x 22 slots x 8 features, label {:?}", t.frames, t.label);

    // Slot 0 is the sprinter.
    for frame in [0, t.frames / 2, t.frames - 1] {
        let f = t.feature(frame, 0);
        println!("t={frame}: x {:.1} y {:.1} v ({:.1}, {:.1})", f[0], f[1], f[2], f[3]);
    }

    let bytes = t.to_bytes();
    let back = FeatureTensor::from_bytes(&bytes)?;
    assert_eq!(back, t);
    println!("{} bytes, round trip ok", bytes.len());
    Ok(())
}
