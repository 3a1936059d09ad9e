//! Speed signal and sprint detection for one player.
//!
//! ```text
//! cargo run --example detect_sprints
//! ```

use sprintlab::rules::SprintCategory;
use sprintlab::sprint::{compute_speed, detect_all_sprints, detect_run_efforts, detect_sprints};
use sprintlab::synth::{generate, Scenario};
use sprintlab::Config;

fn main() -> sprintlab::Result<()> {
    let cfg = Config::default();
    let scene = generate(&Scenario::canonical(SprintCategory::OVL))?;
    let seq = &scene.sequence;
    let runner = &scene.expected[0].player;

    // Step by step: smoothed speed, run efforts, then the sprint threshold.
    for signal in compute_speed(seq, runner, &cfg.detection)? {
        let efforts = detect_run_efforts(&signal, cfg.detection.tau, cfg.detection.min_effort_duration);
        println!("{runner}: {} samples, {} run efforts", signal.len(), efforts.len());
        for e in &efforts {
            println!("  effort {:.1}-{:.1} s, peak {:.1} km/h at {:.1} s", e.start_time, e.end_time, e.peak_speed, e.peak_time);
        }
        for s in detect_sprints(&signal, &efforts, cfg.detection.sprint_threshold) {
            println!("  sprint {:.1}-{:.1} s, {:.1} m", s.start_time(), s.end_time(), s.distance);
        }
    }

    // Or all players at once.
    let all = detect_all_sprints(seq, &cfg.detection);
    println!("{} sprint(s) in the scene", all.len());
    Ok(())
}
