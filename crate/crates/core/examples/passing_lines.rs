//! Delaunay neighbours, potential passing lines and the defensive line on a
//! single frame.

use sprintlab::geometry::{delaunay_neighbors, frame_defensive_line, frame_passing_lines, Vec2};
use sprintlab::rules::SprintCategory;
use sprintlab::synth::{generate, Scenario};
use sprintlab::TeamId;

fn main() -> sprintlab::Result<()> {
    // Five loose points first.
    let pts = [
        Vec2::new(0.0, 0.0),
        Vec2::new(10.0, 2.0),
        Vec2::new(4.0, 9.0),
        Vec2::new(-6.0, 7.0),
        Vec2::new(3.0, -8.0),
    ];
    let edges: Vec<_> = delaunay_neighbors(&pts).into_iter().collect();
    println!("delaunay edges: {edges:?}");

    let scene = generate(&Scenario::canonical(SprintCategory::PEN))?;
    let seq = &scene.sequence;
    let frame = &seq.frames[0];
    let holder = frame.possessor.clone().expect("the scene starts with a holder");

    let lines = frame_passing_lines(frame, seq, &holder)?;
    println!("{holder} has {} potential passing lines", lines.segments.len());
    for (a, b) in &lines.segments {
        println!("  ({:.1}, {:.1}) -> ({:.1}, {:.1})", a.x, a.y, b.x, b.y);
    }

    // B defends the +x goal, so view its back line from its own side.
    let b = TeamId::new("B");
    let view = sprintlab::tracking::normalize(seq, &b)?;
    let line = frame_defensive_line(&view.frame(frame), seq, &b, &scene.roles)?;
    let pts: Vec<String> = line.vertices.iter().map(|v| format!("({:.1}, {:.1})", v.x, v.y)).collect();
    println!("B defensive line: {}", pts.join(" "));
    Ok(())
}
