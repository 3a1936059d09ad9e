//! Formation fitting with the Hungarian solver, then role timelines from
//! tracking.

use sprintlab::roles::{assign_roles, fit_formation, formation, min_cost_assignment, momentary_role};
use sprintlab::synth::{generate, Scenario};
use sprintlab::TeamId;

fn main() -> sprintlab::Result<()> {
    let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
    let (cols, total) = min_cost_assignment(&cost);
    println!("assignment {cols:?}, cost {total}");

    // A 4-4-2 template, slightly perturbed, should fit back to 4-4-2.
    let f442 = formation("4-4-2").expect("in the catalog");
    let noisy: Vec<_> = f442
        .centered_positions()
        .iter()
        .enumerate()
        .map(|(i, p)| *p + sprintlab::geometry::Vec2::new(0.3 * (i as f64).sin(), 0.3 * (i as f64).cos()))
        .collect();
    let fit = fit_formation(&noisy)?;
    println!("fitted {} (cost {:.2})", fit.formation.name, fit.cost);

    let scene = generate(&Scenario::noise(4))?;
    for team in ["A", "B"] {
        let timeline = assign_roles(&scene.sequence, &TeamId::new(team), 5.0)?;
        let mut roles: Vec<String> = timeline
            .players()
            .map(|(p, _)| format!("{p}={}", momentary_role(&timeline, p, 1, 1.0).map(|r| r.as_str()).unwrap_or("?")))
            .collect();
        roles.sort();
        println!("team {team}: {}", roles.join(" "));
    }
    Ok(())
}
