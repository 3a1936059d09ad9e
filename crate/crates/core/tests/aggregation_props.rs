use proptest::prelude::*;
use sprintlab::aggregate::{aggregate_inputs, compare_tables, DemandInput};
use sprintlab::rules::SprintCategory;

fn input() -> impl Strategy<Value = DemandInput> {
    (
        prop::sample::select(vec!["A", "B"]),
        prop::sample::select(vec!["LB", "CF", "LCM", "UNKNOWN"]),
        prop::sample::select(SprintCategory::ALL.to_vec()),
        5.0f64..60.0,
        1.0f64..8.0,
        21.1f64..35.0,
    )
        .prop_map(|(team, role, category, distance, duration, peak_speed)| DemandInput {
            team: team.into(),
            role: role.into(),
            category,
            distance,
            duration,
            peak_speed,
        })
}

proptest! {
    #[test]
    fn counts_are_conserved(inputs in prop::collection::vec(input(), 0..80)) {
        let t = aggregate_inputs(&inputs);
        prop_assert_eq!(t.total_count(), inputs.len() as u64);
        for team in ["A", "B"] {
            let n = inputs.iter().filter(|d| d.team == team).count() as u64;
            prop_assert_eq!(t.team_count(team), n);
        }
    }

    #[test]
    fn input_order_does_not_matter(inputs in prop::collection::vec(input(), 0..80), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = inputs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (a, b) = (aggregate_inputs(&inputs), aggregate_inputs(&shuffled));
        prop_assert_eq!(a.to_csv(), b.to_csv());
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(&a, &b);
    }

    #[test]
    fn split_and_merge_keeps_counts(inputs in prop::collection::vec(input(), 0..80), cut in 0usize..80) {
        let cut = cut.min(inputs.len());
        let mut left = aggregate_inputs(&inputs[..cut]);
        left.merge(&aggregate_inputs(&inputs[cut..]));
        let whole = aggregate_inputs(&inputs);
        prop_assert_eq!(left.total_count(), whole.total_count());
        for (k, c) in &whole.cells {
            prop_assert_eq!(left.cells[k].count, c.count);
            prop_assert!((left.cells[k].total_distance - c.total_distance).abs() < 1e-9);
        }
    }

    #[test]
    fn self_comparison_has_no_divergence(inputs in prop::collection::vec(input(), 1..40)) {
        let t = aggregate_inputs(&inputs);
        let r = compare_tables(&t, &t).unwrap();
        prop_assert_eq!(r.max_tv(), 0.0);
        prop_assert_eq!(r.total_abs_diff(), 0);
    }
}
