mod common;

use common::delaunay_oracle;
use proptest::prelude::*;
use sprintlab::geometry::{delaunay_neighbors, Vec2};

fn points() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec((-52.5f64..52.5, -34.0f64..34.0), 4..=8)
        .prop_map(|v| v.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
}

proptest! {
    #[test]
    fn matches_empty_circumcircle_oracle(p in points()) {
        if let Some(expected) = delaunay_oracle(&p) {
            prop_assert_eq!(delaunay_neighbors(&p), expected);
        }
    }

    #[test]
    fn translation_invariant(p in points(), dx in -20.0f64..20.0, dy in -20.0f64..20.0) {
        let moved: Vec<Vec2> = p.iter().map(|q| *q + Vec2::new(dx, dy)).collect();
        prop_assert_eq!(delaunay_neighbors(&p), delaunay_neighbors(&moved));
    }
}

#[test]
fn grid_points_resolve_ties_consistently() {
    // A 3x3 grid is full of cocircular quadruples; the result must still
    // be a triangulation: 16 edges for 9 points with 8 on the hull.
    let p: Vec<Vec2> = (0..9).map(|i| Vec2::new((i % 3) as f64, (i / 3) as f64)).collect();
    assert_eq!(delaunay_neighbors(&p).len(), 16);
}
