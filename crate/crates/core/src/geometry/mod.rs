//! Pitch geometry: goal side, Delaunay neighbors and passing lines, team
//! lines, and the pitch zones used by the category rules.

mod delaunay;
mod shapes;
mod team;
mod vec2;

pub use vec2::{
    closest_point_on_segment, line_angle_deg, orient, point_in_triangle, point_segment_distance,
    segment_segment_distance, segments_intersect, Vec2,
};
pub use delaunay::{delaunay_neighbors, incircle, Edge, DUPLICATE_JITTER};
pub use shapes::{
    backward_speed, goal_side, offside_line, potential_passing_lines, returns_to_defense, zones,
    Band, DefensiveArea, DefensiveLine, GoalSide, Opponent, PassingLineKind, PassingLines, Rect,
    Zones,
};
pub use team::{
    back_line_positions, frame_defensive_area, frame_defensive_line, frame_offside_line,
    frame_passing_lines,
};
