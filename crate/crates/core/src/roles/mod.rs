//! Tactical roles: the role vocabulary, role timelines loaded from file or
//! assigned from mean positions, and momentary role lookup.

mod assign;
mod hungarian;
mod role;
mod timeline;

pub use assign::{assign_roles, fit_formation, FormationFit};
pub use hungarian::min_cost_assignment;
pub use role::{formation, Formation, Role, FORMATIONS};
pub use timeline::{load_roles, momentary_role, write_roles, PlayerRoles, RoleInterval, RoleTimeline};
