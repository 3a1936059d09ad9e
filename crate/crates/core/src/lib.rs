pub mod aggregate;
pub mod cli;
pub mod config;
pub mod error;
pub mod features;
pub mod geometry;
pub mod plays;
pub mod roles;
pub mod rules;
pub mod sprint;
pub mod synth;
pub mod tracking;

pub use config::Config;
pub use error::{Error, Result};
pub use tracking::{PlayerId, TeamId, TrackingSequence};
