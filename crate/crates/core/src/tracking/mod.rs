//! Tracking data model, file formats, view normalization and possession.

mod io;
mod model;
mod normalize;
mod possession;

pub use io::{
    load_tracking, metadata_of, read_events, read_metadata, resample, save_tracking, write_events,
    write_metadata, Metadata, TrackingFormat, EVENTS_FILE, METADATA_FILE, TRACKING_FILE,
};
pub(crate) use io::{check_header, csv_error, csv_reader, csv_writer, field, write_json, write_text};
pub use model::{
    AttackDirection, AttackEntry, Event, EventKind, Frame, Pitch, PlayerId, Roster, RosterEntry,
    TeamId, TrackingSequence, PITCH_MARGIN,
};
#[cfg(test)]
pub(crate) use model::fixtures;
pub use normalize::{normalize, NormalizedView};
pub(crate) use normalize::reflect;
pub use possession::derive_possession;
