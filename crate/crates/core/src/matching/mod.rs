//! Randomized triangle-matching procedures that reveal the random subgraph
//! edge by edge.

mod cover;
mod greedy;
mod help;
mod match_cover;
mod reveal;

pub use cover::{cover_special_vertices, CoverReport, SpecialVertex};
pub use greedy::greedy_triangle_matching;
pub use help::{match_cover_help, EdgeTarget, HelpReport};
pub use match_cover::{check_composition, match_cover, ComposedTriangle, MatchCoverInput, MatchCoverReport};
pub use reveal::RevealState;
