//! Equilibria of a lobbyist persuading a career-concerned politician, under
//! different rules on what the public learns about the lobbyist's preference,
//! the decision's consequences and the persuasion itself.

pub mod analysis;
pub mod best_response;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod oracle;
pub mod public;
pub mod roots;

pub use error::{ModelError, RootError, SolveError};
pub use model::*;
