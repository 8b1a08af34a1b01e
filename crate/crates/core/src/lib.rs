//! Single-elimination tournaments, brackets and exact scoring, with tools
//! for finding, checking and bounding resolving sets of brackets.

pub mod bracket;
pub mod error;
pub mod limits;
pub mod rational;
pub mod resolving;
pub mod scoring;
pub mod tournament;

pub use bracket::{Bracket, BracketCount, BracketSpace};
pub use error::{Error, Result};
pub use limits::Limits;
pub use rational::Rational;
pub use tournament::{Node, Restriction, Tournament, TournamentShapeId, Vertex};
pub use scoring::{ScoringSystem, WinProbabilities};
