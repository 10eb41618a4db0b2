//! Independent oracles and fixtures for testing chessdyn.
//!
//! Everything here recomputes answers from first principles instead of
//! reusing the implementation under test: a naive square-pair move
//! generator, a forward iterative-deepening mate search, an exhaustive
//! audit of solved tables against locally recomputed game values, and
//! seeded random state generators.

pub mod oracle;
pub mod sample;
pub mod slowgen;
pub mod verify;
