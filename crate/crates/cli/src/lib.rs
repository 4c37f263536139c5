//! Library surface behind the `borsuk` binary: command implementations
//! and 2-D figure-data emission, kept callable from integration tests.

pub mod commands;
pub mod figure;
