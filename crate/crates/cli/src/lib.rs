//! Command-line front end for homological measurement constructions.

pub mod commands;
pub mod io;
pub mod report;
pub mod stats;
