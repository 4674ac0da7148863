//! File formats, reports, and the command-line front end for the
//! grassroots platforms in `grassroots-core`.

pub mod cli;
pub mod control;
pub mod files;
pub mod pool;
pub mod report;
pub mod scenario;
pub mod tool;
