//! File formats, generator specs, audit and benchmark reports behind the
//! `posetenum` command.

pub mod bench;
pub mod format;
pub mod genspec;
pub mod report;
