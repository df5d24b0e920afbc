//! Input files, JSON reports, instance families and property checks behind
//! the `permbound` binary.

pub mod error;
pub mod family;
pub mod matrix_file;
pub mod report;
pub mod verify;
