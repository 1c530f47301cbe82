//! Instance generation, brute-force oracles, the CLI, report verification,
//! and benchmark reporting.

pub mod brute;
pub mod cli;
pub mod generate;
pub mod instance;
pub mod report;
pub mod verify;
