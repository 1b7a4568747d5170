//! IO, file formats and the deterministic parallel driver behind the
//! `fbmrate` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod parallel;
pub mod results;

pub use error::{AppError, AppResult};
