//! Subcommand implementations.

pub mod besov;
pub mod crossing_bound;
pub mod estimate_rate;
pub mod simulate_paths;
pub mod verify_ito;

/// Shared run context resolved from global flags.
#[derive(Debug, Clone, Copy)]
pub struct RunContext {
    pub threads: usize,
    pub quiet: bool,
    pub seed_override: Option<u64>,
}

impl RunContext {
    /// Progress/echo channel: stderr, silenced by --quiet. Result output
    /// never goes through here.
    pub fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}
