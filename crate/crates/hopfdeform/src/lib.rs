//! Configuration files, reports and the command-line front-end for
//! `hopfdeform-core`.

pub mod config;
pub mod error;
pub mod expr;
pub mod registry;
pub mod run;

pub use config::{Command, RunConfig};
pub use error::CliError;
pub use run::{run, RunReport};

/// Command-line values that replace the corresponding config fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub t_grid: Option<String>,
    pub command: Option<Command>,
}

/// Parses `"a,b,c"` into a grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad t-grid entry '{}'", p.trim())))
        })
        .collect()
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.samples {
            cfg.sample_budget = n;
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance.eq = Some(t);
        }
        if let Some(g) = &self.t_grid {
            cfg.t_grid = parse_grid(g)?;
        }
        if let Some(c) = self.command {
            cfg.command = c;
        }
        cfg.check()
    }
}

/// Exit status for a finished run.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.pass {
        0
    } else {
        1
    }
}
