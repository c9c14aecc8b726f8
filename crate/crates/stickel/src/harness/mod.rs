//! Experiment configs, the runner, and JSON reports.

pub mod config;
pub mod experiments;
pub mod report;
pub mod selftest;

pub use config::{ConfigFile, ExperimentConfig, PlaceSpec};
pub use experiments::{run, run_one, RunOptions, KINDS};
pub use report::{Check, Report, ReportSet, Status};

/// Built-in configuration for each kind, used when no --config is given.
pub fn preset(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "theta" => include_str!("../../configs/theta.toml"),
        "interpolation" => include_str!("../../configs/interpolation.toml"),
        "gross-check" => include_str!("../../configs/gross.toml"),
        "stark-check" => include_str!("../../configs/stark.toml"),
        "burns-check" => include_str!("../../configs/burns.toml"),
        "product-formula" => include_str!("../../configs/product.toml"),
        "factorization" => include_str!("../../configs/factorization.toml"),
        "aug-oracle" | "selftest" => "experiment = []\n",
        _ => return None,
    })
}
