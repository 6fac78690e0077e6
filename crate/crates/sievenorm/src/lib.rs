//! Experiments, result rows and their CSV/JSON renderings on top of
//! `sievenorm-core`.

pub mod config;
pub mod experiments;
pub mod output;
pub mod row;
pub mod suite;

pub use config::SuiteConfig;
pub use experiments::Settings;
pub use output::{Metadata, OutputRecord};
pub use row::{CheckKind, ExperimentRow};
pub use suite::run_suite;
