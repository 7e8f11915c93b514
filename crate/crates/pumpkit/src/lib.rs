//! File formats, reports, charts and the `pumpkit` command line on top of
//! [`pumpkit_core`].

pub mod chart;
pub mod cli;
pub mod document;
pub mod report;

pub use document::PdaDocument;
pub use report::PumpReport;
