//! System files, JSON reports and terminal summaries.

mod format;
mod report;
mod summary;

pub use format::{load, load_str, print, LoadError};
pub use report::{emit_report, emit_report_string, report_doc, ReportDoc, REPORT_KEYS, REPORT_SCHEMA};
pub use summary::summarize;
