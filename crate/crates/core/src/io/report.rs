use serde::Serialize;

use crate::expr::Expr;
use crate::fj::{ReductionReport, TraceEvent};
use crate::linalg::SymMatrix;
use crate::params::DegeneracyReport;
use crate::theorem::Theorem1Verdict;

/// Top-level keys of a report document, in emission order.
pub const REPORT_KEYS: [&str; 11] = [
    "Constraints",
    "ExtendedMatrix",
    "ExtendedOneForm",
    "ExtendedSymplecticVariables",
    "InverseExtendedMatrix",
    "IterationCount",
    "MatrixStatus",
    "Diagnostics",
    "Trace",
    "Theorem1",
    "Degeneracy",
];

#[derive(Debug, Serialize)]
pub struct DiagnosticsDoc {
    #[serde(rename = "Messages")]
    pub messages: Vec<String>,
    #[serde(rename = "GaugeGenerators")]
    pub gauge_generators: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize)]
pub struct ReportDoc<'a> {
    #[serde(rename = "Constraints")]
    pub constraints: Vec<String>,
    #[serde(rename = "ExtendedMatrix")]
    pub extended_matrix: Vec<Vec<String>>,
    #[serde(rename = "ExtendedOneForm")]
    pub extended_one_form: Vec<String>,
    #[serde(rename = "ExtendedSymplecticVariables")]
    pub extended_variables: Vec<String>,
    #[serde(rename = "InverseExtendedMatrix")]
    pub inverse: Option<Vec<Vec<String>>>,
    #[serde(rename = "IterationCount")]
    pub iteration_count: usize,
    #[serde(rename = "MatrixStatus")]
    pub status: &'static str,
    #[serde(rename = "Diagnostics")]
    pub diagnostics: DiagnosticsDoc,
    #[serde(rename = "Trace")]
    pub trace: &'a [TraceEvent],
    #[serde(rename = "Theorem1")]
    pub theorem1: Option<&'a Theorem1Verdict>,
    #[serde(rename = "Degeneracy")]
    pub degeneracy: Option<&'a DegeneracyReport>,
}

fn strings(v: &[Expr]) -> Vec<String> {
    v.iter().map(Expr::to_string).collect()
}

pub fn report_doc<'a>(
    report: &'a ReductionReport,
    theorem1: Option<&'a Theorem1Verdict>,
    degeneracy: Option<&'a DegeneracyReport>,
) -> ReportDoc<'a> {
    ReportDoc {
        constraints: report.constraints.iter().map(|c| c.expr.to_string()).collect(),
        extended_matrix: report.extended_matrix.to_strings(),
        extended_one_form: strings(&report.extended_one_form),
        extended_variables: report.extended_variables.clone(),
        inverse: report.inverse_extended_matrix.as_ref().map(SymMatrix::to_strings),
        iteration_count: report.iteration_count,
        status: report.status.as_str(),
        diagnostics: DiagnosticsDoc {
            messages: report.diagnostics.clone(),
            gauge_generators: report
                .gauge_generators
                .as_ref()
                .map(|g| g.iter().map(|v| strings(v)).collect()),
        },
        trace: &report.trace,
        theorem1,
        degeneracy,
    }
}

/// The report as a JSON value.
pub fn emit_report(
    report: &ReductionReport,
    theorem1: Option<&Theorem1Verdict>,
    degeneracy: Option<&DegeneracyReport>,
) -> serde_json::Value {
    serde_json::to_value(report_doc(report, theorem1, degeneracy)).expect("report serializes")
}

pub fn emit_report_string(
    report: &ReductionReport,
    theorem1: Option<&Theorem1Verdict>,
    degeneracy: Option<&DegeneracyReport>,
) -> String {
    serde_json::to_string_pretty(&report_doc(report, theorem1, degeneracy)).expect("report serializes")
}

/// The JSON schema shipped with the crate.
pub const REPORT_SCHEMA: &str = include_str!("../../fixtures/report.schema.json");
