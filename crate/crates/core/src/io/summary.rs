use std::fmt::Write as _;

use crate::fj::ReductionReport;

/// Fixed-layout terminal summary of a reduction.
pub fn summarize(report: &ReductionReport) -> String {
    let n = report.dimension();
    let mut out = String::new();
    let _ = writeln!(out, "+------------------------------------------------------------");
    let _ = writeln!(out, "| System              : {}", report.name);
    let _ = writeln!(out, "| Regularity Status   : {}", report.status.as_str());
    let _ = writeln!(out, "| Extended Dimension  : {n}×{n}");
    let _ = writeln!(out, "| Constraint Count    : {}", report.constraints.len());
    let _ = writeln!(out, "| Iteration Depth     : {}", report.iteration_count);
    let params = if report.parameters.is_empty() {
        "(none)".to_string()
    } else {
        report.parameters.join(", ")
    };
    let _ = writeln!(out, "| Parameters          : {params}");
    let _ = writeln!(out, "| Variables           : {}", report.extended_variables.join(", "));
    for c in &report.constraints {
        let _ = writeln!(out, "| Constraint {:<9}: {} = 0", c.multiplier, c.expr);
    }
    for d in &report.diagnostics {
        let _ = writeln!(out, "| Diagnostic          : {d}");
    }
    if let Some(g) = &report.gauge_generators {
        let _ = writeln!(out, "| Gauge Generators    : {}", g.len());
        for v in g {
            let v: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "|   ({})", v.join(", "));
        }
    }
    let _ = writeln!(out, "+------------------------------------------------------------");
    out
}
