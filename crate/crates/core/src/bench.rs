//! Bundled benchmark systems and their golden inverse matrices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse, Expr, ParseError};
use crate::fj::{reduce, MatrixStatus, ReduceError, ReduceOptions, ReductionReport};
use crate::io::{load_str, LoadError};
use crate::linalg::SymMatrix;

/// Golden data as shipped in the fixtures directory.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct Golden {
    pub name: String,
    pub system: String,
    pub status: String,
    pub iterations: usize,
    /// Variable order of the golden matrix, as engine variable names.
    pub order: Option<Vec<String>>,
    /// Overall factor in front of the printed matrix.
    pub scale: String,
    pub inverse: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkCase {
    pub name: String,
    pub system_text: &'static str,
    pub golden: Golden,
}

impl BenchmarkCase {
    pub fn expected_status(&self) -> MatrixStatus {
        if self.golden.status == "Regular" {
            MatrixStatus::Regular
        } else {
            MatrixStatus::Singular
        }
    }

    /// The golden inverse with the scale applied, in golden order.
    pub fn golden_inverse(&self) -> Result<Option<SymMatrix>, ParseError> {
        let Some(rows) = &self.golden.inverse else {
            return Ok(None);
        };
        let scale = parse(&self.golden.scale)?;
        Ok(Some(SymMatrix::parse_rows(rows)?.scale(&scale)))
    }
}

const FIXTURES: [(&str, &str); 4] = [
    (
        include_str!("../fixtures/bench1.sys"),
        include_str!("../fixtures/bench1.golden.json"),
    ),
    (
        include_str!("../fixtures/bench2.sys"),
        include_str!("../fixtures/bench2.golden.json"),
    ),
    (
        include_str!("../fixtures/bench3.sys"),
        include_str!("../fixtures/bench3.golden.json"),
    ),
    (
        include_str!("../fixtures/gauge.sys"),
        include_str!("../fixtures/gauge.golden.json"),
    ),
];

/// Benchmarks I-III and the gauge variant.
pub fn bundled() -> Vec<BenchmarkCase> {
    FIXTURES
        .iter()
        .map(|(sys, gold)| {
            let golden: Golden = serde_json::from_str(gold).expect("bundled golden JSON is valid");
            BenchmarkCase {
                name: golden.name.clone(),
                system_text: sys,
                golden,
            }
        })
        .collect()
}

pub fn find(name: &str) -> Option<BenchmarkCase> {
    bundled().into_iter().find(|c| c.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Mismatch {
    Status { expected: String, got: String },
    Iterations { expected: usize, got: usize },
    MissingInverse,
    UnknownVariable(String),
    Dimension { expected: usize, got: usize },
    Entry { row: usize, col: usize, expected: String, got: String },
    NotIdentity,
    NoGaugeGenerators,
    GaugeGeneratorNotInKernel(usize),
}

/// Differences between a run and its golden data; empty on success.
#[derive(Debug, Clone, Serialize)]
pub struct BenchDiff {
    pub name: String,
    pub mismatches: Vec<Mismatch>,
}

impl BenchDiff {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("golden matrix: {0}")]
    Golden(#[from] ParseError),
}

pub fn run_benchmark(case: &BenchmarkCase, opts: &ReduceOptions) -> Result<(ReductionReport, BenchDiff), BenchError> {
    let def = load_str(case.system_text)?;
    let report = reduce(&def, opts)?;
    let diff = compare(case, &report)?;
    Ok((report, diff))
}

/// Compares a report with the case's golden data.
pub fn compare(case: &BenchmarkCase, report: &ReductionReport) -> Result<BenchDiff, BenchError> {
    let mut mismatches = Vec::new();
    if report.status != case.expected_status() {
        mismatches.push(Mismatch::Status {
            expected: case.golden.status.clone(),
            got: report.status.as_str().into(),
        });
    }
    if report.iteration_count != case.golden.iterations {
        mismatches.push(Mismatch::Iterations {
            expected: case.golden.iterations,
            got: report.iteration_count,
        });
    }
    match &report.inverse_extended_matrix {
        Some(inv) => {
            if !report.extended_matrix.mul(inv).is_ok_and(|p| p.is_identity()) {
                mismatches.push(Mismatch::NotIdentity);
            }
        }
        None => {
            let f = &report.extended_matrix;
            match &report.gauge_generators {
                Some(g) if !g.is_empty() => {
                    for (k, v) in g.iter().enumerate() {
                        if !f.mul_vec(v).is_ok_and(|w| w.iter().all(Expr::is_zero)) {
                            mismatches.push(Mismatch::GaugeGeneratorNotInKernel(k));
                        }
                    }
                }
                _ => mismatches.push(Mismatch::NoGaugeGenerators),
            }
        }
    }
    if let Some(golden) = case.golden_inverse()? {
        let Some(inv) = &report.inverse_extended_matrix else {
            mismatches.push(Mismatch::MissingInverse);
            return Ok(BenchDiff {
                name: case.name.clone(),
                mismatches,
            });
        };
        let order = case.golden.order.clone().unwrap_or_else(|| report.extended_variables.clone());
        if order.len() != inv.rows() || golden.rows() != inv.rows() {
            mismatches.push(Mismatch::Dimension {
                expected: golden.rows(),
                got: inv.rows(),
            });
        } else {
            let mut perm = Vec::new();
            for name in &order {
                match report.extended_variables.iter().position(|v| v == name) {
                    Some(i) => perm.push(i),
                    None => mismatches.push(Mismatch::UnknownVariable(name.clone())),
                }
            }
            if perm.len() == order.len() {
                let ours = inv.permute(&perm);
                for i in 0..ours.rows() {
                    for j in 0..ours.cols() {
                        if ours[(i, j)] != golden[(i, j)] {
                            mismatches.push(Mismatch::Entry {
                                row: i,
                                col: j,
                                expected: golden[(i, j)].to_string(),
                                got: ours[(i, j)].to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(BenchDiff {
        name: case.name.clone(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_cases_match() {
        let cases = bundled();
        assert_eq!(cases.len(), 4);
        for case in &cases {
            let (_, diff) = run_benchmark(case, &ReduceOptions::default()).unwrap();
            assert!(diff.is_empty(), "{}: {:?}", case.name, diff.mismatches);
        }
        assert!(find("Benchmark II").is_some());
    }
}
