//! Parametric degeneracy analysis of the extended two-form.

use std::collections::HashMap;
use std::io::Write;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::expr::gcd::square_free_in;
use crate::expr::poly::Poly;
use crate::expr::{Atom, EvalError, Expr};
use crate::fj::{reduce, MatrixStatus, ReductionReport};

/// One square-free factor of the determinant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyFactor {
    #[serde(rename = "Factor", serialize_with = "as_text")]
    pub factor: Expr,
    /// Negative for denominator factors.
    #[serde(rename = "Multiplicity")]
    pub multiplicity: i32,
    #[serde(rename = "ParametersOnly")]
    pub parameters_only: bool,
}

fn as_text<S: serde::Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    #[serde(rename = "Determinant", serialize_with = "as_text")]
    pub determinant: Expr,
    /// Everything not captured by a parameter factor.
    #[serde(rename = "Content", serialize_with = "as_text")]
    pub content: Expr,
    #[serde(rename = "Factors")]
    pub factors: Vec<DegeneracyFactor>,
    #[serde(rename = "Parameters")]
    pub parameters: Vec<String>,
    /// `factor = 0` for each parameter-only factor of the numerator.
    #[serde(rename = "VanishingConditions")]
    pub vanishing_conditions: Vec<String>,
}

impl DegeneracyReport {
    /// `content · Π factor^multiplicity`.
    pub fn product(&self) -> Expr {
        let mut acc = self.content.clone();
        for f in &self.factors {
            acc = &acc * &f.factor.pow(f.multiplicity as i64).expect("nonzero factor");
        }
        acc
    }
}

fn split(p: &Poly, params: &[String], sign: i32, factors: &mut Vec<DegeneracyFactor>) -> Poly {
    let mut rest = p.clone();
    for name in params {
        let atom = Atom::var(name);
        if rest.degree_in(&atom) == 0 {
            continue;
        }
        let (cofactor, sqf) = square_free_in(&rest, &atom);
        for f in sqf {
            let e = Expr::from_poly(f.factor);
            let parameters_only = e.free_vars().iter().all(|v| params.contains(v));
            factors.push(DegeneracyFactor {
                factor: e,
                multiplicity: sign * f.multiplicity as i32,
                parameters_only,
            });
        }
        rest = cofactor;
    }
    rest
}

/// Factors `det f` by square-free decomposition in each parameter.
pub fn degeneracy_locus(report: &ReductionReport) -> DegeneracyReport {
    degeneracy_of(&report.determinant, &report.parameters)
}

pub fn degeneracy_of(det: &Expr, parameters: &[String]) -> DegeneracyReport {
    let mut factors = Vec::new();
    let num = split(det.num_poly(), parameters, 1, &mut factors);
    let den = split(det.den_poly(), parameters, -1, &mut factors);
    let content = Expr::from_poly(num)
        .checked_div(&Expr::from_poly(den))
        .expect("nonzero denominator");
    let vanishing_conditions = factors
        .iter()
        .filter(|f| f.parameters_only && f.multiplicity > 0)
        .map(|f| format!("{} = 0", f.factor))
        .collect();
    DegeneracyReport {
        determinant: det.clone(),
        content,
        factors,
        parameters: parameters.to_vec(),
        vanishing_conditions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanStatus {
    Regular,
    Singular,
    Pole,
}

impl ScanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanStatus::Regular => "Regular",
            ScanStatus::Singular => "Singular",
            ScanStatus::Pole => "pole",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub point: Vec<BigRational>,
    pub status: ScanStatus,
    /// The determinant specialized at the point; `None` at a pole.
    pub det: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("parameter `{0}` has no grid values")]
    Uncovered(String),
    #[error("grid names `{0}`, which is not a parameter of the system")]
    UnknownParameter(String),
    #[error("grid for `{0}` is empty")]
    EmptyGrid(String),
    #[error("specialized system: {0}")]
    Specialized(String),
}

/// Evaluates the determinant on the Cartesian product of the grid, first
/// parameter varying slowest.
///
/// The status of each finite point comes from reducing the system with the
/// parameters fixed there, so points where the generic derivation breaks
/// down (a kinetic coefficient vanishing, say) are reported as the
/// specialized system behaves. The `det` column stays the evaluation of the
/// generic determinant.
pub fn scan(report: &ReductionReport, grid: &[(String, Vec<BigRational>)]) -> Result<Vec<ScanRow>, ScanError> {
    let mut rows = scan_determinant(&report.determinant, &report.parameters, grid)?;
    for row in rows.iter_mut().filter(|r| r.status != ScanStatus::Pole) {
        let values: HashMap<String, BigRational> = grid
            .iter()
            .zip(&row.point)
            .map(|((n, _), v)| (n.clone(), v.clone()))
            .collect();
        let def = report
            .definition
            .specialize(&values)
            .map_err(|e| ScanError::Specialized(e.to_string()))?;
        let specialized = reduce(&def, &report.options).map_err(|e| ScanError::Specialized(e.to_string()))?;
        row.status = match specialized.status {
            MatrixStatus::Regular => ScanStatus::Regular,
            MatrixStatus::Singular => ScanStatus::Singular,
        };
    }
    Ok(rows)
}

pub fn scan_determinant(
    det: &Expr,
    parameters: &[String],
    grid: &[(String, Vec<BigRational>)],
) -> Result<Vec<ScanRow>, ScanError> {
    for p in parameters {
        if !grid.iter().any(|(n, _)| n == p) {
            return Err(ScanError::Uncovered(p.clone()));
        }
    }
    for (n, values) in grid {
        if !parameters.contains(n) {
            return Err(ScanError::UnknownParameter(n.clone()));
        }
        if values.is_empty() {
            return Err(ScanError::EmptyGrid(n.clone()));
        }
    }
    let mut rows = Vec::new();
    let mut index = vec![0usize; grid.len()];
    loop {
        let point: Vec<BigRational> = index
            .iter()
            .zip(grid)
            .map(|(&i, (_, v))| v[i].clone())
            .collect();
        let map: HashMap<String, Expr> = grid
            .iter()
            .zip(&point)
            .map(|((n, _), v)| (n.clone(), Expr::rational(v.clone())))
            .collect();
        let row = match det.subs(&map) {
            Ok(d) => ScanRow {
                point,
                status: if d.is_zero() {
                    ScanStatus::Singular
                } else {
                    ScanStatus::Regular
                },
                det: Some(d),
            },
            Err(EvalError::ZeroDenominator(_)) | Err(EvalError::Unbound(_)) => ScanRow {
                point,
                status: ScanStatus::Pole,
                det: None,
            },
        };
        rows.push(row);
        // Odometer increment, last parameter fastest.
        let mut k = grid.len();
        loop {
            if k == 0 {
                return Ok(rows);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < grid[k].1.len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Writes scan rows as CSV with header `<parameters>, status, det`.
pub fn write_csv<W: Write>(out: W, names: &[String], rows: &[ScanRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = names.to_vec();
    header.push("status".into());
    header.push("det".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.point.iter().map(|v| v.to_string()).collect();
        rec.push(r.status.as_str().to_string());
        rec.push(r.det.as_ref().map_or_else(String::new, Expr::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `name=v1,v2,...` into a grid axis.
pub fn parse_axis(spec: &str) -> Result<(String, Vec<BigRational>), String> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| format!("expected name=v1,v2,... in `{spec}`"))?;
    let values = values
        .split(',')
        .map(|v| {
            let e = crate::expr::parse(v.trim()).map_err(|e| format!("`{v}`: {e}"))?;
            e.as_rational().ok_or_else(|| format!("`{v}` is not a rational number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name.trim().to_string(), values))
}
