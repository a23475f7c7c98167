//! Independent checks that the bordered two-form is regular exactly when the
//! constraint bracket matrix is nondegenerate.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{sample_keys, Bindings, Expr, ZeroClass, ZeroTester};
use crate::fj::{ReductionReport, SymplecticState};
use crate::linalg::{determinant_with, echelon_with, schur_complement_with, LinalgError, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("no canonical pairing available; use the Schur route")]
    NotApplicable,
    #[error("no invertible canonical sector")]
    NoCanonicalSector,
    #[error("sampling failed: could not find {wanted} regular points")]
    SamplingExhausted { wanted: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Bracket matrix of the full constraint set: one primary constraint per
/// coordinate outside the canonical pairs, then the adjoined constraints.
#[derive(Debug, Clone)]
pub struct BracketMatrix {
    pub matrix: SymMatrix,
    /// Row labels: `phi(x)` for primaries, the constraint text otherwise.
    pub labels: Vec<String>,
    /// Canonical `(q, p)` names used for the bracket.
    pub pairs: Vec<(String, String)>,
}

/// `{F, G}` over the canonical pairs.
pub fn poisson_bracket(f: &Expr, g: &Expr, pairs: &[(String, String)]) -> Expr {
    let mut acc = Expr::zero();
    for (q, p) in pairs {
        let fq = f.diff(q);
        let gp = g.diff(p);
        if !fq.is_zero() && !gp.is_zero() {
            acc = &acc + &(&fq * &gp);
        }
        let fp = f.diff(p);
        let gq = g.diff(q);
        if !fp.is_zero() && !gq.is_zero() {
            acc = &acc - &(&fp * &gq);
        }
    }
    acc
}

fn pair_names(state: &SymplecticState) -> Vec<(String, String)> {
    state
        .canonical_pairs
        .iter()
        .map(|&(q, p)| (state.names[q].clone(), state.names[p].clone()))
        .collect()
}

pub fn constraint_bracket_matrix(report: &ReductionReport) -> Result<BracketMatrix, TheoremError> {
    let s0 = report.initial_state();
    if s0.canonical_pairs.is_empty() {
        return Err(TheoremError::NotApplicable);
    }
    let pairs = pair_names(s0);
    let paired: Vec<usize> = s0
        .canonical_pairs
        .iter()
        .flat_map(|&(q, p)| [q, p])
        .collect();
    let primaries: Vec<usize> = (0..s0.dimension()).filter(|i| !paired.contains(i)).collect();
    let omegas: Vec<&Expr> = report.constraints.iter().map(|c| &c.expr).collect();
    let np = primaries.len();
    let n = np + omegas.len();
    let mut m = SymMatrix::zeros(n, n);
    let entry = |r: usize, c: usize| -> Expr {
        match (r < np, c < np) {
            (true, true) => {
                let (x, y) = (primaries[r], primaries[c]);
                &s0.matrix[(x, y)] + &poisson_bracket(&s0.one_form[x], &s0.one_form[y], &pairs)
            }
            (true, false) => {
                let x = primaries[r];
                let om = omegas[c - np];
                -&(&om.diff(&s0.names[x]) + &poisson_bracket(&s0.one_form[x], om, &pairs))
            }
            (false, true) => unreachable!("filled by antisymmetry"),
            (false, false) => poisson_bracket(omegas[r - np], omegas[c - np], &pairs),
        }
    };
    for r in 0..n {
        for c in r + 1..n {
            let e = entry(r, c);
            m[(c, r)] = -&e;
            m[(r, c)] = e;
        }
    }
    let labels = primaries
        .iter()
        .map(|&i| format!("phi({})", s0.names[i]))
        .chain(omegas.iter().map(|e| e.to_string()))
        .collect();
    Ok(BracketMatrix {
        matrix: m.into_antisymmetric()?,
        labels,
        pairs,
    })
}

/// A point where the two determinants disagree on vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    #[serde(rename = "Point")]
    pub point: Vec<(String, String)>,
    #[serde(rename = "Extended")]
    pub extended: String,
    #[serde(rename = "Other")]
    pub other: String,
}

/// Outcome of a co-vanishing comparison between two determinants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    #[serde(rename = "Route")]
    pub route: String,
    #[serde(rename = "Pass")]
    pub pass: bool,
    #[serde(rename = "Left")]
    pub left: String,
    #[serde(rename = "Right")]
    pub right: String,
    #[serde(rename = "LeftVanishes")]
    pub left_vanishes: bool,
    #[serde(rename = "RightVanishes")]
    pub right_vanishes: bool,
    #[serde(rename = "Points")]
    pub points: usize,
    #[serde(rename = "Disagreements")]
    pub disagreements: Vec<Disagreement>,
}

/// Verdict record for the co-vanishing checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Verdict {
    #[serde(rename = "Pass")]
    pub pass: bool,
    #[serde(rename = "Bracket")]
    pub bracket: Option<Comparison>,
    #[serde(rename = "Schur")]
    pub schur: Option<Comparison>,
}

fn describe(b: &Bindings) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = b.vars.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    out.extend(
        b.angles
            .iter()
            .map(|(k, (c, s))| (format!("angle({k})"), format!("cos={c}, sin={s}"))),
    );
    out.sort();
    out
}

/// Compares the vanishing of `left` and `right` at `trials` shared exact
/// points and through the symbolic zero test.
pub fn co_vanishing(
    route: &str,
    left: &Expr,
    right: &Expr,
    trials: usize,
    zt: &ZeroTester,
) -> Result<Comparison, TheoremError> {
    let (vars, angles) = sample_keys([left, right]);
    let mut rng = zt.rng(left.stable_hash() ^ right.stable_hash().rotate_left(17));
    let lz = zt.classify_widened(left) == ZeroClass::Zero;
    let rz = zt.classify_widened(right) == ZeroClass::Zero;
    let mut points = 0;
    let mut attempts = 0;
    let mut disagreements = Vec::new();
    while points < trials {
        attempts += 1;
        if attempts > trials * 8 + 32 {
            return Err(TheoremError::SamplingExhausted { wanted: trials });
        }
        let b = zt.random_point(&mut rng, &vars, &angles);
        let (Ok(l), Ok(r)) = (left.evaluate_exact(&b), right.evaluate_exact(&b)) else {
            continue;
        };
        points += 1;
        if l.is_zero() != r.is_zero() {
            disagreements.push(Disagreement {
                point: describe(&b),
                extended: l.to_string(),
                other: r.to_string(),
            });
        }
    }
    Ok(Comparison {
        route: route.to_string(),
        pass: disagreements.is_empty() && lz == rz,
        left: left.to_string(),
        right: right.to_string(),
        left_vanishes: lz,
        right_vanishes: rz,
        points,
        disagreements,
    })
}

fn extended_determinant(report: &ReductionReport, zt: &ZeroTester) -> Result<Expr, TheoremError> {
    Ok(determinant_with(&report.extended_matrix, zt)?)
}

/// Determinant of the Schur complement of the canonical sector of the
/// extended matrix.
pub fn schur_determinant(report: &ReductionReport, zt: &ZeroTester) -> Result<Expr, TheoremError> {
    let s0 = report.initial_state();
    let sector: Vec<usize> = if s0.canonical_pairs.is_empty() {
        echelon_with(&s0.matrix, s0.dimension(), zt)?.pivots
    } else {
        s0.canonical_pairs.iter().flat_map(|&(q, p)| [q, p]).collect()
    };
    let n = report.extended_matrix.rows();
    let mut perm = sector.clone();
    perm.extend((0..n).filter(|i| !sector.contains(i)));
    let m = report.extended_matrix.permute(&perm);
    let s = schur_complement_with(&m, sector.len(), zt).map_err(|e| match e {
        LinalgError::SingularBlock => TheoremError::NoCanonicalSector,
        other => other.into(),
    })?;
    Ok(determinant_with(&s, zt)?)
}

/// Schur route: complement determinant against the bracket determinant
/// (or the extended determinant when no pairing exists).
pub fn schur_route_check(report: &ReductionReport, trials: usize, zt: &ZeroTester) -> Result<Comparison, TheoremError> {
    let ds = schur_determinant(report, zt)?;
    let other = match constraint_bracket_matrix(report) {
        Ok(c) => determinant_with(&c.matrix, zt)?,
        Err(TheoremError::NotApplicable) => extended_determinant(report, zt)?,
        Err(e) => return Err(e),
    };
    co_vanishing("schur", &ds, &other, trials, zt)
}

pub fn verify_theorem1(report: &ReductionReport, trials: usize, zt: &ZeroTester) -> Result<Theorem1Verdict, TheoremError> {
    let trials = trials.max(1);
    let d1 = extended_determinant(report, zt)?;
    let bracket = match constraint_bracket_matrix(report) {
        Ok(c) => {
            let d2 = determinant_with(&c.matrix, zt)?;
            Some(co_vanishing("bracket", &d1, &d2, trials, zt)?)
        }
        Err(TheoremError::NotApplicable) => None,
        Err(e) => return Err(e),
    };
    let schur = match schur_route_check(report, trials, zt) {
        Ok(c) => Some(c),
        Err(TheoremError::NoCanonicalSector) if bracket.is_some() => None,
        Err(e) => return Err(e),
    };
    let pass = bracket.as_ref().is_none_or(|c| c.pass) && schur.as_ref().is_none_or(|c| c.pass);
    Ok(Theorem1Verdict { pass, bracket, schur })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::fj::{reduce, ReduceOptions};
    use crate::io::load_str;

    fn pairs() -> Vec<(String, String)> {
        vec![("x".into(), "px".into()), ("y".into(), "py".into())]
    }

    #[test]
    fn canonical_brackets() {
        let x = parse("x").unwrap();
        let px = parse("px").unwrap();
        assert!(poisson_bracket(&x, &px, &pairs()).is_one());
        let f = parse("x*y").unwrap();
        let g = parse("px^2").unwrap();
        assert_eq!(poisson_bracket(&f, &g, &pairs()), parse("2*px*y").unwrap());
        assert_eq!(poisson_bracket(&g, &f, &pairs()), parse("-2*px*y").unwrap());
    }

    #[test]
    fn regular_and_singular_cases_pass() {
        let zt = ZeroTester::default();
        for src in [
            "[system]\n[variables]\nx, y\n[kinetic]\n1/2*dx^2\n[potential]\n1/2*x^2 + y^2\n",
            "[system]\n[variables]\nx, y\n[kinetic]\n1/2*dx^2\n[potential]\n1/2*x^2\n",
        ] {
            let r = reduce(&load_str(src).unwrap(), &ReduceOptions::default()).unwrap();
            let v = verify_theorem1(&r, 20, &zt).unwrap();
            assert!(v.pass, "{v:?}");
            assert!(v.bracket.unwrap().points >= 20);
        }
    }

    #[test]
    fn co_vanishing_detects_disagreement() {
        let zt = ZeroTester::default();
        let c = co_vanishing("bracket", &parse("x").unwrap(), &Expr::zero(), 20, &zt).unwrap();
        assert!(!c.pass);
        assert!(!c.disagreements.is_empty());
    }
}
