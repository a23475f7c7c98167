use serde::Serialize;

use crate::expr::{Expr, ZeroClass, ZeroTester};
use crate::linalg::{generic_rank_with, LinalgError, SymMatrix};

use super::state::SymplecticState;

/// A consistency constraint `Ω = v·∇V` adjoined by bordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub expr: Expr,
    /// `∂Ω/∂ξ_j` over the coordinates at creation.
    pub gradient: Vec<Expr>,
    pub origin_iteration: usize,
    /// Kernel vector that generated the constraint.
    pub source: Vec<Expr>,
    /// Name of the multiplier adjoined for it.
    pub multiplier: String,
}

/// What happened to a candidate `v·∇V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Accepted,
    Zero,
    Dependent,
    /// Independent, but left for the next iteration by the sequential policy.
    Deferred,
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub expr: Expr,
    pub source: Vec<Expr>,
    pub verdict: Verdict,
}

fn gradient(e: &Expr, names: &[String]) -> Vec<Expr> {
    names.iter().map(|n| e.diff(n)).collect()
}

/// Candidates `Ω = v·∇V` for each kernel vector, classified against the
/// constraints already adjoined. At most `limit` candidates are accepted.
pub fn consistency_constraints(
    state: &SymplecticState,
    kernel: &[Vec<Expr>],
    existing: &[Constraint],
    limit: usize,
    zt: &ZeroTester,
) -> Result<Vec<Candidate>, LinalgError> {
    let grad_v = state.potential_gradient();
    let mut rows: Vec<Vec<Expr>> = existing
        .iter()
        .map(|c| gradient(&c.expr, &state.names))
        .collect();
    let mut rank = if rows.is_empty() {
        0
    } else {
        generic_rank_with(&SymMatrix::from_rows(rows.clone())?, zt)?.rank
    };
    let mut accepted = 0;
    let mut out = Vec::new();
    for v in kernel {
        let omega: Expr = v
            .iter()
            .zip(&grad_v)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum();
        if zt.classify(&omega) == ZeroClass::Zero {
            out.push(Candidate {
                expr: omega,
                source: v.clone(),
                verdict: Verdict::Zero,
            });
            continue;
        }
        let g = gradient(&omega, &state.names);
        let mut stacked = rows.clone();
        stacked.push(g);
        let r = generic_rank_with(&SymMatrix::from_rows(stacked.clone())?, zt)?.rank;
        let verdict = if r <= rank {
            Verdict::Dependent
        } else if accepted >= limit {
            Verdict::Deferred
        } else {
            rows = stacked;
            rank = r;
            accepted += 1;
            Verdict::Accepted
        };
        out.push(Candidate {
            expr: omega,
            source: v.clone(),
            verdict,
        });
    }
    Ok(out)
}
