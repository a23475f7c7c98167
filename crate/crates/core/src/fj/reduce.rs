use serde::Serialize;

use crate::expr::{Expr, Role, ZeroClass, ZeroTester};
use crate::linalg::{adjugate_with, determinant_with, kernel_with, SymMatrix};

use super::constraints::{consistency_constraints, Candidate, Constraint, Verdict};
use super::lift::first_order_lift;
use super::state::SymplecticState;
use super::system::SystemDefinition;
use super::ReduceError;

pub const NULL_CONSTRAINT_MESSAGE: &str =
    "Null constraint detected: all new constraints are identically zero.";
pub const DEPENDENT_CONSTRAINT_MESSAGE: &str =
    "Dependent constraints detected: new constraints are linearly dependent on existing ones.";

/// How many independent constraints one bordering event adjoins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderingPolicy {
    /// One constraint per event; the rest regenerate from the next kernel.
    #[default]
    Sequential,
    /// Every independent candidate of an iteration at once.
    Simultaneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceOptions {
    pub max_iterations: usize,
    pub zero: ZeroTester,
    pub policy: BorderingPolicy,
    /// Check `f · f⁻¹ = I` on regular termination.
    pub verify_inverse: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            max_iterations: 8,
            zero: ZeroTester::default(),
            policy: BorderingPolicy::default(),
            verify_inverse: true,
        }
    }
}

impl ReduceOptions {
    pub fn with_seed(seed: u64) -> ReduceOptions {
        ReduceOptions {
            zero: ZeroTester::with_seed(seed),
            ..ReduceOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixStatus {
    Regular,
    Singular,
}

impl MatrixStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixStatus::Regular => "Regular",
            MatrixStatus::Singular => "Singular",
        }
    }
}

/// One edge of the reduction loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "Event")]
pub enum TraceEvent {
    Lift {
        #[serde(rename = "Dimension")]
        dimension: usize,
        #[serde(rename = "Momenta")]
        momenta: Vec<String>,
        #[serde(rename = "Passthrough")]
        passthrough: bool,
    },
    DeterminantTest {
        #[serde(rename = "Iteration")]
        iteration: usize,
        #[serde(rename = "Dimension")]
        dimension: usize,
        #[serde(rename = "Vanishes")]
        vanishes: bool,
    },
    Kernel {
        #[serde(rename = "Iteration")]
        iteration: usize,
        #[serde(rename = "Vectors")]
        vectors: Vec<Vec<String>>,
    },
    Candidate {
        #[serde(rename = "Iteration")]
        iteration: usize,
        #[serde(rename = "Constraint")]
        constraint: String,
        #[serde(rename = "Source")]
        source: Vec<String>,
        #[serde(rename = "Verdict")]
        verdict: Verdict,
    },
    Border {
        #[serde(rename = "Iteration")]
        iteration: usize,
        #[serde(rename = "Multipliers")]
        multipliers: Vec<String>,
        #[serde(rename = "Dimension")]
        dimension: usize,
    },
    Inverted {
        #[serde(rename = "Dimension")]
        dimension: usize,
    },
    Halted {
        #[serde(rename = "Message")]
        message: String,
    },
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub name: String,
    pub status: MatrixStatus,
    pub iteration_count: usize,
    pub constraints: Vec<Constraint>,
    pub extended_matrix: SymMatrix,
    pub extended_one_form: Vec<Expr>,
    pub extended_variables: Vec<String>,
    pub inverse_extended_matrix: Option<SymMatrix>,
    pub gauge_generators: Option<Vec<Vec<Expr>>>,
    pub diagnostics: Vec<String>,
    pub trace: Vec<TraceEvent>,
    /// State after the lift and after every bordering event.
    pub iterates: Vec<SymplecticState>,
    pub determinant: Expr,
    pub parameters: Vec<String>,
    /// The system and options this report was produced from.
    pub definition: SystemDefinition,
    pub options: ReduceOptions,
}

impl ReductionReport {
    pub fn final_state(&self) -> &SymplecticState {
        self.iterates.last().expect("at least the lifted state")
    }

    pub fn initial_state(&self) -> &SymplecticState {
        &self.iterates[0]
    }

    pub fn dimension(&self) -> usize {
        self.extended_variables.len()
    }
}

fn strings(v: &[Expr]) -> Vec<String> {
    v.iter().map(Expr::to_string).collect()
}

/// Adjoins one multiplier per constraint with one-form component `Ω`.
pub fn border(
    state: &SymplecticState,
    accepted: &[Candidate],
) -> Result<(SymplecticState, Vec<Constraint>), ReduceError> {
    let mut next = state.clone();
    let n = state.dimension();
    let mut made = Vec::new();
    let mut b = SymMatrix::zeros(n, accepted.len());
    for (k, cand) in accepted.iter().enumerate() {
        let name = next.vars.fresh("lam");
        next.vars
            .declare(&name, Role::Multiplier)
            .expect("fresh name");
        let gradient: Vec<Expr> = state.names.iter().map(|x| cand.expr.diff(x)).collect();
        for (j, g) in gradient.iter().enumerate() {
            b[(j, k)] = g.clone();
        }
        next.names.push(name.clone());
        next.one_form.push(cand.expr.clone());
        made.push(Constraint {
            expr: cand.expr.clone(),
            gradient,
            origin_iteration: state.iteration,
            source: cand.source.clone(),
            multiplier: name,
        });
    }
    next.iteration += 1;
    next.matrix = next.recompute();
    let expected = state.matrix.border(&b)?;
    if expected.to_rows() != next.matrix.to_rows() {
        return Err(ReduceError::Internal(
            "rebuilt two-form differs from the bordered block form".into(),
        ));
    }
    Ok((next, made))
}

/// Runs the lift and the bordering loop to a regular or singular end.
pub fn reduce(def: &SystemDefinition, opts: &ReduceOptions) -> Result<ReductionReport, ReduceError> {
    let zt = &opts.zero;
    let mut state = first_order_lift(def, zt)?;
    let mut trace = vec![TraceEvent::Lift {
        dimension: state.dimension(),
        momenta: state.vars.names_with(Role::Momentum),
        passthrough: def.mode() == super::Mode::FirstOrder,
    }];
    let mut iterates = vec![state.clone()];
    let mut constraints: Vec<Constraint> = Vec::new();
    let limit = match opts.policy {
        BorderingPolicy::Sequential => 1,
        BorderingPolicy::Simultaneous => usize::MAX,
    };
    loop {
        let det = determinant_with(&state.matrix, zt)?;
        let vanishes = zt.classify_widened(&det) == ZeroClass::Zero;
        trace.push(TraceEvent::DeterminantTest {
            iteration: state.iteration,
            dimension: state.dimension(),
            vanishes,
        });
        if !vanishes {
            let (d, adj) = adjugate_with(&state.matrix, zt)?;
            if opts.verify_inverse
                && state.matrix.mul(&adj)?.to_rows() != SymMatrix::identity(adj.rows()).scale(&d).to_rows()
            {
                return Err(ReduceError::Internal("f · f⁻¹ is not the identity".into()));
            }
            let inv = adj.map(|e| e / &d).into_antisymmetric()?;
            trace.push(TraceEvent::Inverted {
                dimension: state.dimension(),
            });
            return Ok(finish(def, opts, state, iterates, constraints, trace, det, Some(inv), None, vec![]));
        }
        let kernel = kernel_with(&state.matrix, zt)?;
        trace.push(TraceEvent::Kernel {
            iteration: state.iteration,
            vectors: kernel.iter().map(|v| strings(v)).collect(),
        });
        let candidates = consistency_constraints(&state, &kernel, &constraints, limit, zt)?;
        for c in &candidates {
            trace.push(TraceEvent::Candidate {
                iteration: state.iteration,
                constraint: c.expr.to_string(),
                source: strings(&c.source),
                verdict: c.verdict.clone(),
            });
        }
        let accepted: Vec<Candidate> = candidates
            .iter()
            .filter(|c| c.verdict == Verdict::Accepted)
            .cloned()
            .collect();
        if accepted.is_empty() {
            let message = if candidates.iter().all(|c| c.verdict == Verdict::Zero) {
                NULL_CONSTRAINT_MESSAGE
            } else {
                DEPENDENT_CONSTRAINT_MESSAGE
            };
            trace.push(TraceEvent::Halted {
                message: message.to_string(),
            });
            return Ok(finish(
                def,
                opts,
                state,
                iterates,
                constraints,
                trace,
                det,
                None,
                Some(kernel),
                vec![message.to_string()],
            ));
        }
        if state.iteration >= opts.max_iterations {
            return Err(ReduceError::IterationCap(opts.max_iterations));
        }
        let (next, made) = border(&state, &accepted)?;
        trace.push(TraceEvent::Border {
            iteration: next.iteration,
            multipliers: made.iter().map(|c| c.multiplier.clone()).collect(),
            dimension: next.dimension(),
        });
        constraints.extend(made);
        state = next;
        iterates.push(state.clone());
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    def: &SystemDefinition,
    opts: &ReduceOptions,
    state: SymplecticState,
    iterates: Vec<SymplecticState>,
    constraints: Vec<Constraint>,
    trace: Vec<TraceEvent>,
    determinant: Expr,
    inverse: Option<SymMatrix>,
    gauge: Option<Vec<Vec<Expr>>>,
    diagnostics: Vec<String>,
) -> ReductionReport {
    let status = if inverse.is_some() {
        MatrixStatus::Regular
    } else {
        MatrixStatus::Singular
    };
    ReductionReport {
        name: def.name.clone(),
        status,
        iteration_count: state.iteration,
        constraints,
        extended_matrix: state.matrix.clone(),
        extended_one_form: state.one_form.clone(),
        extended_variables: state.names.clone(),
        inverse_extended_matrix: inverse,
        gauge_generators: gauge,
        diagnostics,
        trace,
        iterates,
        determinant,
        parameters: def.parameters.clone(),
        definition: def.clone(),
        options: *opts,
    }
}
