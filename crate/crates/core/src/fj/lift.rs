//! First-order lift of mechanical Lagrangians.

use std::collections::HashMap;

use crate::expr::{Expr, Role, VarTable, ZeroTester};
use crate::linalg::{echelon_with, inverse_with, SymMatrix};

use super::state::SymplecticState;
use super::system::{Dynamics, SystemDefinition};
use super::ReduceError;

fn momentum_name(var: &str, table: &VarTable, velocities: &[String]) -> String {
    let base = format!("p{var}");
    if !table.contains(&base) && !velocities.contains(&base) {
        return base;
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !table.contains(n) && !velocities.contains(n))
        .expect("unbounded counter")
}

/// Builds the initial state. Mechanical systems get momenta on the regular
/// velocity sector (the pivot columns of the velocity Hessian); the other
/// velocities keep one-form components expressed through those momenta.
pub fn first_order_lift(def: &SystemDefinition, zt: &ZeroTester) -> Result<SymplecticState, ReduceError> {
    def.validate()?;
    match &def.dynamics {
        Dynamics::OneForm(_) => Ok(passthrough(def)),
        Dynamics::Kinetic(t) => mechanical(def, t, zt),
    }
}

fn passthrough(def: &SystemDefinition) -> SymplecticState {
    let mut vars = VarTable::new();
    for v in &def.variables {
        vars.declare(v, Role::Configuration).expect("validated");
    }
    for m in &def.multipliers {
        vars.declare(m, Role::Multiplier).expect("validated");
    }
    for p in &def.parameters {
        vars.declare(p, Role::Parameter).expect("validated");
    }
    let names = def.coordinates();
    let one_form: Vec<Expr> = names.iter().map(|n| def.one_form_component(n)).collect();
    let pairs = pattern_pairs(&names, &one_form);
    SymplecticState::new(vars, names, one_form, def.potential.clone(), pairs)
}

/// Pairs `(x, y)` with `a_x = y` and `a_y = 0`, chosen greedily in order.
fn pattern_pairs(names: &[String], one_form: &[Expr]) -> Vec<(usize, usize)> {
    let mut used = vec![false; names.len()];
    let mut pairs = Vec::new();
    for x in 0..names.len() {
        if used[x] {
            continue;
        }
        let a = &one_form[x];
        let Some(y) = names.iter().position(|n| *a == Expr::var(n)) else {
            continue;
        };
        if y == x || used[y] || !one_form[y].is_zero() {
            continue;
        }
        used[x] = true;
        used[y] = true;
        pairs.push((x, y));
    }
    pairs
}

fn mechanical(def: &SystemDefinition, t: &Expr, zt: &ZeroTester) -> Result<SymplecticState, ReduceError> {
    let q = &def.variables;
    let n = q.len();
    let vel = def.velocities();
    let grad: Vec<Expr> = vel.iter().map(|v| t.diff(v)).collect();
    let w = SymMatrix::from_fn(n, n, |i, j| grad[i].diff(&vel[j]));
    for e in w.entries() {
        if vel.iter().any(|v| e.depends_on(v)) {
            return Err(ReduceError::NotQuadratic(e.to_string()));
        }
    }
    let at_rest: HashMap<String, Expr> = vel.iter().map(|v| (v.clone(), Expr::zero())).collect();
    let b: Vec<Expr> = grad
        .iter()
        .map(|g| g.subs(&at_rest))
        .collect::<Result<_, _>>()
        .map_err(|e| ReduceError::Internal(e.to_string()))?;
    let t0 = t.subs(&at_rest).map_err(|e| ReduceError::Internal(e.to_string()))?;

    let regular: Vec<usize> = echelon_with(&w, n, zt)?.pivots;
    let dependent: Vec<usize> = (0..n).filter(|i| !regular.contains(i)).collect();

    let mut vars = VarTable::new();
    for v in q {
        vars.declare(v, Role::Configuration).expect("validated");
    }
    for p in &def.parameters {
        vars.declare(p, Role::Parameter).expect("validated");
    }
    let mut momenta = Vec::new();
    for &i in &regular {
        let name = momentum_name(&q[i], &vars, &vel);
        vars.declare(&name, Role::Momentum).expect("fresh name");
        momenta.push(name);
    }
    for m in &def.multipliers {
        vars.declare(m, Role::Multiplier)
            .map_err(|_| ReduceError::Definition(super::SystemError::Duplicate(m.clone())))?;
    }

    let w_ii = w.select(&regular, &regular);
    let w_ii_inv = inverse_with(&w_ii, zt)?;
    // u = p_I - b_I
    let u: Vec<Expr> = regular
        .iter()
        .zip(&momenta)
        .map(|(&i, p)| &Expr::var(p) - &b[i])
        .collect();
    let winv_u = w_ii_inv.mul_vec(&u)?;

    let mut one_form = vec![Expr::zero(); n];
    for (k, &i) in regular.iter().enumerate() {
        one_form[i] = Expr::var(&momenta[k]);
    }
    for &d in &dependent {
        let mut a = b[d].clone();
        for (k, &i) in regular.iter().enumerate() {
            let wdi = &w[(d, i)];
            if !wdi.is_zero() {
                a = &a + &(wdi * &winv_u[k]);
            }
        }
        one_form[d] = a;
    }
    let quad: Expr = u.iter().zip(&winv_u).map(|(a, b)| a * b).sum();
    let potential = &(&(&quad * &Expr::frac(1, 2)) - &t0) + &def.potential;

    let mut names: Vec<String> = q.clone();
    names.extend(momenta.iter().cloned());
    names.extend(def.multipliers.iter().cloned());
    one_form.extend(std::iter::repeat_n(Expr::zero(), momenta.len() + def.multipliers.len()));

    let pairs = regular
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, n + k))
        .collect();
    Ok(SymplecticState::new(vars, names, one_form, potential, pairs))
}
