use crate::expr::{Expr, Role, VarTable};
use crate::linalg::SymMatrix;

/// The reduction state: coordinates, one-form, potential and two-form.
#[derive(Debug, Clone)]
pub struct SymplecticState {
    /// Coordinates ξ and parameters, with roles.
    pub vars: VarTable,
    /// ξ in matrix order.
    pub names: Vec<String>,
    pub one_form: Vec<Expr>,
    pub potential: Expr,
    pub matrix: SymMatrix,
    /// Number of bordering events so far.
    pub iteration: usize,
    /// Canonical `(q, p)` index pairs among the lifted coordinates.
    pub canonical_pairs: Vec<(usize, usize)>,
    /// Dimension before any bordering.
    pub base_dimension: usize,
}

impl SymplecticState {
    pub fn new(
        vars: VarTable,
        names: Vec<String>,
        one_form: Vec<Expr>,
        potential: Expr,
        canonical_pairs: Vec<(usize, usize)>,
    ) -> SymplecticState {
        let matrix = presymplectic_form(&names, &one_form);
        let base_dimension = names.len();
        SymplecticState {
            vars,
            names,
            one_form,
            potential,
            matrix,
            iteration: 0,
            canonical_pairs,
            base_dimension,
        }
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parameters(&self) -> Vec<String> {
        self.vars.names_with(Role::Parameter)
    }

    /// `∂_i V` for every coordinate.
    pub fn potential_gradient(&self) -> Vec<Expr> {
        self.names.iter().map(|n| self.potential.diff(n)).collect()
    }

    /// Recomputes `f` from the one-form.
    pub fn recompute(&self) -> SymMatrix {
        presymplectic_form(&self.names, &self.one_form)
    }
}

/// `f_ij = ∂_i a_j - ∂_j a_i`.
pub fn presymplectic_form(names: &[String], one_form: &[Expr]) -> SymMatrix {
    let n = names.len();
    let mut m = SymMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let e = &one_form[j].diff(&names[i]) - &one_form[i].diff(&names[j]);
            m[(j, i)] = -&e;
            m[(i, j)] = e;
        }
    }
    m.into_antisymmetric().expect("antisymmetric by construction")
}
