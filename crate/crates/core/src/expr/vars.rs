//! Declared symbols and their roles.

use std::collections::HashMap;

use thiserror::Error;

use super::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Configuration,
    Velocity,
    Momentum,
    Multiplier,
    Parameter,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarTableError {
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("symbol `{0}` is not declared")]
    Undeclared(String),
    #[error("cannot differentiate with respect to parameter `{0}`")]
    Parameter(String),
}

/// Symbols in declaration order with their roles.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    order: Vec<String>,
    roles: HashMap<String, Role>,
}

impl VarTable {
    pub fn new() -> VarTable {
        VarTable::default()
    }

    pub fn declare(&mut self, name: &str, role: Role) -> Result<(), VarTableError> {
        if self.roles.contains_key(name) {
            return Err(VarTableError::Duplicate(name.to_string()));
        }
        self.order.push(name.to_string());
        self.roles.insert(name.to_string(), role);
        Ok(())
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.roles.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.roles.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Role)> {
        self.order.iter().map(|n| (n.as_str(), self.roles[n]))
    }

    pub fn names_with(&self, role: Role) -> Vec<String> {
        self.iter()
            .filter(|(_, r)| *r == role)
            .map(|(n, _)| n.to_string())
            .collect()
    }

    /// First name `prefix1`, `prefix2`, ... not yet declared.
    pub fn fresh(&self, prefix: &str) -> String {
        (1..)
            .map(|i| format!("{prefix}{i}"))
            .find(|n| !self.contains(n))
            .expect("unbounded counter")
    }

    /// `∂e/∂name`, refusing undeclared symbols and parameters.
    pub fn differentiate(&self, e: &Expr, name: &str) -> Result<Expr, VarTableError> {
        match self.role(name) {
            None => Err(VarTableError::Undeclared(name.to_string())),
            Some(Role::Parameter) => Err(VarTableError::Parameter(name.to_string())),
            Some(_) => Ok(e.diff(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roles_and_fresh_names() {
        let mut t = VarTable::new();
        t.declare("q", Role::Configuration).unwrap();
        t.declare("lam1", Role::Multiplier).unwrap();
        t.declare("k", Role::Parameter).unwrap();
        assert_eq!(t.declare("q", Role::Momentum), Err(VarTableError::Duplicate("q".into())));
        assert_eq!(t.fresh("lam"), "lam2");
        let e = Expr::var("q");
        assert_eq!(t.differentiate(&e, "q").unwrap(), Expr::one());
        assert!(matches!(t.differentiate(&e, "k"), Err(VarTableError::Parameter(_))));
        assert!(matches!(t.differentiate(&e, "z"), Err(VarTableError::Undeclared(_))));
    }
}
