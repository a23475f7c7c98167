use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::BigRational;
use thiserror::Error;

use crate::expr::{EvalError, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Mechanical,
    FirstOrder,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Mechanical => "mechanical",
            Mode::FirstOrder => "first-order",
        }
    }
}

/// The velocity-dependent part of a Lagrangian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dynamics {
    /// Kinetic term in configuration variables, parameters and velocities `d<var>`.
    Kinetic(Expr),
    /// One-form components `a_x` of a first-order Lagrangian, by variable name.
    OneForm(Vec<(String, Expr)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("symbol `{0}` declared more than once")]
    Duplicate(String),
    #[error("undeclared symbol `{name}` in {context}")]
    Undeclared { name: String, context: String },
    #[error("velocity `{0}` appears outside the kinetic term")]
    VelocityOutsideKinetic(String),
    #[error("one-form component given for unknown variable `{0}`")]
    UnknownComponent(String),
    #[error("one-form component for `{0}` given twice")]
    DuplicateComponent(String),
    #[error("kinetic term is not quadratic in the velocities (Hessian entry `{0}` depends on a velocity)")]
    NotQuadratic(String),
    #[error("no variables declared")]
    Empty,
    #[error("parameter specialization failed: {0}")]
    Specialize(#[from] EvalError),
}

/// A declarative description of a Lagrangian system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDefinition {
    pub name: String,
    pub variables: Vec<String>,
    pub multipliers: Vec<String>,
    pub parameters: Vec<String>,
    pub dynamics: Dynamics,
    pub potential: Expr,
    pub notes: Option<String>,
}

pub fn velocity_name(var: &str) -> String {
    format!("d{var}")
}

impl SystemDefinition {
    pub fn mode(&self) -> Mode {
        match self.dynamics {
            Dynamics::Kinetic(_) => Mode::Mechanical,
            Dynamics::OneForm(_) => Mode::FirstOrder,
        }
    }

    /// Configuration variables then multipliers: the coordinates before any lift.
    pub fn coordinates(&self) -> Vec<String> {
        self.variables.iter().chain(&self.multipliers).cloned().collect()
    }

    pub fn velocities(&self) -> Vec<String> {
        self.variables.iter().map(|v| velocity_name(v)).collect()
    }

    /// Checks unique declarations and that every expression only uses
    /// symbols it may use.
    pub fn validate(&self) -> Result<(), SystemError> {
        if self.variables.is_empty() && self.multipliers.is_empty() {
            return Err(SystemError::Empty);
        }
        let mut seen = HashSet::new();
        for n in self.variables.iter().chain(&self.multipliers).chain(&self.parameters) {
            if !seen.insert(n.as_str()) {
                return Err(SystemError::Duplicate(n.clone()));
            }
        }
        let velocities: BTreeSet<String> = match self.mode() {
            Mode::Mechanical => self.velocities().into_iter().collect(),
            Mode::FirstOrder => BTreeSet::new(),
        };
        for v in &velocities {
            if seen.contains(v.as_str()) {
                return Err(SystemError::Duplicate(v.clone()));
            }
        }
        let check = |e: &Expr, allow_velocity: bool, context: &str| -> Result<(), SystemError> {
            for name in e.free_vars() {
                if seen.contains(name.as_str()) {
                    continue;
                }
                if velocities.contains(&name) {
                    if allow_velocity {
                        continue;
                    }
                    return Err(SystemError::VelocityOutsideKinetic(name));
                }
                return Err(SystemError::Undeclared {
                    name,
                    context: context.to_string(),
                });
            }
            Ok(())
        };
        check(&self.potential, false, "potential")?;
        match &self.dynamics {
            Dynamics::Kinetic(t) => {
                check(t, true, "kinetic")?;
                for vi in &velocities {
                    let ti = t.diff(vi);
                    for vj in &velocities {
                        let w = ti.diff(vj);
                        if velocities.iter().any(|v| w.depends_on(v)) {
                            return Err(SystemError::NotQuadratic(w.to_string()));
                        }
                    }
                }
            }
            Dynamics::OneForm(components) => {
                let coords: HashSet<String> = self.coordinates().into_iter().collect();
                let mut given = HashSet::new();
                for (name, e) in components {
                    if !coords.contains(name) {
                        return Err(SystemError::UnknownComponent(name.clone()));
                    }
                    if !given.insert(name.as_str()) {
                        return Err(SystemError::DuplicateComponent(name.clone()));
                    }
                    check(e, false, &format!("one-form component for {name}"))?;
                }
            }
        }
        Ok(())
    }

    /// One-form component for `name` (zero when absent); first-order mode only.
    pub fn one_form_component(&self, name: &str) -> Expr {
        match &self.dynamics {
            Dynamics::OneForm(c) => c
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(Expr::zero),
            Dynamics::Kinetic(_) => Expr::zero(),
        }
    }

    /// Substitutes rational values for some parameters and drops them from
    /// the parameter list.
    pub fn specialize(&self, values: &HashMap<String, BigRational>) -> Result<SystemDefinition, SystemError> {
        let map: HashMap<String, Expr> = values
            .iter()
            .map(|(k, v)| (k.clone(), Expr::rational(v.clone())))
            .collect();
        let dynamics = match &self.dynamics {
            Dynamics::Kinetic(t) => Dynamics::Kinetic(t.subs(&map)?),
            Dynamics::OneForm(c) => Dynamics::OneForm(
                c.iter()
                    .map(|(n, e)| Ok((n.clone(), e.subs(&map)?)))
                    .collect::<Result<_, EvalError>>()?,
            ),
        };
        Ok(SystemDefinition {
            name: self.name.clone(),
            variables: self.variables.clone(),
            multipliers: self.multipliers.clone(),
            parameters: self
                .parameters
                .iter()
                .filter(|p| !values.contains_key(*p))
                .cloned()
                .collect(),
            dynamics,
            potential: self.potential.subs(&map)?,
            notes: self.notes.clone(),
        })
    }
}
