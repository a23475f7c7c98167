//! Interned polynomial indeterminates: plain variables and the opaque
//! `sin(u)` / `cos(u)` pairs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use super::Expr;

#[derive(Debug)]
pub(crate) enum AtomKind {
    Var,
    Cos(Expr),
    Sin(Expr),
}

impl AtomKind {
    fn rank(&self) -> u8 {
        match self {
            AtomKind::Var => 0,
            AtomKind::Cos(_) => 1,
            AtomKind::Sin(_) => 2,
        }
    }
}

#[derive(Debug)]
pub(crate) struct AtomData {
    kind: AtomKind,
    /// Variable name, or the canonical print of the trig argument.
    key: Box<str>,
}

/// A polynomial indeterminate. Atoms are interned, so two atoms with the same
/// kind and key share one allocation.
#[derive(Clone)]
pub struct Atom(Arc<AtomData>);

type AtomTable = HashMap<(u8, Box<str>), Atom>;

static ATOMS: LazyLock<Mutex<AtomTable>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn intern(kind: AtomKind, key: String) -> Atom {
    let mut table = ATOMS.lock().expect("atom table poisoned");
    let slot = (kind.rank(), key.into_boxed_str());
    if let Some(found) = table.get(&slot) {
        return found.clone();
    }
    let atom = Atom(Arc::new(AtomData {
        kind,
        key: slot.1.clone(),
    }));
    table.insert(slot, atom.clone());
    atom
}

impl Atom {
    pub fn var(name: &str) -> Atom {
        intern(AtomKind::Var, name.to_string())
    }

    pub fn sin(arg: &Expr) -> Atom {
        intern(AtomKind::Sin(arg.clone()), arg.to_string())
    }

    pub fn cos(arg: &Expr) -> Atom {
        intern(AtomKind::Cos(arg.clone()), arg.to_string())
    }

    /// Variable name for plain variables, the argument's canonical text for trig atoms.
    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.kind, AtomKind::Var)
    }

    pub fn is_sin(&self) -> bool {
        matches!(self.0.kind, AtomKind::Sin(_))
    }

    pub fn is_trig(&self) -> bool {
        !self.is_var()
    }

    /// The trig argument, if any.
    pub fn argument(&self) -> Option<&Expr> {
        match &self.0.kind {
            AtomKind::Var => None,
            AtomKind::Cos(a) | AtomKind::Sin(a) => Some(a),
        }
    }

    /// `cos(u)` for a `sin(u)` atom.
    pub(crate) fn cos_partner(&self) -> Option<Atom> {
        match &self.0.kind {
            AtomKind::Sin(a) => Some(Atom::cos(a)),
            _ => None,
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Atom {}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .kind
            .rank()
            .cmp(&other.0.kind.rank())
            .then_with(|| self.0.key.cmp(&other.0.key))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.rank().hash(state);
        self.0.key.hash(state);
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            AtomKind::Var => f.write_str(&self.0.key),
            AtomKind::Cos(_) => write!(f, "cos({})", self.0.key),
            AtomKind::Sin(_) => write!(f, "sin({})", self.0.key),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
