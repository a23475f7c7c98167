//! The sectioned system-file format.
//!
//! ```text
//! # comment
//! [system]
//! name = Harmonic oscillator
//! mode = mechanical          # or first-order
//! notes = free text
//!
//! [variables]
//! q
//!
//! [multipliers]
//! [parameters]
//!
//! [kinetic]                  # mechanical mode; velocities are d<var>
//! 1/2*dq^2
//!
//! [oneform]                  # first-order mode; one `var = expr` per line
//!
//! [potential]
//! 1/2*q^2
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::expr::{parse_with, Expr, ParseError};
use crate::fj::{velocity_name, Dynamics, Mode, SystemDefinition, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: section [{name}] appears twice")]
    DuplicateSection { line: usize, name: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("line {line}: unknown key `{key}` in [system]")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid identifier `{name}`")]
    InvalidIdentifier { line: usize, name: String },
    #[error("line {line}: unknown mode `{mode}` (expected mechanical or first-order)")]
    UnknownMode { line: usize, mode: String },
    #[error("mode {mode} conflicts with section [{section}]")]
    ModeConflict { mode: String, section: String },
    #[error("in [{section}]: {error}")]
    Expression { section: String, error: ParseError },
    #[error(transparent)]
    Definition(#[from] SystemError),
}

struct Section {
    name: String,
    header_line: usize,
    /// Raw body lines with comments blanked out.
    lines: Vec<String>,
}

impl Section {
    fn text(&self) -> String {
        self.lines.join("\n")
    }

    fn content_lines(&self) -> impl Iterator<Item = (usize, &str)> {
        self.lines
            .iter()
            .enumerate()
            .map(move |(k, l)| (self.header_line + 1 + k, l.trim()))
            .filter(|(_, l)| !l.is_empty())
    }
}

const SECTIONS: [&str; 7] = [
    "system",
    "variables",
    "multipliers",
    "parameters",
    "kinetic",
    "oneform",
    "potential",
];

fn strip_comment(line: &str) -> String {
    match line.find('#') {
        Some(i) => format!("{}{}", &line[..i], " ".repeat(line[i..].chars().count())),
        None => line.to_string(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_sections(src: &str) -> Result<Vec<Section>, LoadError> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        let t = line.trim();
        if t.starts_with('[') {
            if !t.ends_with(']') {
                return Err(LoadError::Syntax {
                    line: line_no,
                    message: "unterminated section header".into(),
                });
            }
            let name = t[1..t.len() - 1].trim().to_ascii_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(LoadError::UnknownSection { line: line_no, name });
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(LoadError::DuplicateSection { line: line_no, name });
            }
            sections.push(Section {
                name,
                header_line: line_no,
                lines: Vec::new(),
            });
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.lines.push(line),
            None if t.is_empty() => {}
            None => {
                return Err(LoadError::Syntax {
                    line: line_no,
                    message: "content before the first section header".into(),
                })
            }
        }
    }
    Ok(sections)
}

fn names_in(section: Option<&Section>) -> Result<Vec<(String, usize)>, LoadError> {
    let mut out = Vec::new();
    let Some(s) = section else {
        return Ok(out);
    };
    for (line, text) in s.content_lines() {
        for name in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|n| !n.is_empty()) {
            if !is_identifier(name) {
                return Err(LoadError::InvalidIdentifier {
                    line,
                    name: name.to_string(),
                });
            }
            out.push((name.to_string(), line));
        }
    }
    Ok(out)
}

fn parse_expr(section: &Section, text: &str, line_offset: usize, declared: &dyn Fn(&str) -> bool) -> Result<Expr, LoadError> {
    parse_with(text, declared).map_err(|error| LoadError::Expression {
        section: section.name.clone(),
        error: error.with_line_offset(line_offset),
    })
}

/// Parses a system file from text.
pub fn load_str(src: &str) -> Result<SystemDefinition, LoadError> {
    let sections = split_sections(src)?;
    let get = |n: &str| sections.iter().find(|s| s.name == n);

    let system = get("system").ok_or_else(|| LoadError::MissingSection("system".into()))?;
    let mut name = None;
    let mut mode = None;
    let mut notes = None;
    for (line, text) in system.content_lines() {
        let (key, value) = text.split_once('=').ok_or_else(|| LoadError::Syntax {
            line,
            message: "expected `key = value`".into(),
        })?;
        let value = value.trim().to_string();
        match key.trim() {
            "name" => name = Some(value),
            "notes" => notes = Some(value),
            "mode" => {
                mode = Some(match value.as_str() {
                    "mechanical" => Mode::Mechanical,
                    "first-order" | "first_order" | "firstorder" => Mode::FirstOrder,
                    _ => return Err(LoadError::UnknownMode { line, mode: value }),
                })
            }
            other => {
                return Err(LoadError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }

    let variables = names_in(get("variables"))?;
    if get("variables").is_none() {
        return Err(LoadError::MissingSection("variables".into()));
    }
    let multipliers = names_in(get("multipliers"))?;
    let parameters = names_in(get("parameters"))?;
    let mut seen = HashSet::new();
    for (n, _) in variables.iter().chain(&multipliers).chain(&parameters) {
        if !seen.insert(n.clone()) {
            return Err(SystemError::Duplicate(n.clone()).into());
        }
    }
    let vars: Vec<String> = variables.into_iter().map(|(n, _)| n).collect();
    let mults: Vec<String> = multipliers.into_iter().map(|(n, _)| n).collect();
    let params: Vec<String> = parameters.into_iter().map(|(n, _)| n).collect();
    let velocities: HashSet<String> = vars.iter().map(|v| velocity_name(v)).collect();

    let mode = match (mode, get("kinetic"), get("oneform")) {
        (_, Some(_), Some(_)) => {
            return Err(LoadError::ModeConflict {
                mode: "either".into(),
                section: "kinetic] and [oneform".into(),
            })
        }
        (Some(Mode::FirstOrder), Some(_), None) => {
            return Err(LoadError::ModeConflict {
                mode: "first-order".into(),
                section: "kinetic".into(),
            })
        }
        (Some(Mode::Mechanical), None, Some(_)) => {
            return Err(LoadError::ModeConflict {
                mode: "mechanical".into(),
                section: "oneform".into(),
            })
        }
        (Some(m), _, _) => m,
        (None, Some(_), None) => Mode::Mechanical,
        (None, None, Some(_)) => Mode::FirstOrder,
        (None, None, None) => return Err(LoadError::MissingSection("kinetic".into())),
    };

    let in_vars = |n: &str| vars.iter().any(|v| v == n);
    let in_mults = |n: &str| mults.iter().any(|v| v == n);
    let in_params = |n: &str| params.iter().any(|v| v == n);

    let dynamics = match mode {
        Mode::Mechanical => {
            let s = get("kinetic").ok_or_else(|| LoadError::MissingSection("kinetic".into()))?;
            let declared = |n: &str| in_vars(n) || in_params(n) || velocities.contains(n);
            Dynamics::Kinetic(parse_expr(s, &s.text(), s.header_line, &declared)?)
        }
        Mode::FirstOrder => {
            let s = get("oneform").ok_or_else(|| LoadError::MissingSection("oneform".into()))?;
            let declared = |n: &str| in_vars(n) || in_mults(n) || in_params(n);
            let mut comps = Vec::new();
            for (line, text) in s.content_lines() {
                let (lhs, rhs) = text.split_once('=').ok_or_else(|| LoadError::Syntax {
                    line,
                    message: "expected `variable = expression`".into(),
                })?;
                let lhs = lhs.trim();
                if !is_identifier(lhs) {
                    return Err(LoadError::InvalidIdentifier {
                        line,
                        name: lhs.to_string(),
                    });
                }
                let e = parse_expr(s, rhs, line - 1, &declared)?;
                comps.push((lhs.to_string(), e));
            }
            Dynamics::OneForm(comps)
        }
    };

    let s = get("potential").ok_or_else(|| LoadError::MissingSection("potential".into()))?;
    let declared = |n: &str| in_vars(n) || in_mults(n) || in_params(n) || velocities.contains(n);
    let potential = if s.content_lines().next().is_none() {
        Expr::zero()
    } else {
        parse_expr(s, &s.text(), s.header_line, &declared)?
    };

    let def = SystemDefinition {
        name: name.unwrap_or_default(),
        variables: vars.clone(),
        multipliers: mults.clone(),
        parameters: params.clone(),
        dynamics,
        potential,
        notes,
    };
    def.validate()?;
    Ok(def)
}

pub fn load(path: &Path) -> Result<SystemDefinition, LoadError> {
    let src = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut def = load_str(&src)?;
    if def.name.is_empty() {
        def.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(def)
}

/// Canonical text of a definition; `load_str(&print(d))` reproduces `d`.
pub fn print(def: &SystemDefinition) -> String {
    let mut out = String::new();
    out.push_str("[system]\n");
    let _ = writeln!(out, "name = {}", def.name.replace('\n', " "));
    let _ = writeln!(out, "mode = {}", def.mode().as_str());
    if let Some(n) = &def.notes {
        let _ = writeln!(out, "notes = {}", n.replace(['\n', '#'], " "));
    }
    let _ = writeln!(out, "\n[variables]\n{}", def.variables.join(", "));
    if !def.multipliers.is_empty() {
        let _ = writeln!(out, "\n[multipliers]\n{}", def.multipliers.join(", "));
    }
    if !def.parameters.is_empty() {
        let _ = writeln!(out, "\n[parameters]\n{}", def.parameters.join(", "));
    }
    match &def.dynamics {
        Dynamics::Kinetic(t) => {
            let _ = writeln!(out, "\n[kinetic]\n{t}");
        }
        Dynamics::OneForm(c) => {
            out.push_str("\n[oneform]\n");
            for (n, e) in c {
                let _ = writeln!(out, "{n} = {e}");
            }
        }
    }
    let _ = writeln!(out, "\n[potential]\n{}", def.potential);
    out
}
