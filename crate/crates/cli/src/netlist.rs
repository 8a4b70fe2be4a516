//! Plain-text netlists of components and combinators.
//!
//! ```text
//! version: 1
//! # Mach-Zehnder switch
//! component b1: beamsplitter pi/4
//! component p: phase pi
//! component id: identity 1
//! component b2: beamsplitter -pi/4
//! concat arm: p id
//! series mz: b2 arm b1
//! output: mz
//! ```
//!
//! Each line is blank, a `#` comment, or one record:
//!
//! - `version: 1` must come first.
//! - `component NAME: phase ANGLE | beamsplitter ANGLE | identity PORTS | drive C, C, ...`
//! - `series NAME: A B ...` is `A ◁ B ◁ ...` (the rightmost operand sees the
//!   light first).
//! - `concat NAME: A B ...` is `A ⊞ B ⊞ ...`, `A` on the lowest ports.
//! - `feedback NAME: A K L` feeds output `K` of `A` into input `L` (1-indexed).
//! - `output: NAME` picks the result; it defaults to the last definition.
//!
//! Operands must be defined on an earlier line. Serialization writes every
//! component, then every combinator, then the output, in a canonical
//! spacing; parsing that text yields the same [`Netlist`].

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use slhkit::components::{beamsplitter, coherent_drive, phase_shift, DriveAmplitudes};
use slhkit::slh::{concat, feedback, identity, series, SlhModel};
use thiserror::Error;

use crate::angle::{format_complex, parse_complex, Angle};

pub const VERSION: u32 = 1;

/// Upper bound on the port count of any netlist item.
pub const MAX_PORTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct NetlistError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, NetlistError> {
    Err(NetlistError { line, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentKind {
    Phase(Angle),
    Beamsplitter(Angle),
    Identity(usize),
    Drive(Vec<Complex64>),
}

impl ComponentKind {
    fn ports(&self) -> usize {
        match self {
            ComponentKind::Phase(_) => 1,
            ComponentKind::Beamsplitter(_) => 2,
            ComponentKind::Identity(n) => *n,
            ComponentKind::Drive(a) => a.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub name: String,
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combinator {
    Series(Vec<String>),
    Concat(Vec<String>),
    Feedback { operand: String, k: usize, l: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub op: Combinator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    pub components: Vec<Component>,
    pub combinators: Vec<Definition>,
    pub output: String,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

struct Parser {
    ports: HashMap<String, usize>,
    components: Vec<Component>,
    combinators: Vec<Definition>,
    last: Option<String>,
    output: Option<(String, usize)>,
}

impl Parser {
    fn define(&mut self, line: usize, name: &str, ports: usize) -> Result<(), NetlistError> {
        if !valid_name(name) {
            return fail(line, format!("invalid name `{name}`"));
        }
        if self.ports.contains_key(name) {
            return fail(line, format!("`{name}` is already defined"));
        }
        if ports == 0 || ports > MAX_PORTS {
            return fail(line, format!("`{name}` has {ports} ports, expected 1..={MAX_PORTS}"));
        }
        self.ports.insert(name.to_string(), ports);
        self.last = Some(name.to_string());
        Ok(())
    }

    fn lookup(&self, line: usize, name: &str) -> Result<usize, NetlistError> {
        match self.ports.get(name) {
            Some(&p) => Ok(p),
            None => fail(line, format!("unresolved reference `{name}`")),
        }
    }

    fn component(&mut self, line: usize, name: &str, body: &str) -> Result<(), NetlistError> {
        let (kind, args) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let args = args.trim();
        let angle = |args: &str| -> Result<Angle, NetlistError> {
            args.parse::<Angle>().or_else(|e| fail(line, e.to_string()))
        };
        let kind = match kind {
            "phase" => ComponentKind::Phase(angle(args)?),
            "beamsplitter" => ComponentKind::Beamsplitter(angle(args)?),
            "identity" => match args.parse::<usize>() {
                Ok(n) if args.bytes().all(|b| b.is_ascii_digit()) => ComponentKind::Identity(n),
                _ => return fail(line, format!("invalid port count `{args}`")),
            },
            "drive" => {
                if args.is_empty() {
                    return fail(line, "drive needs at least one amplitude");
                }
                let amps = args
                    .split(',')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()
                    .or_else(|e| fail(line, e.to_string()))?;
                ComponentKind::Drive(amps)
            }
            other => return fail(line, format!("unknown component kind `{other}`")),
        };
        self.define(line, name, kind.ports())?;
        self.components.push(Component { name: name.to_string(), kind });
        Ok(())
    }

    fn combinator(&mut self, line: usize, keyword: &str, name: &str, body: &str) -> Result<(), NetlistError> {
        let operands: Vec<&str> = body.split_whitespace().collect();
        let (op, ports) = match keyword {
            "series" | "concat" => {
                if operands.is_empty() {
                    return fail(line, format!("{keyword} needs at least one operand"));
                }
                let counts = operands
                    .iter()
                    .map(|o| self.lookup(line, o))
                    .collect::<Result<Vec<_>, _>>()?;
                let names = operands.iter().map(|s| s.to_string()).collect();
                if keyword == "series" {
                    if let Some(bad) = counts.iter().position(|&c| c != counts[0]) {
                        return fail(
                            line,
                            format!(
                                "series arity mismatch: `{}` has {} ports, `{}` has {}",
                                operands[0], counts[0], operands[bad], counts[bad]
                            ),
                        );
                    }
                    (Combinator::Series(names), counts[0])
                } else {
                    let total = counts.iter().try_fold(0usize, |acc, &c| acc.checked_add(c));
                    (Combinator::Concat(names), total.unwrap_or(usize::MAX))
                }
            }
            "feedback" => {
                let [operand, k, l] = operands[..] else {
                    return fail(line, "feedback expects `OPERAND K L`");
                };
                let n = self.lookup(line, operand)?;
                let port = |text: &str| -> Result<usize, NetlistError> {
                    match text.parse::<usize>() {
                        Ok(p) if (1..=n).contains(&p) && text.bytes().all(|b| b.is_ascii_digit()) => Ok(p),
                        _ => fail(line, format!("feedback port `{text}` out of range 1..={n}")),
                    }
                };
                let (k, l) = (port(k)?, port(l)?);
                if n < 2 {
                    return fail(line, format!("feedback on `{operand}` needs at least 2 ports, it has {n}"));
                }
                (Combinator::Feedback { operand: operand.to_string(), k, l }, n - 1)
            }
            _ => unreachable!("caller matches keywords"),
        };
        self.define(line, name, ports)?;
        self.combinators.push(Definition { name: name.to_string(), op });
        Ok(())
    }
}

impl Netlist {
    pub fn parse(text: &str) -> Result<Self, NetlistError> {
        let mut p = Parser {
            ports: HashMap::new(),
            components: Vec::new(),
            combinators: Vec::new(),
            last: None,
            output: None,
        };
        let mut seen_version = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let Some((head, body)) = content.split_once(':') else {
                return fail(line, "expected `key: value`");
            };
            let (head, body) = (head.trim(), body.trim());
            if !seen_version {
                if head != "version" {
                    return fail(line, "the first record must be `version: 1`");
                }
                if body != VERSION.to_string() {
                    return fail(line, format!("unsupported version `{body}`"));
                }
                seen_version = true;
                continue;
            }
            let mut words = head.split_whitespace();
            let keyword = words.next().unwrap_or("");
            let name = words.next();
            if words.next().is_some() {
                return fail(line, format!("unexpected text in `{head}`"));
            }
            match (keyword, name) {
                ("version", None) => return fail(line, "duplicate version record"),
                ("output", None) => {
                    if p.output.is_some() {
                        return fail(line, "duplicate output record");
                    }
                    p.lookup(line, body)?;
                    p.output = Some((body.to_string(), line));
                }
                ("component", Some(name)) => p.component(line, name, body)?,
                (kw @ ("series" | "concat" | "feedback"), Some(name)) => p.combinator(line, kw, name, body)?,
                _ => return fail(line, format!("unknown record `{head}`")),
            }
        }
        if !seen_version {
            return fail(1, "missing `version: 1` header");
        }
        let output = match (p.output, p.last) {
            (Some((name, _)), _) => name,
            (None, Some(last)) => last,
            (None, None) => return fail(text.lines().count().max(1), "netlist defines nothing"),
        };
        Ok(Netlist { components: p.components, combinators: p.combinators, output })
    }

    /// Builds every definition bottom-up and returns the output model.
    pub fn elaborate(&self) -> Result<SlhModel, slhkit::Error> {
        let mut built: HashMap<&str, SlhModel> = HashMap::new();
        for c in &self.components {
            let model = match &c.kind {
                ComponentKind::Phase(a) => phase_shift(a.radians())?,
                ComponentKind::Beamsplitter(a) => beamsplitter(a.radians())?,
                ComponentKind::Identity(n) => identity(*n)?,
                ComponentKind::Drive(amps) => coherent_drive(&DriveAmplitudes::new(amps.clone()))?,
            };
            built.insert(&c.name, model);
        }
        for d in &self.combinators {
            let get = |name: &str| {
                built
                    .get(name)
                    .ok_or_else(|| slhkit::Error::Spec(format!("unresolved reference `{name}`")))
            };
            let model = match &d.op {
                Combinator::Series(ops) => {
                    let mut iter = ops.iter().rev();
                    let first = get(iter.next().expect("non-empty"))?.clone();
                    iter.try_fold(first, |acc, name| series(get(name)?, &acc))?
                }
                Combinator::Concat(ops) => {
                    let mut iter = ops.iter();
                    let first = get(iter.next().expect("non-empty"))?.clone();
                    iter.try_fold(first, |acc, name| Ok::<_, slhkit::Error>(concat(&acc, get(name)?)))?
                }
                Combinator::Feedback { operand, k, l } => feedback(get(operand)?, *k, *l)?,
            };
            built.insert(&d.name, model);
        }
        built
            .remove(self.output.as_str())
            .ok_or_else(|| slhkit::Error::Spec(format!("unresolved output `{}`", self.output)))
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "version: {VERSION}")?;
        for c in &self.components {
            write!(f, "component {}: ", c.name)?;
            match &c.kind {
                ComponentKind::Phase(a) => writeln!(f, "phase {a}")?,
                ComponentKind::Beamsplitter(a) => writeln!(f, "beamsplitter {a}")?,
                ComponentKind::Identity(n) => writeln!(f, "identity {n}")?,
                ComponentKind::Drive(amps) => {
                    let parts: Vec<String> = amps.iter().map(|z| format_complex(*z)).collect();
                    writeln!(f, "drive {}", parts.join(", "))?
                }
            }
        }
        for d in &self.combinators {
            match &d.op {
                Combinator::Series(ops) => writeln!(f, "series {}: {}", d.name, ops.join(" "))?,
                Combinator::Concat(ops) => writeln!(f, "concat {}: {}", d.name, ops.join(" "))?,
                Combinator::Feedback { operand, k, l } => writeln!(f, "feedback {}: {operand} {k} {l}", d.name)?,
            }
        }
        writeln!(f, "output: {}", self.output)
    }
}
