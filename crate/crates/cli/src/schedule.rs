//! Phase schedules: compiled control phases written as exact `0`/`pi`.
//!
//! ```text
//! version: 1
//! kind: vector
//! phi: 0 pi 0
//! phi_end: pi
//! ```
//!
//! A matrix schedule lists one `phi:` line per row of `Φ` (so each line has
//! `k` entries) and a `phi_end:` line with `k` tail phases:
//!
//! ```text
//! version: 1
//! kind: matrix
//! rows: 3
//! cols: 2
//! phi: 0 pi
//! phi: pi 0
//! phi: 0 pi
//! phi_end: pi 0
//! ```

use std::fmt;

use slhkit::ControlPhase;
use thiserror::Error;

use crate::angle::parse_control;

/// Rows times columns accepted in a schedule.
pub const MAX_ENTRIES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScheduleError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ScheduleError> {
    Err(ScheduleError { line, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseSchedule {
    Vector { phi: Vec<ControlPhase>, tail: ControlPhase },
    /// `columns[j]` is the `j`-th control vector of length `rows`.
    Matrix { rows: usize, columns: Vec<Vec<ControlPhase>>, tail: Vec<ControlPhase> },
}

fn join(phases: impl IntoIterator<Item = ControlPhase>) -> String {
    phases.into_iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

fn controls(line: usize, text: &str) -> Result<Vec<ControlPhase>, ScheduleError> {
    text.split_whitespace()
        .map(|w| parse_control(w).or_else(|e| fail(line, e.to_string())))
        .collect()
}

fn count(line: usize, text: &str) -> Result<usize, ScheduleError> {
    match text.parse::<usize>() {
        Ok(n) if text.bytes().all(|b| b.is_ascii_digit()) => Ok(n),
        _ => fail(line, format!("invalid count `{text}`")),
    }
}

impl PhaseSchedule {
    pub fn parse(text: &str) -> Result<Self, ScheduleError> {
        let mut records: Vec<(usize, &str, &str)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let Some((k, v)) = content.split_once(':') else {
                return fail(idx + 1, "expected `key: value`");
            };
            records.push((idx + 1, k.trim(), v.trim()));
        }
        let mut iter = records.into_iter();
        match iter.next() {
            Some((_, "version", "1")) => {}
            Some((line, "version", v)) => return fail(line, format!("unsupported version `{v}`")),
            Some((line, ..)) => return fail(line, "the first record must be `version: 1`"),
            None => return fail(1, "empty schedule"),
        }
        let (kind_line, kind) = match iter.next() {
            Some((line, "kind", kind)) => (line, kind),
            Some((line, ..)) => return fail(line, "expected `kind: vector` or `kind: matrix`"),
            None => return fail(text.lines().count().max(1), "missing `kind`"),
        };
        let rest: Vec<(usize, &str, &str)> = iter.collect();
        let last_line = rest.last().map_or(text.lines().count().max(1), |r| r.0);
        match kind {
            "vector" => {
                let [(pl, "phi", phi), (tl, "phi_end", tail)] = rest[..] else {
                    return fail(last_line, "vector schedule needs exactly `phi:` then `phi_end:`");
                };
                let phi = controls(pl, phi)?;
                let tails = controls(tl, tail)?;
                let [tail] = tails[..] else {
                    return fail(tl, "phi_end takes one phase");
                };
                if tail != ControlPhase::sum(phi.iter().copied()) {
                    return fail(tl, "phi_end must equal the sum of the control phases mod 2pi");
                }
                Ok(PhaseSchedule::Vector { phi, tail })
            }
            "matrix" => {
                let [(rl, "rows", rows), (cl, "cols", cols), ref body @ ..] = rest[..] else {
                    return fail(last_line, "matrix schedule needs `rows:` then `cols:`");
                };
                let (rows, cols) = (count(rl, rows)?, count(cl, cols)?);
                if rows > MAX_ENTRIES || cols > MAX_ENTRIES || rows.saturating_mul(cols) > MAX_ENTRIES {
                    return fail(cl, format!("schedule larger than {MAX_ENTRIES} entries"));
                }
                if body.len() != rows + 1 {
                    return fail(last_line, format!("expected {rows} `phi:` rows and one `phi_end:`"));
                }
                let mut columns = vec![Vec::with_capacity(rows); cols];
                for &(line, key, value) in &body[..rows] {
                    if key != "phi" {
                        return fail(line, format!("expected `phi:`, found `{key}:`"));
                    }
                    let row = controls(line, value)?;
                    if row.len() != cols {
                        return fail(line, format!("row has {} entries, expected {cols}", row.len()));
                    }
                    for (col, p) in columns.iter_mut().zip(row) {
                        col.push(p);
                    }
                }
                let (tl, key, value) = body[rows];
                if key != "phi_end" {
                    return fail(tl, format!("expected `phi_end:`, found `{key}:`"));
                }
                let tail = controls(tl, value)?;
                if tail.len() != cols {
                    return fail(tl, format!("phi_end has {} entries, expected {cols}", tail.len()));
                }
                for (j, (col, t)) in columns.iter().zip(&tail).enumerate() {
                    if *t != ControlPhase::sum(col.iter().copied()) {
                        return fail(tl, format!("phi_end entry {} must equal its column sum mod 2pi", j + 1));
                    }
                }
                Ok(PhaseSchedule::Matrix { rows, columns, tail })
            }
            other => fail(kind_line, format!("unknown kind `{other}`")),
        }
    }
}

impl fmt::Display for PhaseSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "version: 1")?;
        match self {
            PhaseSchedule::Vector { phi, tail } => {
                writeln!(f, "kind: vector")?;
                writeln!(f, "phi: {}", join(phi.iter().copied()))?;
                writeln!(f, "phi_end: {tail}")
            }
            PhaseSchedule::Matrix { rows, columns, tail } => {
                writeln!(f, "kind: matrix")?;
                writeln!(f, "rows: {rows}")?;
                writeln!(f, "cols: {}", columns.len())?;
                for i in 0..*rows {
                    writeln!(f, "phi: {}", join(columns.iter().map(|c| c[i])))?;
                }
                writeln!(f, "phi_end: {}", join(tail.iter().copied()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ControlPhase::{Pi, Zero};

    #[test]
    fn vector_schedule() {
        let text = "version: 1\nkind: vector\nphi: 0 pi 0\nphi_end: pi\n";
        let s = PhaseSchedule::parse(text).unwrap();
        assert_eq!(s, PhaseSchedule::Vector { phi: vec![Zero, Pi, Zero], tail: Pi });
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn empty_vector_schedule() {
        let text = "version: 1\nkind: vector\nphi:\nphi_end: 0\n";
        let s = PhaseSchedule::parse(text).unwrap();
        assert_eq!(s.to_string(), "version: 1\nkind: vector\nphi: \nphi_end: 0\n");
        assert_eq!(PhaseSchedule::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn matrix_schedule() {
        let text = "version: 1\nkind: matrix\nrows: 3\ncols: 2\nphi: 0 pi\nphi: pi 0\nphi: 0 pi\nphi_end: pi 0\n";
        let s = PhaseSchedule::parse(text).unwrap();
        match &s {
            PhaseSchedule::Matrix { rows, columns, tail } => {
                assert_eq!(*rows, 3);
                assert_eq!(columns, &vec![vec![Zero, Pi, Zero], vec![Pi, Zero, Pi]]);
                assert_eq!(tail, &vec![Pi, Zero]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        for (text, line) in [
            ("kind: vector\n", 1),
            ("version: 1\nkind: vector\nphi: 0 pi\nphi_end: 0\n", 4),
            ("version: 1\nkind: vector\nphi: 0 0.5\nphi_end: 0\n", 3),
            ("version: 1\nkind: matrix\nrows: 1\ncols: 2\nphi: 0\nphi_end: 0 0\n", 5),
            ("version: 1\nkind: matrix\nrows: 1\ncols: 1\nphi: pi\nphi_end: 0\n", 6),
            ("version: 1\nkind: matrix\nrows: 99999\ncols: 99999\n", 4),
            ("version: 1\nkind: tensor\nphi: 0\n", 2),
        ] {
            let e = PhaseSchedule::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
    }
}
