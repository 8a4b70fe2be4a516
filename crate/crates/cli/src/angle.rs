//! Angle and complex-number literals.
//!
//! Angles are radians, either a decimal (`0.7`, `-1.25e-3`) or a rational
//! multiple of π (`pi`, `-pi`, `3pi/4`, `pi/2`). Control phases are only
//! ever `0` or `pi`. Complex numbers are `a`, `bi`, `a+bi` or `a-bi`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use slhkit::ControlPhase;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {what} `{text}`")]
pub struct LiteralError {
    pub what: &'static str,
    pub text: String,
}

fn err(what: &'static str, text: &str) -> LiteralError {
    LiteralError { what, text: text.to_string() }
}

/// An angle as written: exact multiples of π survive serialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    PiRatio { num: i64, den: u64 },
    Radians(f64),
}

impl Angle {
    pub fn radians(self) -> f64 {
        match self {
            Angle::PiRatio { num, den } => num as f64 * PI / den as f64,
            Angle::Radians(r) => r,
        }
    }
}

fn parse_finite(text: &str, what: &'static str) -> Result<f64, LiteralError> {
    // reject "inf"/"nan" spellings that f64::from_str accepts
    if !text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return Err(err(what, text));
    }
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(what, text)),
    }
}

impl FromStr for Angle {
    type Err = LiteralError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        let Some(at) = s.find("pi") else {
            return parse_finite(s, "angle").map(Angle::Radians);
        };
        let (head, tail) = (&s[..at], &s[at + 2..]);
        let num = match head {
            "" => 1,
            "-" => -1,
            "+" => 1,
            digits => {
                if !digits.trim_start_matches(['-', '+']).bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err("angle", text));
                }
                digits.parse::<i64>().map_err(|_| err("angle", text))?
            }
        };
        let den = if tail.is_empty() {
            1
        } else {
            let d = tail.strip_prefix('/').ok_or_else(|| err("angle", text))?;
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("angle", text));
            }
            match d.parse::<u64>() {
                Ok(0) | Err(_) => return Err(err("angle", text)),
                Ok(v) => v,
            }
        };
        Ok(Angle::PiRatio { num, den })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::PiRatio { num, den } => {
                match num {
                    1 => f.write_str("pi")?,
                    -1 => f.write_str("-pi")?,
                    n => write!(f, "{n}pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
            Angle::Radians(r) => write!(f, "{r}"),
        }
    }
}

pub fn parse_control(text: &str) -> Result<ControlPhase, LiteralError> {
    match text.trim() {
        "0" => Ok(ControlPhase::Zero),
        "pi" => Ok(ControlPhase::Pi),
        other => Err(err("control phase (expected 0 or pi)", other)),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64, LiteralError> {
    let s = text.trim();
    let Some(body) = s.strip_suffix('i') else {
        return parse_finite(s, "complex number").map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_finite(&body[..i], "complex number")?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_finite(other, "complex number")?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pi_multiples() {
        assert_eq!("pi".parse::<Angle>().unwrap(), Angle::PiRatio { num: 1, den: 1 });
        assert_eq!("-pi".parse::<Angle>().unwrap(), Angle::PiRatio { num: -1, den: 1 });
        assert_eq!("3pi/4".parse::<Angle>().unwrap(), Angle::PiRatio { num: 3, den: 4 });
        assert_eq!("-3pi/4".parse::<Angle>().unwrap().radians(), -3.0 * PI / 4.0);
        assert_eq!("pi/2".parse::<Angle>().unwrap().radians(), PI / 2.0);
        assert_eq!("0.7".parse::<Angle>().unwrap(), Angle::Radians(0.7));
        for bad in ["", "pi/", "pi/0", "p", "2*pi", "3pi/-4", "inf", "NaN", "1.5pi", "pipi", "--pi"] {
            assert!(bad.parse::<Angle>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(Angle::PiRatio { num: 1, den: 4 }.to_string(), "pi/4");
        assert_eq!(Angle::PiRatio { num: -2, den: 3 }.to_string(), "-2pi/3");
        assert_eq!(Angle::PiRatio { num: 0, den: 1 }.to_string(), "0pi");
        assert_eq!(Angle::Radians(0.25).to_string(), "0.25");
    }

    #[test]
    fn controls() {
        assert_eq!(parse_control("pi").unwrap(), ControlPhase::Pi);
        assert_eq!(parse_control("0").unwrap(), ControlPhase::Zero);
        assert!(parse_control("3.14159").is_err());
        assert!(parse_control("0.0").is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), Complex64::new(0.5, -0.25));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_complex("-1-1i").unwrap(), Complex64::new(-1.0, -1.0));
        for bad in ["", "i1", "1+", "1+2j", "nan", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn complex_display_round_trips(re in proptest::num::f64::NORMAL | proptest::num::f64::ZERO, im in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), re.to_bits());
            prop_assert_eq!(back.im.to_bits(), im.to_bits());
        }

        #[test]
        fn angle_display_round_trips(num in -1000i64..1000, den in 1u64..1000, r in proptest::num::f64::NORMAL) {
            let a = Angle::PiRatio { num, den };
            prop_assert_eq!(a.to_string().parse::<Angle>().unwrap(), a);
            let b = Angle::Radians(r);
            prop_assert_eq!(b.to_string().parse::<Angle>().unwrap().radians().to_bits(), r.to_bits());
        }
    }
}
