//! Number formatting and list arguments.

use num_complex::Complex64;

use crate::angle::{Angle, LiteralError};

/// Decimal rendering with 12 significant digits.
///
/// Fixed notation for magnitudes in `[1e-5, 1e12)`, scientific otherwise.
/// Negative zero prints as zero.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn sig12_complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", sig12(z.re), sign, sig12(im.abs()))
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    let t = text.trim();
    let empty = t.is_empty();
    t.split(',').map(str::trim).filter(move |_| !empty)
}

/// `0,1,1` into integers. An empty string is an empty list.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>, LiteralError> {
    split_list(text)
        .map(|s| {
            s.parse::<i64>().map_err(|_| LiteralError { what: "integer", text: s.to_string() })
        })
        .collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<i64>>, LiteralError> {
    text.split(';').map(parse_int_list).collect()
}

pub fn parse_angle_list(text: &str) -> Result<Vec<f64>, LiteralError> {
    split_list(text).map(|s| s.parse::<Angle>().map(Angle::radians)).collect()
}

pub fn parse_angle_matrix(text: &str) -> Result<Vec<Vec<f64>>, LiteralError> {
    text.split(';').map(parse_angle_list).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.8), "1.80000000000");
        assert_eq!(sig12(-0.0), "0.00000000000");
        assert_eq!(sig12(PI), "3.14159265359");
        assert_eq!(sig12(-PI / 2.0), "-1.57079632679");
        assert_eq!(sig12(0.00783), "0.00783000000000");
        assert_eq!(sig12(1.5e-17), "1.50000000000e-17");
        assert_eq!(sig12(9.9999999999996), "10.0000000000");
        assert_eq!(sig12(123456.0), "123456.000000");
        assert_eq!(sig12(2.5e13), "2.50000000000e13");
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(sig12_complex(Complex64::new(1.0, -0.5)), "1.00000000000-0.500000000000i");
        assert_eq!(sig12_complex(Complex64::new(0.0, -0.0)), "0.00000000000+0.00000000000i");
    }

    #[test]
    fn lists() {
        assert_eq!(parse_int_list("0, 1,1").unwrap(), vec![0, 1, 1]);
        assert_eq!(parse_int_list("").unwrap(), Vec::<i64>::new());
        assert!(parse_int_list("0,x").is_err());
        assert_eq!(parse_int_matrix("1,0;1,1").unwrap(), vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(parse_angle_list("pi/2, 0.5").unwrap(), vec![PI / 2.0, 0.5]);
        assert_eq!(parse_angle_matrix("0.2,0.4;0.6,0.8").unwrap()[1], vec![0.6, 0.8]);
    }
}
