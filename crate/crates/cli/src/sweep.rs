//! Transfer-function sweeps of the weighted selector, rendered as CSV.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use slhkit::feedback::{midpoint_grid, sweep_transfer, TransferCurve};

use crate::format::sig12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub phis: Vec<f64>,
    pub mu_min: f64,
    pub mu_max: f64,
    pub count: usize,
    /// Include both endpoints instead of sampling cell midpoints.
    pub inclusive: bool,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            phis: vec![PI / 3.0, FRAC_PI_2, 2.0 * PI / 3.0, PI],
            mu_min: -PI,
            mu_max: PI,
            count: 401,
            inclusive: false,
        }
    }
}

impl SweepGrid {
    pub fn mu_grid(&self) -> Vec<f64> {
        if !self.inclusive {
            return midpoint_grid(self.mu_min, self.mu_max, self.count);
        }
        match self.count {
            0 => Vec::new(),
            1 => vec![self.mu_min],
            n => {
                let step = (self.mu_max - self.mu_min) / (n - 1) as f64;
                (0..n).map(|j| if j == n - 1 { self.mu_max } else { self.mu_min + j as f64 * step }).collect()
            }
        }
    }

    pub fn evaluate(&self) -> slhkit::Result<TransferCurve> {
        sweep_transfer(&self.phis, &self.mu_grid())
    }
}

pub fn curve_to_csv(curve: &TransferCurve) -> String {
    let mut out = String::from("phi,mu,mu_out\n");
    for s in &curve.samples {
        writeln!(out, "{},{},{}", sig12(s.phi), sig12(s.mu), sig12(s.mu_out)).expect("string write");
    }
    out
}

pub fn render_csv(grid: &SweepGrid) -> slhkit::Result<String> {
    grid.evaluate().map(|c| curve_to_csv(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let csv = render_csv(&SweepGrid::default()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "phi,mu,mu_out");
        assert_eq!(lines.len(), 1 + 4 * 401);
        let first = format!("{},{},", sig12(PI / 3.0), sig12(-PI + PI / 401.0));
        assert!(lines[1].starts_with(&first), "{}", lines[1]);
    }

    #[test]
    fn inclusive_grid_hits_singular_point() {
        let grid = SweepGrid { inclusive: true, ..Default::default() };
        let mu = grid.mu_grid();
        assert_eq!((mu[0], mu[400]), (-PI, PI));
        assert!(matches!(grid.evaluate(), Err(slhkit::Error::SingularPoint { .. })));
    }

    #[test]
    fn single_sample_inclusive() {
        let grid = SweepGrid { phis: vec![1.0], mu_min: 0.5, mu_max: 0.9, count: 1, inclusive: true };
        assert_eq!(grid.mu_grid(), vec![0.5]);
    }
}
