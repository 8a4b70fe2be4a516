//! Mach-Zehnder switches and the cascaded phase selector.
//!
//! A selector of length `n` is a staircase of `2(n+1)` balanced
//! beamsplitters with alternating angles `+π/4, -π/4, …`. Between
//! consecutive beamsplitters sit, in order, the phases
//! `φ_1, μ_1, φ_2, μ_2, …, φ_n, μ_n, φ_end`. Each `(+π/4, φ, -π/4)` triple
//! is a Mach-Zehnder switch with its control phase on port 1; the memory
//! phases `μ_i` sit on port 2, between switches.
//!
//! Driving port 1 with `α`, the light leaves port 1 as `α e^{i s·μ}` where
//! `s_i = (φ_1 + … + φ_i)/π mod 2`. The tail phase `φ_end` returns the light
//! to port 1 and equals the sum of all control phases mod 2π.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::components::{beamsplitter, phase_shift};
use crate::error::{Error, Result};
use crate::phase::{wrap_two_pi, ControlPhase};
use crate::slh::{concat, identity, series, series_chain, SlhModel};

/// `MZ = B_θ2 ◁ (Φ_φ ⊞ I_1) ◁ B_θ1`.
pub fn mz(theta1: f64, theta2: f64, phi: f64) -> Result<SlhModel> {
    let arm = concat(&phase_shift(phi)?, &identity(1)?);
    series(&beamsplitter(theta2)?, &series(&arm, &beamsplitter(theta1)?)?)
}

/// Balanced Mach-Zehnder switch: identity for `φ = 0`, swap for `φ = π`.
/// Any other value is rejected.
pub fn mz_switch(phi: f64) -> Result<SlhModel> {
    mz_switch_control(ControlPhase::from_radians(phi)?)
}

pub fn mz_switch_control(phi: ControlPhase) -> Result<SlhModel> {
    mz(FRAC_PI_4, -FRAC_PI_4, phi.radians())
}

/// Waveguide crossing made from two beamsplitters and a fixed `π` phase.
pub fn crossing() -> SlhModel {
    mz_switch_control(ControlPhase::Pi).expect("balanced switch is always constructible")
}

/// Binary vector naming which memory phases are read.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectorVector(Vec<bool>);

impl SelectorVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(index, &value)| match value {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::NonBinary { index, value }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Bit `i` of the result is bit `i` of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.0.iter().map(|&b| b as i64).collect()
    }
}

/// The lower-triangular matrix `L = (1/π)[i ≥ j]` and its inverse, the
/// double-band matrix `Γ = π([i = j] - [i = j + 1])`.
///
/// Both are stored as integer matrices with the `1/π` and `π` factors kept
/// symbolic, so `L·Γ` is computed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationMatrices {
    lower_units: DMatrix<i64>,
    gamma_units: DMatrix<i64>,
}

impl CompilationMatrices {
    pub fn new(n: usize) -> Self {
        let lower_units = DMatrix::from_fn(n, n, |i, j| (i >= j) as i64);
        let gamma_units = DMatrix::from_fn(n, n, |i, j| (i == j) as i64 - (i == j + 1) as i64);
        Self { lower_units, gamma_units }
    }

    pub fn dim(&self) -> usize {
        self.lower_units.nrows()
    }

    /// Entries of `L` in units of `1/π`.
    pub fn lower_units(&self) -> &DMatrix<i64> {
        &self.lower_units
    }

    /// Entries of `Γ` in units of `π`.
    pub fn gamma_units(&self) -> &DMatrix<i64> {
        &self.gamma_units
    }

    pub fn lower(&self) -> DMatrix<f64> {
        self.lower_units.map(|v| v as f64 / PI)
    }

    pub fn gamma(&self) -> DMatrix<f64> {
        self.gamma_units.map(|v| v as f64 * PI)
    }

    /// `L·Γ` with the π factors cancelled; the identity for every `n`.
    pub fn lower_times_gamma(&self) -> DMatrix<i64> {
        &self.lower_units * &self.gamma_units
    }

    pub fn gamma_times_lower(&self) -> DMatrix<i64> {
        &self.gamma_units * &self.lower_units
    }
}

/// Control phases `φ = Γ s` (reduced into `{0, π}`) and the tail phase
/// `φ_end = Σ φ_i`.
pub fn compile_selector(s: &SelectorVector) -> (Vec<ControlPhase>, ControlPhase) {
    let mats = CompilationMatrices::new(s.len());
    let bits = nalgebra::DVector::from_iterator(s.len(), s.to_ints());
    let units = mats.gamma_units() * bits;
    let phi: Vec<ControlPhase> = units.iter().map(|&u| ControlPhase::from_pi_units(u)).collect();
    let tail = ControlPhase::sum(phi.iter().copied());
    (phi, tail)
}

/// Inverse of [`compile_selector`]: `s = (1/π) L φ mod 2`.
pub fn recover_selector(phi: &[ControlPhase]) -> SelectorVector {
    let mats = CompilationMatrices::new(phi.len());
    let units = nalgebra::DVector::from_iterator(phi.len(), phi.iter().map(|p| p.units()));
    let s = mats.lower_units() * units;
    SelectorVector(s.iter().map(|v| v.rem_euclid(2) == 1).collect())
}

fn check_memory_phase(mu: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::NonFinite { name: "memory phase", value: mu });
    }
    if !(0.0..TAU).contains(&mu) {
        return Err(Error::Spec(format!("memory phase {mu} outside [0, 2pi)")));
    }
    Ok(())
}

/// Memory, control and tail phases of one selector staircase.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorSpec {
    memory_phases: Vec<f64>,
    control_phases: Vec<ControlPhase>,
    tail_phase: ControlPhase,
}

impl SelectorSpec {
    pub fn new(memory_phases: Vec<f64>, control_phases: Vec<ControlPhase>, tail_phase: ControlPhase) -> Result<Self> {
        if memory_phases.len() != control_phases.len() {
            return Err(Error::LengthMismatch {
                expected: memory_phases.len(),
                found: control_phases.len(),
            });
        }
        for &mu in &memory_phases {
            check_memory_phase(mu)?;
        }
        let expected = ControlPhase::sum(control_phases.iter().copied());
        if tail_phase != expected {
            return Err(Error::Spec(format!(
                "tail phase {tail_phase} does not equal the control sum {expected}"
            )));
        }
        Ok(Self { memory_phases, control_phases, tail_phase })
    }

    /// Spec that reads `s · μ`, with controls compiled from `s`.
    pub fn from_selector(memory_phases: Vec<f64>, s: &SelectorVector) -> Result<Self> {
        let (phi, tail) = compile_selector(s);
        Self::new(memory_phases, phi, tail)
    }

    pub fn len(&self) -> usize {
        self.memory_phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memory_phases.is_empty()
    }

    pub fn memory_phases(&self) -> &[f64] {
        &self.memory_phases
    }

    pub fn control_phases(&self) -> &[ControlPhase] {
        &self.control_phases
    }

    pub fn tail_phase(&self) -> ControlPhase {
        self.tail_phase
    }
}

/// Components of the staircase in the order light meets them.
pub fn selector_chain_stages(spec: &SelectorSpec) -> Result<Vec<SlhModel>> {
    let id = identity(1)?;
    let up = beamsplitter(FRAC_PI_4)?;
    let down = beamsplitter(-FRAC_PI_4)?;
    let left = |phi: f64| phase_shift(phi).map(|p| concat(&p, &id));
    let right = |mu: f64| phase_shift(mu).map(|p| concat(&id, &p));

    let mut stages = Vec::with_capacity(4 * spec.len() + 3);
    stages.push(up.clone());
    for (&phi, &mu) in spec.control_phases.iter().zip(&spec.memory_phases) {
        stages.push(left(phi.radians())?);
        stages.push(down.clone());
        stages.push(right(mu)?);
        stages.push(up.clone());
    }
    stages.push(left(spec.tail_phase.radians())?);
    stages.push(down);
    Ok(stages)
}

pub fn build_selector_chain(spec: &SelectorSpec) -> Result<SlhModel> {
    series_chain(&selector_chain_stages(spec)?)
}

/// Output amplitudes of a selector driven on port 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectorReadout {
    pub alpha: Complex64,
    pub left: Complex64,
    pub right: Complex64,
}

impl SelectorReadout {
    /// Phase picked up on the left output, in `[0, 2π)`.
    pub fn phase(&self) -> f64 {
        wrap_two_pi((self.left / self.alpha).arg())
    }

    /// `|right|² / |α|²`.
    pub fn residual_power(&self) -> f64 {
        self.right.norm_sqr() / self.alpha.norm_sqr()
    }
}

/// Builds the chain and drives port 1 with `alpha`.
pub fn read_selector(spec: &SelectorSpec, alpha: Complex64) -> Result<SelectorReadout> {
    if alpha.norm() == 0.0 || !alpha.is_finite() {
        return Err(Error::Spec(format!("drive amplitude must be finite and nonzero, got {alpha}")));
    }
    let s = build_selector_chain(spec)?.scattering().clone();
    Ok(SelectorReadout { alpha, left: s[(0, 0)] * alpha, right: s[(1, 0)] * alpha })
}

/// `s · μ` reduced into `[0, 2π)`.
pub fn eval_selector(mu: &[f64], s: &SelectorVector) -> Result<f64> {
    if mu.len() != s.len() {
        return Err(Error::LengthMismatch { expected: mu.len(), found: s.len() });
    }
    if let Some(&bad) = mu.iter().find(|m| !m.is_finite()) {
        return Err(Error::NonFinite { name: "memory phase", value: bad });
    }
    let total: f64 = mu.iter().zip(s.bits()).filter(|(_, &b)| b).map(|(m, _)| m).sum();
    Ok(wrap_two_pi(total))
}

/// Binary `n × k` selector matrix, stored by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorMatrix {
    rows: usize,
    columns: Vec<SelectorVector>,
}

impl SelectorMatrix {
    pub fn from_columns(rows: usize, columns: Vec<SelectorVector>) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::LengthMismatch { expected: rows, found: bad.len() });
        }
        Ok(Self { rows, columns })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::LengthMismatch { expected: k, found: bad.len() });
        }
        let mut columns = Vec::with_capacity(k);
        for j in 0..k {
            let col: Vec<i64> = rows.iter().map(|r| r[j]).collect();
            columns.push(SelectorVector::from_ints(&col).map_err(|e| match e {
                Error::NonBinary { index, value } => Error::NonBinary { index: index * k + j, value },
                other => other,
            })?);
        }
        Ok(Self { rows: n, columns })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SelectorVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SelectorVector] {
        &self.columns
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols(), |i, j| self.columns[j].bits()[i] as u8 as f64)
    }
}

/// Control phase columns `Φ = Γ S` and tail phases `Φᵀ 1`, each reduced
/// into `{0, π}`. Columns compile independently.
pub fn compile_selector_matrix(s: &SelectorMatrix) -> (Vec<Vec<ControlPhase>>, Vec<ControlPhase>) {
    s.columns.iter().map(compile_selector).unzip()
}

/// Memory matrix `M` (`n × m`), control matrix `Φ` (`n × k`, by column) and
/// tail phases for a matrix-product array of selector chains.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProductSpec {
    memory: DMatrix<f64>,
    control: Vec<Vec<ControlPhase>>,
    tail: Vec<ControlPhase>,
}

impl MatrixProductSpec {
    pub fn new(memory: DMatrix<f64>, control: Vec<Vec<ControlPhase>>, tail: Vec<ControlPhase>) -> Result<Self> {
        let n = memory.nrows();
        for &mu in memory.iter() {
            check_memory_phase(mu)?;
        }
        if let Some(bad) = control.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch { expected: n, found: bad.len() });
        }
        if tail.len() != control.len() {
            return Err(Error::LengthMismatch { expected: control.len(), found: tail.len() });
        }
        for (j, (col, &t)) in control.iter().zip(&tail).enumerate() {
            let expected = ControlPhase::sum(col.iter().copied());
            if t != expected {
                return Err(Error::Spec(format!(
                    "tail phase {j} is {t}, expected column sum {expected}"
                )));
            }
        }
        Ok(Self { memory, control, tail })
    }

    pub fn from_selector_matrix(memory: DMatrix<f64>, s: &SelectorMatrix) -> Result<Self> {
        if s.rows() != memory.nrows() {
            return Err(Error::LengthMismatch { expected: memory.nrows(), found: s.rows() });
        }
        let (control, tail) = compile_selector_matrix(s);
        Self::new(memory, control, tail)
    }

    pub fn memory(&self) -> &DMatrix<f64> {
        &self.memory
    }

    pub fn control(&self) -> &[Vec<ControlPhase>] {
        &self.control
    }

    pub fn tail(&self) -> &[ControlPhase] {
        &self.tail
    }

    /// Binary selector matrix recovered from `Φ`.
    pub fn selector_matrix(&self) -> SelectorMatrix {
        SelectorMatrix {
            rows: self.memory.nrows(),
            columns: self.control.iter().map(|c| recover_selector(c)).collect(),
        }
    }

    /// The chain reading memory column `mem` with control column `ctrl`.
    pub fn chain_spec(&self, mem: usize, ctrl: usize) -> Result<SelectorSpec> {
        SelectorSpec::new(
            self.memory.column(mem).iter().copied().collect(),
            self.control[ctrl].clone(),
            self.tail[ctrl],
        )
    }
}

/// `M_out = Mᵀ S` reduced entrywise into `[0, 2π)`; shape `m × k`.
pub fn eval_matrix_product(spec: &MatrixProductSpec) -> DMatrix<f64> {
    let s = spec.selector_matrix().to_matrix();
    (spec.memory.transpose() * s).map(wrap_two_pi)
}

/// Output phases and worst residual power from building all `m·k` chains.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixReadout {
    pub phases: DMatrix<f64>,
    pub max_residual_power: f64,
}

pub fn simulate_matrix_product(spec: &MatrixProductSpec, alpha: Complex64) -> Result<MatrixReadout> {
    let (m, k) = (spec.memory.ncols(), spec.control.len());
    let mut phases = DMatrix::zeros(m, k);
    let mut max_residual_power: f64 = 0.0;
    for i in 0..m {
        for j in 0..k {
            let r = read_selector(&spec.chain_spec(i, j)?, alpha)?;
            phases[(i, j)] = r.phase();
            max_residual_power = max_residual_power.max(r.residual_power());
        }
    }
    Ok(MatrixReadout { phases, max_residual_power })
}
