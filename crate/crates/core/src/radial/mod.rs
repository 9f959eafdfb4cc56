//! One angular mode at a time: after `c(r) = r^γ w(log r)` the weighted
//! radial form becomes `∫(w'² + (k+γ)²w²) dt / ∫w² dt`, a constant-coefficient
//! Dirichlet problem on `[−T, T]` whose smallest eigenvalue is
//! `(k+γ)² + (π/2T)²`.

mod checks;
mod pencil;
mod solver;

use serde::{Deserialize, Serialize};

use crate::constants::{ckn_constant, mode_coefficient, potential_coefficient};
use crate::error::{Error, Result};
use crate::profile::integrate;

pub use checks::{
    excluded_mode_floor, ground_state_profile, minimizer_flatness, remainder_check, sharpness_sweep, ExcludedModeFloor,
    GridRule, GroundStateProfile, RemainderMargin, SweepRow,
};
pub use pencil::{assemble_mode_pencil, TridiagPencil};
pub use solver::{
    bisect_eigenvalue, constrained_min_eigenvalue, eigenpair, min_eigenvalue, sturm_count, ConstrainedEigenResult,
    EigenResult, BISECTION_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeProblem {
    pub n: usize,
    pub b: f64,
    pub k: i64,
    pub gamma: f64,
    pub potential_coeff: f64,
    pub mode_coefficient: f64,
}

impl ModeProblem {
    /// Fails for an inadmissible `k`, or if completing the square does not
    /// reproduce `(k+γ)²` to round-off.
    pub fn new(n: usize, b: f64, k: i64) -> Result<Self> {
        if n < 2 || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "mode problem needs n ≥ 2 and finite b, got n = {n}, b = {b}"
            )));
        }
        let mc = mode_coefficient(n, b, k)?;
        let pc = potential_coefficient(n, b, k);
        let completed = ckn_constant(1, n as f64 - 1.0 - b) + pc;
        if (completed - mc).abs() > 1e-12 * mc.abs().max(1.0) {
            return Err(Error::Internal(format!(
                "completing the square gives {completed}, expected {mc}"
            )));
        }
        Ok(Self {
            n,
            b,
            k,
            gamma: (b + 2.0 - n as f64) / 2.0,
            potential_coeff: pc,
            mode_coefficient: mc,
        })
    }

    /// `(k+γ)² + (π/2T)²`.
    pub fn closed_form(&self, half_width: f64) -> f64 {
        self.mode_coefficient + (std::f64::consts::PI / (2.0 * half_width)).powi(2)
    }

    /// Exact smallest eigenvalue of the discrete pencil on `grid`.
    pub fn discrete_closed_form(&self, grid: &RadialGrid) -> f64 {
        let h = grid.h();
        self.mode_coefficient + 4.0 / (h * h) * (std::f64::consts::PI * h / (4.0 * grid.half_width)).sin().powi(2)
    }
}

/// Uniform interior grid on `t ∈ (−T, T)`, Dirichlet at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    #[serde(rename = "T")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub interior: usize,
}

impl RadialGrid {
    pub fn new(half_width: f64, interior: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) || interior < 3 {
            return Err(Error::InvalidInput(format!(
                "radial grid needs T > 0 and N ≥ 3, got T = {half_width}, N = {interior}"
            )));
        }
        Ok(Self { half_width, interior })
    }

    /// `N = round(2T/h) − 1`.
    pub fn with_spacing(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("spacing must be positive, got {h}")));
        }
        let cells = (2.0 * half_width / h).round();
        Self::new(half_width, (cells as usize).saturating_sub(1))
    }

    pub fn points(&self) -> usize {
        self.interior
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.interior + 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        -self.half_width + (i + 1) as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.interior).map(|i| self.t(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// `∫ r^{−b−2}|u|²`, i.e. `∫ w² dt`.
    Hardy,
    /// `∫ r^{−b−2}(1+|log r|)^{−2}|u|²`, i.e. `∫ (1+|t|)^{−2} w² dt`.
    LogSquared,
}

impl std::str::FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy" => Ok(Self::Hardy),
            "log-squared" | "log_squared" => Ok(Self::LogSquared),
            _ => Err(Error::InvalidInput(format!("unknown weight {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    None,
    AnnulusMeanZero,
}

/// `∫_{r_1}^{r_2} c(r) r^p dr = 0` on one mode coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    pub annulus: (f64, f64),
    pub radial_power: f64,
}

impl ConstraintSpec {
    pub fn none() -> Self {
        Self {
            kind: ConstraintKind::None,
            annulus: (1.0, 2.0),
            radial_power: 1.0,
        }
    }

    /// Mean zero over `1 < r < 2` against `r dr`.
    pub fn annulus_mean_zero() -> Self {
        Self {
            kind: ConstraintKind::AnnulusMeanZero,
            ..Self::none()
        }
    }

    /// The functional on grid values of `w`, exact for the piecewise-linear
    /// interpolant: `g_i = ∫ φ_i(t) e^{(γ+p+1)t} dt` over `(log r_1, log r_2)`.
    pub fn functional(&self, grid: &RadialGrid, mode: &ModeProblem) -> Result<Option<Vec<f64>>> {
        if self.kind == ConstraintKind::None {
            return Ok(None);
        }
        let (r1, r2) = self.annulus;
        if !(r1 > 0.0 && r1 < r2) {
            return Err(Error::InvalidInput(format!("bad annulus ({r1}, {r2})")));
        }
        let (a, b) = (r1.ln(), r2.ln());
        let rate = mode.gamma + self.radial_power + 1.0;
        let h = grid.h();
        let g: Vec<f64> = (0..grid.points())
            .map(|i| {
                let ti = grid.t(i);
                let mut s = 0.0;
                // rising half then falling half of the hat
                let lo = (ti - h).max(a);
                let hi = ti.min(b);
                if lo < hi {
                    s += integrate(lo, hi, 1, |t| (t - ti + h) / h * (rate * t).exp());
                }
                let lo = ti.max(a);
                let hi = (ti + h).min(b);
                if lo < hi {
                    s += integrate(lo, hi, 1, |t| (ti + h - t) / h * (rate * t).exp());
                }
                s
            })
            .collect();
        if g.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidInput(format!(
                "annulus ({r1}, {r2}) misses the grid on [−{0}, {0}]",
                grid.half_width
            )));
        }
        Ok(Some(g))
    }
}

/// Smallest eigenvalue of one mode, optionally under a linear constraint.
pub fn solve_mode(
    grid: &RadialGrid,
    mode: &ModeProblem,
    weight: Weight,
    constraint: &ConstraintSpec,
) -> Result<ConstrainedEigenResult> {
    let pencil = assemble_mode_pencil(grid, mode, weight);
    match constraint.functional(grid, mode)? {
        Some(g) => constrained_min_eigenvalue(&pencil, &g, BISECTION_TOL),
        None => {
            let r = min_eigenvalue(&pencil, BISECTION_TOL)?;
            let second = bisect_eigenvalue(&pencil, 1, BISECTION_TOL)?;
            let l1 = r.lambda_min;
            Ok(ConstrainedEigenResult {
                result: r,
                constraint_violation: 0.0,
                constraint_overlap: 0.0,
                unconstrained: (l1, 0.5 * (second.0 + second.1)),
            })
        }
    }
}
