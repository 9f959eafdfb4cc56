use serde::{Deserialize, Serialize};

use super::{ModeProblem, RadialGrid, Weight};

/// Symmetric tridiagonal pair `(A, B)`; `*_off[i]` couples `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagPencil {
    pub a_diag: Vec<f64>,
    pub a_off: Vec<f64>,
    pub b_diag: Vec<f64>,
    pub b_off: Vec<f64>,
}

fn tridiag_apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += off[i] * v[i + 1];
            }
            s
        })
        .collect()
}

impl TridiagPencil {
    pub fn len(&self) -> usize {
        self.a_diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_diag.is_empty()
    }

    pub fn apply_a(&self, v: &[f64]) -> Vec<f64> {
        tridiag_apply(&self.a_diag, &self.a_off, v)
    }

    pub fn apply_b(&self, v: &[f64]) -> Vec<f64> {
        tridiag_apply(&self.b_diag, &self.b_off, v)
    }

    pub fn b_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.apply_b(v).iter().zip(u).map(|(a, b)| a * b).sum()
    }

    pub fn rayleigh_quotient(&self, v: &[f64]) -> f64 {
        let num: f64 = self.apply_a(v).iter().zip(v).map(|(a, b)| a * b).sum();
        num / self.b_inner(v, v)
    }

    /// Rough `(lower, upper)` guesses for `λ_min`. The lower one is a
    /// Gershgorin bound when `B` is diagonal; the bisection widens either
    /// end if the inertia says otherwise.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.a_off[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.a_off[i].abs();
            }
            lo = lo.min((self.a_diag[i] - radius) / self.b_diag[i]);
        }
        let probe: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::PI * (i + 1) as f64 / (n + 1) as f64).sin())
            .collect();
        let hi = self.rayleigh_quotient(&probe);
        (lo.min(hi) - 1e-3 * hi.abs().max(1.0), hi + 1e-3 * hi.abs().max(1.0))
    }
}

/// Discretizes `∫(w'² + (k+γ)²w²) dt / ∫ ρ w² dt` on the grid, with
/// `ρ = 1` for [`Weight::Hardy`] and `(1+|t|)^{-2}` for [`Weight::LogSquared`].
pub fn assemble_mode_pencil(grid: &RadialGrid, mode: &ModeProblem, weight: Weight) -> TridiagPencil {
    let n = grid.points();
    let h = grid.h();
    let q = mode.mode_coefficient;
    let b_diag: Vec<f64> = match weight {
        Weight::Hardy => vec![h; n],
        Weight::LogSquared => (0..n).map(|i| h / (1.0 + grid.t(i).abs()).powi(2)).collect(),
    };
    TridiagPencil {
        a_diag: vec![2.0 / h + q * h; n],
        a_off: vec![-1.0 / h; n.saturating_sub(1)],
        b_diag,
        b_off: vec![0.0; n.saturating_sub(1)],
    }
}
