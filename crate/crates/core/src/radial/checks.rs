use serde::{Deserialize, Serialize};

use super::{assemble_mode_pencil, min_eigenvalue, EigenResult, ModeProblem, RadialGrid, Weight, BISECTION_TOL};
use crate::angular::is_admissible;
use crate::constants::{hardy_constant, RadialPower, RemainderVariant, RemainderWeights};
use crate::error::{Error, Result};
use crate::profile::{integrate, LogCutoff, PolyBump};

/// How `N` follows `T` in a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRule {
    /// Fixed interior point count.
    Points(usize),
    /// `h = T / ratio`.
    SpacingRatio(f64),
}

impl Default for GridRule {
    fn default() -> Self {
        Self::SpacingRatio(1000.0)
    }
}

impl GridRule {
    pub fn grid(&self, half_width: f64) -> Result<RadialGrid> {
        match *self {
            Self::Points(n) => RadialGrid::new(half_width, n),
            Self::SpacingRatio(ratio) => RadialGrid::with_spacing(half_width, half_width / ratio),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub points: usize,
    pub h: f64,
    pub lambda_min: f64,
    /// `(k+γ)² + (π/2T)²`.
    pub closed_form: f64,
    /// Exact eigenvalue of the discrete pencil.
    pub discrete_closed_form: f64,
    pub mode_coefficient: f64,
    pub abs_err: f64,
    pub residual: f64,
}

pub fn sharpness_sweep(n: usize, b: f64, k: i64, half_widths: &[f64], rule: GridRule) -> Result<Vec<SweepRow>> {
    let mode = ModeProblem::new(n, b, k)?;
    half_widths
        .iter()
        .map(|&t| {
            let grid = rule.grid(t)?;
            let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
            let closed_form = mode.closed_form(t);
            Ok(SweepRow {
                half_width: t,
                points: grid.points(),
                h: grid.h(),
                lambda_min: r.lambda_min,
                closed_form,
                discrete_closed_form: mode.discrete_closed_form(&grid),
                mode_coefficient: mode.mode_coefficient,
                abs_err: (r.lambda_min - closed_form).abs(),
                residual: r.residual,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcludedModeFloor {
    pub j: i64,
    #[serde(rename = "T")]
    pub half_width: f64,
    /// `(k, λ_min)` for every admissible `k ≠ j` with `|k − j| ≤ 3`.
    pub per_mode: Vec<(i64, f64)>,
    pub floor: f64,
    pub argmin: Vec<i64>,
}

/// Smallest mode eigenvalue once the degenerate mode `j` is projected out.
pub fn excluded_mode_floor(n: usize, b: f64, half_width: f64, rule: GridRule) -> Result<ExcludedModeFloor> {
    let hc = hardy_constant(n, b)?;
    let j = hc.degenerate_mode.ok_or(Error::NotDegenerate { n, b })?;
    let grid = rule.grid(half_width)?;
    let mut per_mode = Vec::new();
    for k in (j - 3)..=(j + 3) {
        if k == j || !is_admissible(n, k) {
            continue;
        }
        let mode = ModeProblem::new(n, b, k)?;
        let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
        per_mode.push((k, r.lambda_min));
    }
    let floor = per_mode.iter().map(|&(_, l)| l).fold(f64::INFINITY, f64::min);
    let argmin = per_mode
        .iter()
        .filter(|&&(_, l)| l - floor <= 1e-12 * floor.abs().max(1.0))
        .map(|&(k, _)| k)
        .collect();
    Ok(ExcludedModeFloor {
        j,
        half_width,
        per_mode,
        floor,
        argmin,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderMargin {
    pub k: i64,
    pub c_b: f64,
    /// One-mode `Q_b`.
    pub lhs: f64,
    /// `c_b ∫ r^{n−3−b}|f|² dr`.
    pub leading: f64,
    pub per_level: Vec<f64>,
    /// `lhs − leading − Σ per_level`.
    pub margin: f64,
    pub valid_interval: (f64, f64),
}

/// Panels for 1-D profile integrals.
const PROFILE_PANELS: usize = 64;

/// Compares one-mode `Q_b(f ψ_k)` for the first argmin mode against the
/// leading Hardy term plus `K` remainder levels.
#[allow(clippy::too_many_arguments)]
pub fn remainder_check(
    profile: &PolyBump,
    n: usize,
    b: f64,
    radius: f64,
    levels: usize,
    variant: RemainderVariant,
    power: RadialPower,
) -> Result<RemainderMargin> {
    let hc = hardy_constant(n, b)?;
    let k = hc.argmin_modes[0];
    let mode = ModeProblem::new(n, b, k)?;
    let weights = RemainderWeights::new(radius, levels, variant, power)?;
    let (lo, hi) = profile.support();
    let (vlo, vhi) = weights.valid_interval;
    if lo < vlo || hi > vhi {
        return Err(Error::SupportViolation {
            lo,
            hi,
            inner: vlo,
            outer: vhi,
        });
    }
    let nf = n as f64;
    let lhs = profile.integrate(PROFILE_PANELS, |r| {
        let f = profile.value(r);
        let df = profile.derivative(r);
        r.powf(nf - 1.0 - b) * (df * df + mode.potential_coeff * f * f / (r * r))
    });
    let leading = hc.c_b * profile.integrate(PROFILE_PANELS, |r| r.powf(nf - 3.0 - b) * profile.value(r).powi(2));
    let mut per_level = vec![0.0; levels];
    for (j, slot) in per_level.iter_mut().enumerate() {
        *slot = profile.integrate(PROFILE_PANELS, |r| {
            let f = profile.value(r);
            if f == 0.0 {
                return 0.0;
            }
            // quadrature nodes are interior to the support, hence valid
            let w = weights.level_weights(r, b, hc.c_b).map(|v| v[j]).unwrap_or(f64::NAN);
            w * f * f * r.powf(nf - 1.0)
        });
    }
    let margin = lhs - leading - per_level.iter().sum::<f64>();
    Ok(RemainderMargin {
        k,
        c_b: hc.c_b,
        lhs,
        leading,
        per_level,
        margin,
        valid_interval: weights.valid_interval,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateProfile {
    pub gamma: f64,
    pub mode_coefficient: f64,
    /// Rayleigh quotient of `c(r) = r^γ χ(log r)` evaluated in `r`.
    pub quotient: f64,
    /// The same quotient after the log substitution, `∫(χ'² + (k+γ)²χ²)/∫χ²`.
    pub quotient_log: f64,
    /// `quotient − (k+γ)²`.
    pub excess: f64,
    /// `(t, r, c(r))`.
    pub samples: Vec<(f64, f64, f64)>,
}

/// `r^γ` cut off smoothly in `log r`, with its mode quotient.
pub fn ground_state_profile(n: usize, b: f64, k: i64, cutoff: LogCutoff, samples: usize) -> Result<GroundStateProfile> {
    let mode = ModeProblem::new(n, b, k)?;
    let g = mode.gamma;
    let nf = n as f64;
    let panels = (4.0 * cutoff.outer).ceil() as usize;
    let pieces = [
        (-cutoff.outer, -cutoff.inner),
        (-cutoff.inner, cutoff.inner),
        (cutoff.inner, cutoff.outer),
    ];
    let over = |f: &dyn Fn(f64) -> f64| -> f64 {
        pieces
            .iter()
            .filter(|(a, b)| b > a)
            .map(|&(a, b)| integrate(a, b, panels, f))
            .sum()
    };
    // r-form integrands times dr = r dt
    let num_r = over(&|t: f64| {
        let r = t.exp();
        let (chi, dchi) = cutoff.eval(t);
        let c = r.powf(g) * chi;
        let dc = r.powf(g - 1.0) * (g * chi + dchi);
        r.powf(nf - 1.0 - b) * (dc * dc + mode.potential_coeff * c * c / (r * r)) * r
    });
    let den_r = over(&|t: f64| {
        let r = t.exp();
        let c = r.powf(g) * cutoff.eval(t).0;
        r.powf(nf - 3.0 - b) * c * c * r
    });
    let num_t = over(&|t: f64| {
        let (chi, dchi) = cutoff.eval(t);
        dchi * dchi + mode.mode_coefficient * chi * chi
    });
    let den_t = over(&|t: f64| cutoff.eval(t).0.powi(2));
    let quotient = num_r / den_r;
    let samples = (0..samples)
        .map(|i| {
            let t = -cutoff.outer + 2.0 * cutoff.outer * i as f64 / (samples.max(2) - 1) as f64;
            let r = t.exp();
            (t, r, r.powf(g) * cutoff.eval(t).0)
        })
        .collect();
    Ok(GroundStateProfile {
        gamma: g,
        mode_coefficient: mode.mode_coefficient,
        quotient,
        quotient_log: num_t / den_t,
        excess: quotient - mode.mode_coefficient,
        samples,
    })
}

/// `max |v_i / v̄ − 1|` over nodes with `|t_i| ≤ window`, `v̄` the window mean.
pub fn minimizer_flatness(result: &EigenResult, grid: &RadialGrid, window: f64) -> f64 {
    let inside: Vec<f64> = (0..grid.points())
        .filter(|&i| grid.t(i).abs() <= window)
        .map(|i| result.eigenvector[i])
        .collect();
    if inside.is_empty() {
        return f64::INFINITY;
    }
    let mean = inside.iter().sum::<f64>() / inside.len() as f64;
    inside.iter().map(|v| (v / mean - 1.0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_decreasing_and_above_coefficient() {
        let rows = sharpness_sweep(3, 0.0, 0, &[5.0, 10.0, 20.0], GridRule::default()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].lambda_min < w[0].lambda_min);
        }
        for r in &rows {
            assert!(r.lambda_min > r.mode_coefficient);
            assert!((r.lambda_min - r.discrete_closed_form).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_planar_mode_collapses() {
        let rows = sharpness_sweep(2, 0.0, 0, &[5.0, 10.0], GridRule::Points(999)).unwrap();
        let pi = std::f64::consts::PI;
        assert!((rows[0].lambda_min - (pi / 10.0).powi(2)).abs() < 1e-4);
        assert!((rows[1].lambda_min - (pi / 20.0).powi(2)).abs() < 1e-4);
    }

    #[test]
    fn excluded_floor_planar() {
        let f = excluded_mode_floor(2, 0.0, 50.0, GridRule::default()).unwrap();
        assert_eq!(f.j, 0);
        assert_eq!(f.argmin, vec![-1, 1]);
        assert!(f.floor >= 1.0 && f.floor <= 1.0 + 1e-3);
        let two = f.per_mode.iter().find(|(k, _)| *k == 2).unwrap().1;
        assert!((two - 4.0 - (std::f64::consts::PI / 100.0).powi(2)).abs() < 1e-5);
        assert!(matches!(
            excluded_mode_floor(3, 0.0, 5.0, GridRule::default()),
            Err(Error::NotDegenerate { .. })
        ));
    }

    #[test]
    fn excluded_floor_three_dimensional() {
        let f = excluded_mode_floor(3, 1.0, 50.0, GridRule::default()).unwrap();
        assert_eq!(f.argmin, vec![-1]);
        assert!(f.per_mode.iter().all(|(k, _)| *k != 1));
    }

    #[test]
    fn remainder_k0_is_plain_inequality() {
        for (lo, hi) in [(0.1, 0.5), (0.2, 0.9), (0.05, 0.3)] {
            let f = PolyBump::new(lo, hi).unwrap();
            for (n, b) in [(3, 0.0), (3, -1.0), (4, 1.0)] {
                let m = remainder_check(&f, n, b, 1.0, 0, RemainderVariant::Literal, RadialPower::Corrected).unwrap();
                assert!(m.per_level.is_empty());
                assert!(m.margin >= 0.0, "{n} {b} {m:?}");
            }
        }
    }

    #[test]
    fn remainder_support_violation() {
        let f = PolyBump::new(0.2, 0.9).unwrap();
        // with R = 1 and K = 2 the valid interval stops at R e^{−R} ≈ 0.37
        let err = remainder_check(
            &f,
            3,
            0.0,
            1.0,
            2,
            RemainderVariant::InverseSquare,
            RadialPower::Printed,
        );
        assert!(matches!(err, Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn remainder_inverse_square_nonnegative_three_dim() {
        let f = PolyBump::new(0.4, 0.9).unwrap();
        for k in [1, 2] {
            let m = remainder_check(
                &f,
                3,
                0.0,
                1.0,
                k,
                RemainderVariant::InverseSquare,
                RadialPower::Corrected,
            )
            .unwrap();
            assert_eq!(m.per_level.len(), k);
            assert!(m.margin >= 0.0, "{m:?}");
        }
    }

    #[test]
    fn ground_state_excess_small_and_positive() {
        let gs = ground_state_profile(3, 0.0, 0, LogCutoff::new(10.0, 20.0).unwrap(), 41).unwrap();
        assert!(gs.excess > 0.0 && gs.excess < 0.05, "{}", gs.excess);
        assert!((gs.quotient - gs.quotient_log).abs() < 1e-9);
        // untruncated region is exactly r^γ
        let (_, r, c) = gs.samples[20];
        assert_eq!(c, r.powf(gs.gamma));
        let wider = ground_state_profile(3, 0.0, 0, LogCutoff::new(20.0, 40.0).unwrap(), 3).unwrap();
        assert!(wider.excess < gs.excess);
    }

    #[test]
    fn discrete_minimizer_is_flat() {
        let grid = GridRule::default().grid(50.0).unwrap();
        let mode = ModeProblem::new(3, 0.0, 0).unwrap();
        let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL).unwrap();
        assert!(minimizer_flatness(&r, &grid, 5.0) < 0.02);
    }
}
