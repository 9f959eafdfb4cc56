//! Smallest generalized eigenvalue of a symmetric tridiagonal pencil.
//!
//! Bisection on the Sturm-sequence inertia of `A − λB` brackets `λ_min`;
//! one or two steps of inverse iteration, shifted just below the bracket so
//! the system stays positive definite, recover the eigenvector.

use serde::{Deserialize, Serialize};

use super::pencil::TridiagPencil;
use crate::error::{Error, Result};

/// Bracket width target, relative to `max(1, |λ|)`.
pub const BISECTION_TOL: f64 = 1e-12;
const MAX_BISECTION: usize = 200;
const MAX_INVERSE_ITERATIONS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda_min: f64,
    /// `B`-normalized, sign fixed so the largest entry is positive.
    pub eigenvector: Vec<f64>,
    /// `‖Av − λBv‖ / ‖Bv‖`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub bracket: (f64, f64),
}

/// Number of eigenvalues of the pencil strictly below `lambda`.
pub fn sturm_count(p: &TridiagPencil, lambda: f64) -> usize {
    let n = p.len();
    let mut count = 0;
    let mut q = 0.0;
    for i in 0..n {
        let d = p.a_diag[i] - lambda * p.b_diag[i];
        q = if i == 0 {
            d
        } else {
            let e = p.a_off[i - 1] - lambda * p.b_off[i - 1];
            let prev = if q == 0.0 {
                f64::EPSILON * (d.abs() + e.abs()).max(f64::MIN_POSITIVE)
            } else {
                q
            };
            d - e * e / prev
        };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Brackets the `index`-th (0-based) eigenvalue.
pub fn bisect_eigenvalue(p: &TridiagPencil, index: usize, tol: f64) -> Result<(f64, f64, usize)> {
    if index >= p.len() {
        return Err(Error::InvalidInput(format!(
            "eigenvalue index {index} out of range for size {}",
            p.len()
        )));
    }
    let (mut lo, mut hi) = p.spectral_bounds();
    // widen until the inertia brackets the target
    let mut widen = 0;
    while sturm_count(p, lo) > index {
        lo -= (hi - lo).abs().max(1.0);
        widen += 1;
        if widen > 64 {
            return Err(Error::NoConvergence { lo, hi });
        }
    }
    while sturm_count(p, hi) <= index {
        hi += (hi - lo).abs().max(1.0);
        widen += 1;
        if widen > 128 {
            return Err(Error::NoConvergence { lo, hi });
        }
    }
    let mut steps = 0;
    while hi - lo > tol * hi.abs().max(lo.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(p, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
        if steps >= MAX_BISECTION {
            return Err(Error::NoConvergence { lo, hi });
        }
    }
    Ok((lo, hi, steps))
}

/// Solves a symmetric positive-definite tridiagonal system (no pivoting).
pub(crate) fn solve_spd_tridiag(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Solves a general tridiagonal system with partial pivoting
/// (`sub[i]` couples rows `i+1, i`; `sup[i]` couples rows `i, i+1`).
pub(crate) fn solve_tridiag_pivoting(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut dl = sub.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(Error::IllConditioned("singular tridiagonal system".into()));
            }
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            if i + 2 < n {
                du2[i] = 0.0;
            }
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
        }
    }
    if d[n - 1] == 0.0 {
        return Err(Error::IllConditioned("singular tridiagonal system".into()));
    }
    let mut x = vec![0.0; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n > 1 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn fix_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Scales `v` to unit `B`-norm.
pub(crate) fn b_normalize(p: &TridiagPencil, v: &mut [f64]) {
    let bn = p.b_inner(v, v).sqrt();
    if bn > 0.0 {
        v.iter_mut().for_each(|x| *x /= bn);
    }
}

pub(crate) fn residual(p: &TridiagPencil, v: &[f64], lambda: f64) -> f64 {
    let av = p.apply_a(v);
    let bv = p.apply_b(v);
    let r: Vec<f64> = av.iter().zip(&bv).map(|(a, b)| a - lambda * b).collect();
    norm(&r) / norm(&bv)
}

/// Smallest generalized eigenpair of `(A, B)`.
pub fn min_eigenvalue(p: &TridiagPencil, tol: f64) -> Result<EigenResult> {
    eigenpair(p, 0, tol)
}

/// The `index`-th generalized eigenpair (0-based), by bisection plus
/// shifted inverse iteration.
pub fn eigenpair(p: &TridiagPencil, index: usize, tol: f64) -> Result<EigenResult> {
    let (lo, hi, steps) = bisect_eigenvalue(p, index, tol)?;
    let lambda = 0.5 * (lo + hi);
    let n = p.len();

    // For the lowest eigenvalue a shift below the bracket keeps A − σB
    // positive definite; otherwise fall back to a pivoting solve.
    let shift = if index == 0 {
        lo - tol * lo.abs().max(1.0)
    } else {
        lambda
    };
    let sd: Vec<f64> = p.a_diag.iter().zip(&p.b_diag).map(|(a, b)| a - shift * b).collect();
    let so: Vec<f64> = p.a_off.iter().zip(&p.b_off).map(|(a, b)| a - shift * b).collect();

    // deterministic start: a smooth positive bump
    let mut v: Vec<f64> = (0..n)
        .map(|i| (std::f64::consts::PI * (i + 1) as f64 / (n + 1) as f64).sin() + 0.1)
        .collect();
    let mut iterations = 0;
    let mut res = f64::INFINITY;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        let rhs = p.apply_b(&v);
        v = if index == 0 {
            solve_spd_tridiag(&sd, &so, &rhs)
        } else {
            solve_tridiag_pivoting(&so, &sd, &so, &rhs)?
        };
        b_normalize(p, &mut v);
        iterations += 1;
        res = residual(p, &v, lambda);
        if res <= 1e-8 * lambda.abs().max(1.0) {
            break;
        }
    }
    fix_sign(&mut v);
    let converged = res.is_finite() && res <= 1e-6 * lambda.abs().max(1.0);
    Ok(EigenResult {
        lambda_min: lambda,
        eigenvector: v,
        residual: res,
        iterations: steps + iterations,
        converged,
        bracket: (lo, hi),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedEigenResult {
    pub result: EigenResult,
    /// `gᵀv` of the returned vector, relative to `‖g‖‖v‖`.
    pub constraint_violation: f64,
    /// `|gᵀv_1| / (‖g‖‖v_1‖)` for the unconstrained minimizer `v_1`.
    pub constraint_overlap: f64,
    /// Unconstrained `λ_1` and `λ_2` that interlace the result.
    pub unconstrained: (f64, f64),
}

/// Smallest eigenvalue of the pencil restricted to `{v : gᵀv = 0}`.
///
/// The constrained eigenvalue is the root in `(λ_1, λ_2)` of the secular
/// function `f(λ) = gᵀ(A − λB)^{-1}g`, which increases from `−∞` to `+∞`
/// there. The eigenvector `(A − λB)^{-1}g` is then projected onto the
/// constraint in the `B`-inner product and `B`-normalized.
pub fn constrained_min_eigenvalue(p: &TridiagPencil, g: &[f64], tol: f64) -> Result<ConstrainedEigenResult> {
    let n = p.len();
    if g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.len(),
        });
    }
    let gnorm = norm(g);
    if gnorm == 0.0 {
        return Err(Error::InvalidInput("constraint functional vanishes on the grid".into()));
    }
    let first = eigenpair(p, 0, tol)?;
    let (l1_lo, l1_hi) = first.bracket;
    let overlap = dot(g, &first.eigenvector).abs() / (gnorm * norm(&first.eigenvector));
    if overlap < 1e-12 {
        // v_1 already satisfies the constraint
        let mut result = first.clone();
        project_out(p, g, &mut result.eigenvector)?;
        let violation = dot(g, &result.eigenvector).abs() / (gnorm * norm(&result.eigenvector));
        let l2 = bisect_eigenvalue(p, 1, tol)
            .map(|(a, b, _)| 0.5 * (a + b))
            .unwrap_or(f64::NAN);
        return Ok(ConstrainedEigenResult {
            result,
            constraint_violation: violation,
            constraint_overlap: overlap,
            unconstrained: (first.lambda_min, l2),
        });
    }
    let (l2_lo, l2_hi, _) = bisect_eigenvalue(p, 1, tol)?;

    let secular = |lambda: f64| -> Result<(f64, Vec<f64>)> {
        let d: Vec<f64> = p.a_diag.iter().zip(&p.b_diag).map(|(a, b)| a - lambda * b).collect();
        let o: Vec<f64> = p.a_off.iter().zip(&p.b_off).map(|(a, b)| a - lambda * b).collect();
        let y = solve_tridiag_pivoting(&o, &d, &o, g)?;
        Ok((dot(g, &y), y))
    };

    let (mut lo, mut hi) = (l1_hi, l2_lo);
    if lo >= hi {
        return Err(Error::IllConditioned(format!(
            "λ_1 and λ_2 are not separated: [{l1_lo}, {l1_hi}] vs [{l2_lo}, {l2_hi}]"
        )));
    }
    let (f_hi, _) = secular(hi)?;
    if f_hi < 0.0 {
        // no root below λ_2: the constraint is orthogonal to v_2 as well
        let mut second = eigenpair(p, 1, tol)?;
        project_out(p, g, &mut second.eigenvector)?;
        let violation = dot(g, &second.eigenvector).abs() / (gnorm * norm(&second.eigenvector));
        return Ok(ConstrainedEigenResult {
            result: second,
            constraint_violation: violation,
            constraint_overlap: overlap,
            unconstrained: (first.lambda_min, 0.5 * (l2_lo + l2_hi)),
        });
    }
    let mut steps = 0;
    while hi - lo > tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (f, _) = secular(mid)?;
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
        if steps >= MAX_BISECTION {
            return Err(Error::NoConvergence { lo, hi });
        }
    }
    let lambda = 0.5 * (lo + hi);
    let (_, mut v) = secular(lambda)?;
    project_out(p, g, &mut v)?;
    b_normalize(p, &mut v);
    fix_sign(&mut v);

    // residual of the projected problem: drop the component along g
    let av = p.apply_a(&v);
    let bv = p.apply_b(&v);
    let mut r: Vec<f64> = av.iter().zip(&bv).map(|(a, b)| a - lambda * b).collect();
    let mu = dot(g, &r) / dot(g, g);
    r.iter_mut().zip(g).for_each(|(ri, gi)| *ri -= mu * gi);
    let res = norm(&r) / norm(&bv);
    let violation = dot(g, &v).abs() / (gnorm * norm(&v));

    Ok(ConstrainedEigenResult {
        result: EigenResult {
            lambda_min: lambda,
            eigenvector: v,
            residual: res,
            iterations: steps,
            converged: res <= 1e-6 * lambda.abs().max(1.0),
            bracket: (lo, hi),
        },
        constraint_violation: violation,
        constraint_overlap: overlap,
        unconstrained: (first.lambda_min, 0.5 * (l2_lo + l2_hi)),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v ← v − (gᵀv / gᵀB⁻¹g) B⁻¹g`, the `B`-orthogonal projection onto `gᵀv = 0`.
fn project_out(p: &TridiagPencil, g: &[f64], v: &mut [f64]) -> Result<()> {
    let binv_g = solve_spd_tridiag(&p.b_diag, &p.b_off, g);
    let denom = dot(g, &binv_g);
    if denom <= 0.0 {
        return Err(Error::IllConditioned("B is not positive definite".into()));
    }
    let coef = dot(g, v) / denom;
    v.iter_mut().zip(&binv_g).for_each(|(vi, w)| *vi -= coef * w);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_pencil(n: usize, h: f64, q: f64) -> TridiagPencil {
        TridiagPencil {
            a_diag: vec![2.0 / h + q * h; n],
            a_off: vec![-1.0 / h; n - 1],
            b_diag: vec![h; n],
            b_off: vec![0.0; n - 1],
        }
    }

    /// Dense symmetric eigenvalues via cyclic Jacobi rotations (test oracle).
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn identity_pencil() {
        let n = 10;
        let p = TridiagPencil {
            a_diag: vec![1.0; n],
            a_off: vec![0.0; n - 1],
            b_diag: vec![1.0; n],
            b_off: vec![0.0; n - 1],
        };
        let r = min_eigenvalue(&p, BISECTION_TOL).unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_laplacian_closed_form() {
        let n = 199;
        let t = 5.0;
        let h = 2.0 * t / (n + 1) as f64;
        let p = laplacian_pencil(n, h, 0.0);
        let r = min_eigenvalue(&p, BISECTION_TOL).unwrap();
        let discrete = 4.0 / (h * h) * (std::f64::consts::PI * h / (4.0 * t)).sin().powi(2);
        assert!((r.lambda_min - discrete).abs() < 1e-11);
        assert!(r.converged);
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn dense_cross_check_small() {
        // variable coefficients so the test is not trivially Toeplitz
        let n = 50;
        let a_diag: Vec<f64> = (0..n).map(|i| 3.0 + (i as f64 * 0.37).sin()).collect();
        let a_off: Vec<f64> = (0..n - 1).map(|i| -1.0 + 0.2 * (i as f64 * 0.11).cos()).collect();
        let b_diag: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 / (1.0 + i as f64)).collect();
        let p = TridiagPencil {
            a_diag: a_diag.clone(),
            a_off: a_off.clone(),
            b_diag: b_diag.clone(),
            b_off: vec![0.0; n - 1],
        };
        // B^{-1/2} A B^{-1/2}
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = a_diag[i] / b_diag[i];
            if i + 1 < n {
                let v = a_off[i] / (b_diag[i] * b_diag[i + 1]).sqrt();
                dense[i][i + 1] = v;
                dense[i + 1][i] = v;
            }
        }
        let ev = jacobi_eigenvalues(dense);
        let r = min_eigenvalue(&p, BISECTION_TOL).unwrap();
        assert!((r.lambda_min - ev[0]).abs() < 1e-10, "{} vs {}", r.lambda_min, ev[0]);
        let second = eigenpair(&p, 1, BISECTION_TOL).unwrap();
        assert!((second.lambda_min - ev[1]).abs() < 1e-10);
        assert!(second.residual < 1e-6);
        for (i, &e) in ev.iter().enumerate() {
            assert_eq!(sturm_count(&p, e - 1e-9), i);
        }
    }

    #[test]
    fn pivoting_solver_matches_dense() {
        let sub = [1.0, 4.0, -2.0];
        let diag = [1e-14, 2.0, -1.0, 3.0];
        let sup = [2.0, 1.0, 0.5];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let mut rhs = [0.0; 4];
        for i in 0..4 {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += sub[i - 1] * x_true[i - 1];
            }
            if i < 3 {
                rhs[i] += sup[i] * x_true[i + 1];
            }
        }
        let x = solve_tridiag_pivoting(&sub, &diag, &sup, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constrained_against_dense_null_space() {
        // Build the constrained problem densely: eliminate v_p via the constraint.
        let n = 30;
        let h = 0.2;
        let p = laplacian_pencil(n, h, 0.3);
        let g: Vec<f64> = (0..n)
            .map(|i| {
                if (10..15).contains(&i) {
                    1.0 + i as f64 * 0.1
                } else {
                    0.0
                }
            })
            .collect();
        let c = constrained_min_eigenvalue(&p, &g, BISECTION_TOL).unwrap();
        assert!(c.constraint_violation < 1e-12);

        // Oracle: minimize over an orthonormal basis Z of g^⊥ (B = hI).
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let gn = norm(&g);
        let gu: Vec<f64> = g.iter().map(|x| x / gn).collect();
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            let proj = dot(&gu, &e);
            e.iter_mut().zip(&gu).for_each(|(x, gi)| *x -= proj * gi);
            for q in &basis {
                let pr = dot(q, &e);
                e.iter_mut().zip(q).for_each(|(x, qi)| *x -= pr * qi);
            }
            let en = norm(&e);
            if en > 1e-8 {
                basis.push(e.iter().map(|x| x / en).collect());
            }
        }
        assert_eq!(basis.len(), n - 1);
        let m = basis.len();
        let mut dense = vec![vec![0.0; m]; m];
        for i in 0..m {
            let ai = p.apply_a(&basis[i]);
            for j in 0..m {
                dense[i][j] = dot(&basis[j], &ai) / h;
            }
        }
        let ev = jacobi_eigenvalues(dense);
        assert!(
            (c.result.lambda_min - ev[0]).abs() < 1e-9,
            "{} vs {}",
            c.result.lambda_min,
            ev[0]
        );
        assert!(c.result.lambda_min > c.unconstrained.0 && c.result.lambda_min <= c.unconstrained.1);
    }

    #[test]
    fn constraint_orthogonal_to_minimizer() {
        // antisymmetric constraint: the symmetric ground state already satisfies it
        let n = 41;
        let p = laplacian_pencil(n, 0.1, 0.0);
        let g: Vec<f64> = (0..n).map(|i| i as f64 - 20.0).collect();
        let c = constrained_min_eigenvalue(&p, &g, BISECTION_TOL).unwrap();
        let u = min_eigenvalue(&p, BISECTION_TOL).unwrap();
        assert!((c.result.lambda_min - u.lambda_min).abs() < 1e-10);
        assert!(c.constraint_overlap < 1e-12);
    }

    #[test]
    fn zero_constraint_rejected() {
        let p = laplacian_pencil(5, 0.1, 0.0);
        assert!(constrained_min_eigenvalue(&p, &[0.0; 5], BISECTION_TOL).is_err());
        assert!(constrained_min_eigenvalue(&p, &[1.0; 4], BISECTION_TOL).is_err());
    }
}
