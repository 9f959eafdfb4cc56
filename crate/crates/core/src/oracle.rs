//! Cartesian quadrature cross-checks.
//!
//! [`qb_cartesian`] differentiates lattice samples of `u` by central
//! differences and sums `r^{-b}|(σ·∇)u|² h^n`; [`qb_polar`] integrates the
//! one-mode radial formula with Gauss-Legendre panels and the closed-form
//! `f'`. The two share no differentiation or quadrature code.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::sphere::SphereGrid;
use crate::angular::{cq_to_f64, AngularSpectrum, NumericPolySpinor, PolySpinor};
use crate::clifford::CliffordRep;
use crate::constants::{potential_coefficient, sobolev_exponents};
use crate::error::{Error, Result};
use crate::profile::{PolyBump, Profile};
use crate::report::{CaseRecord, VerificationReport};
use crate::stats::{log_log_slope, pairwise_sum, relative_difference};

/// Cell-centred lattice covering the ball of radius `r_outer`; samples are
/// taken at `((i + 1/2) − M/2) h`, so the origin is never a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    pub n: usize,
    pub r_inner: f64,
    pub r_outer: f64,
    pub h: f64,
}

impl AnnulusGrid {
    pub fn new(n: usize, r_inner: f64, r_outer: f64, h: f64) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(Error::InvalidInput(format!(
                "Cartesian grids support n ∈ {{2, 3}}, got {n}"
            )));
        }
        if !(r_inner > 0.0 && r_inner < r_outer && r_outer.is_finite()) {
            return Err(Error::InvalidInput(format!("bad annulus ({r_inner}, {r_outer})")));
        }
        if !(h > 0.0 && h < (r_outer - r_inner) / 10.0) {
            return Err(Error::InvalidInput(format!(
                "spacing {h} must be below a tenth of the annulus width"
            )));
        }
        Ok(Self { n, r_inner, r_outer, h })
    }

    /// Cells per axis (even).
    pub fn cells(&self) -> usize {
        2 * ((self.r_outer + 2.0 * self.h) / self.h).ceil() as usize
    }

    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 + 0.5 - (self.cells() / 2) as f64) * self.h
    }

    /// Lattice points strictly inside the annulus.
    pub fn interior_count(&self) -> usize {
        let m = self.cells();
        let (lo2, hi2) = (self.r_inner.powi(2), self.r_outer.powi(2));
        let c: Vec<f64> = (0..m).map(|i| self.coord(i)).collect();
        let mut count = 0;
        let zs: &[f64] = if self.n == 3 { &c } else { &[0.0] };
        for z in zs {
            for y in &c {
                for x in &c {
                    let r2 = x * x + y * y + z * z;
                    if r2 > lo2 && r2 < hi2 {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

/// `Γ(m/2)` for a positive integer `m`.
fn gamma_half(m: u32) -> f64 {
    if m % 2 == 0 {
        (1..m / 2).map(f64::from).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// `∫_{S^{n−1}} x^α dω`.
pub fn sphere_monomial_integral(alpha: &[u32]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let n = alpha.len() as u32;
    let total: u32 = alpha.iter().sum();
    2.0 * alpha.iter().map(|&a| gamma_half(a + 1)).product::<f64>() / gamma_half(total + n)
}

/// `∫_{S^{n−1}} |p|² dω` from exact monomial moments.
pub fn sphere_norm_sq(p: &PolySpinor) -> f64 {
    let terms: Vec<(&Vec<u32>, Vec<Complex64>)> = p
        .terms()
        .iter()
        .map(|(a, v)| (a, v.iter().map(cq_to_f64).collect()))
        .collect();
    let mut total = 0.0;
    for (a, va) in &terms {
        for (b, vb) in &terms {
            let sum: Vec<u32> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
            let moment = sphere_monomial_integral(&sum);
            if moment == 0.0 {
                continue;
            }
            let dot: f64 = va.iter().zip(vb).map(|(x, y)| (x.conj() * y).re).sum();
            total += dot * moment;
        }
    }
    total
}

/// `u = f(r) ψ_k(ω)` with `ψ_k = p / ‖p‖_{S^{n−1}}` for an exact homogeneous
/// eigenspinor `p` of `L`.
#[derive(Clone, Debug)]
pub struct SeparableTestFunction {
    pub profile: Profile,
    pub k: i64,
    pub n: usize,
    pub m: usize,
    pub degree: u32,
    pub sphere_norm: f64,
    psi: NumericPolySpinor,
}

impl SeparableTestFunction {
    /// Uses `eigenbasis[index]` of the `k` entry of `spec`.
    pub fn from_spectrum(spec: &AngularSpectrum, k: i64, index: usize, profile: impl Into<Profile>) -> Result<Self> {
        let entry = spec.entry(k).ok_or(Error::ModeNotInSpectrum(k))?;
        let p = entry.eigenbasis.get(index).ok_or_else(|| {
            Error::InvalidInput(format!(
                "mode {k} has {} basis spinors, asked for {index}",
                entry.multiplicity
            ))
        })?;
        Self::new(p, k, profile)
    }

    pub fn new(p: &PolySpinor, k: i64, profile: impl Into<Profile>) -> Result<Self> {
        let degree = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        let norm2 = sphere_norm_sq(p);
        if !(norm2 > 0.0) {
            return Err(Error::InvalidInput("angular factor vanishes on the sphere".into()));
        }
        Ok(Self {
            profile: profile.into(),
            k,
            n: p.n(),
            m: p.m(),
            degree,
            sphere_norm: norm2.sqrt(),
            psi: p.to_numeric(),
        })
    }

    pub fn with_profile(&self, profile: impl Into<Profile>) -> Self {
        Self {
            profile: profile.into(),
            ..self.clone()
        }
    }

    /// `ψ_k(x/|x|)`, written into `out`.
    pub fn angular_into(&self, x: &[f64], r: f64, out: &mut [Complex64]) {
        self.psi.eval_into(x, out);
        let s = 1.0 / (r.powi(self.degree as i32) * self.sphere_norm);
        out.iter_mut().for_each(|o| *o *= s);
    }
}

/// A spinor field that can be sampled pointwise.
pub trait SpinorField {
    fn n(&self) -> usize;
    fn m(&self) -> usize;
    /// Closed radial interval outside which the field vanishes.
    fn support(&self) -> (f64, f64);
    /// `u(x)` with `r = |x|`, written into `out`.
    fn eval_into(&self, x: &[f64], r: f64, out: &mut [Complex64]);
}

impl SpinorField for SeparableTestFunction {
    fn n(&self) -> usize {
        self.n
    }
    fn m(&self) -> usize {
        self.m
    }
    fn support(&self) -> (f64, f64) {
        self.profile.support()
    }
    fn eval_into(&self, x: &[f64], r: f64, out: &mut [Complex64]) {
        let f = self.profile.value(r);
        if f == 0.0 {
            out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
            return;
        }
        self.angular_into(x, r, out);
        out.iter_mut().for_each(|o| *o *= f);
    }
}

/// Sum of separable terms.
#[derive(Clone, Debug)]
pub struct ModeSum(pub Vec<SeparableTestFunction>);

impl SpinorField for ModeSum {
    fn n(&self) -> usize {
        self.0[0].n
    }
    fn m(&self) -> usize {
        self.0[0].m
    }
    fn support(&self) -> (f64, f64) {
        self.0
            .iter()
            .map(|t| t.support())
            .fold((f64::INFINITY, 0.0), |(a, b), (c, d)| (a.min(c), b.max(d)))
    }
    fn eval_into(&self, x: &[f64], r: f64, out: &mut [Complex64]) {
        let mut tmp = vec![Complex64::new(0.0, 0.0); out.len()];
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for t in &self.0 {
            t.eval_into(x, r, &mut tmp);
            out.iter_mut().zip(&tmp).for_each(|(o, v)| *o += v);
        }
    }
}

fn check_support(u: &impl SpinorField, grid: &AnnulusGrid) -> Result<()> {
    let (lo, hi) = u.support();
    if lo < grid.r_inner || hi > grid.r_outer {
        return Err(Error::SupportViolation {
            lo,
            hi,
            inner: grid.r_inner,
            outer: grid.r_outer,
        });
    }
    Ok(())
}

/// Lattice samples of `u` on the plane `z = coord(iz)` (`n = 3`) or the
/// whole lattice (`n = 2`), node-major with `m` components.
fn sample_plane(u: &impl SpinorField, grid: &AnnulusGrid, coords: &[f64], z: Option<f64>, out: &mut [Complex64]) {
    let mc = coords.len();
    let m = u.m();
    let (lo, hi) = u.support();
    let (lo2, hi2) = (lo * lo, hi * hi);
    let zz = z.unwrap_or(0.0);
    let mut x = vec![0.0; grid.n];
    for (iy, &y) in coords.iter().enumerate() {
        for (ix, &xc) in coords.iter().enumerate() {
            let base = (iy * mc + ix) * m;
            let r2 = xc * xc + y * y + zz * zz;
            let slot = &mut out[base..base + m];
            if r2 <= lo2 || r2 >= hi2 {
                slot.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
                continue;
            }
            x[0] = xc;
            x[1] = y;
            if let Some(z) = z {
                x[2] = z;
            }
            u.eval_into(&x, r2.sqrt(), slot);
        }
    }
}

/// `Q_b(u) = ∫ r^{-b} |(σ·∇)u|² dx` for several `b` at once.
pub fn qb_cartesian_multi(rep: &CliffordRep, u: &impl SpinorField, bs: &[f64], grid: &AnnulusGrid) -> Result<Vec<f64>> {
    if rep.n() != grid.n || u.n() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            found: u.n(),
        });
    }
    if rep.m() != u.m() {
        return Err(Error::DimensionMismatch {
            expected: rep.m(),
            found: u.m(),
        });
    }
    check_support(u, grid)?;
    let n = grid.n;
    let m = u.m();
    let mc = grid.cells();
    let h = grid.h;
    let coords: Vec<f64> = (0..mc).map(|i| grid.coord(i)).collect();
    let sigma: Vec<Vec<Complex64>> = rep.generators().iter().map(|g| g.to_complex()).collect();
    let (lo, hi) = u.support();
    // Du vanishes unless a neighbour lies in the support
    let (dlo2, dhi2) = ((lo - h).max(0.0).powi(2), (hi + h).powi(2));
    let plane = mc * mc * m;
    let cell = h.powi(n as i32);

    let mut row_sums: Vec<Vec<f64>> = vec![Vec::new(); bs.len()];
    let mut du = vec![Complex64::new(0.0, 0.0); m];
    let mut diff = vec![Complex64::new(0.0, 0.0); m];

    // accumulate |Du|² over interior nodes of one plane
    let mut plane_pass = |below: Option<&[Complex64]>, cur: &[Complex64], above: Option<&[Complex64]>, z: f64| {
        for iy in 1..mc - 1 {
            let y = coords[iy];
            let mut acc = vec![0.0; bs.len()];
            for ix in 1..mc - 1 {
                let xc = coords[ix];
                let r2 = xc * xc + y * y + z * z;
                if r2 <= dlo2 || r2 >= dhi2 {
                    continue;
                }
                du.iter_mut().for_each(|d| *d = Complex64::new(0.0, 0.0));
                let idx = (iy * mc + ix) * m;
                for axis in 0..n {
                    let (plus, minus): (&[Complex64], &[Complex64]) = match axis {
                        0 => (&cur[idx + m..idx + 2 * m], &cur[idx - m..idx]),
                        1 => (
                            &cur[idx + mc * m..idx + mc * m + m],
                            &cur[idx - mc * m..idx - mc * m + m],
                        ),
                        _ => (&above.unwrap()[idx..idx + m], &below.unwrap()[idx..idx + m]),
                    };
                    for c in 0..m {
                        diff[c] = (plus[c] - minus[c]) / (2.0 * h);
                    }
                    let s = &sigma[axis];
                    for row in 0..m {
                        let mut v = Complex64::new(0.0, 0.0);
                        for col in 0..m {
                            v += s[row * m + col] * diff[col];
                        }
                        du[row] += v;
                    }
                }
                let mag: f64 = du.iter().map(|d| d.norm_sqr()).sum();
                if mag == 0.0 {
                    continue;
                }
                let r = r2.sqrt();
                for (a, &b) in acc.iter_mut().zip(bs) {
                    *a += r.powf(-b) * mag;
                }
            }
            for (sums, a) in row_sums.iter_mut().zip(acc) {
                sums.push(a);
            }
        }
    };

    if n == 2 {
        let mut cur = vec![Complex64::new(0.0, 0.0); plane];
        sample_plane(u, grid, &coords, None, &mut cur);
        plane_pass(None, &cur, None, 0.0);
    } else {
        let mut below = vec![Complex64::new(0.0, 0.0); plane];
        let mut cur = vec![Complex64::new(0.0, 0.0); plane];
        let mut above = vec![Complex64::new(0.0, 0.0); plane];
        sample_plane(u, grid, &coords, Some(coords[0]), &mut below);
        sample_plane(u, grid, &coords, Some(coords[1]), &mut cur);
        for iz in 1..mc - 1 {
            sample_plane(u, grid, &coords, Some(coords[iz + 1]), &mut above);
            if coords[iz].abs() < hi + h {
                plane_pass(Some(&below), &cur, Some(&above), coords[iz]);
            }
            std::mem::swap(&mut below, &mut cur);
            std::mem::swap(&mut cur, &mut above);
        }
    }
    Ok(row_sums.iter().map(|s| pairwise_sum(s) * cell).collect())
}

pub fn qb_cartesian(rep: &CliffordRep, u: &impl SpinorField, b: f64, grid: &AnnulusGrid) -> Result<f64> {
    Ok(qb_cartesian_multi(rep, u, &[b], grid)?[0])
}

/// Gauss-Legendre panels for the 1-D radial integrals.
const POLAR_PANELS: usize = 64;

/// `∫ r^{n−1−b}(|f'|² + r^{−2}(k² + (b+2−n)k)|f|²) dr`.
pub fn qb_polar(u: &SeparableTestFunction, n: usize, b: f64) -> f64 {
    let pc = potential_coefficient(n, b, u.k);
    let f = &u.profile;
    let nf = n as f64;
    f.integrate(POLAR_PANELS, |r| {
        let v = f.value(r);
        let d = f.derivative(r);
        r.powf(nf - 1.0 - b) * (d * d + pc * v * v / (r * r))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub h: f64,
    pub b: f64,
    pub cartesian: f64,
    pub polar: f64,
    pub rel_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleStudy {
    pub k: i64,
    pub rows: Vec<OracleRow>,
    /// Per `b`: log-log slope of `rel_diff` against `h`.
    pub observed_order: Vec<(f64, Option<f64>)>,
}

/// Mesh-refinement comparison of [`qb_cartesian`] against [`qb_polar`].
pub fn oracle_study(
    rep: &CliffordRep,
    u: &SeparableTestFunction,
    bs: &[f64],
    hs: &[f64],
    annulus: (f64, f64),
) -> Result<OracleStudy> {
    let mut rows = Vec::new();
    for &h in hs {
        let grid = AnnulusGrid::new(u.n, annulus.0, annulus.1, h)?;
        let cart = qb_cartesian_multi(rep, u, bs, &grid)?;
        for (&b, c) in bs.iter().zip(cart) {
            let polar = qb_polar(u, u.n, b);
            rows.push(OracleRow {
                h,
                b,
                cartesian: c,
                polar,
                rel_diff: relative_difference(c, polar),
            });
        }
    }
    let observed_order = bs
        .iter()
        .map(|&b| {
            let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.b == b).map(|r| (r.h, r.rel_diff)).unzip();
            (b, log_log_slope(&x, &y))
        })
        .collect();
    Ok(OracleStudy {
        k: u.k,
        rows,
        observed_order,
    })
}

/// Checks `∫ψ²|∇u|² = ∫(|∇(uψ)|² + (Δψ)ψ|u|²)` for `ψ = |x|^{a/2}` and a
/// radial bump `u`, with `∇u` from central differences and `ψ, ∇ψ, Δψ`
/// analytic. One case per `a`, measuring `|LHS − RHS| / LHS`.
pub fn verify_ckn_identity(
    a_list: &[f64],
    u: &PolyBump,
    grid: &AnnulusGrid,
    tolerance: f64,
) -> Result<VerificationReport> {
    let (lo, hi) = u.support();
    if lo < grid.r_inner || hi > grid.r_outer {
        return Err(Error::SupportViolation {
            lo,
            hi,
            inner: grid.r_inner,
            outer: grid.r_outer,
        });
    }
    let n = grid.n;
    let nf = n as f64;
    let mc = grid.cells();
    let h = grid.h;
    let coords: Vec<f64> = (0..mc).map(|i| grid.coord(i)).collect();
    let (dlo2, dhi2) = ((lo - h).max(0.0).powi(2), (hi + h).powi(2));
    let sample = |z: f64, out: &mut Vec<f64>| {
        for (iy, &y) in coords.iter().enumerate() {
            for (ix, &x) in coords.iter().enumerate() {
                out[iy * mc + ix] = u.value((x * x + y * y + z * z).sqrt());
            }
        }
    };
    let na = a_list.len();
    let mut lhs_rows: Vec<Vec<f64>> = vec![Vec::new(); na];
    let mut rhs_rows: Vec<Vec<f64>> = vec![Vec::new(); na];
    let mut pass = |below: Option<&[f64]>, cur: &[f64], above: Option<&[f64]>, z: f64| {
        for iy in 1..mc - 1 {
            let y = coords[iy];
            let mut l_acc = vec![0.0; na];
            let mut r_acc = vec![0.0; na];
            for ix in 1..mc - 1 {
                let x = coords[ix];
                let r2 = x * x + y * y + z * z;
                if r2 <= dlo2 || r2 >= dhi2 {
                    continue;
                }
                let idx = iy * mc + ix;
                let mut grad = [0.0; 3];
                grad[0] = (cur[idx + 1] - cur[idx - 1]) / (2.0 * h);
                grad[1] = (cur[idx + mc] - cur[idx - mc]) / (2.0 * h);
                if let (Some(b), Some(a)) = (below, above) {
                    grad[2] = (a[idx] - b[idx]) / (2.0 * h);
                }
                let uv = cur[idx];
                let pos = [x, y, z];
                let r = r2.sqrt();
                for (j, &a) in a_list.iter().enumerate() {
                    let e = a / 2.0;
                    let psi = r.powf(e);
                    let radial = e * r.powf(e - 2.0);
                    let lap = e * (e + nf - 2.0) * r.powf(e - 2.0);
                    let mut lhs = 0.0;
                    let mut grad_prod = 0.0;
                    for d in 0..n {
                        lhs += grad[d] * grad[d];
                        let g = psi * grad[d] + uv * radial * pos[d];
                        grad_prod += g * g;
                    }
                    l_acc[j] += psi * psi * lhs;
                    r_acc[j] += grad_prod + lap * psi * uv * uv;
                }
            }
            for j in 0..na {
                lhs_rows[j].push(l_acc[j]);
                rhs_rows[j].push(r_acc[j]);
            }
        }
    };
    let plane = mc * mc;
    if n == 2 {
        let mut cur = vec![0.0; plane];
        sample(0.0, &mut cur);
        pass(None, &cur, None, 0.0);
    } else {
        let mut below = vec![0.0; plane];
        let mut cur = vec![0.0; plane];
        let mut above = vec![0.0; plane];
        sample(coords[0], &mut below);
        sample(coords[1], &mut cur);
        for iz in 1..mc - 1 {
            sample(coords[iz + 1], &mut above);
            if coords[iz].abs() < hi + h {
                pass(Some(&below), &cur, Some(&above), coords[iz]);
            }
            std::mem::swap(&mut below, &mut cur);
            std::mem::swap(&mut cur, &mut above);
        }
    }
    let cell = h.powi(n as i32);
    let mut report = VerificationReport::new("ckn-identity");
    for (j, &a) in a_list.iter().enumerate() {
        let lhs = pairwise_sum(&lhs_rows[j]) * cell;
        let rhs = pairwise_sum(&rhs_rows[j]) * cell;
        let mismatch = if lhs == 0.0 {
            (rhs - lhs).abs()
        } else {
            ((lhs - rhs) / lhs).abs()
        };
        report.push(
            CaseRecord::at_most("ckn_relative_mismatch", mismatch, tolerance)
                .input("a", a)
                .input("n", n)
                .input("h", h)
                .value("lhs", lhs)
                .value("rhs", rhs),
        );
    }
    Ok(report)
}

/// `Q_b(u) / (∫|x|^{−β}|u|^{2*})^{2/2*}` by 1-D radial quadrature and a
/// sphere rule for `∫|ψ|^{2*} dω`.
pub fn sobolev_quotient(u: &SeparableTestFunction, n: usize, b: f64) -> Result<f64> {
    let ex = sobolev_exponents(n, b)?;
    if !ex.hypothesis_c_b_positive {
        return Err(Error::InvalidInput(format!("degenerate (n, b) = ({n}, {b}): c_b = 0")));
    }
    if n != u.n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.n,
        });
    }
    let q = qb_polar(u, n, b);
    // angular factor of ∫|u|^{2*}
    let grid = SphereGrid::new(n, 4 * u.degree as usize + 24)?;
    let angular = grid.integrate(|w| {
        let mut psi = vec![Complex64::new(0.0, 0.0); u.m];
        u.angular_into(w, 1.0, &mut psi);
        let mag: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        mag.powf(ex.two_star / 2.0)
    });
    let nf = n as f64;
    let f = &u.profile;
    let radial = f.integrate(POLAR_PANELS, |r| {
        r.powf(nf - 1.0 - ex.beta) * f.value(r).abs().powf(ex.two_star)
    });
    let denom = (angular * radial).powf(2.0 / ex.two_star);
    if !(denom > 0.0) {
        return Err(Error::InvalidInput("test function vanishes".into()));
    }
    Ok(q / denom)
}

/// `3 (π/2)^{4/3}`, the sharp scalar Sobolev constant in `R^3`.
pub fn sobolev_constant_3d() -> f64 {
    3.0 * (std::f64::consts::PI / 2.0).powf(4.0 / 3.0)
}
