//! Product quadrature on `S^1` and `S^2`, and projection of sampled spinor
//! fields onto the eigenspaces `E_k` of `L`.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use super::poly::NumericPolySpinor;
use super::spectrum::AngularSpectrum;
use crate::error::{Error, Result};

/// Quadrature nodes (unit vectors) and weights on `S^{n−1}`, `n ∈ {2, 3}`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    n: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SphereGrid {
    /// A grid integrating polynomials of total degree `≤ exact_degree`
    /// exactly.
    pub fn new(n: usize, exact_degree: usize) -> Result<Self> {
        use std::f64::consts::PI;
        let n_phi = exact_degree + 1;
        let dphi = 2.0 * PI / n_phi as f64;
        let phis: Vec<f64> = (0..n_phi).map(|j| (j as f64 + 0.5) * dphi).collect();
        match n {
            2 => Ok(Self {
                n,
                points: phis.iter().map(|p| vec![p.cos(), p.sin()]).collect(),
                weights: vec![dphi; n_phi],
            }),
            3 => {
                let n_theta = (exact_degree / 2 + 1).max(2);
                let gl = GaussLegendre::new(n_theta).map_err(|e| Error::InvalidInput(e.to_string()))?;
                let mut points = Vec::with_capacity(n_theta * n_phi);
                let mut weights = Vec::with_capacity(n_theta * n_phi);
                for &(z, w) in gl.as_node_weight_pairs() {
                    let s = (1.0 - z * z).sqrt();
                    for p in &phis {
                        points.push(vec![s * p.cos(), s * p.sin(), z]);
                        weights.push(w * dphi);
                    }
                }
                Ok(Self { n, points, weights })
            }
            _ => Err(Error::InvalidInput(format!(
                "sphere quadrature supports n ∈ {{2, 3}}, got {n}"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }

    /// `⟨f, g⟩ = ∫ Σ_c conj(f_c) g_c dω` for spinor fields sampled
    /// node-major (`values[node * m + c]`).
    pub fn inner(&self, m: usize, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (node, w) in self.weights.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..m {
                s += f[node * m + c].conj() * g[node * m + c];
            }
            acc += s * w;
        }
        acc
    }
}

/// Orthonormal basis (in the grid inner product) of `E_k` restricted to
/// spinors of degree `≤ degree_cap`.
///
/// Eigenvectors of different degrees can coincide on the sphere
/// (`|x|² p` and `p`), so dependent directions are dropped.
#[derive(Clone, Debug)]
pub struct ModeBasis {
    pub k: i64,
    m: usize,
    polys: Vec<(NumericPolySpinor, u32)>,
    /// Row `i` holds the combination of `polys` giving basis function `i`.
    combos: Vec<Vec<Complex64>>,
    /// Grid samples of each basis function.
    samples: Vec<Vec<Complex64>>,
    /// Smallest `‖residual‖ / ‖original‖` among kept directions.
    pub conditioning: f64,
}

const DROP_RATIO: f64 = 1e-8;
const ILL_RATIO: f64 = 1e-4;

impl ModeBasis {
    pub fn build(spec: &AngularSpectrum, grid: &SphereGrid, k: i64) -> Result<Self> {
        if spec.n != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n,
                found: grid.n(),
            });
        }
        let entry = spec.entry(k).ok_or(Error::ModeNotInSpectrum(k))?;
        let m = spec.m;
        let polys: Vec<(NumericPolySpinor, u32)> = entry
            .eigenbasis
            .iter()
            .map(|p| (p.to_numeric(), p.homogeneous_degree().unwrap_or(0)))
            .collect();

        let raw: Vec<Vec<Complex64>> = polys
            .iter()
            .map(|(p, _)| {
                let mut v = Vec::with_capacity(grid.len() * m);
                for x in grid.points() {
                    v.extend(p.eval(x));
                }
                v
            })
            .collect();

        let mut combos: Vec<Vec<Complex64>> = Vec::new();
        let mut samples: Vec<Vec<Complex64>> = Vec::new();
        let mut conditioning = f64::INFINITY;
        for (j, v) in raw.iter().enumerate() {
            let norm0 = grid.inner(m, v, v).re.sqrt();
            if norm0 == 0.0 {
                continue;
            }
            let mut w = v.clone();
            let mut combo = vec![Complex64::new(0.0, 0.0); polys.len()];
            combo[j] = Complex64::new(1.0, 0.0);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for (q, qc) in samples.iter().zip(&combos) {
                    let proj = grid.inner(m, q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= proj * qi;
                    }
                    for (ci, qci) in combo.iter_mut().zip(qc) {
                        *ci -= proj * qci;
                    }
                }
            }
            let norm = grid.inner(m, &w, &w).re.sqrt();
            let ratio = norm / norm0;
            if ratio < DROP_RATIO {
                continue;
            }
            if ratio < ILL_RATIO {
                return Err(Error::IllConditioned(format!(
                    "E_{k} basis direction {j} has residual ratio {ratio:.3e}"
                )));
            }
            conditioning = conditioning.min(ratio);
            w.iter_mut().for_each(|x| *x /= norm);
            combo.iter_mut().for_each(|x| *x /= norm);
            samples.push(w);
            combos.push(combo);
        }
        Ok(Self {
            k,
            m,
            polys,
            combos,
            samples,
            conditioning,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid_samples(&self, i: usize) -> &[Complex64] {
        &self.samples[i]
    }

    /// Basis function `i` at a nonzero point, using its angular part `x/|x|`.
    pub fn eval(&self, i: usize, x: &[f64]) -> Vec<Complex64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.m];
        for ((p, _), c) in self.polys.iter().zip(&self.combos[i]) {
            if c.norm() == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(p.eval(&unit)) {
                *o += c * v;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ModeProjection {
    pub basis: ModeBasis,
    /// `coefficients[radial sample][basis element]`.
    pub coefficients: Vec<Vec<Complex64>>,
}

/// Projects sphere samples of `u(r_s, ·)` (one node-major vector per radial
/// sample) onto `E_k`.
pub fn mode_project(
    spec: &AngularSpectrum,
    grid: &SphereGrid,
    samples: &[Vec<Complex64>],
    k: i64,
) -> Result<ModeProjection> {
    let basis = ModeBasis::build(spec, grid, k)?;
    let expected = grid.len() * spec.m;
    let coefficients = samples
        .iter()
        .map(|s| {
            if s.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: s.len(),
                });
            }
            Ok((0..basis.len())
                .map(|i| grid.inner(spec.m, basis.grid_samples(i), s))
                .collect())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    Ok(ModeProjection { basis, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::spectrum_bruteforce;
    use crate::clifford::build_generators;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        let g2 = SphereGrid::new(2, 8).unwrap();
        assert!((g2.integrate(|_| 1.0) - 2.0 * PI).abs() < 1e-13);
        let g3 = SphereGrid::new(3, 8).unwrap();
        assert!((g3.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-13);
        // ∫ z² = 4π/3, ∫ x²y² = 4π/15
        assert!((g3.integrate(|p| p[2] * p[2]) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((g3.integrate(|p| p[0] * p[0] * p[1] * p[1]) - 4.0 * PI / 15.0).abs() < 1e-13);
        assert!(SphereGrid::new(4, 4).is_err());
    }

    fn setup(n: usize, cap: u32) -> (AngularSpectrum, SphereGrid) {
        let rep = build_generators(n).unwrap();
        let spec = spectrum_bruteforce(&rep, cap, 2000).unwrap();
        let grid = SphereGrid::new(n, 2 * cap as usize + 4).unwrap();
        (spec, grid)
    }

    #[test]
    fn reproducing_property() {
        let (spec, grid) = setup(3, 3);
        let basis = ModeBasis::build(&spec, &grid, -1).unwrap();
        assert!(!basis.is_empty());
        for i in 0..basis.len() {
            let proj = mode_project(&spec, &grid, &[basis.grid_samples(i).to_vec()], -1).unwrap();
            for (j, c) in proj.coefficients[0].iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degree_duplicates_are_dropped() {
        // k = −1 appears at degree 1 and again as |x|² × (degree 1) at degree 3.
        let (spec, grid) = setup(3, 3);
        let entry = spec.entry(-1).unwrap();
        let basis = ModeBasis::build(&spec, &grid, -1).unwrap();
        assert!(basis.len() < entry.multiplicity);
        assert!(basis.conditioning > ILL_RATIO);
    }

    #[test]
    fn distinct_modes_do_not_leak() {
        let (spec, grid) = setup(3, 2);
        let a = ModeBasis::build(&spec, &grid, -1).unwrap();
        let b = ModeBasis::build(&spec, &grid, 2).unwrap();
        let u: Vec<Complex64> = a
            .grid_samples(0)
            .iter()
            .zip(b.grid_samples(0))
            .map(|(x, y)| x + y)
            .collect();
        let pa = mode_project(&spec, &grid, std::slice::from_ref(&u), -1).unwrap();
        let pb = mode_project(&spec, &grid, &[u], 2).unwrap();
        assert!((pa.coefficients[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((pb.coefficients[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for c in pa.coefficients[0]
            .iter()
            .skip(1)
            .chain(pb.coefficients[0].iter().skip(1))
        {
            assert!(c.norm() < 1e-12);
        }
    }

    #[test]
    fn separable_radial_profile_is_recovered() {
        let (spec, grid) = setup(2, 2);
        let k = 1;
        let basis = ModeBasis::build(&spec, &grid, k).unwrap();
        let f = |r: f64| r * r * (2.0 - r) * (2.0 - r);
        let radii: Vec<f64> = (0..=10).map(|i| 1.0 + i as f64 / 10.0).collect();
        let samples: Vec<Vec<Complex64>> = radii
            .iter()
            .map(|&r| {
                let mut v = Vec::new();
                for x in grid.points() {
                    let pt: Vec<f64> = x.iter().map(|c| c * r).collect();
                    v.extend(basis.eval(0, &pt).into_iter().map(|z| z * f(r)));
                }
                v
            })
            .collect();
        let proj = mode_project(&spec, &grid, &samples, k).unwrap();
        for (r, c) in radii.iter().zip(&proj.coefficients) {
            assert!((c[0].re - f(*r)).abs() < 1e-12, "r = {r}");
            assert!(c[0].im.abs() < 1e-12);
        }
    }

    #[test]
    fn missing_mode_is_an_error() {
        let (spec, grid) = setup(3, 1);
        assert!(matches!(
            mode_project(&spec, &grid, &[], 1),
            Err(Error::ModeNotInSpectrum(1))
        ));
    }
}
