//! Hermitian generators of the Clifford relations `σ_iσ_j + σ_jσ_i = 2δ_ij I`.
//!
//! Generators are built by tensor-product doubling from the Pauli pair, so
//! every entry lies in `{0, ±1, ±i}` and all identity checks run in exact
//! Gaussian-integer arithmetic. `n = 3` returns the Pauli matrices verbatim
//! and `n = 1` returns the `1×1` identity.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CaseRecord, VerificationReport};

pub type GaussInt = Complex<i64>;

const ZERO: GaussInt = Complex::new(0, 0);
const ONE: GaussInt = Complex::new(1, 0);
const I: GaussInt = Complex::new(0, 1);

/// Dense square matrix over the Gaussian integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussMatrix {
    dim: usize,
    entries: Vec<GaussInt>,
}

impl GaussMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[GaussInt]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn from_entries(dim: usize, entries: Vec<GaussInt>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[GaussInt] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out[(i * other.dim + k, j * other.dim + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: GaussInt) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| e * s).collect(),
        }
    }

    /// Largest `|re|` or `|im|` over all entries.
    pub fn max_abs_entry(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.re.abs().max(e.im.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == ZERO)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|e| Complex64::new(e.re as f64, e.im as f64))
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for GaussMatrix {
    type Output = GaussInt;
    fn index(&self, (i, j): (usize, usize)) -> &GaussInt {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GaussMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussInt {
        &mut self.entries[i * self.dim + j]
    }
}

impl std::ops::Mul for &GaussMatrix {
    type Output = GaussMatrix;
    fn mul(self, rhs: &GaussMatrix) -> GaussMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = GaussMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * rhs.entries[k * d + j];
                }
            }
        }
        out
    }
}

impl std::ops::Add for &GaussMatrix {
    type Output = GaussMatrix;
    fn add(self, rhs: &GaussMatrix) -> GaussMatrix {
        assert_eq!(self.dim, rhs.dim);
        GaussMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &GaussMatrix {
    type Output = GaussMatrix;
    fn sub(self, rhs: &GaussMatrix) -> GaussMatrix {
        assert_eq!(self.dim, rhs.dim);
        GaussMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn pauli_x() -> GaussMatrix {
    GaussMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn pauli_y() -> GaussMatrix {
    GaussMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn pauli_z() -> GaussMatrix {
    GaussMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// Hermitian anticommuting generators `σ_1..σ_n` of size `m × m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordRep {
    n: usize,
    m: usize,
    generators: Vec<GaussMatrix>,
}

/// Spinor dimension produced by [`build_generators`].
///
/// `2^(n/2)` for even `n`, `2^((n+1)/2)` for odd `n ≥ 5`; the conventional
/// `n = 1` (scalar `+1`) and `n = 3` (Pauli) representations are smaller.
pub fn spinor_dimension(n: usize) -> usize {
    match n {
        0 => 0,
        1 => 1,
        3 => 2,
        _ => 1 << n.div_ceil(2),
    }
}

/// Even-dimensional generators of size `2^(n/2)`:
/// `gens(2) = [X, Y]`, `gens(2k+2) = [X⊗I, Y⊗I] ∪ {Z⊗g : g ∈ gens(2k)}`.
fn even_generators(n: usize) -> Vec<GaussMatrix> {
    debug_assert!(n >= 2 && n % 2 == 0);
    if n == 2 {
        return vec![pauli_x(), pauli_y()];
    }
    let inner = even_generators(n - 2);
    let id = GaussMatrix::identity(inner[0].dim());
    let z = pauli_z();
    let mut out = vec![pauli_x().kron(&id), pauli_y().kron(&id)];
    out.extend(inner.iter().map(|g| z.kron(g)));
    out
}

pub fn build_generators(n: usize) -> Result<CliffordRep> {
    let generators = match n {
        0 => return Err(Error::InvalidInput("dimension n must be at least 1".into())),
        1 => vec![GaussMatrix::identity(1)],
        3 => vec![pauli_x(), pauli_y(), pauli_z()],
        _ if n % 2 == 0 => even_generators(n),
        _ => {
            let mut g = even_generators(n + 1);
            g.truncate(n);
            g
        }
    };
    let m = generators[0].dim();
    debug_assert_eq!(m, spinor_dimension(n));
    Ok(CliffordRep { n, m, generators })
}

impl CliffordRep {
    /// Wraps caller-supplied matrices without checking the relations; use
    /// [`verify_clifford`] to validate.
    pub fn from_generators(generators: Vec<GaussMatrix>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::InvalidInput("at least one generator required".into()));
        }
        let m = generators[0].dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: g.dim(),
            });
        }
        Ok(Self { n, m, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[GaussMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &GaussMatrix {
        &self.generators[i]
    }

    /// `σ_j σ_k` for every pair `j < k`, in lexicographic order.
    pub fn bivectors(&self) -> Vec<((usize, usize), GaussMatrix)> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for k in j + 1..self.n {
                out.push(((j, k), &self.generators[j] * &self.generators[k]));
            }
        }
        out
    }

    pub fn to_json_value(&self) -> CliffordJson {
        CliffordJson {
            n: self.n,
            m: self.m,
            generators: self
                .generators
                .iter()
                .map(|g| g.entries().iter().map(|e| [e.re, e.im]).collect())
                .collect(),
        }
    }

    pub fn from_json_value(json: &CliffordJson) -> Result<Self> {
        let m = json.m;
        let generators = json
            .generators
            .iter()
            .map(|g| {
                if g.len() != m * m {
                    return Err(Error::DimensionMismatch {
                        expected: m * m,
                        found: g.len(),
                    });
                }
                Ok(GaussMatrix::from_entries(
                    m,
                    g.iter().map(|[re, im]| Complex::new(*re, *im)).collect(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        if generators.len() != json.n {
            return Err(Error::DimensionMismatch {
                expected: json.n,
                found: generators.len(),
            });
        }
        Self::from_generators(generators)
    }
}

/// Wire format: `{"n":…, "m":…, "generators":[[[re,im],…],…]}`, each
/// generator flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordJson {
    pub n: usize,
    pub m: usize,
    pub generators: Vec<Vec<[i64; 2]>>,
}

pub fn verify_clifford(rep: &CliffordRep) -> VerificationReport {
    let id = GaussMatrix::identity(rep.m);
    let two_id = id.scale(Complex::new(2, 0));
    let mut anticomm_dev = 0i64;
    let mut worst_pair = (0, 0);
    for i in 0..rep.n {
        for j in i..rep.n {
            let (a, b) = (&rep.generators[i], &rep.generators[j]);
            let mut s = &(a * b) + &(b * a);
            if i == j {
                s = &s - &two_id;
            }
            let dev = s.max_abs_entry();
            if dev > anticomm_dev {
                anticomm_dev = dev;
                worst_pair = (i + 1, j + 1);
            }
        }
    }
    let herm_dev = rep
        .generators
        .iter()
        .map(|g| (g - &g.adjoint()).max_abs_entry())
        .max()
        .unwrap_or(0);

    VerificationReport::from_cases(
        format!("verify_clifford n={}", rep.n),
        vec![
            CaseRecord::at_most("anticommutator_deviation", anticomm_dev as f64, 0.0)
                .input("n", rep.n)
                .input("m", rep.m)
                .value("pairs_checked", rep.n * (rep.n + 1) / 2)
                .value("worst_pair", vec![worst_pair.0, worst_pair.1]),
            CaseRecord::at_most("hermiticity_deviation", herm_dev as f64, 0.0)
                .input("n", rep.n)
                .input("m", rep.m),
        ],
    )
}

/// `(x̂·σ) = Σ_i (x_i/|x|) σ_i` as a row-major complex `m × m` matrix.
pub fn radial_projection(rep: &CliffordRep, x: &[f64]) -> Result<Vec<Complex64>> {
    if x.len() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            found: x.len(),
        });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidInput("radial projection needs x ≠ 0".into()));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); rep.m * rep.m];
    for (xi, g) in x.iter().zip(&rep.generators) {
        let w = xi / norm;
        for (o, e) in out.iter_mut().zip(g.entries()) {
            *o += Complex64::new(e.re as f64 * w, e.im as f64 * w);
        }
    }
    Ok(out)
}

/// Exact `(x·σ)` for an integer point; `(x·σ)² = |x|² I`.
pub fn radial_projection_exact(rep: &CliffordRep, x: &[i64]) -> Result<GaussMatrix> {
    if x.len() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            found: x.len(),
        });
    }
    if x.iter().all(|&v| v == 0) {
        return Err(Error::InvalidInput("radial projection needs x ≠ 0".into()));
    }
    let mut out = GaussMatrix::zeros(rep.m);
    for (&xi, g) in x.iter().zip(&rep.generators) {
        out = &out + &g.scale(Complex::new(xi, 0));
    }
    Ok(out)
}

#[cfg(test)]
/// Dense complex product of two row-major `d × d` matrices.
pub(crate) fn cmatmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> GaussInt {
        Complex::new(re, im)
    }

    #[test]
    fn n3_is_pauli() {
        let rep = build_generators(3).unwrap();
        assert_eq!(rep.m(), 2);
        assert_eq!(
            rep.generator(0),
            &GaussMatrix::from_rows(&[&[c(0, 0), c(1, 0)], &[c(1, 0), c(0, 0)]])
        );
        assert_eq!(
            rep.generator(1),
            &GaussMatrix::from_rows(&[&[c(0, 0), c(0, -1)], &[c(0, 1), c(0, 0)]])
        );
        assert_eq!(
            rep.generator(2),
            &GaussMatrix::from_rows(&[&[c(1, 0), c(0, 0)], &[c(0, 0), c(-1, 0)]])
        );
        assert!(verify_clifford(&rep).passed());
    }

    #[test]
    fn n2_is_first_two_pauli() {
        let rep = build_generators(2).unwrap();
        assert_eq!(rep.generators(), &[pauli_x(), pauli_y()]);
    }

    #[test]
    fn n1_is_scalar_identity() {
        let rep = build_generators(1).unwrap();
        assert_eq!(rep.m(), 1);
        assert_eq!(rep.generator(0), &GaussMatrix::identity(1));
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(build_generators(0).is_err());
    }

    #[test]
    fn n5_and_n8_are_exact() {
        let r5 = build_generators(5).unwrap();
        assert_eq!(r5.m(), 8);
        let rep = verify_clifford(&r5);
        assert!(rep.passed());
        assert_eq!(rep.cases[0].values["pairs_checked"], 15);
        let r8 = build_generators(8).unwrap();
        assert_eq!(r8.m(), 16);
        assert_eq!(verify_clifford(&r8).cases[0].measured, 0.0);
    }

    #[test]
    fn deterministic_construction() {
        for n in 1..=8 {
            assert_eq!(build_generators(n).unwrap(), build_generators(n).unwrap());
        }
    }

    #[test]
    fn perturbed_generator_fails() {
        let rep = build_generators(3).unwrap();
        let mut gens = rep.generators().to_vec();
        gens[0] = &gens[0] + &GaussMatrix::identity(2);
        let bad = CliffordRep::from_generators(gens).unwrap();
        let report = verify_clifford(&bad);
        assert!(!report.passed());
        assert!(report.cases[0].measured > 0.0);
    }

    #[test]
    fn non_hermitian_generator_fails() {
        let mut gens = build_generators(2).unwrap().generators().to_vec();
        gens[1] = gens[1].scale(c(0, 1)); // iY is anti-Hermitian
        let bad = CliffordRep::from_generators(gens).unwrap();
        let report = verify_clifford(&bad);
        assert!(!report.case("hermiticity_deviation").unwrap().pass);
    }

    #[test]
    fn projection_on_axes_and_diagonals() {
        let rep = build_generators(3).unwrap();
        let p = radial_projection(&rep, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p, rep.generator(2).to_complex());

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = radial_projection(&rep, &[s, s, 0.0]).unwrap();
        let sq = cmatmul(&p, &p, 2);
        for (i, z) in sq.iter().enumerate() {
            let want = if i % 3 == 0 { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(want, 0.0)).norm() <= 1e-15);
        }
        let expect: Vec<Complex64> = rep
            .generator(0)
            .to_complex()
            .iter()
            .zip(rep.generator(1).to_complex())
            .map(|(a, b)| (a + b) * s)
            .collect();
        for (a, b) in p.iter().zip(&expect) {
            assert!((a - b).norm() <= 1e-15);
        }

        let rep2 = build_generators(2).unwrap();
        let p = radial_projection(&rep2, &[3.0, 4.0]).unwrap();
        let expect: Vec<Complex64> = rep2
            .generator(0)
            .to_complex()
            .iter()
            .zip(rep2.generator(1).to_complex())
            .map(|(a, b)| (a * 3.0 + b * 4.0) / 5.0)
            .collect();
        for (a, b) in p.iter().zip(&expect) {
            assert!((a - b).norm() <= 1e-15);
        }
        assert!(radial_projection(&rep2, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn exact_projection_squares_to_norm() {
        let rep = build_generators(4).unwrap();
        let x = [1, -2, 3, 5];
        let p = radial_projection_exact(&rep, &x).unwrap();
        let norm2: i64 = x.iter().map(|v| v * v).sum();
        assert_eq!(&p * &p, GaussMatrix::identity(rep.m()).scale(c(norm2, 0)));
    }

    #[test]
    fn json_round_trip() {
        let rep = build_generators(4).unwrap();
        let json = serde_json::to_string(&rep.to_json_value()).unwrap();
        let back: CliffordJson = serde_json::from_str(&json).unwrap();
        assert_eq!(CliffordRep::from_json_value(&back).unwrap(), rep);
        assert!(json.starts_with(r#"{"n":4,"m":4,"generators":[[[0,0],"#));
    }
}
