use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{GaussInt, GaussMatrix};
use crate::error::{Error, Result};

/// Exact complex rational scalar.
pub type Cq = Complex<BigRational>;

pub fn cq(re: i64, im: i64) -> Cq {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

pub fn cq_from_gauss(z: GaussInt) -> Cq {
    cq(z.re, z.im)
}

pub fn cq_zero() -> Cq {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn cq_to_f64(z: &Cq) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Returns the Gaussian integer equal to `z`, if its parts are integral.
pub fn cq_to_gauss(z: &Cq) -> Option<GaussInt> {
    if !z.re.is_integer() || !z.im.is_integer() {
        return None;
    }
    Some(Complex::new(z.re.to_integer().to_i64()?, z.im.to_integer().to_i64()?))
}

pub type MultiIndex = Vec<u32>;

/// Polynomial in `n` real variables with coefficients in `C^m`.
///
/// Zero coefficient vectors are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpinor {
    n: usize,
    m: usize,
    terms: BTreeMap<MultiIndex, Vec<Cq>>,
}

impl PolySpinor {
    pub fn zero(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    /// `x^alpha · spinor`.
    pub fn monomial(alpha: MultiIndex, spinor: Vec<Cq>) -> Self {
        let n = alpha.len();
        let m = spinor.len();
        let mut p = Self::zero(n, m);
        p.add_term(alpha, &spinor);
        p
    }

    /// `x^alpha · e_component`.
    pub fn basis_monomial(alpha: MultiIndex, m: usize, component: usize) -> Self {
        let mut spinor = vec![cq_zero(); m];
        spinor[component] = cq(1, 0);
        Self::monomial(alpha, spinor)
    }

    pub fn constant(n: usize, spinor: Vec<Cq>) -> Self {
        Self::monomial(vec![0; n], spinor)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Vec<Cq>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Option<&[Cq]> {
        self.terms.get(alpha).map(Vec::as_slice)
    }

    /// Maximum total degree; `None` for the zero spinor.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    /// The common degree of all terms, `None` if mixed. The zero spinor is
    /// homogeneous of every degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|a| a.iter().sum::<u32>());
        match degrees.next() {
            None => Some(0),
            Some(d) => degrees.all(|e| e == d).then_some(d),
        }
    }

    /// Adds `spinor · x^alpha` in place, pruning zeros.
    pub fn add_term(&mut self, alpha: MultiIndex, spinor: &[Cq]) {
        assert_eq!(alpha.len(), self.n, "multi-index length");
        assert_eq!(spinor.len(), self.m, "spinor length");
        if spinor.iter().all(Zero::is_zero) {
            return;
        }
        let key = alpha.clone();
        let entry = self.terms.entry(alpha).or_insert_with(|| vec![cq_zero(); spinor.len()]);
        for (e, s) in entry.iter_mut().zip(spinor) {
            *e += s;
        }
        if entry.iter().all(Zero::is_zero) {
            self.terms.remove(&key);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, v) in &other.terms {
            out.add_term(a.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&cq(-1, 0)))
    }

    pub fn scale(&self, s: &Cq) -> Self {
        let mut out = Self::zero(self.n, self.m);
        if s.is_zero() {
            return out;
        }
        for (a, v) in &self.terms {
            let w: Vec<Cq> = v.iter().map(|c| c * s).collect();
            out.add_term(a.clone(), &w);
        }
        out
    }

    /// `∂p/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (a, v) in &self.terms {
            let e = a[i];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b[i] -= 1;
            let f = cq(e as i64, 0);
            let w: Vec<Cq> = v.iter().map(|c| c * &f).collect();
            out.add_term(b, &w);
        }
        out
    }

    /// `x_i · p`.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for (a, v) in &self.terms {
            let mut b = a.clone();
            b[i] += 1;
            out.add_term(b, v);
        }
        out
    }

    /// Applies a constant `m × m` matrix to every coefficient vector.
    pub fn apply_matrix(&self, mat: &GaussMatrix) -> Result<Self> {
        if mat.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: mat.dim(),
            });
        }
        let entries: Vec<Cq> = mat.entries().iter().map(|&z| cq_from_gauss(z)).collect();
        let m = self.m;
        let mut out = Self::zero(self.n, m);
        for (a, v) in &self.terms {
            let w: Vec<Cq> = (0..m)
                .map(|r| {
                    let mut acc = cq_zero();
                    for (c, vc) in v.iter().enumerate() {
                        let e = &entries[r * m + c];
                        if !e.is_zero() && !vc.is_zero() {
                            acc += e * vc;
                        }
                    }
                    acc
                })
                .collect();
            out.add_term(a.clone(), &w);
        }
        Ok(out)
    }

    /// Evaluates at a real point.
    pub fn eval(&self, x: &[f64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.m];
        for (a, v) in &self.terms {
            let mono: f64 = a.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product();
            for (o, c) in out.iter_mut().zip(v) {
                *o += cq_to_f64(c) * mono;
            }
        }
        out
    }

    /// The same polynomial with `f64` coefficients, for fast repeated
    /// evaluation.
    pub fn to_numeric(&self) -> NumericPolySpinor {
        NumericPolySpinor {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v.iter().map(cq_to_f64).collect()))
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> PolySpinorJson {
        PolySpinorJson {
            n: self.n,
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| PolyTermJson {
                    alpha: a.clone(),
                    coeffs: v.iter().map(|c| [c.re.to_string(), c.im.to_string()]).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json_value(json: &PolySpinorJson) -> Result<Self> {
        let mut p = Self::zero(json.n, json.m);
        for t in &json.terms {
            if t.alpha.len() != json.n || t.coeffs.len() != json.m {
                return Err(Error::InvalidInput("malformed polynomial term".into()));
            }
            let spinor = t
                .coeffs
                .iter()
                .map(|[re, im]| Ok(Complex::new(parse_rational(re)?, parse_rational(im)?)))
                .collect::<Result<Vec<Cq>>>()?;
            p.add_term(t.alpha.clone(), &spinor);
        }
        Ok(p)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Exact rationals rendered as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySpinorJson {
    pub n: usize,
    pub m: usize,
    pub terms: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub alpha: MultiIndex,
    pub coeffs: Vec<[String; 2]>,
}

#[derive(Clone, Debug)]
pub struct NumericPolySpinor {
    m: usize,
    terms: Vec<(MultiIndex, Vec<Complex64>)>,
}

impl NumericPolySpinor {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (a, v) in &self.terms {
            let mut mono = 1.0;
            for (&e, &xi) in a.iter().zip(x) {
                for _ in 0..e {
                    mono *= xi;
                }
            }
            for (o, c) in out.iter_mut().zip(v) {
                *o += c * mono;
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.m];
        self.eval_into(x, &mut out);
        out
    }
}

/// All multi-indices of length `n` with total degree `d`, in a fixed
/// (lexicographically descending) order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u32, prefix: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Basis of homogeneous degree-`d` spinors: every monomial times every unit
/// spinor, monomial-major.
pub fn homogeneous_basis(n: usize, m: usize, d: u32) -> Vec<(MultiIndex, usize)> {
    monomials_of_degree(n, d)
        .into_iter()
        .flat_map(|a| (0..m).map(move |c| (a.clone(), c)))
        .collect()
}

/// Coordinates of a homogeneous spinor in [`homogeneous_basis`] order.
pub fn coordinates(p: &PolySpinor, basis: &[(MultiIndex, usize)]) -> Result<Vec<Cq>> {
    let index: BTreeMap<(&MultiIndex, usize), usize> =
        basis.iter().enumerate().map(|(i, (a, c))| ((a, *c), i)).collect();
    let mut out = vec![cq_zero(); basis.len()];
    for (a, v) in p.terms() {
        for (c, val) in v.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let i = index
                .get(&(a, c))
                .ok_or_else(|| Error::Internal(format!("term {a:?} outside basis")))?;
            out[*i] = val.clone();
        }
    }
    Ok(out)
}

/// Inverse of [`coordinates`].
pub fn from_coordinates(n: usize, m: usize, basis: &[(MultiIndex, usize)], coords: &[Cq]) -> PolySpinor {
    let mut p = PolySpinor::zero(n, m);
    for ((a, c), val) in basis.iter().zip(coords) {
        if val.is_zero() {
            continue;
        }
        let mut spinor = vec![cq_zero(); m];
        spinor[*c] = val.clone();
        p.add_term(a.clone(), &spinor);
    }
    p
}
