//! Closed-form constants: the sharp Hardy constant `c_b`, per-mode
//! coefficients `(k+γ)²`, the CKN constant, the constrained constant,
//! Sobolev exponents and the iterated-log remainder weights.
//!
//! Throughout, `γ = (b+2−n)/2` and the "target" is `t = (n−2−b)/2 = −γ`, so
//! `c_b = min_{k ∈ S_L} (k − t)²`.

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::angular::is_admissible;
use crate::error::{Error, Result};

/// Relative tolerance below which two candidate distances count as a tie.
pub const TIE_RELATIVE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardyConstantReport {
    pub n: usize,
    pub b: f64,
    pub gamma: f64,
    pub c_b: f64,
    /// One or two modes, ascending.
    pub argmin_modes: Vec<i64>,
    pub degenerate: bool,
    pub degenerate_mode: Option<i64>,
}

/// Nearest admissible integers at or below and at or above `t`.
fn neighbours_f64(n: usize, t: f64) -> (i64, i64) {
    let mut lo = t.floor() as i64;
    while !is_admissible(n, lo) {
        lo -= 1;
    }
    let mut hi = t.ceil() as i64;
    while !is_admissible(n, hi) {
        hi += 1;
    }
    (lo, hi)
}

pub fn hardy_constant(n: usize, b: f64) -> Result<HardyConstantReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("hardy_constant needs n ≥ 2, got {n}")));
    }
    if !b.is_finite() {
        return Err(Error::InvalidInput("b must be finite".into()));
    }
    let t = (n as f64 - 2.0 - b) / 2.0;
    let gamma = -t;
    let (lo, hi) = neighbours_f64(n, t);
    let d_lo = (t - lo as f64).powi(2);
    let d_hi = (hi as f64 - t).powi(2);
    let scale = d_lo.max(d_hi).max(1.0);
    let (c_b, argmin_modes) = if lo == hi {
        (0.0, vec![lo])
    } else if (d_lo - d_hi).abs() <= TIE_RELATIVE * scale {
        (d_lo.min(d_hi), vec![lo, hi])
    } else if d_lo < d_hi {
        (d_lo, vec![lo])
    } else {
        (d_hi, vec![hi])
    };
    let degenerate = lo == hi;
    Ok(HardyConstantReport {
        n,
        b,
        gamma,
        c_b,
        argmin_modes,
        degenerate,
        degenerate_mode: degenerate.then_some(lo),
    })
}

/// `hardy_constant` over exact rational `b`: ties and degeneracy are decided
/// exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactHardyConstant {
    pub n: usize,
    pub b: Rational64,
    pub gamma: Rational64,
    pub c_b: Rational64,
    pub argmin_modes: Vec<i64>,
    pub degenerate: bool,
}

pub fn hardy_constant_exact(n: usize, b: Rational64) -> Result<ExactHardyConstant> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("hardy_constant needs n ≥ 2, got {n}")));
    }
    let two = Rational64::from_integer(2);
    let t = (Rational64::from_integer(n as i64 - 2) - b) / two;
    let mut lo = t.floor().to_integer();
    while !is_admissible(n, lo) {
        lo -= 1;
    }
    let mut hi = t.ceil().to_integer();
    while !is_admissible(n, hi) {
        hi += 1;
    }
    let d_lo = (t - Rational64::from_integer(lo)).pow(2);
    let d_hi = (Rational64::from_integer(hi) - t).pow(2);
    let (c_b, argmin_modes) = if lo == hi {
        (Rational64::zero(), vec![lo])
    } else if d_lo == d_hi {
        (d_lo, vec![lo, hi])
    } else if d_lo < d_hi {
        (d_lo, vec![lo])
    } else {
        (d_hi, vec![hi])
    };
    Ok(ExactHardyConstant {
        n,
        b,
        gamma: -t,
        c_b,
        argmin_modes,
        degenerate: lo == hi,
    })
}

/// `(k + γ)²`, the coefficient of mode `k` after completing the square.
pub fn mode_coefficient(n: usize, b: f64, k: i64) -> Result<f64> {
    if !is_admissible(n, k) {
        return Err(Error::InadmissibleMode(k));
    }
    let gamma = (b + 2.0 - n as f64) / 2.0;
    Ok((k as f64 + gamma).powi(2))
}

/// Coefficient of `r^{-2}|c_k|²` in the radial form of mode `k`:
/// `k² + (b+2−n)k`.
pub fn potential_coefficient(n: usize, b: f64, k: i64) -> f64 {
    let k = k as f64;
    k * k + (b + 2.0 - n as f64) * k
}

/// `((a+n−2)/2)²`: sharp constant of `∫|x|^a|∇u|² ≥ C ∫|x|^{a−2}|u|²` on
/// `R^n ∖ {0}`.
pub fn ckn_constant(n: usize, a: f64) -> f64 {
    ((a + n as f64 - 2.0) / 2.0).powi(2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedConstant {
    pub j: i64,
    pub value: f64,
    pub argmin_modes: Vec<i64>,
}

/// `min_{k ∈ S_L ∖ {j}} (k − j)²` for degenerate `(n, b)` with mode `j`.
/// The value is computed, then required to equal `1`.
pub fn constrained_constant(n: usize, b: f64) -> Result<ConstrainedConstant> {
    let report = hardy_constant(n, b)?;
    let j = report.degenerate_mode.ok_or(Error::NotDegenerate { n, b })?;
    let mut lo = j - 1;
    while !is_admissible(n, lo) {
        lo -= 1;
    }
    let mut hi = j + 1;
    while !is_admissible(n, hi) {
        hi += 1;
    }
    let d_lo = (j - lo).pow(2);
    let d_hi = (hi - j).pow(2);
    let value = d_lo.min(d_hi);
    let argmin_modes: Vec<i64> = [(lo, d_lo), (hi, d_hi)]
        .into_iter()
        .filter(|&(_, d)| d == value)
        .map(|(k, _)| k)
        .collect();
    if value != 1 {
        return Err(Error::Internal(format!(
            "constrained constant for n = {n}, j = {j} is {value}, expected 1"
        )));
    }
    Ok(ConstrainedConstant {
        j,
        value: value as f64,
        argmin_modes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevExponents {
    pub two_star: f64,
    pub beta: f64,
    /// `(n−2−b)/2 ∉ Z ∖ {0, …, n−2}`, the hypothesis set as printed.
    pub hypothesis_as_printed: bool,
    /// `(n−2−b)/2 ∉ Z ∖ {1, …, n−2}`, i.e. `c_b > 0`, which is what the
    /// lower bound actually uses.
    pub hypothesis_c_b_positive: bool,
}

pub fn sobolev_exponents(n: usize, b: f64) -> Result<SobolevExponents> {
    if n <= 2 {
        return Err(Error::InvalidInput(format!("Sobolev exponents need n > 2, got {n}")));
    }
    let nf = n as f64;
    let t = (nf - 2.0 - b) / 2.0;
    let integral = t.fract() == 0.0;
    let in_printed_set = integral && !(0.0..=nf - 2.0).contains(&t);
    Ok(SobolevExponents {
        two_star: 2.0 * nf / (nf - 2.0),
        beta: b * nf / (nf - 2.0),
        hypothesis_as_printed: !in_printed_set,
        hypothesis_c_b_positive: !hardy_constant(n, b)?.degenerate,
    })
}

fn at_boundary(v: f64, radius: f64) -> bool {
    v <= 0.0 || v >= radius || (v - radius).abs() <= 1e-12 * radius
}

/// `η_j(r)` with `η_1(r) = log(R/r)` and `η_j = η_1 ∘ η_{j−1}`.
///
/// Returns `Ok(None)` when an intermediate `η_i`, `i < j`, leaves `(0, R)`
/// (values within `1e−12·R` of `R` count as outside).
pub fn eta(j: usize, r: f64, radius: f64) -> Result<Option<f64>> {
    if j == 0 {
        return Err(Error::InvalidInput("eta level starts at 1".into()));
    }
    if !(r > 0.0 && r < radius) {
        return Err(Error::OutsideValidInterval { r, lo: 0.0, hi: radius });
    }
    let mut v = (radius / r).ln();
    for _ in 1..j {
        if at_boundary(v, radius) {
            return Ok(None);
        }
        v = (radius / v).ln();
    }
    Ok(Some(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderVariant {
    /// `r^{-2} η_1 ⋯ η_k`, the weight as printed.
    Literal,
    /// `r^{-2} (η_1 ⋯ η_k)^{-2}`, the classical improved-Hardy form.
    InverseSquare,
}

impl std::str::FromStr for RemainderVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "inverse-square" => Ok(Self::InverseSquare),
            _ => Err(Error::InvalidInput(format!("unknown remainder variant {s}"))),
        }
    }
}

impl std::fmt::Display for RemainderVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::InverseSquare => "inverse-square",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialPower {
    /// `r^{-2}` as printed in the series terms.
    Printed,
    /// `r^{-b-2}`, matching the leading term.
    Corrected,
}

impl std::str::FromStr for RadialPower {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Self::Printed),
            "corrected" => Ok(Self::Corrected),
            _ => Err(Error::InvalidInput(format!("unknown radial power {s}"))),
        }
    }
}

/// Iterated-log weights on `(0, R)` truncated at `K` levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderWeights {
    pub radius: f64,
    pub levels: usize,
    pub variant: RemainderVariant,
    pub power: RadialPower,
    /// Open interval on which `η_1 … η_K` are all defined and positive.
    pub valid_interval: (f64, f64),
}

/// Radius `r*` with `η_j(r*) = R`, by pulling `R` back through `η_1^{-1}(s) =
/// R e^{−s}`.
fn eta_level_crossing(j: usize, radius: f64) -> f64 {
    let mut s = radius;
    for _ in 1..j {
        s = radius * (-s).exp();
    }
    radius * (-s).exp()
}

impl RemainderWeights {
    pub fn new(radius: f64, levels: usize, variant: RemainderVariant, power: RadialPower) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput("domain radius must be positive".into()));
        }
        let (mut lo, mut hi) = (0.0, radius);
        // η_j < R is needed for η_{j+1} to exist; η_j decreases in r for odd j.
        for j in 1..levels {
            let cross = eta_level_crossing(j, radius);
            if j % 2 == 1 {
                lo = f64::max(lo, cross);
            } else {
                hi = f64::min(hi, cross);
            }
        }
        if lo >= hi {
            return Err(Error::InvalidInput(format!(
                "no valid interval for K = {levels} and R = {radius}"
            )));
        }
        Ok(Self {
            radius,
            levels,
            variant,
            power,
            valid_interval: (lo, hi),
        })
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.valid_interval.0 && r < self.valid_interval.1
    }

    /// Per-level contributions `w_1(r) … w_K(r)`, each already scaled by
    /// `c_b` and the radial power.
    pub fn level_weights(&self, r: f64, b: f64, c_b: f64) -> Result<Vec<f64>> {
        if !self.contains(r) {
            return Err(Error::OutsideValidInterval {
                r,
                lo: self.valid_interval.0,
                hi: self.valid_interval.1,
            });
        }
        let radial = match self.power {
            RadialPower::Printed => r.powi(-2),
            RadialPower::Corrected => r.powf(-b - 2.0),
        };
        let mut product = 1.0;
        let mut out = Vec::with_capacity(self.levels);
        for j in 1..=self.levels {
            let e = eta(j, r, self.radius)?.ok_or(Error::OutsideValidInterval {
                r,
                lo: self.valid_interval.0,
                hi: self.valid_interval.1,
            })?;
            product *= e;
            let w = match self.variant {
                RemainderVariant::Literal => product,
                RemainderVariant::InverseSquare => product.powi(-2),
            };
            out.push(c_b * radial * w);
        }
        Ok(out)
    }
}

/// `Σ_{k=1..K}` of the chosen remainder weight at `r`.
pub fn remainder_weight(r: f64, weights: &RemainderWeights, b: f64, c_b: f64) -> Result<f64> {
    Ok(weights.level_weights(r, b, c_b)?.iter().sum())
}

pub fn rational_to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `min (k − t)²` over admissible `k ∈ [−window, window]` by enumeration,
/// with its argmin. Independent of the closed form in [`hardy_constant`].
pub fn windowed_minimum(n: usize, b: f64, window: i64) -> (f64, Vec<i64>) {
    let t = (n as f64 - 2.0 - b) / 2.0;
    let vals: Vec<(i64, f64)> = (-window..=window)
        .filter(|&k| !(1..=n as i64 - 2).contains(&k))
        .map(|k| (k, (k as f64 - t).powi(2)))
        .collect();
    let min = vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let arg = vals
        .iter()
        .filter(|v| (v.1 - min).abs() <= 1e-12 * min.max(1.0))
        .map(|v| v.0)
        .collect();
    (min, arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn variant_and_power_names_round_trip() {
        for v in [RemainderVariant::Literal, RemainderVariant::InverseSquare] {
            assert_eq!(v.to_string().parse::<RemainderVariant>().unwrap(), v);
        }
        assert_eq!("printed".parse::<RadialPower>().unwrap(), RadialPower::Printed);
        assert!("r^-2".parse::<RadialPower>().is_err());
    }

    #[test]
    fn classical_values() {
        let r = hardy_constant(3, 0.0).unwrap();
        assert_eq!(r.c_b, 0.25);
        assert_eq!(r.argmin_modes, vec![0]);
        assert!(!r.degenerate);

        let r = hardy_constant(2, 0.0).unwrap();
        assert_eq!(r.c_b, 0.0);
        assert!(r.degenerate);
        assert_eq!(r.degenerate_mode, Some(0));

        let r = hardy_constant(3, -1.0).unwrap();
        assert_eq!(r.c_b, 1.0);
        assert_eq!(r.argmin_modes, vec![0, 2]);

        let r = hardy_constant(4, 1.0).unwrap();
        assert_eq!(r.c_b, 0.25);
        assert_eq!(r.argmin_modes, vec![0]);
        assert_eq!(windowed_minimum(4, 1.0, 10), (0.25, vec![0]));
    }

    #[test]
    fn exact_rational_path() {
        let r = hardy_constant_exact(3, Rational64::from_integer(-1)).unwrap();
        assert_eq!(r.c_b, Rational64::from_integer(1));
        assert_eq!(r.argmin_modes, vec![0, 2]);
        let r = hardy_constant_exact(5, Rational64::new(1, 3)).unwrap();
        // t = (3 − 1/3)/2 = 4/3, neighbours 0 and 4 (1..3 excluded)
        assert_eq!(r.argmin_modes, vec![0]);
        assert_eq!(r.c_b, Rational64::new(16, 9));
        assert_eq!(rational_to_f64(r.c_b), hardy_constant(5, 1.0 / 3.0).unwrap().c_b);
    }

    #[test]
    fn classical_maximum_at_b_zero() {
        for n in 2..=10 {
            let want = ((n as f64 - 2.0) / 2.0).powi(2);
            assert_eq!(hardy_constant(n, 0.0).unwrap().c_b, want);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hardy_constant(1, 0.0).is_err());
        assert!(hardy_constant(3, f64::NAN).is_err());
    }

    #[test]
    fn mode_coefficients() {
        assert_eq!(mode_coefficient(3, 0.0, 0).unwrap(), 0.25);
        assert_eq!(mode_coefficient(3, -1.0, 5).unwrap(), 16.0);
        // k = −γ: n = 4, b = 0 → γ = −1, but k = 1 is excluded; n = 2, b = 2 → γ = 1, k = −1
        assert_eq!(mode_coefficient(2, 2.0, -1).unwrap(), 0.0);
        assert_eq!(mode_coefficient(3, 0.0, 1), Err(Error::InadmissibleMode(1)));
    }

    #[test]
    fn completing_the_square() {
        for n in 2..6 {
            for &b in &[-2.5, -1.0, 0.0, 0.3, 3.0] {
                for k in -4..=6 {
                    if !is_admissible(n, k) {
                        continue;
                    }
                    let lhs = ckn_constant(1, n as f64 - 1.0 - b) + potential_coefficient(n, b, k);
                    let rhs = mode_coefficient(n, b, k).unwrap();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ckn_values() {
        assert_eq!(ckn_constant(3, 0.0), 0.25);
        assert_eq!(ckn_constant(2, 0.0), 0.0);
        assert_eq!(ckn_constant(1, 3.0 - 1.0 - 0.0), 0.25);
    }

    #[test]
    fn constrained_constants() {
        let c = constrained_constant(2, 0.0).unwrap();
        assert_eq!((c.j, c.value), (0, 1.0));
        assert_eq!(c.argmin_modes, vec![-1, 1]);

        let c = constrained_constant(3, 1.0).unwrap();
        assert_eq!(c.j, 0);
        assert_eq!(c.argmin_modes, vec![-1]);

        let c = constrained_constant(3, -3.0).unwrap();
        assert_eq!(c.j, 2);
        assert_eq!(c.argmin_modes, vec![3]);

        assert!(matches!(constrained_constant(3, 0.0), Err(Error::NotDegenerate { .. })));
    }

    #[test]
    fn sobolev_values() {
        let s = sobolev_exponents(3, 0.0).unwrap();
        assert_eq!((s.two_star, s.beta), (6.0, 0.0));
        let s = sobolev_exponents(4, 2.0).unwrap();
        assert_eq!((s.two_star, s.beta), (4.0, 4.0));
        let s = sobolev_exponents(3, 1.0).unwrap();
        assert_eq!((s.two_star, s.beta), (6.0, 3.0));
        // b = n − 2: t = 0 is degenerate but allowed by the printed set
        assert!(s.hypothesis_as_printed && !s.hypothesis_c_b_positive);
        assert!(sobolev_exponents(2, 0.0).is_err());
        let s = sobolev_exponents(3, 0.0).unwrap();
        assert!(s.hypothesis_as_printed && s.hypothesis_c_b_positive);
    }

    #[test]
    fn eta_values() {
        let radius = 2.0;
        assert!((eta(1, radius / E, radius).unwrap().unwrap() - 1.0).abs() < 1e-15);
        let r = 0.9;
        let e1 = (radius / r).ln();
        let e2 = eta(2, r, radius).unwrap().unwrap();
        assert!((e2 - (radius / e1).ln()).abs() < 1e-15);
        assert_eq!(eta(2, radius * (-radius).exp(), radius).unwrap(), None);
        assert!(eta(1, radius, radius).is_err());
        assert!(eta(1, 0.0, radius).is_err());
    }

    #[test]
    fn valid_interval_shrinks_with_levels() {
        let mut prev = (0.0, 1.0);
        for k in 1..=5 {
            let w = RemainderWeights::new(1.0, k, RemainderVariant::InverseSquare, RadialPower::Corrected).unwrap();
            let (lo, hi) = w.valid_interval;
            assert!(lo >= prev.0 && hi <= prev.1);
            // every η is defined and positive just inside both ends
            for r in [lo + 1e-9 * (hi - lo), 0.5 * (lo + hi), hi - 1e-9 * (hi - lo)] {
                for j in 1..=k {
                    assert!(eta(j, r, 1.0).unwrap().unwrap() > 0.0);
                }
            }
            prev = (lo, hi);
        }
    }

    #[test]
    fn remainder_weight_examples() {
        let radius = 3.0;
        let r = radius / E;
        let w = RemainderWeights::new(radius, 1, RemainderVariant::Literal, RadialPower::Printed).unwrap();
        let v = remainder_weight(r, &w, 0.0, 0.25).unwrap();
        assert!((v - 0.25 / (r * r)).abs() < 1e-14);

        let r = radius / 10.0;
        let lit = RemainderWeights::new(radius, 2, RemainderVariant::Literal, RadialPower::Printed).unwrap();
        let inv = RemainderWeights::new(radius, 2, RemainderVariant::InverseSquare, RadialPower::Printed).unwrap();
        let a = remainder_weight(r, &lit, 0.0, 0.25).unwrap();
        let b = remainder_weight(r, &inv, 0.0, 0.25).unwrap();
        assert!((a - b).abs() > 1e-3);
        let (_, hi) = lit.valid_interval;
        assert!(remainder_weight(hi + 1e-6, &lit, 0.0, 0.25).is_err());
    }

    proptest::proptest! {
        #[test]
        fn closed_form_matches_window(n in 2usize..7, b in -6.0f64..6.0) {
            let r = hardy_constant(n, b).unwrap();
            let (bf, arg) = windowed_minimum(n, b, 12);
            proptest::prop_assert!((r.c_b - bf).abs() <= 1e-12);
            proptest::prop_assert_eq!(r.argmin_modes, arg);
            proptest::prop_assert!(r.c_b >= 0.0);
        }

        #[test]
        fn zero_exactly_on_degenerate_set(n in 2usize..7, k in -8i64..8) {
            let b = n as f64 - 2.0 - 2.0 * k as f64;
            let r = hardy_constant(n, b).unwrap();
            let admissible = is_admissible(n, k);
            proptest::prop_assert_eq!(r.degenerate, admissible);
            proptest::prop_assert_eq!(r.c_b == 0.0, admissible);
            if admissible {
                proptest::prop_assert_eq!(constrained_constant(n, b).unwrap().value, 1.0);
            }
        }
    }
}
