//! Closed-form radial test profiles, a smooth log-domain cutoff, and the
//! composite Gauss-Legendre rule used for every 1-D integral.

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes per panel of the composite rule.
pub const PANEL_NODES: usize = 10;

/// `∫_lo^hi f` by `panels` equal Gauss-Legendre panels.
pub fn integrate(lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(PANEL_NODES).expect("fixed positive degree");
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let mid = a + 0.5 * width;
        let mut s = 0.0;
        for &(x, w) in gl.as_node_weight_pairs() {
            s += w * f(mid + 0.5 * width * x);
        }
        total += 0.5 * width * s;
    }
    total
}

/// `f(r) = A ((r − lo)(hi − r))^p` on `(lo, hi)`, zero outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyBump {
    pub lo: f64,
    pub hi: f64,
    pub power: i32,
    pub amplitude: f64,
}

impl PolyBump {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Self::with_power(lo, hi, 2)
    }

    pub fn with_power(lo: f64, hi: f64, power: i32) -> Result<Self> {
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) || power < 1 {
            return Err(Error::InvalidInput(format!(
                "bump needs 0 ≤ lo < hi and power ≥ 1, got ({lo}, {hi}), p = {power}"
            )));
        }
        Ok(Self {
            lo,
            hi,
            power,
            amplitude: 1.0,
        })
    }

    pub fn zero(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            power: 2,
            amplitude: 0.0,
        }
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// `r ↦ f(λr)`: support `(lo/λ, hi/λ)`, amplitude `λ^{2p}`.
    pub fn dilate(&self, lambda: f64) -> Self {
        Self {
            lo: self.lo / lambda,
            hi: self.hi / lambda,
            power: self.power,
            amplitude: self.amplitude * lambda.powi(2 * self.power),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.lo || r >= self.hi {
            return 0.0;
        }
        self.amplitude * ((r - self.lo) * (self.hi - r)).powi(self.power)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.lo || r >= self.hi {
            return 0.0;
        }
        let g = (r - self.lo) * (self.hi - r);
        let dg = self.lo + self.hi - 2.0 * r;
        self.amplitude * self.power as f64 * g.powi(self.power - 1) * dg
    }

    /// `∫_support F(r) dr` for an integrand built from this profile.
    pub fn integrate(&self, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        integrate(self.lo, self.hi, panels, f)
    }
}

/// `f(r) = A e^{−1/(1−(r/R)²)}` on the ball `r < R`, zero outside. Unlike
/// [`PolyBump`] it does not vanish at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardBump {
    pub radius: f64,
    pub amplitude: f64,
}

impl StandardBump {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "bump radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius, amplitude: 1.0 })
    }

    pub fn value(&self, r: f64) -> f64 {
        let x = r / self.radius;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        self.amplitude * (-1.0 / (1.0 - x * x)).exp()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let x = r / self.radius;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - x * x;
        self.value(r) * (-2.0 * x / (s * s)) / self.radius
    }
}

/// Radial profile of a separable test function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Poly(PolyBump),
    Standard(StandardBump),
}

impl From<PolyBump> for Profile {
    fn from(p: PolyBump) -> Self {
        Profile::Poly(p)
    }
}

impl From<StandardBump> for Profile {
    fn from(p: StandardBump) -> Self {
        Profile::Standard(p)
    }
}

impl Profile {
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::Poly(p) => p.support(),
            Profile::Standard(s) => (0.0, s.radius),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Profile::Poly(p) => p.value(r),
            Profile::Standard(s) => s.value(r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Profile::Poly(p) => p.derivative(r),
            Profile::Standard(s) => s.derivative(r),
        }
    }

    /// `r ↦ f(λr)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        match self {
            Profile::Poly(p) => Profile::Poly(p.dilate(lambda)),
            Profile::Standard(s) => Profile::Standard(StandardBump {
                radius: s.radius / lambda,
                amplitude: s.amplitude,
            }),
        }
    }

    pub fn integrate(&self, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = self.support();
        integrate(lo, hi, panels, f)
    }
}

fn bump_exp(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `S(x) = φ(x) / (φ(x) + φ(1−x))` with `φ(x) = e^{−1/x}`: a `C^∞` step from
/// 0 at `x ≤ 0` to 1 at `x ≥ 1`. Returns `(S, S')`.
pub fn smooth_step(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 {
        return (1.0, 0.0);
    }
    let a = bump_exp(x);
    let b = bump_exp(1.0 - x);
    let da = a / (x * x);
    let db = -b / ((1.0 - x) * (1.0 - x));
    let s = a + b;
    (a / s, (da * b - a * db) / (s * s))
}

/// Even cutoff in `t`: 1 on `[−inner, inner]`, 0 outside `[−outer, outer]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogCutoff {
    pub inner: f64,
    pub outer: f64,
}

impl LogCutoff {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && inner < outer && outer.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "cutoff needs 0 ≤ inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(Self { inner, outer })
    }

    /// `(χ(t), χ'(t))`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let s = (t.abs() - self.inner) / (self.outer - self.inner);
        let (v, dv) = smooth_step(1.0 - s);
        (v, -dv * t.signum() / (self.outer - self.inner))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_exact_on_polynomials() {
        let v = integrate(0.0, 2.0, 3, |x| x.powi(7) - 3.0 * x * x);
        assert!((v - (2f64.powi(8) / 8.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn bump_derivative_matches_difference() {
        let f = PolyBump::new(0.5, 2.0).unwrap();
        for &r in &[0.6, 1.0, 1.7, 1.99] {
            let h = 1e-6;
            let fd = (f.value(r + h) - f.value(r - h)) / (2.0 * h);
            assert!((fd - f.derivative(r)).abs() < 1e-7);
        }
        assert_eq!(f.value(0.5), 0.0);
        assert_eq!(f.derivative(2.0), 0.0);
        assert!(PolyBump::new(2.0, 1.0).is_err());
    }

    #[test]
    fn dilation_is_composition() {
        let f = PolyBump::new(1.0, 2.0).unwrap();
        let g = f.dilate(3.0);
        for &r in &[0.4, 0.5, 0.6] {
            assert!((g.value(r) - f.value(3.0 * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_bump_is_smooth_and_dilates() {
        let f = StandardBump::new(2.0).unwrap();
        assert!((f.value(0.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.value(2.0), 0.0);
        for &r in &[0.1, 1.0, 1.9] {
            let h = 1e-6;
            let fd = (f.value(r + h) - f.value(r - h)) / (2.0 * h);
            assert!((fd - f.derivative(r)).abs() < 1e-7);
        }
        let p = Profile::from(f);
        let g = p.dilate(4.0);
        assert_eq!(g.support(), (0.0, 0.5));
        for &r in &[0.05, 0.2, 0.45] {
            assert!((g.value(r) - p.value(4.0 * r)).abs() < 1e-15);
            assert!((g.derivative(r) - 4.0 * p.derivative(4.0 * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn step_is_smooth_and_monotone() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let (s, ds) = smooth_step(x);
            assert!(s >= prev && ds >= 0.0);
            prev = s;
        }
        let (half, _) = smooth_step(0.5);
        assert!((half - 0.5).abs() < 1e-15);
        let x = 0.3;
        let fd = (smooth_step(x + 1e-6).0 - smooth_step(x - 1e-6).0) / 2e-6;
        assert!((fd - smooth_step(x).1).abs() < 1e-7);
    }

    #[test]
    fn cutoff_shape() {
        let c = LogCutoff::new(1.0, 2.0).unwrap();
        assert_eq!(c.eval(0.5), (1.0, 0.0));
        assert_eq!(c.eval(-2.5).0, 0.0);
        let (v, dv) = c.eval(1.5);
        assert!((v - 0.5).abs() < 1e-15 && dv < 0.0);
        let (_, dneg) = c.eval(-1.5);
        assert!((dneg + dv).abs() < 1e-15);
    }
}
