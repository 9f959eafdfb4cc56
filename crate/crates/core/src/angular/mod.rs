//! Exact polynomial-spinor calculus for `σ·∇`, the angular operator
//! `L = Σ_{j<k} σ_jσ_k (x_j∂_k − x_k∂_j)` and the sphere Laplacian.
//!
//! Everything in this module except [`sphere`] runs in exact complex
//! rational arithmetic; pass criteria are equalities, not tolerances.

mod exact;
mod poly;
mod spectrum;
pub mod sphere;

pub use exact::{nullspace, ExactMatrix};
pub use poly::{
    coordinates, cq, cq_from_gauss, cq_to_f64, cq_to_gauss, cq_zero, from_coordinates, homogeneous_basis,
    monomials_of_degree, Cq, MultiIndex, NumericPolySpinor, PolySpinor, PolySpinorJson, PolyTermJson,
};
pub use spectrum::{
    admissible_spectrum, is_admissible, spectrum_bruteforce, AngularSpectrum, DegreeBlock, SpectrumEntry, SpectrumJson,
    DEFAULT_BASIS_CAP,
};

use num_complex::Complex;

use crate::clifford::{CliffordRep, GaussMatrix};
use crate::error::{Error, Result};
use crate::report::{CaseRecord, VerificationReport};

fn check_dims(rep: &CliffordRep, p: &PolySpinor) -> Result<()> {
    if rep.n() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: rep.n(),
            found: p.n(),
        });
    }
    if rep.m() != p.m() {
        return Err(Error::DimensionMismatch {
            expected: rep.m(),
            found: p.m(),
        });
    }
    Ok(())
}

/// `(σ·∇) p = Σ_i σ_i ∂_i p`.
pub fn apply_dirac(rep: &CliffordRep, p: &PolySpinor) -> Result<PolySpinor> {
    check_dims(rep, p)?;
    let mut out = PolySpinor::zero(p.n(), p.m());
    for (i, g) in rep.generators().iter().enumerate() {
        out = out.add(&p.partial(i).apply_matrix(g)?)?;
    }
    Ok(out)
}

#[allow(non_snake_case)]
/// `L p = Σ_{j<k} σ_jσ_k (x_j ∂_k p − x_k ∂_j p)`.
pub fn apply_L(rep: &CliffordRep, p: &PolySpinor) -> Result<PolySpinor> {
    check_dims(rep, p)?;
    let mut out = PolySpinor::zero(p.n(), p.m());
    for ((j, k), s) in rep.bivectors() {
        let rot = p.partial(k).mul_var(j).sub(&p.partial(j).mul_var(k))?;
        out = out.add(&rot.apply_matrix(&s)?)?;
    }
    Ok(out)
}

/// Componentwise `Δp`.
pub fn laplacian(p: &PolySpinor) -> PolySpinor {
    let mut out = PolySpinor::zero(p.n(), p.m());
    for i in 0..p.n() {
        out = out.add(&p.partial(i).partial(i)).expect("same shape");
    }
    out
}

/// Euler operator `x·∇ p = Σ_i x_i ∂_i p`.
pub fn euler(p: &PolySpinor) -> PolySpinor {
    let mut out = PolySpinor::zero(p.n(), p.m());
    for i in 0..p.n() {
        out = out.add(&p.partial(i).mul_var(i)).expect("same shape");
    }
    out
}

/// `|x|² p`.
pub fn mul_norm_sq(p: &PolySpinor) -> PolySpinor {
    let mut out = PolySpinor::zero(p.n(), p.m());
    for i in 0..p.n() {
        out = out.add(&p.mul_var(i).mul_var(i)).expect("same shape");
    }
    out
}

/// `(x·σ) p = Σ_i x_i σ_i p`.
pub fn mul_x_sigma(rep: &CliffordRep, p: &PolySpinor) -> Result<PolySpinor> {
    check_dims(rep, p)?;
    let mut out = PolySpinor::zero(p.n(), p.m());
    for (i, g) in rep.generators().iter().enumerate() {
        out = out.add(&p.apply_matrix(g)?.mul_var(i))?;
    }
    Ok(out)
}

/// Sphere Laplacian on a homogeneous degree-`d` spinor via the Euler
/// identity: `Δ_S p = |x|² Δp − d(d+n−2) p`.
pub fn apply_sphere_laplacian(p: &PolySpinor) -> Result<PolySpinor> {
    let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)? as i64;
    let n = p.n() as i64;
    mul_norm_sq(&laplacian(p)).sub(&p.scale(&cq(d * (d + n - 2), 0)))
}

/// Checks `|x|² (σ·∇)p = (x·σ)(x·∇p + Lp)` exactly for homogeneous `p`.
pub fn verify_polar_identity(rep: &CliffordRep, p: &PolySpinor) -> Result<VerificationReport> {
    check_dims(rep, p)?;
    let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let lhs = mul_norm_sq(&apply_dirac(rep, p)?);
    let rhs = mul_x_sigma(rep, &euler(p).add(&apply_L(rep, p)?)?)?;
    let diff = lhs.sub(&rhs)?;
    Ok(VerificationReport::from_cases(
        "verify_polar_identity",
        vec![CaseRecord::check("polar_identity_exact", diff.is_zero())
            .input("n", rep.n())
            .input("degree", d)
            .value("nonzero_terms", diff.terms().len())],
    ))
}

/// Matrix of a degree-preserving operator on the homogeneous degree-`d`
/// spinors, in [`homogeneous_basis`] order. Errors if any entry is not a
/// Gaussian integer or the operator leaves the space.
pub fn operator_matrix<F>(n: usize, m: usize, d: u32, op: F) -> Result<GaussMatrix>
where
    F: Fn(&PolySpinor) -> Result<PolySpinor>,
{
    let basis = homogeneous_basis(n, m, d);
    let dim = basis.len();
    let mut mat = GaussMatrix::zeros(dim);
    for (j, (alpha, c)) in basis.iter().enumerate() {
        let image = op(&PolySpinor::basis_monomial(alpha.clone(), m, *c))?;
        let coords = coordinates(&image, &basis)?;
        for (i, v) in coords.iter().enumerate() {
            mat[(i, j)] = cq_to_gauss(v)
                .ok_or_else(|| Error::Internal("operator matrix entry is not a Gaussian integer".into()))?;
        }
    }
    Ok(mat)
}

#[allow(non_snake_case)]
pub fn L_matrix(rep: &CliffordRep, d: u32) -> Result<GaussMatrix> {
    operator_matrix(rep.n(), rep.m(), d, |p| apply_L(rep, p))
}

/// Builds the matrices of `L` and `Δ_S` on homogeneous degree-`d` spinors and
/// checks `L² − (n−2)L + Δ_S = 0` exactly.
pub fn verify_beltrami_relation(rep: &CliffordRep, d: u32) -> Result<VerificationReport> {
    let (n, m) = (rep.n(), rep.m());
    let l = L_matrix(rep, d)?;
    let ds = operator_matrix(n, m, d, apply_sphere_laplacian)?;
    let residual = &(&(&l * &l) - &l.scale(Complex::new(n as i64 - 2, 0))) + &ds;
    Ok(VerificationReport::from_cases(
        "verify_beltrami_relation",
        vec![
            CaseRecord::at_most("beltrami_residual_max_entry", residual.max_abs_entry() as f64, 0.0)
                .input("n", n)
                .input("degree", d)
                .value("matrix_size", l.dim()),
        ],
    ))
}

/// Checks `(σ·∇)² p = Δp` exactly.
pub fn verify_dirac_square(rep: &CliffordRep, p: &PolySpinor) -> Result<VerificationReport> {
    let twice = apply_dirac(rep, &apply_dirac(rep, p)?)?;
    let diff = twice.sub(&laplacian(p))?;
    Ok(VerificationReport::from_cases(
        "verify_dirac_square",
        vec![CaseRecord::check("dirac_square_equals_laplacian", diff.is_zero())
            .input("n", rep.n())
            .value("degree", p.degree().unwrap_or(0))],
    ))
}

/// Random homogeneous spinor of degree `d` with small Gaussian-integer
/// coefficients (about half the monomials populated).
pub fn random_homogeneous<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, m: usize, d: u32) -> PolySpinor {
    let mut p = PolySpinor::zero(n, m);
    for alpha in monomials_of_degree(n, d) {
        if rng.gen_bool(0.5) {
            let spinor: Vec<Cq> = (0..m)
                .map(|_| cq(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
                .collect();
            p.add_term(alpha, &spinor);
        }
    }
    if p.is_zero() {
        p = PolySpinor::basis_monomial(monomials_of_degree(n, d).remove(0), m, 0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_generators;
    use rand::{rngs::StdRng, SeedableRng};

    fn e(m: usize, c: usize) -> Vec<Cq> {
        let mut v = vec![cq_zero(); m];
        v[c] = cq(1, 0);
        v
    }

    #[test]
    fn dirac_on_linear_monomial() {
        // n = 3: σ_1 e_1 = e_2
        let rep = build_generators(3).unwrap();
        let p = PolySpinor::basis_monomial(vec![1, 0, 0], 2, 0);
        let q = apply_dirac(&rep, &p).unwrap();
        assert_eq!(q, PolySpinor::constant(3, e(2, 1)));
    }

    #[test]
    fn dirac_squared_on_norm_squared() {
        let rep = build_generators(3).unwrap();
        let r2 = mul_norm_sq(&PolySpinor::constant(3, e(2, 0)));
        let q = apply_dirac(&rep, &apply_dirac(&rep, &r2).unwrap()).unwrap();
        assert_eq!(q, PolySpinor::constant(3, vec![cq(6, 0), cq(0, 0)]));
    }

    #[test]
    fn dirac_square_random_degree_three() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=4 {
            let rep = build_generators(n).unwrap();
            for _ in 0..5 {
                let p = random_homogeneous(&mut rng, n, rep.m(), 3);
                assert!(verify_dirac_square(&rep, &p).unwrap().passed());
            }
        }
    }

    #[test]
    fn l_kills_constants_and_preserves_degree() {
        let rep = build_generators(3).unwrap();
        assert!(apply_L(&rep, &PolySpinor::constant(3, e(2, 1))).unwrap().is_zero());
        let p = PolySpinor::basis_monomial(vec![1, 0, 0], 2, 0);
        assert_eq!(apply_L(&rep, &p).unwrap().homogeneous_degree(), Some(1));
    }

    #[test]
    fn l_eigenvalues_n2_powers_of_z() {
        // n = 2: L = σ_1σ_2 (x∂_y − y∂_x) = iZ (x∂_y − y∂_x); on (x+iy)^j
        // the rotation gives i·j, so L (x+iy)^j e_c = −j·Z_cc (x+iy)^j e_c.
        let rep = build_generators(2).unwrap();
        for j in 0..4u32 {
            // (x + i y)^j expanded
            let mut z = PolySpinor::constant(2, vec![cq(1, 0)]);
            for _ in 0..j {
                let xz = z.mul_var(0);
                let yz = z.mul_var(1).scale(&cq(0, 1));
                z = xz.add(&yz).unwrap();
            }
            for (c, sign) in [(0usize, -1i64), (1, 1)] {
                let mut p = PolySpinor::zero(2, 2);
                for (a, v) in z.terms() {
                    let mut s = vec![cq_zero(); 2];
                    s[c] = v[0].clone();
                    p.add_term(a.clone(), &s);
                }
                let lp = apply_L(&rep, &p).unwrap();
                assert_eq!(lp, p.scale(&cq(sign * j as i64, 0)), "j={j} c={c}");
            }
        }
    }

    #[test]
    fn polar_identity_examples() {
        let rep = build_generators(3).unwrap();
        let c = PolySpinor::constant(3, e(2, 0));
        assert!(verify_polar_identity(&rep, &c).unwrap().passed());
        let p = PolySpinor::basis_monomial(vec![1, 0, 0], 2, 0);
        assert!(verify_polar_identity(&rep, &p).unwrap().passed());
        let mixed = p.add(&c).unwrap();
        assert_eq!(verify_polar_identity(&rep, &mixed).unwrap_err(), Error::NotHomogeneous);
    }

    #[test]
    fn polar_identity_detects_wrong_operator() {
        // Flip the sign of L: the identity must fail on x_1 e_1.
        let rep = build_generators(3).unwrap();
        let p = PolySpinor::basis_monomial(vec![1, 0, 0], 2, 0);
        let lhs = mul_norm_sq(&apply_dirac(&rep, &p).unwrap());
        let wrong = mul_x_sigma(&rep, &euler(&p).sub(&apply_L(&rep, &p).unwrap()).unwrap()).unwrap();
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn polar_identity_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for i in 0..50 {
            let n = 2 + i % 2;
            let rep = build_generators(n).unwrap();
            let d = 1 + (i as u32 % 4);
            let p = random_homogeneous(&mut rng, n, rep.m(), d);
            assert!(verify_polar_identity(&rep, &p).unwrap().passed());
        }
    }

    #[test]
    fn beltrami_small_cases() {
        let r3 = build_generators(3).unwrap();
        let rep0 = verify_beltrami_relation(&r3, 0).unwrap();
        assert!(rep0.passed());
        let rep1 = verify_beltrami_relation(&r3, 1).unwrap();
        assert!(rep1.passed());
        assert_eq!(rep1.cases[0].values["matrix_size"], 6);
        let r4 = build_generators(4).unwrap();
        for d in 0..=3 {
            assert!(verify_beltrami_relation(&r4, d).unwrap().passed());
        }
    }

    #[test]
    fn l_commutes_with_euler() {
        let mut rng = StdRng::seed_from_u64(3);
        let rep = build_generators(3).unwrap();
        for d in 0..4 {
            let p = random_homogeneous(&mut rng, 3, 2, d);
            let a = apply_L(&rep, &euler(&p)).unwrap();
            let b = euler(&apply_L(&rep, &p).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let rep = build_generators(3).unwrap();
        let p = PolySpinor::basis_monomial(vec![1, 0], 2, 0);
        assert!(matches!(apply_dirac(&rep, &p), Err(Error::DimensionMismatch { .. })));
        let q = PolySpinor::basis_monomial(vec![1, 0, 0], 4, 0);
        assert!(matches!(apply_L(&rep, &q), Err(Error::DimensionMismatch { .. })));
    }
}
