//! The pinned verification battery behind `full-suite`.
//!
//! Each group returns its cases with names prefixed by the group key, so
//! the aggregated report can be split back into groups. Nothing here reads
//! the clock or an unseeded RNG: two runs give byte-identical JSON.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::angular::{
    homogeneous_basis, is_admissible, spectrum_bruteforce, verify_beltrami_relation, verify_dirac_square,
    verify_polar_identity, PolySpinor, DEFAULT_BASIS_CAP,
};
use crate::clifford::{build_generators, spinor_dimension, verify_clifford};
use crate::constants::{hardy_constant, hardy_constant_exact, windowed_minimum, RadialPower, RemainderVariant};
use crate::error::Result;
use crate::oracle::{
    oracle_study, sobolev_constant_3d, sobolev_quotient, verify_ckn_identity, AnnulusGrid, SeparableTestFunction,
};
use crate::profile::{LogCutoff, PolyBump, StandardBump};
use crate::radial::{
    assemble_mode_pencil, excluded_mode_floor, ground_state_profile, min_eigenvalue, minimizer_flatness,
    remainder_check, sharpness_sweep, solve_mode, ConstraintSpec, GridRule, ModeProblem, RadialGrid, Weight,
    BISECTION_TOL,
};
use crate::report::{CaseRecord, VerificationReport};
use crate::stats::log_log_slope;

pub const SUITE_SEED: u64 = 0x5eed_d1ac;

/// Group keys in battery order.
pub const GROUPS: [&str; 13] = [
    "constants",
    "bruteforce",
    "clifford",
    "identities",
    "spectrum",
    "mode_oracle",
    "sharpness",
    "excluded_mode",
    "log_weight",
    "cartesian_oracle",
    "ckn",
    "sobolev",
    "remainder",
];

fn named(group: &str, case: CaseRecord) -> CaseRecord {
    CaseRecord {
        name: format!("{group}.{}", case.name),
        ..case
    }
}

pub fn constants_table() -> Result<Vec<CaseRecord>> {
    let g = "constants";
    let mut out = Vec::new();
    let a = hardy_constant(3, 0.0)?;
    out.push(named(
        g,
        CaseRecord::check("c_b_n3_b0_is_quarter", a.c_b == 0.25 && !a.degenerate)
            .input("n", 3)
            .input("b", 0.0)
            .value("c_b", a.c_b)
            .value("argmin", a.argmin_modes.clone()),
    ));
    let b = hardy_constant(3, -1.0)?;
    out.push(named(
        g,
        CaseRecord::check("c_b_n3_bm1_is_one", b.c_b == 1.0 && b.argmin_modes == vec![0, 2])
            .input("n", 3)
            .input("b", -1.0)
            .value("c_b", b.c_b)
            .value("argmin", b.argmin_modes.clone()),
    ));
    let c = hardy_constant(2, 0.0)?;
    out.push(named(
        g,
        CaseRecord::check("c_b_n2_b0_degenerate", c.c_b == 0.0 && c.degenerate)
            .input("n", 2)
            .input("b", 0.0)
            .value("c_b", c.c_b)
            .value("degenerate_mode", c.degenerate_mode),
    ));
    // the same three through exact rationals
    let exact = [(3, (0, 1), (1, 4)), (3, (-1, 1), (1, 1)), (2, (0, 1), (0, 1))];
    let ok = exact.iter().all(|&(n, (bn, bd), (cn, cd))| {
        hardy_constant_exact(n, num_rational::Rational64::new(bn, bd))
            .map(|e| e.c_b == num_rational::Rational64::new(cn, cd))
            .unwrap_or(false)
    });
    out.push(named(g, CaseRecord::check("exact_rational_path_agrees", ok)));
    Ok(out)
}

pub fn bruteforce_equivalence() -> Result<Vec<CaseRecord>> {
    let mut rng = StdRng::seed_from_u64(SUITE_SEED);
    let mut out = Vec::new();
    for n in 2..=6usize {
        let mut worst = 0.0f64;
        let mut argmin_mismatch = 0usize;
        for _ in 0..200 {
            let b: f64 = rng.gen_range(-6.0..=6.0);
            let r = hardy_constant(n, b)?;
            let (w, arg) = windowed_minimum(n, b, 12);
            worst = worst.max((r.c_b - w).abs());
            if r.argmin_modes != arg {
                argmin_mismatch += 1;
            }
        }
        out.push(named(
            "bruteforce",
            CaseRecord::at_most("max_abs_difference", worst, 1e-12)
                .input("n", n)
                .input("samples", 200)
                .input("window", 12),
        ));
        out.push(named(
            "bruteforce",
            CaseRecord::at_most("argmin_mismatches", argmin_mismatch as f64, 0.0).input("n", n),
        ));
    }
    Ok(out)
}

pub fn clifford_exactness() -> Result<Vec<CaseRecord>> {
    let g = "clifford";
    let mut out = Vec::new();
    let mut literal_mismatch = Vec::new();
    for n in 1..=8usize {
        let rep = build_generators(n)?;
        for case in verify_clifford(&rep).cases {
            out.push(named(g, case));
        }
        let formula = 1usize << n.div_ceil(2);
        if rep.m() != formula {
            literal_mismatch.push(n);
        }
        // n = 1 and n = 3 keep the scalar and Pauli conventions
        out.push(named(
            g,
            CaseRecord::check("spinor_dimension", rep.m() == spinor_dimension(n))
                .input("n", n)
                .value("m", rep.m())
                .value("two_pow_ceil_half", formula),
        ));
    }
    out.push(named(
        g,
        CaseRecord::info(
            "dimensions_differing_from_two_pow_ceil_half",
            literal_mismatch.len() as f64,
        )
        .value("n", literal_mismatch),
    ));
    Ok(out)
}

pub fn operator_identities() -> Result<Vec<CaseRecord>> {
    let g = "identities";
    let mut out = Vec::new();
    for n in 2..=4usize {
        let rep = build_generators(n)?;
        let m = rep.m();
        for d in 0..=4u32 {
            // linearity: checking every basis monomial covers the whole space
            let basis = homogeneous_basis(n, m, d);
            let (mut square_ok, mut polar_ok) = (true, true);
            for (alpha, c) in &basis {
                let p = PolySpinor::basis_monomial(alpha.clone(), m, *c);
                square_ok &= verify_dirac_square(&rep, &p)?.passed();
                polar_ok &= verify_polar_identity(&rep, &p)?.passed();
            }
            out.push(named(
                g,
                CaseRecord::check("dirac_square_equals_laplacian", square_ok)
                    .input("n", n)
                    .input("degree", d)
                    .value("basis_size", basis.len()),
            ));
            out.push(named(
                g,
                CaseRecord::check("polar_factorization", polar_ok)
                    .input("n", n)
                    .input("degree", d)
                    .value("basis_size", basis.len()),
            ));
            for case in verify_beltrami_relation(&rep, d)?.cases {
                out.push(named(g, case));
            }
        }
    }
    Ok(out)
}

pub fn spectrum_certificate() -> Result<Vec<CaseRecord>> {
    let g = "spectrum";
    let rep = build_generators(3)?;
    let s = spectrum_bruteforce(&rep, 3, DEFAULT_BASIS_CAP)?;
    let mut out = Vec::new();
    for block in &s.blocks {
        let ks: Vec<i64> = block.eigenvalues.iter().map(|e| e.0).collect();
        out.push(named(
            g,
            CaseRecord::check("degree_block_complete", block.is_complete())
                .input("n", 3)
                .input("degree", block.degree)
                .value("dimension", block.dimension)
                .value(
                    "multiplicity_total",
                    block.eigenvalues.iter().map(|e| e.1).sum::<usize>(),
                )
                .value("eigenvalues", ks.clone()),
        ));
        out.push(named(
            g,
            CaseRecord::check("no_excluded_eigenvalue", ks.iter().all(|&k| is_admissible(3, k)))
                .input("n", 3)
                .input("degree", block.degree),
        ));
    }
    Ok(out)
}

pub fn mode_oracle() -> Result<Vec<CaseRecord>> {
    let g = "mode_oracle";
    let mut rng = StdRng::seed_from_u64(SUITE_SEED ^ 6);
    let mut out = Vec::new();
    for case in 0..20 {
        let n: usize = rng.gen_range(2..=4);
        let b: f64 = rng.gen_range(-4.0..=4.0);
        let k = loop {
            let k: i64 = rng.gen_range(-4..=4);
            if is_admissible(n, k) {
                break k;
            }
        };
        let mode = ModeProblem::new(n, b, k)?;
        let grid = RadialGrid::new(10.0, 3999)?;
        let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
        let cf = mode.closed_form(10.0);
        out.push(named(
            g,
            CaseRecord::at_most("relative_error_T10", ((r.lambda_min - cf) / cf).abs(), 1e-4)
                .input("case", case)
                .input("n", n)
                .input("b", b)
                .input("k", k)
                .value("lambda_min", r.lambda_min)
                .value("closed_form", cf)
                .value("residual", r.residual),
        ));
        out.push(named(
            g,
            CaseRecord::at_least("above_mode_coefficient", r.lambda_min - mode.mode_coefficient, 0.0)
                .input("case", case),
        ));
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for points in [249, 499, 999] {
            let grid = RadialGrid::new(10.0, points)?;
            let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
            hs.push(grid.h());
            errs.push((r.lambda_min - cf).abs());
        }
        let slope = log_log_slope(&hs, &errs).unwrap_or(f64::MAX);
        out.push(named(
            g,
            CaseRecord::at_most("convergence_order_deviation", (slope - 2.0).abs(), 0.3)
                .input("case", case)
                .value("slope", slope)
                .value("h", hs)
                .value("abs_err", errs),
        ));
    }
    Ok(out)
}

pub const SHARPNESS_T: [f64; 5] = [5.0, 10.0, 20.0, 50.0, 100.0];

pub fn sharpness() -> Result<Vec<CaseRecord>> {
    let g = "sharpness";
    let mut out = Vec::new();
    for (n, b) in [(3usize, 0.0), (3, -1.0), (4, 1.0)] {
        let hc = hardy_constant(n, b)?;
        for &k in &hc.argmin_modes {
            let rows = sharpness_sweep(n, b, k, &SHARPNESS_T, GridRule::default())?;
            let last = rows.last().expect("nonempty sweep");
            let decreasing = rows.windows(2).all(|w| w[1].lambda_min < w[0].lambda_min);
            let above = rows.iter().all(|r| r.lambda_min > hc.c_b);
            let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda_min).collect();
            out.push(named(
                g,
                CaseRecord::at_most("gap_at_T100", last.lambda_min - hc.c_b, 3e-4)
                    .input("n", n)
                    .input("b", b)
                    .input("k", k)
                    .value("c_b", hc.c_b)
                    .value("lambda_min", lambdas),
            ));
            out.push(named(
                g,
                CaseRecord::check("strictly_decreasing_in_T", decreasing)
                    .input("n", n)
                    .input("b", b)
                    .input("k", k),
            ));
            out.push(named(
                g,
                CaseRecord::check("above_c_b", above)
                    .input("n", n)
                    .input("b", b)
                    .input("k", k),
            ));
        }
    }
    // minimizing sequence and flat discrete minimizer for (3, 0)
    let gs = ground_state_profile(3, 0.0, 0, LogCutoff::new(10.0, 20.0)?, 0)?;
    out.push(named(
        g,
        CaseRecord::at_most("ground_state_excess", gs.excess, 0.05)
            .input("T_inner", 10.0)
            .input("T_outer", 20.0)
            .value("quotient", gs.quotient),
    ));
    out.push(named(
        g,
        CaseRecord::at_least("ground_state_excess_positive", gs.excess, 0.0),
    ));
    let grid = GridRule::default().grid(50.0)?;
    let mode = ModeProblem::new(3, 0.0, 0)?;
    let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
    out.push(named(
        g,
        CaseRecord::at_most("minimizer_flatness_window5", minimizer_flatness(&r, &grid, 5.0), 0.02).input("T", 50.0),
    ));
    Ok(out)
}

pub fn excluded_mode() -> Result<Vec<CaseRecord>> {
    let g = "excluded_mode";
    let mut out = Vec::new();
    for (n, b) in [(2usize, 0.0), (3, 1.0)] {
        let f = excluded_mode_floor(n, b, 50.0, GridRule::default())?;
        let neighbours = !f.argmin.is_empty() && f.argmin.iter().all(|&k| (k - f.j).abs() == 1);
        let per_mode: Vec<Vec<f64>> = f.per_mode.iter().map(|&(k, l)| vec![k as f64, l]).collect();
        out.push(named(
            g,
            CaseRecord::at_least("floor_at_least_one", f.floor, 1.0)
                .input("n", n)
                .input("b", b)
                .input("T", 50.0)
                .value("floor", f.floor)
                .value("per_mode", per_mode),
        ));
        out.push(named(
            g,
            CaseRecord::at_most("floor_within_1e-3", f.floor - 1.0, 1e-3)
                .input("n", n)
                .input("b", b),
        ));
        out.push(named(
            g,
            CaseRecord::check("attained_next_to_j", neighbours)
                .input("n", n)
                .input("b", b)
                .value("j", f.j)
                .value("argmin", f.argmin.clone()),
        ));
    }
    Ok(out)
}

pub const LOG_WEIGHT_T: [f64; 3] = [5.0, 10.0, 20.0];

pub fn log_weight() -> Result<Vec<CaseRecord>> {
    let g = "log_weight";
    let mode = ModeProblem::new(2, 0.0, 0)?;
    let spec = ConstraintSpec::annulus_mean_zero();
    let mut out = Vec::new();
    let mut values = Vec::new();
    for &t in &LOG_WEIGHT_T {
        let grid = GridRule::default().grid(t)?;
        let r = solve_mode(&grid, &mode, Weight::LogSquared, &spec)?;
        let free = solve_mode(&grid, &mode, Weight::LogSquared, &ConstraintSpec::none())?;
        values.push(r.result.lambda_min);
        out.push(named(
            g,
            CaseRecord::at_least("constrained_lambda_min", r.result.lambda_min, 0.01)
                .input("n", 2)
                .input("b", 0.0)
                .input("j", 0)
                .input("T", t)
                .value("unconstrained", free.result.lambda_min)
                .value("residual", r.result.residual),
        ));
        out.push(named(
            g,
            CaseRecord::at_most("constraint_violation", r.constraint_violation, 1e-12).input("T", t),
        ));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    out.push(named(
        g,
        CaseRecord::at_most("variation_ratio", hi / lo, 2.0).value("lambda_min", values.clone()),
    ));
    out.push(named(g, CaseRecord::info("C_est", *values.last().expect("nonempty"))));
    Ok(out)
}

pub const ORACLE_ANNULUS: (f64, f64) = (0.5, 1.5);
pub const ORACLE_DIVISORS: [f64; 3] = [50.0, 100.0, 200.0];

pub fn cartesian_oracle() -> Result<Vec<CaseRecord>> {
    let g = "cartesian_oracle";
    let rep = build_generators(3)?;
    let spec = spectrum_bruteforce(&rep, 1, DEFAULT_BASIS_CAP)?;
    let span = ORACLE_ANNULUS.1 - ORACLE_ANNULUS.0;
    let hs: Vec<f64> = ORACLE_DIVISORS.iter().map(|d| span / d).collect();
    let profile = PolyBump::new(ORACLE_ANNULUS.0, ORACLE_ANNULUS.1)?;
    let mut out = Vec::new();
    for k in [0i64, -1] {
        let u = SeparableTestFunction::from_spectrum(&spec, k, 0, profile)?;
        let study = oracle_study(&rep, &u, &[0.0, -1.0], &hs, ORACLE_ANNULUS)?;
        for &(b, order) in &study.observed_order {
            let finest = study.rows.iter().rev().find(|r| r.b == b).expect("rows per b");
            let diffs: Vec<f64> = study.rows.iter().filter(|r| r.b == b).map(|r| r.rel_diff).collect();
            out.push(named(
                g,
                CaseRecord::at_most("relative_difference_finest", finest.rel_diff, 0.02)
                    .input("n", 3)
                    .input("k", k)
                    .input("b", b)
                    .input("h", finest.h)
                    .value("cartesian", finest.cartesian)
                    .value("polar", finest.polar),
            ));
            let order = order.unwrap_or(f64::MAX);
            out.push(named(
                g,
                CaseRecord::at_most("observed_order_deviation", (order - 2.0).abs(), 0.3)
                    .input("k", k)
                    .input("b", b)
                    .value("order", order)
                    .value("rel_diff", diffs),
            ));
        }
    }
    Ok(out)
}

pub fn ckn() -> Result<Vec<CaseRecord>> {
    let grid = AnnulusGrid::new(3, ORACLE_ANNULUS.0, ORACLE_ANNULUS.1, 1.0 / 200.0)?;
    let u = PolyBump::new(ORACLE_ANNULUS.0, ORACLE_ANNULUS.1)?;
    let report = verify_ckn_identity(&[-2.0, 0.0, 2.0], &u, &grid, 1e-3)?;
    Ok(report.cases.into_iter().map(|c| named("ckn", c)).collect())
}

/// Twenty bumps: five supports, two width ratios, powers 2 and 3.
pub fn sobolev_family() -> Result<Vec<PolyBump>> {
    let mut family = Vec::new();
    for lo in [0.1, 0.25, 0.5, 1.0, 2.0] {
        for ratio in [2.0, 4.0] {
            for power in [2, 3] {
                family.push(PolyBump::with_power(lo, lo * ratio, power)?);
            }
        }
    }
    Ok(family)
}

pub fn sobolev() -> Result<Vec<CaseRecord>> {
    let g = "sobolev";
    let rep = build_generators(3)?;
    let spec = spectrum_bruteforce(&rep, 1, DEFAULT_BASIS_CAP)?;
    let base = SeparableTestFunction::from_spectrum(&spec, 0, 0, PolyBump::new(0.5, 1.5)?)?;
    let mut out = Vec::new();
    for b in [0.0, -0.5] {
        let q = sobolev_quotient(&base, 3, b)?;
        let mut worst = 0.0f64;
        for lambda in [0.25, 0.5, 2.0, 4.0] {
            let ql = sobolev_quotient(&base.with_profile(base.profile.dilate(lambda)), 3, b)?;
            worst = worst.max(((ql - q) / q).abs());
        }
        out.push(named(
            g,
            CaseRecord::at_most("dilation_invariance", worst, 1e-8)
                .input("n", 3)
                .input("b", b)
                .value("quotient", q),
        ));
        let mut min_q = f64::INFINITY;
        for f in sobolev_family()? {
            for k in [0i64, -1] {
                let u = SeparableTestFunction::from_spectrum(&spec, k, 0, f)?;
                min_q = min_q.min(sobolev_quotient(&u, 3, b)?);
            }
        }
        out.push(named(
            g,
            CaseRecord::at_least("family_minimum_positive", min_q, f64::MIN_POSITIVE)
                .input("b", b)
                .input("members", 20)
                .value("C_lower_observed", min_q),
        ));
        if b == 0.0 {
            let s3 = sobolev_constant_3d();
            let standard = SeparableTestFunction::from_spectrum(&spec, 0, 0, StandardBump::new(1.0)?)?;
            let ratio = sobolev_quotient(&standard, 3, b)? / s3;
            out.push(named(
                g,
                CaseRecord::at_most("standard_bump_within_factor_3", ratio, 3.0)
                    .input("profile", "exp(-1/(1-r^2))")
                    .value("sobolev_constant", s3),
            ));
            out.push(named(
                g,
                CaseRecord::at_least("standard_bump_above_sobolev_constant", ratio, 1.0),
            ));
            // shells around the origin sit well above the sharp constant
            out.push(named(
                g,
                CaseRecord::info("annular_bump_over_sobolev_constant", q / s3).input("support", vec![0.5, 1.5]),
            ));
        }
    }
    Ok(out)
}

pub const REMAINDER_RADIUS: f64 = 1.0;

/// Twenty bumps inside `(R/e, R)`, where two iterated logs are defined.
pub fn remainder_family() -> Result<Vec<PolyBump>> {
    let lo_min = REMAINDER_RADIUS * (-1.0f64).exp() + 0.01;
    let mut family = Vec::new();
    for i in 0..5 {
        for j in 0..4 {
            let lo = lo_min + 0.08 * i as f64;
            let hi = (lo + 0.1 + 0.08 * j as f64).min(0.98 * REMAINDER_RADIUS);
            family.push(PolyBump::new(lo, hi)?);
        }
    }
    Ok(family)
}

pub fn remainder() -> Result<Vec<CaseRecord>> {
    let g = "remainder";
    let mut out = Vec::new();
    let family = remainder_family()?;
    for (variant, tag) in [
        (RemainderVariant::InverseSquare, "inverse_square"),
        (RemainderVariant::Literal, "literal"),
    ] {
        for levels in [1usize, 2] {
            let mut margins = Vec::new();
            let mut relative = Vec::new();
            for f in &family {
                let m = remainder_check(f, 3, 0.0, REMAINDER_RADIUS, levels, variant, RadialPower::Corrected)?;
                margins.push(m.margin);
                relative.push(m.margin / m.lhs);
            }
            let min = relative.iter().copied().fold(f64::INFINITY, f64::min);
            let negative = margins.iter().filter(|&&m| m < 0.0).count();
            let case = match variant {
                RemainderVariant::InverseSquare => CaseRecord::at_least(format!("{tag}_min_relative_margin"), min, 0.0),
                RemainderVariant::Literal => CaseRecord::info(format!("{tag}_min_relative_margin"), min),
            };
            out.push(named(
                g,
                case.input("n", 3)
                    .input("b", 0.0)
                    .input("R", REMAINDER_RADIUS)
                    .input("K", levels)
                    .value("margins", margins)
                    .value("relative_margins", relative)
                    .value("negative_count", negative),
            ));
        }
    }
    // b ≠ 0 separates the printed r^{-2} from the corrected r^{-b-2}
    for (power, tag) in [(RadialPower::Printed, "printed"), (RadialPower::Corrected, "corrected")] {
        for (variant, vtag) in [
            (RemainderVariant::InverseSquare, "inverse_square"),
            (RemainderVariant::Literal, "literal"),
        ] {
            let mut relative = Vec::new();
            for f in &family {
                let m = remainder_check(f, 3, -1.0, REMAINDER_RADIUS, 2, variant, power)?;
                relative.push(m.margin / m.lhs);
            }
            let min = relative.iter().copied().fold(f64::INFINITY, f64::min);
            out.push(named(
                g,
                CaseRecord::info(format!("{vtag}_{tag}_power_min_relative_margin"), min)
                    .input("n", 3)
                    .input("b", -1.0)
                    .input("R", REMAINDER_RADIUS)
                    .input("K", 2)
                    .value("relative_margins", relative),
            ));
        }
    }
    Ok(out)
}

/// Runs every group in order and aggregates the cases.
pub fn full_suite() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("full-suite");
    for group in GROUPS {
        report.extend(run_group(group)?);
    }
    Ok(report)
}

pub fn run_group(group: &str) -> Result<Vec<CaseRecord>> {
    match group {
        "constants" => constants_table(),
        "bruteforce" => bruteforce_equivalence(),
        "clifford" => clifford_exactness(),
        "identities" => operator_identities(),
        "spectrum" => spectrum_certificate(),
        "mode_oracle" => mode_oracle(),
        "sharpness" => sharpness(),
        "excluded_mode" => excluded_mode(),
        "log_weight" => log_weight(),
        "cartesian_oracle" => cartesian_oracle(),
        "ckn" => ckn(),
        "sobolev" => sobolev(),
        "remainder" => remainder(),
        other => Err(crate::error::Error::InvalidInput(format!(
            "unknown suite group {other}"
        ))),
    }
}

/// Cases of `report` belonging to `group`.
pub fn group_cases<'a>(report: &'a VerificationReport, group: &str) -> Vec<&'a crate::report::CaseRecord> {
    let prefix = format!("{group}.");
    report.cases.iter().filter(|c| c.name.starts_with(&prefix)).collect()
}
