use std::fs;
use std::path::PathBuf;

use dirac_hardy::angular::{is_admissible, spectrum_bruteforce, DEFAULT_BASIS_CAP};
use dirac_hardy::clifford::{build_generators, verify_clifford, CliffordJson, CliffordRep};
use dirac_hardy::constants::{hardy_constant, windowed_minimum, RemainderVariant};
use dirac_hardy::oracle::{oracle_study, SeparableTestFunction};
use dirac_hardy::profile::PolyBump;
use dirac_hardy::radial::{
    assemble_mode_pencil, excluded_mode_floor, min_eigenvalue, remainder_check, solve_mode, ConstraintSpec, GridRule,
    Weight, BISECTION_TOL,
};
use dirac_hardy::suite::{self, GROUPS};
use dirac_hardy::{CaseRecord, Error, ModeProblem, RadialGrid, VerificationReport};
use serde_json::json;

use crate::args::{
    ConstantsArgs, ConstrainedArgs, ExcludedArgs, ModeArgs, OracleArgs, RemainderArgs, SpectrumArgs, SuiteArgs,
};
use crate::output::{Cell, Format, Outcome, Table};
use crate::CliError;

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn check_nonempty<T>(name: &str, xs: &[T]) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::Usage(format!("--{name} must not be empty")));
    }
    Ok(())
}

/// `from, from+step, …, to`, rejecting empty or non-terminating ranges.
pub fn b_range(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(CliError::Usage(format!("bad range: from {from} to {to} step {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Usage(format!("range has {count} points")));
    }
    Ok((0..count).map(|i| from + i as f64 * step).collect())
}

pub fn constants(a: &ConstantsArgs) -> Result<Outcome, CliError> {
    let bs = match a.b {
        Some(b) => vec![b],
        None => b_range(a.b_from, a.b_to, a.step)?,
    };
    let mut table = Table::new(&["n", "b", "gamma", "c_b", "argmin_modes", "degenerate"]);
    let mut cases = Vec::new();
    for &b in &bs {
        let hc = hardy_constant(a.n, b)?;
        let (brute, brute_modes) = windowed_minimum(a.n, b, a.window);
        table.push(vec![
            a.n.into(),
            b.into(),
            hc.gamma.into(),
            hc.c_b.into(),
            join(&hc.argmin_modes).into(),
            hc.degenerate.into(),
        ]);
        cases.push(
            CaseRecord::at_most("closed_form_vs_window", (hc.c_b - brute).abs(), 1e-12)
                .input("n", a.n)
                .input("b", b)
                .value("c_b", hc.c_b)
                .value("windowed", brute)
                .value("argmin", hc.argmin_modes.clone())
                .value("windowed_argmin", brute_modes),
        );
    }
    let mut out = Outcome::new("constants", table)
        .config("n", a.n)
        .config("b", &bs)
        .config("window", a.window);
    out.report.extend(cases);
    Ok(out)
}

fn mode_grid(half_width: f64, points: Option<usize>, spacing_ratio: f64) -> Result<RadialGrid, CliError> {
    Ok(match points {
        Some(p) => RadialGrid::new(half_width, p)?,
        None => GridRule::SpacingRatio(spacing_ratio).grid(half_width)?,
    })
}

pub fn verify_mode(a: &ModeArgs) -> Result<Outcome, CliError> {
    check_nonempty("T-list", &a.t_list)?;
    let mode = ModeProblem::new(a.n, a.b, a.k)?;
    let mut table = Table::new(&["T", "N", "lambda_min", "closed_form", "abs_err", "rel_err", "residual"]);
    let mut cases = Vec::new();
    for &t in &a.t_list {
        let grid = RadialGrid::new(t, a.points)?;
        let r = min_eigenvalue(&assemble_mode_pencil(&grid, &mode, Weight::Hardy), BISECTION_TOL)?;
        let cf = mode.closed_form(t);
        let abs = (r.lambda_min - cf).abs();
        let rel = abs / cf.abs().max(f64::MIN_POSITIVE);
        table.push(vec![
            t.into(),
            a.points.into(),
            r.lambda_min.into(),
            cf.into(),
            abs.into(),
            rel.into(),
            r.residual.into(),
        ]);
        cases.push(
            CaseRecord::at_most("relative_error", rel, a.tol)
                .input("T", t)
                .input("N", a.points)
                .value("lambda_min", r.lambda_min)
                .value("closed_form", cf),
        );
    }
    let mut out = Outcome::new("verify-mode", table)
        .config("n", a.n)
        .config("b", a.b)
        .config("k", a.k)
        .config("T_list", &a.t_list)
        .config("points", a.points)
        .config("tol", a.tol);
    out.report.extend(cases);
    Ok(out)
}

pub fn verify_constrained(a: &ConstrainedArgs) -> Result<Outcome, CliError> {
    check_nonempty("T-list", &a.t_list)?;
    let hc = hardy_constant(a.n, a.b)?;
    let k = match (a.k, hc.degenerate_mode) {
        (Some(k), _) => k,
        (None, Some(j)) => j,
        (None, None) => return Err(Error::NotDegenerate { n: a.n, b: a.b }.into()),
    };
    if a.annulus.len() != 2 {
        return Err(CliError::Usage("--annulus takes two radii".into()));
    }
    let mode = ModeProblem::new(a.n, a.b, k)?;
    let spec = ConstraintSpec {
        annulus: (a.annulus[0], a.annulus[1]),
        radial_power: a.radial_power,
        ..ConstraintSpec::annulus_mean_zero()
    };
    let weight = a.weight;
    let mut table = Table::new(&[
        "T",
        "N",
        "lambda_min",
        "unconstrained_lambda1",
        "unconstrained_lambda2",
        "constraint_violation",
        "constraint_overlap",
    ]);
    let mut cases = Vec::new();
    let mut values = Vec::new();
    for &t in &a.t_list {
        let grid = mode_grid(t, a.points, a.spacing_ratio)?;
        let r = solve_mode(&grid, &mode, weight, &spec)?;
        values.push(r.result.lambda_min);
        table.push(vec![
            t.into(),
            grid.points().into(),
            r.result.lambda_min.into(),
            r.unconstrained.0.into(),
            r.unconstrained.1.into(),
            r.constraint_violation.into(),
            r.constraint_overlap.into(),
        ]);
        cases.push(
            CaseRecord::at_least("constrained_lambda_min", r.result.lambda_min, a.floor)
                .input("T", t)
                .input("N", grid.points())
                .value("residual", r.result.residual),
        );
        cases.push(CaseRecord::at_most("constraint_violation", r.constraint_violation, 1e-12).input("T", t));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    cases.push(CaseRecord::at_most("variation_ratio", hi / lo, a.max_ratio).value("lambda_min", values.clone()));
    cases.push(CaseRecord::info("C_est", *values.last().expect("nonempty T list")));
    let mut out = Outcome::new("verify-constrained", table)
        .config("n", a.n)
        .config("b", a.b)
        .config("k", k)
        .config("T_list", &a.t_list)
        .config("weight", weight)
        .config("annulus", &a.annulus)
        .config("radial_power", a.radial_power)
        .config("points", a.points)
        .config("spacing_ratio", a.spacing_ratio)
        .config("floor", a.floor)
        .config("max_ratio", a.max_ratio);
    out.report.extend(cases);
    Ok(out)
}

pub fn excluded_mode(a: &ExcludedArgs) -> Result<Outcome, CliError> {
    let f = excluded_mode_floor(a.n, a.b, a.half_width, GridRule::SpacingRatio(a.spacing_ratio))?;
    let mut table = Table::new(&["k", "lambda_min", "is_argmin"]);
    for &(k, l) in &f.per_mode {
        table.push(vec![k.into(), l.into(), f.argmin.contains(&k).into()]);
    }
    let neighbours = !f.argmin.is_empty() && f.argmin.iter().all(|&k| (k - f.j).abs() == 1);
    let mut out = Outcome::new("excluded-mode", table)
        .config("n", a.n)
        .config("b", a.b)
        .config("T", a.half_width)
        .config("spacing_ratio", a.spacing_ratio);
    out.report.extend([
        CaseRecord::at_least("floor_at_least_one", f.floor, 1.0)
            .input("j", f.j)
            .value("floor", f.floor),
        CaseRecord::at_most("floor_within_band", f.floor - 1.0, a.band),
        CaseRecord::check("attained_next_to_j", neighbours).value("argmin", f.argmin.clone()),
    ]);
    Ok(out)
}

fn load_generators(path: &PathBuf) -> Result<CliffordRep, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let json: CliffordJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad generator file {}: {e}", path.display())))?;
    Ok(CliffordRep::from_json_value(&json)?)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let rep = match &a.generators {
        Some(p) => load_generators(p)?,
        None => build_generators(a.n)?,
    };
    if rep.n() != a.n {
        return Err(CliError::Usage(format!(
            "generator file has n = {}, expected {}",
            rep.n(),
            a.n
        )));
    }
    let clifford = verify_clifford(&rep);
    let mut out_cases: Vec<CaseRecord> = clifford.cases;
    let mut table = Table::new(&["degree", "dimension", "eigenvalue", "multiplicity"]);
    let mut data = None;
    // a broken representation makes the spectrum meaningless
    if out_cases.iter().all(|c| c.pass) {
        let spec = spectrum_bruteforce(&rep, a.degree, a.basis_cap)?;
        for block in &spec.blocks {
            for &(k, m) in &block.eigenvalues {
                table.push(vec![
                    block.degree.to_string().into(),
                    block.dimension.into(),
                    k.into(),
                    m.into(),
                ]);
            }
            out_cases
                .push(CaseRecord::check("degree_block_complete", block.is_complete()).input("degree", block.degree));
        }
        let ks = spec.eigenvalues();
        out_cases.push(
            CaseRecord::check("eigenvalues_admissible", ks.iter().all(|&k| is_admissible(a.n, k)))
                .value("eigenvalues", ks),
        );
        data = Some(serde_json::to_value(spec.to_json_value(a.with_basis)).expect("spectrum serializes"));
    }
    let mut out = Outcome::new("spectrum", table)
        .config("n", a.n)
        .config("degree", a.degree)
        .config("generators", a.generators.as_ref().map(|p| p.display().to_string()));
    out.data = Some(data.unwrap_or(json!(null)));
    out.default_format = Format::Json;
    out.report.extend(out_cases);
    Ok(out)
}

pub fn oracle(a: &OracleArgs) -> Result<Outcome, CliError> {
    check_nonempty("b", &a.b)?;
    if a.annulus.len() != 2 {
        return Err(CliError::Usage("--annulus takes two radii".into()));
    }
    let (lo, hi) = (a.annulus[0], a.annulus[1]);
    let hs = if a.h_list.is_empty() {
        [50.0, 100.0, 200.0].iter().map(|d| (hi - lo) / d).collect()
    } else {
        a.h_list.clone()
    };
    let rep = build_generators(a.n)?;
    let profile = PolyBump::new(lo, hi)?;
    // lowest degree carrying the mode
    let mut u = None;
    for cap in 0..=4 {
        let spec = spectrum_bruteforce(&rep, cap, DEFAULT_BASIS_CAP)?;
        if spec.entry(a.k).is_some() {
            u = Some(SeparableTestFunction::from_spectrum(&spec, a.k, 0, profile)?);
            break;
        }
    }
    let u = u.ok_or(Error::ModeNotInSpectrum(a.k))?;
    let study = oracle_study(&rep, &u, &a.b, &hs, (lo, hi))?;

    let mut table = Table::new(&["h", "b", "cartesian", "polar", "rel_diff", "observed_order"]);
    let order_of = |b: f64| study.observed_order.iter().find(|o| o.0 == b).and_then(|o| o.1);
    for row in &study.rows {
        let order = order_of(row.b).map(Cell::F).unwrap_or_else(|| Cell::S(String::new()));
        table.push(vec![
            row.h.into(),
            row.b.into(),
            row.cartesian.into(),
            row.polar.into(),
            row.rel_diff.into(),
            order,
        ]);
    }
    let mut cases = Vec::new();
    for &(b, order) in &study.observed_order {
        let finest = study
            .rows
            .iter()
            .filter(|r| r.b == b)
            .min_by(|x, y| x.h.total_cmp(&y.h))
            .expect("one row per h");
        cases.push(
            CaseRecord::at_most("relative_difference_finest", finest.rel_diff, a.tol)
                .input("b", b)
                .input("h", finest.h),
        );
        if hs.len() >= 2 {
            cases.push(
                CaseRecord::at_most(
                    "observed_order_deviation",
                    order.map_or(f64::INFINITY, |p| (p - 2.0).abs()),
                    0.3,
                )
                .input("b", b)
                .value("observed_order", order),
            );
        }
    }
    let mut out = Outcome::new("oracle", table)
        .config("n", a.n)
        .config("k", a.k)
        .config("b", &a.b)
        .config("h_list", &hs)
        .config("annulus", &a.annulus)
        .config("tol", a.tol);
    out.report.extend(cases);
    Ok(out)
}

pub fn remainder(a: &RemainderArgs) -> Result<Outcome, CliError> {
    check_nonempty("K", &a.levels)?;
    let variants: Vec<RemainderVariant> = match a.variant.as_str() {
        "both" => vec![RemainderVariant::InverseSquare, RemainderVariant::Literal],
        v => vec![v.parse()?],
    };
    let family: Vec<PolyBump> = suite::remainder_family()?
        .into_iter()
        .map(|f| {
            let (lo, hi) = f.support();
            PolyBump::new(lo * a.radius, hi * a.radius)
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&[
        "variant",
        "K",
        "profile_lo",
        "profile_hi",
        "lhs",
        "leading",
        "remainder",
        "margin",
        "relative_margin",
    ]);
    let mut cases = Vec::new();
    for &variant in &variants {
        for &levels in &a.levels {
            let mut worst = f64::INFINITY;
            for f in &family {
                let m = remainder_check(f, a.n, a.b, a.radius, levels, variant, a.power)?;
                let (lo, hi) = f.support();
                let rel = m.margin / m.lhs;
                worst = worst.min(rel);
                table.push(vec![
                    variant.to_string().into(),
                    levels.into(),
                    lo.into(),
                    hi.into(),
                    m.lhs.into(),
                    m.leading.into(),
                    m.per_level.iter().sum::<f64>().into(),
                    m.margin.into(),
                    rel.into(),
                ]);
            }
            let name = format!("{variant}_min_relative_margin");
            let case = match variant {
                RemainderVariant::InverseSquare => CaseRecord::at_least(name, worst, 0.0),
                RemainderVariant::Literal => CaseRecord::info(name, worst),
            };
            cases.push(case.input("K", levels));
        }
    }
    let mut out = Outcome::new("remainder", table)
        .config("n", a.n)
        .config("b", a.b)
        .config("variant", &a.variant)
        .config("K", &a.levels)
        .config("R", a.radius)
        .config("power", a.power);
    out.report.extend(cases);
    Ok(out)
}

pub fn full_suite(a: &SuiteArgs) -> Result<Outcome, CliError> {
    let groups: Vec<String> = if a.groups.is_empty() {
        GROUPS.iter().map(|g| (*g).to_owned()).collect()
    } else {
        a.groups.clone()
    };
    if let Some(bad) = groups.iter().find(|g| !GROUPS.contains(&g.as_str())) {
        return Err(CliError::Usage(format!(
            "unknown group {bad}; known: {}",
            GROUPS.join(", ")
        )));
    }
    let mut report = VerificationReport::new("full-suite");
    for g in &groups {
        report.extend(suite::run_group(g)?);
    }
    if let Some(path) = &a.generators {
        let rep = load_generators(path)?;
        report.extend(verify_clifford(&rep).cases.into_iter().map(|mut c| {
            c.name = format!("clifford.supplied.{}", c.name);
            c
        }));
    }
    let mut table = Table::new(&["name", "measured", "tolerance", "relation", "margin", "pass"]);
    for c in &report.cases {
        let relation = serde_json::to_value(c.relation).expect("relation serializes");
        table.push(vec![
            c.name.clone().into(),
            c.measured.into(),
            c.tolerance.into(),
            relation.as_str().unwrap_or_default().into(),
            c.margin.into(),
            c.pass.into(),
        ]);
    }
    let mut out = Outcome::new("full-suite", table)
        .config("groups", &groups)
        .config("generators", a.generators.as_ref().map(|p| p.display().to_string()));
    out.report = report;
    out.data = Some(json!(null));
    out.default_format = Format::Json;
    Ok(out)
}
