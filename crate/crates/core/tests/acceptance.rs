//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed on a normal
//! `cargo test` run; the process exits non-zero if any criterion fails.
//! Tolerances and time limits are pinned as constants next to each check.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hemifrustum::{
    angular_integral_lambda_major, angular_integral_quadrature, angular_integral_sigma_major,
    appell_f2, check_f3_convergence, four_f3_negative_denominator_reduction,
    frustum_triple_params, gauss_2f1, radial_integral_closed, radial_integral_quadrature,
    srivastava_f3, surface_area_closed, surface_area_from_fractions, surface_area_quadrature,
    surface_area_term_coefficients, AppellF2Args, Error, HemiellipsoidFrustum, PlaneFractions,
    ThirdArgumentSign, TripleSeriesParams, TruncationPolicy,
};
mod common;

use common::{appell_f2_iterated, gauss_2f1_direct, shifted_4f3_sum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_f2f3;

type Check = fn() -> Result<Verdict, Error>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("problem 1 area", problem_one),
        ("problem 2 area", problem_two),
        ("term prefactors", prefactors),
        ("closed form vs quadrature, 50 random frusta", oracle_agreement),
        ("sign of the third triple-series argument", sign_adjudication),
        ("angular and radial integrals vs quadrature", integral_grids),
        ("4F3 negative-denominator reduction", reduction_identity),
        ("F2 iterated sum and collapse to 2F1 at y = 0, c = 0", f2_identities),
        ("triple-series convergence gate", convergence_gate),
        ("scale covariance and additivity", scale_and_additivity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check().unwrap_or_else(|e| verdict(false, format!("error: {e}")));
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} - {name}: {} [{:.1} s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn problem_one() -> Result<Verdict, Error> {
    const WANT: f64 = 6.1749238;
    const TOL: f64 = 1e-6;
    const LIMIT: Duration = Duration::from_secs(5);
    let fractions = PlaneFractions::new(0.2, 0.6)?;
    let (report, took) = timed(|| {
        surface_area_from_fractions(3.0, 2.0, 1.0, &fractions, ThirdArgumentSign::Negative, &policy())
    });
    let area = report?.area;
    let r = rel(area, WANT);
    Ok(verdict(
        r <= TOL && took < LIMIT,
        format!("area {area:.10} vs {WANT}, rel {r:.1e} <= {TOL:.0e}, {took:.2?} < {LIMIT:?}"),
    ))
}

fn problem_two() -> Result<Verdict, Error> {
    const WANT: f64 = 28.41904;
    const TOL: f64 = 1e-4;
    const LIMIT: Duration = Duration::from_secs(5);
    let frustum = HemiellipsoidFrustum::new(5.0, 3.0, 2.0, 1.2, 3.64f64.sqrt())?;
    let (report, took) = timed(|| surface_area_closed(&frustum, &policy()));
    let area = report?.area;
    let r = rel(area, WANT);
    Ok(verdict(
        r <= TOL && took < LIMIT,
        format!("area {area:.10} vs {WANT}, rel {r:.1e} <= {TOL:.0e}, {took:.2?} < {LIMIT:?}"),
    ))
}

/// A prefactor as printed in the worked problems, in units of pi.
enum Printed {
    /// A rounded decimal: compared directly.
    Rounded(f64),
    /// A decimal printed with trailing dots, i.e. the leading digits of a
    /// longer expansion. It stands for the interval `[digits, digits + ulp)`
    /// of values sharing those digits; the value is also held to the exact
    /// rational prefactor, so the check is no looser than the rounded case.
    Truncated { digits: &'static str, exact: f64 },
}

fn prefactors() -> Result<Verdict, Error> {
    const TOL: f64 = 1e-6;
    let one = PlaneFractions::new(0.2, 0.6)?;
    let two = HemiellipsoidFrustum::new(5.0, 3.0, 2.0, 1.2, 3.64f64.sqrt())?.plane_fractions()?;
    let cases = [
        (surface_area_term_coefficients(3.0, 2.0, 1.0, &one), [
            Printed::Rounded(1.44),
            Printed::Rounded(0.16),
            Printed::Rounded(0.003456),
            // 4 * 0.2^6 / 54 = 2 / 421875
            Printed::Truncated { digits: "0.000004740", exact: 2.0 / 421875.0 },
        ]),
        (surface_area_term_coefficients(5.0, 3.0, 2.0, &two), [
            Printed::Rounded(5.76),
            Printed::Rounded(0.81),
            Printed::Rounded(0.0629146),
            Printed::Rounded(0.00017496),
        ]),
    ];
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for (computed, printed) in &cases {
        for (value, want) in computed.iter().zip(printed) {
            let v = value / PI;
            let ok = match want {
                Printed::Rounded(w) => {
                    let r = rel(v, *w);
                    worst = worst.max(r);
                    r <= TOL
                }
                Printed::Truncated { digits, exact } => {
                    let lo: f64 = digits.parse().unwrap();
                    let places = digits.split('.').nth(1).unwrap().len() as i32;
                    let hi = lo + 10f64.powi(-places);
                    let r = rel(v, *exact);
                    worst = worst.max(r);
                    lo <= v && v < hi && r <= TOL
                }
            };
            if !ok {
                misses.push(format!("{v:.10e}"));
            }
        }
    }
    Ok(verdict(
        misses.is_empty(),
        format!(
            "8 prefactors, worst rel {worst:.1e} <= {TOL:.0e}; 0.000004740... read as a truncated \
             expansion (computed {:.10e}){}",
            cases[0].0[3] / PI,
            if misses.is_empty() { String::new() } else { format!("; misses {misses:?}") }
        ),
    ))
}

/// Seeded draws from the admissible box, filtered by the F2 precondition.
fn random_frusta(count: usize) -> Vec<HemiellipsoidFrustum> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c: f64 = rng.gen_range(0.5..=2.0);
        let b: f64 = c * rng.gen_range(1.1..=3.0);
        let a = b * rng.gen_range(1.0..=2.0);
        let h_frac: f64 = rng.gen_range(0.1..=0.6);
        let big_h_frac = rng.gen_range(h_frac + 0.1..=0.95);
        let gamma2 = 1.0 - h_frac * h_frac;
        if (1.0 - (b / a).powi(2)).abs() + (c / a).powi(2) * gamma2 >= 1.0 {
            continue;
        }
        out.push(HemiellipsoidFrustum::new(a, b, c, h_frac * c, big_h_frac * c).unwrap());
    }
    out
}

const ORACLE_TOL: f64 = 1e-6;
const QUAD_TOL: f64 = 1e-10;

/// Relative deviation of the closed form (with the given sign) from the
/// quadrature oracle; `None` when the closed form fails to evaluate.
fn deviation(f: &HemiellipsoidFrustum, oracle: f64, sign: ThirdArgumentSign) -> Option<f64> {
    let fr = f.plane_fractions().ok()?;
    let report = surface_area_from_fractions(f.a, f.b, f.c, &fr, sign, &policy()).ok()?;
    Some(rel(report.area, oracle))
}

fn oracles(frusta: &[HemiellipsoidFrustum]) -> Result<Vec<f64>, Error> {
    frusta.iter().map(|f| Ok(surface_area_quadrature(f, QUAD_TOL)?.value)).collect()
}

fn oracle_agreement() -> Result<Verdict, Error> {
    const LIMIT: Duration = Duration::from_secs(600);
    let start = Instant::now();
    let frusta = random_frusta(50);
    let quad = oracles(&frusta)?;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (f, q) in frusta.iter().zip(&quad) {
        match deviation(f, *q, ThirdArgumentSign::Negative) {
            Some(r) if r <= ORACLE_TOL => worst = worst.max(r),
            Some(r) => {
                worst = worst.max(r);
                failures += 1;
            }
            None => failures += 1,
        }
    }
    let took = start.elapsed();
    Ok(verdict(
        failures == 0 && took < LIMIT,
        format!(
            "{} frusta (seed {SEED:#x}), {failures} outside tolerance, worst rel {worst:.1e} <= \
             {ORACLE_TOL:.0e}, {took:.1?} < {LIMIT:?}",
            frusta.len()
        ),
    ))
}

fn sign_adjudication() -> Result<Verdict, Error> {
    const MISMATCH: f64 = 1e-3;
    let frusta = random_frusta(50);
    let quad = oracles(&frusta)?;
    let mut negative_ok = true;
    let (mut positive_misses, mut positive_errors, mut positive_worst) = (0, 0, 0.0f64);
    for (f, q) in frusta.iter().zip(&quad) {
        negative_ok &= matches!(deviation(f, *q, ThirdArgumentSign::Negative), Some(r) if r <= ORACLE_TOL);
        match deviation(f, *q, ThirdArgumentSign::Positive) {
            Some(r) => {
                positive_worst = positive_worst.max(r);
                if r > MISMATCH {
                    positive_misses += 1;
                }
            }
            None => positive_errors += 1,
        }
    }
    let positive_fails = positive_misses + positive_errors > 0;
    Ok(verdict(
        negative_ok && positive_fails,
        format!(
            "negative sign agrees on all: {negative_ok}; positive sign off by > {MISMATCH:.0e} on \
             {positive_misses} and fails to evaluate on {positive_errors} (worst rel \
             {positive_worst:.1e}); fixed sign: negative"
        ),
    ))
}

fn integral_grids() -> Result<Verdict, Error> {
    const TOL: f64 = 1e-9;
    const LIMIT: Duration = Duration::from_secs(120);
    let start = Instant::now();
    let p = policy();
    let mut worst = 0.0f64;
    let mut checks = 0;
    let mut note = |r: f64| {
        worst = worst.max(r);
        checks += 1;
    };

    let ratios = [1.0, 1.25, 2.0, 3.7, 6.0, 10.0];
    for s in [-0.5, -0.25, 0.25, 0.5, 1.0] {
        for k in ratios {
            let (major, minor) = (1.3 * k, 1.3);
            // sigma-major and lambda-major forms, each against its integral
            let closed = angular_integral_sigma_major(major, minor, s, &p)?.value;
            note(rel(closed, angular_integral_quadrature(major, minor, s, 1e-13)?.value));
            let closed = angular_integral_lambda_major(minor, major, s, &p)?.value;
            note(rel(closed, angular_integral_quadrature(minor, major, s, 1e-13)?.value));
        }
        // the two forms meet at sigma = lambda from either side
        let lambda: f64 = 0.8;
        let at_equal = 2.0 * PI * lambda.powf(-2.0 * s);
        for eps in [1e-4, 1e-8, 1e-12, 0.0] {
            let above = lambda * (1.0 + eps);
            let below = lambda * (1.0 - eps);
            let t1 = angular_integral_sigma_major(above, lambda, s, &p)?.value;
            let t2 = angular_integral_lambda_major(lambda, above, s, &p)?.value;
            note(rel(t1, t2));
            let t1 = angular_integral_sigma_major(lambda, below, s, &p)?.value;
            let t2 = angular_integral_lambda_major(below, lambda, s, &p)?.value;
            note(rel(t1, t2));
            if eps <= 1e-12 {
                note(rel(t1, at_equal));
            }
        }
    }

    let edges = [0.05, 0.2, 0.5, 0.8, 0.95];
    for s in [-0.5, 0.5, 1.0, 2.0] {
        for (i, &beta) in edges.iter().enumerate() {
            for &gamma in &edges[i + 1..] {
                let closed = radial_integral_closed(beta, gamma, s, &p)?.value;
                note(rel(closed, radial_integral_quadrature(beta, gamma, s, 1e-13)?.value));
            }
        }
    }
    let took = start.elapsed();
    Ok(verdict(
        worst <= TOL && took < LIMIT,
        format!("{checks} comparisons, worst rel {worst:.1e} <= {TOL:.0e}, {took:.1?} < {LIMIT:?}"),
    ))
}

fn reduction_identity() -> Result<Verdict, Error> {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let [a, b, c, d] = [0; 4].map(|_| rng.gen_range(0.1..2.5));
        let [e, g] = [0; 2].map(|_| rng.gen_range(0.5..3.0));
        let p = rng.gen_range(0..4usize);
        let z = rng.gen_range(-0.5..0.5);
        let reduced = four_f3_negative_denominator_reduction(a, b, c, d, e, g, p, z, &policy())?;
        worst = worst.max(rel(reduced.value, shifted_4f3_sum(a, b, c, d, e, g, p, z)));
    }
    Ok(verdict(worst <= TOL, format!("20 draws, worst rel {worst:.1e} <= {TOL:.0e}")))
}

fn f2_identities() -> Result<Verdict, Error> {
    const TOL: f64 = 1e-11;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let (mut worst_iter, mut worst_collapse) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let [a, b, c] = [0; 3].map(|_| rng.gen_range(0.1..2.5));
        let [d, g] = [0; 2].map(|_| rng.gen_range(0.5..3.0));
        let x: f64 = rng.gen_range(-0.8..0.8);
        let y = rng.gen_range(-1.0..1.0) * (0.8 - x.abs());
        let args = AppellF2Args { a, b, c, d, g, x, y };
        let f2 = appell_f2(&args, &policy())?.value;
        // sum_n (a)_n (c)_n y^n / ((g)_n n!) 2F1(a + n, b; d; x)
        let iterated = appell_f2_iterated(a, b, c, d, g, x, y);
        worst_iter = worst_iter.max(rel(f2, iterated));

        let gauss = gauss_2f1_direct(a, b, d, x);
        for collapsed in [AppellF2Args { y: 0.0, ..args }, AppellF2Args { c: 0.0, ..args }] {
            let value = appell_f2(&collapsed, &policy())?.value;
            worst_collapse = worst_collapse.max(rel(value, gauss));
        }
        worst_collapse = worst_collapse.max(rel(gauss_2f1(a, b, d, x, &policy())?.value, gauss));
    }
    Ok(verdict(
        worst_iter <= TOL && worst_collapse <= TOL,
        format!(
            "20 draws, iterated worst rel {worst_iter:.1e}, collapse worst rel \
             {worst_collapse:.1e} <= {TOL:.0e}"
        ),
    ))
}

fn convergence_gate() -> Result<Verdict, Error> {
    let params = frustum_triple_params();
    let margins = params.counts().convergence_margins();
    let unbalanced = TripleSeriesParams { a: vec![1.0, 1.0, 1.0], ..Default::default() };
    let unbalanced_margins = unbalanced.counts().convergence_margins();
    let rejected = !check_f3_convergence(&unbalanced)
        && matches!(
            srivastava_f3(&unbalanced, 0.1, 0.1, 0.1, &TruncationPolicy::triple_default()),
            Err(Error::Divergence(_))
        );
    Ok(verdict(
        margins == [0, 0, 0] && check_f3_convergence(&params) && rejected,
        format!(
            "area parameters margins {margins:?}, accepted: {}; A = 3 margins \
             {unbalanced_margins:?}, rejected: {rejected}",
            check_f3_convergence(&params)
        ),
    ))
}

fn scale_and_additivity() -> Result<Verdict, Error> {
    const SCALE_TOL: f64 = 1e-10;
    const ADD_TOL: f64 = 1e-9;
    let p = policy();
    let area = |f: &HemiellipsoidFrustum| -> Result<f64, Error> { Ok(surface_area_closed(f, &p)?.area) };
    let shapes = [
        HemiellipsoidFrustum::new(5.0, 3.0, 2.0, 1.2, 3.64f64.sqrt())?,
        HemiellipsoidFrustum::new(3.0, 2.0, 1.0, 0.3, 0.9)?,
        // the triple series needs continuation at this one
        HemiellipsoidFrustum::new(1.2, 1.1, 1.0, 0.1, 0.6)?,
    ];
    let (mut worst_scale, mut worst_add) = (0.0f64, 0.0f64);
    for f in &shapes {
        let base = area(f)?;
        for k in [0.37, 2.5, 10.0] {
            worst_scale = worst_scale.max(rel(area(&f.scaled(k)?)?, k * k * base));
        }
        for t in [0.25, 0.5, 0.8] {
            let m = f.lower + t * (f.upper - f.lower);
            let low = area(&HemiellipsoidFrustum::new(f.a, f.b, f.c, f.lower, m)?)?;
            let high = area(&HemiellipsoidFrustum::new(f.a, f.b, f.c, m, f.upper)?)?;
            worst_add = worst_add.max(rel(low + high, base));
        }
    }
    Ok(verdict(
        worst_scale <= SCALE_TOL && worst_add <= ADD_TOL,
        format!(
            "scale worst rel {worst_scale:.1e} <= {SCALE_TOL:.0e}, additivity worst rel \
             {worst_add:.1e} <= {ADD_TOL:.0e}"
        ),
    ))
}
