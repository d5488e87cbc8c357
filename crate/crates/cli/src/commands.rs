//! Command handlers. Each returns a report and the exit code to use.

use hemifrustum::{
    angular_integral_closed, angular_integral_quadrature, appell_f2, frustum_triple_params,
    gauss_2f1, radial_integral_closed, radial_integral_quadrature, srivastava_f3,
    srivastava_f3_continued, surface_area_closed, surface_area_from_fractions,
    surface_area_quadrature, AppellF2Args, AreaReport, Error, HemiellipsoidFrustum,
    PlaneFractions, QuadResult, SeriesResult, ThirdArgumentSign, TripleSeriesParams,
    TruncationPolicy, DEFAULT_SHELL_BUDGET,
};

use crate::args::{
    AngularArgs, AreaArgs, F2Args, F3Args, Gauss2F1Args, GlobalOpts, Method, RadialArgs, Sign,
    VerifyArgs,
};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
/// `verify` ran to completion but the two values disagree.
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub type Outcome = Result<(Report, i32), Error>;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Pole(_) | Error::Divergence(_) => EXIT_VALIDATION,
        Error::SeriesNotConverged { .. } | Error::QuadratureNotConverged { .. } => {
            EXIT_CONVERGENCE
        }
    }
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Domain(_) => "domain",
        Error::Pole(_) => "pole",
        Error::Divergence(_) => "divergence",
        Error::SeriesNotConverged { .. } => "series_not_converged",
        Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
    }
}

fn policy(opts: &GlobalOpts, default_terms: usize) -> Result<TruncationPolicy, Error> {
    TruncationPolicy::new(opts.rel_tol, opts.max_terms.unwrap_or(default_terms), 3)
}

fn series_outcome(report: Report, series: &SeriesResult) -> (Report, i32) {
    let code = if series.converged { EXIT_OK } else { EXIT_CONVERGENCE };
    let mut report = report;
    if !series.converged {
        report.warn("series did not meet the stopping rule within the term budget");
    }
    (report, code)
}

fn add_series(report: &mut Report, name: &str, series: &SeriesResult) {
    report.diagnostic(name, series);
}

/// `|z| / ((1 - x)(1 - y))` for the triple series at plane fraction `t`.
fn continuation_ratio(b: f64, c: f64, t: f64) -> f64 {
    (c * t / b).powi(2) / (1.0 - t * t)
}

pub fn area(args: &AreaArgs, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, DEFAULT_SHELL_BUDGET)?;
    let (a, b, c) = (args.axes.a, args.axes.b, args.axes.c);
    let sign = match args.sign {
        Sign::Negative => ThirdArgumentSign::Negative,
        Sign::Positive => ThirdArgumentSign::Positive,
    };
    let mut report = Report::new("area");
    report.input("a", a).input("b", b).input("c", c);
    let area: AreaReport = match (args.lower, args.upper, args.beta, args.gamma) {
        (Some(h), Some(upper), None, None) => {
            report.input("h", h).input("H", upper);
            let frustum = HemiellipsoidFrustum::new(a, b, c, h, upper)?;
            if h == upper {
                report.warn("h = H: the frustum is empty");
            }
            let fractions = frustum.plane_fractions()?;
            surface_area_from_fractions(a, b, c, &fractions, sign, &policy)?
        }
        (None, None, Some(beta), Some(gamma)) => {
            report.input("beta", beta).input("gamma", gamma);
            let fractions = PlaneFractions::new(beta, gamma)?;
            surface_area_from_fractions(a, b, c, &fractions, sign, &policy)?
        }
        _ => {
            return Err(Error::Domain(
                "give exactly one of --h/--H or --beta/--gamma".into(),
            ))
        }
    };
    report.input("sign", area.sign);
    report
        .result("area", area.area)
        .result("f2_term_gamma", area.f2_term_gamma)
        .result("f2_term_beta", area.f2_term_beta)
        .result("f3_term_gamma", area.f3_term_gamma)
        .result("f3_term_beta", area.f3_term_beta)
        .result("beta", area.beta)
        .result("gamma", area.gamma);
    add_series(&mut report, "f2_gamma", &area.f2_gamma);
    add_series(&mut report, "f2_beta", &area.f2_beta);
    add_series(&mut report, "f3_gamma", &area.f3_gamma);
    add_series(&mut report, "f3_beta", &area.f3_beta);
    let ratio = continuation_ratio(b, c, area.gamma);
    report.diagnostic("triple_series_ratio_gamma", ratio);
    if ratio >= 1.0 {
        report.warn(format!(
            "the triple series diverges at gamma (|z| / ((1-x)(1-y)) = {ratio:.6}); \
             its value comes from analytic continuation in z"
        ));
    }
    if sign == ThirdArgumentSign::Positive {
        report.warn("the positive sign does not reproduce the surface integral");
    }
    Ok((report, EXIT_OK))
}

/// Quadrature tolerance used for a verification at `verify_tol`.
fn oracle_tol(verify_tol: f64) -> f64 {
    (verify_tol * 1e-2).clamp(1e-12, 1e-6)
}

pub fn verify(args: &VerifyArgs, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, DEFAULT_SHELL_BUDGET)?;
    if !(args.verify_tol > 0.0) {
        return Err(Error::Domain(format!(
            "verify-tol must be positive, got {}",
            args.verify_tol
        )));
    }
    let (a, b, c) = (args.axes.a, args.axes.b, args.axes.c);
    let mut report = Report::new("verify");
    report
        .input("a", a)
        .input("b", b)
        .input("c", c)
        .input("h", args.lower)
        .input("H", args.upper)
        .input("verify_tol", args.verify_tol);
    let frustum = HemiellipsoidFrustum::new(a, b, c, args.lower, args.upper)?;
    let fractions = frustum.plane_fractions()?;
    hemifrustum::check_area_convergence(a, b, c, fractions.gamma)?;

    let quad_tol = oracle_tol(args.verify_tol);
    report.diagnostic("quadrature_tol", quad_tol);
    let closed = surface_area_closed(&frustum, &policy);
    let oracle = surface_area_quadrature(&frustum, quad_tol);
    let (closed, oracle) = match (closed, oracle) {
        (Ok(cl), Ok(q)) => (cl, q),
        (cl, q) => {
            // report whatever each side produced, then fail on the first error
            let err = match (&cl, &q) {
                (Err(e), _) | (_, Err(e)) => e.clone(),
                _ => unreachable!(),
            };
            if exit_code(&err) != EXIT_CONVERGENCE {
                return Err(err);
            }
            report.result("closed_form", partial_value(cl.map(|r| r.area)));
            report.result("quadrature", partial_value(q.map(|r| r.value)));
            report.warn(err.to_string());
            return Ok((report, EXIT_CONVERGENCE));
        }
    };
    let deviation = (closed.area - oracle.value).abs();
    let scale = closed.area.abs().max(oracle.value.abs());
    let relative = if scale == 0.0 { 0.0 } else { deviation / scale };
    let passed = relative <= args.verify_tol;
    report
        .result("closed_form", closed.area)
        .result("quadrature", oracle.value)
        .result("abs_deviation", deviation)
        .result("rel_deviation", relative)
        .result("passed", passed);
    report.diagnostic("quadrature", quad_diag(&oracle));
    add_series(&mut report, "f2_gamma", &closed.f2_gamma);
    add_series(&mut report, "f3_gamma", &closed.f3_gamma);
    if !passed {
        report.warn(format!(
            "relative deviation {relative:e} exceeds {:e}",
            args.verify_tol
        ));
    }
    Ok((report, if passed { EXIT_OK } else { EXIT_MISMATCH }))
}

/// Best estimate carried by a convergence failure, if any.
fn partial_value(r: Result<f64, Error>) -> Option<f64> {
    match r {
        Ok(v) => Some(v),
        Err(Error::SeriesNotConverged { estimate, .. })
        | Err(Error::QuadratureNotConverged { estimate, .. }) => Some(estimate),
        Err(_) => None,
    }
}

fn quad_diag(q: &QuadResult) -> serde_json::Value {
    serde_json::json!({
        "error_estimate": q.error_estimate,
        "subdivisions": q.subdivisions,
    })
}

pub fn eval_f2(args: &F2Args, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, DEFAULT_SHELL_BUDGET)?;
    let f2 = AppellF2Args {
        a: args.a,
        b: args.b,
        c: args.c,
        d: args.d,
        g: args.g,
        x: args.x,
        y: args.y,
    };
    let series = appell_f2(&f2, &policy)?;
    let mut report = Report::new("eval-f2");
    report.input("args", f2);
    report.result("value", series.value);
    add_series(&mut report, "series", &series);
    Ok(series_outcome(report, &series))
}

pub fn eval_f3(args: &F3Args, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, DEFAULT_SHELL_BUDGET)?;
    let params = if args.frustum_params {
        frustum_triple_params()
    } else {
        TripleSeriesParams {
            a: args.a.clone(),
            b: args.b.clone(),
            b_prime: args.bp.clone(),
            b_double_prime: args.bpp.clone(),
            c: args.c.clone(),
            c_prime: args.cp.clone(),
            c_double_prime: args.cpp.clone(),
            e: args.e.clone(),
            g: args.g.clone(),
            g_prime: args.gp.clone(),
            g_double_prime: args.gpp.clone(),
            h: args.h.clone(),
            h_prime: args.hp.clone(),
            h_double_prime: args.hpp.clone(),
        }
    };
    let mut report = Report::new("eval-f3");
    report
        .input("params", &params)
        .input("x", args.x)
        .input("y", args.y)
        .input("z", args.z);
    let (series, method) = if args.shells {
        (srivastava_f3(&params, args.x, args.y, args.z, &policy)?, "shells")
    } else {
        match srivastava_f3_continued(&params, args.x, args.y, args.z, &policy) {
            Ok(s) => (s, "continued"),
            // parameter sets outside the continuation's hypotheses
            Err(Error::Domain(_)) => {
                (srivastava_f3(&params, args.x, args.y, args.z, &policy)?, "shells")
            }
            Err(e) => return Err(e),
        }
    };
    report.result("value", series.value);
    report.diagnostic("method", method);
    add_series(&mut report, "series", &series);
    Ok(series_outcome(report, &series))
}

pub fn eval_2f1(args: &Gauss2F1Args, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, TruncationPolicy::default().max_terms)?;
    let series = gauss_2f1(args.a, args.b, args.c, args.z, &policy)?;
    let mut report = Report::new("eval-2f1");
    report
        .input("a", args.a)
        .input("b", args.b)
        .input("c", args.c)
        .input("z", args.z);
    report.result("value", series.value);
    add_series(&mut report, "series", &series);
    Ok(series_outcome(report, &series))
}

/// Shared tail of the two integral commands.
fn integral_report(
    mut report: Report,
    method: Method,
    closed: impl FnOnce() -> Result<SeriesResult, Error>,
    quadrature: impl FnOnce() -> Result<QuadResult, Error>,
) -> Outcome {
    let mut code = EXIT_OK;
    let mut closed_value = None;
    let mut quad_value = None;
    if matches!(method, Method::Closed | Method::Both) {
        let s = closed()?;
        report.result("closed_form", s.value);
        add_series(&mut report, "series", &s);
        if !s.converged {
            code = EXIT_CONVERGENCE;
            report.warn("closed-form series did not converge");
        }
        closed_value = Some(s.value);
    }
    if matches!(method, Method::Quadrature | Method::Both) {
        let q = quadrature()?;
        report.result("quadrature", q.value);
        report.diagnostic("quadrature", quad_diag(&q));
        quad_value = Some(q.value);
    }
    if let (Some(c), Some(q)) = (closed_value, quad_value) {
        let scale = c.abs().max(q.abs());
        let rel = if scale == 0.0 { 0.0 } else { (c - q).abs() / scale };
        report.result("rel_deviation", rel);
    }
    Ok((report, code))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Quadrature => "quadrature",
        Method::Both => "both",
    }
}

pub fn integral_angular(args: &AngularArgs, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, TruncationPolicy::default().max_terms)?;
    let mut report = Report::new("integral angular");
    report
        .input("sigma", args.sigma)
        .input("lambda", args.lambda)
        .input("s", args.s)
        .input("method", method_name(args.method));
    let (sigma, lambda, s, tol) = (args.sigma, args.lambda, args.s, args.quad_tol);
    integral_report(
        report,
        args.method,
        || angular_integral_closed(sigma, lambda, s, &policy),
        || angular_integral_quadrature(sigma, lambda, s, tol),
    )
}

pub fn integral_radial(args: &RadialArgs, opts: &GlobalOpts) -> Outcome {
    let policy = policy(opts, TruncationPolicy::default().max_terms)?;
    let mut report = Report::new("integral radial");
    report
        .input("beta", args.beta)
        .input("gamma", args.gamma)
        .input("s", args.s)
        .input("method", method_name(args.method));
    let (beta, gamma, s, tol) = (args.beta, args.gamma, args.s, args.quad_tol);
    integral_report(
        report,
        args.method,
        || radial_integral_closed(beta, gamma, s, &policy),
        || radial_integral_quadrature(beta, gamma, s, tol),
    )
}
