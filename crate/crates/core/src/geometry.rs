//! The hemiellipsoid frustum and its closed-form integrals.
//!
//! The frustum is the part of `x^2/a^2 + y^2/b^2 + z^2/c^2 = 1, z >= 0`
//! between the planes `z = h` and `z = H`. Its projection on the `xy` plane
//! is the annulus between the ellipses of scaled radii `beta` and `gamma`,
//! with `beta^2 = 1 - H^2/c^2` and `gamma^2 = 1 - h^2/c^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multivar::{appell_f2, srivastava_f3_continued, AppellF2Args, TripleSeriesParams};
use crate::series::{SeriesResult, TruncationPolicy};
use crate::special::{gauss_2f1, is_nonpositive_integer, TWO_PI};

/// Semi-axes `a >= b > c > 0` and cutting planes `0 < lower <= upper < c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HemiellipsoidFrustum {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Height `h` of the lower cutting plane.
    pub lower: f64,
    /// Height `H` of the upper cutting plane.
    pub upper: f64,
}

/// Checks the semi-axes against `a >= b > c > 0` and the joint convergence
/// condition of the double series at the outer ellipse `gamma`. The joint
/// condition follows from `b > c`, so it can only fail together with it; it
/// is checked first because it names the analytic obstruction.
fn check_shape(a: f64, b: f64, c: f64, gamma: f64) -> Result<()> {
    check_axis_order(a, b, c)?;
    check_area_convergence(a, b, c, gamma)?;
    if !(b > c) {
        return Err(Error::domain(format!("requires b > c, got b = {b}, c = {c}")));
    }
    Ok(())
}

fn check_axis_order(a: f64, b: f64, c: f64) -> Result<()> {
    if ![a, b, c].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("semi-axes must be finite"));
    }
    if !(c > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("requires b, c > 0, got b = {b}, c = {c}")));
    }
    if !(a >= b) {
        return Err(Error::domain(format!("requires a >= b, got a = {a}, b = {b}")));
    }
    Ok(())
}

impl HemiellipsoidFrustum {
    /// Validated constructor. `lower == upper` is accepted as an empty
    /// frustum of zero area.
    pub fn new(a: f64, b: f64, c: f64, lower: f64, upper: f64) -> Result<Self> {
        let f = HemiellipsoidFrustum { a, b, c, lower, upper };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        check_axis_order(self.a, self.b, self.c)?;
        let (h, big_h, c) = (self.lower, self.upper, self.c);
        if !(h.is_finite() && big_h.is_finite()) {
            return Err(Error::domain("plane heights must be finite"));
        }
        if !(h > 0.0) {
            return Err(Error::domain(format!("requires h > 0, got h = {h}")));
        }
        if !(h <= big_h) {
            return Err(Error::domain(format!("requires h <= H, got h = {h}, H = {big_h}")));
        }
        if !(big_h < c) {
            return Err(Error::domain(format!("requires H < c, got H = {big_h}, c = {c}")));
        }
        check_shape(self.a, self.b, c, fraction(h, c))
    }

    pub fn plane_fractions(&self) -> Result<PlaneFractions> {
        plane_fractions(self)
    }

    /// The same solid with every length multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(k * self.a, k * self.b, k * self.c, k * self.lower, k * self.upper)
    }
}

/// Scaled radii of the two ellipses bounding the projected annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneFractions {
    pub beta: f64,
    pub gamma: f64,
}

impl PlaneFractions {
    /// Validated constructor: `0 < beta <= gamma < 1`.
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::domain(format!("requires beta > 0, got beta = {beta}")));
        }
        if !(beta <= gamma) {
            return Err(Error::domain(format!(
                "requires beta <= gamma, got beta = {beta}, gamma = {gamma}"
            )));
        }
        if !(gamma < 1.0) {
            return Err(Error::domain(format!("requires gamma < 1, got gamma = {gamma}")));
        }
        Ok(PlaneFractions { beta, gamma })
    }
}

/// `beta = sqrt(1 - H^2/c^2)`, `gamma = sqrt(1 - h^2/c^2)`.
pub fn plane_fractions(frustum: &HemiellipsoidFrustum) -> Result<PlaneFractions> {
    frustum.validate()?;
    Ok(PlaneFractions {
        beta: fraction(frustum.upper, frustum.c),
        gamma: fraction(frustum.lower, frustum.c),
    })
}

/// `sqrt(1 - z^2/c^2)`.
fn fraction(z: f64, c: f64) -> f64 {
    let u = z / c;
    ((1.0 - u) * (1.0 + u)).sqrt()
}

/// `phi(gamma) - phi(beta)`.
pub fn star_difference<F: Fn(f64) -> f64>(phi: F, gamma: f64, beta: f64) -> f64 {
    phi(gamma) - phi(beta)
}

/// Difference of two series evaluations, with budgets and error estimates
/// combined.
fn series_difference(upper: SeriesResult, lower: SeriesResult) -> SeriesResult {
    SeriesResult {
        value: upper.value - lower.value,
        terms_used: upper.terms_used + lower.terms_used,
        error_estimate: upper.error_estimate + lower.error_estimate,
        converged: upper.converged && lower.converged,
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if !s.is_finite() {
        return Err(Error::domain(format!("exponent s must be finite, got {s}")));
    }
    Ok(())
}

/// `integral_{-pi}^{pi} (cos^2 t / sigma^2 + sin^2 t / lambda^2)^s dt` for
/// `sigma >= lambda > 0`:
///
/// `2 pi lambda / sigma^(1 + 2s) * 2F1(1/2, 1 + s; 1; 1 - lambda^2/sigma^2)`.
pub fn angular_integral_sigma_major(
    sigma: f64,
    lambda: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_exponent(s)?;
    if !(lambda > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!(
            "requires finite sigma >= lambda > 0, got sigma = {sigma}, lambda = {lambda}"
        )));
    }
    if !(sigma >= lambda) {
        return Err(Error::domain(format!(
            "requires sigma >= lambda, got sigma = {sigma}, lambda = {lambda}; \
             use the lambda-major form"
        )));
    }
    if is_nonpositive_integer(1.0 + s) {
        return Err(Error::domain(format!("requires 1 + s not a nonpositive integer, got s = {s}")));
    }
    let ratio = lambda / sigma;
    let w = (1.0 - ratio) * (1.0 + ratio);
    let series = gauss_2f1(0.5, 1.0 + s, 1.0, w, policy)?;
    Ok(series.scaled(TWO_PI * lambda * sigma.powf(-1.0 - 2.0 * s)))
}

/// The same integral for `lambda >= sigma > 0`:
///
/// `2 pi sigma / lambda^(1 + 2s) * 2F1(1/2, 1 + s; 1; 1 - sigma^2/lambda^2)`.
pub fn angular_integral_lambda_major(
    sigma: f64,
    lambda: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if !(sigma > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!(
            "requires finite lambda >= sigma > 0, got sigma = {sigma}, lambda = {lambda}"
        )));
    }
    if !(lambda >= sigma) {
        return Err(Error::domain(format!(
            "requires lambda >= sigma, got sigma = {sigma}, lambda = {lambda}; \
             use the sigma-major form"
        )));
    }
    // the integrand is symmetric under t -> pi/2 - t with the axes swapped
    angular_integral_sigma_major(lambda, sigma, s, policy)
}

/// Angular integral for any positive pair, choosing the convergent form.
pub fn angular_integral_closed(
    sigma: f64,
    lambda: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if sigma >= lambda {
        angular_integral_sigma_major(sigma, lambda, s, policy)
    } else {
        angular_integral_lambda_major(sigma, lambda, s, policy)
    }
}

/// Antiderivative `t^(2+2s) / (2(1+s)) * 2F1(s, 1+s; 2+s; t^2)` of
/// `r^(2s+1) (1 - r^2)^(-s)`.
fn radial_antiderivative(t: f64, s: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    let series = gauss_2f1(s, 1.0 + s, 2.0 + s, t * t, policy)?;
    Ok(series.scaled(t.powf(2.0 + 2.0 * s) / (2.0 * (1.0 + s))))
}

/// `integral_beta^gamma r^(2s+1) (1 - r^2)^(-s) dr` for `0 < beta <= gamma < 1`.
pub fn radial_integral_closed(
    beta: f64,
    gamma: f64,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_exponent(s)?;
    if is_nonpositive_integer(1.0 + s) {
        return Err(Error::pole(format!(
            "the antiderivative has a pole at 1 + s = {}",
            1.0 + s
        )));
    }
    if !(0.0 < beta && beta <= gamma && gamma < 1.0) {
        return Err(Error::domain(format!(
            "requires 0 < beta <= gamma < 1, got beta = {beta}, gamma = {gamma}"
        )));
    }
    let upper = radial_antiderivative(gamma, s, policy)?;
    let lower = radial_antiderivative(beta, s, policy)?;
    Ok(series_difference(upper, lower))
}

/// Which sign to give the third argument `-/+ c^2 t^2 / a^2` of the triple
/// series. Only [`ThirdArgumentSign::Negative`] reproduces the defining
/// integral; the other choice is kept for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThirdArgumentSign {
    #[default]
    Negative,
    Positive,
}

impl ThirdArgumentSign {
    fn factor(self) -> f64 {
        match self {
            ThirdArgumentSign::Negative => -1.0,
            ThirdArgumentSign::Positive => 1.0,
        }
    }
}

/// Parameter groups of the triple series in the area formula:
/// `b' = (2, 3)`, `b'' = (2)`, `c = (1/2)`, `c' = (1)`, `c'' = (1/2)`,
/// `g' = (4)`, `h = (1)`, `h' = (2)`, `h'' = (2, 2)`.
pub fn frustum_triple_params() -> TripleSeriesParams {
    TripleSeriesParams {
        b_prime: vec![2.0, 3.0],
        b_double_prime: vec![2.0],
        c: vec![0.5],
        c_prime: vec![1.0],
        c_double_prime: vec![0.5],
        g_prime: vec![4.0],
        h: vec![1.0],
        h_prime: vec![2.0],
        h_double_prime: vec![2.0, 2.0],
        ..Default::default()
    }
}

/// Closed-form area with its four summands and the series behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub area: f64,
    pub f2_term_gamma: f64,
    pub f2_term_beta: f64,
    pub f3_term_gamma: f64,
    pub f3_term_beta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sign: ThirdArgumentSign,
    pub f2_gamma: SeriesResult,
    pub f2_beta: SeriesResult,
    pub f3_gamma: SeriesResult,
    pub f3_beta: SeriesResult,
}

/// Prefactors `(b^2 gamma^2 pi, b^2 beta^2 pi, b^2 c^2 gamma^6 pi / (6a^2),
/// b^2 c^2 beta^6 pi / (6a^2))` of the four summands.
pub fn surface_area_term_coefficients(
    a: f64,
    b: f64,
    c: f64,
    fractions: &PlaneFractions,
) -> [f64; 4] {
    let (bb, g2, be2) = (b * b, fractions.gamma.powi(2), fractions.beta.powi(2));
    let k = bb * c * c / (6.0 * a * a);
    [
        bb * g2 * PI,
        bb * be2 * PI,
        k * g2 * g2 * g2 * PI,
        k * be2 * be2 * be2 * PI,
    ]
}

/// The joint convergence condition `|1 - b^2/a^2| + c^2 gamma^2 / a^2 < 1`
/// of the double series at the outer ellipse.
pub fn check_area_convergence(a: f64, b: f64, c: f64, gamma: f64) -> Result<()> {
    let x = 1.0 - (b / a) * (b / a);
    let y = (c * gamma / a).powi(2);
    if !(x.abs() + y < 1.0) {
        return Err(Error::divergence(format!(
            "requires |1 - b^2/a^2| + c^2 gamma^2/a^2 < 1, got {} + {} = {}",
            x.abs(),
            y,
            x.abs() + y
        )));
    }
    Ok(())
}

fn require_converged(r: SeriesResult, term: &str) -> Result<SeriesResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::SeriesNotConverged {
            term: term.to_string(),
            estimate: r.value,
            error_estimate: r.error_estimate,
        })
    }
}

/// Curved area of the frustum from the closed form, with the third triple
/// series argument taken negative.
pub fn surface_area_closed(
    frustum: &HemiellipsoidFrustum,
    policy: &TruncationPolicy,
) -> Result<AreaReport> {
    let fractions = frustum.plane_fractions()?;
    surface_area_from_fractions(
        frustum.a,
        frustum.b,
        frustum.c,
        &fractions,
        ThirdArgumentSign::Negative,
        policy,
    )
}

/// Curved area over the annulus `beta <= r <= gamma`:
///
/// ```text
/// Phi(t) = b^2 t^2 pi F2(1; 1/2, -1/2; 1, 2; x, -c^2 t^2/a^2)
///        + b^2 c^2 t^6 pi / (6 a^2) F3(x, t^2, -/+ c^2 t^2/a^2)
/// area   = Phi(gamma) - Phi(beta),   x = 1 - b^2/a^2
/// ```
pub fn surface_area_from_fractions(
    a: f64,
    b: f64,
    c: f64,
    fractions: &PlaneFractions,
    sign: ThirdArgumentSign,
    policy: &TruncationPolicy,
) -> Result<AreaReport> {
    policy.validate()?;
    let PlaneFractions { beta, gamma } = PlaneFractions::new(fractions.beta, fractions.gamma)?;
    check_shape(a, b, c, gamma)?;

    let x = 1.0 - (b / a) * (b / a);
    let params = frustum_triple_params();
    let [k2g, k2b, k3g, k3b] = surface_area_term_coefficients(a, b, c, fractions);
    let f2_at = |t: f64| {
        let args = AppellF2Args {
            a: 1.0,
            b: 0.5,
            c: -0.5,
            d: 1.0,
            g: 2.0,
            x,
            y: -(c * t / a).powi(2),
        };
        appell_f2(&args, policy)
    };
    let f3_at = |t: f64| {
        let z = sign.factor() * (c * t / a).powi(2);
        srivastava_f3_continued(&params, x, t * t, z, policy)
    };

    let f2_gamma = require_converged(f2_at(gamma)?, "double series at gamma")?;
    let f2_beta = require_converged(f2_at(beta)?, "double series at beta")?;
    let f3_gamma = require_converged(f3_at(gamma)?, "triple series at gamma")?;
    let f3_beta = require_converged(f3_at(beta)?, "triple series at beta")?;

    let f2_term_gamma = k2g * f2_gamma.value;
    let f2_term_beta = k2b * f2_beta.value;
    let f3_term_gamma = k3g * f3_gamma.value;
    let f3_term_beta = k3b * f3_beta.value;
    Ok(AreaReport {
        area: f2_term_gamma - f2_term_beta + f3_term_gamma - f3_term_beta,
        f2_term_gamma,
        f2_term_beta,
        f3_term_gamma,
        f3_term_beta,
        beta,
        gamma,
        sign,
        f2_gamma,
        f2_beta,
        f3_gamma,
        f3_beta,
    })
}
