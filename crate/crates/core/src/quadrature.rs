//! Adaptive Gauss-Kronrod quadrature and the defining integrals used as an
//! independent check on the closed forms.
//!
//! Each panel is integrated with the 7-point Gauss rule embedded in the
//! 15-point Kronrod rule; the difference, rescaled as in QUADPACK's QK15,
//! is the panel error indicator. The panel with the largest indicator is
//! bisected until the summed indicator meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HemiellipsoidFrustum;

/// Default cap on integrand evaluations per integral.
pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// `Ok(None)` when the integrand is not finite at some node.
fn gauss_kronrod<F>(f: &mut F, lo: f64, hi: f64) -> Result<Option<Panel>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx)?, f(center + dx)?);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let (value, res_abs, res_asc) = (kronrod * half, res_abs * half.abs(), res_asc * half.abs());
    if !value.is_finite() {
        return Ok(None);
    }
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Some(Panel {
        lo,
        hi,
        value,
        error,
    }))
}

/// Fallible-integrand core of [`adaptive_quad_1d`]. Integrand errors abort
/// the integration and are returned unchanged.
pub fn try_adaptive_quad<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::domain(format!(
            "quadrature needs finite lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if !(abs_tol >= 0.0 && rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0) {
        return Err(Error::domain("quadrature needs a positive tolerance"));
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let Some(first) = gauss_kronrod(&mut f, lo, hi)? else {
        return Err(Error::domain(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    };
    let mut evals = 15;
    let mut subdivisions = 0;
    let mut value = first.value;
    let mut error = first.error;
    let mut settled: Vec<Panel> = Vec::new();
    heap.push(first);

    loop {
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        let Some(worst) = heap.pop() else {
            // every remaining panel is too narrow to split
            return Err(Error::QuadratureNotConverged {
                axis: "integrand".into(),
                estimate: value,
                error_estimate: error,
            });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            settled.push(worst);
            continue;
        }
        if evals + 30 > max_evals {
            return Err(Error::QuadratureNotConverged {
                axis: "integrand".into(),
                estimate: value,
                error_estimate: error,
            });
        }
        let halves = (
            gauss_kronrod(&mut f, worst.lo, mid)?,
            gauss_kronrod(&mut f, mid, worst.hi)?,
        );
        evals += 30;
        let (Some(left), Some(right)) = halves else {
            // a node of a half landed on an integrable singularity; the
            // parent estimate is as far as bisection can go here
            settled.push(worst);
            continue;
        };
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if subdivisions % 64 == 0 {
            // refresh the running totals to stop drift
            let (v, e) = totals(heap.iter().chain(settled.iter()));
            value = v;
            error = e;
        }
    }

    let (value, error) = totals(heap.iter().chain(settled.iter()));
    Ok(QuadResult {
        value,
        error_estimate: error,
        subdivisions,
    })
}

/// Sums panel values in order of their left endpoints, so the result does
/// not depend on heap layout.
fn totals<'a>(panels: impl Iterator<Item = &'a Panel>) -> (f64, f64) {
    let mut all: Vec<&Panel> = panels.collect();
    all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    all.iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Integrates `f` over `[lo, hi]` to within `max(abs_tol, rel_tol * |I|)`
/// using at most [`DEFAULT_MAX_EVALS`] evaluations.
pub fn adaptive_quad_1d<F>(f: F, lo: f64, hi: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_adaptive_quad(|t| Ok(f(t)), lo, hi, abs_tol, rel_tol, DEFAULT_MAX_EVALS)
}

fn relabel(err: Error, axis: &str) -> Error {
    match err {
        Error::QuadratureNotConverged {
            estimate,
            error_estimate,
            ..
        } => Error::QuadratureNotConverged {
            axis: axis.to_string(),
            estimate,
            error_estimate,
        },
        other => other,
    }
}

/// `integral_{-pi}^{pi} (cos^2 t / sigma^2 + sin^2 t / lambda^2)^s dt`,
/// computed as four times the integral over `[0, pi/2]`.
pub fn angular_integral_quadrature(sigma: f64, lambda: f64, s: f64, tol: f64) -> Result<QuadResult> {
    if !(sigma > 0.0 && lambda > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "angular integral needs sigma, lambda > 0, got ({sigma}, {lambda})"
        )));
    }
    let (is2, il2) = (1.0 / (sigma * sigma), 1.0 / (lambda * lambda));
    let r = try_adaptive_quad(
        |t| {
            let (sn, cs) = t.sin_cos();
            Ok((cs * cs * is2 + sn * sn * il2).powf(s))
        },
        0.0,
        FRAC_PI_2,
        0.0,
        tol,
        DEFAULT_MAX_EVALS,
    )
    .map_err(|e| relabel(e, "angular"))?;
    Ok(QuadResult {
        value: 4.0 * r.value,
        error_estimate: 4.0 * r.error_estimate,
        ..r
    })
}

/// `integral_beta^gamma r^{2s+1} (1 - r^2)^{-s} dr` for `0 <= beta <= gamma < 1`.
pub fn radial_integral_quadrature(beta: f64, gamma: f64, s: f64, tol: f64) -> Result<QuadResult> {
    if !(0.0 <= beta && beta <= gamma && gamma < 1.0) || !s.is_finite() {
        return Err(Error::domain(format!(
            "radial integral needs 0 <= beta <= gamma < 1, got ({beta}, {gamma})"
        )));
    }
    try_adaptive_quad(
        |r| Ok(r.powf(2.0 * s + 1.0) * (1.0 - r * r).powf(-s)),
        beta,
        gamma,
        0.0,
        tol,
        DEFAULT_MAX_EVALS,
    )
    .map_err(|e| relabel(e, "radial"))
}

/// Curved area over the annulus `beta <= r <= gamma` in scaled polar
/// coordinates (`x = a r cos t`, `y = b r sin t`):
///
/// ```text
/// a b integral_{-pi}^{pi} integral_beta^gamma
///     sqrt(1 + c^2 r^2 / (1 - r^2) (cos^2 t / a^2 + sin^2 t / b^2)) r dr dt
/// ```
///
/// Any positive semi-axes are accepted. The angular range is folded onto
/// `[0, pi/2]`; the radial integral runs ten times tighter than `tol`.
pub fn annulus_area_quadrature(
    a: f64,
    b: f64,
    c: f64,
    beta: f64,
    gamma: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::domain(format!(
            "semi-axes must be positive, got ({a}, {b}, {c})"
        )));
    }
    if !(0.0 <= beta && beta <= gamma && gamma < 1.0) {
        return Err(Error::domain(format!(
            "annulus needs 0 <= beta <= gamma < 1, got ({beta}, {gamma})"
        )));
    }
    if beta == gamma {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    let (ia2, ib2, c2) = (1.0 / (a * a), 1.0 / (b * b), c * c);
    let inner_tol = tol / 10.0;
    let mut subdivisions = 0;
    let outer = try_adaptive_quad(
        |t| {
            let (sn, cs) = t.sin_cos();
            let q = c2 * (cs * cs * ia2 + sn * sn * ib2);
            let inner = try_adaptive_quad(
                |r| {
                    let r2 = r * r;
                    Ok((1.0 + q * r2 / (1.0 - r2)).sqrt() * r)
                },
                beta,
                gamma,
                0.0,
                inner_tol,
                DEFAULT_MAX_EVALS,
            )
            .map_err(|e| relabel(e, "radial"))?;
            subdivisions += inner.subdivisions;
            Ok(inner.value)
        },
        0.0,
        FRAC_PI_2,
        0.0,
        tol,
        DEFAULT_MAX_EVALS,
    )
    .map_err(|e| relabel(e, "angular"))?;
    let scale = 4.0 * a * b;
    Ok(QuadResult {
        value: scale * outer.value,
        error_estimate: scale * outer.error_estimate,
        subdivisions: subdivisions + outer.subdivisions,
    })
}

/// Curved surface area of the frustum by direct integration.
pub fn surface_area_quadrature(frustum: &HemiellipsoidFrustum, tol: f64) -> Result<QuadResult> {
    let fr = frustum.plane_fractions()?;
    annulus_area_quadrature(frustum.a, frustum.b, frustum.c, fr.beta, fr.gamma, tol)
}
