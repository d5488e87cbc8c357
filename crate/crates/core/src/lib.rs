//! Special functions and quadrature for the curved surface area of a
//! hemiellipsoid frustum.
//!
//! The area has a closed form in terms of Appell's double series F2 and
//! Srivastava's triple series F(3); [`surface_area_closed`] evaluates it and
//! [`surface_area_quadrature`] integrates the surface element directly, as
//! an independent check.
//!
//! ```
//! use hemifrustum::{surface_area_closed, HemiellipsoidFrustum, TruncationPolicy};
//!
//! let frustum = HemiellipsoidFrustum::new(5.0, 3.0, 2.0, 1.2, 3.64f64.sqrt())?;
//! let report = surface_area_closed(&frustum, &TruncationPolicy::default())?;
//! assert!((report.area - 28.41898847762).abs() < 1e-9);
//! # Ok::<(), hemifrustum::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep all the digits they were computed with
#![allow(clippy::excessive_precision)]

mod error;
mod extended;
pub mod geometry;
pub mod multivar;
pub mod quadrature;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{
    angular_integral_closed, angular_integral_lambda_major, angular_integral_sigma_major,
    check_area_convergence, frustum_triple_params, plane_fractions, radial_integral_closed,
    star_difference, surface_area_closed, surface_area_from_fractions,
    surface_area_term_coefficients, AreaReport, HemiellipsoidFrustum, PlaneFractions,
    ThirdArgumentSign,
};
pub use multivar::{
    appell_f2, check_f3_convergence, lambda_coefficient, srivastava_f3, srivastava_f3_m_axis,
    srivastava_f3_continued, AppellF2Args, GroupCounts, TripleSeriesParams,
};
pub use quadrature::{
    adaptive_quad_1d, angular_integral_quadrature, annulus_area_quadrature,
    radial_integral_quadrature, surface_area_quadrature, try_adaptive_quad, QuadResult,
    DEFAULT_MAX_EVALS,
};
pub use series::{SeriesResult, TruncationPolicy, DEFAULT_SHELL_BUDGET};
pub use special::{
    four_f3_negative_denominator_reduction, gauss_2f1, log_gamma, pfq, pochhammer,
    sin_cos_moment,
};
