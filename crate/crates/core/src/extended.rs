//! Multi-precision summation for series whose terms cancel heavily.
//!
//! Binary64 loses roughly `log2(sum |t| / |sum t|)` bits to cancellation.
//! The routines here run the same ratio recurrences in a wider binary
//! format; callers choose the width from the measured cancellation.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Widest mantissa the escalation loops will try.
pub(crate) const MAX_BITS: usize = 8192;

/// Width used for the running sum of magnitudes; only its exponent matters.
const ABS_BITS: usize = 64;

pub(crate) fn big(x: f64, bits: usize) -> BigFloat {
    BigFloat::from_f64(x, bits)
}

/// Nearest binary64 value (truncated to the leading 64 mantissa bits first).
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exponent, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = words[words.len() - 1] as f64 / 2f64.powi(64);
    let mut v = top;
    let mut e = exponent as i64;
    // apply 2^e in steps that cannot overflow an intermediate
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            break;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            break;
        }
    }
    v *= 2f64.powi(e as i32);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|`, accurate to about 1e-15 absolute; `-inf` for zero.
pub(crate) fn log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match x.as_raw_parts() {
        Some((words, _, _, exponent, _)) => {
            let top = words[words.len() - 1] as f64 / 2f64.powi(64);
            exponent as f64 + top.log2()
        }
        None => f64::INFINITY,
    }
}

/// Bits lost to cancellation: `log2(abs_sum / |value|)`, at least zero.
pub(crate) fn cancellation_bits(value: &BigFloat, abs_sum: &BigFloat) -> f64 {
    (log2_abs(abs_sum) - log2_abs(value)).max(0.0)
}

/// Rounds a bit count up to a whole number of 64-bit words.
pub(crate) fn round_bits(bits: f64) -> usize {
    if !(bits < MAX_BITS as f64) {
        // also catches the infinite loss of an exactly zero sum
        return MAX_BITS;
    }
    let b = bits.max(64.0).ceil() as usize;
    (b.div_ceil(64) * 64).min(MAX_BITS)
}

pub(crate) fn add(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.add(b, bits, RM)
}

pub(crate) fn sub(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.sub(b, bits, RM)
}

pub(crate) fn mul(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.mul(b, bits, RM)
}

pub(crate) fn div(a: &BigFloat, b: &BigFloat, bits: usize) -> BigFloat {
    a.div(b, bits, RM)
}

/// Natural logarithm of a positive value.
pub(crate) fn ln(x: &BigFloat, bits: usize) -> Result<BigFloat> {
    let mut cc = Consts::new()
        .map_err(|e| Error::domain(format!("multi-precision constants unavailable: {e:?}")))?;
    let v = x.ln(bits, RM, &mut cc);
    if v.is_nan() {
        return Err(Error::domain("logarithm of a non-positive value"));
    }
    Ok(v)
}

/// Outcome of a multi-precision series summation.
#[derive(Debug, Clone)]
pub(crate) struct BigSum {
    pub value: BigFloat,
    pub abs_sum: BigFloat,
    pub last_abs: BigFloat,
    pub terms: usize,
    pub converged: bool,
    /// A numerator factor vanished: the remaining terms are exactly zero.
    pub exact: bool,
}

impl BigSum {
    pub(crate) fn start(bits: usize) -> Self {
        BigSum {
            value: big(0.0, bits),
            abs_sum: big(0.0, ABS_BITS),
            last_abs: big(0.0, ABS_BITS),
            terms: 0,
            converged: false,
            exact: false,
        }
    }

    pub(crate) fn push(&mut self, term: &BigFloat, bits: usize) {
        self.value = add(&self.value, term, bits);
        self.last_abs = term.abs();
        self.abs_sum = add(&self.abs_sum, &self.last_abs, ABS_BITS);
        self.terms += 1;
    }

    /// Whether the last term is at most `2^tol_log2` relative to the sum.
    pub(crate) fn last_is_small(&self, tol_log2: f64) -> bool {
        log2_abs(&self.last_abs) <= tol_log2 + log2_abs(&self.value)
    }
}

/// `sum_r prod (a_i)_r / prod (b_j)_r * z^r / r!` with the parameter lists
/// already in multi-precision form.
///
/// Stops after `consecutive_small` terms each no larger than `2^tol_log2`
/// times the running sum. The caller is responsible for ruling out
/// divergence; a denominator factor that reaches zero is reported as a pole.
pub(crate) fn hyper_series(
    numerators: &[BigFloat],
    denominators: &[BigFloat],
    z: &BigFloat,
    tol_log2: f64,
    consecutive_small: usize,
    max_terms: usize,
    bits: usize,
) -> Result<BigSum> {
    let one = big(1.0, bits);
    let mut num: Vec<BigFloat> = numerators.to_vec();
    let mut den: Vec<BigFloat> = denominators.to_vec();
    let mut term = one.clone();
    let mut out = BigSum::start(bits);
    out.push(&term, bits);
    if z.is_zero() {
        out.converged = true;
        out.exact = true;
        return Ok(out);
    }
    let mut small_run = 0;
    let mut index = big(1.0, bits);
    while out.terms < max_terms {
        let mut ratio = z.clone();
        for a in &num {
            ratio = mul(&ratio, a, bits);
        }
        if ratio.is_zero() {
            out.converged = true;
            out.exact = true;
            return Ok(out);
        }
        let mut d = index.clone();
        for b in &den {
            if b.is_zero() {
                return Err(Error::pole(format!(
                    "denominator factor vanishes at term {}",
                    out.terms
                )));
            }
            d = mul(&d, b, bits);
        }
        term = div(&mul(&term, &ratio, bits), &d, bits);
        out.push(&term, bits);
        if out.last_is_small(tol_log2) {
            small_run += 1;
            if small_run >= consecutive_small {
                out.converged = true;
                return Ok(out);
            }
        } else {
            small_run = 0;
        }
        for a in num.iter_mut().chain(den.iter_mut()) {
            *a = add(a, &one, bits);
        }
        index = add(&index, &one, bits);
    }
    Ok(out)
}
