//! Multivariable hypergeometric series: Appell's F2 and Srivastava's
//! general triple series F(3).
//!
//! Both are summed by total-degree shells `m + n (+ p) = N`, with each term
//! obtained from a neighbour in the previous shell by a single ratio update.
//! The stopping rule of [`TruncationPolicy`] is applied to shell sums, and
//! `max_terms` bounds the total degree.

use serde::{Deserialize, Serialize};

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::extended;
use crate::series::{SeriesResult, Summation, TruncationPolicy};
use crate::special::{check_pfq, is_nonpositive_integer, pfq, pochhammer};

/// Arguments of `F2(a; b, c; d, g; x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppellF2Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub g: f64,
    pub x: f64,
    pub y: f64,
}

impl AppellF2Args {
    /// True when the double series reduces to a polynomial.
    pub fn terminates(&self) -> bool {
        is_nonpositive_integer(self.a)
            || (is_nonpositive_integer(self.b) && is_nonpositive_integer(self.c))
    }

    /// Evaluation is allowed inside `|x| + |y| < 1` or for polynomial cases.
    pub fn is_admissible(&self) -> bool {
        self.terminates() || self.x.abs() + self.y.abs() < 1.0
    }
}

/// Ratio factor for one lattice step; `Ok(None)` marks an exact zero.
#[inline]
fn step(source: f64, num: f64, den: f64, what: &str) -> Result<f64> {
    if source == 0.0 {
        return Ok(0.0);
    }
    if den == 0.0 {
        return Err(Error::pole(format!("{what} denominator vanishes")));
    }
    Ok(source * (num / den))
}

/// Appell's double series
/// `sum_{m,n} (a)_{m+n} (b)_m (c)_n x^m y^n / ((d)_m (g)_n m! n!)`.
///
/// As with [`pfq`], a binary64 result whose rounding or truncation error
/// could exceed `rel_tol` relative to the value is recomputed in a wider
/// format with a purely relative stopping rule.
pub fn appell_f2(args: &AppellF2Args, policy: &TruncationPolicy) -> Result<SeriesResult> {
    policy.validate()?;
    let AppellF2Args { a, b, c, d, g, x, y } = *args;
    if [a, b, c, d, g, x, y].iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("F2 parameters and arguments must be finite"));
    }
    if !args.is_admissible() {
        return Err(Error::divergence(format!(
            "F2 needs |x| + |y| < 1, got |{x}| + |{y}| = {}",
            x.abs() + y.abs()
        )));
    }

    let (result, abs_total) = f2_binary64(args, policy)?;
    let bound = policy.rel_tol * result.value.abs();
    let rounding_ok = 4.0 * f64::EPSILON * abs_total <= bound;
    // an unconverged sum is reported as is; widening cannot extend the budget
    if rounding_ok && (result.error_estimate <= bound || !result.converged) {
        return Ok(result);
    }
    let lost = (abs_total / result.value.abs().max(f64::EPSILON * abs_total)).log2();
    f2_extended(args, policy, lost)
}

/// Binary64 shell sum and the sum of term magnitudes.
fn f2_binary64(args: &AppellF2Args, policy: &TruncationPolicy) -> Result<(SeriesResult, f64)> {
    let AppellF2Args { a, b, c, d, g, x, y } = *args;
    let mut sum = Summation::new(policy);
    let mut shell = vec![1.0];
    let mut abs_total = 1.0;
    if sum.add(1.0) {
        return Ok((sum.finish(true), abs_total));
    }
    let mut next = Vec::with_capacity(64);
    for total in 0..policy.max_terms.saturating_sub(1) {
        next.clear();
        let nf = total as f64;
        // (m, n) with m + n = total  ->  (m, n + 1)
        for (m, &t) in shell.iter().enumerate() {
            let n = (total - m) as f64;
            next.push(step(t, (a + nf) * (c + n) * y, (g + n) * (n + 1.0), "F2 (g)_n")?);
        }
        // (total, 0) -> (total + 1, 0)
        let last = shell[total];
        next.push(step(last, (a + nf) * (b + nf) * x, (d + nf) * (nf + 1.0), "F2 (d)_m")?);

        std::mem::swap(&mut shell, &mut next);
        if shell.iter().all(|&t| t == 0.0) {
            return Ok((sum.finish_exact(), abs_total));
        }
        let shell_sum: f64 = shell.iter().sum();
        if !shell_sum.is_finite() {
            return Err(Error::divergence(format!("non-finite F2 shell at degree {}", total + 1)));
        }
        abs_total += shell.iter().map(|t| t.abs()).sum::<f64>();
        if sum.add(shell_sum) {
            return Ok((with_rounding(sum.finish(true), abs_total, policy), abs_total));
        }
    }
    Ok((with_rounding(sum.finish(false), abs_total, policy), abs_total))
}

/// [`step`] in multi-precision form.
fn big_step(source: &BigFloat, num: &BigFloat, den: &BigFloat, bits: usize, what: &str) -> Result<BigFloat> {
    if source.is_zero() {
        return Ok(source.clone());
    }
    if den.is_zero() {
        return Err(Error::pole(format!("{what} denominator vanishes")));
    }
    Ok(extended::div(&extended::mul(source, num, bits), den, bits))
}

/// The shell sum redone with a mantissa wide enough for the measured
/// cancellation, stopping on `|shell| <= rel_tol * |sum|` alone.
fn f2_extended(args: &AppellF2Args, policy: &TruncationPolicy, lost_bits: f64) -> Result<SeriesResult> {
    let AppellF2Args { a, b, c, d, g, x, y } = *args;
    let tol_log2 = policy.rel_tol.log2();
    let mut bits = extended::round_bits(64.0 + lost_bits - tol_log2 + 24.0);
    loop {
        let big = |v: f64| extended::big(v, bits);
        let (one, ba, bb, bc, bd, bg, bx, by) =
            (big(1.0), big(a), big(b), big(c), big(d), big(g), big(x), big(y));
        let mut shell = vec![one.clone()];
        let mut out = extended::BigSum::start(bits);
        out.push(&one, bits);
        let mut abs_terms = 1.0f64;
        let (mut small_run, mut converged, mut exact) = (0, false, false);
        for total in 0..policy.max_terms.saturating_sub(1) {
            let nf = big(total as f64);
            let a_n = extended::add(&ba, &nf, bits);
            let mut next = Vec::with_capacity(total + 2);
            for (m, t) in shell.iter().enumerate() {
                let n = big((total - m) as f64);
                let num = extended::mul(&extended::mul(&a_n, &extended::add(&bc, &n, bits), bits), &by, bits);
                let den = extended::mul(&extended::add(&bg, &n, bits), &extended::add(&n, &one, bits), bits);
                next.push(big_step(t, &num, &den, bits, "F2 (g)_n")?);
            }
            let num = extended::mul(&extended::mul(&a_n, &extended::add(&bb, &nf, bits), bits), &bx, bits);
            let den = extended::mul(&extended::add(&bd, &nf, bits), &extended::add(&nf, &one, bits), bits);
            next.push(big_step(&shell[total], &num, &den, bits, "F2 (d)_m")?);
            shell = next;

            if shell.iter().all(|t| t.is_zero()) {
                exact = true;
                converged = true;
                break;
            }
            let mut shell_sum = big(0.0);
            for t in &shell {
                shell_sum = extended::add(&shell_sum, t, bits);
                abs_terms += extended::to_f64(&t.abs());
            }
            out.push(&shell_sum, bits);
            if out.last_is_small(tol_log2) {
                small_run += 1;
                if small_run >= policy.consecutive_small {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        let lost = abs_terms.log2() - extended::log2_abs(&out.value);
        let need = extended::round_bits(lost - tol_log2 + 24.0);
        if need <= bits || bits == extended::MAX_BITS || out.value.is_zero() {
            let value = extended::to_f64(&out.value);
            let rounding = 2f64.powf(abs_terms.log2() - bits as f64 + 8.0);
            let error_estimate = if exact {
                rounding
            } else {
                extended::to_f64(&out.last_abs).max(rounding)
            };
            return Ok(SeriesResult {
                value,
                terms_used: out.terms,
                error_estimate,
                converged: converged && error_estimate <= policy.rel_tol * value.abs().max(1.0),
            });
        }
        bits = need;
    }
}

/// Folds the binary64 rounding bound `4 eps sum |t|` into the error
/// estimate; a sum whose terms cancel below that bound is not converged.
fn with_rounding(r: SeriesResult, abs_total: f64, policy: &TruncationPolicy) -> SeriesResult {
    let error_estimate = r.error_estimate.max(4.0 * f64::EPSILON * abs_total);
    SeriesResult {
        error_estimate,
        converged: r.converged && error_estimate <= policy.rel_tol * r.value.abs().max(1.0),
        ..r
    }
}

/// The fourteen parameter groups of Srivastava's F(3).
///
/// Numerator groups: `a` is raised to `m+n+p`, `b` to `m+n`, `b_prime` to
/// `n+p`, `b_double_prime` to `m+p`, and `c`, `c_prime`, `c_double_prime`
/// to `m`, `n`, `p`. Denominator groups `e`, `g`, `g_prime`,
/// `g_double_prime`, `h`, `h_prime`, `h_double_prime` follow the same
/// pattern.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TripleSeriesParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub b_prime: Vec<f64>,
    pub b_double_prime: Vec<f64>,
    pub c: Vec<f64>,
    pub c_prime: Vec<f64>,
    pub c_double_prime: Vec<f64>,
    pub e: Vec<f64>,
    pub g: Vec<f64>,
    pub g_prime: Vec<f64>,
    pub g_double_prime: Vec<f64>,
    pub h: Vec<f64>,
    pub h_prime: Vec<f64>,
    pub h_double_prime: Vec<f64>,
}

/// Group sizes `(A, B, B', B'', C, C', C'', E, G, G', G'', H, H', H'')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCounts {
    pub a: usize,
    pub b: usize,
    pub b_prime: usize,
    pub b_double_prime: usize,
    pub c: usize,
    pub c_prime: usize,
    pub c_double_prime: usize,
    pub e: usize,
    pub g: usize,
    pub g_prime: usize,
    pub g_double_prime: usize,
    pub h: usize,
    pub h_prime: usize,
    pub h_double_prime: usize,
}

impl GroupCounts {
    /// Left-hand sides of the three convergence inequalities.
    pub fn convergence_margins(&self) -> [i64; 3] {
        let k = |v: usize| v as i64;
        [
            1 + k(self.e) + k(self.g) + k(self.g_double_prime) + k(self.h)
                - k(self.a)
                - k(self.b)
                - k(self.b_double_prime)
                - k(self.c),
            1 + k(self.e) + k(self.g) + k(self.g_prime) + k(self.h_prime)
                - k(self.a)
                - k(self.b)
                - k(self.b_prime)
                - k(self.c_prime),
            1 + k(self.e) + k(self.g_prime) + k(self.g_double_prime) + k(self.h_double_prime)
                - k(self.a)
                - k(self.b_prime)
                - k(self.b_double_prime)
                - k(self.c_double_prime),
        ]
    }
}

fn prod_shifted(values: &[f64], shift: f64) -> f64 {
    values.iter().map(|v| v + shift).product()
}

fn prod_poch(values: &[f64], n: usize) -> f64 {
    values.iter().map(|&v| pochhammer(v, n)).product()
}

impl TripleSeriesParams {
    pub fn counts(&self) -> GroupCounts {
        GroupCounts {
            a: self.a.len(),
            b: self.b.len(),
            b_prime: self.b_prime.len(),
            b_double_prime: self.b_double_prime.len(),
            c: self.c.len(),
            c_prime: self.c_prime.len(),
            c_double_prime: self.c_double_prime.len(),
            e: self.e.len(),
            g: self.g.len(),
            g_prime: self.g_prime.len(),
            g_double_prime: self.g_double_prime.len(),
            h: self.h.len(),
            h_prime: self.h_prime.len(),
            h_double_prime: self.h_double_prime.len(),
        }
    }

    fn all_values(&self) -> impl Iterator<Item = &f64> {
        [
            &self.a,
            &self.b,
            &self.b_prime,
            &self.b_double_prime,
            &self.c,
            &self.c_prime,
            &self.c_double_prime,
            &self.e,
            &self.g,
            &self.g_prime,
            &self.g_double_prime,
            &self.h,
            &self.h_prime,
            &self.h_double_prime,
        ]
        .into_iter()
        .flatten()
    }

    /// No group couples `m` with `n` except through `p`, so that for fixed
    /// `p` the `(m, n)` double sum factorizes.
    pub fn is_p_separable(&self) -> bool {
        self.a.is_empty() && self.b.is_empty() && self.e.is_empty() && self.g.is_empty()
    }

    /// `Lambda(m+1,n,p) / Lambda(m,n,p)` as `(numerator, denominator)`.
    pub fn m_step(&self, m: usize, n: usize, p: usize) -> (f64, f64) {
        let (s, mn, mp, mf) = ((m + n + p) as f64, (m + n) as f64, (m + p) as f64, m as f64);
        (
            prod_shifted(&self.a, s)
                * prod_shifted(&self.b, mn)
                * prod_shifted(&self.b_double_prime, mp)
                * prod_shifted(&self.c, mf),
            prod_shifted(&self.e, s)
                * prod_shifted(&self.g, mn)
                * prod_shifted(&self.g_double_prime, mp)
                * prod_shifted(&self.h, mf),
        )
    }

    /// `Lambda(m,n+1,p) / Lambda(m,n,p)` as `(numerator, denominator)`.
    pub fn n_step(&self, m: usize, n: usize, p: usize) -> (f64, f64) {
        let (s, mn, np, nf) = ((m + n + p) as f64, (m + n) as f64, (n + p) as f64, n as f64);
        (
            prod_shifted(&self.a, s)
                * prod_shifted(&self.b, mn)
                * prod_shifted(&self.b_prime, np)
                * prod_shifted(&self.c_prime, nf),
            prod_shifted(&self.e, s)
                * prod_shifted(&self.g, mn)
                * prod_shifted(&self.g_prime, np)
                * prod_shifted(&self.h_prime, nf),
        )
    }

    /// `Lambda(m,n,p+1) / Lambda(m,n,p)` as `(numerator, denominator)`.
    pub fn p_step(&self, m: usize, n: usize, p: usize) -> (f64, f64) {
        let (s, np, mp, pf) = ((m + n + p) as f64, (n + p) as f64, (m + p) as f64, p as f64);
        (
            prod_shifted(&self.a, s)
                * prod_shifted(&self.b_prime, np)
                * prod_shifted(&self.b_double_prime, mp)
                * prod_shifted(&self.c_double_prime, pf),
            prod_shifted(&self.e, s)
                * prod_shifted(&self.g_prime, np)
                * prod_shifted(&self.g_double_prime, mp)
                * prod_shifted(&self.h_double_prime, pf),
        )
    }
}

/// Coefficient `Lambda(m, n, p)` of the F(3) series, formed directly from
/// Pochhammer products.
pub fn lambda_coefficient(params: &TripleSeriesParams, m: usize, n: usize, p: usize) -> Result<f64> {
    let s = m + n + p;
    let num = prod_poch(&params.a, s)
        * prod_poch(&params.b, m + n)
        * prod_poch(&params.b_prime, n + p)
        * prod_poch(&params.b_double_prime, m + p)
        * prod_poch(&params.c, m)
        * prod_poch(&params.c_prime, n)
        * prod_poch(&params.c_double_prime, p);
    let den = prod_poch(&params.e, s)
        * prod_poch(&params.g, m + n)
        * prod_poch(&params.g_prime, n + p)
        * prod_poch(&params.g_double_prime, m + p)
        * prod_poch(&params.h, m)
        * prod_poch(&params.h_prime, n)
        * prod_poch(&params.h_double_prime, p);
    if den == 0.0 {
        return Err(Error::pole(format!(
            "denominator Pochhammer product vanishes at ({m}, {n}, {p})"
        )));
    }
    Ok(num / den)
}

/// The three group-count inequalities required for F(3) convergence.
pub fn check_f3_convergence(params: &TripleSeriesParams) -> bool {
    params.counts().convergence_margins().iter().all(|&v| v >= 0)
}

fn check_f3_arguments(params: &TripleSeriesParams, x: f64, y: f64, z: f64) -> Result<()> {
    if params.all_values().chain([x, y, z].iter()).any(|v| !v.is_finite()) {
        return Err(Error::domain("F(3) parameters and arguments must be finite"));
    }
    if !check_f3_convergence(params) {
        return Err(Error::divergence(format!(
            "F(3) group counts violate the convergence inequalities (margins {:?})",
            params.counts().convergence_margins()
        )));
    }
    if x.abs() >= 1.0 || y.abs() >= 1.0 || z.abs() >= 1.0 {
        return Err(Error::divergence(format!(
            "F(3) needs |x|, |y|, |z| < 1, got ({x}, {y}, {z})"
        )));
    }
    Ok(())
}

/// Shells beyond this degree are checked for stalled decay.
const STALL_MIN_SHELL: usize = 200;

/// Srivastava's general triple series
/// `sum_{m,n,p} Lambda(m,n,p) x^m y^n z^p / (m! n! p!)`, summed by shells of
/// constant total degree.
///
/// Terms of shell `N + 1` are derived from shell `N`: along `p` where
/// possible, otherwise along `n`, and `(N+1, 0, 0)` along `m`. The reduction
/// order inside a shell is fixed (`m` outer, `n` inner), so results are
/// reproducible bit for bit.
pub fn srivastava_f3(
    params: &TripleSeriesParams,
    x: f64,
    y: f64,
    z: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    check_f3_arguments(params, x, y, z)?;

    let mut sum = Summation::new(policy);
    if sum.add(1.0) {
        return Ok(sum.finish(true));
    }
    // shell[m][n] holds the term (m, n, N - m - n)
    let mut shell: Vec<Vec<f64>> = vec![vec![1.0]];
    let mut magnitudes: Vec<f64> = vec![1.0];
    let mut abs_total = 1.0;
    for total in 0..policy.max_terms.saturating_sub(1) {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(total + 2);
        let mut shell_sum = 0.0;
        let mut shell_abs = 0.0;
        for m in 0..=total + 1 {
            let width = total + 2 - m;
            let mut row = Vec::with_capacity(width);
            for n in 0..width {
                let t = if m + n <= total {
                    let p = total - m - n;
                    let (num, den) = params.p_step(m, n, p);
                    step(shell[m][n], num * z, den * (p as f64 + 1.0), "F(3) p-step")?
                } else if n > 0 {
                    let (num, den) = params.n_step(m, n - 1, 0);
                    step(shell[m][n - 1], num * y, den * n as f64, "F(3) n-step")?
                } else {
                    let (num, den) = params.m_step(m - 1, 0, 0);
                    step(shell[m - 1][0], num * x, den * m as f64, "F(3) m-step")?
                };
                shell_sum += t;
                shell_abs += t.abs();
                row.push(t);
            }
            next.push(row);
        }
        shell = next;
        if shell_abs == 0.0 {
            return Ok(sum.finish_exact());
        }
        if !shell_abs.is_finite() {
            return Err(Error::divergence(format!(
                "non-finite F(3) shell at degree {}",
                total + 1
            )));
        }
        magnitudes.push(shell_abs);
        abs_total += shell_abs;
        if sum.add(shell_sum) {
            return Ok(with_rounding(sum.finish(true), abs_total, policy));
        }
        let degree = total + 1;
        if degree >= STALL_MIN_SHELL && magnitudes[degree] >= magnitudes[degree / 2] {
            // no decay over the second half of the shells summed so far
            return Ok(with_rounding(sum.finish(false), abs_total, policy));
        }
    }
    Ok(with_rounding(sum.finish(false), abs_total, policy))
}

/// Budget for each single series inside [`srivastava_f3_continued`].
const SLICE_MAX_TERMS: usize = 100_000;

fn shifted(values: &[f64], shift: usize, bits: usize) -> Vec<BigFloat> {
    let s = extended::big(shift as f64, bits);
    values
        .iter()
        .map(|&v| extended::add(&extended::big(v, bits), &s, bits))
        .collect()
}

fn plus(values: &[f64], shift: f64) -> Vec<f64> {
    values.iter().map(|v| v + shift).collect()
}

fn concat(parts: &[&[f64]]) -> Vec<f64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Product of `values + shift`, or `None` when a factor is exactly zero.
fn shifted_product(
    values: &[f64],
    shift: usize,
    start: BigFloat,
    bits: usize,
) -> Option<BigFloat> {
    let mut acc = start;
    for v in shifted(values, shift, bits) {
        if v.is_zero() {
            return None;
        }
        acc = extended::mul(&acc, &v, bits);
    }
    Some(acc)
}

/// Ratio `w(k+1)/w(k) * t/(k+1)` for a coefficient
/// `w(k) = prod (num + offset)_k / prod (den + offset)_k`.
/// `Ok(None)` means the numerator vanished, so every later term is zero.
fn ratio_step(
    num: &[&[f64]],
    den: &[&[f64]],
    offsets: (usize, usize),
    k: usize,
    t: &BigFloat,
    bits: usize,
    what: &str,
) -> Result<Option<BigFloat>> {
    let mut top = t.clone();
    for (i, group) in num.iter().enumerate() {
        let off = if i < offsets.0 { k + offsets.1 } else { k };
        match shifted_product(group, off, top, bits) {
            Some(v) => top = v,
            None => return Ok(None),
        }
    }
    let mut bottom = extended::big((k + 1) as f64, bits);
    for (i, group) in den.iter().enumerate() {
        let off = if i < offsets.0 { k + offsets.1 } else { k };
        match shifted_product(group, off, bottom, bits) {
            Some(v) => bottom = v,
            None => {
                return Err(Error::pole(format!(
                    "F(3) {what} denominator vanishes at index {}",
                    k + 1
                )))
            }
        }
    }
    Ok(Some(extended::div(&top, &bottom, bits)))
}

/// Cache of `M_p(x) = pFq(b'' + p, c; g'' + p, h; x)` for increasing `p`.
struct MSeries<'a> {
    params: &'a TripleSeriesParams,
    x: f64,
    bx: BigFloat,
    bits: usize,
    values: Vec<BigFloat>,
    converged: bool,
    /// `(b'', c, h)` when `M_p = 2F1(b'' + p, c; h; x)` with `0 < x < 1`,
    /// which is advanced by Gauss's contiguous relation in the first
    /// parameter; the recurrence is forward stable there because `M_p`
    /// grows like `(1 - x)^-p`.
    gauss: Option<(f64, f64, f64)>,
}

impl<'a> MSeries<'a> {
    fn new(params: &'a TripleSeriesParams, x: f64, bits: usize) -> Self {
        let gauss = match (
            params.b_double_prime.as_slice(),
            params.c.as_slice(),
            params.g_double_prime.is_empty(),
            params.h.as_slice(),
        ) {
            (&[a], &[b], true, &[c]) if a > 0.0 && x > 0.0 && x < 1.0 => Some((a, b, c)),
            _ => None,
        };
        MSeries {
            params,
            x,
            bx: extended::big(x, bits),
            bits,
            values: Vec::new(),
            converged: true,
            gauss,
        }
    }

    fn direct(&mut self, p: usize) -> Result<BigFloat> {
        let (params, pf, bits) = (self.params, p as f64, self.bits);
        check_pfq(
            &concat(&[&plus(&params.b_double_prime, pf), &params.c]),
            &concat(&[&plus(&params.g_double_prime, pf), &params.h]),
            self.x,
        )?;
        let mut num = shifted(&params.b_double_prime, p, bits);
        num.extend(shifted(&params.c, 0, bits));
        let mut den = shifted(&params.g_double_prime, p, bits);
        den.extend(shifted(&params.h, 0, bits));
        let s = extended::hyper_series(
            &num,
            &den,
            &self.bx,
            -(bits as f64) + 8.0,
            3,
            SLICE_MAX_TERMS,
            bits,
        )?;
        self.converged &= s.converged;
        Ok(s.value)
    }

    fn get(&mut self, p: usize) -> Result<&BigFloat> {
        while self.values.len() <= p {
            let k = self.values.len();
            let next = match self.gauss {
                Some((a0, b, c)) if k >= 2 => {
                    // (c-a) F(a-1) + (2a - c + (b-a) x) F(a) + a (x-1) F(a+1) = 0
                    let bits = self.bits;
                    let a = extended::add(
                        &extended::big(a0, bits),
                        &extended::big((k - 1) as f64, bits),
                        bits,
                    );
                    let bb = extended::big(b, bits);
                    let cc = extended::big(c, bits);
                    let one_minus_x = extended::sub(&extended::big(1.0, bits), &self.bx, bits);
                    let c_minus_a = extended::sub(&cc, &a, bits);
                    let two_a = extended::add(&a, &a, bits);
                    let b_minus_a = extended::sub(&bb, &a, bits);
                    let mid = extended::add(
                        &extended::sub(&two_a, &cc, bits),
                        &extended::mul(&b_minus_a, &self.bx, bits),
                        bits,
                    );
                    let lhs = extended::add(
                        &extended::mul(&c_minus_a, &self.values[k - 2], bits),
                        &extended::mul(&mid, &self.values[k - 1], bits),
                        bits,
                    );
                    extended::div(&lhs, &extended::mul(&a, &one_minus_x, bits), bits)
                }
                _ => self.direct(k)?,
            };
            self.values.push(next);
        }
        Ok(&self.values[p])
    }
}

/// Below this `y` the `N_p` series are summed directly; above it the
/// integral recurrence of [`NSeries`] is forward stable by a wide margin.
const N_RECURRENCE_MIN_Y: f64 = 0.75;

/// Cache of `N_p(y) = pFq(b' + p, c'; g' + p, h'; y)` for increasing `p`.
struct NSeries<'a> {
    params: &'a TripleSeriesParams,
    y: f64,
    by: BigFloat,
    bits: usize,
    values: Vec<BigFloat>,
    converged: bool,
    /// `d` when `N_p = 3F2(d - 1 + p, d + p, 1; d + 1 + p, 2; y)`, `d > 2`.
    /// Partial fractions in `n` then give
    ///
    /// ```text
    /// N_p = (d+p)/(d+p-1) * [((1-y)^(2-d-p) - 1) / ((d+p-2) y) - I_(d-1+p)]
    /// I_k = int_0^1 (s / (1 - y s))^k ds
    /// ```
    ///
    /// and differentiating `v^(k+1)`, `v = s/(1 - y s)`, yields
    /// `I_k + 2y I_(k+1) + y^2 I_(k+2) = (1-y)^-(k+1) / (k+1)`.
    /// The particular solution grows like `(1-y)^-k` and the homogeneous
    /// ones like `y^-k`, so forward recursion is stable for `y > 1/2`.
    shape: Option<NShape>,
}

struct NShape {
    d: f64,
    /// `I_(d-1+p)` for `p = 0, 1, ...`
    integrals: Vec<BigFloat>,
    /// `1 / (1 - y)`
    inv: BigFloat,
}

/// `I_k = integral_0^1 (s / (1 - y s))^k ds` for integer `k >= 1`.
///
/// With `u = 1 - y s` and `q = 1 - y`, expanding `(1 - u)^k` gives
///
/// ```text
/// I_k = y^-(k+1) sum_j C(k, j) (-1)^j integral_q^1 u^(j-k) du
/// ```
///
/// which is elementary. For `y >= N_RECURRENCE_MIN_Y` the `j = 0` term
/// dominates, so only a few guard bits are lost; the power series in `y`
/// would need on the order of `bits / (1 - y)` terms instead.
fn seed_integral(k: usize, y: &BigFloat, inv: &BigFloat, bits: usize) -> Result<BigFloat> {
    let wide = bits + 64 + 2 * k;
    let big = |v: f64| extended::big(v, wide);
    let one = big(1.0);
    let q = extended::sub(&one, y, wide);
    let log_q = extended::ln(&q, wide)?;
    let mut sum = big(0.0);
    let mut binom = 1.0f64;
    for j in 0..=k {
        // integral_q^1 u^(j-k) du
        let piece = match k - j {
            0 => extended::sub(&one, &q, wide),
            1 => extended::sub(&big(0.0), &log_q, wide),
            e => {
                let mut pow = one.clone();
                for _ in 0..e - 1 {
                    pow = extended::mul(&pow, inv, wide);
                }
                extended::div(&extended::sub(&pow, &one, wide), &big((e - 1) as f64), wide)
            }
        };
        let term = extended::mul(&big(binom), &piece, wide);
        sum = if j % 2 == 0 {
            extended::add(&sum, &term, wide)
        } else {
            extended::sub(&sum, &term, wide)
        };
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let mut scale = y.clone();
    for _ in 0..k {
        scale = extended::mul(&scale, y, wide);
    }
    Ok(extended::div(&sum, &scale, bits))
}

impl<'a> NSeries<'a> {
    fn new(params: &'a TripleSeriesParams, y: f64, bits: usize) -> Result<Self> {
        let by = extended::big(y, bits);
        let d = match (
            params.b_prime.as_slice(),
            params.c_prime.as_slice(),
            params.g_prime.as_slice(),
            params.h_prime.as_slice(),
        ) {
            (&[b1, b2], &[1.0], &[g], &[2.0]) if (N_RECURRENCE_MIN_Y..1.0).contains(&y) => {
                let d = g - 1.0;
                let pair = (b1 == d - 1.0 && b2 == d) || (b2 == d - 1.0 && b1 == d);
                // integer d keeps the powers of 1/(1-y) exact products
                (pair && d > 2.0 && d.fract() == 0.0).then_some(d)
            }
            _ => None,
        };
        let shape = match d {
            Some(d) => {
                let one = extended::big(1.0, bits);
                let inv = extended::div(&one, &extended::sub(&one, &by, bits), bits);
                let seed = |k: f64| seed_integral(k as usize, &by, &inv, bits);
                let integrals = vec![seed(d - 1.0)?, seed(d)?];
                Some(NShape { d, integrals, inv })
            }
            None => None,
        };
        Ok(NSeries {
            params,
            y,
            by,
            bits,
            values: Vec::new(),
            converged: true,
            shape,
        })
    }

    fn direct(&mut self, p: usize) -> Result<BigFloat> {
        let (params, pf, bits) = (self.params, p as f64, self.bits);
        check_pfq(
            &concat(&[&plus(&params.b_prime, pf), &params.c_prime]),
            &concat(&[&plus(&params.g_prime, pf), &params.h_prime]),
            self.y,
        )?;
        let mut num = shifted(&params.b_prime, p, bits);
        num.extend(shifted(&params.c_prime, 0, bits));
        let mut den = shifted(&params.g_prime, p, bits);
        den.extend(shifted(&params.h_prime, 0, bits));
        let s = extended::hyper_series(
            &num,
            &den,
            &self.by,
            -(bits as f64) + 8.0,
            3,
            SLICE_MAX_TERMS,
            bits,
        )?;
        self.converged &= s.converged;
        Ok(s.value)
    }

    fn get(&mut self, p: usize) -> Result<&BigFloat> {
        while self.values.len() <= p {
            let q = self.values.len();
            let next = match self.shape.as_mut() {
                Some(shape) => {
                    let bits = self.bits;
                    let y = &self.by;
                    let big = |v: f64| extended::big(v, bits);
                    // extend I_k to index q (k = d - 1 + q)
                    while shape.integrals.len() <= q {
                        let j = shape.integrals.len();
                        // I_(k+2) with k = d - 1 + j - 2
                        let k = shape.d - 3.0 + j as f64;
                        // (1-y)^-(k+1) with k + 1 = d - 2 + j
                        let rhs = extended::div(&pow_at(shape, j, bits), &big(k + 1.0), bits);
                        let two_y = extended::add(y, y, bits);
                        let lhs = extended::sub(
                            &extended::sub(&rhs, &shape.integrals[j - 2], bits),
                            &extended::mul(&two_y, &shape.integrals[j - 1], bits),
                            bits,
                        );
                        let next = extended::div(&lhs, &extended::mul(y, y, bits), bits);
                        shape.integrals.push(next);
                    }
                    let dp = shape.d + q as f64;
                    // (1-y)^(2-d-q) = (1-y)^-(d-2+q)
                    let power = pow_at(shape, q, bits);
                    let one = big(1.0);
                    let first = extended::div(
                        &extended::sub(&power, &one, bits),
                        &extended::mul(&big(dp - 2.0), y, bits),
                        bits,
                    );
                    let bracket = extended::sub(&first, &shape.integrals[q], bits);
                    extended::div(
                        &extended::mul(&bracket, &big(dp), bits),
                        &big(dp - 1.0),
                        bits,
                    )
                }
                None => self.direct(q)?,
            };
            self.values.push(next);
        }
        Ok(&self.values[p])
    }
}

/// `(1 - y)^-(d - 2 + j)` for an integer `d`.
fn pow_at(shape: &NShape, j: usize, bits: usize) -> BigFloat {
    let e = shape.d as usize - 2 + j;
    let mut acc = extended::big(1.0, bits);
    let mut base = shape.inv.clone();
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = extended::mul(&acc, &base, bits);
        }
        base = extended::mul(&base, &base, bits);
        k >>= 1;
    }
    acc
}

/// Checks the hypotheses of [`srivastava_f3_continued`] and returns the
/// radius `(1 - x)(1 - y)` of convergence in `z`.
fn continuation_radius(params: &TripleSeriesParams, x: f64, y: f64) -> Result<f64> {
    if !params.is_p_separable() {
        return Err(Error::domain(
            "continued F(3) evaluation needs the a, b, e and g groups to be empty",
        ));
    }
    let k = params.counts();
    let balanced = k.b_double_prime == k.g_double_prime + 1
        && k.b_prime == k.g_prime + 1
        && k.convergence_margins()[2] == 0;
    if !balanced {
        return Err(Error::domain(
            "continued F(3) evaluation needs B'' = G'' + 1, B' = G' + 1 and \
             B' + B'' + C'' = 1 + G' + G'' + H''",
        ));
    }
    if params.all_values().any(|&v| v <= 0.0) {
        return Err(Error::domain(
            "continued F(3) evaluation needs every parameter to be positive",
        ));
    }
    if !((0.0..1.0).contains(&x) && (0.0..1.0).contains(&y)) {
        return Err(Error::domain(format!(
            "continued F(3) evaluation needs 0 <= x, y < 1, got ({x}, {y})"
        )));
    }
    Ok((1.0 - x) * (1.0 - y))
}

/// F(3) for `p`-separable parameter sets, continued analytically in `z`
/// to the whole cut plane `z < (1 - x)(1 - y)`.
///
/// For fixed `p` the `(m, n)` double sum factorizes, so
///
/// ```text
/// F(3) = sum_p b_p (z / R)^p,      R = (1 - x)(1 - y)
/// b_p  = w_p R^p / p! * M_p(x) * N_p(y)
/// w_p  = (b')_p (b'')_p (c'')_p / ((g')_p (g'')_p (h'')_p)
/// M_p  = pFq(b'' + p, c; g'' + p, h; x)
/// N_p  = pFq(b' + p, c'; g' + p, h'; y)
/// ```
///
/// Under the balance conditions checked here, `M_p N_p` grows like `R^-p`
/// and `w_p / p!` like a power of `p`, so the series in `zeta = z / R` has
/// radius one. With positive parameters, Euler integrals for `M_p` and
/// `N_p` show that the function is analytic off the ray `zeta >= 1`. The
/// substitution `zeta = 4 u / (1 + u)^2` maps the unit disc onto that cut
/// plane, so the re-expanded series
///
/// ```text
/// F(3) = sum_k e_k u^k,
/// e_k  = sum_{p <= k} b_p 4^p (-1)^(k-p) C(k + p - 1, k - p)
/// ```
///
/// converges for every `zeta < 1`, including `zeta <= -1`, where the
/// triple series itself diverges. The binomial sums cancel heavily, so
/// everything is carried in a multi-precision format whose width is raised
/// until the measured cancellation leaves `rel_tol` intact. `max_terms`
/// bounds the number of `u` terms.
pub fn srivastava_f3_continued(
    params: &TripleSeriesParams,
    x: f64,
    y: f64,
    z: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    if params.all_values().chain([x, y, z].iter()).any(|v| !v.is_finite()) {
        return Err(Error::domain("F(3) parameters and arguments must be finite"));
    }
    let radius = continuation_radius(params, x, y)?;
    if z >= radius {
        return Err(Error::divergence(format!(
            "z = {z} lies on the branch cut z >= (1 - x)(1 - y) = {radius}"
        )));
    }
    let tol_log2 = policy.rel_tol.log2();
    let mut bits = initial_bits(z / radius, tol_log2);
    loop {
        let Some(pass) = continued_pass(params, x, y, z, policy, bits)? else {
            if bits == extended::MAX_BITS {
                return Err(Error::SeriesNotConverged {
                    term: "continued F(3)".into(),
                    estimate: f64::NAN,
                    error_estimate: f64::INFINITY,
                });
            }
            bits = extended::round_bits(2.0 * bits as f64);
            continue;
        };
        let lost = extended::cancellation_bits(&pass.sum.value, &pass.abs_total);
        let need = extended::round_bits(lost - tol_log2 + 24.0);
        if need <= bits || bits == extended::MAX_BITS || pass.sum.value.is_zero() {
            let value = extended::to_f64(&pass.sum.value);
            let rounding = 2f64.powf(extended::log2_abs(&pass.abs_total) - bits as f64 + 8.0);
            let error_estimate = if pass.sum.exact {
                rounding
            } else {
                extended::to_f64(&pass.sum.last_abs).max(rounding)
            };
            let converged = pass.sum.converged
                && pass.slices_converged
                && error_estimate <= policy.rel_tol * value.abs().max(1.0);
            return Ok(SeriesResult {
                value,
                terms_used: pass.sum.terms,
                error_estimate,
                converged,
            });
        }
        bits = need;
    }
}

/// Width predicted from the map: the `u` series needs about
/// `log(rel_tol) / log|u|` terms, and the binomial sums for `e_k` cancel by
/// up to `(3 + 2 sqrt 2)^k`.
fn initial_bits(zeta: f64, tol_log2: f64) -> usize {
    let root = (1.0 - zeta).sqrt();
    let u = ((1.0 - root) / (1.0 + root)).abs();
    let growth = ((3.0 + 8f64.sqrt()) * u).log2();
    let lost = if u > 0.0 && growth > 0.0 {
        let terms = (tol_log2 - 8.0) / u.log2() + 16.0;
        terms * growth
    } else {
        0.0
    };
    extended::round_bits(lost - tol_log2 + 32.0).max(128)
}

struct ContinuedPass {
    sum: extended::BigSum,
    /// Sum of the magnitudes of every product `b_p 4^p C(..) u^k`.
    abs_total: BigFloat,
    slices_converged: bool,
}

fn continued_pass(
    params: &TripleSeriesParams,
    x: f64,
    y: f64,
    z: f64,
    policy: &TruncationPolicy,
    bits: usize,
) -> Result<Option<ContinuedPass>> {
    let tol_log2 = policy.rel_tol.log2();
    let by = extended::big(y, bits);
    let one = extended::big(1.0, bits);
    let four = extended::big(4.0, bits);
    // R = (1 - x)(1 - y) and zeta = z / R, formed without binary64 rounding
    let big_r = extended::mul(
        &extended::sub(&one, &extended::big(x, bits), bits),
        &extended::sub(&one, &by, bits),
        bits,
    );
    let zeta = extended::div(&extended::big(z, bits), &big_r, bits);
    let root = extended::sub(&one, &zeta, bits).sqrt(bits, astro_float::RoundingMode::ToEven);
    let u = extended::div(
        &extended::sub(&one, &root, bits),
        &extended::add(&one, &root, bits),
        bits,
    );

    let mut m_series = MSeries::new(params, x, bits);
    let mut n_series = NSeries::new(params, y, bits)?;
    let mut out = ContinuedPass {
        sum: extended::BigSum::start(bits),
        abs_total: extended::big(0.0, 64),
        slices_converged: true,
    };
    // b_p 4^p, extended on demand
    let mut scaled: Vec<BigFloat> = Vec::new();
    let mut coef = one.clone();
    let mut coef_exhausted = false;
    let mut u_pow = one.clone();
    let mut small_run = 0;
    for k in 0..policy.max_terms {
        while scaled.len() <= k {
            let p = scaled.len();
            if coef_exhausted {
                scaled.push(extended::big(0.0, bits));
                continue;
            }
            let b = extended::mul(
                &extended::mul(&coef, m_series.get(p)?, bits),
                n_series.get(p)?,
                bits,
            );
            scaled.push(b);
            // coef <- coef * w_{p+1}/w_p * 4R/(p+1)
            let step = extended::mul(&four, &big_r, bits);
            match ratio_step(
                &[&params.b_prime, &params.b_double_prime, &params.c_double_prime],
                &[&params.g_prime, &params.g_double_prime, &params.h_double_prime],
                (0, 0),
                p,
                &step,
                bits,
                "p-weighted",
            )? {
                Some(r) => coef = extended::mul(&coef, &r, bits),
                None => coef_exhausted = true,
            }
        }

        // e_k = sum_p scaled_p (-1)^(k-p) C(k+p-1, k-p)
        let mut e = extended::big(0.0, bits);
        let mut e_abs = extended::big(0.0, 64);
        if k == 0 {
            e = scaled[0].clone();
            e_abs = scaled[0].abs();
        } else {
            // C(k, k-1) = k at p = 1, then
            // C(k+p, k-p-1) / C(k+p-1, k-p) = (k+p)(k-p) / (2p (2p+1))
            let mut binom = extended::big(k as f64, bits);
            for (p, b_p) in scaled.iter().enumerate().take(k + 1).skip(1) {
                let t = extended::mul(b_p, &binom, bits);
                e_abs = extended::add(&e_abs, &t.abs(), 64);
                if (k - p) % 2 == 0 {
                    e = extended::add(&e, &t, bits);
                } else {
                    e = extended::sub(&e, &t, bits);
                }
                if p < k {
                    let (kf, pf) = ((k + p) as f64 * (k - p) as f64, (2 * p) as f64 * (2 * p + 1) as f64);
                    binom = extended::div(
                        &extended::mul(&binom, &extended::big(kf, bits), bits),
                        &extended::big(pf, bits),
                        bits,
                    );
                }
            }
        }
        let term = extended::mul(&e, &u_pow, bits);
        out.abs_total = extended::add(
            &out.abs_total,
            &extended::mul(&e_abs, &u_pow.abs(), 64),
            64,
        );
        out.sum.push(&term, bits);
        if extended::cancellation_bits(&out.sum.value, &out.abs_total) > bits as f64 + tol_log2 - 8.0
        {
            // too few bits are left for rel_tol: widen and start over
            return Ok(None);
        }
        if u.is_zero() {
            out.sum.converged = true;
            out.sum.exact = true;
            break;
        }
        if out.sum.last_is_small(tol_log2) {
            small_run += 1;
            if small_run >= policy.consecutive_small {
                out.sum.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        u_pow = extended::mul(&u_pow, &u, bits);
    }
    out.slices_converged &= m_series.converged && n_series.converged;
    Ok(Some(out))
}

/// Parameters of the single series `F(3)(x, 0, 0)`.
pub(crate) fn m_axis_series(params: &TripleSeriesParams) -> (Vec<f64>, Vec<f64>) {
    let num = [&params.a, &params.b, &params.b_double_prime, &params.c]
        .into_iter()
        .flatten()
        .copied()
        .collect();
    let den = [&params.e, &params.g, &params.g_double_prime, &params.h]
        .into_iter()
        .flatten()
        .copied()
        .collect();
    (num, den)
}

/// `F(3)(x, 0, 0)` as a generalized hypergeometric series in `x`.
pub fn srivastava_f3_m_axis(
    params: &TripleSeriesParams,
    x: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let (num, den) = m_axis_series(params);
    pfq(&num, &den, x, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    pub(crate) fn frustum_params() -> TripleSeriesParams {
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

    fn f2(a: f64, b: f64, c: f64, d: f64, g: f64, x: f64, y: f64) -> AppellF2Args {
        AppellF2Args { a, b, c, d, g, x, y }
    }

    #[test]
    fn appell_f2_examples() {
        let p = TruncationPolicy::default();
        let r = appell_f2(&f2(1.0, 0.5, -0.5, 1.0, 2.0, 0.0, 0.0), &p).unwrap();
        assert_eq!(r.value, 1.0);
        let r = appell_f2(&f2(1.0, 0.5, -0.5, 1.0, 2.0, 0.3, 0.0), &p).unwrap();
        assert!(rel(r.value, 0.7f64.powf(-0.5)) < 1e-12);
        // 200 x 200 rectangular sum at 30 digits
        let r = appell_f2(&f2(1.0, 0.5, -0.5, 1.0, 2.0, 0.64, -0.1024), &p).unwrap();
        assert!(r.converged);
        assert!(rel(r.value, 1.74459777888391753719330503475) < 1e-12);
    }

    #[test]
    fn appell_f2_errors_and_polynomials() {
        let p = TruncationPolicy::default();
        assert!(matches!(
            appell_f2(&f2(1.0, 0.5, -0.5, 1.0, 2.0, 0.6, -0.4), &p),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            appell_f2(&f2(1.0, 0.5, 0.5, -1.0, 2.0, 0.3, 0.1), &p),
            Err(Error::Pole(_))
        ));
        // a = -2: polynomial of total degree 2, fine outside the disc
        let args = f2(-2.0, 0.5, 1.5, 1.0, 2.0, 2.0, 3.0);
        let r = appell_f2(&args, &p).unwrap();
        let (a, b, c, d, g, x, y) = (-2.0, 0.5, 1.5, 1.0, 2.0, 2.0, 3.0);
        let want = 1.0
            + a * b * x / d
            + a * c * y / g
            + a * (a + 1.0) * b * (b + 1.0) * x * x / (d * (d + 1.0) * 2.0)
            + a * (a + 1.0) * b * c * x * y / (d * g)
            + a * (a + 1.0) * c * (c + 1.0) * y * y / (g * (g + 1.0) * 2.0);
        assert!(r.converged);
        assert_eq!(r.error_estimate, 0.0);
        assert!(rel(r.value, want) < 1e-14);
    }

    #[test]
    fn lambda_examples() {
        let params = frustum_params();
        assert_eq!(lambda_coefficient(&params, 0, 0, 0).unwrap(), 1.0);
        assert!(rel(lambda_coefficient(&params, 1, 1, 1).unwrap(), 0.675) < 1e-15);
        let zero_c = TripleSeriesParams {
            c: vec![0.0],
            ..Default::default()
        };
        for m in 1..6 {
            assert_eq!(lambda_coefficient(&zero_c, m, 0, 0).unwrap(), 0.0);
        }
        let pole = TripleSeriesParams {
            h: vec![-1.0],
            ..Default::default()
        };
        assert!(lambda_coefficient(&pole, 2, 0, 0).is_err());
        assert!(lambda_coefficient(&pole, 1, 0, 0).is_ok());
    }

    #[test]
    fn lambda_ratio_recurrences() {
        let params = TripleSeriesParams {
            a: vec![0.3],
            b: vec![1.7],
            e: vec![2.5],
            ..frustum_params()
        };
        for m in 0..4 {
            for n in 0..4 {
                for p in 0..4 {
                    let base = lambda_coefficient(&params, m, n, p).unwrap();
                    for (dir, next) in [
                        (params.m_step(m, n, p), lambda_coefficient(&params, m + 1, n, p)),
                        (params.n_step(m, n, p), lambda_coefficient(&params, m, n + 1, p)),
                        (params.p_step(m, n, p), lambda_coefficient(&params, m, n, p + 1)),
                    ] {
                        let (num, den) = dir;
                        assert!(rel(next.unwrap() / base, num / den) < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn convergence_gate() {
        assert!(check_f3_convergence(&TripleSeriesParams::default()));
        let params = frustum_params();
        assert_eq!(params.counts().convergence_margins(), [0, 0, 0]);
        assert!(check_f3_convergence(&params));
        let unbalanced = TripleSeriesParams {
            a: vec![1.0, 2.0, 3.0],
            ..Default::default()
        };
        assert!(!check_f3_convergence(&unbalanced));
        assert!(matches!(
            srivastava_f3(&unbalanced, 0.1, 0.1, 0.1, &TruncationPolicy::triple_default()),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn srivastava_f3_examples() {
        let p = TruncationPolicy::triple_default();
        let params = frustum_params();
        assert_eq!(srivastava_f3(&params, 0.0, 0.0, 0.0, &p).unwrap().value, 1.0);
        // 90^3 rectangular sum at 30 digits
        let r = srivastava_f3(&params, 0.64, 0.64, -0.1024, &p).unwrap();
        assert!(r.converged);
        assert!(rel(r.value, 5.67245702329362692949998400275) < 1e-11);
        assert!(srivastava_f3(&params, 1.0, 0.1, 0.1, &p).is_err());
    }

    #[test]
    fn srivastava_f3_m_axis_matches_shells() {
        let p = TruncationPolicy::triple_default();
        let params = frustum_params();
        for x in [0.1, 0.55, 0.8] {
            let shells = srivastava_f3(&params, x, 0.0, 0.0, &p).unwrap();
            let single = srivastava_f3_m_axis(&params, x, &p).unwrap();
            assert!(rel(shells.value, single.value) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn continued_f3_matches_shells_inside_the_disc() {
        let p = TruncationPolicy::triple_default();
        let params = frustum_params();
        for (x, y, z) in [
            (0.64, 0.64, -0.1024),
            (0.3, 0.5, -0.2),
            (0.5, 0.8, 0.05),
            (0.0, 0.91, -0.05),
            (0.2, 0.0, 0.3),
        ] {
            let shells = srivastava_f3(&params, x, y, z, &p).unwrap();
            let continued = srivastava_f3_continued(&params, x, y, z, &p).unwrap();
            assert!(shells.converged && continued.converged);
            assert!(
                rel(continued.value, shells.value) < 1e-11,
                "({x}, {y}, {z}): {} vs {}",
                continued.value,
                shells.value
            );
        }
        let r = srivastava_f3_continued(&params, 0.64, 0.64, -0.1024, &p).unwrap();
        assert!(rel(r.value, 5.67245702329362692949998400275) < 1e-12);
    }

    #[test]
    fn continued_f3_beyond_the_disc() {
        let p = TruncationPolicy::triple_default();
        let params = frustum_params();
        // |z| / ((1-x)(1-y)) is about 82 here: the shells stall
        let shells = srivastava_f3(&params, 0.75, 0.99, -0.2046, &p).unwrap();
        assert!(!shells.converged);
        let r = srivastava_f3_continued(&params, 0.75, 0.99, -0.2046, &p).unwrap();
        assert!(r.converged);
        // a looser tolerance lands on the same value
        let loose = srivastava_f3_continued(&params, 0.75, 0.99, -0.2046, &p.with_rel_tol(1e-8))
            .unwrap();
        assert!(rel(loose.value, r.value) < 1e-8);
    }

    #[test]
    fn continued_f3_rejects_unsupported_input() {
        let p = TruncationPolicy::triple_default();
        let params = frustum_params();
        assert!(matches!(
            srivastava_f3_continued(&params, 0.5, 0.5, 0.25, &p),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            srivastava_f3_continued(&params, -0.1, 0.5, 0.1, &p),
            Err(Error::Domain(_))
        ));
        let unbalanced = TripleSeriesParams {
            b_prime: vec![2.0],
            ..frustum_params()
        };
        assert!(matches!(
            srivastava_f3_continued(&unbalanced, 0.5, 0.5, 0.1, &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn seed_integrals_near_the_branch_point() {
        // reference values by 40-digit quadrature of the defining integral
        for (k, y, want) in [
            (2, 0.75, 2.31682673246866669589587321877),
            (3, 0.9, 43.4503204983724286324879384419),
            (3, 0.99738, 72470.3863730044132777122309717),
            (5, 0.999, 249833582356.618900239872265749),
        ] {
            let bits = 256;
            let by = extended::big(y, bits);
            let one = extended::big(1.0, bits);
            let inv = extended::div(&one, &extended::sub(&one, &by, bits), bits);
            let got = extended::to_f64(&seed_integral(k, &by, &inv, bits).unwrap());
            assert!((got - want).abs() <= 1e-14 * want, "I_{k}({y}) = {got}, want {want}");
        }
    }

    #[test]
    fn slice_recurrences_match_direct_sums() {
        let params = frustum_params();
        let bits = 256;
        let mut m = MSeries::new(&params, 0.7, bits);
        assert!(m.gauss.is_some());
        for k in 0..40 {
            let fast = extended::to_f64(m.get(k).unwrap());
            let direct = extended::to_f64(&m.direct(k).unwrap());
            assert!(rel(fast, direct) < 1e-15, "M_{k}");
        }
        let mut n = NSeries::new(&params, 0.9, bits).unwrap();
        assert!(n.shape.is_some());
        for k in 0..40 {
            let fast = extended::to_f64(n.get(k).unwrap());
            let direct = extended::to_f64(&n.direct(k).unwrap());
            assert!(rel(fast, direct) < 1e-15, "N_{k}");
        }
        assert!(NSeries::new(&params, 0.5, bits).unwrap().shape.is_none());
    }
}
