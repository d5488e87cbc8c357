//! Brute-force oracles shared by the integration tests. Everything is
//! summed term by term in 256-bit arithmetic, so cancellation in the
//! alternating cases does not reach the compared digits.

#![allow(dead_code)]

use astro_float::{BigFloat, RoundingMode};

const BITS: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn wide(x: f64) -> BigFloat {
    BigFloat::from_f64(x, BITS)
}

fn narrow(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("decimal rendering parses")
}

fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, BITS, RM)
}

fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, BITS, RM)
}

/// `|term| < 2^-200 |sum|`, or both zero.
fn negligible(term: &BigFloat, sum: &BigFloat) -> bool {
    term.is_zero() || (!sum.is_zero() && term.exponent().unwrap() + 200 < sum.exponent().unwrap())
}

/// Rising factorial by a plain product.
fn rising(x: f64, n: usize) -> BigFloat {
    (0..n).fold(wide(1.0), |acc, k| mul(&acc, &wide(x + k as f64)))
}

/// `sum_{r > p} (a)_r (b)_r (c)_r (d)_r z^r / ((e)_r (g)_r (r-p-1)! r!)`,
/// the 4F3 series with a `-p` denominator divided by `Gamma(-p)`.
#[allow(clippy::too_many_arguments)]
pub fn shifted_4f3_sum(a: f64, b: f64, c: f64, d: f64, e: f64, g: f64, p: usize, z: f64) -> f64 {
    let first = p + 1;
    let num = [a, b, c, d].iter().fold(wide(1.0), |acc, &v| mul(&acc, &rising(v, first)));
    let den = [e, g, 1.0].iter().fold(wide(1.0), |acc, &v| mul(&acc, &rising(v, first)));
    let zr = (0..first).fold(wide(1.0), |acc, _| mul(&acc, &wide(z)));
    let mut term = div(&mul(&num, &zr), &den);
    let mut sum = term.clone();
    for r in first..100_000 {
        let k = r as f64;
        let up = [a + k, b + k, c + k, d + k, z].iter().fold(wide(1.0), |acc, &v| mul(&acc, &wide(v)));
        let down = [e + k, g + k, k - p as f64, k + 1.0]
            .iter()
            .fold(wide(1.0), |acc, &v| mul(&acc, &wide(v)));
        term = div(&mul(&term, &up), &down);
        sum = sum.add(&term, BITS, RM);
        if negligible(&term, &sum) {
            break;
        }
    }
    narrow(&sum)
}

fn gauss_2f1_wide(a: f64, b: f64, c: f64, z: f64) -> BigFloat {
    let mut term = wide(1.0);
    let mut sum = wide(1.0);
    for n in 0..1_000_000 {
        let k = n as f64;
        let up = mul(&mul(&wide(a + k), &wide(b + k)), &wide(z));
        term = div(&mul(&term, &up), &mul(&wide(c + k), &wide(k + 1.0)));
        sum = sum.add(&term, BITS, RM);
        if negligible(&term, &sum) {
            break;
        }
    }
    sum
}

/// `2F1(a, b; c; z)` summed term by term.
pub fn gauss_2f1_direct(a: f64, b: f64, c: f64, z: f64) -> f64 {
    narrow(&gauss_2f1_wide(a, b, c, z))
}

/// `F2(a; b, c; d, g; x, y)` as the single sum
/// `sum_n (a)_n (c)_n y^n / ((g)_n n!) 2F1(a + n, b; d; x)`.
pub fn appell_f2_iterated(a: f64, b: f64, c: f64, d: f64, g: f64, x: f64, y: f64) -> f64 {
    let mut weight = wide(1.0);
    let mut sum = wide(0.0);
    for n in 0..1_000_000 {
        let term = mul(&weight, &gauss_2f1_wide(a + n as f64, b, d, x));
        sum = sum.add(&term, BITS, RM);
        if negligible(&term, &sum) {
            break;
        }
        let k = n as f64;
        let up = mul(&mul(&wide(a + k), &wide(c + k)), &wide(y));
        weight = div(&mul(&weight, &up), &mul(&wide(g + k), &wide(k + 1.0)));
    }
    narrow(&sum)
}
