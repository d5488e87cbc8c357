//! Truncation control shared by every series evaluator.
//!
//! A series is summed term by term (or shell by shell for multiple series)
//! until `consecutive_small` successive contributions each satisfy
//! `|term| <= rel_tol * max(|partial sum|, 1)`, or the term budget runs out.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default budget on total degree for double and triple series.
pub const DEFAULT_SHELL_BUDGET: usize = 600;

/// Stopping rule for series summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub rel_tol: f64,
    /// Term budget per summation index. Shell-ordered multiple series read
    /// this as the maximum total degree.
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            rel_tol: 1e-12,
            max_terms: 100_000,
            consecutive_small: 3,
        }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        let policy = TruncationPolicy {
            rel_tol,
            max_terms,
            consecutive_small,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// Default tolerances with the shell budget used for triple series.
    pub fn triple_default() -> Self {
        TruncationPolicy {
            max_terms: DEFAULT_SHELL_BUDGET,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::domain(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        if self.consecutive_small == 0 {
            return Err(Error::domain("consecutive_small must be at least 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// Value and diagnostics of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Terms (or shells) included in `value`.
    pub terms_used: usize,
    /// Magnitude of the last included term or shell; zero when the series
    /// terminated exactly.
    pub error_estimate: f64,
    pub converged: bool,
}

impl SeriesResult {
    pub fn exact(value: f64) -> Self {
        SeriesResult {
            value,
            terms_used: 1,
            error_estimate: 0.0,
            converged: true,
        }
    }

    /// Multiplies value and error estimate by a constant prefactor.
    pub fn scaled(self, factor: f64) -> Self {
        SeriesResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

/// Running sum that applies the stopping rule. Uses Neumaier compensation
/// so that long slowly-decaying series do not accumulate rounding drift.
#[derive(Debug, Clone)]
pub(crate) struct Summation {
    rel_tol: f64,
    needed: usize,
    sum: f64,
    compensation: f64,
    small_run: usize,
    terms: usize,
    last: f64,
}

impl Summation {
    pub(crate) fn new(policy: &TruncationPolicy) -> Self {
        Summation {
            rel_tol: policy.rel_tol,
            needed: policy.consecutive_small,
            sum: 0.0,
            compensation: 0.0,
            small_run: 0,
            terms: 0,
            last: 0.0,
        }
    }

    /// Adds one contribution; returns `true` once the stopping rule holds.
    pub(crate) fn add(&mut self, term: f64) -> bool {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
        self.last = term.abs();
        if self.last <= self.rel_tol * self.value().abs().max(1.0) {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= self.needed
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub(crate) fn terms(&self) -> usize {
        self.terms
    }

    pub(crate) fn finish(&self, converged: bool) -> SeriesResult {
        SeriesResult {
            value: self.value(),
            terms_used: self.terms,
            error_estimate: self.last,
            converged,
        }
    }

    /// The series terminated: every remaining contribution is exactly zero.
    pub(crate) fn finish_exact(&self) -> SeriesResult {
        SeriesResult {
            value: self.value(),
            terms_used: self.terms,
            error_estimate: 0.0,
            converged: true,
        }
    }
}
