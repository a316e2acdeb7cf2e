//! Extended-precision reference values of the Faddeeva function
//! `w(z) = exp(-z^2) erfc(-iz)` and grid error scans against them.
//!
//! Two independent evaluations of `erfc(-iz)` are implemented: the
//! Maclaurin series (near the origin and along the real axis) and the
//! Laplace continued fraction (everywhere else in the upper half-plane).
//! In the overlap band `3 <= |z| <= 5` both run and must agree, which
//! certifies the working precision. The lower half-plane follows from
//! `w(z) = 2 exp(-z^2) - w(-z)`.

mod big;
mod methods;
pub mod scan;

use faddeeva::Complex64;
use thiserror::Error;

pub use big::{to_f64, BigComplex, Ctx};
pub use scan::{error_scan, ErrorReport, GridSpec, ReferenceGrid, ScanError};

/// Radius below which the series is the primary method.
pub const SERIES_RADIUS: f64 = 4.0;
/// Near the real axis (`Im z < 1`) the continued fraction converges too
/// slowly; the series stays primary out to this radius.
pub const NEAR_AXIS_SERIES_RADIUS: f64 = 12.0;
/// Band of `|z|` in which both methods run and must agree.
pub const OVERLAP_BAND: (f64, f64) = (3.0, 5.0);
/// Smallest `Im z` for which the continued fraction is run in the band.
pub const OVERLAP_MIN_IM: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle precision must be at least 20 digits, got {0}")]
    InvalidConfig(u32),
    #[error("argument {re}{im:+}i is not finite")]
    NonFinite { re: f64, im: f64 },
    #[error("oracle failed at {re}{im:+}i: {detail}")]
    NonConvergence { re: f64, im: f64, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    digits: u32,
}

impl OracleConfig {
    pub const MIN_DIGITS: u32 = 20;

    pub fn new(digits: u32) -> Result<Self, OracleError> {
        if digits < Self::MIN_DIGITS {
            return Err(OracleError::InvalidConfig(digits));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Relative tolerance `10^-(digits - 4)` the result is certified to.
    pub fn tolerance(&self) -> f64 {
        10f64.powi(-(self.digits as i32 - 4))
    }

    pub(crate) fn bits(&self) -> usize {
        methods::target_bits(self.digits)
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { digits: 30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    ContinuedFraction,
}

/// A reference value of w with the route that produced it.
#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: BigComplex,
    pub method: Method,
    /// Whether the other method also ran and agreed.
    pub cross_checked: bool,
    bits: usize,
}

impl OracleValue {
    pub fn to_c64(&self) -> Complex64 {
        self.value.to_c64()
    }

    /// `|other - self| / |self|`, evaluated in extended precision.
    pub fn rel_diff(&self, other: &OracleValue) -> f64 {
        Ctx::new(self.bits).rel_diff(&other.value, &self.value)
    }

    /// Absolute and relative error of a binary64 approximation.
    pub fn errors_of(&self, approx: Complex64) -> (f64, f64) {
        let ctx = Ctx::new(self.bits);
        let diff = ctx.csub(&ctx.from_c64(approx), &self.value);
        let abs = to_f64(&ctx.norm(&diff));
        let den = to_f64(&ctx.norm(&self.value));
        (abs, abs / den)
    }

    pub fn abs(&self) -> f64 {
        to_f64(&Ctx::new(self.bits).norm(&self.value))
    }
}

/// Which method is primary for an upper half-plane point.
pub fn primary_method(z: Complex64) -> Method {
    let r = z.norm();
    if r <= SERIES_RADIUS || (z.im < 1.0 && r <= NEAR_AXIS_SERIES_RADIUS) {
        Method::Series
    } else {
        Method::ContinuedFraction
    }
}

fn in_overlap_band(z: Complex64) -> bool {
    let r = z.norm();
    r >= OVERLAP_BAND.0 && r <= OVERLAP_BAND.1 && z.im >= OVERLAP_MIN_IM
}

fn upper(z: Complex64, config: &OracleConfig, extra_bits: usize) -> Result<OracleValue, OracleError> {
    let digits = config.digits;
    let run = |m: Method| match m {
        Method::Series => methods::w_series(z, digits, extra_bits),
        Method::ContinuedFraction => methods::w_continued_fraction(z, digits, extra_bits),
    };
    let method = primary_method(z);
    let value = run(method)?;
    let bits = config.bits() + extra_bits;
    let mut cross_checked = false;
    if in_overlap_band(z) {
        let other = run(match method {
            Method::Series => Method::ContinuedFraction,
            Method::ContinuedFraction => Method::Series,
        })?;
        let d = Ctx::new(bits).rel_diff(&other, &value);
        if !(d <= config.tolerance()) {
            return Err(OracleError::NonConvergence {
                re: z.re,
                im: z.im,
                detail: format!("series and continued fraction differ by {d:e}"),
            });
        }
        cross_checked = true;
    }
    Ok(OracleValue { value, method, cross_checked, bits })
}

/// Reference value of `w(z)` good to at least `digits - 4` decimal digits.
pub fn oracle_w(z: Complex64, config: &OracleConfig) -> Result<OracleValue, OracleError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(OracleError::NonFinite { re: z.re, im: z.im });
    }
    if z.im >= 0.0 {
        return upper(z, config, 0);
    }
    // 2 exp(-z^2) can exceed |w| by exp(y^2 - x^2)
    let growth = ((z.im * z.im - z.re * z.re) * std::f64::consts::LOG2_E).max(0.0);
    let extra = growth.ceil() as usize + 16;
    let up = upper(-z, config, extra)?;
    let bits = config.bits() + extra;
    Ok(OracleValue {
        value: methods::reflect(z, &up.value, bits),
        bits,
        ..up
    })
}

/// Evaluates `w(z)` by one named method, without selection or cross-check.
pub fn oracle_w_with(z: Complex64, method: Method, config: &OracleConfig) -> Result<OracleValue, OracleError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(OracleError::NonFinite { re: z.re, im: z.im });
    }
    let value = match method {
        Method::Series => methods::w_series(z, config.digits, 0)?,
        Method::ContinuedFraction => methods::w_continued_fraction(z, config.digits, 0)?,
    };
    Ok(OracleValue { value, method, cross_checked: false, bits: config.bits() })
}

/// Correctly rounded `exp(-n^2 pi^2 / tau_m^2)` for `n = 0..=n_terms`,
/// the exact ratios `a_n / a_0` of the expansion coefficients.
pub fn coefficient_decay_reference(tau_m: f64, n_terms: usize, config: &OracleConfig) -> Vec<f64> {
    let mut ctx = Ctx::new(config.bits() + 32);
    let pi = ctx.pi();
    let tau = ctx.real(tau_m);
    (0..=n_terms)
        .map(|n| {
            let q = ctx.div(&ctx.mul(&ctx.int(n as u64), &pi), &tau);
            let e = ctx.exp(&ctx.mul(&q, &q).neg());
            to_f64(&e)
        })
        .collect()
}

/// Correctly rounded `2 sqrt(pi) / tau_m`.
pub fn leading_coefficient_reference(tau_m: f64, config: &OracleConfig) -> f64 {
    let mut ctx = Ctx::new(config.bits() + 32);
    let s = ctx.sqrt_pi();
    to_f64(&ctx.div(&ctx.mul(&ctx.int(2), &s), &ctx.real(tau_m)))
}
