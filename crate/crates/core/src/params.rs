use std::fmt;
use std::str::FromStr;

use crate::error::{FaddeevaError, Result};
use crate::scalar::{pi_lo, Pair, Real};

/// Radius around the removable singularities `tau_m z = 0` and
/// `tau_m z = ±n pi` inside which the series limits take over.
pub const GUARD_RADIUS: f64 = 1e-6;

/// Named `(tau_m, N)` configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Preset {
    /// `tau_m = 12`, `N = 23`: accuracy at the level of binary64.
    #[default]
    High,
    /// `tau_m = 9`, `N = 12`: fewer terms, roughly 1e-8 relative accuracy.
    Fast,
}

impl Preset {
    pub const fn tau_m(self) -> f64 {
        match self {
            Preset::High => 12.0,
            Preset::Fast => 9.0,
        }
    }

    pub const fn n_terms(self) -> usize {
        match self {
            Preset::High => 23,
            Preset::Fast => 12,
        }
    }

    pub fn params<T: Real>(self) -> ApproxParams<T> {
        ApproxParams::new(T::cast(self.tau_m()), self.n_terms())
            .expect("preset parameters are valid")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::High => "high",
            Preset::Fast => "fast",
        })
    }
}

impl FromStr for Preset {
    type Err = FaddeevaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "high" => Ok(Preset::High),
            "fast" => Ok(Preset::Fast),
            other => Err(FaddeevaError::InvalidParams(format!("unknown preset `{other}`"))),
        }
    }
}

/// Expansion parameters together with the coefficient table
/// `a_n = (2 sqrt(pi) / tau_m) exp(-n^2 pi^2 / tau_m^2)`, `n = 0..=N`.
///
/// Immutable after construction; every evaluator reads the tables
/// precomputed here.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxParams<T> {
    tau_m: T,
    n_terms: usize,
    coefficients: Vec<T>,
    n_pi: Vec<T>,
    n2_pi2: Vec<T>,
    prefactor: T,
    guard: T,
    asymptotic_radius: T,
}

impl<T: Real> ApproxParams<T> {
    pub fn new(tau_m: T, n_terms: usize) -> Result<Self> {
        fourier_coefficients(tau_m, n_terms)
    }

    pub fn tau_m(&self) -> T {
        self.tau_m
    }

    /// The `N` of the sum.
    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    /// `a_0..=a_N`.
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn guard_radius(&self) -> T {
        self.guard
    }

    pub(crate) fn n_pi(&self) -> &[T] {
        &self.n_pi
    }

    pub(crate) fn n2_pi2(&self) -> &[T] {
        &self.n2_pi2
    }

    /// `tau_m / sqrt(pi)`.
    pub(crate) fn prefactor(&self) -> T {
        self.prefactor
    }

    /// Beyond this `|tau_m z|` the square `C = A*A` is no longer safely
    /// representable and the kernel returns its large-argument limit.
    pub(crate) fn asymptotic_radius(&self) -> T {
        self.asymptotic_radius
    }

    /// Returns `(n, sign)` when `A` lies within the guard radius of
    /// `sign * n * pi` for some `1 <= n <= N`.
    #[inline]
    pub(crate) fn singular_index(&self, a: num_complex::Complex<T>) -> Option<(usize, T)> {
        if a.im.abs() >= self.guard {
            return None;
        }
        let k = (a.re.abs() / T::PI()).round();
        let n = k.to_usize()?;
        if n == 0 || n > self.n_terms {
            return None;
        }
        let sign = a.re.signum();
        let eps = num_complex::Complex::new(a.re - sign * self.n_pi[n], a.im);
        (eps.norm() < self.guard).then_some((n, sign))
    }
}

impl ApproxParams<f64> {
    pub fn from_preset(preset: Preset) -> Self {
        preset.params()
    }
}

impl<T: Real> Default for ApproxParams<T> {
    fn default() -> Self {
        Preset::default().params()
    }
}

/// Builds the coefficient table for `(tau_m, n_terms)`.
///
/// The exponent `n^2 pi^2 / tau_m^2` is formed in double-length arithmetic
/// so that each ratio `a_n / a_0` is good to about one ulp even when the
/// exponent is large.
pub fn fourier_coefficients<T: Real>(tau_m: T, n_terms: usize) -> Result<ApproxParams<T>> {
    if !(tau_m.is_finite() && tau_m > T::zero()) {
        return Err(FaddeevaError::InvalidParams(format!(
            "tau_m must be finite and positive, got {tau_m}"
        )));
    }
    if n_terms < 1 {
        return Err(FaddeevaError::InvalidParams("n_terms must be at least 1".into()));
    }

    let two = T::cast(2.0);
    let sqrt_pi = T::PI().sqrt();
    let a0 = two * sqrt_pi / tau_m;
    let pi_lo = pi_lo::<T>();

    let mut coefficients = Vec::with_capacity(n_terms + 1);
    let mut n_pi = Vec::with_capacity(n_terms + 1);
    let mut n2_pi2 = Vec::with_capacity(n_terms + 1);
    for n in 0..=n_terms {
        let nf = T::from_usize(n).expect("term index representable");
        let q = Pair::product(nf, T::PI())
            .add_scalar(nf * pi_lo)
            .div_scalar(tau_m)
            .square();
        // exp(-(hi + lo)) = exp(-hi) * (1 - lo + ...), |lo| << ulp(1)
        let decay = (-q.hi).exp() * (T::one() - q.lo);
        coefficients.push(if n == 0 { a0 } else { a0 * decay });

        let npi = nf * T::PI();
        n_pi.push(npi);
        n2_pi2.push(npi * npi);
    }

    let params = ApproxParams {
        tau_m,
        n_terms,
        coefficients,
        n_pi,
        n2_pi2,
        prefactor: tau_m / sqrt_pi,
        guard: T::cast(GUARD_RADIUS),
        asymptotic_radius: T::max_value().powf(T::cast(0.2)),
    };
    if let Some(bad) = params.coefficients.windows(2).position(|w| !(w[1] < w[0] && w[1] > T::zero())) {
        return Err(FaddeevaError::InvalidParams(format!(
            "coefficient a_{} underflows or fails to decay for tau_m = {tau_m}, N = {n_terms}",
            bad + 1
        )));
    }
    Ok(params)
}
