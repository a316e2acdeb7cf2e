//! The Faddeeva function `w(z) = exp(-z^2) erfc(-iz)` from a truncated
//! Fourier expansion of `exp(-t^2/4)`, evaluated in the single-exponential
//! form: per point one complex exponential, `N` rational terms.
//!
//! ```
//! use faddeeva::{eval_w, Complex64, Params64, Preset};
//!
//! let params = Params64::from_preset(Preset::High);
//! let w = eval_w(Complex64::new(1.0, 1.0), &params).unwrap();
//! assert!((w.re - 0.30474420525691259).abs() < 1e-14);
//! ```
//!
//! Everything is generic over [`Real`] (`f32`, `f64`); the aliases below fix
//! the scalar to binary64.

pub mod batch;
mod error;
pub mod kernel;
pub mod params;
mod scalar;
pub mod voigt;
pub mod weideman;

pub use batch::{eval_batch, eval_batch_owned, eval_batch_par};
pub use error::{FaddeevaError, Result};
pub use kernel::{eval_eq1, eval_eq3, eval_w};
pub use num_complex::Complex;
pub use params::{fourier_coefficients, ApproxParams, Preset, GUARD_RADIUS};
pub use scalar::Real;
pub use voigt::{voigt_function, voigt_profile, VoigtLine, LORENTZ_FALLBACK_RATIO};
pub use weideman::{weideman_batch, weideman_coefficients, weideman_w, WeidemanCoeffs};

/// A point `x + iy` or a value of w.
pub type ComplexPoint<T = f64> = Complex<T>;

pub type Complex64 = Complex<f64>;
pub type Complex32 = Complex<f32>;
pub type Params64 = ApproxParams<f64>;
pub type Params32 = ApproxParams<f32>;
pub type Weideman64 = WeidemanCoeffs<f64>;
pub type Weideman32 = WeidemanCoeffs<f32>;
pub type VoigtLine64 = VoigtLine<f64>;
