//! Voigt function and line profiles built on the batch evaluator.

use num_complex::Complex;

use crate::batch::eval_batch_owned;
use crate::error::{FaddeevaError, Result};
use crate::kernel::eval_eq3;
use crate::params::ApproxParams;
use crate::scalar::Real;

/// `doppler_hwhm < LORENTZ_FALLBACK_RATIO * lorentz_hwhm` switches the
/// profile to the closed-form Lorentzian.
pub const LORENTZ_FALLBACK_RATIO: f64 = 1e-8;

/// Spectral line with Gaussian (Doppler) and Lorentzian (pressure)
/// half-widths at half maximum, in the units of the wavenumber grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtLine<T> {
    pub center: T,
    pub strength: T,
    pub doppler_hwhm: T,
    pub lorentz_hwhm: T,
}

impl<T: Real> VoigtLine<T> {
    pub fn new(center: T, strength: T, doppler_hwhm: T, lorentz_hwhm: T) -> Result<Self> {
        let line = Self { center, strength, doppler_hwhm, lorentz_hwhm };
        line.validate()?;
        Ok(line)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(FaddeevaError::InvalidParams(msg.to_string()));
        if ![self.center, self.strength, self.doppler_hwhm, self.lorentz_hwhm]
            .iter()
            .all(|v| v.is_finite())
        {
            return bad("line parameters must be finite");
        }
        if self.strength < T::zero() {
            return bad("strength must be non-negative");
        }
        if self.doppler_hwhm < T::zero() || self.lorentz_hwhm < T::zero() {
            return bad("half-widths must be non-negative");
        }
        if self.doppler_hwhm == T::zero() && self.lorentz_hwhm == T::zero() {
            return bad("both half-widths are zero (delta line)");
        }
        Ok(())
    }

    /// Whether the Doppler width is negligible and the closed-form
    /// Lorentzian is used.
    pub fn is_lorentzian(&self) -> bool {
        self.doppler_hwhm < T::cast(LORENTZ_FALLBACK_RATIO) * self.lorentz_hwhm
    }

    /// Approximate Voigt HWHM (Olivero-Longbothum).
    pub fn combined_hwhm(&self) -> T {
        let l = self.lorentz_hwhm;
        let g = self.doppler_hwhm;
        T::cast(0.5346) * l + (T::cast(0.2166) * l * l + g * g).sqrt()
    }
}

/// `K(x, y) = Re w(x + iy)`.
pub fn voigt_function<T: Real>(x: T, y: T, p: &ApproxParams<T>) -> Result<T> {
    Ok(eval_eq3(Complex::new(x, y), p)?.re)
}

/// Area-normalized Voigt profile of `line` scaled by its strength, sampled
/// on `grid`.
pub fn voigt_profile<T: Real>(grid: &[T], line: &VoigtLine<T>, p: &ApproxParams<T>) -> Result<Vec<T>> {
    line.validate()?;
    if let Some(i) = grid.iter().position(|v| !v.is_finite()) {
        return Err(FaddeevaError::InvalidParams(format!("grid value {i} is not finite")));
    }

    if line.is_lorentzian() {
        let g = line.lorentz_hwhm;
        let norm = line.strength * g / T::PI();
        return Ok(grid
            .iter()
            .map(|&nu| {
                let d = nu - line.center;
                norm / (d * d + g * g)
            })
            .collect());
    }

    let sqrt_ln2 = T::LN_2().sqrt();
    let inv_d = T::one() / line.doppler_hwhm;
    let y = sqrt_ln2 * line.lorentz_hwhm * inv_d;
    let zs: Vec<Complex<T>> = grid
        .iter()
        .map(|&nu| Complex::new(sqrt_ln2 * (nu - line.center) * inv_d, y))
        .collect();
    let scale = line.strength * (T::LN_2() / T::PI()).sqrt() * inv_d;
    Ok(eval_batch_owned(zs, p)?.into_iter().map(|w| scale * w.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Preset;

    fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
        xs.windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    #[test]
    fn voigt_function_reference_values() {
        let p = Preset::High.params::<f64>();
        assert!((voigt_function(0.0, 0.0, &p).unwrap() - 1.0).abs() < 1e-13);
        assert!((voigt_function(1.0, 0.0, &p).unwrap() - (-1.0_f64).exp()).abs() < 1e-8);
        // e * erfc(1), 25 digits
        let k01 = 0.427_583_576_155_807_004_410_750_3;
        assert!((voigt_function(0.0, 1.0, &p).unwrap() - k01).abs() < 1e-12);
        assert!(voigt_function(0.0, -1.0, &p).is_err());
    }

    #[test]
    fn gaussian_limit_peak() {
        let p = Preset::High.params();
        let line = VoigtLine::new(100.0, 1.0, 0.25, 0.0).unwrap();
        let v = voigt_profile(&[100.0], &line, &p).unwrap();
        let peak = (std::f64::consts::LN_2 / std::f64::consts::PI).sqrt() / 0.25;
        assert!((v[0] - peak).abs() < 1e-13 * peak);
    }

    #[test]
    fn lorentzian_fallback() {
        let p = Preset::High.params();
        let line = VoigtLine::new(0.0, 2.0, 1e-12, 0.5).unwrap();
        assert!(line.is_lorentzian());
        let grid = [-1.0, 0.0, 0.3];
        let v = voigt_profile(&grid, &line, &p).unwrap();
        for (nu, val) in grid.iter().zip(v) {
            let expect = 0.5 * 2.0 / (std::f64::consts::PI * (nu * nu + 0.25));
            assert!((val - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_delta_line_and_bad_grid() {
        assert!(VoigtLine::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(VoigtLine::new(0.0, -1.0, 1.0, 0.0).is_err());
        let p = Preset::High.params();
        let line = VoigtLine { center: 0.0, strength: 1.0, doppler_hwhm: 0.0, lorentz_hwhm: 0.0 };
        assert!(voigt_profile(&[0.0], &line, &p).is_err());
        let ok = VoigtLine::new(0.0, 1.0, 1.0, 0.1).unwrap();
        assert!(voigt_profile(&[0.0, f64::NAN], &ok, &p).is_err());
    }

    #[test]
    fn profile_area_is_strength() {
        let p = Preset::High.params();
        for line in [
            VoigtLine::new(1000.0, 1.0, 1.0, 0.0).unwrap(),
            VoigtLine::new(1000.0, 1.0, 1.0, 1e-3).unwrap(),
        ] {
            let half = 50.0 * line.combined_hwhm();
            let n = 200_001;
            let grid: Vec<f64> = (0..n)
                .map(|k| line.center - half + 2.0 * half * k as f64 / (n - 1) as f64)
                .collect();
            let v = voigt_profile(&grid, &line, &p).unwrap();
            let area = trapezoid(&grid, &v);
            assert!((area - 1.0).abs() < 1e-4, "{area}");
        }
    }
}
