//! Weideman's rational approximation of w(z), the comparison baseline.
//!
//! With `L = sqrt(M / sqrt 2)` and `Z = (L + iz) / (L - iz)`,
//!
//! ```text
//! w(z) ~ 2 p(Z) / (L - iz)^2 + (1/sqrt(pi)) / (L - iz)
//! ```
//!
//! where `p` is a degree `M - 1` polynomial whose coefficients are the
//! cosine coefficients of `exp(-t^2)(L^2 + t^2)` under `t = L tan(theta/2)`.

use num_complex::Complex;

use crate::error::{FaddeevaError, Result};
use crate::kernel::{domain, mul_i};
use crate::scalar::Real;

pub const DEFAULT_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct WeidemanCoeffs<T> {
    degree: usize,
    l_param: T,
    /// Highest power first.
    poly: Vec<T>,
    transform_residue: T,
}

impl<T: Real> WeidemanCoeffs<T> {
    pub fn new(degree: usize) -> Result<Self> {
        weideman_coefficients(degree)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn l_param(&self) -> T {
        self.l_param
    }

    pub fn poly(&self) -> &[T] {
        &self.poly
    }

    /// Largest imaginary part (scaled like the coefficients) left by the
    /// discrete transform of the real, even samples.
    pub fn transform_residue(&self) -> T {
        self.transform_residue
    }
}

/// Relative accuracy bound used to classify the comparator in reports and
/// to sanity-check benchmark output, for inputs with `0.1 <= y <= 10`.
pub fn accuracy_class(degree: usize) -> f64 {
    match degree {
        d if d >= 32 => 1e-10,
        d if d >= 16 => 1e-4,
        d if d >= 8 => 1e-2,
        _ => 1e-1,
    }
}

pub fn weideman_coefficients<T: Real>(degree: usize) -> Result<WeidemanCoeffs<T>> {
    if degree < 4 || degree % 2 != 0 {
        return Err(FaddeevaError::InvalidParams(format!(
            "Weideman degree must be even and at least 4, got {degree}"
        )));
    }
    let n = degree;
    let m = 2 * n;
    let m2 = 2 * m;
    let l = (T::from_usize(n).unwrap() / T::SQRT_2()).sqrt();
    let m_t = T::from_usize(m).unwrap();

    // Samples on theta_k = k pi / m, k = -m+1..m-1, zero at theta = ±pi,
    // stored with theta = 0 first (periodic order).
    let samples: Vec<T> = (0..m2)
        .map(|j| {
            if j == m {
                return T::zero();
            }
            let k = if j < m { j as f64 } else { j as f64 - m2 as f64 };
            let theta = T::cast(k) * T::PI() / m_t;
            let t = l * (theta / T::cast(2.0)).tan();
            (-t * t).exp() * (l * l + t * t)
        })
        .collect();

    let m2_t = T::from_usize(m2).unwrap();
    let mut cos_coeffs = Vec::with_capacity(n + 1);
    let mut residue = T::zero();
    for freq in 0..=n {
        let (mut re, mut im) = (T::zero(), T::zero());
        for (j, &g) in samples.iter().enumerate() {
            let phase = T::from_usize((j * freq) % m2).unwrap() * T::cast(2.0) * T::PI() / m2_t;
            re = re + g * phase.cos();
            im = im - g * phase.sin();
        }
        cos_coeffs.push(re / m2_t);
        residue = residue.max((im / m2_t).abs());
    }

    let poly: Vec<T> = cos_coeffs[1..=n].iter().rev().copied().collect();
    Ok(WeidemanCoeffs { degree, l_param: l, poly, transform_residue: residue })
}

#[inline]
fn horner<T: Real>(poly: &[T], x: Complex<T>) -> Complex<T> {
    poly.iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * x + c)
}

#[inline]
fn finish<T: Real>(den: Complex<T>, p: Complex<T>) -> Complex<T> {
    let inv_sqrt_pi = T::one() / T::PI().sqrt();
    p.scale(T::cast(2.0)) / (den * den) + Complex::new(inv_sqrt_pi, T::zero()) / den
}

#[inline]
fn check_open_upper<T: Real>(z: Complex<T>) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(z, "argument must be finite"));
    }
    if z.im <= T::zero() {
        return Err(domain(z, "Weideman approximation requires Im z > 0"));
    }
    Ok(())
}

pub fn weideman_w<T: Real>(z: Complex<T>, coeffs: &WeidemanCoeffs<T>) -> Result<Complex<T>> {
    check_open_upper(z)?;
    let l = Complex::new(coeffs.l_param, T::zero());
    let iz = mul_i(z);
    let den = l - iz;
    let mobius = (l + iz) / den;
    Ok(finish(den, horner(&coeffs.poly, mobius)))
}

/// Batch form using the same array discipline as the core evaluator:
/// `A = L - iz`, `B = (L + iz)/A` over the consumed input, `P = p(B)`
/// overwritten by the result.
pub fn weideman_batch_owned<T: Real>(mut zs: Vec<Complex<T>>, coeffs: &WeidemanCoeffs<T>) -> Result<Vec<Complex<T>>> {
    let l = Complex::new(coeffs.l_param, T::zero());
    let mut a = Vec::with_capacity(zs.len());
    for (i, z) in zs.iter().enumerate() {
        check_open_upper(*z).map_err(|e| e.at(i))?;
        a.push(l - mul_i(*z));
    }
    for (z, &den) in zs.iter_mut().zip(&a) {
        *z = (l + mul_i(*z)) / den;
    }
    let mut p: Vec<Complex<T>> = zs.iter().map(|&b| horner(&coeffs.poly, b)).collect();
    drop(zs);
    for (pi, &den) in p.iter_mut().zip(&a) {
        *pi = finish(den, *pi);
    }
    Ok(p)
}

pub fn weideman_batch<T: Real>(zs: &[Complex<T>], coeffs: &WeidemanCoeffs<T>) -> Result<Vec<Complex<T>>> {
    weideman_batch_owned(zs.to_vec(), coeffs)
}
