//! Scalar evaluation of w(z).
//!
//! Two algebraically equivalent forms of the truncated Fourier expansion are
//! provided. [`eval_eq1`] is the original two-exponential sum, evaluated term
//! by term and refusing the removable singular points. [`eval_eq3`] is the
//! rearranged form that needs a single exponential `B = exp(i tau_m z)` and
//! is the production path; [`eval_w`] extends it to the lower half-plane.

use num_complex::Complex;

use crate::error::{FaddeevaError, Result};
use crate::params::ApproxParams;
use crate::scalar::Real;

#[inline]
pub(crate) fn mul_i<T: Real>(v: Complex<T>) -> Complex<T> {
    Complex::new(-v.im, v.re)
}

/// `exp(i a)` for four arguments, the one transcendental evaluation per
/// point. Lanes are independent.
#[inline]
pub(crate) fn cis_exp4<T: Real>(a: [Complex<T>; 4]) -> [Complex<T>; 4] {
    let (s, c) = T::sincos4(a.map(|v| v.re));
    let mut out = a;
    for k in 0..4 {
        let m = (-a[k].im).exp();
        out[k] = Complex::new(m * c[k], m * s[k]);
    }
    out
}

#[inline]
pub(crate) fn cis_exp<T: Real>(a: Complex<T>) -> Complex<T> {
    let z = Complex::new(T::zero(), T::zero());
    cis_exp4([a, z, z, z])[0]
}

pub(crate) fn domain<T: Real>(z: Complex<T>, reason: &'static str) -> FaddeevaError {
    FaddeevaError::Domain {
        re: z.re.to_f64().unwrap_or(f64::NAN),
        im: z.im.to_f64().unwrap_or(f64::NAN),
        reason,
    }
}

#[inline]
pub(crate) fn check_finite<T: Real>(z: Complex<T>) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(domain(z, "argument must be finite"))
    }
}

#[inline]
fn check_upper<T: Real>(z: Complex<T>) -> Result<()> {
    check_finite(z)?;
    if z.im < T::zero() {
        return Err(domain(z, "imaginary part must be non-negative"));
    }
    Ok(())
}

/// `(exp(iu) - 1) / (iu)` truncated after the `u^4` term.
#[inline]
fn expm1_ratio_series<T: Real>(u: Complex<T>) -> Complex<T> {
    let iu = mul_i(u);
    let one = Complex::new(T::one(), T::zero());
    // Horner in iu: 1 + iu/2 + (iu)^2/6 + (iu)^3/24 + (iu)^4/120
    let c = |k: f64| T::cast(1.0 / k);
    one + iu * (one.scale(c(2.0)) + iu * (one.scale(c(6.0)) + iu * (one.scale(c(24.0)) + iu.scale(c(120.0)))))
}

/// Whether `A` needs none of the special cases of [`combine_one`].
#[inline]
fn is_regular<T: Real>(a: Complex<T>, p: &ApproxParams<T>) -> bool {
    let r = a.norm();
    r >= p.guard_radius() && r <= p.asymptotic_radius() && p.singular_index(a).is_none()
}

/// Combines the work values `A = tau_m z`, `B = exp(iA)`, `C = A*A` of four
/// elements into w. Shared by the scalar and the batch paths so that both
/// produce identical bits; each lane depends on its own inputs only.
///
/// Regular lanes use
///
/// ```text
/// sum_n a_n ((-1)^n B - 1) / (n^2 pi^2 - C) = B (E - O) - (E + O)
/// ```
///
/// with `E`, `O` the even and odd partial sums of `a_n / (n^2 pi^2 - C)`,
/// one real division per term. The rest go through [`combine_one`].
#[inline]
pub(crate) fn combine4<T: Real>(
    a: [Complex<T>; 4],
    b: [Complex<T>; 4],
    c: [Complex<T>; 4],
    p: &ApproxParams<T>,
) -> [Complex<T>; 4] {
    let an = p.coefficients();
    let n2_pi2 = p.n2_pi2();
    let zero = T::zero();
    let cr = c.map(|v| v.re);
    let ci = c.map(|v| v.im);

    // (re, im) accumulators of the even and odd partial sums
    let mut acc = [[[zero; 4]; 2]; 2];
    for n in 1..=p.n_terms() {
        let parity = n % 2;
        let mut re = acc[parity][0];
        let mut im = acc[parity][1];
        for k in 0..4 {
            // a_n / den = a_n conj(den) / |den|^2
            let dr = n2_pi2[n] - cr[k];
            let di = ci[k];
            let s = an[n] / (dr * dr + di * di);
            re[k] = re[k] + s * dr;
            im[k] = im[k] + s * di;
        }
        acc[parity] = [re, im];
    }
    let [even, odd] = acc;

    let one = Complex::new(T::one(), zero);
    let mut out = c;
    for k in 0..4 {
        if !is_regular(a[k], p) {
            out[k] = combine_one(a[k], b[k], c[k], p);
            continue;
        }
        let e = Complex::new(even[0][k], even[1][k]);
        let o = Complex::new(odd[0][k], odd[1][k]);
        let sum = b[k] * (e - o) - (e + o);
        let lead = mul_i((one - b[k]) / a[k]);
        out[k] = lead + mul_i(a[k] * sum).scale(p.prefactor());
    }
    out
}

/// Single-element combination covering the guarded and asymptotic cases.
pub(crate) fn combine_one<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    p: &ApproxParams<T>,
) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let an = p.coefficients();
    let n2_pi2 = p.n2_pi2();

    let a_norm = a.norm();
    if a_norm > p.asymptotic_radius() {
        // |z| so large that C overflows; w ~ i / (sqrt(pi) z)
        return mul_i(a.inv()).scale(p.prefactor());
    }

    let lead = if a_norm < p.guard_radius() {
        expm1_ratio_series(a)
    } else {
        mul_i((one - b) / a)
    };

    let neg_b = -b;
    let mut sum = Complex::new(T::zero(), T::zero());
    match p.singular_index(a) {
        None => {
            for n in 1..=p.n_terms() {
                let signed_b = if n % 2 == 0 { b } else { neg_b };
                let den = Complex::new(n2_pi2[n] - c.re, -c.im);
                sum = sum + ((signed_b - one) / den).scale(an[n]);
            }
        }
        Some((m, sign)) => {
            for n in 1..=p.n_terms() {
                let term = if n == m {
                    // A = sign*m*pi + eps:  ((-1)^m B - 1)/(m^2 pi^2 - C)
                    //                     = -i E(eps) / (2 sign m pi + eps)
                    let two_npi = (p.n_pi()[m] + p.n_pi()[m]) * sign;
                    let eps = Complex::new(a.re - sign * p.n_pi()[m], a.im);
                    -mul_i(expm1_ratio_series(eps) / (eps + two_npi))
                } else {
                    let signed_b = if n % 2 == 0 { b } else { neg_b };
                    let den = Complex::new(n2_pi2[n] - c.re, -c.im);
                    (signed_b - one) / den
                };
                sum = sum + term.scale(an[n]);
            }
        }
    }

    lead + mul_i(a * sum).scale(p.prefactor())
}

#[inline]
pub(crate) fn eq3_unchecked<T: Real>(z: Complex<T>, p: &ApproxParams<T>) -> Complex<T> {
    let a = z.scale(p.tau_m());
    let b = cis_exp(a);
    let c = a * a;
    let pad = Complex::new(T::one(), T::one());
    combine4([a, pad, pad, pad], [b, pad, pad, pad], [c, pad, pad, pad], p)[0]
}

/// `w(z) = 2 exp(-z^2) - w(-z)` given `w(-z)`.
#[inline]
pub(crate) fn reflect<T: Real>(z: Complex<T>, w_neg: Complex<T>) -> Result<Complex<T>> {
    let two_e = (-(z * z)).exp().scale(T::cast(2.0));
    let w = two_e - w_neg;
    if two_e.re.is_finite() && two_e.im.is_finite() && w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(FaddeevaError::Overflow {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Single-exponential form, upper half-plane.
///
/// The removable singularities at `tau_m z = 0` and `tau_m z = ±n pi`
/// (`n <= N`) are replaced by series limits inside the guard radius, so the
/// result is finite for every finite `z` with `z.im >= 0`.
pub fn eval_eq3<T: Real>(z: Complex<T>, p: &ApproxParams<T>) -> Result<Complex<T>> {
    check_upper(z)?;
    Ok(eq3_unchecked(z, p))
}

/// w(z) on the whole plane: [`eval_eq3`] above the real axis, the
/// reflection identity below it.
pub fn eval_w<T: Real>(z: Complex<T>, p: &ApproxParams<T>) -> Result<Complex<T>> {
    check_finite(z)?;
    if z.im >= T::zero() {
        Ok(eq3_unchecked(z, p))
    } else {
        reflect(z, eq3_unchecked(-z, p))
    }
}

/// The two-exponential sum evaluated exactly as written, `2(N+1)+1`
/// complex exponentials per point. No singularity handling: inputs whose
/// `tau_m z` falls within the guard radius of `0` or `±n pi` are rejected.
pub fn eval_eq1<T: Real>(z: Complex<T>, p: &ApproxParams<T>) -> Result<Complex<T>> {
    check_upper(z)?;
    let tau = p.tau_m();
    let tz = z.scale(tau);
    let guard = p.guard_radius();
    if tz.norm() < guard {
        return Err(domain(z, "tau_m z within the guard radius of 0"));
    }
    for &npi in &p.n_pi()[1..] {
        if (tz - npi).norm() < guard || (tz + npi).norm() < guard {
            return Err(domain(z, "tau_m z within the guard radius of a pole n pi"));
        }
    }

    let one = Complex::new(T::one(), T::zero());
    let an = p.coefficients();
    let mut sum = Complex::new(T::zero(), T::zero());
    for (n, &npi) in p.n_pi().iter().enumerate() {
        let plus = tz + npi; // n pi + tau z
        let minus = -(tz - npi); // n pi - tau z
        let e_plus = mul_i(plus).exp();
        let e_minus = mul_i(tz - npi).exp();
        let bracket = (one - e_plus) / plus - (one - e_minus) / minus;
        sum = sum + bracket.scale(an[n] * tau);
    }
    sum = sum - ((one - mul_i(tz).exp()) / z).scale(an[0]);
    let scale = T::one() / (T::cast(2.0) * T::PI().sqrt());
    Ok(mul_i(sum).scale(scale))
}
